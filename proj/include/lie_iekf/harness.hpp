#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lie_iekf/ekf.hpp"
#include "lie_iekf/iekf.hpp"
#include "lie_iekf/measurement.hpp"
#include "lie_iekf/rigid_body.hpp"
#include "lie_iekf/sim_config.hpp"

namespace lie_iekf {

enum class FilterKind { Iekf, Ekf };

std::string_view to_string(FilterKind kind);
std::vector<FilterKind> selected_filters(FilterSelection selection);

/// One realization of the plant over the horizon. Step k covers
/// [t_k, t_{k+1}]; its measurement at RK4 stage s is
/// stage_orientation[k][s] * exp(v_k).
struct PlantTrajectory {
  std::vector<PlantState> states;                        // steps() + 1 entries
  std::vector<std::array<Mat3, 4>> stage_orientation;    // steps() entries
  std::vector<Rot3> measurement_noise;                   // exp(v_k), steps() entries

  std::size_t steps() const { return stage_orientation.size(); }
  StageMeasurements measurement(std::size_t step) const;
  /// The sampled measurement Y_k = X_k exp(v_k).
  Rot3 sample(std::size_t step) const;
};

PlantTrajectory simulate_plant(const SimConfig& cfg, std::size_t run);

/// ||X - Z||_F^2 + ||Omega - omega||^2
double squared_error(const Mat3& plant_x, const Vec3& plant_omega, const Mat3& est_x, const Vec3& est_omega);

struct RunResult {
  FilterKind filter = FilterKind::Iekf;
  std::size_t run = 0;
  // Entry k is the error at t_k = k dt, before step k.
  std::vector<double> squared_error;
  double final_squared_error = 0.0;
  // Wall time spent inside filter steps only.
  double wall_seconds = 0.0;
  bool diverged = false;
  std::string divergence_reason;
  // max_k ||Z_k^T Z_k - I||_F over the run.
  double max_manifold_violation = 0.0;
  std::size_t asymmetry_warnings = 0;
  // Filled only when recording is requested: steps() + 1 entries.
  std::vector<Mat3> orientation;
  std::vector<Vec3> omega;
};

RunResult run_filter(const SimConfig& cfg, FilterKind filter, const PlantTrajectory& plant, std::size_t run,
                     bool record = false);

/// Simulates the plant for `run` and runs `filter` on it.
RunResult run_single(const SimConfig& cfg, FilterKind filter, std::size_t run, bool record = false);

struct TimingStats {
  double median = 0.0;
  double mean = 0.0;
  std::size_t samples = 0;
};

struct FilterSeries {
  FilterKind kind = FilterKind::Iekf;
  std::vector<double> mse;
  TimingStats timing;
  std::size_t diverged = 0;
  double max_manifold_violation = 0.0;
};

struct MseSeries {
  double dt = 0.0;
  std::vector<double> time;
  std::size_t runs = 0;
  std::optional<FilterSeries> iekf;
  std::optional<FilterSeries> ekf;

  const FilterSeries* find(FilterKind kind) const;
};

/// Worker count from LIE_IEKF_THREADS when `requested` is 0; the variable's
/// own 0 (or absence) means hardware concurrency.
unsigned resolve_thread_count(unsigned requested = 0);

/// Runs cfg.runs Monte-Carlo realizations (indices run_offset onward) for
/// every selected filter. Per-run results are reduced in run-index order, so
/// the output is bit-identical for any worker count. Divergent runs are
/// excluded and counted; throws lie_iekf::Error if every run of a filter
/// diverged.
MseSeries run_monte_carlo(const SimConfig& cfg, unsigned threads = 0);

/// Mean of `values` over samples with t0 <= time <= t1.
double window_mean(const std::vector<double>& time, const std::vector<double>& values, double t0, double t1);

// CSV surfaces consumed by the plotting script.
//   MSE:    header "Time,InvMSE,ExtMSE", one row per time sample. A filter
//           that was not run leaves its column empty.
//   timing: header "Filter,ComTime", one row per filter (median seconds).
void write_mse_csv(const MseSeries& series, const std::string& path);
void write_timing_csv(const MseSeries& series, const std::string& path);
/// Writes `<dir>/mse.csv` and `<dir>/timing.csv`.
void write_csv(const MseSeries& series, const std::string& dir);

struct MseTable {
  std::vector<double> time;
  std::vector<double> inv_mse;
  std::vector<double> ext_mse;  // NaN where the column was empty
};

MseTable read_mse_csv(const std::string& path);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace lie_iekf
