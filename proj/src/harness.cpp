#include "lie_iekf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <thread>

#include "lie_iekf/error.hpp"
#include "lie_iekf/noise.hpp"

namespace lie_iekf {

std::string_view to_string(FilterKind kind) { return kind == FilterKind::Iekf ? "IEKF" : "EKF"; }

std::vector<FilterKind> selected_filters(FilterSelection selection) {
  switch (selection) {
    case FilterSelection::Iekf:
      return {FilterKind::Iekf};
    case FilterSelection::Ekf:
      return {FilterKind::Ekf};
    case FilterSelection::Both:
      break;
  }
  return {FilterKind::Iekf, FilterKind::Ekf};
}

StageMeasurements PlantTrajectory::measurement(std::size_t step) const {
  const Mat3& noise = measurement_noise[step].matrix();
  std::array<Mat3, 4> y;
  for (std::size_t s = 0; s < 4; ++s) y[s] = stage_orientation[step][s] * noise;
  return StageMeasurements::at_stages(y);
}

Rot3 PlantTrajectory::sample(std::size_t step) const { return states[step].X * measurement_noise[step]; }

PlantTrajectory simulate_plant(const SimConfig& cfg, std::size_t run) {
  const Inertia inertia = Inertia::diagonal(cfg.inertia_diag);
  const ControlFn control = [&inertia](double t) { return reference_control(inertia, t); };
  const std::size_t steps = cfg.steps();

  const InitialSample init = sample_initial(cfg, run);
  PlantState state{exp_so3(init.v0), cfg.plant_initial_omega_mean + init.w0, 0.0};

  PlantTrajectory traj;
  traj.states.reserve(steps + 1);
  traj.stage_orientation.reserve(steps);
  traj.measurement_noise.reserve(steps);
  traj.states.push_back(state);
  for (std::size_t k = 0; k < steps; ++k) {
    const NoiseSample noise = sample_noise(cfg, run, k);
    traj.measurement_noise.push_back(exp_so3(noise.v));
    PlantStep step = plant_step_stages(state, inertia, control, noise.w, cfg.dt);
    traj.stage_orientation.push_back(step.stage_orientation);
    // Keep the time grid exact rather than accumulated.
    step.next.t = static_cast<double>(k + 1) * cfg.dt;
    state = step.next;
    traj.states.push_back(state);
  }
  return traj;
}

double squared_error(const Mat3& plant_x, const Vec3& plant_omega, const Mat3& est_x, const Vec3& est_omega) {
  return (plant_x - est_x).squaredNorm() + (plant_omega - est_omega).squaredNorm();
}

namespace {

using Clock = std::chrono::steady_clock;

const Vec3& state_omega(const IekfState& s) { return s.eta; }
const Vec3& state_omega(const EkfState& s) { return s.omega; }

// Steps the filter through the plant trajectory, recording the error before
// every step. The filter clock is pinned to the plant's exact grid k * dt.
template <typename State, typename Step, typename Orientation>
void drive(RunResult& out, const PlantTrajectory& plant, double dt, State state, Step&& step,
           Orientation&& orientation, bool record) {
  const std::size_t steps = plant.steps();
  out.squared_error.reserve(steps);
  Clock::duration elapsed{};
  try {
    for (std::size_t k = 0; k < steps; ++k) {
      const Mat3 z = orientation(state);
      out.squared_error.push_back(
          squared_error(plant.states[k].X.matrix(), plant.states[k].omega, z, state_omega(state)));
      out.max_manifold_violation = std::max(out.max_manifold_violation, manifold_violation(z));
      if (record) {
        out.orientation.push_back(z);
        out.omega.push_back(state_omega(state));
      }
      const StageMeasurements y = plant.measurement(k);
      const auto start = Clock::now();
      state = step(state, y);
      elapsed += Clock::now() - start;
      state.t = static_cast<double>(k + 1) * dt;
    }
    const Mat3 z = orientation(state);
    out.final_squared_error = squared_error(plant.states[steps].X.matrix(), plant.states[steps].omega, z,
                                            state_omega(state));
    out.max_manifold_violation = std::max(out.max_manifold_violation, manifold_violation(z));
    out.asymmetry_warnings = state.asymmetry_warnings;
    if (record) {
      out.orientation.push_back(z);
      out.omega.push_back(state_omega(state));
    }
  } catch (const Error& e) {
    out.diverged = true;
    out.divergence_reason = e.what();
  }
  out.wall_seconds = std::chrono::duration<double>(elapsed).count();
}

}  // namespace

RunResult run_filter(const SimConfig& cfg, FilterKind filter, const PlantTrajectory& plant, std::size_t run,
                     bool record) {
  const Inertia inertia = Inertia::diagonal(cfg.inertia_diag);
  const DynamicsModel model =
      rigid_body_model(inertia, [inertia](double t) { return reference_control(inertia, t); });
  const double dt = cfg.dt;

  RunResult out;
  out.filter = filter;
  out.run = run;
  if (filter == FilterKind::Iekf) {
    const IekfNoise noise = IekfNoise::isotropic(cfg.q_scale, cfg.r_scale);
    IekfState state;
    state.h = Rot3::from_matrix(cfg.filter_initial_orientation);
    state.eta = cfg.filter_initial_omega;
    state.sigma.setZero();
    state.sigma.topLeftCorner<3, 3>() = cfg.sigma0_orientation * Mat3::Identity();
    state.sigma.bottomRightCorner<3, 3>() = cfg.sigma0_velocity * Mat3::Identity();
    drive(
        out, plant, dt, state,
        [&](const IekfState& s, const StageMeasurements& y) { return iekf_step(s, y, model, noise, dt); },
        [](const IekfState& s) { return s.h.matrix(); }, record);
  } else {
    const EkfNoise noise(cfg.q_scale * Mat3::Identity(), cfg.ekf_measurement_var * LinOp<9, 9>::Identity());
    EkfState state;
    state.X = cfg.filter_initial_orientation;
    state.omega = cfg.filter_initial_omega;
    state.P = ekf_initial_covariance(cfg.sigma0_orientation, cfg.sigma0_velocity);
    drive(
        out, plant, dt, state,
        [&](const EkfState& s, const StageMeasurements& y) { return ekf_step(s, y, model, noise, dt); },
        [](const EkfState& s) { return s.X; }, record);
  }
  return out;
}

RunResult run_single(const SimConfig& cfg, FilterKind filter, std::size_t run, bool record) {
  cfg.validate();
  return run_filter(cfg, filter, simulate_plant(cfg, run), run, record);
}

const FilterSeries* MseSeries::find(FilterKind kind) const {
  const auto& slot = kind == FilterKind::Iekf ? iekf : ekf;
  return slot ? &*slot : nullptr;
}

unsigned resolve_thread_count(unsigned requested) {
  if (requested == 0) {
    if (const char* env = std::getenv("LIE_IEKF_THREADS")) {
      char* end = nullptr;
      const long value = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || value < 0) {
        throw ConfigError("LIE_IEKF_THREADS", "expected a non-negative integer");
      }
      requested = static_cast<unsigned>(value);
    }
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

namespace {

struct Accumulator {
  std::vector<double> sum;
  std::vector<double> wall;
  std::size_t diverged = 0;
  double max_manifold_violation = 0.0;

  void add(const RunResult& r) {
    if (r.diverged) {
      ++diverged;
      return;
    }
    if (sum.empty()) sum.assign(r.squared_error.size(), 0.0);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += r.squared_error[k];
    wall.push_back(r.wall_seconds);
    max_manifold_violation = std::max(max_manifold_violation, r.max_manifold_violation);
  }

  FilterSeries finish(FilterKind kind, std::size_t steps) const {
    if (wall.empty()) {
      throw Error(std::string("run_monte_carlo: every ") + std::string(to_string(kind)) + " run diverged");
    }
    FilterSeries out;
    out.kind = kind;
    out.diverged = diverged;
    out.max_manifold_violation = max_manifold_violation;
    const double n = static_cast<double>(wall.size());
    out.mse.resize(steps);
    for (std::size_t k = 0; k < steps; ++k) out.mse[k] = sum.empty() ? 0.0 : sum[k] / n;

    std::vector<double> sorted = wall;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    out.timing.median = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    out.timing.mean = std::accumulate(wall.begin(), wall.end(), 0.0) / n;
    out.timing.samples = m;
    return out;
  }
};

}  // namespace

MseSeries run_monte_carlo(const SimConfig& cfg, unsigned threads) {
  cfg.validate();
  const std::size_t steps = cfg.steps();
  const std::vector<FilterKind> filters = selected_filters(cfg.filter);
  const unsigned workers = resolve_thread_count(threads);

  std::vector<Accumulator> acc(filters.size());
  constexpr std::size_t kBatch = 256;
  for (std::size_t begin = 0; begin < cfg.runs; begin += kBatch) {
    const std::size_t count = std::min(kBatch, cfg.runs - begin);
    std::vector<std::vector<RunResult>> batch(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    const auto work = [&]() {
      for (std::size_t i = next.fetch_add(1); i < count && !failed; i = next.fetch_add(1)) {
        try {
          const std::size_t run = cfg.run_offset + begin + i;
          const PlantTrajectory plant = simulate_plant(cfg, run);
          for (FilterKind f : filters) batch[i].push_back(run_filter(cfg, f, plant, run));
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    };
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (n_threads <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(n_threads);
      for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t f = 0; f < filters.size(); ++f) acc[f].add(batch[i][f]);
    }
  }

  MseSeries series;
  series.dt = cfg.dt;
  series.runs = cfg.runs;
  series.time.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) series.time[k] = static_cast<double>(k) * cfg.dt;
  for (std::size_t f = 0; f < filters.size(); ++f) {
    FilterSeries fs = acc[f].finish(filters[f], steps);
    (filters[f] == FilterKind::Iekf ? series.iekf : series.ekf) = std::move(fs);
  }
  return series;
}

double window_mean(const std::vector<double>& time, const std::vector<double>& values, double t0, double t1) {
  constexpr double kSlack = 1e-9;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < time.size() && k < values.size(); ++k) {
    if (time[k] >= t0 - kSlack && time[k] <= t1 + kSlack) {
      sum += values[k];
      ++n;
    }
  }
  if (n == 0) throw Error("window_mean: no samples in window");
  return sum / static_cast<double>(n);
}

}  // namespace lie_iekf
