// Command-line front end: simulate | compare | bench | selftest.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "lie_iekf/error.hpp"
#include "lie_iekf/harness.hpp"
#include "lie_iekf/selftest.hpp"

namespace {

using namespace lie_iekf;

struct CommonFlags {
  std::string config_path;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::string> filter;
  std::optional<std::string> noise_mode;
  std::string out_dir = ".";
};

void add_common(CLI::App* app, CommonFlags& flags) {
  app->add_option("--config", flags.config_path, "JSON configuration file");
  app->add_option("--runs", flags.runs, "Monte-Carlo run count");
  app->add_option("--seed", flags.seed, "Master RNG seed");
  app->add_option("--dt", flags.dt, "Integration step [s]");
  app->add_option("--horizon", flags.horizon, "Simulated duration [s]");
  app->add_option("--filter", flags.filter, "iekf | ekf | both");
  app->add_option("--noise-mode", flags.noise_mode, "per_sample | white_scaled");
  app->add_option("--out", flags.out_dir, "Output directory");
}

SimConfig build_config(const CommonFlags& flags) {
  SimConfig cfg;
  if (!flags.config_path.empty()) cfg = load_config(flags.config_path);
  if (flags.runs) cfg.runs = *flags.runs;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.dt) cfg.dt = *flags.dt;
  if (flags.horizon) cfg.horizon = *flags.horizon;
  if (flags.filter) cfg.filter = parse_filter_selection(*flags.filter);
  if (flags.noise_mode) cfg.noise_mode = parse_noise_mode(*flags.noise_mode);
  cfg.validate();
  return cfg;
}

std::filesystem::path output_dir(const CommonFlags& flags) {
  std::filesystem::path dir(flags.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

nlohmann::json summarize(const FilterSeries& fs, const MseSeries& series) {
  nlohmann::json j;
  j["runs_used"] = fs.timing.samples;
  j["diverged"] = fs.diverged;
  j["initial_mse"] = fs.mse.empty() ? 0.0 : fs.mse.front();
  const double end = series.time.empty() ? 0.0 : series.time.back();
  if (end >= 2.0) j["transient_mean_0_2"] = window_mean(series.time, fs.mse, 0.0, 2.0);
  if (end >= 9.0) j["steady_mean_6_9"] = window_mean(series.time, fs.mse, 6.0, 9.0);
  j["max_manifold_violation"] = fs.max_manifold_violation;
  return j;
}

int cmd_compare(const CommonFlags& flags) {
  const SimConfig cfg = build_config(flags);
  const MseSeries series = run_monte_carlo(cfg);
  const auto dir = output_dir(flags);
  write_mse_csv(series, (dir / "mse.csv").string());

  nlohmann::json summary;
  summary["runs"] = cfg.runs;
  summary["seed"] = cfg.seed;
  summary["noise_mode"] = std::string(to_string(cfg.noise_mode));
  for (const FilterSeries* fs : {series.find(FilterKind::Iekf), series.find(FilterKind::Ekf)}) {
    if (!fs) continue;
    summary[std::string(to_string(fs->kind))] = summarize(*fs, series);
  }
  std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_bench(const CommonFlags& flags) {
  const SimConfig cfg = build_config(flags);
  // Serial execution keeps per-run timings free of scheduler contention.
  const MseSeries series = run_monte_carlo(cfg, 1);
  const auto dir = output_dir(flags);
  write_timing_csv(series, (dir / "timing.csv").string());
  for (const FilterSeries* fs : {series.find(FilterKind::Iekf), series.find(FilterKind::Ekf)}) {
    if (!fs) continue;
    std::printf("%-4s median %.6f s  mean %.6f s  over %zu runs\n", std::string(to_string(fs->kind)).c_str(),
                fs->timing.median, fs->timing.mean, fs->timing.samples);
  }
  return 0;
}

int cmd_simulate(const CommonFlags& flags, std::size_t run) {
  const SimConfig cfg = build_config(flags);
  const PlantTrajectory plant = simulate_plant(cfg, run);
  const auto dir = output_dir(flags);
  for (FilterKind f : selected_filters(cfg.filter)) {
    const RunResult r = run_filter(cfg, f, plant, run, true);
    const std::string name = f == FilterKind::Iekf ? "trajectory_iekf.csv" : "trajectory_ekf.csv";
    std::ofstream out(dir / name);
    out << "Time";
    for (const char* p : {"X", "Z"}) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out << ',' << p << i << j;
      out << ',' << (p[0] == 'X' ? "Omega" : "omega") << "1," << (p[0] == 'X' ? "Omega" : "omega") << "2,"
          << (p[0] == 'X' ? "Omega" : "omega") << "3";
    }
    out << ",SqErr\n";
    for (std::size_t k = 0; k < r.orientation.size(); ++k) {
      const PlantState& s = plant.states[k];
      out << format_double(static_cast<double>(k) * cfg.dt);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out << ',' << format_double(s.X.matrix()(i, j));
      for (int i = 0; i < 3; ++i) out << ',' << format_double(s.omega(i));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out << ',' << format_double(r.orientation[k](i, j));
      for (int i = 0; i < 3; ++i) out << ',' << format_double(r.omega[k](i));
      out << ',' << format_double(squared_error(s.X.matrix(), s.omega, r.orientation[k], r.omega[k])) << '\n';
    }
    if (r.diverged) std::cerr << to_string(f) << " diverged: " << r.divergence_reason << '\n';
    std::cout << "wrote " << (dir / name).string() << '\n';
  }
  return 0;
}

int cmd_selftest() {
  bool ok = true;
  for (const SelfCheck& c : run_selftest()) {
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << '\n';
    ok = ok && c.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant EKF on SO(3): simulation, Monte-Carlo comparison and benchmarks"};
  app.require_subcommand(1);

  CommonFlags sim_flags, cmp_flags, bench_flags;
  std::size_t run_index = 0;
  auto* simulate = app.add_subcommand("simulate", "Run one realization and dump trajectories");
  add_common(simulate, sim_flags);
  simulate->add_option("--run", run_index, "Run index");
  auto* compare = app.add_subcommand("compare", "Monte-Carlo MSE of both filters to CSV");
  add_common(compare, cmp_flags);
  auto* bench = app.add_subcommand("bench", "Per-run filter wall time to CSV");
  add_common(bench, bench_flags);
  auto* selftest = app.add_subcommand("selftest", "Run the built-in property checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(sim_flags, run_index);
    if (compare->parsed()) return cmd_compare(cmp_flags);
    if (bench->parsed()) return cmd_bench(bench_flags);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
