#include "lie_iekf/sim_config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lie_iekf/error.hpp"

namespace lie_iekf {

using nlohmann::json;

std::string_view to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::PerSample:
      return "per_sample";
    case NoiseMode::WhiteScaled:
      return "white_scaled";
  }
  return "unknown";
}

std::string_view to_string(FilterSelection selection) {
  switch (selection) {
    case FilterSelection::Iekf:
      return "iekf";
    case FilterSelection::Ekf:
      return "ekf";
    case FilterSelection::Both:
      return "both";
  }
  return "unknown";
}

NoiseMode parse_noise_mode(std::string_view text) {
  if (text == "per_sample") return NoiseMode::PerSample;
  if (text == "white_scaled") return NoiseMode::WhiteScaled;
  throw ConfigError("noise_mode", "expected per_sample or white_scaled, got '" + std::string(text) + "'");
}

FilterSelection parse_filter_selection(std::string_view text) {
  if (text == "iekf") return FilterSelection::Iekf;
  if (text == "ekf") return FilterSelection::Ekf;
  if (text == "both") return FilterSelection::Both;
  throw ConfigError("filter", "expected iekf, ekf or both, got '" + std::string(text) + "'");
}

std::size_t SimConfig::steps() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

namespace {

void require(bool ok, const char* field, const char* message) {
  if (!ok) throw ConfigError(field, message);
}

bool finite_vec(const Vec3& v) { return v.allFinite(); }

}  // namespace

void SimConfig::validate() const {
  require(std::isfinite(dt) && dt > 0.0, "dt", "must be positive");
  require(std::isfinite(horizon) && horizon > 0.0, "horizon", "must be positive");
  require(std::abs(static_cast<double>(steps()) * dt - horizon) <= 1e-9 * std::max(1.0, horizon), "horizon",
          "must be an integer multiple of dt");
  require(runs >= 1, "runs", "must be at least 1");
  require(finite_vec(inertia_diag) && (inertia_diag.array() > 0.0).all(), "inertia_diag",
          "entries must be positive");
  require(std::isfinite(q_scale) && q_scale >= 0.0, "q_scale", "must be non-negative");
  require(std::isfinite(r_scale) && r_scale > 0.0, "r_scale", "must be positive");
  require(std::isfinite(sigma0_orientation) && sigma0_orientation >= 0.0, "sigma0_orientation",
          "must be non-negative");
  require(std::isfinite(sigma0_velocity) && sigma0_velocity >= 0.0, "sigma0_velocity", "must be non-negative");
  require(std::isfinite(plant_initial_orientation_var) && plant_initial_orientation_var >= 0.0,
          "plant_initial_orientation_var", "must be non-negative");
  require(std::isfinite(plant_initial_omega_var) && plant_initial_omega_var >= 0.0, "plant_initial_omega_var",
          "must be non-negative");
  require(std::isfinite(ekf_measurement_var) && ekf_measurement_var > 0.0, "ekf_measurement_var",
          "must be positive");
  require(finite_vec(filter_initial_omega), "filter_initial_omega", "must be finite");
  require(finite_vec(plant_initial_omega_mean), "plant_initial_omega_mean", "must be finite");
  try {
    Rot3::from_matrix(filter_initial_orientation);
  } catch (const Error&) {
    throw ConfigError("filter_initial_orientation", "must be a rotation matrix");
  }
}

namespace {

Vec3 read_vec3(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(field, "expected an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw ConfigError(field, "expected an array of 3 numbers");
    v(i) = j[i].get<double>();
  }
  return v;
}

Mat3 read_mat3(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(field, "expected a 3x3 nested array");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    m.row(r) = read_vec3(j[r], field).transpose();
  }
  return m;
}

double read_number(const json& j, const char* field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  return j.get<double>();
}

std::size_t read_count(const json& j, const char* field) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw ConfigError(field, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

bool read_bool(const json& j, const char* field) {
  if (!j.is_boolean()) throw ConfigError(field, "expected true or false");
  return j.get<bool>();
}

std::string read_string(const json& j, const char* field) {
  if (!j.is_string()) throw ConfigError(field, "expected a string");
  return j.get<std::string>();
}

}  // namespace

SimConfig parse_config(std::string_view json_text, SimConfig cfg) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config", "top level must be a JSON object");

  for (const auto& [key, value] : doc.items()) {
    const char* k = key.c_str();
    if (key == "inertia_diag") cfg.inertia_diag = read_vec3(value, k);
    else if (key == "q_scale") cfg.q_scale = read_number(value, k);
    else if (key == "r_scale") cfg.r_scale = read_number(value, k);
    else if (key == "sigma0_orientation") cfg.sigma0_orientation = read_number(value, k);
    else if (key == "sigma0_velocity") cfg.sigma0_velocity = read_number(value, k);
    else if (key == "filter_initial_orientation") cfg.filter_initial_orientation = read_mat3(value, k);
    else if (key == "filter_initial_omega") cfg.filter_initial_omega = read_vec3(value, k);
    else if (key == "plant_initial_omega_mean") cfg.plant_initial_omega_mean = read_vec3(value, k);
    else if (key == "plant_initial_orientation_var") cfg.plant_initial_orientation_var = read_number(value, k);
    else if (key == "plant_initial_omega_var") cfg.plant_initial_omega_var = read_number(value, k);
    else if (key == "random_initial_state") cfg.random_initial_state = read_bool(value, k);
    else if (key == "plant_noise") cfg.plant_noise = read_bool(value, k);
    else if (key == "ekf_measurement_var") cfg.ekf_measurement_var = read_number(value, k);
    else if (key == "dt") cfg.dt = read_number(value, k);
    else if (key == "horizon") cfg.horizon = read_number(value, k);
    else if (key == "runs") cfg.runs = read_count(value, k);
    else if (key == "run_offset") cfg.run_offset = read_count(value, k);
    else if (key == "seed") cfg.seed = read_count(value, k);
    else if (key == "noise_mode") cfg.noise_mode = parse_noise_mode(read_string(value, k));
    else if (key == "filter") cfg.filter = parse_filter_selection(read_string(value, k));
    else throw ConfigError(key, "unknown configuration key");
  }
  return cfg;
}

SimConfig load_config(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), base);
}

std::string config_to_json(const SimConfig& cfg) {
  const auto vec = [](const Vec3& v) { return json::array({v(0), v(1), v(2)}); };
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(vec(cfg.filter_initial_orientation.row(r).transpose()));
  const json doc = {
      {"inertia_diag", vec(cfg.inertia_diag)},
      {"q_scale", cfg.q_scale},
      {"r_scale", cfg.r_scale},
      {"sigma0_orientation", cfg.sigma0_orientation},
      {"sigma0_velocity", cfg.sigma0_velocity},
      {"filter_initial_orientation", rows},
      {"filter_initial_omega", vec(cfg.filter_initial_omega)},
      {"plant_initial_omega_mean", vec(cfg.plant_initial_omega_mean)},
      {"plant_initial_orientation_var", cfg.plant_initial_orientation_var},
      {"plant_initial_omega_var", cfg.plant_initial_omega_var},
      {"random_initial_state", cfg.random_initial_state},
      {"plant_noise", cfg.plant_noise},
      {"ekf_measurement_var", cfg.ekf_measurement_var},
      {"dt", cfg.dt},
      {"horizon", cfg.horizon},
      {"runs", cfg.runs},
      {"run_offset", cfg.run_offset},
      {"seed", cfg.seed},
      {"noise_mode", std::string(to_string(cfg.noise_mode))},
      {"filter", std::string(to_string(cfg.filter))},
  };
  return doc.dump(2);
}

}  // namespace lie_iekf
