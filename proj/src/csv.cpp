#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "lie_iekf/error.hpp"
#include "lie_iekf/harness.hpp"

namespace lie_iekf {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

double parse_field(const std::string& field, const std::string& path, std::size_t line) {
  if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw Error(path + ":" + std::to_string(line) + ": malformed number '" + field + "'");
  }
  return value;
}

}  // namespace

void write_mse_csv(const MseSeries& series, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "Time,InvMSE,ExtMSE\n";
  for (std::size_t k = 0; k < series.time.size(); ++k) {
    out << format_double(series.time[k]) << ',';
    if (series.iekf) out << format_double(series.iekf->mse[k]);
    out << ',';
    if (series.ekf) out << format_double(series.ekf->mse[k]);
    out << '\n';
  }
  finish(out, path);
}

void write_timing_csv(const MseSeries& series, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "Filter,ComTime\n";
  for (const auto* fs : {series.find(FilterKind::Iekf), series.find(FilterKind::Ekf)}) {
    if (fs) out << to_string(fs->kind) << ',' << format_double(fs->timing.median) << '\n';
  }
  finish(out, path);
}

void write_csv(const MseSeries& series, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  write_mse_csv(series, (base / "mse.csv").string());
  write_timing_csv(series, (base / "timing.csv").string());
}

MseTable read_mse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "Time,InvMSE,ExtMSE") {
    throw Error(path + ":1: expected header 'Time,InvMSE,ExtMSE'");
  }
  MseTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 3) {
      throw Error(path + ":" + std::to_string(line_no) + ": expected 3 fields");
    }
    table.time.push_back(parse_field(fields[0], path, line_no));
    table.inv_mse.push_back(parse_field(fields[1], path, line_no));
    table.ext_mse.push_back(parse_field(fields[2], path, line_no));
  }
  return table;
}

}  // namespace lie_iekf
