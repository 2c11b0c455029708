#include "satrise/csv_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace satrise {

namespace {

constexpr std::size_t kLogColumns = 1 + 5 * 6 + 2;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("malformed CSV number '" + s + "'");
  return v;
}

void append_vec(std::string& line, const Vec6& v) {
  for (int i = 0; i < 6; ++i) {
    line += ',';
    line += format_double(v(i));
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string log_csv_header() {
  std::string h = "t";
  for (const char* name : {"q", "qd", "u"}) {
    for (int i = 1; i <= 6; ++i) h += "," + std::string(name) + std::to_string(i);
  }
  for (const char* name : {"e1_", "e2_"}) {
    for (int i = 1; i <= 6; ++i) h += "," + std::string(name) + std::to_string(i);
  }
  return h + ",V,P";
}

std::string metrics_csv_header() {
  return "rmse_pos_transient,rmse_pos_steady,rmse_att_steady,max_bound_violation,diverged";
}

void write_log_csv(std::ostream& os, const std::vector<SimLogRecord>& log) {
  os << log_csv_header() << '\n';
  std::string line;
  for (const auto& r : log) {
    line = format_double(r.t);
    append_vec(line, r.q);
    append_vec(line, r.q_d);
    append_vec(line, r.u);
    append_vec(line, r.e1);
    append_vec(line, r.e2);
    line += ',' + format_double(r.V) + ',' + format_double(r.P);
    os << line << '\n';
  }
}

void write_log_csv(const std::filesystem::path& path, const std::vector<SimLogRecord>& log) {
  auto os = open_out(path);
  write_log_csv(os, log);
}

std::vector<SimLogRecord> read_log_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != log_csv_header()) {
    throw std::runtime_error(path.string() + ": unexpected log header");
  }
  std::vector<SimLogRecord> log;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != kLogColumns) throw std::runtime_error(path.string() + ": wrong column count");
    SimLogRecord r;
    std::size_t c = 0;
    r.t = parse_cell(cells[c++]);
    for (Vec6* v : {&r.q, &r.q_d, &r.u, &r.e1, &r.e2}) {
      for (int i = 0; i < 6; ++i) (*v)(i) = parse_cell(cells[c++]);
    }
    r.V = parse_cell(cells[c++]);
    r.P = parse_cell(cells[c++]);
    log.push_back(r);
  }
  return log;
}

std::string metrics_csv_row(const TrackingMetrics& m) {
  return format_double(m.rmse_pos_transient) + ',' + format_double(m.rmse_pos_steady) + ',' +
         format_double(m.rmse_att_steady) + ',' + format_double(m.max_bound_violation) + ',' +
         (m.diverged ? "1" : "0");
}

void write_metrics_csv(const std::filesystem::path& path, const TrackingMetrics& m) {
  auto os = open_out(path);
  os << metrics_csv_header() << '\n' << metrics_csv_row(m) << '\n';
}

TrackingMetrics read_metrics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string header, row;
  if (!in || !std::getline(in, header) || header != metrics_csv_header() || !std::getline(in, row)) {
    throw std::runtime_error(path.string() + ": malformed metrics file");
  }
  const auto cells = split(row);
  if (cells.size() != 5) throw std::runtime_error(path.string() + ": wrong column count");
  TrackingMetrics m;
  m.rmse_pos_transient = parse_cell(cells[0]);
  m.rmse_pos_steady = parse_cell(cells[1]);
  m.rmse_att_steady = parse_cell(cells[2]);
  m.max_bound_violation = parse_cell(cells[3]);
  m.diverged = cells[4] == "1";
  return m;
}

}  // namespace satrise
