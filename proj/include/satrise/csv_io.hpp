// CSV serialization of simulation logs and metrics.
//
// Schema v1. log.csv columns:
//   t,q1..q6,qd1..qd6,u1..u6,e1_1..e1_6,e2_1..e2_6,V,P
// Values are written with 17 significant digits so every double round-trips.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "satrise/diagnostics.hpp"

namespace satrise {

inline constexpr int kCsvSchemaVersion = 1;

std::string log_csv_header();
std::string metrics_csv_header();

void write_log_csv(std::ostream& os, const std::vector<SimLogRecord>& log);
void write_log_csv(const std::filesystem::path& path, const std::vector<SimLogRecord>& log);
/// Restores the serialized columns; controller state is left at zero.
std::vector<SimLogRecord> read_log_csv(const std::filesystem::path& path);

std::string metrics_csv_row(const TrackingMetrics& m);
void write_metrics_csv(const std::filesystem::path& path, const TrackingMetrics& m);
TrackingMetrics read_metrics_csv(const std::filesystem::path& path);

/// "%.17g" formatting.
std::string format_double(double v);

}  // namespace satrise
