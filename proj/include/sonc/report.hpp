#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "sonc/common.hpp"

namespace sonc {

inline constexpr int kReportSchemaVersion = 1;

/// One solver run on one instance. gap = best_value - lower_bound, +inf
/// when the bound is -inf.
struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string instance;
  int n = 0;
  int d = 0;
  int t = 0;
  long seed = -1;  // -1 for file-based instances
  std::string method;
  double lower_bound = -kInf;
  double best_value = kInf;
  double gap = kInf;
  double wall_time_s = 0.0;
  long nodes_expanded = 0;
  std::string status;
};

std::string report_csv_header();
std::string to_csv_row(const RunReport& r);
RunReport report_from_csv_row(const std::string& line);
std::string to_json_line(const RunReport& r);

/// Gap buckets: <=1e-6 (numerically zero), <=1e-3, <=0.1, <=10, >10, inf.
inline constexpr int kGapBuckets = 6;
int gap_bucket(double gap);
extern const char* const kGapBucketLabels[kGapBuckets];

struct BenchSummaryRow {
  std::string method;
  int n = 0;
  int t = 0;
  int count = 0;
  double mean_time_s = 0.0;
};

struct BenchSummary {
  std::vector<BenchSummaryRow> time_rows;  // mean over degrees and seeds
  std::map<std::string, std::array<long, kGapBuckets>> gap_histogram;
};

BenchSummary summarize_reports(const std::vector<RunReport>& rows);
std::string format_summary(const BenchSummary& summary);

}  // namespace sonc
