#include "sonc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "json.hpp"

namespace sonc {

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  if (std::strtod(buf, nullptr) != v)
    std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json num_or_string(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

std::string report_csv_header() {
  return "schema_version,instance,n,d,t,seed,method,lower_bound,best_value,"
         "gap,wall_time_s,nodes_expanded,status";
}

std::string to_csv_row(const RunReport& r) {
  std::string out;
  out += std::to_string(r.schema_version) + ",";
  out += r.instance + ",";
  out += std::to_string(r.n) + "," + std::to_string(r.d) + "," +
         std::to_string(r.t) + "," + std::to_string(r.seed) + ",";
  out += r.method + ",";
  out += fmt(r.lower_bound) + "," + fmt(r.best_value) + "," + fmt(r.gap) +
         "," + fmt(r.wall_time_s) + ",";
  out += std::to_string(r.nodes_expanded) + "," + r.status;
  return out;
}

RunReport report_from_csv_row(const std::string& line) {
  auto f = split_csv(line);
  if (f.size() != 13) throw std::invalid_argument("bad report row: " + line);
  RunReport r;
  r.schema_version = std::stoi(f[0]);
  r.instance = f[1];
  r.n = std::stoi(f[2]);
  r.d = std::stoi(f[3]);
  r.t = std::stoi(f[4]);
  r.seed = std::stol(f[5]);
  r.method = f[6];
  r.lower_bound = std::strtod(f[7].c_str(), nullptr);
  r.best_value = std::strtod(f[8].c_str(), nullptr);
  r.gap = std::strtod(f[9].c_str(), nullptr);
  r.wall_time_s = std::strtod(f[10].c_str(), nullptr);
  r.nodes_expanded = std::stol(f[11]);
  r.status = f[12];
  return r;
}

std::string to_json_line(const RunReport& r) {
  nlohmann::json j;
  j["schema_version"] = r.schema_version;
  j["instance"] = r.instance;
  j["n"] = r.n;
  j["d"] = r.d;
  j["t"] = r.t;
  j["seed"] = r.seed;
  j["method"] = r.method;
  j["lower_bound"] = num_or_string(r.lower_bound);
  j["best_value"] = num_or_string(r.best_value);
  j["gap"] = num_or_string(r.gap);
  j["wall_time_s"] = r.wall_time_s;
  j["nodes_expanded"] = r.nodes_expanded;
  j["status"] = r.status;
  return j.dump();
}

const char* const kGapBucketLabels[kGapBuckets] = {
    "<=1e-6", "<=1e-3", "<=0.1", "<=10", ">10", "inf"};

int gap_bucket(double gap) {
  if (std::isinf(gap) || std::isnan(gap)) return 5;
  if (gap <= 1e-6) return 0;
  if (gap <= 1e-3) return 1;
  if (gap <= 0.1) return 2;
  if (gap <= 10.0) return 3;
  return 4;
}

BenchSummary summarize_reports(const std::vector<RunReport>& rows) {
  BenchSummary s;
  std::map<std::tuple<std::string, int, int>, std::pair<int, double>> acc;
  for (const auto& r : rows) {
    auto& slot = acc[{r.method, r.n, r.t}];
    slot.first += 1;
    slot.second += r.wall_time_s;
    auto it = s.gap_histogram.find(r.method);
    if (it == s.gap_histogram.end())
      it = s.gap_histogram.emplace(r.method, std::array<long, kGapBuckets>{})
               .first;
    it->second[gap_bucket(r.gap)] += 1;
  }
  for (const auto& [key, slot] : acc) {
    BenchSummaryRow row;
    row.method = std::get<0>(key);
    row.n = std::get<1>(key);
    row.t = std::get<2>(key);
    row.count = slot.first;
    row.mean_time_s = slot.second / slot.first;
    s.time_rows.push_back(std::move(row));
  }
  return s;
}

std::string format_summary(const BenchSummary& summary) {
  std::string out;
  out += "mean wall time by (method, n, t), averaged over degree and seed\n";
  out += "method        n    t  count  mean_time_s\n";
  for (const auto& r : summary.time_rows) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-12s %3d %4d %6d  %.6f\n",
                  r.method.c_str(), r.n, r.t, r.count, r.mean_time_s);
    out += buf;
  }
  out += "\ngap distribution by method\n";
  out += "method        ";
  for (int b = 0; b < kGapBuckets; ++b) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%8s", kGapBucketLabels[b]);
    out += buf;
  }
  out += "\n";
  for (const auto& [method, counts] : summary.gap_histogram) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%-12s ", method.c_str());
    out += buf;
    for (long c : counts) {
      std::snprintf(buf, sizeof(buf), "%8ld", c);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace sonc
