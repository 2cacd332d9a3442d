#include <cmath>

#include "doctest.h"
#include "sonc/bounds.hpp"
#include "sonc/generator.hpp"
#include "sonc/report.hpp"

using namespace sonc;

TEST_SUITE_BEGIN("generator_report");

TEST_CASE("generation is deterministic for a fixed spec") {
  GeneratorSpec spec;
  spec.n = 2;
  spec.d = 4;
  spec.t = 6;
  spec.seed = 1;
  Polynomial a = generate_instance(spec);
  Polynomial b = generate_instance(spec);
  CHECK(a.to_string() == b.to_string());
  CHECK(a == b);
}

TEST_CASE("construction guarantees") {
  GeneratorSpec spec;
  spec.n = 3;
  spec.d = 8;
  spec.t = 10;
  spec.seed = 7;
  Polynomial p = generate_instance(spec);
  CHECK(p.term_count() == 10);
  CHECK(p.var_count() == 3);
  CHECK(p.coeff(p.origin_index()) > 0);
  auto cls = classify_support(p);
  CHECK(static_cast<int>(cls.mosq.size()) >= 4);  // origin plus n vertices
}

TEST_CASE("infeasible specs are rejected") {
  GeneratorSpec spec;
  spec.n = 2;
  spec.d = 4;
  spec.t = 2;
  CHECK_THROWS_AS(generate_instance(spec), std::invalid_argument);
  spec.t = 6;
  spec.d = 5;
  CHECK_THROWS_AS(generate_instance(spec), std::invalid_argument);
}

TEST_CASE("generated supports always admit a covering") {
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u, 6u}) {
    GeneratorSpec spec;
    spec.n = 2;
    spec.d = 6;
    spec.t = 7;
    spec.seed = seed;
    Polynomial p = generate_instance(spec);
    // every interior point lies in the square simplex, so no covering LP
    // can be infeasible (the bound program itself may still report -inf)
    CHECK_NOTHROW(compute_covering(relax(p)));
  }
}

TEST_CASE("csv rows round-trip") {
  RunReport r;
  r.instance = "n2_d4_t6_s1";
  r.n = 2;
  r.d = 4;
  r.t = 6;
  r.seed = 1;
  r.method = "bnb";
  r.lower_bound = -3.25;
  r.best_value = -3.2499999;
  r.gap = r.best_value - r.lower_bound;
  r.wall_time_s = 0.125;
  r.nodes_expanded = 9;
  r.status = "optimal";
  RunReport back = report_from_csv_row(to_csv_row(r));
  CHECK(back.instance == r.instance);
  CHECK(back.lower_bound == r.lower_bound);
  CHECK(back.best_value == r.best_value);
  CHECK(back.gap == r.gap);
  CHECK(back.nodes_expanded == r.nodes_expanded);
  CHECK(back.status == r.status);

  // infinities survive the round trip
  r.lower_bound = -kInf;
  r.gap = kInf;
  r.status = "numerical_failure";
  RunReport inf_back = report_from_csv_row(to_csv_row(r));
  CHECK(inf_back.lower_bound == -kInf);
  CHECK(inf_back.gap == kInf);
}

TEST_CASE("json lines carry the schema version") {
  RunReport r;
  r.instance = "file.txt";
  r.method = "sonc";
  r.lower_bound = 1.0;
  r.best_value = 2.0;
  r.gap = 1.0;
  std::string line = to_json_line(r);
  CHECK(line.find("\"schema_version\":1") != std::string::npos);
  CHECK(line.find('\n') == std::string::npos);
}

TEST_CASE("summary means match a direct recomputation") {
  std::vector<RunReport> rows;
  for (int seed = 0; seed < 6; ++seed) {
    RunReport r;
    r.instance = "i" + std::to_string(seed);
    r.n = 2;
    r.t = 6;
    r.d = seed % 2 ? 4 : 6;
    r.method = seed % 3 ? "sonc" : "bnb";
    r.wall_time_s = 0.5 + seed;
    r.gap = seed == 5 ? kInf : seed * 1e-4;
    rows.push_back(r);
  }
  BenchSummary s = summarize_reports(rows);
  for (const auto& row : s.time_rows) {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : rows) {
      if (r.method == row.method && r.n == row.n && r.t == row.t) {
        sum += r.wall_time_s;
        ++count;
      }
    }
    REQUIRE(count == row.count);
    CHECK(row.mean_time_s == doctest::Approx(sum / count).epsilon(1e-9));
  }
  long total = 0;
  for (const auto& [method, counts] : s.gap_histogram)
    for (long c : counts) total += c;
  CHECK(total == 6);
  CHECK(gap_bucket(5e-7) == 0);
  CHECK(gap_bucket(kInf) == 5);
}

TEST_SUITE_END();
