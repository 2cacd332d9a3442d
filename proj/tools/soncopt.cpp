// soncopt: certified lower bounds and heuristic minima for sparse
// polynomials via SONC/SAGE certificates, branch-and-bound over variable
// signs, and minimal-orthant enumeration.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "sonc/bnb.hpp"
#include "sonc/bounds.hpp"
#include "sonc/generator.hpp"
#include "sonc/minima.hpp"
#include "sonc/orthants.hpp"
#include "sonc/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

sonc::Polynomial load_polynomial(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return sonc::polynomial_from_any(buf.str());
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

struct SharedFlags {
  std::string method = "sonc";
  std::string strategy = "worst";
  bool sparse = false;
  std::string covering = "simple";
  double eps = sonc::kDefaultTol;
  long seed = 0;  // base seed for generated sweeps
  double timeout = 60.0;
  int workers = 1;
  bool json = false;
  bool no_sage = false;

  sonc::CoveringStrategy covering_strategy() const {
    return covering == "extended" ? sonc::CoveringStrategy::extended
                                  : sonc::CoveringStrategy::simple;
  }
  sonc::BnbStrategy bnb_strategy() const {
    return strategy == "dfs" ? sonc::BnbStrategy::dfs
                             : sonc::BnbStrategy::worst_first;
  }
};

void add_shared_flags(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--method", f.method, "sonc|sage|fork|bnb")
      ->check(CLI::IsMember({"sonc", "sage", "fork", "bnb"}));
  cmd->add_option("--strategy", f.strategy, "worst|dfs")
      ->check(CLI::IsMember({"worst", "dfs"}));
  cmd->add_flag("--sparse", f.sparse, "sparse branch-and-bound tree");
  cmd->add_option("--covering", f.covering, "simple|extended")
      ->check(CLI::IsMember({"simple", "extended"}));
  cmd->add_option("--eps", f.eps, "accuracy for the bnb gap stop");
  cmd->add_option("--seed", f.seed, "base seed for generated sweeps");
  cmd->add_option("--timeout", f.timeout, "wall-clock limit in seconds");
  cmd->add_option("--workers", f.workers, "bench worker threads");
  cmd->add_flag("--json", f.json, "JSON output for sweeps");
  cmd->add_flag("--no-sage", f.no_sage, "skip SAGE inside bnb");
}

// Runs one method on one polynomial and fills the report row.
sonc::RunReport run_method(const sonc::Polynomial& p,
                           const std::string& method, const SharedFlags& f,
                           const sonc::Deadline& deadline) {
  sonc::RunReport rep;
  rep.n = p.var_count();
  rep.d = p.degree();
  rep.t = p.term_count();
  rep.method = method + (f.sparse && method == "bnb" ? "_sparse" : "");
  sonc::StopWatch watch;
  try {
    if (method == "bnb") {
      sonc::BnbOptions opt;
      opt.strategy = f.bnb_strategy();
      opt.sparse = f.sparse;
      opt.use_sage = !f.no_sage;
      opt.eps = f.eps;
      opt.covering = f.covering_strategy();
      opt.deadline = deadline;
      sonc::BnbResult r = sonc::branch_and_bound(p, opt);
      rep.lower_bound = r.lower_bound;
      rep.best_value = r.best_value;
      rep.nodes_expanded = r.nodes_expanded;
      rep.status = r.stop_reason == sonc::StopReason::timeout
                       ? "timeout"
                       : (r.solver_failure ? "partial" : "optimal");
    } else {
      sonc::BoundResult r;
      if (method == "sonc")
        r = sonc::sonc_bound(p, f.covering_strategy(), sonc::kDefaultTol,
                             deadline);
      else if (method == "sage")
        r = sonc::sage_bound(p, sonc::kDefaultTol, deadline);
      else if (method == "fork")
        r = sonc::fork_bound(p,
                             f.no_sage ? sonc::ForkMethod::sonc
                                       : sonc::ForkMethod::both,
                             f.covering_strategy(), sonc::kDefaultTol,
                             deadline);
      else
        throw InputError("unknown method " + method);
      rep.lower_bound = r.lower_bound;
      rep.status = sonc::to_string(r.solver_status);
      rep.best_value = sonc::sonc_min(p, f.covering_strategy()).value;
    }
  } catch (const sonc::TimeoutError&) {
    rep.status = "timeout";
  }
  rep.wall_time_s = watch.seconds();
  rep.gap = std::isinf(rep.lower_bound) ? sonc::kInf
                                        : rep.best_value - rep.lower_bound;
  return rep;
}

int cmd_bound(const std::string& file, const SharedFlags& f,
              bool list_orthants) {
  sonc::Polynomial p = load_polynomial(file);
  sonc::Deadline deadline = sonc::Deadline::after(f.timeout);
  sonc::RunReport rep = run_method(p, f.method, f, deadline);
  rep.instance = file;
  if (list_orthants) {
    for (const auto& [eff, sv] : sonc::minimal_orthants(p))
      std::cout << "orthant " << sv.to_string() << "\n";
  }
  std::cout << sonc::to_json_line(rep) << "\n";
  return kExitOk;
}

int cmd_min(const std::string& file, const SharedFlags& f) {
  sonc::Polynomial p = load_polynomial(file);
  sonc::MinimaResult m = sonc::sonc_min(p, f.covering_strategy());
  nlohmann::json j;
  j["schema_version"] = sonc::kReportSchemaVersion;
  j["instance"] = file;
  j["value"] = m.value;
  j["candidate"] = m.candidate;
  j["relaxed_value"] = m.relaxed_value;
  j["relaxed_candidate"] = m.relaxed_candidate;
  j["circuit_minimizers"] = m.circuit_minimizers;
  j["iterations"] = m.iterations;
  j["converged"] = m.converged;
  std::cout << j.dump() << "\n";
  return kExitOk;
}

int cmd_orthants(const std::string& file, const SharedFlags& f) {
  sonc::Polynomial p = load_polynomial(file);
  auto list = sonc::minimal_orthants(p);
  if (f.json) {
    nlohmann::json j;
    j["schema_version"] = sonc::kReportSchemaVersion;
    j["instance"] = file;
    auto arr = nlohmann::json::array();
    for (const auto& [eff, sv] : list) {
      nlohmann::json entry;
      entry["orthant"] = sv.to_string();
      entry["effective_negative"] = eff.v;
      arr.push_back(entry);
    }
    j["minimal_orthants"] = arr;
    std::cout << j.dump() << "\n";
  } else {
    for (const auto& [eff, sv] : list)
      std::cout << "orthant " << sv.to_string() << "\n";
    std::cout << list.size() << " minimal orthant(s) of "
              << (1 << p.var_count()) << "\n";
  }
  return kExitOk;
}

int cmd_gen(const sonc::GeneratorSpec& spec, const std::string& out_path) {
  sonc::Polynomial p = [&] {
    try {
      return sonc::generate_instance(spec);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }();
  if (out_path.empty() || out_path == "-") {
    std::cout << p.to_string() << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write " + out_path);
    out << p.to_string() << "\n";
  }
  return kExitOk;
}

struct BenchTask {
  sonc::Polynomial poly;
  sonc::GeneratorSpec spec;
  std::string instance;
  std::string method;
};

int cmd_bench(const std::vector<int>& ns, const std::vector<int>& ds,
              const std::vector<int>& ts, int seeds,
              const std::string& methods_csv, const std::string& dir,
              const std::string& csv_path, const SharedFlags& f) {
  std::vector<std::string> methods;
  {
    std::stringstream ss(methods_csv);
    std::string item;
    while (std::getline(ss, item, ',')) methods.push_back(item);
  }
  if (methods.empty()) throw InputError("no methods given");

  std::vector<BenchTask> tasks;
  if (!dir.empty()) {
    std::vector<std::string> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
      if (entry.is_regular_file()) files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      sonc::Polynomial p = load_polynomial(file);
      for (const auto& m : methods) tasks.push_back({p, {}, file, m});
    }
  } else {
    for (int n : ns)
      for (int d : ds)
        for (int t : ts)
          for (int seed = 0; seed < seeds; ++seed) {
            sonc::GeneratorSpec spec;
            spec.n = n;
            spec.d = d;
            spec.t = t;
            spec.seed = static_cast<unsigned>(f.seed + seed);
            if (t < n + 1) continue;
            sonc::Polynomial p = [&] {
              try {
                return sonc::generate_instance(spec);
              } catch (const std::invalid_argument& e) {
                throw InputError(e.what());
              }
            }();
            for (const auto& m : methods)
              tasks.push_back({p, spec, sonc::instance_id(spec), m});
          }
  }
  if (tasks.empty()) throw InputError("bench: nothing to run");

  std::vector<sonc::RunReport> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= tasks.size()) return;
      const BenchTask& task = tasks[k];
      sonc::Deadline deadline = sonc::Deadline::after(f.timeout);
      sonc::RunReport rep = run_method(task.poly, task.method, f, deadline);
      rep.instance = task.instance;
      if (!dir.empty()) {
        rep.seed = -1;
      } else {
        rep.seed = task.spec.seed;
      }
      rows[k] = std::move(rep);
    }
  };
  int nworkers = std::max(1, f.workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < nworkers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::ostream* out = &std::cout;
  std::ofstream file_out;
  if (!csv_path.empty()) {
    file_out.open(csv_path);
    if (!file_out) throw InputError("cannot write " + csv_path);
    out = &file_out;
  }
  if (f.json) {
    for (const auto& r : rows) (*out) << sonc::to_json_line(r) << "\n";
  } else {
    (*out) << sonc::report_csv_header() << "\n";
    for (const auto& r : rows) (*out) << sonc::to_csv_row(r) << "\n";
  }
  std::cerr << sonc::format_summary(sonc::summarize_reports(rows));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SONC/SAGE lower bounds for sparse polynomials"};
  app.require_subcommand(1);

  SharedFlags flags;
  std::string file;
  bool list_orthants = false;

  CLI::App* bound = app.add_subcommand("bound", "lower-bound a polynomial");
  bound->add_option("file", file, "polynomial file (text or JSON)")
      ->required();
  add_shared_flags(bound, flags);
  bound->add_flag("--list-orthants", list_orthants,
                  "also print the minimal orthants");

  CLI::App* minc = app.add_subcommand("min", "heuristic minimum");
  minc->add_option("file", file)->required();
  add_shared_flags(minc, flags);

  CLI::App* orth = app.add_subcommand("orthants", "minimal orthants");
  orth->add_option("file", file)->required();
  add_shared_flags(orth, flags);

  sonc::GeneratorSpec spec;
  std::string out_path;
  CLI::App* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("--n", spec.n, "variables")->required();
  gen->add_option("--d", spec.d, "even degree")->required();
  gen->add_option("--t", spec.t, "terms")->required();
  gen->add_option("--seed", spec.seed, "seed");
  gen->add_option("--coeff-lo", spec.coeff_lo);
  gen->add_option("--coeff-hi", spec.coeff_hi);
  gen->add_option("--nonsquare-frac", spec.nonsquare_fraction);
  gen->add_option("--out", out_path, "output file ('-' for stdout)");

  std::vector<int> ns{2}, ds{4}, ts{6};
  int seeds = 1;
  std::string methods = "sonc";
  std::string dir, csv_path;
  CLI::App* bench = app.add_subcommand("bench", "run a sweep");
  bench->add_option("--n", ns, "variable counts");
  bench->add_option("--d", ds, "degrees");
  bench->add_option("--t", ts, "term counts");
  bench->add_option("--seeds", seeds, "seeds per cell");
  bench->add_option("--methods", methods, "comma-separated methods");
  bench->add_option("--dir", dir, "bench a directory of instances instead");
  bench->add_option("--csv", csv_path, "write rows to this file");
  add_shared_flags(bench, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (bound->parsed()) return cmd_bound(file, flags, list_orthants);
    if (minc->parsed()) return cmd_min(file, flags);
    if (orth->parsed()) return cmd_orthants(file, flags);
    if (gen->parsed()) return cmd_gen(spec, out_path);
    if (bench->parsed())
      return cmd_bench(ns, ds, ts, seeds, methods, dir, csv_path, flags);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
