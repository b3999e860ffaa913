#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "muskit/aspsem.hpp"
#include "muskit/bench.hpp"
#include "muskit/cnf.hpp"
#include "muskit/encoder.hpp"
#include "muskit/enumerate.hpp"
#include "muskit/heuristics.hpp"

using namespace muskit;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIncomplete = 10;
constexpr int kExitInputError = 2;

struct GlobalConfig {
  double timeout = 3600.0;
  HeuristicFlags flags;
  int threshold = 5000;
  std::string format = "human";
  unsigned seed = 0;
  int oracle_cap = 20;
};

void add_common(CLI::App* sub, GlobalConfig& cfg) {
  sub->add_option("--timeout", cfg.timeout,
                  "Budget in seconds; 0 means unlimited")
      ->check(CLI::NonNegativeNumber);
  sub->add_flag("--h1", cfg.flags.h1, "Lean-kernel clause exclusions");
  sub->add_flag("--h2", cfg.flags.h2, "Cardinality bounds on MUS size");
  sub->add_flag("--h3", cfg.flags.h3, "Cross-component exclusions");
  sub->add_flag("--h4", cfg.flags.h4, "MCS hitting constraints");
  sub->add_flag("--h5", cfg.flags.h5, "Literal cover rules");
  sub->add_flag_callback(
      "--all-heuristics", [&cfg]() { cfg.flags = HeuristicFlags::all(); },
      "Enable H1 through H5");
  sub->add_option("--threshold", cfg.threshold,
                  "Clause count below which the asp-route engine is used");
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"human", "json"}));
  sub->add_option("--seed", cfg.seed, "Seed for generated bench instances");
  sub->add_option("--oracle-cap", cfg.oracle_cap,
                  "Largest clause count the oracle will sweep");
}

std::optional<Budget> make_budget(const GlobalConfig& cfg) {
  if (cfg.timeout <= 0.0) return std::nullopt;
  Budget b;
  b.deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(cfg.timeout));
  return b;
}

BundleBudget bundle_budget(const GlobalConfig& cfg) {
  BundleBudget bb;
  if (cfg.timeout > 0.0) {
    auto slice = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(cfg.timeout * 0.1));
    bb.mcs.deadline = slice;
    bb.maxsat.deadline = slice;
  }
  return bb;
}

json muses_json(const std::vector<std::vector<int>>& muses) {
  json arr = json::array();
  for (const auto& m : muses) arr.push_back(m);
  return arr;
}

void print_mus_lines(const std::vector<std::vector<int>>& muses) {
  for (const auto& m : muses) {
    std::cout << "mus:";
    for (int i : m) std::cout << ' ' << i;
    std::cout << '\n';
  }
}

int run_solve(const GlobalConfig& cfg, const std::string& path, bool count_only) {
  auto f = parse_dimacs_file(path);
  HybridPolicy policy{cfg.threshold};
  EncodingOptions opts;
  opts.heuristics_enabled = cfg.flags;
  auto budget = make_budget(cfg);
  EnumerationResult res = hybrid_enumerate(f, policy, opts, budget ? *budget : Budget{});

  if (res.complete && res.count == 0)
    std::cerr << "note: formula is satisfiable\n";
  if (!res.complete)
    std::cerr << "note: budget exhausted, result is partial\n";

  if (cfg.format == "json") {
    json j;
    j["engine"] = engine_name(res.engine);
    j["complete"] = res.complete;
    j["count"] = res.count;
    j["elapsed_ms"] = res.elapsed.count();
    if (!count_only) j["muses"] = muses_json(res.muses);
    std::cout << j.dump(2) << '\n';
  } else if (count_only) {
    std::cout << res.count << '\n';
  } else {
    std::cout << "engine: " << engine_name(res.engine) << '\n'
              << "complete: " << (res.complete ? "yes" : "no") << '\n'
              << "count: " << res.count << '\n'
              << "elapsed_ms: " << res.elapsed.count() << '\n';
    print_mus_lines(res.muses);
  }
  return res.complete ? kExitOk : kExitIncomplete;
}

int run_encode(const GlobalConfig& cfg, const std::string& path,
               const std::string& out_path) {
  auto f = parse_dimacs_file(path);
  EncodingOptions opts;
  opts.heuristics_enabled = cfg.flags;
  if (cfg.flags.any()) opts.bundle = compute_bundle(f, cfg.flags, bundle_budget(cfg));
  auto program = build_program(f, opts);
  std::string text = emit_aspcore2(program, opts);

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
    std::cerr << "note: wrote " << out_path << '\n';
    return kExitOk;
  }
  if (cfg.format == "json") {
    json j;
    j["rules"] = program.rules.size();
    j["program"] = text;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << text;
  }
  return kExitOk;
}

int run_info(const GlobalConfig& cfg, const std::string& path) {
  auto f = parse_dimacs_file(path);
  auto comps = components(f);
  std::optional<HeuristicBundle> bundle;
  if (cfg.flags.any()) bundle = compute_bundle(f, cfg.flags, bundle_budget(cfg));

  json j;
  j["file"] = path;
  j["vars"] = f.nvars;
  j["clauses"] = f.ncl();
  j["components"] = comps.size();
  if (bundle) {
    if (bundle->union_overapprox)
      j["kernel_size"] = bundle->union_overapprox->size();
    if (bundle->mcses) {
      j["mcs_count"] = bundle->mcses->mcses.size();
      j["mcs_complete"] = bundle->mcses->complete;
    }
    if (bundle->card_bounds) {
      j["lb"] = bundle->card_bounds->lb;
      j["ub"] = bundle->card_bounds->ub;
      j["ub_exact"] = bundle->card_bounds->ub_exact;
    }
    if (bundle->cover_rules) j["cover_rules"] = bundle->cover_rules->size();
  }

  if (cfg.format == "json") {
    std::cout << j.dump(2) << '\n';
  } else {
    for (const auto& [key, value] : j.items())
      std::cout << key << ": "
                << (value.is_string() ? value.get<std::string>() : value.dump())
                << '\n';
  }
  return kExitOk;
}

int run_oracle(const GlobalConfig& cfg, const std::string& path) {
  auto f = parse_dimacs_file(path);
  OracleReport report = oracle_enumerate(f, cfg.oracle_cap);

  if (report.result.complete && report.result.count == 0)
    std::cerr << "note: formula is satisfiable\n";

  if (cfg.format == "json") {
    json j;
    j["engine"] = engine_name(report.result.engine);
    j["complete"] = report.result.complete;
    j["count"] = report.result.count;
    j["elapsed_ms"] = report.result.elapsed.count();
    j["muses"] = muses_json(report.result.muses);
    j["mcses"] = muses_json(report.mcses);
    j["cores_count"] = report.cores.size();
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "engine: oracle\n"
              << "cores: " << report.cores.size() << '\n'
              << "mcses: " << report.mcses.size() << '\n'
              << "count: " << report.result.count << '\n';
    print_mus_lines(report.result.muses);
    for (const auto& m : report.mcses) {
      std::cout << "mcs:";
      for (int i : m) std::cout << ' ' << i;
      std::cout << '\n';
    }
  }
  return kExitOk;
}

int run_bench_cmd(const GlobalConfig& cfg, const std::vector<std::string>& files,
                  int gen_coloring, int gen_random, const std::string& out_dir,
                  int jobs) {
  std::vector<std::pair<std::string, CnfFormula>> instances;
  for (const auto& path : files)
    instances.emplace_back(std::filesystem::path(path).filename().string(),
                           parse_dimacs_file(path));
  for (int i = 0; i < gen_coloring; ++i) {
    int n = 5 + 2 * i;
    instances.emplace_back("ring" + std::to_string(n), make_coloring_instance(n, 2));
  }
  std::mt19937 rng(cfg.seed);
  for (int i = 0; i < gen_random; ++i) {
    CnfFormula f;
    f.nvars = 4;
    std::uniform_int_distribution<int> var(1, 4);
    std::uniform_int_distribution<int> sign(0, 1);
    for (int c = 0; c < 8; ++c) {
      std::vector<Literal> lits;
      for (int l = 0; l < 3; ++l)
        lits.push_back(Literal::from_dimacs(sign(rng) ? var(rng) : -var(rng)));
      f.add_clause(lits);
    }
    int pivot = var(rng);
    f.add_clause({Literal::from_dimacs(pivot)});
    f.add_clause({Literal::from_dimacs(-pivot)});
    instances.emplace_back("rand" + std::to_string(i), f);
  }
  if (instances.empty())
    throw std::runtime_error("bench needs instance files or --generate-* counts");

  std::vector<BenchConfig> configs;
  configs.push_back({"plain", HeuristicFlags::none(), HybridPolicy{cfg.threshold}});
  configs.push_back({"heuristic", HeuristicFlags::all(), HybridPolicy{cfg.threshold}});

  BenchOptions opts;
  opts.timeout_seconds = cfg.timeout > 0.0 ? cfg.timeout : 3600.0;
  opts.jobs = jobs;
  auto records = run_bench(instances, configs, opts);
  auto board = make_scoreboard(records);

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream csv(std::filesystem::path(out_dir) / "records.csv");
    csv << to_csv(records);
    std::ofstream js(std::filesystem::path(out_dir) / "scoreboard.json");
    js << to_json(board);
  }
  std::cerr << "note: wrote " << out_dir << "/records.csv and scoreboard.json\n";

  if (cfg.format == "json") {
    std::cout << to_json(board);
  } else {
    std::cout << "instances: " << board.instances << '\n'
              << "tie_rule: " << board.rank_tie_rule << '\n';
    for (const auto& c : board.configs) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%-12s avg_rank=%.2f solved=%d par2=%.3f\n",
                    c.config.c_str(), c.avg_rank, c.solved, c.par2);
      std::cout << buf;
    }
  }
  return kExitOk;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"muskit: minimal unsatisfiable subset enumeration toolkit"};
  app.require_subcommand(1);

  GlobalConfig cfg;
  if (const char* env = std::getenv("MUSKIT_SEED")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0') {
      std::cerr << "error: MUSKIT_SEED is not a number\n";
      return kExitInputError;
    }
    cfg.seed = static_cast<unsigned>(v);
  }

  std::string path;
  std::string out_path;
  std::vector<std::string> bench_files;
  int gen_coloring = 0;
  int gen_random = 0;
  std::string bench_out = "bench-out";
  int jobs = 1;

  CLI::App* solve = app.add_subcommand("solve", "Enumerate all MUSes");
  solve->add_option("file", path, "DIMACS CNF input")->required();
  add_common(solve, cfg);

  CLI::App* count = app.add_subcommand("count", "Count MUSes");
  count->add_option("file", path, "DIMACS CNF input")->required();
  add_common(count, cfg);

  CLI::App* encode = app.add_subcommand("encode", "Emit the ASP program");
  encode->add_option("file", path, "DIMACS CNF input")->required();
  encode->add_option("-o,--output", out_path, "Write the program to this file");
  add_common(encode, cfg);

  CLI::App* info = app.add_subcommand("info", "Formula and heuristic statistics");
  info->add_option("file", path, "DIMACS CNF input")->required();
  add_common(info, cfg);

  CLI::App* oracle = app.add_subcommand("oracle", "Brute-force reference enumeration");
  oracle->add_option("file", path, "DIMACS CNF input")->required();
  add_common(oracle, cfg);

  CLI::App* bench = app.add_subcommand("bench", "Run the benchmark harness");
  bench->add_option("files", bench_files, "DIMACS CNF instances");
  bench->add_option("--generate-coloring", gen_coloring,
                    "Generate this many odd-ring coloring instances");
  bench->add_option("--generate-random", gen_random,
                    "Generate this many random seeded instances");
  bench->add_option("--out", bench_out, "Output directory for CSV and JSON");
  bench->add_option("--jobs", jobs, "Worker threads");
  add_common(bench, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (solve->parsed()) return run_solve(cfg, path, false);
    if (count->parsed()) return run_solve(cfg, path, true);
    if (encode->parsed()) return run_encode(cfg, path, out_path);
    if (info->parsed()) return run_info(cfg, path);
    if (oracle->parsed()) return run_oracle(cfg, path);
    if (bench->parsed())
      return run_bench_cmd(cfg, bench_files, gen_coloring, gen_random, bench_out,
                           jobs);
  } catch (const asp::BruteForceCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
