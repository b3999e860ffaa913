#ifndef MUSKIT_BENCH_HPP
#define MUSKIT_BENCH_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "muskit/cnf.hpp"
#include "muskit/enumerate.hpp"
#include "muskit/heuristics.hpp"

namespace muskit {

// One enumeration run: a single instance under a single configuration.
struct RunRecord {
  std::string instance;
  std::string config;
  long long mus_count = 0;
  bool solved = false;
  double elapsed = 0.0;  // seconds
  double timeout = 0.0;  // seconds

  bool operator==(const RunRecord&) const = default;
};

struct ConfigScore {
  std::string config;
  double avg_rank = 0.0;
  int solved = 0;
  double par2 = 0.0;
};

// Sorted by average rank; ties broken by config name.
struct Scoreboard {
  int instances = 0;
  std::string rank_tie_rule = "mean-of-positions";
  std::vector<ConfigScore> configs;
};

struct BenchConfig {
  std::string name;
  HeuristicFlags heuristics;
  HybridPolicy policy;
};

struct BenchOptions {
  double timeout_seconds = 3600.0;
  int jobs = 1;
};

// Per-config average rank across instances. Within an instance configs are
// ranked by mus_count descending; a config with no record counts as zero;
// tied configs all receive the mean of the positions they span. Throws
// std::invalid_argument on an empty record set.
std::map<std::string, double> rank_configs(const std::vector<RunRecord>& records);

// Per-config mean of (elapsed if solved, else 2 * timeout).
std::map<std::string, double> par2(const std::vector<RunRecord>& records);

// Runs every instance under every config with a per-run deadline. Workers
// pull jobs from a shared queue and write into disjoint slots; the merged
// result is sorted by (instance, config).
std::vector<RunRecord> run_bench(
    const std::vector<std::pair<std::string, CnfFormula>>& instances,
    const std::vector<BenchConfig>& configs, const BenchOptions& opts = {});

Scoreboard make_scoreboard(const std::vector<RunRecord>& records);

// Header plus one row per record, sorted by (instance, config).
std::string to_csv(std::vector<RunRecord> records);
std::string to_json(const Scoreboard& board);

// Ring graph with `vertices` nodes, one boolean per vertex/color pair.
// An odd cycle with two colors is unsatisfiable.
CnfFormula make_coloring_instance(int vertices, int colors = 2);

}  // namespace muskit

#endif
