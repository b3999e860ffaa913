#ifndef MUSKIT_ENUMERATE_HPP
#define MUSKIT_ENUMERATE_HPP

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "muskit/cnf.hpp"
#include "muskit/encoder.hpp"
#include "muskit/heuristics.hpp"

namespace muskit {

enum class Engine { AspRoute, SeedShrink, Hybrid, Oracle };

std::string engine_name(Engine e);

struct Budget {
  long long max_muses = -1;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct EnumerationResult {
  std::vector<std::vector<int>> muses;
  bool complete = false;
  long long count = 0;
  std::chrono::milliseconds elapsed{0};
  Engine engine = Engine::SeedShrink;
};

// ncl < clause_threshold routes to the heuristic-constrained engine.
struct HybridPolicy {
  int clause_threshold = 5000;
};

struct CountResult {
  long long count = 0;
  bool complete = false;
};

struct OracleReport {
  EnumerationResult result;
  std::vector<std::vector<int>> cores;
  std::vector<std::vector<int>> mcses;
};

// Exhaustive 2^ncl sweep. Refuses formulas above max_clauses.
OracleReport oracle_enumerate(const CnfFormula& f, int max_clauses = 20);

// P_F -> answer sets -> subset-minimal filter over the selectors. Bound by
// the aspsem brute-force cap, so desk-scale only.
EnumerationResult asp_route_enumerate(const CnfFormula& f,
                                      const EncodingOptions& opts = {});

// Deletion-based extraction over the seed in descending index order, with
// clause-set refinement from each unsat answer. The seed must be
// unsatisfiable.
std::vector<int> shrink(const CnfFormula& f, const std::vector<int>& seed);

// MARCO-style loop: maximal unexplored selector sets from a map solver
// carrying the bundle's constraints; unsat seeds shrink to MUSes (blocked
// from above), sat seeds grow to MSSes (complement blocked from below).
EnumerationResult seed_shrink_enumerate(const CnfFormula& f,
                                        const HeuristicBundle& bundle = {},
                                        const Budget& budget = {});

EnumerationResult hybrid_enumerate(const CnfFormula& f,
                                   const HybridPolicy& policy = {},
                                   const EncodingOptions& opts = {},
                                   const Budget& budget = {});

CountResult count_mus(const CnfFormula& f, const Budget& budget = {},
                      const EncodingOptions& opts = {});

}  // namespace muskit

#endif
