#ifndef MUSKIT_HEURISTICS_HPP
#define MUSKIT_HEURISTICS_HPP

#include <chrono>
#include <optional>
#include <utility>
#include <vector>

#include "muskit/cnf.hpp"
#include "muskit/satcore.hpp"

namespace muskit {

struct HeuristicFlags {
  bool h1 = false;
  bool h2 = false;
  bool h3 = false;
  bool h4 = false;
  bool h5 = false;

  static HeuristicFlags all() { return {true, true, true, true, true}; }
  static HeuristicFlags none() { return {}; }
  bool any() const { return h1 || h2 || h3 || h4 || h5; }
  bool operator==(const HeuristicFlags&) const = default;
};

struct McsResult {
  std::vector<std::vector<int>> mcses;
  bool complete = false;
  bool formula_satisfiable = false;
};

struct McsBudget {
  int max_mcses = -1;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct CardBounds {
  int lb = 0;
  int ub = 0;
  bool ub_exact = true;
  bool operator==(const CardBounds&) const = default;
};

struct CoverRule {
  int trigger = 0;
  std::vector<int> candidates;
  bool operator==(const CoverRule&) const = default;
};

// Clause graph: edge between C_j and C_k when some literal occurs in C_j
// and its negation in C_k. Returns the connected components as sorted
// index lists, ordered by smallest member.
std::vector<std::vector<int>> components(const CnfFormula& f);

// Maximal-satisfiable-subset iteration; each complement is an MCS. Found
// MCSes are blocked; complete=true means every MCS was found.
McsResult enumerate_mcs(const CnfFormula& f, const McsBudget& budget = {});

// Lean kernel by iterated autarky elimination: a superset of the union of
// all MUSes. Pure-literal rounds first, then one SAT query per autarky.
std::vector<int> union_overapprox(const CnfFormula& f);

// lb: exact minimum hitting set of the known MCS collection.
// ub: opt+1 where opt = max simultaneously satisfiable clause count,
// by linear-search MaxSAT; on budget exhaustion falls back to
// fallback_ub (or the lean kernel size).
CardBounds card_bounds(const CnfFormula& f,
                       const std::vector<std::vector<int>>& mcses,
                       const sat::Limits& maxsat_limits = {},
                       std::optional<int> fallback_ub = {});

// One entry per (clause, literal) pair: the clauses containing the negated
// literal. An empty candidate list means the trigger can be in no MUS.
std::vector<CoverRule> cover_rules(const CnfFormula& f);

struct HeuristicBundle {
  std::optional<std::vector<int>> union_overapprox;
  std::optional<CardBounds> card_bounds;
  std::optional<std::vector<std::vector<int>>> components;
  std::optional<McsResult> mcses;
  std::optional<std::vector<CoverRule>> cover_rules;
};

struct BundleBudget {
  McsBudget mcs;
  sat::Limits maxsat;
};

HeuristicBundle compute_bundle(const CnfFormula& f, HeuristicFlags flags,
                               const BundleBudget& budget = {});

}  // namespace muskit

#endif
