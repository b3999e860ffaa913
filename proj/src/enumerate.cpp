#include "muskit/enumerate.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <set>

#include "muskit/aspsem.hpp"
#include "muskit/satcore.hpp"

namespace muskit {

namespace {

using Clock = std::chrono::steady_clock;

std::chrono::milliseconds since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               start);
}

constexpr std::size_t kMapPairThreshold = 1000000;

}  // namespace

std::string engine_name(Engine e) {
  switch (e) {
    case Engine::AspRoute: return "asp-route";
    case Engine::SeedShrink: return "seed-shrink";
    case Engine::Hybrid: return "hybrid";
    case Engine::Oracle: return "oracle";
  }
  return "unknown";
}

OracleReport oracle_enumerate(const CnfFormula& f, int max_clauses) {
  auto start = Clock::now();
  if (f.ncl() > max_clauses || f.ncl() > 25)
    throw asp::BruteForceCapExceeded("oracle limited to " +
                                     std::to_string(std::min(max_clauses, 25)) +
                                     " clauses");
  const int n = f.ncl();
  const std::uint32_t total = std::uint32_t{1} << n;
  std::vector<char> is_unsat(total, 0);
  SatInstance inst(f);

  std::vector<int> active;
  for (std::uint32_t m = 0; m < total; ++m) {
    bool known = false;
    for (int b = 0; b < n && !known; ++b)
      if ((m >> b) & 1u)
        known = is_unsat[m & ~(std::uint32_t{1} << b)] != 0;
    if (known) {
      is_unsat[m] = 1;
      continue;
    }
    active.clear();
    for (int b = 0; b < n; ++b)
      if ((m >> b) & 1u) active.push_back(b + 1);
    if (inst.solve(active).unsat()) is_unsat[m] = 1;
  }

  auto indices_of = [n](std::uint32_t m) {
    std::vector<int> out;
    for (int b = 0; b < n; ++b)
      if ((m >> b) & 1u) out.push_back(b + 1);
    return out;
  };

  OracleReport report;
  for (std::uint32_t m = 0; m < total; ++m) {
    if (is_unsat[m]) {
      report.cores.push_back(indices_of(m));
      bool minimal = true;
      for (int b = 0; b < n && minimal; ++b)
        if ((m >> b) & 1u)
          minimal = is_unsat[m ^ (std::uint32_t{1} << b)] == 0;
      if (minimal) report.result.muses.push_back(indices_of(m));
    } else if (is_unsat[total - 1]) {
      bool maximal = true;
      for (int b = 0; b < n && maximal; ++b)
        if (!((m >> b) & 1u))
          maximal = is_unsat[m | (std::uint32_t{1} << b)] != 0;
      if (maximal) report.mcses.push_back(indices_of(~m & (total - 1)));
    }
  }

  report.result.complete = true;
  report.result.count = static_cast<long long>(report.result.muses.size());
  report.result.engine = Engine::Oracle;
  report.result.elapsed = since(start);
  return report;
}

EnumerationResult asp_route_enumerate(const CnfFormula& f,
                                      const EncodingOptions& opts) {
  auto start = Clock::now();
  auto program = build_program(f, opts);
  auto answer_sets = asp::enumerate_answer_sets(program);
  auto sel = selector_set(f);
  std::set<asp::Atom> lambda(sel.begin(), sel.end());
  auto minimal = asp::subset_minimal_filter(answer_sets, lambda);

  EnumerationResult res;
  res.engine = Engine::AspRoute;
  res.complete = true;
  for (const auto& m : minimal) res.muses.push_back(asp::cls_indices(m));
  std::sort(res.muses.begin(), res.muses.end());
  res.count = static_cast<long long>(res.muses.size());
  res.elapsed = since(start);
  return res;
}

namespace {

// Deletion loop sharing the caller's instance; empty on budget exhaustion.
std::optional<std::vector<int>> shrink_with(SatInstance& inst,
                                            std::vector<int> working,
                                            const sat::Limits& lim) {
  const int n = inst.ncl();
  std::vector<char> in(static_cast<std::size_t>(n) + 1, 0);
  for (int i : working) in[static_cast<std::size_t>(i)] = 1;

  std::vector<int> order = working;
  std::sort(order.begin(), order.end(), std::greater<int>());
  std::vector<int> candidate;
  for (int i : order) {
    if (!in[static_cast<std::size_t>(i)]) continue;
    candidate.clear();
    for (int j : working)
      if (j != i && in[static_cast<std::size_t>(j)]) candidate.push_back(j);
    auto out = inst.solve(candidate, lim);
    if (out.unknown()) return std::nullopt;
    if (out.unsat()) {
      std::fill(in.begin(), in.end(), 0);
      for (int j : out.failed_assumptions) in[static_cast<std::size_t>(j)] = 1;
      working = out.failed_assumptions;
    }
  }

  std::vector<int> mus;
  for (int i = 1; i <= n; ++i)
    if (in[static_cast<std::size_t>(i)]) mus.push_back(i);
  return mus;
}

#ifndef NDEBUG
void assert_is_mus(SatInstance& inst, const std::vector<int>& mus) {
  assert(inst.solve(mus).unsat());
  for (int drop : mus) {
    std::vector<int> rest;
    for (int i : mus)
      if (i != drop) rest.push_back(i);
    assert(inst.solve(rest).sat());
  }
}
#endif

void load_map_constraints(sat::Solver& map, const HeuristicBundle& bundle,
                          int ncl) {
  if (bundle.mcses)
    for (const auto& mcs : bundle.mcses->mcses) map.add_clause(mcs);

  if (bundle.components && bundle.components->size() > 1) {
    const auto& comps = *bundle.components;
    std::uint64_t total = 0;
    std::uint64_t same = 0;
    for (const auto& c : comps) {
      total += c.size();
      same += static_cast<std::uint64_t>(c.size()) * c.size();
    }
    if ((total * total - same) / 2 <= kMapPairThreshold) {
      for (std::size_t a = 0; a < comps.size(); ++a)
        for (std::size_t b = a + 1; b < comps.size(); ++b)
          for (int i : comps[a])
            for (int j : comps[b]) map.add_clause({-i, -j});
    } else {
      int prev = 0;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        int le = map.new_var();
        if (prev) map.add_clause({-prev, le});
        for (int i : comps[c]) {
          map.add_clause({-i, le});
          if (prev) map.add_clause({-i, -prev});
        }
        prev = le;
      }
    }
  }

  if (bundle.cover_rules)
    for (const auto& r : *bundle.cover_rules) {
      std::vector<int> clause{-r.trigger};
      for (int j : r.candidates) clause.push_back(j);
      map.add_clause(clause);
    }

  if (bundle.union_overapprox) {
    std::vector<char> keep(static_cast<std::size_t>(ncl) + 1, 0);
    for (int i : *bundle.union_overapprox)
      keep[static_cast<std::size_t>(i)] = 1;
    for (int i = 1; i <= ncl; ++i)
      if (!keep[static_cast<std::size_t>(i)]) map.add_clause({-i});
  }
}

}  // namespace

std::vector<int> shrink(const CnfFormula& f, const std::vector<int>& seed) {
  SatInstance inst(f);
  auto out = inst.solve(seed);
  if (!out.unsat()) throw std::invalid_argument("seed is satisfiable");
  return *shrink_with(inst, out.failed_assumptions, {});
}

EnumerationResult seed_shrink_enumerate(const CnfFormula& f,
                                        const HeuristicBundle& bundle,
                                        const Budget& budget) {
  auto start = Clock::now();
  const int n = f.ncl();
  EnumerationResult res;
  res.engine = Engine::SeedShrink;

  sat::Limits lim;
  lim.deadline = budget.deadline;

  SatInstance inst(f);
  sat::Solver map;
  map.ensure_vars(n);
  for (int i = 1; i <= n; ++i) map.set_phase(i, true);
  load_map_constraints(map, bundle, n);

  const CardBounds* bounds =
      bundle.card_bounds ? &*bundle.card_bounds : nullptr;

  auto finish = [&](bool complete) {
    res.complete = complete;
    res.count = static_cast<long long>(res.muses.size());
    res.elapsed = since(start);
    return res;
  };

  for (;;) {
    if (budget.max_muses >= 0 &&
        static_cast<long long>(res.muses.size()) >= budget.max_muses)
      return finish(false);

    auto status = map.solve({}, lim);
    if (status == sat::Status::Unsat) return finish(true);
    if (status == sat::Status::Unknown) return finish(false);

    std::vector<char> in(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i)
      if (map.model_value(i)) in[static_cast<std::size_t>(i)] = 1;

    std::vector<int> assumptions;
    for (int i = 1; i <= n; ++i) {
      if (in[static_cast<std::size_t>(i)]) continue;
      assumptions.clear();
      assumptions.push_back(i);
      for (int j = 1; j <= n; ++j)
        if (in[static_cast<std::size_t>(j)]) assumptions.push_back(j);
      auto r = map.solve(assumptions, lim);
      if (r == sat::Status::Unknown) return finish(false);
      if (r == sat::Status::Sat)
        for (int j = 1; j <= n; ++j)
          if (map.model_value(j)) in[static_cast<std::size_t>(j)] = 1;
    }

    std::vector<int> seed;
    for (int i = 1; i <= n; ++i)
      if (in[static_cast<std::size_t>(i)]) seed.push_back(i);

    // With sound bounds a seed below lb cannot be unsatisfiable; the solve
    // still decides, so unsound bounds cannot corrupt the result.
    bool must_sat = bounds && static_cast<int>(seed.size()) < bounds->lb;
    (void)must_sat;

    auto out = inst.solve(seed, lim);
    if (out.unknown()) return finish(false);

    if (out.unsat()) {
      auto mus = shrink_with(inst, out.failed_assumptions, lim);
      if (!mus) return finish(false);
#ifndef NDEBUG
      assert_is_mus(inst, *mus);
      assert(!must_sat);
      assert(!bounds || (static_cast<int>(mus->size()) >= bounds->lb &&
                         static_cast<int>(mus->size()) <= bounds->ub));
#endif
      std::vector<int> block;
      for (int i : *mus) block.push_back(-i);
      map.add_clause(block);
      res.muses.push_back(std::move(*mus));
      continue;
    }

    auto adopt = [&](const Assignment& model) {
      for (int j = 1; j <= n; ++j)
        if (!in[static_cast<std::size_t>(j)] &&
            evaluate(f.clause(j), model) == Eval::Satisfied)
          in[static_cast<std::size_t>(j)] = 1;
    };
    adopt(out.model);

    bool aborted = false;
    for (int i = 1; i <= n && !aborted; ++i) {
      if (in[static_cast<std::size_t>(i)]) continue;
      assumptions.clear();
      assumptions.push_back(i);
      for (int j = 1; j <= n; ++j)
        if (in[static_cast<std::size_t>(j)]) assumptions.push_back(j);
      auto r = inst.solve(assumptions, lim);
      if (r.unknown()) aborted = true;
      if (r.sat()) {
        in[static_cast<std::size_t>(i)] = 1;
        adopt(r.model);
      }
    }
    if (aborted) return finish(false);

    std::vector<int> mcs;
    for (int i = 1; i <= n; ++i)
      if (!in[static_cast<std::size_t>(i)]) mcs.push_back(i);
    map.add_clause(mcs);
  }
}

namespace {

BundleBudget bundle_slice(const Budget& budget) {
  BundleBudget bb;
  if (budget.deadline) {
    auto now = Clock::now();
    auto slice = (*budget.deadline - now) / 10;
    if (slice < Clock::duration::zero()) slice = Clock::duration::zero();
    bb.mcs.deadline = now + slice;
    bb.maxsat.deadline = now + slice;
  }
  return bb;
}

}  // namespace

EnumerationResult hybrid_enumerate(const CnfFormula& f,
                                   const HybridPolicy& policy,
                                   const EncodingOptions& opts,
                                   const Budget& budget) {
  if (policy.clause_threshold <= 0)
    throw std::invalid_argument("clause threshold must be positive");
  auto start = Clock::now();

  EnumerationResult res;
  if (f.ncl() < policy.clause_threshold) {
    HeuristicBundle bundle;
    if (opts.bundle)
      bundle = *opts.bundle;
    else if (opts.heuristics_enabled.any())
      bundle = compute_bundle(f, opts.heuristics_enabled, bundle_slice(budget));
    res = seed_shrink_enumerate(f, bundle, budget);
    res.engine = Engine::AspRoute;
  } else {
    res = seed_shrink_enumerate(f, {}, budget);
  }
  res.elapsed = since(start);
  return res;
}

CountResult count_mus(const CnfFormula& f, const Budget& budget,
                      const EncodingOptions& opts) {
  auto res = hybrid_enumerate(f, {}, opts, budget);
  return {res.count, res.complete};
}

}  // namespace muskit
