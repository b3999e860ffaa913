#include "muskit/heuristics.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace muskit {

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] =
          parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

std::vector<std::vector<int>> components(const CnfFormula& f) {
  const int n = f.ncl();
  Dsu dsu(n + 1);

  // occ[2v] = clauses containing x_v, occ[2v+1] = clauses containing ~x_v
  std::vector<std::vector<int>> occ(2 * static_cast<size_t>(f.nvars) + 2);
  for (const Clause& c : f.clauses)
    for (Literal l : c.literals) {
      size_t slot = 2 * static_cast<size_t>(l.var().id) + (l.positive() ? 0 : 1);
      occ[slot].push_back(c.index);
    }

  for (int v = 1; v <= f.nvars; ++v) {
    const auto& pos = occ[2 * static_cast<size_t>(v)];
    const auto& neg = occ[2 * static_cast<size_t>(v) + 1];
    if (pos.empty() || neg.empty()) continue;
    for (size_t i = 1; i < pos.size(); ++i) dsu.unite(pos[0], pos[i]);
    for (int k : neg) dsu.unite(pos[0], k);
  }

  std::map<int, std::vector<int>> by_root;
  for (int i = 1; i <= n; ++i) by_root[dsu.find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  out.reserve(by_root.size());
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  return out;
}

McsResult enumerate_mcs(const CnfFormula& f, const McsBudget& budget) {
  McsResult res;
  const int n = f.ncl();
  SatInstance inst(f);
  for (int i = 1; i <= n; ++i) inst.solver().set_phase(i, true);
  sat::Limits lim;
  lim.deadline = budget.deadline;

  std::vector<int> all(static_cast<size_t>(n));
  std::iota(all.begin(), all.end(), 1);
  auto full = inst.solve(all, lim);
  if (full.unknown()) return res;
  if (full.sat()) {
    res.formula_satisfiable = true;
    res.complete = true;
    return res;
  }

  for (;;) {
    if (budget.max_mcses >= 0 &&
        static_cast<int>(res.mcses.size()) >= budget.max_mcses)
      return res;

    auto seed = inst.solve({}, lim);
    if (seed.unknown()) return res;
    if (seed.unsat()) {
      res.complete = true;
      return res;
    }

    std::vector<char> in(static_cast<size_t>(n) + 1, 0);
    auto adopt = [&](const Assignment& model) {
      for (int j = 1; j <= n; ++j)
        if (!in[static_cast<size_t>(j)] &&
            evaluate(f.clause(j), model) == Eval::Satisfied)
          in[static_cast<size_t>(j)] = 1;
    };
    adopt(seed.model);

    for (int i = 1; i <= n; ++i) {
      if (in[static_cast<size_t>(i)]) continue;
      std::vector<int> assumptions{i};
      for (int j = 1; j <= n; ++j)
        if (in[static_cast<size_t>(j)]) assumptions.push_back(j);
      auto r = inst.solve(assumptions, lim);
      if (r.unknown()) return res;
      if (r.sat()) {
        in[static_cast<size_t>(i)] = 1;
        adopt(r.model);
      }
    }

    std::vector<int> mcs;
    for (int i = 1; i <= n; ++i)
      if (!in[static_cast<size_t>(i)]) mcs.push_back(i);
    res.mcses.push_back(mcs);
    inst.add_selector_clause(mcs);
  }
}

namespace {

// Removes clauses whose chosen literal has no negated occurrence among the
// live clauses; iterates to fixpoint.
void pure_literal_rounds(const CnfFormula& f, std::vector<char>& alive) {
  const int n = f.ncl();
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<int> count(2 * static_cast<size_t>(f.nvars) + 2, 0);
    for (int i = 1; i <= n; ++i) {
      if (!alive[static_cast<size_t>(i)]) continue;
      for (Literal l : f.clause(i).literals)
        ++count[2 * static_cast<size_t>(l.var().id) + (l.positive() ? 0 : 1)];
    }
    for (int v = 1; v <= f.nvars; ++v) {
      const int pos = count[2 * static_cast<size_t>(v)];
      const int neg = count[2 * static_cast<size_t>(v) + 1];
      bool drop_pos = pos > 0 && neg == 0;
      bool drop_neg = neg > 0 && pos == 0;
      if (!drop_pos && !drop_neg) continue;
      for (int i = 1; i <= n; ++i) {
        if (!alive[static_cast<size_t>(i)]) continue;
        for (Literal l : f.clause(i).literals) {
          if (l.var().id != v) continue;
          if ((drop_pos && l.positive()) || (drop_neg && !l.positive())) {
            alive[static_cast<size_t>(i)] = 0;
            changed = true;
            break;
          }
        }
      }
    }
  }
}

}  // namespace

std::vector<int> union_overapprox(const CnfFormula& f) {
  const int n = f.ncl();
  std::vector<char> alive(static_cast<size_t>(n) + 1, 1);
  pure_literal_rounds(f, alive);

  for (;;) {
    std::vector<int> live;
    for (int i = 1; i <= n; ++i)
      if (alive[static_cast<size_t>(i)]) live.push_back(i);
    if (live.empty()) break;

    std::vector<char> used_var(static_cast<size_t>(f.nvars) + 1, 0);
    for (int i : live)
      for (Literal l : f.clause(i).literals)
        used_var[static_cast<size_t>(l.var().id)] = 1;

    // Autarky search: touch[v], pol[v], plus witness variables saying the
    // autarky satisfies x_v / ~x_v.
    sat::Solver s;
    std::vector<int> touch(static_cast<size_t>(f.nvars) + 1, 0);
    std::vector<int> pol(touch.size(), 0), wit_pos(touch.size(), 0),
        wit_neg(touch.size(), 0);
    for (int v = 1; v <= f.nvars; ++v) {
      if (!used_var[static_cast<size_t>(v)]) continue;
      touch[static_cast<size_t>(v)] = s.new_var();
      pol[static_cast<size_t>(v)] = s.new_var();
      wit_pos[static_cast<size_t>(v)] = s.new_var();
      wit_neg[static_cast<size_t>(v)] = s.new_var();
      s.add_clause({-wit_pos[static_cast<size_t>(v)],
                    touch[static_cast<size_t>(v)]});
      s.add_clause({-wit_pos[static_cast<size_t>(v)],
                    pol[static_cast<size_t>(v)]});
      s.add_clause({-wit_neg[static_cast<size_t>(v)],
                    touch[static_cast<size_t>(v)]});
      s.add_clause({-wit_neg[static_cast<size_t>(v)],
                    -pol[static_cast<size_t>(v)]});
      s.set_phase(touch[static_cast<size_t>(v)], true);
    }

    for (int i : live) {
      const Clause& c = f.clause(i);
      std::vector<int> witnesses;
      for (Literal l : c.literals)
        witnesses.push_back(l.positive()
                                ? wit_pos[static_cast<size_t>(l.var().id)]
                                : wit_neg[static_cast<size_t>(l.var().id)]);
      for (Literal l : c.literals) {
        std::vector<int> cl{-touch[static_cast<size_t>(l.var().id)]};
        cl.insert(cl.end(), witnesses.begin(), witnesses.end());
        s.add_clause(cl);
      }
    }

    std::vector<int> nontrivial;
    for (int v = 1; v <= f.nvars; ++v)
      if (touch[static_cast<size_t>(v)]) nontrivial.push_back(touch[static_cast<size_t>(v)]);
    s.add_clause(nontrivial);

    if (s.solve() != sat::Status::Sat) break;

    for (int i : live) {
      for (Literal l : f.clause(i).literals) {
        const int tv = touch[static_cast<size_t>(l.var().id)];
        if (tv && s.model_value(tv)) {
          alive[static_cast<size_t>(i)] = 0;
          break;
        }
      }
    }
  }

  std::vector<int> out;
  for (int i = 1; i <= n; ++i)
    if (alive[static_cast<size_t>(i)]) out.push_back(i);
  return out;
}

namespace {

struct HittingSearch {
  const std::vector<std::vector<int>>& sets;
  int best;

  void run(std::vector<int>& chosen, size_t depth) {
    if (static_cast<int>(chosen.size()) >= best) return;
    const std::vector<int>* unhit = nullptr;
    for (const auto& s : sets) {
      bool hit = false;
      for (int e : s)
        if (std::find(chosen.begin(), chosen.end(), e) != chosen.end()) {
          hit = true;
          break;
        }
      if (!hit) {
        unhit = &s;
        break;
      }
    }
    if (!unhit) {
      best = static_cast<int>(chosen.size());
      return;
    }
    for (int e : *unhit) {
      chosen.push_back(e);
      run(chosen, depth + 1);
      chosen.pop_back();
    }
  }
};

}  // namespace

CardBounds card_bounds(const CnfFormula& f,
                       const std::vector<std::vector<int>>& mcses,
                       const sat::Limits& maxsat_limits,
                       std::optional<int> fallback_ub) {
  CardBounds out;
  const int n = f.ncl();

  if (!mcses.empty()) {
    HittingSearch search{mcses, n + 1};
    std::vector<int> chosen;
    search.run(chosen, 0);
    out.lb = search.best > n ? 0 : search.best;
  }

  // Linear-search MaxSAT, sat side: push the count of simultaneously
  // satisfiable clauses up until the next step is refuted.
  SatInstance inst(f);
  for (int i = 1; i <= n; ++i) inst.solver().set_phase(i, true);
  std::vector<int> neg_selectors;
  for (int i = 1; i <= n; ++i) neg_selectors.push_back(-i);

  int opt = -1;
  for (;;) {
    auto r = inst.solve({}, maxsat_limits);
    if (r.unknown()) {
      out.ub = fallback_ub ? *fallback_ub
                           : static_cast<int>(union_overapprox(f).size());
      out.ub_exact = false;
      out.lb = std::min(out.lb, out.ub);
      return out;
    }
    if (r.unsat()) break;
    int satisfied = 0;
    for (int i = 1; i <= n; ++i)
      if (evaluate(f.clause(i), r.model) == Eval::Satisfied) ++satisfied;
    opt = std::max(opt, satisfied);
    if (opt >= n) break;
    inst.solver().add_at_most_k(neg_selectors, n - (opt + 1));
  }
  out.ub = std::min(n, opt + 1);
  out.lb = std::min(out.lb, out.ub);
  return out;
}

std::vector<CoverRule> cover_rules(const CnfFormula& f) {
  std::vector<std::vector<int>> occ(2 * static_cast<size_t>(f.nvars) + 2);
  for (const Clause& c : f.clauses)
    for (Literal l : c.literals)
      occ[2 * static_cast<size_t>(l.var().id) + (l.positive() ? 0 : 1)]
          .push_back(c.index);

  std::vector<CoverRule> out;
  for (const Clause& c : f.clauses) {
    for (Literal l : c.literals) {
      const auto& negated =
          occ[2 * static_cast<size_t>(l.var().id) + (l.positive() ? 1 : 0)];
      out.push_back({c.index, negated});
    }
  }
  return out;
}

HeuristicBundle compute_bundle(const CnfFormula& f, HeuristicFlags flags,
                               const BundleBudget& budget) {
  HeuristicBundle b;
  if (flags.h3) b.components = components(f);
  if (flags.h5) b.cover_rules = cover_rules(f);

  McsResult mcs;
  if (flags.h4 || flags.h2) mcs = enumerate_mcs(f, budget.mcs);
  if (flags.h4) b.mcses = mcs;

  std::optional<std::vector<int>> kernel;
  if (flags.h1 || flags.h2) kernel = union_overapprox(f);
  if (flags.h1) b.union_overapprox = kernel;

  if (flags.h2) {
    if (mcs.formula_satisfiable)
      b.card_bounds = CardBounds{0, 0, true};
    else
      b.card_bounds = card_bounds(f, mcs.mcses, budget.maxsat,
                                  static_cast<int>(kernel->size()));
  }
  return b;
}

}  // namespace muskit
