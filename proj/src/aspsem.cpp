#include "muskit/aspsem.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

namespace muskit::asp {

std::string Atom::text() const {
  switch (kind) {
    case Kind::Cls:
      return "cls_(" + std::to_string(arg) + ")";
    case Kind::Pos:
      return "pos_x" + std::to_string(arg);
    case Kind::Neg:
      return "neg_x" + std::to_string(arg);
    case Kind::Unsat:
      return "unsat";
    case Kind::Other:
      return name;
  }
  return {};
}

void AspRule::normalize() {
  auto tidy = [](std::vector<Atom>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  tidy(head);
  tidy(body_pos);
  tidy(body_neg);
}

AspRule AspRule::fact(Atom a) { return disjunctive({std::move(a)}); }

AspRule AspRule::disjunctive(std::vector<Atom> head,
                             std::vector<Atom> body_pos,
                             std::vector<Atom> body_neg) {
  AspRule r;
  r.form = RuleForm::Disjunctive;
  r.head = std::move(head);
  r.body_pos = std::move(body_pos);
  r.body_neg = std::move(body_neg);
  r.normalize();
  return r;
}

AspRule AspRule::constraint(std::vector<Atom> body_pos,
                            std::vector<Atom> body_neg) {
  return disjunctive({}, std::move(body_pos), std::move(body_neg));
}

AspRule AspRule::cardinality(std::vector<Atom> head, int lb,
                             std::vector<Atom> body_pos,
                             std::vector<Atom> body_neg) {
  AspRule r;
  r.form = RuleForm::Cardinality;
  r.head = std::move(head);
  r.lb = lb;
  r.body_pos = std::move(body_pos);
  r.body_neg = std::move(body_neg);
  r.normalize();
  return r;
}

std::vector<Atom> AspProgram::atoms() const {
  std::set<Atom> acc;
  for (const AspRule& r : rules) {
    acc.insert(r.head.begin(), r.head.end());
    acc.insert(r.body_pos.begin(), r.body_pos.end());
    acc.insert(r.body_neg.begin(), r.body_neg.end());
  }
  return {acc.begin(), acc.end()};
}

namespace {

bool contains(const Interpretation& tau, const Atom& a) {
  return tau.count(a) != 0;
}

bool any_in(const Interpretation& tau, const std::vector<Atom>& atoms) {
  for (const Atom& a : atoms)
    if (contains(tau, a)) return true;
  return false;
}

bool all_in(const Interpretation& tau, const std::vector<Atom>& atoms) {
  for (const Atom& a : atoms)
    if (!contains(tau, a)) return false;
  return true;
}

int count_in(const Interpretation& tau, const std::vector<Atom>& atoms) {
  int n = 0;
  for (const Atom& a : atoms)
    if (contains(tau, a)) ++n;
  return n;
}

}  // namespace

bool satisfies_rule(const Interpretation& tau, const AspRule& r) {
  if (any_in(tau, r.body_neg)) return true;
  if (!all_in(tau, r.body_pos)) return true;
  if (r.form == RuleForm::Disjunctive) return any_in(tau, r.head);
  return count_in(tau, r.head) >= r.lb;
}

bool satisfies(const Interpretation& tau, const AspProgram& p) {
  for (const AspRule& r : p.rules)
    if (!satisfies_rule(tau, r)) return false;
  if (p.cap && count_in(tau, p.cap->over) > p.cap->max_true) return false;
  return true;
}

AspProgram gl_reduct(const AspProgram& p, const Interpretation& tau) {
  AspProgram out;
  for (const AspRule& r : p.rules) {
    if (any_in(tau, r.body_neg)) continue;
    if (r.form == RuleForm::Disjunctive) {
      out.rules.push_back(AspRule::disjunctive(r.head, r.body_pos));
    } else {
      for (const Atom& a : r.head)
        if (contains(tau, a))
          out.rules.push_back(AspRule::disjunctive({a}, r.body_pos));
    }
  }
  return out;
}

namespace {

using Mask = std::uint64_t;

struct CompiledReduct {
  // (head restricted to m, positive body); satisfied by s iff
  // body ⊄ s or head ∩ s ≠ ∅.
  std::vector<std::pair<Mask, Mask>> rules;
};

struct Compiled {
  std::vector<Atom> atoms;
  struct Rule {
    RuleForm form;
    Mask head, bpos, bneg;
    int lb;
  };
  std::vector<Rule> rules;
  Mask cap_mask = 0;
  int cap_max = -1;

  int index_of(const Atom& a) const {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), a);
    return static_cast<int>(it - atoms.begin());
  }
  Mask mask_of(const std::vector<Atom>& v) const {
    Mask m = 0;
    for (const Atom& a : v) m |= Mask{1} << index_of(a);
    return m;
  }
  Mask mask_of(const Interpretation& tau) const {
    Mask m = 0;
    for (const Atom& a : tau) m |= Mask{1} << index_of(a);
    return m;
  }
  Interpretation interp_of(Mask m) const {
    Interpretation tau;
    for (size_t i = 0; i < atoms.size(); ++i)
      if (m & (Mask{1} << i)) tau.insert(atoms[i]);
    return tau;
  }

  bool is_model(Mask m) const {
    for (const Rule& r : rules) {
      if (r.bneg & m) continue;
      if (r.bpos & ~m) continue;
      if (r.form == RuleForm::Disjunctive) {
        if (!(r.head & m)) return false;
      } else {
        if (std::popcount(r.head & m) < r.lb) return false;
      }
    }
    if (cap_max >= 0 && std::popcount(cap_mask & m) > cap_max) return false;
    return true;
  }

  CompiledReduct reduct_for(Mask m) const {
    CompiledReduct out;
    for (const Rule& r : rules) {
      if (r.bneg & m) continue;
      if (r.form == RuleForm::Disjunctive) {
        out.rules.emplace_back(r.head & m, r.bpos);
      } else {
        Mask sel = r.head & m;
        while (sel) {
          Mask bit = sel & (~sel + 1);
          out.rules.emplace_back(bit, r.bpos);
          sel ^= bit;
        }
      }
    }
    return out;
  }

  // No proper subset of m satisfies the reduct of p w.r.t. m. Assumes m is
  // a model. Atoms forced by singleton-head rules with satisfied bodies are
  // pinned first; only the remainder is searched.
  bool minimal_wrt_reduct(Mask m) const {
    CompiledReduct red = reduct_for(m);
    Mask forced = 0;
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& [head, bpos] : red.rules) {
        if (bpos & ~forced) continue;
        if ((head & ~forced) != 0 && std::popcount(head) == 1) {
          forced |= head;
          changed = true;
        }
      }
    }
    if (forced == m) return true;

    const Mask free = m & ~forced;
    auto sat = [&](Mask cand) {
      for (const auto& [head, bpos] : red.rules) {
        if (bpos & ~cand) continue;
        if (!(head & cand)) return false;
      }
      return true;
    };
    for (Mask s = (free - 1) & free;; s = (s - 1) & free) {
      if (sat(forced | s)) return false;
      if (s == 0) break;
    }
    return true;
  }
};

Compiled compile(const AspProgram& p, const Interpretation& extra = {}) {
  Compiled c;
  std::set<Atom> acc;
  for (const AspRule& r : p.rules) {
    acc.insert(r.head.begin(), r.head.end());
    acc.insert(r.body_pos.begin(), r.body_pos.end());
    acc.insert(r.body_neg.begin(), r.body_neg.end());
  }
  if (p.cap) acc.insert(p.cap->over.begin(), p.cap->over.end());
  acc.insert(extra.begin(), extra.end());
  c.atoms.assign(acc.begin(), acc.end());

  for (const AspRule& r : p.rules) {
    Compiled::Rule cr;
    cr.form = r.form;
    cr.head = c.mask_of(r.head);
    cr.bpos = c.mask_of(r.body_pos);
    cr.bneg = c.mask_of(r.body_neg);
    cr.lb = r.lb;
    c.rules.push_back(cr);
  }
  if (p.cap) {
    c.cap_mask = c.mask_of(p.cap->over);
    c.cap_max = p.cap->max_true;
  }
  return c;
}

}  // namespace

bool is_answer_set(const AspProgram& p, const Interpretation& m) {
  Compiled c = compile(p, m);
  Mask mm = c.mask_of(m);
  if (!c.is_model(mm)) return false;
  return c.minimal_wrt_reduct(mm);
}

std::vector<Interpretation> enumerate_models(const AspProgram& p,
                                             int max_atoms) {
  Compiled c = compile(p);
  const int n = static_cast<int>(c.atoms.size());
  if (n > max_atoms)
    throw BruteForceCapExceeded("program has " + std::to_string(n) +
                                " atoms, brute-force cap is " +
                                std::to_string(max_atoms));
  std::vector<Interpretation> out;
  const Mask total = Mask{1} << n;
  for (Mask m = 0; m < total; ++m)
    if (c.is_model(m)) out.push_back(c.interp_of(m));
  return out;
}

std::vector<Interpretation> enumerate_answer_sets(const AspProgram& p,
                                                  int max_atoms) {
  Compiled c = compile(p);
  const int n = static_cast<int>(c.atoms.size());
  if (n > max_atoms)
    throw BruteForceCapExceeded("program has " + std::to_string(n) +
                                " atoms, brute-force cap is " +
                                std::to_string(max_atoms));
  std::vector<Interpretation> out;
  const Mask total = Mask{1} << n;
  for (Mask m = 0; m < total; ++m)
    if (c.is_model(m) && c.minimal_wrt_reduct(m))
      out.push_back(c.interp_of(m));
  return out;
}

std::vector<Interpretation> subset_minimal_filter(
    const std::vector<Interpretation>& sets, const std::set<Atom>& over) {
  std::vector<Interpretation> projections;
  projections.reserve(sets.size());
  for (const auto& s : sets) projections.push_back(project(s, over));

  std::vector<Interpretation> out;
  for (size_t i = 0; i < sets.size(); ++i) {
    bool minimal = true;
    for (size_t j = 0; j < sets.size(); ++j) {
      if (i == j) continue;
      if (projections[j] != projections[i] &&
          std::includes(projections[i].begin(), projections[i].end(),
                        projections[j].begin(), projections[j].end())) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(sets[i]);
  }
  return out;
}

Interpretation project(const Interpretation& tau, const std::set<Atom>& over) {
  Interpretation out;
  for (const Atom& a : tau)
    if (over.count(a)) out.insert(a);
  return out;
}

std::vector<int> cls_indices(const Interpretation& tau) {
  std::vector<int> out;
  for (const Atom& a : tau)
    if (a.kind == Atom::Kind::Cls) out.push_back(a.arg);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace muskit::asp
