#include "muskit/satcore.hpp"

#include <algorithm>
#include <cmath>

namespace muskit::sat {

int Solver::new_var() {
  int v = nvars();
  assigns_.push_back(0);
  level_.push_back(0);
  reason_.push_back(nullptr);
  activity_.push_back(0.0);
  polarity_.push_back(0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_pos_.push_back(-1);
  heap_insert(v);
  return v + 1;
}

void Solver::ensure_vars(int n) {
  while (nvars() < n) new_var();
}

void Solver::set_phase(int var, bool value) {
  ensure_vars(var);
  polarity_[static_cast<size_t>(var - 1)] = value ? 1 : 0;
}

bool Solver::model_value(int var) const {
  return model_[static_cast<size_t>(var - 1)] == 1;
}

void Solver::attach(Cls* c) {
  watches_[static_cast<size_t>(neg(c->lits[0]))].push_back({c, c->lits[1]});
  watches_[static_cast<size_t>(neg(c->lits[1]))].push_back({c, c->lits[0]});
}

void Solver::detach(Cls* c) {
  for (int w = 0; w < 2; ++w) {
    auto& list = watches_[static_cast<size_t>(neg(c->lits[w]))];
    for (size_t i = 0; i < list.size(); ++i) {
      if (list[i].c == c) {
        list[i] = list.back();
        list.pop_back();
        break;
      }
    }
  }
}

bool Solver::add_clause(std::vector<int> ext_lits) {
  if (!ok_) return false;

  std::vector<int> lits;
  lits.reserve(ext_lits.size());
  for (int e : ext_lits) {
    int v = e > 0 ? e : -e;
    ensure_vars(v);
    lits.push_back(ilit(e));
  }
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());

  std::vector<int> kept;
  for (size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && lits[i + 1] == neg(lits[i])) return true;
    if (lit_value(lits[i]) == 1 && level_[static_cast<size_t>(ivar(lits[i]))] == 0)
      return true;
    if (lit_value(lits[i]) == -1 && level_[static_cast<size_t>(ivar(lits[i]))] == 0)
      continue;
    kept.push_back(lits[i]);
  }

  if (kept.empty()) {
    ok_ = false;
    return false;
  }
  if (kept.size() == 1) {
    unchecked_enqueue(kept[0], nullptr);
    if (propagate() != nullptr) ok_ = false;
    return ok_;
  }
  auto c = std::make_unique<Cls>();
  c->lits = std::move(kept);
  attach(c.get());
  base_.push_back(std::move(c));
  return true;
}

void Solver::add_at_most_k(const std::vector<int>& lits, int k) {
  const int n = static_cast<int>(lits.size());
  if (k < 0) k = 0;
  if (k >= n) return;
  if (k == 0) {
    for (int e : lits) add_clause({-e});
    return;
  }
  // Sinz sequential counter: reg[i][j] true when at least j+1 of the first
  // i+1 inputs are true.
  std::vector<std::vector<int>> reg(static_cast<size_t>(n - 1),
                                    std::vector<int>(static_cast<size_t>(k)));
  for (auto& row : reg)
    for (int& v : row) v = new_var();

  add_clause({-lits[0], reg[0][0]});
  for (int j = 1; j < k; ++j) add_clause({-reg[0][static_cast<size_t>(j)]});
  for (int i = 1; i < n - 1; ++i) {
    add_clause({-lits[static_cast<size_t>(i)], reg[static_cast<size_t>(i)][0]});
    add_clause({-reg[static_cast<size_t>(i - 1)][0],
                reg[static_cast<size_t>(i)][0]});
    for (int j = 1; j < k; ++j) {
      add_clause({-lits[static_cast<size_t>(i)],
                  -reg[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)],
                  reg[static_cast<size_t>(i)][static_cast<size_t>(j)]});
      add_clause({-reg[static_cast<size_t>(i - 1)][static_cast<size_t>(j)],
                  reg[static_cast<size_t>(i)][static_cast<size_t>(j)]});
    }
    add_clause({-lits[static_cast<size_t>(i)],
                -reg[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)]});
  }
  add_clause({-lits[static_cast<size_t>(n - 1)],
              -reg[static_cast<size_t>(n - 2)][static_cast<size_t>(k - 1)]});
}

void Solver::unchecked_enqueue(int p, Cls* from) {
  int v = ivar(p);
  assigns_[static_cast<size_t>(v)] = (p & 1) ? -1 : 1;
  level_[static_cast<size_t>(v)] = decision_level();
  reason_[static_cast<size_t>(v)] = from;
  trail_.push_back(p);
}

Solver::Cls* Solver::propagate() {
  while (qhead_ < trail_.size()) {
    const int p = trail_[qhead_++];
    auto& ws = watches_[static_cast<size_t>(p)];
    const int false_lit = neg(p);
    size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (lit_value(w.blocker) == 1) {
        ws[j++] = ws[i++];
        continue;
      }
      Cls& c = *w.c;
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      ++i;
      const int first = c.lits[0];
      if (first != w.blocker && lit_value(first) == 1) {
        ws[j++] = {w.c, first};
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (lit_value(c.lits[k]) != -1) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[static_cast<size_t>(neg(c.lits[1]))].push_back({w.c, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.c, first};
      if (lit_value(first) == -1) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.c;
      }
      unchecked_enqueue(first, w.c);
    }
    ws.resize(j);
  }
  return nullptr;
}

void Solver::bump_var(int v) {
  activity_[static_cast<size_t>(v)] += var_inc_;
  if (activity_[static_cast<size_t>(v)] > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[static_cast<size_t>(v)] >= 0) heap_update_up(v);
}

void Solver::bump_cla(Cls& c) {
  c.act += cla_inc_;
  if (c.act > 1e20) {
    for (Cls* l : learnts_) l->act *= 1e-20;
    cla_inc_ *= 1e-20;
  }
}

void Solver::decay_activities() {
  var_inc_ /= 0.95;
  cla_inc_ /= 0.999;
}

void Solver::analyze(Cls* confl, std::vector<int>& out_learnt,
                     int& out_btlevel) {
  int path_count = 0;
  int p = -1;
  out_learnt.clear();
  out_learnt.push_back(-1);
  size_t index = trail_.size();

  do {
    Cls& c = *confl;
    if (c.learnt) bump_cla(c);
    for (size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
      const int q = c.lits[k];
      const int v = ivar(q);
      if (!seen_[static_cast<size_t>(v)] && level_[static_cast<size_t>(v)] > 0) {
        bump_var(v);
        seen_[static_cast<size_t>(v)] = 1;
        to_clear_.push_back(v);
        if (level_[static_cast<size_t>(v)] >= decision_level())
          ++path_count;
        else
          out_learnt.push_back(q);
      }
    }
    while (!seen_[static_cast<size_t>(ivar(trail_[--index]))]) {
    }
    p = trail_[index];
    confl = reason_[static_cast<size_t>(ivar(p))];
    seen_[static_cast<size_t>(ivar(p))] = 0;
    --path_count;
  } while (path_count > 0);
  out_learnt[0] = neg(p);

  size_t i, j;
  for (i = j = 1; i < out_learnt.size(); ++i) {
    const int v = ivar(out_learnt[i]);
    const Cls* r = reason_[static_cast<size_t>(v)];
    if (r == nullptr) {
      out_learnt[j++] = out_learnt[i];
      continue;
    }
    bool redundant = true;
    for (size_t k = 1; k < r->lits.size(); ++k) {
      const int rv = ivar(r->lits[k]);
      if (!seen_[static_cast<size_t>(rv)] &&
          level_[static_cast<size_t>(rv)] > 0) {
        redundant = false;
        break;
      }
    }
    if (!redundant) out_learnt[j++] = out_learnt[i];
  }
  out_learnt.resize(j);

  if (out_learnt.size() == 1) {
    out_btlevel = 0;
  } else {
    size_t max_i = 1;
    for (size_t k = 2; k < out_learnt.size(); ++k)
      if (level_[static_cast<size_t>(ivar(out_learnt[k]))] >
          level_[static_cast<size_t>(ivar(out_learnt[max_i]))])
        max_i = k;
    std::swap(out_learnt[1], out_learnt[max_i]);
    out_btlevel = level_[static_cast<size_t>(ivar(out_learnt[1]))];
  }

  for (int v : to_clear_) seen_[static_cast<size_t>(v)] = 0;
  to_clear_.clear();
}

void Solver::analyze_final(int p) {
  conflict_ext_.clear();
  conflict_ext_.push_back(ext(neg(p)));
  if (decision_level() == 0) return;

  seen_[static_cast<size_t>(ivar(p))] = 1;
  for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[0]; --i) {
    const int x = ivar(trail_[static_cast<size_t>(i)]);
    if (!seen_[static_cast<size_t>(x)]) continue;
    const Cls* r = reason_[static_cast<size_t>(x)];
    if (r == nullptr) {
      if (level_[static_cast<size_t>(x)] > 0)
        conflict_ext_.push_back(ext(trail_[static_cast<size_t>(i)]));
    } else {
      for (size_t k = 1; k < r->lits.size(); ++k) {
        const int rv = ivar(r->lits[k]);
        if (level_[static_cast<size_t>(rv)] > 0)
          seen_[static_cast<size_t>(rv)] = 1;
      }
    }
    seen_[static_cast<size_t>(x)] = 0;
  }
  seen_[static_cast<size_t>(ivar(p))] = 0;

  std::sort(conflict_ext_.begin(), conflict_ext_.end());
  conflict_ext_.erase(
      std::unique(conflict_ext_.begin(), conflict_ext_.end()),
      conflict_ext_.end());
}

void Solver::cancel_until(int target) {
  if (decision_level() <= target) return;
  for (int i = static_cast<int>(trail_.size()) - 1;
       i >= trail_lim_[static_cast<size_t>(target)]; --i) {
    const int p = trail_[static_cast<size_t>(i)];
    const int v = ivar(p);
    polarity_[static_cast<size_t>(v)] = (p & 1) ? 0 : 1;
    assigns_[static_cast<size_t>(v)] = 0;
    reason_[static_cast<size_t>(v)] = nullptr;
    if (heap_pos_[static_cast<size_t>(v)] < 0) heap_insert(v);
  }
  trail_.resize(static_cast<size_t>(trail_lim_[static_cast<size_t>(target)]));
  trail_lim_.resize(static_cast<size_t>(target));
  qhead_ = trail_.size();
}

int Solver::pick_branch_lit() {
  while (!heap_.empty()) {
    const int v = heap_pop();
    if (assigns_[static_cast<size_t>(v)] == 0)
      return polarity_[static_cast<size_t>(v)] ? (v << 1) : ((v << 1) | 1);
  }
  return -1;
}

void Solver::reduce_db() {
  std::sort(learnts_.begin(), learnts_.end(), [](const Cls* a, const Cls* b) {
    if (a->lits.size() == 2 && b->lits.size() > 2) return false;
    if (b->lits.size() == 2 && a->lits.size() > 2) return true;
    return a->act < b->act;
  });
  const size_t target = learnts_.size() / 2;
  std::vector<Cls*> keep;
  keep.reserve(learnts_.size());
  size_t removed = 0;
  for (size_t i = 0; i < learnts_.size(); ++i) {
    Cls* c = learnts_[i];
    const int v0 = ivar(c->lits[0]);
    const bool locked = reason_[static_cast<size_t>(v0)] == c &&
                        assigns_[static_cast<size_t>(v0)] != 0;
    if (removed < target && !locked && c->lits.size() > 2) {
      detach(c);
      c->act = -1.0;
      ++removed;
    } else {
      keep.push_back(c);
    }
  }
  learnts_.swap(keep);
  learnts_store_.erase(
      std::remove_if(learnts_store_.begin(), learnts_store_.end(),
                     [](const std::unique_ptr<Cls>& p) { return p->act < 0; }),
      learnts_store_.end());
}

bool Solver::budget_exhausted(const Limits& limits) const {
  if (limits.max_conflicts >= 0 &&
      conflicts_ - solve_start_conflicts_ >= limits.max_conflicts)
    return true;
  if (limits.deadline &&
      std::chrono::steady_clock::now() >= *limits.deadline)
    return true;
  return false;
}

Solver::Inner Solver::search(std::int64_t restart_conflicts,
                             const Limits& limits) {
  std::int64_t local_conflicts = 0;
  std::vector<int> learnt;
  for (;;) {
    Cls* confl = propagate();
    if (confl != nullptr) {
      ++conflicts_;
      ++local_conflicts;
      if (decision_level() == 0) {
        ok_ = false;
        conflict_ext_.clear();
        return Inner::Unsat;
      }
      int btlevel;
      analyze(confl, learnt, btlevel);
      cancel_until(btlevel);
      if (learnt.size() == 1) {
        unchecked_enqueue(learnt[0], nullptr);
      } else {
        auto c = std::make_unique<Cls>();
        c->learnt = true;
        c->lits = learnt;
        Cls* raw = c.get();
        learnts_store_.push_back(std::move(c));
        learnts_.push_back(raw);
        attach(raw);
        bump_cla(*raw);
        unchecked_enqueue(learnt[0], raw);
      }
      decay_activities();
      if (static_cast<double>(learnts_.size()) >= max_learnts_) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
    } else {
      if (budget_exhausted(limits)) {
        cancel_until(0);
        return Inner::Unknown;
      }
      if (local_conflicts >= restart_conflicts) {
        cancel_until(0);
        return Inner::Restart;
      }
      int next = -1;
      while (decision_level() < static_cast<int>(assumps_.size())) {
        const int p = assumps_[static_cast<size_t>(decision_level())];
        if (lit_value(p) == 1) {
          trail_lim_.push_back(static_cast<int>(trail_.size()));
        } else if (lit_value(p) == -1) {
          analyze_final(neg(p));
          return Inner::Unsat;
        } else {
          next = p;
          break;
        }
      }
      if (next == -1) {
        next = pick_branch_lit();
        if (next == -1) {
          model_.assign(assigns_.size(), 0);
          for (size_t v = 0; v < assigns_.size(); ++v)
            model_[v] = assigns_[v] == 1 ? 1 : 0;
          return Inner::Sat;
        }
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      unchecked_enqueue(next, nullptr);
    }
  }
}

namespace {

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

Status Solver::solve(const std::vector<int>& assumptions,
                     const Limits& limits) {
  conflict_ext_.clear();
  if (!ok_) return Status::Unsat;

  assumps_.clear();
  for (int e : assumptions) {
    int v = e > 0 ? e : -e;
    ensure_vars(v);
    assumps_.push_back(ilit(e));
  }
  solve_start_conflicts_ = conflicts_;
  if (max_learnts_ < 1000)
    max_learnts_ = std::max(1000.0, 0.3 * static_cast<double>(base_.size()));

  Status result = Status::Unknown;
  for (int restarts = 0;; ++restarts) {
    const auto cap =
        static_cast<std::int64_t>(luby(2.0, restarts) * 100.0);
    const Inner r = search(cap, limits);
    if (r == Inner::Restart) continue;
    if (r == Inner::Sat) result = Status::Sat;
    if (r == Inner::Unsat) result = Status::Unsat;
    break;
  }
  cancel_until(0);
  assumps_.clear();
  return result;
}

void Solver::heap_insert(int v) {
  heap_pos_[static_cast<size_t>(v)] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_sift_up(static_cast<int>(heap_.size()) - 1);
}

void Solver::heap_update_up(int v) { heap_sift_up(heap_pos_[static_cast<size_t>(v)]); }

int Solver::heap_pop() {
  const int v = heap_[0];
  heap_[0] = heap_.back();
  heap_pos_[static_cast<size_t>(heap_[0])] = 0;
  heap_.pop_back();
  heap_pos_[static_cast<size_t>(v)] = -1;
  if (!heap_.empty()) heap_sift_down(0);
  return v;
}

void Solver::heap_sift_up(int i) {
  const int v = heap_[static_cast<size_t>(i)];
  while (i > 0) {
    const int parent = (i - 1) >> 1;
    if (!heap_less(v, heap_[static_cast<size_t>(parent)])) break;
    heap_[static_cast<size_t>(i)] = heap_[static_cast<size_t>(parent)];
    heap_pos_[static_cast<size_t>(heap_[static_cast<size_t>(i)])] = i;
    i = parent;
  }
  heap_[static_cast<size_t>(i)] = v;
  heap_pos_[static_cast<size_t>(v)] = i;
}

void Solver::heap_sift_down(int i) {
  const int v = heap_[static_cast<size_t>(i)];
  const int n = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && heap_less(heap_[static_cast<size_t>(child + 1)],
                                   heap_[static_cast<size_t>(child)]))
      ++child;
    if (!heap_less(heap_[static_cast<size_t>(child)], v)) break;
    heap_[static_cast<size_t>(i)] = heap_[static_cast<size_t>(child)];
    heap_pos_[static_cast<size_t>(heap_[static_cast<size_t>(i)])] = i;
    i = child;
  }
  heap_[static_cast<size_t>(i)] = v;
  heap_pos_[static_cast<size_t>(v)] = i;
}

}  // namespace muskit::sat

namespace muskit {

SatInstance::SatInstance(const CnfFormula& f)
    : ncl_(f.ncl()), nvars_(f.nvars) {
  solver_.ensure_vars(ncl_ + nvars_);
  for (const Clause& c : f.clauses) {
    std::vector<int> lits;
    lits.reserve(c.literals.size() + 1);
    lits.push_back(-selector_var(c.index));
    for (Literal l : c.literals) {
      const int mapped = formula_var(l.var().id);
      lits.push_back(l.positive() ? mapped : -mapped);
    }
    solver_.add_clause(std::move(lits));
  }
}

SatOutcome SatInstance::solve(const std::vector<int>& active_clauses,
                              const sat::Limits& limits) {
  std::vector<int> assumptions;
  assumptions.reserve(active_clauses.size());
  for (int ci : active_clauses) assumptions.push_back(selector_var(ci));

  SatOutcome out;
  out.status = solver_.solve(assumptions, limits);
  if (out.status == sat::Status::Sat) {
    for (int v = 1; v <= nvars_; ++v)
      out.model.assign(Variable{v}, solver_.model_value(formula_var(v)));
  } else if (out.status == sat::Status::Unsat) {
    for (int lit : solver_.failed_assumptions())
      if (lit > 0 && lit <= ncl_) out.failed_assumptions.push_back(lit);
    std::sort(out.failed_assumptions.begin(), out.failed_assumptions.end());
  }
  return out;
}

void SatInstance::add_selector_clause(
    const std::vector<int>& signed_clause_indices) {
  solver_.add_clause(signed_clause_indices);
}

SatOutcome solve(SatInstance& instance, const std::vector<int>& assumptions,
                 const sat::Limits& limits) {
  return instance.solve(assumptions, limits);
}

}  // namespace muskit
