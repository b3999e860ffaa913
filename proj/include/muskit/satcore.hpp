#ifndef MUSKIT_SATCORE_HPP
#define MUSKIT_SATCORE_HPP

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "muskit/cnf.hpp"

namespace muskit::sat {

enum class Status { Sat, Unsat, Unknown };

struct Limits {
  std::int64_t max_conflicts = -1;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  static Limits conflicts(std::int64_t n) {
    Limits l;
    l.max_conflicts = n;
    return l;
  }
  static Limits until(std::chrono::steady_clock::time_point t) {
    Limits l;
    l.deadline = t;
    return l;
  }
};

// CDCL solver over variables 1..nvars(); literals are signed ints as in
// DIMACS. Deterministic: no randomization, activity ties break towards the
// smaller variable index.
class Solver {
 public:
  Solver() = default;
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  int new_var();
  void ensure_vars(int n);
  int nvars() const { return static_cast<int>(assigns_.size()); }

  // False when the clause set is already contradictory at the root level.
  bool add_clause(std::vector<int> lits);
  bool add_clause(std::initializer_list<int> lits) {
    return add_clause(std::vector<int>(lits));
  }
  // Sequential-counter encoding; allocates auxiliary variables.
  void add_at_most_k(const std::vector<int>& lits, int k);

  Status solve(const std::vector<int>& assumptions = {},
               const Limits& limits = {});

  bool okay() const { return ok_; }
  bool model_value(int var) const;
  // After an assumption-driven Unsat: an unsatisfiable subset of the
  // assumptions, in the polarity they were passed.
  const std::vector<int>& failed_assumptions() const { return conflict_ext_; }
  void set_phase(int var, bool value);
  std::int64_t conflicts_total() const { return conflicts_; }
  int clause_count() const { return static_cast<int>(base_.size()); }

 private:
  struct Cls {
    double act = 0.0;
    bool learnt = false;
    std::vector<int> lits;
  };
  struct Watcher {
    Cls* c;
    int blocker;
  };

  static int ilit(int ext) {
    int v = ext > 0 ? ext : -ext;
    return ((v - 1) << 1) | (ext < 0 ? 1 : 0);
  }
  static int neg(int l) { return l ^ 1; }
  static int ivar(int l) { return l >> 1; }
  static int ext(int l) { return (l & 1) ? -(ivar(l) + 1) : ivar(l) + 1; }

  signed char lit_value(int l) const {
    signed char a = assigns_[static_cast<size_t>(ivar(l))];
    return (l & 1) ? static_cast<signed char>(-a) : a;
  }

  enum class Inner { Sat, Unsat, Unknown, Restart };

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }
  void attach(Cls* c);
  void detach(Cls* c);
  void unchecked_enqueue(int p, Cls* reason);
  Cls* propagate();
  void analyze(Cls* confl, std::vector<int>& out_learnt, int& out_btlevel);
  void analyze_final(int p);
  void cancel_until(int level);
  int pick_branch_lit();
  void bump_var(int v);
  void bump_cla(Cls& c);
  void decay_activities();
  void reduce_db();
  Inner search(std::int64_t restart_conflicts, const Limits& limits);
  bool budget_exhausted(const Limits& limits) const;

  void heap_insert(int v);
  void heap_update_up(int v);
  int heap_pop();
  bool heap_less(int u, int v) const {
    return activity_[static_cast<size_t>(u)] >
               activity_[static_cast<size_t>(v)] ||
           (activity_[static_cast<size_t>(u)] ==
                activity_[static_cast<size_t>(v)] &&
            u < v);
  }
  void heap_sift_up(int i);
  void heap_sift_down(int i);

  std::vector<std::unique_ptr<Cls>> base_, learnts_store_;
  std::vector<Cls*> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<signed char> assigns_;
  std::vector<int> level_;
  std::vector<Cls*> reason_;
  std::vector<double> activity_;
  std::vector<char> polarity_;
  std::vector<char> seen_;
  std::vector<int> to_clear_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::vector<int> assumps_;
  std::vector<int> heap_, heap_pos_;
  size_t qhead_ = 0;
  bool ok_ = true;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0;
  std::int64_t conflicts_ = 0;
  std::int64_t solve_start_conflicts_ = 0;
  std::vector<char> model_;
  std::vector<int> conflict_ext_;
};

}  // namespace muskit::sat

namespace muskit {

struct SatOutcome {
  sat::Status status = sat::Status::Unknown;
  Assignment model;
  std::vector<int> failed_assumptions;

  bool sat() const { return status == sat::Status::Sat; }
  bool unsat() const { return status == sat::Status::Unsat; }
  bool unknown() const { return status == sat::Status::Unknown; }
};

// The formula's clauses loaded as (~s_i v C_i); assuming selector s_i
// activates clause i. Selector variables are 1..ncl, formula variable v
// maps to ncl+v.
class SatInstance {
 public:
  explicit SatInstance(const CnfFormula& f);

  int ncl() const { return ncl_; }
  int formula_nvars() const { return nvars_; }
  int selector_var(int clause_index) const { return clause_index; }
  int formula_var(int var_id) const { return ncl_ + var_id; }

  SatOutcome solve(const std::vector<int>& active_clauses,
                   const sat::Limits& limits = {});
  // Extra clause over selectors: positive entry i means s_i, negative -i
  // means ~s_i. Used for MCS blocking and MaxSAT search.
  void add_selector_clause(const std::vector<int>& signed_clause_indices);

  sat::Solver& solver() { return solver_; }

 private:
  int ncl_;
  int nvars_;
  sat::Solver solver_;
};

SatOutcome solve(SatInstance& instance, const std::vector<int>& assumptions,
                 const sat::Limits& limits = {});

}  // namespace muskit

#endif
