#ifndef MUSKIT_ASPSEM_HPP
#define MUSKIT_ASPSEM_HPP

#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace muskit::asp {

struct Atom {
  enum class Kind { Cls, Pos, Neg, Unsat, Other };

  Kind kind = Kind::Unsat;
  int arg = 0;
  std::string name;

  auto operator<=>(const Atom&) const = default;

  static Atom cls(int i) { return {Kind::Cls, i, {}}; }
  static Atom pos(int var) { return {Kind::Pos, var, {}}; }
  static Atom neg(int var) { return {Kind::Neg, var, {}}; }
  static Atom unsat() { return {Kind::Unsat, 0, {}}; }
  static Atom other(std::string n) { return {Kind::Other, 0, std::move(n)}; }

  std::string text() const;
};

enum class RuleForm { Disjunctive, Cardinality };

// Eq. (1): a_1 v ... v a_k <- b_1, ..., not c_1, ...
// Eq. (2): {a_1; ...; a_k} >= lb <- b_1, ..., not c_1, ...
struct AspRule {
  RuleForm form = RuleForm::Disjunctive;
  std::vector<Atom> head;
  int lb = 0;
  std::vector<Atom> body_pos;
  std::vector<Atom> body_neg;

  void normalize();
  bool operator==(const AspRule&) const = default;

  static AspRule fact(Atom a);
  static AspRule disjunctive(std::vector<Atom> head,
                             std::vector<Atom> body_pos = {},
                             std::vector<Atom> body_neg = {});
  static AspRule constraint(std::vector<Atom> body_pos,
                            std::vector<Atom> body_neg = {});
  static AspRule cardinality(std::vector<Atom> head, int lb,
                             std::vector<Atom> body_pos = {},
                             std::vector<Atom> body_neg = {});
};

// Interpretation-level cardinality cap: rejects candidates with more than
// max_true atoms of `over` true. Kept outside the rule grammar; it filters
// models and answer-set candidates but takes no part in the reduct.
struct SelectorCap {
  std::vector<Atom> over;
  int max_true = 0;
  bool operator==(const SelectorCap&) const = default;
};

struct AspProgram {
  std::vector<AspRule> rules;
  std::optional<SelectorCap> cap;

  std::vector<Atom> atoms() const;
  bool operator==(const AspProgram&) const = default;
};

using Interpretation = std::set<Atom>;

class BruteForceCapExceeded : public std::runtime_error {
 public:
  explicit BruteForceCapExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

bool satisfies_rule(const Interpretation& tau, const AspRule& r);
bool satisfies(const Interpretation& tau, const AspProgram& p);

AspProgram gl_reduct(const AspProgram& p, const Interpretation& tau);

bool is_answer_set(const AspProgram& p, const Interpretation& m);

std::vector<Interpretation> enumerate_models(const AspProgram& p,
                                             int max_atoms = 24);
std::vector<Interpretation> enumerate_answer_sets(const AspProgram& p,
                                                  int max_atoms = 24);

std::vector<Interpretation> subset_minimal_filter(
    const std::vector<Interpretation>& sets, const std::set<Atom>& over);

Interpretation project(const Interpretation& tau, const std::set<Atom>& over);

// Clause indices of the cls atoms in tau, ascending.
std::vector<int> cls_indices(const Interpretation& tau);

}  // namespace muskit::asp

#endif
