#ifndef MUSKIT_CNF_HPP
#define MUSKIT_CNF_HPP

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace muskit {

// Propositional variable with a 1-based, dense id.
struct Variable {
  int id = 0;

  constexpr Variable() = default;
  constexpr explicit Variable(int v) : id(v) {}
  constexpr auto operator<=>(const Variable&) const = default;
};

// A literal is a variable or its negation. Internally stored in DIMACS
// convention: +id for the positive literal, -id for the negative one.
class Literal {
 public:
  constexpr Literal() = default;
  constexpr Literal(Variable v, bool positive)
      : code_(positive ? v.id : -v.id) {}

  static constexpr Literal from_dimacs(int code) {
    Literal l;
    l.code_ = code;
    return l;
  }

  constexpr Variable var() const {
    return Variable(code_ < 0 ? -code_ : code_);
  }
  constexpr bool positive() const { return code_ > 0; }
  constexpr int dimacs() const { return code_; }

  // Negation is an involution: ~~l == l.
  constexpr Literal operator~() const { return from_dimacs(-code_); }

  constexpr auto operator<=>(const Literal&) const = default;

 private:
  int code_ = 0;
};

// A disjunction of literals. `index` is the clause's 1-based position in the
// owning formula and stays stable for the formula's lifetime.
struct Clause {
  std::vector<Literal> literals;
  int index = 0;

  bool contains(Literal l) const;
  // True when the clause holds some literal together with its negation.
  bool tautological() const;
};

// CNF formula as a multiset of indexed clauses: identical clauses at distinct
// indices are distinct objects.
struct CnfFormula {
  std::vector<Clause> clauses;
  int nvars = 0;

  int ncl() const { return static_cast<int>(clauses.size()); }
  const Clause& clause(int index) const { return clauses.at(index - 1); }

  // Appends a clause at the next index. Duplicate literals are dropped
  // (keeping first occurrence order); nvars grows to cover every variable.
  void add_clause(std::vector<Literal> literals);
};

// Partial map Variable -> {true,false}; value(~v) = 1 - value(v).
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int nvars) : vals_(static_cast<size_t>(nvars) + 1, -1) {}

  void assign(Variable v, bool value);
  void unassign(Variable v);
  bool defined(Variable v) const;
  std::optional<bool> value(Variable v) const;
  std::optional<bool> value(Literal l) const;
  // Number of defined variables.
  int defined_count() const;

 private:
  std::vector<signed char> vals_;  // indexed by variable id; -1 = undefined
};

enum class Eval { Satisfied, Falsified, Undetermined };

// A clause is satisfied when some literal is true, falsified when all its
// literals are assigned false, undetermined otherwise. The empty clause is
// falsified under any assignment.
Eval evaluate(const Clause& c, const Assignment& a);

// A formula is falsified when some clause is, satisfied when every clause is.
Eval evaluate(const CnfFormula& f, const Assignment& a);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// DIMACS CNF reader. Clause order and multiplicity are preserved. The body
// wins over the header on count mismatches; literals beyond the declared
// variable count raise nvars. Both cases emit a warning when a sink is given.
CnfFormula parse_dimacs(std::string_view text,
                        std::vector<std::string>* warnings = nullptr);
CnfFormula parse_dimacs_file(const std::string& path,
                             std::vector<std::string>* warnings = nullptr);

// LF line endings, `p cnf <nvars> <ncl>` header, 0-terminated clauses.
std::string write_dimacs(const CnfFormula& f);

}  // namespace muskit

#endif
