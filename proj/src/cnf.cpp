#include "muskit/cnf.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace muskit {

bool Clause::contains(Literal l) const {
  return std::find(literals.begin(), literals.end(), l) != literals.end();
}

bool Clause::tautological() const {
  for (Literal l : literals)
    if (contains(~l)) return true;
  return false;
}

void CnfFormula::add_clause(std::vector<Literal> literals) {
  Clause c;
  c.index = ncl() + 1;
  for (Literal l : literals) {
    if (!c.contains(l)) c.literals.push_back(l);
    nvars = std::max(nvars, l.var().id);
  }
  clauses.push_back(std::move(c));
}

void Assignment::assign(Variable v, bool value) {
  if (static_cast<size_t>(v.id) >= vals_.size())
    vals_.resize(static_cast<size_t>(v.id) + 1, -1);
  vals_[static_cast<size_t>(v.id)] = value ? 1 : 0;
}

void Assignment::unassign(Variable v) {
  if (static_cast<size_t>(v.id) < vals_.size())
    vals_[static_cast<size_t>(v.id)] = -1;
}

bool Assignment::defined(Variable v) const {
  return static_cast<size_t>(v.id) < vals_.size() &&
         vals_[static_cast<size_t>(v.id)] >= 0;
}

std::optional<bool> Assignment::value(Variable v) const {
  if (!defined(v)) return std::nullopt;
  return vals_[static_cast<size_t>(v.id)] == 1;
}

std::optional<bool> Assignment::value(Literal l) const {
  auto v = value(l.var());
  if (!v) return std::nullopt;
  return l.positive() ? *v : !*v;
}

int Assignment::defined_count() const {
  int n = 0;
  for (signed char v : vals_)
    if (v >= 0) ++n;
  return n;
}

Eval evaluate(const Clause& c, const Assignment& a) {
  bool all_false = true;
  for (Literal l : c.literals) {
    auto v = a.value(l);
    if (v && *v) return Eval::Satisfied;
    if (!v) all_false = false;
  }
  return all_false ? Eval::Falsified : Eval::Undetermined;
}

Eval evaluate(const CnfFormula& f, const Assignment& a) {
  bool all_sat = true;
  for (const Clause& c : f.clauses) {
    switch (evaluate(c, a)) {
      case Eval::Falsified:
        return Eval::Falsified;
      case Eval::Undetermined:
        all_sat = false;
        break;
      case Eval::Satisfied:
        break;
    }
  }
  return all_sat ? Eval::Satisfied : Eval::Undetermined;
}

namespace {

struct Tokenizer {
  std::string_view text;
  size_t pos = 0;
  int line = 1;

  // Skips whitespace and `c` comment lines; returns false at end of input.
  bool skip_to_token() {
    while (pos < text.size()) {
      char ch = text[pos];
      if (ch == '\n') {
        ++line;
        ++pos;
      } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\f' ||
                 ch == '\v') {
        ++pos;
      } else if (ch == 'c' &&
                 (pos + 1 >= text.size() || text[pos + 1] == ' ' ||
                  text[pos + 1] == '\t' || text[pos + 1] == '\n' ||
                  text[pos + 1] == '\r')) {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else {
        return true;
      }
    }
    return false;
  }

  std::string_view next_token() {
    size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    return text.substr(start, pos - start);
  }
};

int parse_int(std::string_view tok, int line, const char* what) {
  if (tok.empty()) throw ParseError(std::string("missing ") + what, line);
  size_t i = tok[0] == '-' ? 1 : 0;
  if (i == tok.size()) throw ParseError(std::string("non-integer token '") +
                                            std::string(tok) + "'",
                                        line);
  long long value = 0;
  for (; i < tok.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(tok[i])))
      throw ParseError(std::string("non-integer token '") + std::string(tok) +
                           "'",
                       line);
    value = value * 10 + (tok[i] - '0');
    if (value > 1000000000LL)
      throw ParseError(std::string("integer out of range '") +
                           std::string(tok) + "'",
                       line);
  }
  return tok[0] == '-' ? -static_cast<int>(value) : static_cast<int>(value);
}

}  // namespace

CnfFormula parse_dimacs(std::string_view text,
                        std::vector<std::string>* warnings) {
  Tokenizer tk{text};
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  if (!tk.skip_to_token()) throw ParseError("missing 'p cnf' header", tk.line);
  if (text[tk.pos] != 'p')
    throw ParseError("malformed header: expected 'p cnf'", tk.line);
  int header_line = tk.line;
  std::string_view p = tk.next_token();
  if (p != "p") throw ParseError("malformed header: expected 'p cnf'", header_line);
  if (!tk.skip_to_token())
    throw ParseError("malformed header: expected 'p cnf'", header_line);
  std::string_view fmt = tk.next_token();
  if (fmt != "cnf")
    throw ParseError("malformed header: format is not 'cnf'", header_line);
  if (!tk.skip_to_token())
    throw ParseError("malformed header: missing variable count", header_line);
  int declared_vars = parse_int(tk.next_token(), tk.line, "variable count");
  if (!tk.skip_to_token())
    throw ParseError("malformed header: missing clause count", header_line);
  int declared_clauses = parse_int(tk.next_token(), tk.line, "clause count");
  if (declared_vars < 0 || declared_clauses < 0)
    throw ParseError("malformed header: negative count", header_line);

  CnfFormula f;
  f.nvars = declared_vars;

  std::vector<Literal> current;
  bool in_clause = false;
  while (tk.skip_to_token()) {
    int tok_line = tk.line;
    int value = parse_int(tk.next_token(), tok_line, "literal");
    if (value == 0) {
      f.add_clause(std::move(current));
      current.clear();
      in_clause = false;
      continue;
    }
    int id = value < 0 ? -value : value;
    if (id > f.nvars) {
      warn("line " + std::to_string(tok_line) + ": literal " +
           std::to_string(value) + " exceeds declared variable count " +
           std::to_string(declared_vars) + "; raising");
      f.nvars = id;
    }
    current.push_back(Literal::from_dimacs(value));
    in_clause = true;
  }
  if (in_clause)
    throw ParseError("unterminated final clause (missing 0)", tk.line);

  if (f.ncl() != declared_clauses)
    warn("header declares " + std::to_string(declared_clauses) +
         " clauses but body has " + std::to_string(f.ncl()) +
         "; using body count");
  return f;
}

CnfFormula parse_dimacs_file(const std::string& path,
                             std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dimacs(buf.str(), warnings);
}

std::string write_dimacs(const CnfFormula& f) {
  std::string out = "p cnf " + std::to_string(f.nvars) + " " +
                    std::to_string(f.ncl()) + "\n";
  for (const Clause& c : f.clauses) {
    for (Literal l : c.literals) {
      out += std::to_string(l.dimacs());
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

}  // namespace muskit
