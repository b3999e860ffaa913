#include "muskit/encoder.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>

namespace muskit {

using asp::Atom;
using asp::AspProgram;
using asp::AspRule;
using asp::RuleForm;
using asp::SelectorCap;

std::vector<Atom> selector_set(const CnfFormula& f) {
  std::vector<Atom> out;
  out.reserve(static_cast<std::size_t>(f.ncl()));
  for (int i = 1; i <= f.ncl(); ++i) out.push_back(Atom::cls(i));
  return out;
}

namespace {

void require_entry(bool flag, bool present, const char* which) {
  if (flag && !present)
    throw std::invalid_argument(std::string(which) +
                                " enabled without bundle data");
}

std::vector<Atom> cls_atoms(const std::vector<int>& indices) {
  std::vector<Atom> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(Atom::cls(i));
  return out;
}

Atom chain_atom(std::size_t component) {
  return Atom::other("h3_le_" + std::to_string(component + 1));
}

void add_component_rules(AspProgram& p,
                         const std::vector<std::vector<int>>& comps,
                         std::size_t pair_threshold) {
  if (comps.size() < 2) return;
  std::uint64_t total = 0;
  std::uint64_t same = 0;
  for (const auto& c : comps) {
    total += c.size();
    same += static_cast<std::uint64_t>(c.size()) * c.size();
  }
  std::uint64_t cross = (total * total - same) / 2;

  if (cross <= pair_threshold) {
    for (std::size_t a = 0; a < comps.size(); ++a)
      for (std::size_t b = a + 1; b < comps.size(); ++b)
        for (int i : comps[a])
          for (int j : comps[b])
            p.rules.push_back(AspRule::constraint({Atom::cls(i), Atom::cls(j)}));
    return;
  }

  // h3_le_c: some selected clause lies in component c or earlier. A clause
  // selected in a later component then contradicts it.
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (c > 0)
      p.rules.push_back(AspRule::disjunctive({chain_atom(c)}, {chain_atom(c - 1)}));
    for (int i : comps[c])
      p.rules.push_back(AspRule::disjunctive({chain_atom(c)}, {Atom::cls(i)}));
    if (c > 0)
      for (int i : comps[c])
        p.rules.push_back(AspRule::constraint({Atom::cls(i), chain_atom(c - 1)}));
  }
}

}  // namespace

AspProgram build_program(const CnfFormula& f, const EncodingOptions& opts) {
  const auto& flags = opts.heuristics_enabled;
  const HeuristicBundle* b = opts.bundle ? &*opts.bundle : nullptr;
  require_entry(flags.h1, b && b->union_overapprox.has_value(), "H1");
  require_entry(flags.h2, b && b->card_bounds.has_value(), "H2");
  require_entry(flags.h3, b && b->components.has_value(), "H3");
  require_entry(flags.h4, b && b->mcses.has_value(), "H4");
  require_entry(flags.h5, b && b->cover_rules.has_value(), "H5");

  AspProgram p;
  for (int v = 1; v <= f.nvars; ++v)
    p.rules.push_back(AspRule::disjunctive({Atom::pos(v), Atom::neg(v)}));

  for (int i = 1; i <= f.ncl(); ++i) {
    std::vector<Atom> body{Atom::cls(i)};
    for (Literal l : f.clause(i).literals)
      body.push_back(l.positive() ? Atom::neg(l.var().id)
                                  : Atom::pos(l.var().id));
    p.rules.push_back(AspRule::disjunctive({Atom::unsat()}, std::move(body)));
  }

  p.rules.push_back(AspRule::constraint({}, {Atom::unsat()}));

  for (int v = 1; v <= f.nvars; ++v) {
    p.rules.push_back(AspRule::disjunctive({Atom::pos(v)}, {Atom::unsat()}));
    p.rules.push_back(AspRule::disjunctive({Atom::neg(v)}, {Atom::unsat()}));
  }

  int lb = flags.h2 ? b->card_bounds->lb : 0;
  p.rules.push_back(AspRule::cardinality(selector_set(f), lb));
  if (flags.h2) p.cap = SelectorCap{selector_set(f), b->card_bounds->ub};

  if (flags.h3)
    add_component_rules(p, *b->components, opts.h3_pair_threshold);

  if (flags.h4)
    for (const auto& mcs : b->mcses->mcses)
      p.rules.push_back(AspRule::constraint({}, cls_atoms(mcs)));

  if (flags.h5)
    for (const auto& r : *b->cover_rules) {
      if (r.candidates.empty())
        p.rules.push_back(AspRule::constraint({Atom::cls(r.trigger)}));
      else
        p.rules.push_back(AspRule::cardinality(cls_atoms(r.candidates), 1,
                                               {Atom::cls(r.trigger)}));
    }

  if (flags.h1) p = apply_h1(std::move(p), *b->union_overapprox);
  return p;
}

AspProgram apply_h1(AspProgram program,
                    const std::vector<int>& union_overapprox) {
  std::set<int> keep(union_overapprox.begin(), union_overapprox.end());
  std::set<int> lambda;
  for (const Atom& a : program.atoms())
    if (a.kind == Atom::Kind::Cls) lambda.insert(a.arg);
  for (int i : lambda)
    if (!keep.count(i))
      program.rules.push_back(AspRule::constraint({Atom::cls(i)}));
  return program;
}

namespace {

enum class Section { Base, Cross, Hits, Covers, Exclusions };

Section classify(const AspRule& r, bool past_choice) {
  if (!past_choice) return Section::Base;
  if (r.form == RuleForm::Cardinality) return Section::Covers;
  if (!r.head.empty()) return Section::Cross;
  if (!r.body_neg.empty()) return Section::Hits;
  if (r.body_pos.size() == 1) return Section::Exclusions;
  return Section::Cross;
}

const char* banner(Section s) {
  switch (s) {
    case Section::Cross: return "% cross-component exclusions";
    case Section::Hits: return "% hitting constraints";
    case Section::Covers: return "% literal cover rules";
    case Section::Exclusions: return "% clause exclusions";
    default: return "";
  }
}

std::string body_text(const AspRule& r) {
  std::string out;
  for (const Atom& a : r.body_pos) {
    if (!out.empty()) out += ", ";
    out += a.text();
  }
  for (const Atom& a : r.body_neg) {
    if (!out.empty()) out += ", ";
    out += "not " + a.text();
  }
  return out;
}

std::string rule_text(const AspRule& r, bool attach_cap, int cap_value) {
  std::string out;
  if (r.form == RuleForm::Cardinality) {
    out = std::to_string(r.lb) + " { ";
    for (std::size_t i = 0; i < r.head.size(); ++i) {
      if (i) out += "; ";
      out += r.head[i].text();
    }
    out += r.head.empty() ? "}" : " }";
    if (attach_cap) out += " " + std::to_string(cap_value);
  } else {
    for (std::size_t i = 0; i < r.head.size(); ++i) {
      if (i) out += " | ";
      out += r.head[i].text();
    }
  }
  std::string body = body_text(r);
  if (!body.empty()) out += out.empty() ? ":- " + body : " :- " + body;
  out += ".";
  return out;
}

}  // namespace

std::string emit_aspcore2(const AspProgram& program,
                          const EncodingOptions& opts) {
  std::string out;
  bool past_choice = false;
  bool cap_attached = false;
  Section current = Section::Base;
  for (const AspRule& r : program.rules) {
    Section s = classify(r, past_choice);
    if (s != current && s != Section::Base) {
      out += banner(s);
      out += "\n";
    }
    current = s;
    bool is_choice = r.form == RuleForm::Cardinality && r.body_pos.empty() &&
                     r.body_neg.empty();
    bool attach = is_choice && !cap_attached && program.cap &&
                  program.cap->over == r.head;
    if (attach) cap_attached = true;
    out += rule_text(r, attach, program.cap ? program.cap->max_true : 0);
    out += "\n";
    if (is_choice) past_choice = true;
  }
  if (opts.emit_show_directive) out += "#show cls_/1.\n";
  if (opts.emit_domain_heuristic)
    out += "#heuristic cls_(C) : cls_(C). [1,false]\n";
  return out;
}

namespace {

struct Token {
  enum class Type { Ident, Int, Punct, End };
  Type type = Type::End;
  std::string text;
  long long value = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  bool at_punct(const char* p) const {
    return tok_.type == Token::Type::Punct && tok_.text == p;
  }

  void expect(const char* p) {
    if (!at_punct(p))
      throw std::runtime_error("expected '" + std::string(p) + "', got '" +
                               tok_.text + "'");
    advance();
  }

 private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        continue;
      }
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    if (pos_ >= text_.size()) {
      tok_ = {Token::Type::End, "<eof>", 0};
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        ++pos_;
      tok_ = {Token::Type::Ident, text_.substr(start, pos_ - start), 0};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long long v = 0;
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + (text_[pos_] - '0');
        ++pos_;
      }
      tok_ = {Token::Type::Int, text_.substr(start, pos_ - start), v};
      return;
    }
    if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
      pos_ += 2;
      tok_ = {Token::Type::Punct, ":-", 0};
      return;
    }
    pos_ += 1;
    tok_ = {Token::Type::Punct, std::string(1, c), 0};
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  Token tok_;
};

bool all_digits(const std::string& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) {
           return std::isdigit(c) != 0;
         });
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  AspProgram run() {
    AspProgram p;
    while (lex_.peek().type != Token::Type::End) {
      if (lex_.at_punct("#")) {
        skip_directive();
        continue;
      }
      parse_rule(p);
    }
    return p;
  }

 private:
  void skip_directive() {
    while (lex_.peek().type != Token::Type::End && !lex_.at_punct("."))
      lex_.take();
    if (lex_.at_punct(".")) lex_.take();
    if (lex_.at_punct("[")) {
      while (lex_.peek().type != Token::Type::End && !lex_.at_punct("]"))
        lex_.take();
      if (lex_.at_punct("]")) lex_.take();
    }
  }

  Atom parse_atom() {
    Token t = lex_.take();
    if (t.type != Token::Type::Ident)
      throw std::runtime_error("expected atom, got '" + t.text + "'");
    if (t.text == "unsat") return Atom::unsat();
    if (t.text == "cls_" && lex_.at_punct("(")) {
      lex_.expect("(");
      Token n = lex_.take();
      if (n.type != Token::Type::Int)
        throw std::runtime_error("expected clause index");
      lex_.expect(")");
      return Atom::cls(static_cast<int>(n.value));
    }
    if (t.text.rfind("pos_x", 0) == 0 && all_digits(t.text.substr(5)))
      return Atom::pos(std::stoi(t.text.substr(5)));
    if (t.text.rfind("neg_x", 0) == 0 && all_digits(t.text.substr(5)))
      return Atom::neg(std::stoi(t.text.substr(5)));
    return Atom::other(t.text);
  }

  void parse_body(std::vector<Atom>& pos, std::vector<Atom>& neg) {
    while (true) {
      if (lex_.peek().type == Token::Type::Ident && lex_.peek().text == "not") {
        lex_.take();
        neg.push_back(parse_atom());
      } else {
        pos.push_back(parse_atom());
      }
      if (lex_.at_punct(","))
        lex_.take();
      else
        break;
    }
  }

  void parse_rule(AspProgram& p) {
    std::vector<Atom> pos, neg;
    if (lex_.at_punct(":-")) {
      lex_.take();
      parse_body(pos, neg);
      lex_.expect(".");
      p.rules.push_back(AspRule::constraint(std::move(pos), std::move(neg)));
      return;
    }
    if (lex_.peek().type == Token::Type::Int || lex_.at_punct("{")) {
      int lb = 0;
      if (lex_.peek().type == Token::Type::Int)
        lb = static_cast<int>(lex_.take().value);
      lex_.expect("{");
      std::vector<Atom> head;
      if (!lex_.at_punct("}")) {
        while (true) {
          head.push_back(parse_atom());
          if (lex_.at_punct(";"))
            lex_.take();
          else
            break;
        }
      }
      lex_.expect("}");
      std::optional<int> ub;
      if (lex_.peek().type == Token::Type::Int)
        ub = static_cast<int>(lex_.take().value);
      if (lex_.at_punct(":-")) {
        lex_.take();
        parse_body(pos, neg);
      }
      lex_.expect(".");
      if (ub) {
        std::vector<Atom> over = head;
        std::sort(over.begin(), over.end());
        over.erase(std::unique(over.begin(), over.end()), over.end());
        p.cap = SelectorCap{std::move(over), *ub};
      }
      p.rules.push_back(AspRule::cardinality(std::move(head), lb,
                                             std::move(pos), std::move(neg)));
      return;
    }
    std::vector<Atom> head;
    while (true) {
      head.push_back(parse_atom());
      if (lex_.at_punct("|"))
        lex_.take();
      else
        break;
    }
    if (lex_.at_punct(":-")) {
      lex_.take();
      parse_body(pos, neg);
    }
    lex_.expect(".");
    p.rules.push_back(
        AspRule::disjunctive(std::move(head), std::move(pos), std::move(neg)));
  }

  Lexer lex_;
};

}  // namespace

AspProgram parse_aspcore2(const std::string& text) {
  return Parser(text).run();
}

}  // namespace muskit
