#ifndef MUSKIT_ENCODER_HPP
#define MUSKIT_ENCODER_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "muskit/aspsem.hpp"
#include "muskit/cnf.hpp"
#include "muskit/heuristics.hpp"

namespace muskit {

struct EncodingOptions {
  HeuristicFlags heuristics_enabled;
  std::optional<HeuristicBundle> bundle;
  bool emit_show_directive = true;
  bool emit_domain_heuristic = true;
  // Above this many cross-component pairs the pairwise constraints switch
  // to a linear marker-chain encoding with the same semantics.
  std::size_t h3_pair_threshold = 1000000;
};

// The selector atoms cls_1..cls_ncl in clause order.
std::vector<asp::Atom> selector_set(const CnfFormula& f);

// The encoding's rules in source order (variable axioms, clause rules,
// the unsat constraint, saturation rules, the selector choice), followed
// by any enabled heuristic rules. The H2 upper bound lands on the
// program's cap, not in a rule.
asp::AspProgram build_program(const CnfFormula& f,
                              const EncodingOptions& opts = {});

// Appends `:- cls_i.` for every selector outside the over-approximation.
// Sound only when the set covers the union of all MUSes.
asp::AspProgram apply_h1(asp::AspProgram program,
                         const std::vector<int>& union_overapprox);

std::string emit_aspcore2(const asp::AspProgram& program,
                          const EncodingOptions& opts = {});

// Reads the subset of ASP-Core-2 that emit_aspcore2 produces; directives
// and comments are skipped. Choice-rule upper bounds become the cap.
asp::AspProgram parse_aspcore2(const std::string& text);

}  // namespace muskit

#endif
