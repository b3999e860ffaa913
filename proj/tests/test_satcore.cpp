#include <doctest.h>

#include <random>

#include "muskit/satcore.hpp"
#include "testutil.hpp"

using namespace muskit;

namespace {

// Pigeonhole: n+1 pigeons, n holes. Unsatisfiable, needs real search.
CnfFormula pigeonhole(int holes) {
  CnfFormula f;
  auto var = [&](int pigeon, int hole) { return pigeon * holes + hole + 1; };
  for (int p = 0; p <= holes; ++p) {
    std::vector<Literal> c;
    for (int h = 0; h < holes; ++h)
      c.push_back(Literal::from_dimacs(var(p, h)));
    f.add_clause(c);
  }
  for (int h = 0; h < holes; ++h)
    for (int p1 = 0; p1 <= holes; ++p1)
      for (int p2 = p1 + 1; p2 <= holes; ++p2)
        f.add_clause({Literal::from_dimacs(-var(p1, h)),
                      Literal::from_dimacs(-var(p2, h))});
  return f;
}

std::vector<int> all_indices(const CnfFormula& f) {
  std::vector<int> v;
  for (int i = 1; i <= f.ncl(); ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("example formula outcomes under assumptions") {
  SatInstance inst(testutil::example1());

  auto r12 = inst.solve({1, 2});
  CHECK(r12.unsat());
  CHECK(r12.failed_assumptions == std::vector<int>{1, 2});

  auto r234 = inst.solve({2, 3, 4});
  REQUIRE(r234.sat());
  CHECK(r234.model.value(Variable{1}) == std::optional<bool>{false});
  CHECK(r234.model.value(Variable{2}) == std::optional<bool>{true});

  auto rempty = inst.solve({});
  CHECK(rempty.sat());

  auto rall = inst.solve(all_indices(testutil::example1()));
  CHECK(rall.unsat());
  CHECK(testutil::mask_unsat(
      testutil::falsified_masks(testutil::example1()),
      testutil::indices_to_mask(rall.failed_assumptions)));
}

TEST_CASE("empty clause makes its selector a singleton core") {
  CnfFormula f;
  f.add_clause({});
  f.add_clause({Literal::from_dimacs(1)});
  SatInstance inst(f);
  auto r = inst.solve({1, 2});
  CHECK(r.unsat());
  CHECK(r.failed_assumptions == std::vector<int>{1});
}

TEST_CASE("tautological clause constrains nothing") {
  auto f = testutil::mk({{1, -1}, {1}, {-1}}, 1);
  SatInstance inst(f);
  CHECK(inst.solve({1}).sat());
  CHECK(inst.solve({1, 2}).sat());
  auto r = inst.solve({1, 2, 3});
  CHECK(r.unsat());
  CHECK(r.failed_assumptions == std::vector<int>{2, 3});
}

TEST_CASE("agreement with truth tables on random subsets") {
  std::mt19937 rng(424242);
  for (int round = 0; round < 300; ++round) {
    auto f = testutil::random_formula(rng, 12, 18, 4);
    auto masks = testutil::falsified_masks(f);
    SatInstance inst(f);
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<int> subset;
      for (int i = 1; i <= f.ncl(); ++i)
        if (trial == 0 || testutil::rand_below(rng, 2)) subset.push_back(i);
      auto mask = testutil::indices_to_mask(subset);
      auto r = inst.solve(subset);
      REQUIRE_FALSE(r.unknown());
      CHECK(r.sat() == !testutil::mask_unsat(masks, mask));
      if (r.sat()) {
        for (int ci : subset)
          CHECK(evaluate(f.clause(ci), r.model) == Eval::Satisfied);
      } else {
        for (int ci : r.failed_assumptions) {
          CHECK(ci >= 1);
          CHECK(ci <= f.ncl());
        }
        auto failed = testutil::indices_to_mask(r.failed_assumptions);
        CHECK((failed & ~mask) == 0);
        CHECK(testutil::mask_unsat(masks, failed));
      }
    }
  }
}

TEST_CASE("budget exhaustion reports unknown, never a wrong answer") {
  auto php = pigeonhole(6);
  SatInstance inst(php);
  auto limited = inst.solve(all_indices(php), sat::Limits::conflicts(0));
  CHECK(limited.unknown());

  auto timed = inst.solve(all_indices(php),
                          sat::Limits::until(std::chrono::steady_clock::now() -
                                             std::chrono::seconds(1)));
  CHECK(timed.unknown());

  auto full = inst.solve(all_indices(php));
  CHECK(full.unsat());
}

TEST_CASE("incremental reuse with selector blocking clauses") {
  const auto& f = testutil::example1();
  auto masks = testutil::falsified_masks(f);
  SatInstance inst(f);

  CHECK(inst.solve({1, 3, 4}).unsat());
  CHECK(inst.solve({3, 4}).sat());
  CHECK(inst.solve({1, 2}).unsat());
  CHECK(inst.solve({2, 3, 4}).sat());

  inst.add_selector_clause({-1, -2});
  CHECK(inst.solver().solve({1, 2}) == sat::Status::Unsat);
  CHECK(inst.solve({2, 3, 4}).sat());

  inst.add_selector_clause({1, 2});
  CHECK(inst.solve({3, 4}).sat());
  CHECK(inst.solve({1, 3, 4}).unsat());
}

TEST_CASE("at-most-k counter is exact") {
  for (int n = 1; n <= 5; ++n) {
    for (int k = 0; k <= n; ++k) {
      sat::Solver s;
      s.ensure_vars(n);
      std::vector<int> xs;
      for (int v = 1; v <= n; ++v) xs.push_back(v);
      s.add_at_most_k(xs, k);
      for (int pattern = 0; pattern < (1 << n); ++pattern) {
        std::vector<int> assumptions;
        for (int v = 1; v <= n; ++v)
          assumptions.push_back((pattern >> (v - 1)) & 1 ? v : -v);
        bool expect = std::popcount(static_cast<unsigned>(pattern)) <= k;
        CHECK((s.solve(assumptions) == sat::Status::Sat) == expect);
      }
    }
  }
}

TEST_CASE("solver runs are deterministic") {
  auto f = pigeonhole(4);
  auto run = [&]() {
    SatInstance inst(f);
    std::vector<std::vector<int>> cores;
    auto r = inst.solve(all_indices(f));
    cores.push_back(r.failed_assumptions);
    r = inst.solve({1, 2, 3});
    std::vector<int> model;
    for (int v = 1; v <= f.nvars; ++v)
      model.push_back(r.model.value(Variable{v}) == std::optional<bool>{true});
    return std::pair{cores, model};
  };
  CHECK(run() == run());
}
