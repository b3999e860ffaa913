#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "muskit/enumerate.hpp"
#include "testutil.hpp"

using namespace muskit;

namespace {

std::set<std::vector<int>> as_set(const std::vector<std::vector<int>>& v) {
  return {v.begin(), v.end()};
}

void check_result_shape(const CnfFormula& f, const EnumerationResult& r) {
  CHECK(as_set(r.muses).size() == r.muses.size());
  CHECK(r.count == static_cast<long long>(r.muses.size()));
  auto masks = testutil::falsified_masks(f);
  for (const auto& mus : r.muses)
    CHECK(testutil::is_mus_mask(masks, testutil::indices_to_mask(mus)));
}

std::vector<CnfFormula> unsat_corpus(int count, int max_vars, int max_clauses,
                                     unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<CnfFormula> out;
  while (static_cast<int>(out.size()) < count) {
    auto f = testutil::random_unsat_leaning_formula(rng, max_vars, max_clauses);
    if (testutil::mask_unsat(testutil::falsified_masks(f),
                             (testutil::Mask{1} << f.ncl()) - 1))
      out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("oracle on the running example") {
  auto report = oracle_enumerate(testutil::example1());
  CHECK(report.result.engine == Engine::Oracle);
  CHECK(report.result.complete);
  CHECK(report.result.count == 2);
  CHECK(as_set(report.result.muses) ==
        std::set<std::vector<int>>{{1, 2}, {1, 3, 4}});
  CHECK(report.cores.size() == 5);
  CHECK(as_set(report.mcses) == std::set<std::vector<int>>{{1}, {2,3}, {2, 4}});
  check_result_shape(testutil::example1(), report.result);
}

TEST_CASE("oracle trivial cases") {
  auto sat = oracle_enumerate(testutil::mk({{1}, {-1, 2}}, 2));
  CHECK(sat.result.complete);
  CHECK(sat.result.count == 0);
  CHECK(sat.result.muses.empty());
  CHECK(sat.mcses.empty());
  CHECK(sat.cores.empty());

  CnfFormula holed = testutil::mk({{1}}, 1);
  holed.add_clause({});
  auto rep = oracle_enumerate(holed);
  CHECK(as_set(rep.result.muses) == std::set<std::vector<int>>{{2}});
  CHECK(as_set(rep.mcses) == std::set<std::vector<int>>{{2}});

  CnfFormula wide;
  for (int i = 0; i < 21; ++i) wide.add_clause({Literal::from_dimacs(1)});
  CHECK_THROWS_AS(oracle_enumerate(wide), asp::BruteForceCapExceeded);
  CHECK_NOTHROW(oracle_enumerate(wide, 21));
}

TEST_CASE("oracle matches the independent reference") {
  std::mt19937 rng(8086);
  for (int iter = 0; iter < 40; ++iter) {
    auto f = testutil::random_formula(rng, 4, 7, 3);
    auto rep = oracle_enumerate(f);
    CHECK(as_set(rep.result.muses) ==
          testutil::as_index_sets(testutil::all_muses(f)));
    CHECK(as_set(rep.cores) ==
          testutil::as_index_sets(testutil::all_unsat_cores(f)));
    CHECK(as_set(rep.mcses) ==
          testutil::as_index_sets(testutil::all_mcses(f)));
  }
}

TEST_CASE("asp route on the running example") {
  auto r = asp_route_enumerate(testutil::example1());
  CHECK(r.engine == Engine::AspRoute);
  CHECK(r.complete);
  CHECK(as_set(r.muses) == std::set<std::vector<int>>{{1, 2}, {1, 3, 4}});

  EncodingOptions all;
  all.heuristics_enabled = HeuristicFlags::all();
  all.bundle = compute_bundle(testutil::example1(), all.heuristics_enabled);
  auto rh = asp_route_enumerate(testutil::example1(), all);
  CHECK(as_set(rh.muses) == as_set(r.muses));

  auto sat = asp_route_enumerate(testutil::mk({{1}}, 1));
  CHECK(sat.complete);
  CHECK(sat.muses.empty());

  std::vector<Literal> lits;
  for (int v = 1; v <= 13; ++v) lits.push_back(Literal::from_dimacs(v));
  CnfFormula big;
  big.add_clause(lits);
  CHECK_THROWS_AS(asp_route_enumerate(big), asp::BruteForceCapExceeded);
}

TEST_CASE("shrink extraction") {
  auto& f = testutil::example1();
  CHECK(shrink(f, {1, 2, 3, 4}) == std::vector<int>{1, 2});
  CHECK(shrink(f, {1, 2, 3}) == std::vector<int>{1, 2});
  CHECK(shrink(f, {1, 3, 4}) == std::vector<int>{1, 3, 4});
  CHECK(shrink(f, {1, 2}) == std::vector<int>{1, 2});
  CHECK_THROWS_AS(shrink(f, {2, 3, 4}), std::invalid_argument);

  auto masks = testutil::falsified_masks(f);
  for (auto seed : {std::vector<int>{1, 2, 3, 4}, {1, 2, 4}, {1, 2, 3}})
    CHECK(testutil::is_mus_mask(masks,
                                testutil::indices_to_mask(shrink(f, seed))));
}

TEST_CASE("seed-shrink on the running example") {
  auto r = seed_shrink_enumerate(testutil::example1());
  CHECK(r.engine == Engine::SeedShrink);
  CHECK(r.complete);
  CHECK(r.count == 2);
  CHECK(r.muses == std::vector<std::vector<int>>{{1, 2}, {1, 3, 4}});
  check_result_shape(testutil::example1(), r);

  Budget one;
  one.max_muses = 1;
  auto partial = seed_shrink_enumerate(testutil::example1(), {}, one);
  CHECK_FALSE(partial.complete);
  REQUIRE(partial.muses.size() == 1);
  CHECK(testutil::is_mus_mask(
      testutil::falsified_masks(testutil::example1()),
      testutil::indices_to_mask(partial.muses[0])));

  Budget expired;
  expired.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  auto timed = seed_shrink_enumerate(testutil::example1(), {}, expired);
  CHECK_FALSE(timed.complete);
  CHECK(timed.muses.empty());
}

TEST_CASE("seed-shrink handles satisfiable and empty input") {
  auto sat = seed_shrink_enumerate(testutil::mk({{1}, {2}, {-1, 2}}, 2));
  CHECK(sat.complete);
  CHECK(sat.count == 0);

  auto empty = seed_shrink_enumerate(CnfFormula{});
  CHECK(empty.complete);
  CHECK(empty.count == 0);
}

TEST_CASE("oracle equivalence across heuristic subsets") {
  auto corpus = unsat_corpus(30, 4, 10, 1234);
  std::vector<HeuristicFlags> subsets = {
      HeuristicFlags::none(),
      HeuristicFlags::all(),
      {true, false, true, false, false},
      {false, true, false, true, true},
  };
  for (const auto& f : corpus) {
    auto expected = testutil::as_index_sets(testutil::all_muses(f));
    for (const auto& flags : subsets) {
      auto bundle = compute_bundle(f, flags);
      auto r = seed_shrink_enumerate(f, bundle);
      REQUIRE(r.complete);
      CHECK(as_set(r.muses) == expected);
      check_result_shape(f, r);
    }
  }
}

TEST_CASE("engines agree wherever both apply") {
  auto corpus = unsat_corpus(15, 3, 5, 5678);
  for (const auto& f : corpus) {
    auto native = seed_shrink_enumerate(f);
    auto asp = asp_route_enumerate(f);
    REQUIRE(native.complete);
    REQUIRE(asp.complete);
    CHECK(as_set(native.muses) == as_set(asp.muses));
  }
}

TEST_CASE("hybrid dispatch and threshold boundary") {
  auto& f = testutil::example1();
  auto routed = hybrid_enumerate(f);
  CHECK(routed.engine == Engine::AspRoute);
  CHECK(as_set(routed.muses) == std::set<std::vector<int>>{{1, 2}, {1, 3, 4}});

  HybridPolicy at_count;
  at_count.clause_threshold = 4;
  auto fallback = hybrid_enumerate(f, at_count);
  CHECK(fallback.engine == Engine::SeedShrink);
  CHECK(as_set(fallback.muses) == as_set(routed.muses));

  HybridPolicy above;
  above.clause_threshold = 5;
  CHECK(hybrid_enumerate(f, above).engine == Engine::AspRoute);

  HybridPolicy tiny;
  tiny.clause_threshold = 1;
  CHECK(hybrid_enumerate(f, tiny).engine == Engine::SeedShrink);

  HybridPolicy bad;
  bad.clause_threshold = 0;
  CHECK_THROWS_AS(hybrid_enumerate(f, bad), std::invalid_argument);

  EncodingOptions all;
  all.heuristics_enabled = HeuristicFlags::all();
  auto heur = hybrid_enumerate(f, {}, all);
  CHECK(heur.engine == Engine::AspRoute);
  CHECK(as_set(heur.muses) == as_set(routed.muses));
}

TEST_CASE("mus counting") {
  auto ex = count_mus(testutil::example1());
  CHECK(ex.count == 2);
  CHECK(ex.complete);

  auto sat = count_mus(testutil::mk({{1}, {-1, 2}}, 2));
  CHECK(sat.count == 0);
  CHECK(sat.complete);

  std::mt19937 rng(11);
  int done = 0;
  while (done < 10) {
    auto f = testutil::random_formula(rng, 4, 8, 3);
    if (f.ncl() != 8 || !testutil::mask_unsat(testutil::falsified_masks(f),
                                              (testutil::Mask{1} << 8) - 1))
      continue;
    auto got = count_mus(f);
    REQUIRE(got.complete);
    CHECK(got.count ==
          static_cast<long long>(testutil::all_muses(f).size()));
    ++done;
  }
}

TEST_CASE("engine names") {
  CHECK(engine_name(Engine::AspRoute) == "asp-route");
  CHECK(engine_name(Engine::SeedShrink) == "seed-shrink");
  CHECK(engine_name(Engine::Hybrid) == "hybrid");
  CHECK(engine_name(Engine::Oracle) == "oracle");
}
