// Acceptance gate: one line per criterion, exit 0 only if all pass.

#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "muskit/bench.hpp"
#include "muskit/encoder.hpp"
#include "muskit/enumerate.hpp"
#include "muskit/heuristics.hpp"
#include "testutil.hpp"

using namespace muskit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome ok() { return {}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

std::set<std::vector<int>> as_set(const std::vector<std::vector<int>>& v) {
  return {v.begin(), v.end()};
}

// 2-4 vars, 2-6 clauses, mixed satisfiable and unsatisfiable.
const std::vector<CnfFormula>& small_corpus() {
  static const std::vector<CnfFormula> corpus = [] {
    std::mt19937 rng(420017);
    std::vector<CnfFormula> out;
    while (out.size() < 500) {
      auto f = testutil::random_formula(rng, 4, 6, 3);
      if (f.nvars < 2 || f.ncl() < 2) continue;
      out.push_back(f);
    }
    return out;
  }();
  return corpus;
}

bool formula_unsat(const CnfFormula& f) {
  auto masks = testutil::falsified_masks(f);
  return testutil::mask_unsat(masks, (testutil::Mask{1} << f.ncl()) - 1);
}

Outcome criterion1_example1() {
  const auto& f = testutil::example1();
  const std::set<std::vector<int>> want_mus = {{1, 2}, {1, 3, 4}};
  const std::set<std::vector<int>> want_mcs = {{1}, {2, 3}, {2, 4}};

  auto rep = oracle_enumerate(f);
  if (rep.cores.size() != 5)
    return fail("expected 5 cores, got " + std::to_string(rep.cores.size()));
  if (as_set(rep.mcses) != want_mcs) return fail("MCS set differs");
  if (as_set(rep.result.muses) != want_mus) return fail("oracle MUS set differs");

  auto res = hybrid_enumerate(f);
  if (!res.complete || as_set(res.muses) != want_mus)
    return fail("enumerator MUS set differs");

  auto p = build_program(f);
  auto answer_sets = asp::enumerate_answer_sets(p);
  if (answer_sets.size() != 5)
    return fail("expected 5 answer sets, got " +
                std::to_string(answer_sets.size()));
  auto selectors = selector_set(f);
  std::set<asp::Atom> lambda(selectors.begin(), selectors.end());
  auto minimal = asp::subset_minimal_filter(answer_sets, lambda);
  std::set<std::vector<int>> projected;
  for (const auto& m : minimal) projected.insert(asp::cls_indices(m));
  if (projected != want_mus) return fail("minimal answer-set projections differ");
  return ok();
}

Outcome criterion2_bijection() {
  int sat_seen = 0;
  int unsat_seen = 0;
  int mismatches = 0;
  for (const auto& f : small_corpus()) {
    (formula_unsat(f) ? unsat_seen : sat_seen)++;
    auto cores = testutil::as_index_sets(testutil::all_unsat_cores(f));
    auto answer_sets = asp::enumerate_answer_sets(build_program(f));
    std::set<std::vector<int>> projected;
    for (const auto& m : answer_sets) projected.insert(asp::cls_indices(m));
    if (answer_sets.size() != cores.size() || projected != cores) ++mismatches;
  }
  if (sat_seen == 0 || unsat_seen == 0) return fail("corpus is not mixed");
  if (mismatches)
    return fail(std::to_string(mismatches) + " mismatches of 500");
  return ok();
}

Outcome criterion3_saturation() {
  long long violations = 0;
  for (const auto& f : small_corpus()) {
    auto p = build_program(f);
    std::set<asp::Atom> saturated;
    saturated.insert(asp::Atom::unsat());
    for (int v = 1; v <= f.nvars; ++v) {
      saturated.insert(asp::Atom::pos(v));
      saturated.insert(asp::Atom::neg(v));
    }
    for (const auto& model : asp::enumerate_models(p)) {
      for (const auto& a : saturated)
        if (!model.count(a)) {
          ++violations;
          break;
        }
    }
  }
  if (violations) return fail(std::to_string(violations) + " violations");
  return ok();
}

Outcome criterion4_heuristic_completeness() {
  std::mt19937 rng(771842);
  std::vector<CnfFormula> corpus;
  while (corpus.size() < 100) {
    auto f = testutil::random_formula(rng, 4, 6, 3);
    if (formula_unsat(f)) corpus.push_back(f);
  }
  int mismatches = 0;
  for (const auto& f : corpus) {
    auto want = testutil::as_index_sets(testutil::all_muses(f));
    for (int bits = 0; bits < 32; ++bits) {
      HeuristicFlags flags{bool(bits & 1), bool(bits & 2), bool(bits & 4),
                           bool(bits & 8), bool(bits & 16)};
      auto bundle = compute_bundle(f, flags);
      auto res = seed_shrink_enumerate(f, bundle);
      if (!res.complete || as_set(res.muses) != want) {
        ++mismatches;
        break;
      }
    }
  }
  if (mismatches)
    return fail(std::to_string(mismatches) + " formulas with divergent MUS sets");
  return ok();
}

Outcome criterion5_oracle_equivalence() {
  std::mt19937 rng(90125);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    auto f = testutil::random_formula(rng, 5, 12, 3);
    auto rep = oracle_enumerate(f);
    auto res = seed_shrink_enumerate(f);
    if (!res.complete || as_set(res.muses) != as_set(rep.result.muses))
      ++mismatches;
  }
  if (mismatches)
    return fail(std::to_string(mismatches) + " mismatches of 200");
  return ok();
}

Outcome criterion6_duality() {
  int checked = 0;
  int mismatches = 0;
  for (const auto& f : small_corpus()) {
    if (!formula_unsat(f)) continue;
    ++checked;
    auto mcses = testutil::all_mcses(f);
    auto hitting = testutil::minimal_hitting_sets(mcses, f.ncl());
    if (testutil::as_index_sets(hitting) !=
        testutil::as_index_sets(testutil::all_muses(f)))
      ++mismatches;
  }
  if (checked == 0) return fail("no unsatisfiable formulas in corpus");
  if (mismatches)
    return fail(std::to_string(mismatches) + " mismatches of " +
                std::to_string(checked));
  return ok();
}

Outcome criterion7_card_bounds() {
  auto mr1 = enumerate_mcs(testutil::example1());
  auto cb1 = card_bounds(testutil::example1(), mr1.mcses);
  if (!mr1.complete || cb1.lb != 2 || cb1.ub != 4)
    return fail("worked-example bounds (" + std::to_string(cb1.lb) + ", " +
                std::to_string(cb1.ub) + ") instead of (2, 4)");

  int mismatches = 0;
  for (const auto& f : small_corpus()) {
    if (!formula_unsat(f)) continue;
    auto mr = enumerate_mcs(f);
    auto cb = card_bounds(f, mr.mcses);
    for (auto mus : testutil::all_muses(f)) {
      int size = std::popcount(mus);
      if (size < cb.lb || size > cb.ub) {
        ++mismatches;
        break;
      }
    }
  }
  if (mismatches)
    return fail(std::to_string(mismatches) + " formulas with out-of-bound MUSes");
  return ok();
}

Outcome criterion8_hybrid_threshold() {
  auto mk_units = [](int n) {
    CnfFormula f;
    f.nvars = 1;
    for (int i = 0; i < n; ++i) f.add_clause({Literal::from_dimacs(1)});
    return f;
  };
  auto below = hybrid_enumerate(mk_units(4999));
  if (below.engine != Engine::AspRoute)
    return fail("ncl=4999 picked " + std::string(engine_name(below.engine)));
  auto at = hybrid_enumerate(mk_units(5000));
  if (at.engine != Engine::SeedShrink)
    return fail("ncl=5000 picked " + std::string(engine_name(at.engine)));
  if (!below.complete || !at.complete || below.count != 0 || at.count != 0)
    return fail("satisfiable dispatch runs did not complete empty");
  return ok();
}

Outcome criterion9_metrics() {
  std::vector<RunRecord> tie = {{"i1", "a", 10, true, 1, 10},
                                {"i1", "b", 5, true, 1, 10},
                                {"i1", "c", 5, true, 1, 10},
                                {"i1", "d", 1, true, 1, 10}};
  auto ranks = rank_configs(tie);
  auto near = [](double x, double y) { return std::abs(x - y) < 1e-9; };
  if (!near(ranks["a"], 1.0) || !near(ranks["b"], 2.5) || !near(ranks["c"], 2.5) ||
      !near(ranks["d"], 4.0))
    return fail("tie example ranks differ");

  std::vector<RunRecord> instant = {{"i1", "a", 1, true, 0, 3600},
                                    {"i2", "a", 1, true, 0, 3600}};
  if (!near(par2(instant)["a"], 0.0)) return fail("all-solved PAR2 is not 0");
  std::vector<RunRecord> unsolved = {{"i1", "a", 0, false, 3600, 3600}};
  if (!near(par2(unsolved)["a"], 7200.0)) return fail("unsolved PAR2 is not 7200");
  std::vector<RunRecord> mixed = {{"i1", "a", 3, true, 100, 100},
                                  {"i2", "a", 0, false, 100, 100}};
  if (!near(par2(mixed)["a"], 150.0)) return fail("mixed PAR2 is not 150");
  return ok();
}

Outcome criterion10_bench_smoke() {
  std::vector<std::pair<std::string, CnfFormula>> instances;
  for (int i = 0; i < 20; ++i) {
    int n = 5 + 2 * i;
    char name[16];
    std::snprintf(name, sizeof(name), "ring%02d", n);
    instances.emplace_back(name, make_coloring_instance(n, 2));
  }
  std::vector<BenchConfig> configs = {
      {"plain", HeuristicFlags::none(), {}},
      {"heuristic", HeuristicFlags::all(), {}},
  };
  BenchOptions opts;
  opts.timeout_seconds = 30.0;
  opts.jobs = 4;
  auto records = run_bench(instances, configs, opts);
  if (records.size() != 40)
    return fail("expected 40 records, got " + std::to_string(records.size()));
  for (const auto& r : records)
    if (r.solved && r.elapsed > r.timeout)
      return fail("solved record over its timeout");

  auto csv = to_csv(records);
  auto lines = std::count(csv.begin(), csv.end(), '\n');
  if (lines != 41 || csv.rfind("instance,config,", 0) != 0)
    return fail("CSV is malformed");

  auto board = make_scoreboard(records);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(to_json(board));
  } catch (const nlohmann::json::exception&) {
    return fail("scoreboard JSON does not parse");
  }
  if (j["instances"] != 20 || j["configs"].size() != 2 ||
      !j.contains("rank_tie_rule"))
    return fail("scoreboard shape is wrong");
  double rank_sum = 0.0;
  for (const auto& c : j["configs"]) {
    double rank = c["avg_rank"].get<double>();
    if (rank < 1.0 || rank > 2.0) return fail("average rank out of [1, 2]");
    if (c["par2"].get<double>() < 0.0) return fail("negative PAR2");
    rank_sum += rank;
  }
  if (std::abs(rank_sum - 3.0) > 1e-9) return fail("ranks do not sum to 3");
  return ok();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "four-clause worked example", 1.0, criterion1_example1},
      {2, "answer sets match cores (500 formulas)", 300.0, criterion2_bijection},
      {3, "models contain saturation atoms", 0.0, criterion3_saturation},
      {4, "heuristic completeness (32 subsets)", 0.0,
       criterion4_heuristic_completeness},
      {5, "oracle equivalence (ncl <= 12)", 600.0, criterion5_oracle_equivalence},
      {6, "hitting-set duality", 0.0, criterion6_duality},
      {7, "cardinality-bound soundness", 0.0, criterion7_card_bounds},
      {8, "hybrid threshold dispatch", 0.0, criterion8_hybrid_threshold},
      {9, "metrics examples", 0.0, criterion9_metrics},
      {10, "bench smoke (20 coloring instances)", 900.0, criterion10_bench_smoke},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = c.run();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
    if (o.pass && c.limit_s > 0.0 && secs > c.limit_s)
      o = fail("exceeded " + std::to_string(c.limit_s) + " s budget");
    std::printf("%s  criterion %2d  %-38s [%8.2f s]%s%s\n",
                o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("acceptance: %d/10 criteria passed\n",
              10 - failures);
  return failures == 0 ? 0 : 1;
}
