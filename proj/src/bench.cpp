#include "muskit/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "muskit/encoder.hpp"

namespace muskit {

std::map<std::string, double> rank_configs(const std::vector<RunRecord>& records) {
  if (records.empty()) throw std::invalid_argument("rank_configs: no records");

  std::set<std::string> configs;
  std::set<std::string> instances;
  std::map<std::pair<std::string, std::string>, long long> counts;
  for (const auto& r : records) {
    configs.insert(r.config);
    instances.insert(r.instance);
    counts[{r.instance, r.config}] = r.mus_count;
  }

  std::map<std::string, double> rank_sum;
  for (const auto& inst : instances) {
    std::vector<std::pair<long long, std::string>> row;
    for (const auto& cfg : configs) {
      auto it = counts.find({inst, cfg});
      row.emplace_back(it == counts.end() ? 0 : it->second, cfg);
    }
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (size_t i = 0; i < row.size();) {
      size_t j = i;
      while (j < row.size() && row[j].first == row[i].first) ++j;
      double mean = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
      for (size_t k = i; k < j; ++k) rank_sum[row[k].second] += mean;
      i = j;
    }
  }

  std::map<std::string, double> out;
  for (const auto& cfg : configs)
    out[cfg] = rank_sum[cfg] / static_cast<double>(instances.size());
  return out;
}

std::map<std::string, double> par2(const std::vector<RunRecord>& records) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& r : records) {
    auto& [total, n] = acc[r.config];
    total += r.solved ? r.elapsed : 2.0 * r.timeout;
    ++n;
  }
  std::map<std::string, double> out;
  for (const auto& [cfg, a] : acc) out[cfg] = a.first / a.second;
  return out;
}

std::vector<RunRecord> run_bench(
    const std::vector<std::pair<std::string, CnfFormula>>& instances,
    const std::vector<BenchConfig>& configs, const BenchOptions& opts) {
  std::vector<RunRecord> records(instances.size() * configs.size());
  if (records.empty()) return records;

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t k = next.fetch_add(1);
      if (k >= records.size()) return;
      const auto& [name, formula] = instances[k / configs.size()];
      const BenchConfig& cfg = configs[k % configs.size()];

      Budget budget;
      budget.deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(opts.timeout_seconds));
      EncodingOptions eopts;
      eopts.heuristics_enabled = cfg.heuristics;
      EnumerationResult res = hybrid_enumerate(formula, cfg.policy, eopts, budget);

      double elapsed = static_cast<double>(res.elapsed.count()) / 1000.0;
      if (res.complete) elapsed = std::min(elapsed, opts.timeout_seconds);
      records[k] = {name, cfg.name, res.count, res.complete, elapsed,
                    opts.timeout_seconds};
    }
  };

  int jobs = std::max(1, opts.jobs);
  std::vector<std::thread> pool;
  for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.instance, a.config) < std::tie(b.instance, b.config);
  });
  return records;
}

Scoreboard make_scoreboard(const std::vector<RunRecord>& records) {
  Scoreboard board;
  if (records.empty()) return board;

  auto ranks = rank_configs(records);
  auto scores = par2(records);

  std::set<std::string> instances;
  std::map<std::string, int> solved;
  for (const auto& r : records) {
    instances.insert(r.instance);
    if (r.solved) ++solved[r.config];
  }
  board.instances = static_cast<int>(instances.size());

  for (const auto& [cfg, rank] : ranks)
    board.configs.push_back({cfg, rank, solved[cfg], scores[cfg]});
  std::sort(board.configs.begin(), board.configs.end(),
            [](const ConfigScore& a, const ConfigScore& b) {
              return std::tie(a.avg_rank, a.config) < std::tie(b.avg_rank, b.config);
            });
  return board;
}

std::string to_csv(std::vector<RunRecord> records) {
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.instance, a.config) < std::tie(b.instance, b.config);
  });
  std::string out = "instance,config,mus_count,solved,elapsed_s,timeout_s\n";
  char buf[64];
  for (const auto& r : records) {
    out += r.instance;
    out += ',';
    out += r.config;
    out += ',';
    out += std::to_string(r.mus_count);
    out += ',';
    out += r.solved ? '1' : '0';
    std::snprintf(buf, sizeof(buf), ",%.3f,%.3f\n", r.elapsed, r.timeout);
    out += buf;
  }
  return out;
}

std::string to_json(const Scoreboard& board) {
  nlohmann::json j;
  j["instances"] = board.instances;
  j["rank_tie_rule"] = board.rank_tie_rule;
  j["configs"] = nlohmann::json::array();
  for (const auto& c : board.configs) {
    j["configs"].push_back({{"name", c.config},
                            {"avg_rank", c.avg_rank},
                            {"solved", c.solved},
                            {"par2", c.par2}});
  }
  return j.dump(2) + "\n";
}

CnfFormula make_coloring_instance(int vertices, int colors) {
  if (vertices < 2 || colors < 1)
    throw std::invalid_argument("make_coloring_instance: degenerate graph");
  CnfFormula f;
  f.nvars = vertices * colors;
  auto var = [&](int v, int c) { return v * colors + c + 1; };

  for (int v = 0; v < vertices; ++v) {
    std::vector<Literal> lits;
    for (int c = 0; c < colors; ++c) lits.push_back(Literal::from_dimacs(var(v, c)));
    f.add_clause(lits);
  }
  for (int v = 0; v < vertices; ++v) {
    int u = (v + 1) % vertices;
    for (int c = 0; c < colors; ++c)
      f.add_clause({Literal::from_dimacs(-var(v, c)), Literal::from_dimacs(-var(u, c))});
  }
  return f;
}

}  // namespace muskit
