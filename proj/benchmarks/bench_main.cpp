#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "ideaforge/dedup/dedup.hpp"
#include "ideaforge/ranking/judge.hpp"
#include "ideaforge/ranking/swiss.hpp"
#include "ideaforge/stats/protocol.hpp"
#include "ideaforge/stats/tests.hpp"
#include "ideaforge/util/rng.hpp"

using namespace ideaforge;

namespace {

std::vector<std::vector<double>> random_unit_vectors(size_t n, size_t dim,
                                                     std::uint64_t seed) {
  util::RandomStream rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (double& x : v) x = rng.uniform() * 2.0 - 1.0;
    out.push_back(dedup::l2_normalize(std::move(v)));
  }
  return out;
}

stats::ReviewSet random_reviews(size_t ideas, size_t reviews_per_idea,
                                std::uint64_t seed) {
  util::RandomStream rng(seed);
  stats::ReviewSet set;
  for (size_t i = 0; i < ideas; ++i) {
    for (size_t r = 0; r < reviews_per_idea; ++r) {
      stats::ReviewRecord rec;
      rec.idea_id = "idea-" + std::to_string(i);
      rec.reviewer_id = "rev-" + std::to_string(i) + "-" + std::to_string(r);
      rec.condition = stats::Condition::Ai;
      rec.novelty = 1 + static_cast<int>(rng.below(10));
      rec.excitement = 1 + static_cast<int>(rng.below(10));
      rec.feasibility = 1 + static_cast<int>(rng.below(10));
      rec.effectiveness = 1 + static_cast<int>(rng.below(10));
      rec.overall = 1 + static_cast<int>(rng.below(10));
      set.records.push_back(std::move(rec));
    }
  }
  return set;
}

}  // namespace

static void BM_dedup_scan(benchmark::State& state) {
  auto vectors =
      random_unit_vectors(static_cast<size_t>(state.range(0)), 64, 7);
  dedup::DedupConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dedup::deduplicate(vectors, config));
  }
}
BENCHMARK(BM_dedup_scan)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_welch_battery(benchmark::State& state) {
  util::RandomStream rng(11);
  std::vector<double> a(500);
  std::vector<double> b(400);
  for (double& x : a) x = rng.uniform() * 10.0;
  for (double& x : b) x = rng.uniform() * 10.0 + 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::welch_t(a, b));
  }
}
BENCHMARK(BM_welch_battery);

static void BM_tournament(benchmark::State& state) {
  size_t entries = static_cast<size_t>(state.range(0));
  ranking::CallbackJudge judge(
      [](size_t left, size_t right, const ranking::JudgeContext&) {
        return left < right ? left : right;
      });
  ranking::TournamentConfig config;
  config.rounds = 5;
  config.seed = 123;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ranking::run_tournament(entries, judge, config));
  }
}
BENCHMARK(BM_tournament)->Arg(50)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_split_half(benchmark::State& state) {
  stats::ReviewSet reviews = random_reviews(100, 4, 17);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::split_half_agreement(
        reviews, stats::Metric::Overall, 100, 0.5, 99));
  }
}
BENCHMARK(BM_split_half)->Unit(benchmark::kMillisecond);
