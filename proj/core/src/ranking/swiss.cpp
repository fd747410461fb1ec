#include "ideaforge/ranking/swiss.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "ideaforge/errors.hpp"
#include "ideaforge/util/rng.hpp"

namespace ideaforge::ranking {

namespace {

std::pair<size_t, size_t> norm_pair(size_t a, size_t b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::vector<size_t> standings(const std::vector<int>& scores) {
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  return order;
}

}  // namespace

RoundPlan pair_round(const std::vector<int>& scores,
                     const std::vector<int>& bye_counts,
                     const std::set<std::pair<size_t, size_t>>& played) {
  if (scores.size() != bye_counts.size()) {
    throw ConfigError("scores and bye counts disagree on entry count");
  }
  RoundPlan plan;
  std::vector<size_t> order = standings(scores);

  if (order.size() % 2 == 1) {
    int fewest = *std::min_element(bye_counts.begin(), bye_counts.end());
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (bye_counts[*it] == fewest) {
        plan.bye = *it;
        order.erase(std::next(it).base());
        break;
      }
    }
  }

  for (size_t i = 0; i + 1 < order.size(); i += 2) {
    if (played.count(norm_pair(order[i], order[i + 1])) &&
        i + 2 < order.size()) {
      std::swap(order[i + 1], order[i + 2]);
    }
    plan.pairs.emplace_back(order[i], order[i + 1]);
  }
  return plan;
}

TournamentReport run_tournament(size_t entries, PairwiseJudge& judge,
                                const TournamentConfig& config) {
  if (entries < 2) {
    throw ConfigError("a tournament needs at least two entries");
  }
  TournamentReport report;
  report.entries = entries;
  report.rounds = config.rounds;
  report.seed = config.seed;
  report.scores.assign(entries, 0);

  std::vector<int> bye_counts(entries, 0);
  std::set<std::pair<size_t, size_t>> played;

  for (size_t round = 0; round < config.rounds; ++round) {
    RoundPlan plan = pair_round(report.scores, bye_counts, played);
    report.byes.push_back(plan.bye);
    if (plan.bye) bye_counts[*plan.bye] += 1;

    std::vector<JudgeDecision> decisions(plan.pairs.size());
    auto judge_match = [&](size_t m) {
      JudgeContext ctx;
      ctx.round = round;
      ctx.match_index = m;
      ctx.seed = util::derive_seed(
          config.seed, "match",
          (static_cast<uint64_t>(round) << 32) | static_cast<uint64_t>(m));
      decisions[m] = judge.compare(plan.pairs[m].first, plan.pairs[m].second,
                                   ctx);
    };

    if (config.max_parallel > 1 && plan.pairs.size() > 1) {
      std::atomic<size_t> next{0};
      size_t workers =
          std::min(config.max_parallel, plan.pairs.size());
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (size_t m = next.fetch_add(1); m < plan.pairs.size();
               m = next.fetch_add(1)) {
            judge_match(m);
          }
        });
      }
      for (auto& t : pool) t.join();
    } else {
      for (size_t m = 0; m < plan.pairs.size(); ++m) judge_match(m);
    }

    for (size_t m = 0; m < plan.pairs.size(); ++m) {
      const auto& [left, right] = plan.pairs[m];
      const JudgeDecision& decision = decisions[m];
      if (decision.winner != left && decision.winner != right) {
        throw StageError("judge picked an entry outside the match");
      }
      MatchRecord rec;
      rec.round = round;
      rec.left = left;
      rec.right = right;
      rec.winner = decision.winner;
      rec.swapped_presentation = decision.swapped_presentation;
      rec.fallback_coin = decision.fallback_coin;
      rec.judge_ref = decision.judge_ref;
      report.matches.push_back(std::move(rec));
      report.scores[decision.winner] += 1;
      played.insert(norm_pair(left, right));
    }
  }
  return report;
}

std::vector<RankedEntry> final_ranking(const TournamentReport& report) {
  std::vector<int> opponent_sum(report.entries, 0);
  for (const auto& m : report.matches) {
    opponent_sum[m.left] += report.scores[m.right];
    opponent_sum[m.right] += report.scores[m.left];
  }
  std::vector<RankedEntry> ranking(report.entries);
  for (size_t i = 0; i < report.entries; ++i) {
    ranking[i] = {i, report.scores[i], opponent_sum[i]};
  }
  std::sort(ranking.begin(), ranking.end(),
            [](const RankedEntry& a, const RankedEntry& b) {
              if (a.score != b.score) return a.score > b.score;
              if (a.opponent_score_sum != b.opponent_score_sum) {
                return a.opponent_score_sum > b.opponent_score_sum;
              }
              return a.index < b.index;
            });
  return ranking;
}

}  // namespace ideaforge::ranking
