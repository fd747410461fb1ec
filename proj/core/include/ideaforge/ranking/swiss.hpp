#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "ideaforge/ranking/judge.hpp"
#include "ideaforge/ranking/types.hpp"

namespace ideaforge::ranking {

struct TournamentConfig {
  size_t rounds = 5;
  uint64_t seed = 0;
  // Matches within a round are independent; >1 judges them concurrently.
  size_t max_parallel = 1;
};

// Pairs one round: entries sorted by score (ties by index), adjacent pairs,
// with a single adjacent swap to avoid an exact rematch. With an odd field
// the bye goes to the lowest-sorted entry among those with the fewest byes
// so far, so nobody sits out twice before everyone sat out once.
RoundPlan pair_round(const std::vector<int>& scores,
                     const std::vector<int>& bye_counts,
                     const std::set<std::pair<size_t, size_t>>& played);

// Runs a full tournament over `entries` indices. Each match gets its own
// derived seed, so replays are identical regardless of parallelism.
TournamentReport run_tournament(size_t entries, PairwiseJudge& judge,
                                const TournamentConfig& config);

// Final order: score, then strength of opposition, then index.
std::vector<RankedEntry> final_ranking(const TournamentReport& report);

}  // namespace ideaforge::ranking
