#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ideaforge::ranking {

struct MatchRecord {
  size_t round = 0;
  size_t left = 0;
  size_t right = 0;
  size_t winner = 0;
  bool swapped_presentation = false;
  bool fallback_coin = false;
  // Provider cache key of the deciding completion, empty for local judges.
  std::string judge_ref;
};

struct RoundPlan {
  std::vector<std::pair<size_t, size_t>> pairs;
  std::optional<size_t> bye;
};

struct TournamentReport {
  size_t entries = 0;
  size_t rounds = 0;
  uint64_t seed = 0;
  std::vector<int> scores;
  std::vector<std::optional<size_t>> byes;  // one slot per round
  std::vector<MatchRecord> matches;
};

struct RankedEntry {
  size_t index = 0;
  int score = 0;
  // Sum of final scores of every opponent faced; breaks score ties.
  int opponent_score_sum = 0;
};

nlohmann::json report_to_json(const TournamentReport& report);
TournamentReport report_from_json(const nlohmann::json& doc);

}  // namespace ideaforge::ranking
