#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "ideaforge/ranking/judge.hpp"

namespace ideaforge::ranking {

// A pair with a known answer: `accepted` should beat `rejected`.
struct LabeledPair {
  size_t accepted = 0;
  size_t rejected = 0;
};

struct ValidationReport {
  size_t pairs = 0;
  size_t correct = 0;
  double accuracy = 0.0;
};

// Judges every labeled pair once (each with its own derived seed) and
// reports the fraction where the judge picked the accepted entry.
ValidationReport validate_ranker(PairwiseJudge& judge,
                                 const std::vector<LabeledPair>& pairs,
                                 uint64_t seed);

struct ScoreGapReport {
  size_t k = 0;
  double top_mean = 0.0;
  double bottom_mean = 0.0;
  double gap = 0.0;
};

// Given a ranking (best first) and an external score per entry, compares the
// mean score of the top k against the bottom k. Throws ConfigError when an
// entry has no score or when 2k exceeds the field.
ScoreGapReport score_gap(const std::vector<size_t>& ranked_best_first,
                         const std::unordered_map<size_t, double>& scores,
                         size_t k);

nlohmann::json validation_to_json(const ValidationReport& report);
nlohmann::json score_gap_to_json(const ScoreGapReport& report);

}  // namespace ideaforge::ranking
