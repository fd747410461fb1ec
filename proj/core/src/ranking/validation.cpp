#include "ideaforge/ranking/validation.hpp"

#include "ideaforge/errors.hpp"
#include "ideaforge/util/rng.hpp"

namespace ideaforge::ranking {

ValidationReport validate_ranker(PairwiseJudge& judge,
                                 const std::vector<LabeledPair>& pairs,
                                 uint64_t seed) {
  ValidationReport report;
  report.pairs = pairs.size();
  for (size_t i = 0; i < pairs.size(); ++i) {
    JudgeContext ctx;
    ctx.round = 0;
    ctx.match_index = i;
    ctx.seed = util::derive_seed(seed, "validate", i);
    JudgeDecision decision =
        judge.compare(pairs[i].accepted, pairs[i].rejected, ctx);
    if (decision.winner == pairs[i].accepted) report.correct += 1;
  }
  report.accuracy = pairs.empty() ? 0.0
                                  : static_cast<double>(report.correct) /
                                        static_cast<double>(report.pairs);
  return report;
}

ScoreGapReport score_gap(const std::vector<size_t>& ranked_best_first,
                         const std::unordered_map<size_t, double>& scores,
                         size_t k) {
  if (k == 0) throw ConfigError("score gap needs k >= 1");
  if (2 * k > ranked_best_first.size()) {
    throw ConfigError("score gap needs at least 2k ranked entries");
  }
  auto score_of = [&](size_t entry) {
    auto it = scores.find(entry);
    if (it == scores.end()) {
      throw ConfigError("no score for ranked entry " +
                        std::to_string(entry));
    }
    return it->second;
  };
  ScoreGapReport report;
  report.k = k;
  double top = 0.0;
  double bottom = 0.0;
  for (size_t i = 0; i < k; ++i) {
    top += score_of(ranked_best_first[i]);
    bottom += score_of(
        ranked_best_first[ranked_best_first.size() - 1 - i]);
  }
  report.top_mean = top / static_cast<double>(k);
  report.bottom_mean = bottom / static_cast<double>(k);
  report.gap = report.top_mean - report.bottom_mean;
  return report;
}

nlohmann::json validation_to_json(const ValidationReport& report) {
  return nlohmann::json{{"pairs", report.pairs},
                        {"correct", report.correct},
                        {"accuracy", report.accuracy}};
}

nlohmann::json score_gap_to_json(const ScoreGapReport& report) {
  return nlohmann::json{{"k", report.k},
                        {"top_mean", report.top_mean},
                        {"bottom_mean", report.bottom_mean},
                        {"gap", report.gap}};
}

}  // namespace ideaforge::ranking
