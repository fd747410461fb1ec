#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ideaforge/provider/gateway.hpp"
#include "ideaforge/proposal/types.hpp"
#include "ideaforge/ranking/types.hpp"

namespace ideaforge::ranking {

// Marker the pairwise judge prompt ends with; the scripted mock provider
// keys on it.
extern const char* kPairwiseMarker;

struct JudgeContext {
  size_t round = 0;
  size_t match_index = 0;
  // Per-match seed derived by the tournament; all judge randomness
  // (presentation order, fallback coin) must come from it.
  uint64_t seed = 0;
};

struct JudgeDecision {
  size_t winner = 0;
  bool swapped_presentation = false;
  bool fallback_coin = false;
  std::string judge_ref;
};

class PairwiseJudge {
 public:
  virtual ~PairwiseJudge() = default;
  // Returns the winning entry index; must be thread safe, rounds may run
  // their matches concurrently.
  virtual JudgeDecision compare(size_t left, size_t right,
                                const JudgeContext& ctx) = 0;
};

// Wraps a plain function; handy for tests and synthetic tournaments.
class CallbackJudge : public PairwiseJudge {
 public:
  using Fn = std::function<size_t(size_t, size_t, const JudgeContext&)>;
  explicit CallbackJudge(Fn fn) : fn_(std::move(fn)) {}
  JudgeDecision compare(size_t left, size_t right,
                        const JudgeContext& ctx) override;

 private:
  Fn fn_;
};

struct JudgeOptions {
  std::string model = "mock-chat";
  double temperature = 0.0;
  int max_tokens = 64;
  int re_asks = 3;
};

// Shows both proposals under neutral labels (presentation order decided by
// a seeded coin) and asks which should be ranked higher. If no reply parses
// after the re-asks, falls back to a seeded coin and flags the match.
class LlmPairwiseJudge : public PairwiseJudge {
 public:
  LlmPairwiseJudge(provider::Gateway& gateway,
                   const std::vector<proposal::ProjectProposal>& proposals,
                   JudgeOptions options);
  JudgeDecision compare(size_t left, size_t right,
                        const JudgeContext& ctx) override;

 private:
  provider::Gateway& gateway_;
  const std::vector<proposal::ProjectProposal>& proposals_;
  JudgeOptions options_;
};

// Parses a judge reply: the first standalone capital A or B decides.
// Returns 'A', 'B', or 0 when neither is found.
char parse_judge_reply(const std::string& reply);

}  // namespace ideaforge::ranking
