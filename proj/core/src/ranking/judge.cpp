#include "ideaforge/ranking/judge.hpp"

#include <cctype>

#include "ideaforge/util/rng.hpp"

namespace ideaforge::ranking {

const char* kPairwiseMarker = "Answer with exactly \"A\" or \"B\".";

JudgeDecision CallbackJudge::compare(size_t left, size_t right,
                                     const JudgeContext& ctx) {
  JudgeDecision decision;
  decision.winner = fn_(left, right, ctx);
  return decision;
}

char parse_judge_reply(const std::string& reply) {
  for (size_t i = 0; i < reply.size(); ++i) {
    char c = reply[i];
    if (c != 'A' && c != 'B') continue;
    bool left_ok =
        i == 0 || !isalnum(static_cast<unsigned char>(reply[i - 1]));
    bool right_ok = i + 1 == reply.size() ||
                    !isalnum(static_cast<unsigned char>(reply[i + 1]));
    if (left_ok && right_ok) return c;
  }
  return 0;
}

LlmPairwiseJudge::LlmPairwiseJudge(
    provider::Gateway& gateway,
    const std::vector<proposal::ProjectProposal>& proposals,
    JudgeOptions options)
    : gateway_(gateway), proposals_(proposals), options_(options) {}

JudgeDecision LlmPairwiseJudge::compare(size_t left, size_t right,
                                        const JudgeContext& ctx) {
  util::RandomStream present(util::derive_seed(ctx.seed, "present", 0));
  bool swapped = present.bernoulli(0.5);
  size_t shown_a = swapped ? right : left;
  size_t shown_b = swapped ? left : right;

  std::string prompt;
  prompt +=
      "You are reviewing two research project proposals on the same topic. "
      "Decide which one is the stronger submission overall, weighing "
      "novelty, excitement, feasibility, and expected effectiveness.\n\n";
  prompt += "Proposal A:\n\n";
  prompt += proposal::format_proposal(proposals_.at(shown_a));
  prompt += "\nProposal B:\n\n";
  prompt += proposal::format_proposal(proposals_.at(shown_b));
  prompt += "\n";
  prompt += kPairwiseMarker;
  prompt += "\n";

  provider::CompletionRequest req;
  req.model = options_.model;
  req.temperature = options_.temperature;
  req.max_tokens = options_.max_tokens;
  req.messages = {{"user", prompt}};

  JudgeDecision decision;
  decision.swapped_presentation = swapped;
  for (int attempt = 0; attempt <= options_.re_asks; ++attempt) {
    req.seed = util::derive_seed(ctx.seed, "judge",
                                 static_cast<uint64_t>(attempt));
    provider::Completion completion = gateway_.complete(req);
    decision.judge_ref = completion.cache_key;
    char verdict = parse_judge_reply(completion.text);
    if (verdict == 'A') {
      decision.winner = shown_a;
      return decision;
    }
    if (verdict == 'B') {
      decision.winner = shown_b;
      return decision;
    }
  }
  util::RandomStream fallback(util::derive_seed(ctx.seed, "fallback", 0));
  decision.fallback_coin = true;
  decision.winner = fallback.bernoulli(0.5) ? right : left;
  return decision;
}

}  // namespace ideaforge::ranking
