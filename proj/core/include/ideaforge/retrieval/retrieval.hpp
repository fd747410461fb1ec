#pragma once

#include <cstdint>
#include <string_view>

#include "ideaforge/provider/gateway.hpp"
#include "ideaforge/retrieval/paper_source.hpp"
#include "ideaforge/retrieval/types.hpp"

namespace ideaforge::retrieval {

// Phrases the model-facing prompts are built around. The scripted offline
// provider recognizes the same phrases, so they live here as constants.
inline constexpr std::string_view kPlannerMarker =
    "Respond with exactly one action";
inline constexpr std::string_view kScoreMarker =
    "a single integer from 1 to 10";

struct LlmOptions {
  std::string model;
  double temperature = 0.0;  // planning and scoring are judging tasks
  int max_tokens = 512;
  int re_asks = 3;           // additional attempts on unparseable replies
  std::uint64_t seed = 0;
};

std::string build_planner_prompt(const Topic& topic,
                                 const RetrievalTrace& trace);
std::string build_score_prompt(const Topic& topic, const PaperRecord& paper);

// Asks the model for the next retrieval action given the trace so far.
// Returns nullopt on an explicit stop; throws ParseError when the reply
// stays unparseable after re-asks.
std::optional<RetrievalAction> plan_action(const Topic& topic,
                                           const RetrievalTrace& trace,
                                           provider::Gateway& gateway,
                                           const LlmOptions& options);

// Runs one action against the paper source and appends up to
// `per_call_keep` new unique papers to the trace (bounded by the
// max_papers cap). Returns how many were added.
size_t execute_action(const RetrievalAction& action, PaperSource& source,
                      RetrievalTrace& trace, const RetrievalCaps& caps);

// 1..10 relevance grade for one paper; tolerant of "7", "7/10", "Score: 7".
int score_paper(const Topic& topic, const PaperRecord& paper,
                provider::Gateway& gateway, const LlmOptions& options);

struct TopSelection {
  std::vector<PaperRecord> papers;
  // Set when fewer papers exist than were requested.
  bool short_of_request = false;
};

// Top n by relevance, descending; arrival order breaks ties.
TopSelection select_top(const RetrievalTrace& trace, size_t n);

// Full loop for one topic: plan, execute, score each new paper; stops on
// the paper cap, an explicit planner stop, or the action limit.
RetrievalTrace run_retrieval(const Topic& topic, provider::Gateway& gateway,
                             PaperSource& source, const RetrievalCaps& caps,
                             const LlmOptions& options);

}  // namespace ideaforge::retrieval
