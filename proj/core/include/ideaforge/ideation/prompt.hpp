#pragma once

#include <string_view>

#include "ideaforge/ideation/types.hpp"
#include "ideaforge/retrieval/types.hpp"

namespace ideaforge::ideation {

inline constexpr std::string_view kSeedBatchMarker =
    "distinct seed ideas for research on";

struct PromptBuild {
  std::string text;
  size_t included_titles = 0;
  // Set when older prior titles had to be dropped to fit the budget.
  bool truncated_titles = false;
};

// Assembles one generation prompt: instructions for `batch_size` fielded
// ideas, the demonstration ideas, an optional block of retrieved papers,
// and the titles of ideas generated so far (to steer away from repeats).
// Prior titles are given oldest first; when the whole prompt would exceed
// the token budget, oldest titles are dropped first.
PromptBuild build_seed_prompt(const retrieval::Topic& topic,
                              const GenerationConfig& config,
                              const std::vector<retrieval::PaperRecord>& papers,
                              const std::vector<std::string>& prior_titles,
                              size_t batch_size);

}  // namespace ideaforge::ideation
