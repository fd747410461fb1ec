#pragma once

#include <cstdint>

#include "ideaforge/ideation/prompt.hpp"
#include "ideaforge/provider/gateway.hpp"

namespace ideaforge::ideation {

struct GenerationOutcome {
  std::vector<SeedIdea> ideas;
  size_t attempted_batches = 0;
  // Batches whose replies never parsed; their idea slots are given up and
  // reported here rather than silently shrinking the target.
  size_t failed_batches = 0;
  size_t skipped_ideas = 0;
  size_t rag_batches = 0;
  bool truncated_any = false;
};

// Overgenerates `count` seed ideas for one topic in batches. Each batch
// prompt carries the demos, a coin-sampled block of retrieved papers
// (probability rag_probability, `rag_sample` drawn from the top
// `rag_pool`), and all prior titles. Batches that stay unparseable after
// re-asks are skipped and flagged.
GenerationOutcome generate_seed_ideas(
    const retrieval::Topic& topic, const GenerationConfig& config,
    const std::vector<retrieval::PaperRecord>& top_papers,
    provider::Gateway& gateway, std::uint64_t seed, size_t count);

}  // namespace ideaforge::ideation
