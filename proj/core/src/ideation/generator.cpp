#include "ideaforge/ideation/generator.hpp"

#include <algorithm>

#include "ideaforge/util/rng.hpp"

namespace ideaforge::ideation {

namespace {

// Sample `n` distinct papers from the first `pool` entries, preserving
// their relative order.
std::vector<retrieval::PaperRecord> sample_papers(
    const std::vector<retrieval::PaperRecord>& papers, size_t pool, size_t n,
    util::RandomStream& rng) {
  size_t limit = std::min(pool, papers.size());
  std::vector<size_t> indices(limit);
  for (size_t i = 0; i < limit; ++i) indices[i] = i;
  rng.shuffle(indices);
  indices.resize(std::min(n, indices.size()));
  std::sort(indices.begin(), indices.end());
  std::vector<retrieval::PaperRecord> out;
  for (size_t i : indices) out.push_back(papers[i]);
  return out;
}

}  // namespace

GenerationOutcome generate_seed_ideas(
    const retrieval::Topic& topic, const GenerationConfig& config,
    const std::vector<retrieval::PaperRecord>& top_papers,
    provider::Gateway& gateway, std::uint64_t seed, size_t count) {
  GenerationOutcome outcome;
  if (config.batch_size == 0) {
    throw ConfigError("generation batch_size must be >= 1");
  }

  std::vector<std::string> prior_titles;
  size_t remaining = count;
  int batch_index = 0;

  while (remaining > 0) {
    size_t want = std::min(config.batch_size, remaining);
    util::RandomStream rng(
        util::derive_seed(seed, "seed-batch", static_cast<std::uint64_t>(batch_index)));

    bool rag = !top_papers.empty() && rng.bernoulli(config.rag_probability);
    std::vector<retrieval::PaperRecord> papers;
    if (rag) {
      papers = sample_papers(top_papers, config.rag_pool, config.rag_sample,
                             rng);
    }

    PromptBuild prompt =
        build_seed_prompt(topic, config, papers, prior_titles, want);
    outcome.truncated_any = outcome.truncated_any || prompt.truncated_titles;

    ++outcome.attempted_batches;
    if (rag) ++outcome.rag_batches;

    std::vector<SeedIdea> parsed;
    for (int attempt = 0; attempt <= config.re_asks; ++attempt) {
      provider::CompletionRequest req;
      req.model = config.model;
      req.temperature = config.temperature;
      req.max_tokens = config.max_tokens;
      req.seed = util::derive_seed(
          seed, "seed-batch-llm",
          (static_cast<std::uint64_t>(batch_index) << 8) |
              static_cast<std::uint64_t>(attempt));
      req.messages = {{"user", prompt.text}};
      parsed = parse_seed_batch(gateway.complete(req).text);
      if (!parsed.empty()) break;
    }

    if (parsed.empty()) {
      // Give up on this batch's slots so one broken prompt cannot stall
      // the whole run; the gap is visible in the outcome.
      ++outcome.failed_batches;
      outcome.skipped_ideas += want;
      remaining -= want;
      ++batch_index;
      continue;
    }

    size_t take = std::min(want, parsed.size());
    for (size_t i = 0; i < take; ++i) {
      SeedIdea idea = parsed[i];
      idea.topic_name = topic.name;
      idea.batch_index = batch_index;
      idea.rag_used = rag;
      prior_titles.push_back(idea.title);
      outcome.ideas.push_back(std::move(idea));
    }
    remaining -= take;
    ++batch_index;
  }
  return outcome;
}

}  // namespace ideaforge::ideation
