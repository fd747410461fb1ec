#include "ideaforge/proposal/expand.hpp"

#include "ideaforge/errors.hpp"
#include "ideaforge/ideation/types.hpp"
#include "ideaforge/util/rng.hpp"

namespace ideaforge::proposal {

const char* kExpandMarker = "Idea to expand:";

std::string build_expand_prompt(const ideation::SeedIdea& idea,
                                const std::string& template_text,
                                const std::string& demo_proposal) {
  std::string prompt;
  prompt +=
      "You are writing a detailed research project proposal from a short "
      "seed idea. Follow the section template exactly: produce all seven "
      "numbered sections in order, each starting on its own line with the "
      "numbered heading. Be specific about prompts, datasets, models, "
      "metrics, and baselines. Do not add sections.\n\n";
  prompt += "Section template:\n\n";
  prompt += template_text;
  prompt += "\n\nExample proposal:\n\n";
  prompt += demo_proposal;
  prompt += "\n\n";
  prompt += kExpandMarker;
  prompt += "\n\n";
  prompt += ideation::format_seed_idea(idea);
  prompt +=
      "\nWrite the full proposal now, using the numbered section headings "
      "from the template.\n";
  return prompt;
}

ProjectProposal expand_idea(provider::Gateway& gateway,
                            const ideation::SeedIdea& idea,
                            const std::string& template_text,
                            const std::string& demo_proposal,
                            const ExpandOptions& options) {
  provider::CompletionRequest req;
  req.model = options.model;
  req.temperature = options.temperature;
  req.max_tokens = options.max_tokens;
  req.messages = {
      {"user", build_expand_prompt(idea, template_text, demo_proposal)}};

  std::string last_error;
  for (int attempt = 0; attempt <= options.re_asks; ++attempt) {
    req.seed = util::derive_seed(options.seed, "expand",
                                 static_cast<uint64_t>(attempt));
    provider::Completion completion = gateway.complete(req);
    try {
      ProjectProposal proposal = parse_proposal(completion.text);
      proposal.provenance = "ai";
      proposal.topic_name = idea.topic_name;
      proposal.source_idea_title = idea.title;
      return proposal;
    } catch (const ParseError& err) {
      last_error = err.what();
    }
  }
  throw ParseError("expansion failed for idea '" + idea.title +
                       "' after " + std::to_string(options.re_asks + 1) +
                       " attempts: " + last_error,
                   "proposal");
}

}  // namespace ideaforge::proposal
