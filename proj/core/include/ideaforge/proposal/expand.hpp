#pragma once

#include <cstdint>
#include <string>

#include "ideaforge/ideation/types.hpp"
#include "ideaforge/provider/gateway.hpp"
#include "ideaforge/proposal/types.hpp"

namespace ideaforge::proposal {

// Marker sentence included in every expansion prompt; the scripted mock
// provider keys on it to produce a well-formed proposal.
extern const char* kExpandMarker;

struct ExpandOptions {
  std::string model = "mock-chat";
  double temperature = 0.7;
  int max_tokens = 4096;
  int re_asks = 3;
  uint64_t seed = 0;
};

// Builds the expansion prompt: instructions, the section template, one
// fully worked demonstration proposal, and the seed idea to expand.
std::string build_expand_prompt(const ideation::SeedIdea& idea,
                                const std::string& template_text,
                                const std::string& demo_proposal);

// Expands one seed idea into a full project proposal. Re-asks with a fresh
// derived seed on parse failure; throws ParseError after the final attempt.
ProjectProposal expand_idea(provider::Gateway& gateway,
                            const ideation::SeedIdea& idea,
                            const std::string& template_text,
                            const std::string& demo_proposal,
                            const ExpandOptions& options);

}  // namespace ideaforge::proposal
