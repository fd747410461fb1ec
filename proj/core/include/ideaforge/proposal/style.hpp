#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ideaforge/provider/gateway.hpp"
#include "ideaforge/proposal/types.hpp"

namespace ideaforge::proposal {

// Slot placeholders the editing prompt asset must contain.
extern const char* kIdeaSlot;      // {{IDEA}}
extern const char* kTemplateSlot;  // {{TEMPLATE}}

struct StyleOptions {
  std::string model = "mock-chat";
  double temperature = 0.0;
  int max_tokens = 4096;
  int re_asks = 3;
  uint64_t seed = 0;
  double min_length_ratio = 0.7;
  double max_length_ratio = 1.4;
};

struct StyleCheck {
  // Distinctive tokens (names, models, numbers) present only on one side.
  std::vector<std::string> entities_removed;
  std::vector<std::string> entities_added;
  double length_ratio = 1.0;
  bool length_flagged = false;
  bool flagged = false;
};

struct StyleResult {
  ProjectProposal normalized;
  StyleCheck check;
};

// Tokens that carry content identity: contain a digit, are all-caps, or have
// an uppercase letter beyond the first character (CamelCase, model names).
std::set<std::string> extract_entities(const std::string& text);

// Compares original and rewritten text for dropped or invented entities and
// for a word-count ratio outside the configured band.
StyleCheck preservation_check(const ProjectProposal& original,
                              const ProjectProposal& normalized,
                              const StyleOptions& options);

// Fills the {{IDEA}} and {{TEMPLATE}} slots of the editing prompt, asks the
// model to rewrite the proposal in the house style, parses the reply, and
// attaches the preservation check. Throws ConfigError if a slot is missing
// and ParseError if no attempt yields a parseable proposal.
StyleResult style_normalize(provider::Gateway& gateway,
                            const ProjectProposal& proposal,
                            const std::string& prompt_asset,
                            const std::string& template_text,
                            const StyleOptions& options);

}  // namespace ideaforge::proposal
