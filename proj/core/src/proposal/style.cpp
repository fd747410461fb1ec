#include "ideaforge/proposal/style.hpp"

#include <cctype>

#include "ideaforge/errors.hpp"
#include "ideaforge/util/rng.hpp"
#include "ideaforge/util/text.hpp"

namespace ideaforge::proposal {

const char* kIdeaSlot = "{{IDEA}}";
const char* kTemplateSlot = "{{TEMPLATE}}";

namespace {

bool is_entity_token(const std::string& token) {
  if (token.size() < 2) return false;
  bool has_digit = false;
  bool has_upper_beyond_first = false;
  bool all_caps = true;
  for (size_t i = 0; i < token.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(token[i]);
    if (isdigit(c)) has_digit = true;
    if (isupper(c) && i > 0) has_upper_beyond_first = true;
    if (!isupper(c) && !isdigit(c)) all_caps = false;
  }
  return has_digit || has_upper_beyond_first ||
         (all_caps && token.size() >= 2);
}

std::string proposal_body(const ProjectProposal& p) {
  return p.title + "\n" + p.problem_statement + "\n" + p.motivation + "\n" +
         p.proposed_method + "\n" + p.experiment_plan + "\n" +
         p.test_case_examples + "\n" + p.fallback_plan;
}

}  // namespace

std::set<std::string> extract_entities(const std::string& text) {
  std::set<std::string> out;
  std::string token;
  auto flush = [&] {
    // Strip leading/trailing punctuation picked up with the word.
    size_t b = 0;
    size_t e = token.size();
    while (b < e && !isalnum(static_cast<unsigned char>(token[b]))) ++b;
    while (e > b && !isalnum(static_cast<unsigned char>(token[e - 1]))) --e;
    std::string word = token.substr(b, e - b);
    if (is_entity_token(word)) out.insert(word);
    token.clear();
  };
  for (char ch : text) {
    if (isspace(static_cast<unsigned char>(ch))) {
      if (!token.empty()) flush();
    } else {
      token += ch;
    }
  }
  if (!token.empty()) flush();
  return out;
}

StyleCheck preservation_check(const ProjectProposal& original,
                              const ProjectProposal& normalized,
                              const StyleOptions& options) {
  StyleCheck check;
  std::set<std::string> before = extract_entities(proposal_body(original));
  std::set<std::string> after = extract_entities(proposal_body(normalized));
  for (const auto& token : before) {
    if (!after.count(token)) check.entities_removed.push_back(token);
  }
  for (const auto& token : after) {
    if (!before.count(token)) check.entities_added.push_back(token);
  }

  size_t before_words = proposal_word_count(original);
  size_t after_words = proposal_word_count(normalized);
  check.length_ratio =
      before_words == 0
          ? 1.0
          : static_cast<double>(after_words) /
                static_cast<double>(before_words);
  check.length_flagged = check.length_ratio < options.min_length_ratio ||
                         check.length_ratio > options.max_length_ratio;
  check.flagged = check.length_flagged || !check.entities_removed.empty() ||
                  !check.entities_added.empty();
  return check;
}

StyleResult style_normalize(provider::Gateway& gateway,
                            const ProjectProposal& proposal,
                            const std::string& prompt_asset,
                            const std::string& template_text,
                            const StyleOptions& options) {
  if (prompt_asset.find(kIdeaSlot) == std::string::npos) {
    throw ConfigError(std::string("style prompt asset is missing the ") +
                      kIdeaSlot + " slot");
  }
  if (prompt_asset.find(kTemplateSlot) == std::string::npos) {
    throw ConfigError(std::string("style prompt asset is missing the ") +
                      kTemplateSlot + " slot");
  }
  std::string prompt = prompt_asset;
  prompt = util::replace_all(prompt, kIdeaSlot, format_proposal(proposal));
  prompt = util::replace_all(prompt, kTemplateSlot, template_text);

  provider::CompletionRequest req;
  req.model = options.model;
  req.temperature = options.temperature;
  req.max_tokens = options.max_tokens;
  req.messages = {{"user", prompt}};

  std::string last_error;
  for (int attempt = 0; attempt <= options.re_asks; ++attempt) {
    req.seed = util::derive_seed(options.seed, "style",
                                 static_cast<uint64_t>(attempt));
    provider::Completion completion = gateway.complete(req);
    try {
      StyleResult result;
      result.normalized = parse_proposal(completion.text);
      result.normalized.provenance = proposal.provenance;
      result.normalized.topic_name = proposal.topic_name;
      result.normalized.source_idea_title = proposal.source_idea_title;
      result.check = preservation_check(proposal, result.normalized, options);
      return result;
    } catch (const ParseError& err) {
      last_error = err.what();
    }
  }
  throw ParseError("style normalization failed for '" + proposal.title +
                       "' after " + std::to_string(options.re_asks + 1) +
                       " attempts: " + last_error,
                   "style");
}

}  // namespace ideaforge::proposal
