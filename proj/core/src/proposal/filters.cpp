#include "ideaforge/proposal/filters.hpp"

#include "ideaforge/errors.hpp"
#include "ideaforge/util/rng.hpp"
#include "ideaforge/util/text.hpp"

namespace ideaforge::proposal {

const char* kNoveltyMarker =
    "essentially the same method as the proposal";
const char* kFeasibilityMarker =
    "Reply with exactly one of: feasible, infeasible: resources, "
    "infeasible: inconsistent.";

namespace {

// Asks one yes/no question with re-asks; returns true for yes.
bool ask_yes_no(provider::Gateway& gateway, const std::string& prompt,
                const FilterOptions& options, const char* label,
                uint64_t salt) {
  provider::CompletionRequest req;
  req.model = options.model;
  req.temperature = options.temperature;
  req.max_tokens = options.max_tokens;
  req.messages = {{"user", prompt}};
  for (int attempt = 0; attempt <= options.re_asks; ++attempt) {
    req.seed = util::derive_seed(options.seed, label,
                                 (salt << 8) | static_cast<uint64_t>(attempt));
    provider::Completion completion = gateway.complete(req);
    std::string reply = util::to_lower(util::trim(completion.text));
    if (util::starts_with_icase(reply, "yes")) return true;
    if (util::starts_with_icase(reply, "no")) return false;
  }
  throw ParseError(std::string("judge gave no yes/no answer for ") + label,
                   label);
}

}  // namespace

FilterVerdict novelty_filter(provider::Gateway& gateway,
                             retrieval::PaperSource& source,
                             const ProjectProposal& proposal,
                             const FilterOptions& options) {
  FilterVerdict verdict;
  std::vector<retrieval::PaperRecord> papers =
      source.keyword_search(proposal.title, options.top_n);
  if (papers.size() > options.top_n) papers.resize(options.top_n);

  for (size_t i = 0; i < papers.size(); ++i) {
    std::string prompt;
    prompt += "Proposal title: " + proposal.title + "\n";
    prompt += "Proposal method: " + proposal.proposed_method + "\n\n";
    prompt += "Existing paper: " + papers[i].title + "\n";
    prompt += "Abstract: " + papers[i].abstract_text + "\n\n";
    prompt += "Does the existing paper describe ";
    prompt += kNoveltyMarker;
    prompt += "? Answer yes or no.\n";
    if (ask_yes_no(gateway, prompt, options, "novelty-check", i)) {
      verdict.evidence.push_back(papers[i].paper_id);
    }
  }
  if (!verdict.evidence.empty()) {
    verdict.passed = false;
    verdict.reason = "novelty-duplicate";
  }
  return verdict;
}

FilterVerdict feasibility_filter(provider::Gateway& gateway,
                                 const ProjectProposal& proposal,
                                 const FilterOptions& options) {
  std::string prompt;
  prompt +=
      "Judge whether a typical research team could execute this experiment "
      "plan as written, with reasonable compute and API access.\n\n";
  prompt += "Proposal title: " + proposal.title + "\n";
  prompt += "Proposed method: " + proposal.proposed_method + "\n";
  prompt += "Experiment plan: " + proposal.experiment_plan + "\n\n";
  prompt += kFeasibilityMarker;
  prompt += "\n";

  provider::CompletionRequest req;
  req.model = options.model;
  req.temperature = options.temperature;
  req.max_tokens = options.max_tokens;
  req.messages = {{"user", prompt}};

  FilterVerdict verdict;
  for (int attempt = 0; attempt <= options.re_asks; ++attempt) {
    req.seed = util::derive_seed(options.seed, "feasibility",
                                 static_cast<uint64_t>(attempt));
    provider::Completion completion = gateway.complete(req);
    std::string reply = util::to_lower(util::trim(completion.text));
    if (util::starts_with_icase(reply, "feasible")) {
      return verdict;
    }
    if (util::starts_with_icase(reply, "infeasible")) {
      verdict.passed = false;
      verdict.evidence.push_back(util::trim(completion.text));
      if (util::contains_icase(reply, "inconsistent")) {
        verdict.reason = "inconsistent-setup";
      } else {
        verdict.reason = "infeasible-resources";
      }
      return verdict;
    }
  }
  throw ParseError("feasibility judge gave no usable verdict after " +
                       std::to_string(options.re_asks + 1) + " attempts",
                   "feasibility");
}

FilterVerdict run_filters(provider::Gateway& gateway,
                          retrieval::PaperSource& source,
                          const ProjectProposal& proposal,
                          const FilterOptions& options) {
  FilterVerdict verdict = novelty_filter(gateway, source, proposal, options);
  if (!verdict.passed) return verdict;
  return feasibility_filter(gateway, proposal, options);
}

nlohmann::json verdict_to_json(const FilterVerdict& verdict) {
  return nlohmann::json{{"passed", verdict.passed},
                        {"reason", verdict.reason},
                        {"evidence", verdict.evidence}};
}

}  // namespace ideaforge::proposal
