#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ideaforge/provider/gateway.hpp"
#include "ideaforge/proposal/types.hpp"
#include "ideaforge/retrieval/paper_source.hpp"

namespace ideaforge::proposal {

// Marker phrases the scripted mock provider keys on.
extern const char* kNoveltyMarker;
extern const char* kFeasibilityMarker;

struct FilterVerdict {
  bool passed = true;
  // "" when passed; otherwise one of "novelty-duplicate",
  // "infeasible-resources", "inconsistent-setup".
  std::string reason;
  // Supporting detail: overlapping paper ids for novelty failures, or the
  // judge's raw reply for feasibility failures.
  std::vector<std::string> evidence;
};

struct FilterOptions {
  std::string model = "mock-chat";
  double temperature = 0.0;
  int max_tokens = 256;
  int re_asks = 3;
  uint64_t seed = 0;
  // How many related papers the novelty filter checks against.
  size_t top_n = 10;
};

// Retrieves papers related to the proposal title and asks, for each, whether
// the proposal describes essentially the same method. Any "yes" fails the
// proposal with the overlapping paper ids as evidence.
FilterVerdict novelty_filter(provider::Gateway& gateway,
                             retrieval::PaperSource& source,
                             const ProjectProposal& proposal,
                             const FilterOptions& options);

// Asks whether the experiment plan is executable as written. Replies are
// "feasible", "infeasible: resources", or "infeasible: inconsistent".
FilterVerdict feasibility_filter(provider::Gateway& gateway,
                                 const ProjectProposal& proposal,
                                 const FilterOptions& options);

// Runs both filters; novelty first, feasibility only for survivors.
FilterVerdict run_filters(provider::Gateway& gateway,
                          retrieval::PaperSource& source,
                          const ProjectProposal& proposal,
                          const FilterOptions& options);

nlohmann::json verdict_to_json(const FilterVerdict& verdict);

}  // namespace ideaforge::proposal
