#pragma once

#include <vector>

#include "ideaforge/errors.hpp"
#include "ideaforge/provider/types.hpp"

namespace ideaforge::provider {

// Raised for failures worth retrying (rate limits, 5xx, timeouts);
// the gateway backs off and retries these up to its attempt budget.
class TransientProviderError : public ProviderError {
 public:
  explicit TransientProviderError(const std::string& what)
      : ProviderError(what) {}
};

// A completion/embedding backend. Implementations do not cache, retry, or
// budget; the gateway layers those around any provider uniformly.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string name() const = 0;
  virtual Completion complete(const CompletionRequest& request) = 0;
  virtual std::vector<std::vector<double>> embed(
      const EmbeddingRequest& request) = 0;
};

}  // namespace ideaforge::provider
