#pragma once

#include <memory>
#include <string>

#include "ideaforge/provider/provider.hpp"

namespace ideaforge::provider {

struct HttpProviderConfig {
  // Base URL of an OpenAI-style API, e.g. "https://api.example.com/v1".
  // Falls back to the IDEAFORGE_API_BASE environment variable.
  std::string api_base;
  // Falls back to IDEAFORGE_API_KEY.
  std::string api_key;
  int timeout_seconds = 120;
};

// Thin client for OpenAI-style /chat/completions and /embeddings endpoints.
// Rate limits, server errors, and transport failures surface as
// TransientProviderError so the gateway retries them; other HTTP errors are
// permanent. Construction fails with ConfigError when no base URL or key
// can be resolved.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(HttpProviderConfig config);
  ~HttpProvider() override;

  std::string name() const override;
  Completion complete(const CompletionRequest& request) override;
  std::vector<std::vector<double>> embed(
      const EmbeddingRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ideaforge::provider
