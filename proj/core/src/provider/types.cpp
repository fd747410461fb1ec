#include "ideaforge/provider/types.hpp"

#include <nlohmann/json.hpp>

#include "ideaforge/util/digest.hpp"

namespace ideaforge::provider {

using nlohmann::json;

std::string canonical_json(const CompletionRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back(json{{"content", m.content}, {"role", m.role}});
  }
  // nlohmann objects keep keys sorted, so dump() is already canonical.
  json doc{{"kind", "completion"},
           {"max_tokens", request.max_tokens},
           {"messages", messages},
           {"model", request.model},
           {"seed", request.seed},
           {"temperature", request.temperature}};
  return doc.dump();
}

std::string canonical_json(const EmbeddingRequest& request) {
  json doc{{"kind", "embedding"},
           {"model", request.model},
           {"texts", request.texts}};
  return doc.dump();
}

std::string cache_key(const CompletionRequest& request) {
  return util::sha256_hex(canonical_json(request));
}

std::string cache_key(const EmbeddingRequest& request) {
  return util::sha256_hex(canonical_json(request));
}

}  // namespace ideaforge::provider
