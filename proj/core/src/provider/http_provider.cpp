#include "ideaforge/provider/http_provider.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ideaforge/errors.hpp"

namespace ideaforge::provider {

using nlohmann::json;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value && *value ? value : fallback;
}

// Splits "https://host:port/v1" into client target and path prefix.
void split_base(const std::string& base, std::string& origin,
                std::string& prefix) {
  size_t scheme = base.find("://");
  size_t path_at = scheme == std::string::npos
                       ? base.find('/')
                       : base.find('/', scheme + 3);
  if (path_at == std::string::npos) {
    origin = base;
    prefix.clear();
  } else {
    origin = base.substr(0, path_at);
    prefix = base.substr(path_at);
  }
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
}

bool transient_status(int status) {
  return status == 408 || status == 429 || status >= 500;
}

}  // namespace

struct HttpProvider::Impl {
  HttpProviderConfig config;
  std::string origin;
  std::string prefix;
  httplib::Client client;

  explicit Impl(HttpProviderConfig cfg, std::string origin_,
                std::string prefix_)
      : config(std::move(cfg)),
        origin(std::move(origin_)),
        prefix(std::move(prefix_)),
        client(origin) {
    client.set_connection_timeout(config.timeout_seconds, 0);
    client.set_read_timeout(config.timeout_seconds, 0);
    client.set_write_timeout(config.timeout_seconds, 0);
    client.set_default_headers(
        {{"Authorization", "Bearer " + config.api_key}});
  }

  json post(const std::string& path, const json& body) {
    auto result = client.Post(prefix + path, body.dump(), "application/json");
    if (!result) {
      throw TransientProviderError(
          "request to " + path + " failed: " +
          httplib::to_string(result.error()));
    }
    if (result->status != 200) {
      std::string detail = result->body.substr(0, 200);
      std::string message = "HTTP " + std::to_string(result->status) +
                            " from " + path + ": " + detail;
      if (transient_status(result->status)) {
        throw TransientProviderError(message);
      }
      throw ProviderError(message);
    }
    try {
      return json::parse(result->body);
    } catch (const json::exception& err) {
      throw ProviderError("unparseable response from " + path + ": " +
                          err.what());
    }
  }
};

HttpProvider::HttpProvider(HttpProviderConfig config) {
  config.api_base = env_or("IDEAFORGE_API_BASE", config.api_base);
  config.api_key = env_or("IDEAFORGE_API_KEY", config.api_key);
  if (config.api_base.empty()) {
    throw ConfigError(
        "no API base URL: set IDEAFORGE_API_BASE or pass api_base");
  }
  if (config.api_key.empty()) {
    throw ConfigError("no API key: set IDEAFORGE_API_KEY or pass api_key");
  }
  std::string origin;
  std::string prefix;
  split_base(config.api_base, origin, prefix);
  impl_ = std::make_unique<Impl>(std::move(config), origin, prefix);
}

HttpProvider::~HttpProvider() = default;

std::string HttpProvider::name() const { return "http:" + impl_->origin; }

Completion HttpProvider::complete(const CompletionRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  json body = {{"model", request.model},
               {"messages", messages},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens},
               {"seed", request.seed}};
  json reply = impl_->post("/chat/completions", body);

  Completion completion;
  try {
    completion.text =
        reply.at("choices").at(0).at("message").at("content")
            .get<std::string>();
    if (reply.contains("usage")) {
      completion.usage.prompt_tokens =
          reply["usage"].value("prompt_tokens", 0);
      completion.usage.completion_tokens =
          reply["usage"].value("completion_tokens", 0);
    }
  } catch (const json::exception& err) {
    throw ProviderError(std::string("malformed completion response: ") +
                        err.what());
  }
  return completion;
}

std::vector<std::vector<double>> HttpProvider::embed(
    const EmbeddingRequest& request) {
  json body = {{"model", request.model}, {"input", request.texts}};
  json reply = impl_->post("/embeddings", body);

  std::vector<std::vector<double>> vectors;
  try {
    for (const auto& row : reply.at("data")) {
      vectors.push_back(row.at("embedding").get<std::vector<double>>());
    }
  } catch (const json::exception& err) {
    throw ProviderError(std::string("malformed embedding response: ") +
                        err.what());
  }
  return vectors;
}

}  // namespace ideaforge::provider
