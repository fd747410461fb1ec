#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ideaforge::provider {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

struct CompletionRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 1.0;
  int max_tokens = 4096;
  // Folded into the cache key so logically distinct draws at the same
  // prompt and temperature stay distinct across runs.
  std::uint64_t seed = 0;
};

struct Usage {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
};

struct Completion {
  std::string text;
  Usage usage;
  bool from_cache = false;
  std::string cache_key;
};

struct EmbeddingRequest {
  std::string model;
  std::vector<std::string> texts;
};

struct Embeddings {
  std::vector<std::vector<double>> vectors;  // unit L2 norm
  Usage usage;
  bool from_cache = false;
  std::string cache_key;
};

// Canonical serializations: stable key order and number formatting, so the
// digest of a request is identical across runs and platforms.
std::string canonical_json(const CompletionRequest& request);
std::string canonical_json(const EmbeddingRequest& request);

// SHA-256 hex digest of the canonical serialization; the content-addressed
// identity of a request, used as its cache key.
std::string cache_key(const CompletionRequest& request);
std::string cache_key(const EmbeddingRequest& request);

}  // namespace ideaforge::provider
