#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace ideaforge::provider {

// Content-addressed response store: one JSON file per request digest under
// cache_dir/<model>/<digest>.json, plus an append-only index. Entries carry
// a checksum over the payload; a mismatch on read raises
// CacheCorruptionError instead of replaying corrupt bytes.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path root);

  std::optional<nlohmann::json> load(const std::string& model,
                                     const std::string& key) const;

  void store(const std::string& model, const std::string& key,
             const std::string& kind, const nlohmann::json& payload);

  std::filesystem::path entry_path(const std::string& model,
                                   const std::string& key) const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  mutable std::mutex index_mutex_;
};

// Directory-safe form of a model identifier ("org/model" -> "org_model").
std::string sanitize_model_id(const std::string& model);

}  // namespace ideaforge::provider
