#include "ideaforge/provider/cache.hpp"

#include <fstream>

#include "ideaforge/errors.hpp"
#include "ideaforge/util/digest.hpp"
#include "ideaforge/util/io.hpp"

namespace ideaforge::provider {

using nlohmann::json;
namespace fs = std::filesystem;

std::string sanitize_model_id(const std::string& model) {
  std::string out;
  out.reserve(model.size());
  for (char c : model) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

ResponseCache::ResponseCache(fs::path root) : root_(std::move(root)) {
  fs::create_directories(root_);
}

fs::path ResponseCache::entry_path(const std::string& model,
                                   const std::string& key) const {
  return root_ / sanitize_model_id(model) / (key + ".json");
}

std::optional<json> ResponseCache::load(const std::string& model,
                                        const std::string& key) const {
  fs::path path = entry_path(model, key);
  if (!fs::exists(path)) return std::nullopt;
  json doc = json::parse(util::read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.contains("payload") ||
      !doc.contains("checksum")) {
    throw CacheCorruptionError("cache entry unreadable: " + path.string());
  }
  std::string expected = doc["checksum"].get<std::string>();
  std::string actual = util::sha256_hex(doc["payload"].dump());
  if (expected != actual) {
    throw CacheCorruptionError("cache entry checksum mismatch: " +
                               path.string());
  }
  return doc["payload"];
}

void ResponseCache::store(const std::string& model, const std::string& key,
                          const std::string& kind, const json& payload) {
  fs::path path = entry_path(model, key);
  json doc{{"key", key},
           {"model", model},
           {"kind", kind},
           {"payload", payload},
           {"checksum", util::sha256_hex(payload.dump())}};
  util::write_file_atomic(path, doc.dump(2) + "\n");

  std::lock_guard<std::mutex> lock(index_mutex_);
  std::ofstream index(root_ / "index.jsonl", std::ios::app);
  index << json{{"model", model}, {"key", key}, {"kind", kind}}.dump() << "\n";
}

}  // namespace ideaforge::provider
