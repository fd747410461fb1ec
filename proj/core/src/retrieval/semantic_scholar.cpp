#include "ideaforge/retrieval/semantic_scholar.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ideaforge/errors.hpp"

namespace ideaforge::retrieval {

using nlohmann::json;

namespace {

std::string percent_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else if (c == ' ') {
      out += '+';
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

PaperRecord record_from(const json& row) {
  PaperRecord paper;
  paper.paper_id = row.value("paperId", "");
  paper.title = row.value("title", "");
  paper.abstract_text =
      row.contains("abstract") && row["abstract"].is_string()
          ? row["abstract"].get<std::string>()
          : "";
  return paper;
}

}  // namespace

struct SemanticScholarSource::Impl {
  ScholarConfig config;
  std::string origin;
  std::string prefix;
  httplib::Client client;

  explicit Impl(ScholarConfig cfg, std::string origin_, std::string prefix_)
      : config(std::move(cfg)),
        origin(std::move(origin_)),
        prefix(std::move(prefix_)),
        client(origin) {
    client.set_connection_timeout(config.timeout_seconds, 0);
    client.set_read_timeout(config.timeout_seconds, 0);
    if (!config.api_key.empty()) {
      client.set_default_headers({{"x-api-key", config.api_key}});
    }
  }

  json get(const std::string& path) {
    std::string last_error;
    for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(300 * (1 << attempt)));
      }
      auto result = client.Get(prefix + path);
      if (!result) {
        last_error = httplib::to_string(result.error());
        continue;
      }
      if (result->status == 429 || result->status >= 500) {
        last_error = "HTTP " + std::to_string(result->status);
        continue;
      }
      if (result->status != 200) {
        throw StageError("literature API returned HTTP " +
                         std::to_string(result->status) + " for " + path);
      }
      try {
        return json::parse(result->body);
      } catch (const json::exception& err) {
        throw StageError("literature API sent unparseable JSON for " + path +
                         ": " + err.what());
      }
    }
    throw StageError("literature API unreachable after " +
                     std::to_string(config.max_attempts) + " attempts (" +
                     last_error + ")");
  }
};

SemanticScholarSource::SemanticScholarSource(ScholarConfig config) {
  if (const char* base = std::getenv("IDEAFORGE_S2_API_BASE");
      base && *base) {
    config.api_base = base;
  }
  if (const char* key = std::getenv("IDEAFORGE_S2_API_KEY"); key && *key) {
    config.api_key = key;
  }
  std::string origin = config.api_base;
  std::string prefix;
  size_t scheme = origin.find("://");
  size_t path_at = scheme == std::string::npos
                       ? origin.find('/')
                       : origin.find('/', scheme + 3);
  if (path_at != std::string::npos) {
    prefix = origin.substr(path_at);
    origin = origin.substr(0, path_at);
  }
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  impl_ = std::make_unique<Impl>(std::move(config), origin, prefix);
}

SemanticScholarSource::~SemanticScholarSource() = default;

std::vector<PaperRecord> SemanticScholarSource::keyword_search(
    const std::string& query, size_t limit) {
  json reply = impl_->get("/paper/search?query=" + percent_encode(query) +
                          "&limit=" + std::to_string(limit) +
                          "&fields=title,abstract");
  std::vector<PaperRecord> papers;
  for (const auto& row : reply.value("data", json::array())) {
    PaperRecord paper = record_from(row);
    if (!paper.paper_id.empty()) papers.push_back(std::move(paper));
  }
  return papers;
}

std::optional<PaperRecord> SemanticScholarSource::lookup(
    const std::string& paper_id) {
  try {
    json reply = impl_->get("/paper/" + percent_encode(paper_id) +
                            "?fields=title,abstract");
    PaperRecord paper = record_from(reply);
    if (paper.paper_id.empty()) return std::nullopt;
    return paper;
  } catch (const StageError& err) {
    // A 404 means "no such paper", which is an answer, not a failure.
    if (std::string(err.what()).find("HTTP 404") != std::string::npos) {
      return std::nullopt;
    }
    throw;
  }
}

std::vector<PaperRecord> SemanticScholarSource::references(
    const std::string& paper_id, size_t limit) {
  json reply = impl_->get("/paper/" + percent_encode(paper_id) +
                          "/references?limit=" + std::to_string(limit) +
                          "&fields=title,abstract");
  std::vector<PaperRecord> papers;
  for (const auto& row : reply.value("data", json::array())) {
    if (!row.contains("citedPaper")) continue;
    PaperRecord paper = record_from(row["citedPaper"]);
    if (!paper.paper_id.empty()) papers.push_back(std::move(paper));
  }
  return papers;
}

}  // namespace ideaforge::retrieval
