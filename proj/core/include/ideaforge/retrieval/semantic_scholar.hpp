#pragma once

#include <memory>
#include <string>

#include "ideaforge/retrieval/paper_source.hpp"

namespace ideaforge::retrieval {

struct ScholarConfig {
  // Defaults to the public Semantic Scholar graph API; override with
  // IDEAFORGE_S2_API_BASE for a proxy or mirror.
  std::string api_base = "https://api.semanticscholar.org/graph/v1";
  // Optional; falls back to IDEAFORGE_S2_API_KEY.
  std::string api_key;
  int timeout_seconds = 60;
  int max_attempts = 3;
};

// Live literature source backed by the Semantic Scholar graph API.
// Transient HTTP failures are retried a few times internally; persistent
// failures surface as StageError.
class SemanticScholarSource : public PaperSource {
 public:
  explicit SemanticScholarSource(ScholarConfig config = {});
  ~SemanticScholarSource() override;

  std::vector<PaperRecord> keyword_search(const std::string& query,
                                          size_t limit) override;
  std::optional<PaperRecord> lookup(const std::string& paper_id) override;
  std::vector<PaperRecord> references(const std::string& paper_id,
                                      size_t limit) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ideaforge::retrieval
