#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ideaforge/retrieval/types.hpp"

namespace ideaforge::retrieval {

// A scholarly search backend. Results come back most-relevant-first.
class PaperSource {
 public:
  virtual ~PaperSource() = default;
  virtual std::vector<PaperRecord> keyword_search(const std::string& query,
                                                  size_t limit) = 0;
  virtual std::optional<PaperRecord> lookup(const std::string& paper_id) = 0;
  virtual std::vector<PaperRecord> references(const std::string& paper_id,
                                              size_t limit) = 0;
};

// Fixed in-memory corpus; keyword search ranks by naive term overlap.
// Used by tests and tiny offline runs.
class StaticPaperSource : public PaperSource {
 public:
  explicit StaticPaperSource(std::vector<PaperRecord> corpus,
                             std::map<std::string, std::vector<std::string>>
                                 reference_ids = {});

  std::vector<PaperRecord> keyword_search(const std::string& query,
                                          size_t limit) override;
  std::optional<PaperRecord> lookup(const std::string& paper_id) override;
  std::vector<PaperRecord> references(const std::string& paper_id,
                                      size_t limit) override;

 private:
  std::vector<PaperRecord> corpus_;
  std::map<std::string, std::vector<std::string>> reference_ids_;
};

// Deterministic synthetic literature: every query yields plausible-looking
// distinct papers derived by hashing, so offline runs exercise the full
// retrieval loop with stable results. The same (seed, query) always
// produces the same papers.
class SyntheticPaperSource : public PaperSource {
 public:
  explicit SyntheticPaperSource(std::uint64_t seed) : seed_(seed) {}

  std::vector<PaperRecord> keyword_search(const std::string& query,
                                          size_t limit) override;
  std::optional<PaperRecord> lookup(const std::string& paper_id) override;
  std::vector<PaperRecord> references(const std::string& paper_id,
                                      size_t limit) override;

 private:
  PaperRecord make_paper(const std::string& stem, size_t index);
  std::uint64_t seed_;
};

}  // namespace ideaforge::retrieval
