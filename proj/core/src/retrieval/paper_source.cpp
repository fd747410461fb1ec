#include "ideaforge/retrieval/paper_source.hpp"

#include <algorithm>

#include "ideaforge/util/digest.hpp"
#include "ideaforge/util/text.hpp"

namespace ideaforge::retrieval {

StaticPaperSource::StaticPaperSource(
    std::vector<PaperRecord> corpus,
    std::map<std::string, std::vector<std::string>> reference_ids)
    : corpus_(std::move(corpus)), reference_ids_(std::move(reference_ids)) {}

std::vector<PaperRecord> StaticPaperSource::keyword_search(
    const std::string& query, size_t limit) {
  auto terms = util::split(util::to_lower(query), ' ');
  std::vector<std::pair<int, size_t>> scored;
  for (size_t i = 0; i < corpus_.size(); ++i) {
    std::string text =
        util::to_lower(corpus_[i].title + " " + corpus_[i].abstract_text);
    int score = 0;
    for (const auto& term : terms) {
      if (!term.empty() && text.find(term) != std::string::npos) ++score;
    }
    if (score > 0) scored.emplace_back(score, i);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<PaperRecord> out;
  for (const auto& [score, idx] : scored) {
    if (out.size() >= limit) break;
    out.push_back(corpus_[idx]);
  }
  return out;
}

std::optional<PaperRecord> StaticPaperSource::lookup(
    const std::string& paper_id) {
  for (const auto& p : corpus_) {
    if (p.paper_id == paper_id) return p;
  }
  return std::nullopt;
}

std::vector<PaperRecord> StaticPaperSource::references(
    const std::string& paper_id, size_t limit) {
  std::vector<PaperRecord> out;
  auto it = reference_ids_.find(paper_id);
  if (it == reference_ids_.end()) return out;
  for (const auto& ref : it->second) {
    if (out.size() >= limit) break;
    if (auto p = lookup(ref)) out.push_back(*p);
  }
  return out;
}

PaperRecord SyntheticPaperSource::make_paper(const std::string& stem,
                                             size_t index) {
  std::string digest = util::sha256_hex(std::to_string(seed_) + "|" + stem +
                                        "|" + std::to_string(index));
  static const char* kMethods[] = {"Iterative",  "Contrastive", "Structured",
                                   "Adaptive",   "Recursive",   "Calibrated",
                                   "Modular",    "Grounded"};
  static const char* kObjects[] = {"Decoding",   "Prompting",  "Verification",
                                   "Reasoning",  "Retrieval",  "Alignment",
                                   "Refinement", "Sampling"};
  unsigned a = static_cast<unsigned char>(digest[0]) % 8;
  unsigned b = static_cast<unsigned char>(digest[1]) % 8;
  PaperRecord p;
  p.paper_id = "syn-" + digest.substr(0, 12);
  p.title = std::string(kMethods[a]) + " " + kObjects[b] + " for " + stem +
            " (" + digest.substr(12, 4) + ")";
  p.abstract_text = "We study " + util::to_lower(kObjects[b]) +
                    " strategies for " + stem +
                    " in large language models and report controlled "
                    "experiments across standard benchmarks. Variant " +
                    digest.substr(16, 6) + ".";
  return p;
}

std::vector<PaperRecord> SyntheticPaperSource::keyword_search(
    const std::string& query, size_t limit) {
  std::vector<PaperRecord> out;
  out.reserve(limit);
  for (size_t i = 0; i < limit; ++i) {
    out.push_back(make_paper(util::to_lower(util::trim(query)), i));
  }
  return out;
}

std::optional<PaperRecord> SyntheticPaperSource::lookup(
    const std::string& paper_id) {
  if (paper_id.rfind("syn-", 0) != 0) return std::nullopt;
  return make_paper("paper " + paper_id, 0);
}

std::vector<PaperRecord> SyntheticPaperSource::references(
    const std::string& paper_id, size_t limit) {
  if (paper_id.rfind("syn-", 0) != 0) return {};
  std::vector<PaperRecord> out;
  out.reserve(limit);
  for (size_t i = 0; i < limit; ++i) {
    out.push_back(make_paper("references of " + paper_id, i));
  }
  return out;
}

}  // namespace ideaforge::retrieval
