#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

namespace ideaforge::dedup {

// Cosine similarity of two equal-dimension, non-zero vectors.
double cosine_similarity(const std::vector<double>& a,
                         const std::vector<double>& b);

// Scales to unit L2 norm; throws on the zero vector.
std::vector<double> l2_normalize(std::vector<double> v);

struct DedupConfig {
  double threshold = 0.8;
  // When true (the default), an incoming item is compared against every
  // earlier item whether or not that item was itself dropped; when false,
  // only surviving items are compared against.
  bool compare_all_prior = true;
};

struct DedupDecision {
  size_t index = 0;
  bool kept = true;
  // Index of the most similar earlier item when dropped.
  std::optional<size_t> duplicate_of;
  // Highest similarity against the comparison set; -1 when there was
  // nothing to compare against (the first item).
  double max_similarity = -1.0;
};

struct DedupReport {
  DedupConfig config;
  size_t total = 0;
  size_t kept_count = 0;
  std::vector<DedupDecision> decisions;  // arrival order
  std::vector<size_t> kept;              // indices of survivors, in order
};

// Streaming near-duplicate filter over embedding vectors in arrival order.
// An item is dropped iff its similarity to some comparison item is strictly
// above the threshold.
DedupReport deduplicate(const std::vector<std::vector<double>>& vectors,
                        const DedupConfig& config);

struct CurvePoint {
  size_t start = 0;  // arrival index of first item in the bucket
  size_t size = 0;
  size_t kept = 0;
  double kept_pct = 0.0;
  size_t cumulative_kept = 0;
  bool partial = false;  // final bucket smaller than the bucket size
};

// Non-duplicate percentage per arrival bucket plus the cumulative count of
// survivors, for plotting how fast generation saturates.
std::vector<CurvePoint> duplication_curve(const DedupReport& report,
                                          size_t bucket_size);

nlohmann::json report_to_json(const DedupReport& report);
nlohmann::json curve_to_json(const std::vector<CurvePoint>& curve);

}  // namespace ideaforge::dedup
