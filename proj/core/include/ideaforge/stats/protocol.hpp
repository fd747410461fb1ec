#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ideaforge/stats/reviews.hpp"
#include "ideaforge/stats/tests.hpp"

namespace ideaforge::stats {

struct ComparisonRow {
  Condition condition = Condition::Ai;
  DescriptiveStats stats;  // of the comparison units (reviews/ideas/diffs)
  double mean_diff = 0.0;  // condition minus baseline (test 3: mean of diffs)
  double t = 0.0;
  double df = 0.0;
  double raw_p = 1.0;
  double adj_p = 1.0;
  std::string stars;
  bool degenerate = false;
};

// One significance table: a metric, the baseline condition's descriptives,
// and a Welch (or one-sample, for the per-reviewer variant) comparison row
// per non-baseline condition. Raw p-values are Bonferroni-adjusted by
// `family_size`, which defaults to the number of metrics reported so the
// correction spans the whole metric family of a condition comparison.
struct TestReport {
  std::string unit;  // "review" | "idea" | "reviewer"
  Metric metric = Metric::Overall;
  Condition baseline = Condition::Human;
  DescriptiveStats baseline_stats;
  size_t family_size = kMetricCount;
  std::vector<ComparisonRow> rows;
};

// Treats every review as an independent sample.
TestReport test_per_review(const ReviewSet& reviews, Metric metric,
                           size_t family_size = kMetricCount);

// Averages reviews of the same idea first, then compares idea means.
TestReport test_per_idea(const ReviewSet& reviews, Metric metric,
                         size_t family_size = kMetricCount);

// For each reviewer covering the baseline and a given condition, takes the
// difference of their per-condition mean scores, then runs a two-tailed
// one-sample t-test of the differences against zero.
TestReport test_per_reviewer(const ReviewSet& reviews, Metric metric,
                             size_t family_size = kMetricCount);

struct CorrelationMatrix {
  std::vector<Metric> metrics;
  // matrix[i][j] = Pearson r between metrics i and j across reviews.
  std::vector<std::vector<double>> values;
  std::vector<std::vector<bool>> defined;
};

CorrelationMatrix pearson_matrix(const ReviewSet& reviews);

struct AgreementResult {
  double balanced_accuracy = 0.5;
  size_t repetitions = 0;
  size_t ideas_used = 0;     // ideas with at least two reviews
  size_t selected_per_side = 0;  // k
  bool degenerate = false;
};

// Split-half reviewer consistency: per repetition, reviews of each idea are
// randomly split into two halves; the top/bottom `fraction` of ideas by the
// first half's mean must be recovered from the second half's means
// (threshold = median over the selected set, ties classified bottom).
// Returns balanced accuracy averaged over repetitions.
AgreementResult split_half_agreement(const ReviewSet& reviews, Metric metric,
                                     size_t repetitions, double fraction,
                                     std::uint64_t seed);

// Same protocol with an external judge: ground truth is the top/bottom
// `fraction` of ideas by consensus (mean review) score; the judge's scores
// classify the selected ideas against their own median. A constant judge
// is degenerate and scores 0.5.
AgreementResult judge_benchmark(const std::map<std::string, double>& consensus,
                                const std::map<std::string, double>& judge,
                                double fraction);

// Mean consensus score per idea over all its reviews.
std::map<std::string, double> idea_consensus(const ReviewSet& reviews,
                                             Metric metric);

struct BreakdownCell {
  DescriptiveStats stats;
  bool present = false;
};

struct TopicBreakdown {
  Metric metric = Metric::Overall;
  std::vector<std::string> topics;          // sorted
  std::vector<Condition> conditions;        // present in the data
  // cells[topic index][condition index]
  std::vector<std::vector<BreakdownCell>> cells;
};

TopicBreakdown topic_breakdown(const ReviewSet& reviews, Metric metric);

}  // namespace ideaforge::stats
