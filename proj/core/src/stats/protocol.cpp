#include "ideaforge/stats/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ideaforge/errors.hpp"
#include "ideaforge/util/rng.hpp"

namespace ideaforge::stats {

namespace {

ComparisonRow make_row(Condition c, const std::vector<double>& sample,
                       const TResult& res, double mean_diff,
                       size_t family_size) {
  ComparisonRow row;
  row.condition = c;
  row.stats = describe(sample);
  row.mean_diff = mean_diff;
  row.t = res.t;
  row.df = res.df;
  row.raw_p = res.p;
  row.adj_p = bonferroni(res.p, family_size);
  row.stars = significance_stars(row.adj_p);
  row.degenerate = res.degenerate;
  return row;
}

// Per-idea mean of a metric within one condition, keyed by idea id.
std::map<std::string, std::vector<double>> scores_by_idea(
    const ReviewSet& reviews, Condition c, Metric m) {
  std::map<std::string, std::vector<double>> by_idea;
  for (const auto& r : reviews.records) {
    if (r.condition == c) {
      by_idea[r.idea_id].push_back(metric_value(r, m));
    }
  }
  return by_idea;
}

std::map<std::string, std::vector<double>> scores_by_reviewer(
    const ReviewSet& reviews, Condition c, Metric m) {
  std::map<std::string, std::vector<double>> by_reviewer;
  for (const auto& r : reviews.records) {
    if (r.condition == c) {
      by_reviewer[r.reviewer_id].push_back(metric_value(r, m));
    }
  }
  return by_reviewer;
}

}  // namespace

TestReport test_per_review(const ReviewSet& reviews, Metric metric,
                           size_t family_size) {
  TestReport report;
  report.unit = "review";
  report.metric = metric;
  report.family_size = family_size;
  std::vector<double> baseline =
      reviews.metric_values(Condition::Human, metric);
  if (baseline.size() < 2) {
    throw Error("per-review test needs at least 2 baseline reviews");
  }
  report.baseline_stats = describe(baseline);
  for (Condition c : {Condition::Ai, Condition::AiRerank}) {
    std::vector<double> sample = reviews.metric_values(c, metric);
    if (sample.size() < 2) continue;
    TResult res = welch_t(sample, baseline);
    report.rows.push_back(make_row(c, sample, res,
                                   sample_mean(sample) - sample_mean(baseline),
                                   family_size));
  }
  return report;
}

TestReport test_per_idea(const ReviewSet& reviews, Metric metric,
                         size_t family_size) {
  TestReport report;
  report.unit = "idea";
  report.metric = metric;
  report.family_size = family_size;

  auto idea_means = [&](Condition c) {
    std::vector<double> means;
    for (const auto& [idea, values] : scores_by_idea(reviews, c, metric)) {
      means.push_back(sample_mean(values));
    }
    return means;
  };

  std::vector<double> baseline = idea_means(Condition::Human);
  if (baseline.size() < 2) {
    throw Error("per-idea test needs at least 2 baseline ideas");
  }
  report.baseline_stats = describe(baseline);
  for (Condition c : {Condition::Ai, Condition::AiRerank}) {
    std::vector<double> sample = idea_means(c);
    if (sample.size() < 2) continue;
    TResult res = welch_t(sample, baseline);
    report.rows.push_back(make_row(c, sample, res,
                                   sample_mean(sample) - sample_mean(baseline),
                                   family_size));
  }
  return report;
}

TestReport test_per_reviewer(const ReviewSet& reviews, Metric metric,
                             size_t family_size) {
  TestReport report;
  report.unit = "reviewer";
  report.metric = metric;
  report.family_size = family_size;

  auto baseline = scores_by_reviewer(reviews, Condition::Human, metric);
  if (baseline.empty()) {
    throw Error("per-reviewer test needs baseline reviews");
  }
  {
    std::vector<double> all;
    for (const auto& [rev, values] : baseline) {
      all.push_back(sample_mean(values));
    }
    report.baseline_stats = describe(all);
  }

  for (Condition c : {Condition::Ai, Condition::AiRerank}) {
    auto their = scores_by_reviewer(reviews, c, metric);
    std::vector<double> diffs;
    for (const auto& [reviewer, values] : their) {
      auto base_it = baseline.find(reviewer);
      if (base_it == baseline.end()) continue;
      diffs.push_back(sample_mean(values) - sample_mean(base_it->second));
    }
    if (diffs.size() < 2) continue;
    TResult res = one_sample_t(diffs, 0.0);
    report.rows.push_back(
        make_row(c, diffs, res, sample_mean(diffs), family_size));
  }
  return report;
}

CorrelationMatrix pearson_matrix(const ReviewSet& reviews) {
  CorrelationMatrix m;
  m.metrics.assign(std::begin(kMetrics), std::end(kMetrics));
  size_t k = m.metrics.size();
  std::vector<std::vector<double>> columns(k);
  for (const auto& r : reviews.records) {
    for (size_t i = 0; i < k; ++i) {
      columns[i].push_back(metric_value(r, m.metrics[i]));
    }
  }
  m.values.assign(k, std::vector<double>(k, 1.0));
  m.defined.assign(k, std::vector<bool>(k, true));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      PearsonResult r = pearson(columns[i], columns[j]);
      m.values[i][j] = m.values[j][i] = r.r;
      m.defined[i][j] = m.defined[j][i] = r.defined;
    }
  }
  return m;
}

namespace {

struct SelectedIdea {
  std::string id;
  double selector = 0.0;   // score used to pick top/bottom sets
  double classifier = 0.0; // score used to re-classify
  bool truly_top = false;
};

// Shared tail of both agreement protocols: given selector/classifier scores,
// pick top-k and bottom-k by selector, re-classify by classifier against the
// median over the selected set (ties go bottom), return balanced accuracy.
AgreementResult classify_selected(std::vector<SelectedIdea> ideas,
                                  double fraction) {
  AgreementResult out;
  out.ideas_used = ideas.size();
  if (ideas.size() < 2) {
    out.degenerate = true;
    return out;
  }
  size_t k = std::max<size_t>(
      1, static_cast<size_t>(fraction * static_cast<double>(ideas.size())));
  k = std::min(k, ideas.size() / 2);
  out.selected_per_side = k;

  std::sort(ideas.begin(), ideas.end(), [](const auto& a, const auto& b) {
    if (a.selector != b.selector) return a.selector > b.selector;
    return a.id < b.id;
  });
  std::vector<SelectedIdea> selected;
  for (size_t i = 0; i < k; ++i) {
    ideas[i].truly_top = true;
    selected.push_back(ideas[i]);
  }
  for (size_t i = ideas.size() - k; i < ideas.size(); ++i) {
    ideas[i].truly_top = false;
    selected.push_back(ideas[i]);
  }

  std::vector<double> classifier_scores;
  for (const auto& s : selected) classifier_scores.push_back(s.classifier);
  bool all_equal = std::all_of(
      classifier_scores.begin(), classifier_scores.end(),
      [&](double v) { return v == classifier_scores.front(); });
  if (all_equal) {
    out.degenerate = true;
    out.balanced_accuracy = 0.5;
    return out;
  }
  double threshold = sample_median(classifier_scores);

  double top_correct = 0;
  double bottom_correct = 0;
  for (const auto& s : selected) {
    bool predicted_top = s.classifier > threshold;
    if (s.truly_top && predicted_top) ++top_correct;
    if (!s.truly_top && !predicted_top) ++bottom_correct;
  }
  out.balanced_accuracy =
      0.5 * (top_correct / static_cast<double>(k) +
             bottom_correct / static_cast<double>(k));
  return out;
}

}  // namespace

AgreementResult split_half_agreement(const ReviewSet& reviews, Metric metric,
                                     size_t repetitions, double fraction,
                                     std::uint64_t seed) {
  if (repetitions == 0) throw Error("split_half_agreement needs repetitions >= 1");
  if (fraction <= 0.0 || fraction > 0.5) {
    throw Error("split_half_agreement needs fraction in (0, 0.5]");
  }

  std::map<std::string, std::vector<double>> by_idea;
  for (const auto& r : reviews.records) {
    by_idea[r.idea_id].push_back(metric_value(r, metric));
  }
  // Only ideas with at least two reviews can be split.
  std::vector<std::pair<std::string, std::vector<double>>> splittable;
  for (auto& [id, values] : by_idea) {
    if (values.size() >= 2) splittable.emplace_back(id, values);
  }
  AgreementResult total;
  if (splittable.size() < 2) {
    total.degenerate = true;
    total.ideas_used = splittable.size();
    return total;
  }

  double acc_sum = 0.0;
  size_t degenerate_reps = 0;
  AgreementResult last;
  for (size_t rep = 0; rep < repetitions; ++rep) {
    util::RandomStream rng(util::derive_seed(seed, "split-half", rep));
    std::vector<SelectedIdea> ideas;
    for (const auto& [id, values] : splittable) {
      std::vector<double> shuffled = values;
      rng.shuffle(shuffled);
      size_t half = shuffled.size() / 2;
      if (shuffled.size() % 2 == 1 && rng.bernoulli(0.5)) ++half;
      std::vector<double> first(shuffled.begin(), shuffled.begin() + half);
      std::vector<double> second(shuffled.begin() + half, shuffled.end());
      if (first.empty() || second.empty()) {
        // 1-review halves can only happen for n==1, filtered out above.
        continue;
      }
      ideas.push_back(
          {id, sample_mean(first), sample_mean(second), false});
    }
    last = classify_selected(std::move(ideas), fraction);
    if (last.degenerate) ++degenerate_reps;
    acc_sum += last.balanced_accuracy;
  }
  total.repetitions = repetitions;
  total.ideas_used = splittable.size();
  total.selected_per_side = last.selected_per_side;
  total.balanced_accuracy = acc_sum / static_cast<double>(repetitions);
  total.degenerate = degenerate_reps == repetitions;
  return total;
}

AgreementResult judge_benchmark(const std::map<std::string, double>& consensus,
                                const std::map<std::string, double>& judge,
                                double fraction) {
  if (fraction <= 0.0 || fraction > 0.5) {
    throw Error("judge_benchmark needs fraction in (0, 0.5]");
  }
  std::vector<SelectedIdea> ideas;
  for (const auto& [id, score] : consensus) {
    auto it = judge.find(id);
    if (it == judge.end()) {
      throw Error("judge_benchmark: no judge score for idea " + id);
    }
    ideas.push_back({id, score, it->second, false});
  }
  AgreementResult out = classify_selected(std::move(ideas), fraction);
  out.repetitions = 1;
  return out;
}

std::map<std::string, double> idea_consensus(const ReviewSet& reviews,
                                             Metric metric) {
  std::map<std::string, std::vector<double>> by_idea;
  for (const auto& r : reviews.records) {
    by_idea[r.idea_id].push_back(metric_value(r, metric));
  }
  std::map<std::string, double> consensus;
  for (const auto& [id, values] : by_idea) {
    consensus[id] = sample_mean(values);
  }
  return consensus;
}

TopicBreakdown topic_breakdown(const ReviewSet& reviews, Metric metric) {
  TopicBreakdown b;
  b.metric = metric;
  std::set<std::string> topics;
  for (const auto& r : reviews.records) topics.insert(r.topic);
  b.topics.assign(topics.begin(), topics.end());
  b.conditions = reviews.conditions_present();
  b.cells.assign(b.topics.size(),
                 std::vector<BreakdownCell>(b.conditions.size()));
  for (size_t t = 0; t < b.topics.size(); ++t) {
    for (size_t c = 0; c < b.conditions.size(); ++c) {
      std::vector<double> values;
      for (const auto& r : reviews.records) {
        if (r.topic == b.topics[t] && r.condition == b.conditions[c]) {
          values.push_back(metric_value(r, metric));
        }
      }
      if (!values.empty()) {
        b.cells[t][c].stats = describe(values);
        b.cells[t][c].present = true;
      }
    }
  }
  return b;
}

}  // namespace ideaforge::stats
