#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ideaforge::stats {

enum class Condition { Human, Ai, AiRerank };

constexpr Condition kConditions[] = {Condition::Human, Condition::Ai,
                                     Condition::AiRerank};

std::string condition_name(Condition c);
std::string condition_label(Condition c);
// Tolerant: accepts "human", "AI Ideas", "ai_rerank", "AI + human rerank"...
Condition parse_condition(const std::string& text);

enum class Metric { Novelty, Excitement, Feasibility, Effectiveness, Overall };

constexpr Metric kMetrics[] = {Metric::Novelty, Metric::Excitement,
                               Metric::Feasibility, Metric::Effectiveness,
                               Metric::Overall};
constexpr size_t kMetricCount = 5;

std::string metric_name(Metric m);
Metric parse_metric(const std::string& text);

// One completed review form for one idea.
struct ReviewRecord {
  std::string reviewer_id;
  std::string idea_id;
  Condition condition = Condition::Human;
  std::string topic;  // optional
  int novelty = 0;
  int excitement = 0;
  int feasibility = 0;
  int effectiveness = 0;
  int overall = 0;                    // all five scored 1..10
  std::optional<int> confidence;      // 1..5
  std::optional<int> familiarity;     // 1..5
  std::optional<double> minutes;      // time spent, >= 0
  std::map<std::string, std::string> rationales;  // metric name -> free text
};

int metric_value(const ReviewRecord& r, Metric m);

struct ReviewSet {
  std::vector<ReviewRecord> records;

  std::vector<double> metric_values(Condition c, Metric m) const;
  std::vector<Condition> conditions_present() const;
  bool has_condition(Condition c) const;
};

// Loads reviews from a .csv or .jsonl file (decided by extension) and
// validates them. Schema violations are collected and reported together
// with their line numbers in a single ConfigError.
ReviewSet load_reviews(const std::filesystem::path& path);

// Validation used by load_reviews; `authorship` optionally maps idea_id to
// the author's reviewer_id so self-reviews can be rejected. Returns the
// list of problems ("line 7: novelty out of range ..."), empty when clean.
std::vector<std::string> validate_reviews(
    const std::vector<ReviewRecord>& records,
    const std::map<std::string, std::string>& authorship = {});

}  // namespace ideaforge::stats
