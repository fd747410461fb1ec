#include "ideaforge/stats/reviews.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "ideaforge/errors.hpp"
#include "ideaforge/util/io.hpp"
#include "ideaforge/util/text.hpp"

namespace ideaforge::stats {

using nlohmann::json;

std::string condition_name(Condition c) {
  switch (c) {
    case Condition::Human:
      return "human";
    case Condition::Ai:
      return "ai";
    case Condition::AiRerank:
      return "ai_rerank";
  }
  return "human";
}

std::string condition_label(Condition c) {
  switch (c) {
    case Condition::Human:
      return "Human Ideas";
    case Condition::Ai:
      return "AI Ideas";
    case Condition::AiRerank:
      return "AI Ideas + Human Rerank";
  }
  return "Human Ideas";
}

Condition parse_condition(const std::string& text) {
  std::string t = util::to_lower(util::trim(text));
  bool has_rerank = t.find("rerank") != std::string::npos;
  bool has_ai = t.find("ai") != std::string::npos;
  if (has_ai && has_rerank) return Condition::AiRerank;
  if (has_ai) return Condition::Ai;
  if (t.find("human") != std::string::npos) return Condition::Human;
  throw ConfigError("unknown condition: \"" + text + "\"");
}

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::Novelty:
      return "novelty";
    case Metric::Excitement:
      return "excitement";
    case Metric::Feasibility:
      return "feasibility";
    case Metric::Effectiveness:
      return "effectiveness";
    case Metric::Overall:
      return "overall";
  }
  return "overall";
}

Metric parse_metric(const std::string& text) {
  std::string t = util::to_lower(util::trim(text));
  for (Metric m : kMetrics) {
    if (t == metric_name(m)) return m;
  }
  if (t == "expected_effectiveness" || t == "expected effectiveness") {
    return Metric::Effectiveness;
  }
  throw ConfigError("unknown metric: \"" + text + "\"");
}

int metric_value(const ReviewRecord& r, Metric m) {
  switch (m) {
    case Metric::Novelty:
      return r.novelty;
    case Metric::Excitement:
      return r.excitement;
    case Metric::Feasibility:
      return r.feasibility;
    case Metric::Effectiveness:
      return r.effectiveness;
    case Metric::Overall:
      return r.overall;
  }
  return r.overall;
}

std::vector<double> ReviewSet::metric_values(Condition c, Metric m) const {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.condition == c) out.push_back(metric_value(r, m));
  }
  return out;
}

std::vector<Condition> ReviewSet::conditions_present() const {
  std::vector<Condition> out;
  for (Condition c : kConditions) {
    if (has_condition(c)) out.push_back(c);
  }
  return out;
}

bool ReviewSet::has_condition(Condition c) const {
  return std::any_of(records.begin(), records.end(),
                     [c](const ReviewRecord& r) { return r.condition == c; });
}

namespace {

// Canonical field names with the aliases seen in exported review forms.
const std::map<std::string, std::string>& field_aliases() {
  static const std::map<std::string, std::string> aliases = {
      {"reviewer", "reviewer_id"},
      {"reviewer_id", "reviewer_id"},
      {"idea", "idea_id"},
      {"idea_id", "idea_id"},
      {"paper_id", "idea_id"},
      {"condition", "condition"},
      {"topic", "topic"},
      {"novelty", "novelty"},
      {"novelty_score", "novelty"},
      {"excitement", "excitement"},
      {"excitement_score", "excitement"},
      {"feasibility", "feasibility"},
      {"feasibility_score", "feasibility"},
      {"effectiveness", "effectiveness"},
      {"expected_effectiveness", "effectiveness"},
      {"effectiveness_score", "effectiveness"},
      {"overall", "overall"},
      {"overall_score", "overall"},
      {"confidence", "confidence"},
      {"familiarity", "familiarity"},
      {"minutes", "minutes"},
      {"time", "minutes"},
      {"time_minutes", "minutes"},
      {"novelty_rationale", "novelty_rationale"},
      {"excitement_rationale", "excitement_rationale"},
      {"feasibility_rationale", "feasibility_rationale"},
      {"effectiveness_rationale", "effectiveness_rationale"},
      {"overall_rationale", "overall_rationale"},
  };
  return aliases;
}

std::optional<std::string> canonical_field(const std::string& raw) {
  std::string key = util::to_lower(util::trim(raw));
  std::replace(key.begin(), key.end(), ' ', '_');
  auto it = field_aliases().find(key);
  if (it == field_aliases().end()) return std::nullopt;
  return it->second;
}

struct RowIssue {
  size_t line;
  std::string message;
};

int parse_score(const std::string& raw, const std::string& field, size_t line,
                std::vector<RowIssue>& issues) {
  std::string t = util::trim(raw);
  try {
    size_t pos = 0;
    int v = std::stoi(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    issues.push_back({line, field + " is not an integer: \"" + raw + "\""});
    return 0;
  }
}

ReviewRecord record_from_fields(const std::map<std::string, std::string>& f,
                                size_t line, std::vector<RowIssue>& issues) {
  ReviewRecord r;
  auto get = [&](const char* name) -> std::optional<std::string> {
    auto it = f.find(name);
    if (it == f.end() || util::trim(it->second).empty()) return std::nullopt;
    return it->second;
  };
  if (auto v = get("reviewer_id")) {
    r.reviewer_id = util::trim(*v);
  } else {
    issues.push_back({line, "missing reviewer_id"});
  }
  if (auto v = get("idea_id")) {
    r.idea_id = util::trim(*v);
  } else {
    issues.push_back({line, "missing idea_id"});
  }
  if (auto v = get("condition")) {
    try {
      r.condition = parse_condition(*v);
    } catch (const ConfigError& e) {
      issues.push_back({line, e.what()});
    }
  } else {
    issues.push_back({line, "missing condition"});
  }
  if (auto v = get("topic")) r.topic = util::trim(*v);

  for (Metric m : kMetrics) {
    std::string name = metric_name(m);
    auto v = get(name.c_str());
    if (!v) {
      issues.push_back({line, "missing " + name + " score"});
      continue;
    }
    int score = parse_score(*v, name, line, issues);
    switch (m) {
      case Metric::Novelty:
        r.novelty = score;
        break;
      case Metric::Excitement:
        r.excitement = score;
        break;
      case Metric::Feasibility:
        r.feasibility = score;
        break;
      case Metric::Effectiveness:
        r.effectiveness = score;
        break;
      case Metric::Overall:
        r.overall = score;
        break;
    }
    auto rat = get((name + "_rationale").c_str());
    if (rat) r.rationales[name] = *rat;
  }
  if (auto v = get("confidence")) {
    r.confidence = parse_score(*v, "confidence", line, issues);
  }
  if (auto v = get("familiarity")) {
    r.familiarity = parse_score(*v, "familiarity", line, issues);
  }
  if (auto v = get("minutes")) {
    try {
      r.minutes = std::stod(*v);
    } catch (const std::exception&) {
      issues.push_back({line, "minutes is not a number: \"" + *v + "\""});
    }
  }
  return r;
}

void check_ranges(const ReviewRecord& r, size_t line,
                  std::vector<RowIssue>& issues) {
  for (Metric m : kMetrics) {
    int v = metric_value(r, m);
    if (v < 1 || v > 10) {
      issues.push_back({line, metric_name(m) + " out of range [1,10]: " +
                                  std::to_string(v)});
    }
  }
  if (r.confidence && (*r.confidence < 1 || *r.confidence > 5)) {
    issues.push_back(
        {line, "confidence out of range [1,5]: " + std::to_string(*r.confidence)});
  }
  if (r.familiarity && (*r.familiarity < 1 || *r.familiarity > 5)) {
    issues.push_back({line, "familiarity out of range [1,5]: " +
                                std::to_string(*r.familiarity)});
  }
  if (r.minutes && *r.minutes < 0) {
    issues.push_back({line, "minutes is negative"});
  }
}

}  // namespace

std::vector<std::string> validate_reviews(
    const std::vector<ReviewRecord>& records,
    const std::map<std::string, std::string>& authorship) {
  std::vector<std::string> problems;
  std::set<std::pair<std::string, std::string>> seen;
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::vector<RowIssue> issues;
    check_ranges(r, i + 1, issues);
    auto key = std::make_pair(r.reviewer_id, r.idea_id);
    if (!r.reviewer_id.empty() && !seen.insert(key).second) {
      issues.push_back({i + 1, "duplicate review by " + r.reviewer_id +
                                   " of idea " + r.idea_id});
    }
    auto author = authorship.find(r.idea_id);
    if (author != authorship.end() && author->second == r.reviewer_id) {
      issues.push_back(
          {i + 1, "reviewer " + r.reviewer_id + " reviews their own idea"});
    }
    for (const auto& issue : issues) {
      problems.push_back("record " + std::to_string(issue.line) + ": " +
                         issue.message);
    }
  }
  return problems;
}

ReviewSet load_reviews(const std::filesystem::path& path) {
  std::vector<ReviewRecord> records;
  std::vector<RowIssue> issues;
  std::string ext = util::to_lower(path.extension().string());

  if (ext == ".csv") {
    auto rows = util::parse_csv(util::read_file(path));
    if (rows.empty()) throw ConfigError(path.string() + ": empty reviews file");
    std::vector<std::optional<std::string>> header;
    for (const auto& cell : rows[0]) header.push_back(canonical_field(cell));
    for (size_t i = 1; i < rows.size(); ++i) {
      std::map<std::string, std::string> fields;
      for (size_t c = 0; c < rows[i].size() && c < header.size(); ++c) {
        if (header[c]) fields[*header[c]] = rows[i][c];
      }
      records.push_back(record_from_fields(fields, i + 1, issues));
    }
  } else if (ext == ".jsonl") {
    auto rows = util::read_jsonl(path);
    for (size_t i = 0; i < rows.size(); ++i) {
      std::map<std::string, std::string> fields;
      for (auto it = rows[i].begin(); it != rows[i].end(); ++it) {
        auto canon = canonical_field(it.key());
        if (!canon) continue;
        const json& v = it.value();
        if (v.is_string()) {
          fields[*canon] = v.get<std::string>();
        } else if (v.is_number_integer()) {
          fields[*canon] = std::to_string(v.get<long long>());
        } else if (v.is_number()) {
          fields[*canon] = std::to_string(v.get<double>());
        }
      }
      records.push_back(record_from_fields(fields, i + 1, issues));
    }
  } else {
    throw ConfigError(path.string() +
                      ": unsupported reviews format (use .csv or .jsonl)");
  }

  std::vector<std::string> problems;
  for (const auto& issue : issues) {
    problems.push_back("line " + std::to_string(issue.line) + ": " +
                       issue.message);
  }
  for (auto& p : validate_reviews(records)) problems.push_back(p);
  if (!problems.empty()) {
    std::string msg = path.string() + ": invalid reviews:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return ReviewSet{std::move(records)};
}

}  // namespace ideaforge::stats
