#include "ideaforge/stats/tables.hpp"

#include <cctype>
#include <cmath>
#include <cstdarg>
#include <cstdio>

namespace ideaforge::stats {

using nlohmann::json;

namespace {

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

std::string title_case(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(s[0]));
  return s;
}

json stats_to_json(const DescriptiveStats& d) {
  return json{{"n", d.n},      {"mean", d.mean},     {"sd", d.sd},
              {"se", d.se},    {"median", d.median}, {"min", d.min},
              {"max", d.max}};
}

}  // namespace

std::string format_test_report(const TestReport& report) {
  std::string out = fmt("%s score, per-%s units (Bonferroni family = %zu)\n",
                        title_case(metric_name(report.metric)).c_str(),
                        report.unit.c_str(), report.family_size);
  out += fmt("%-26s %5s %7s %7s %6s %6s %8s %8s %8s %8s %-4s\n", "condition",
             "n", "mean", "median", "sd", "se", "diff", "t", "df", "p(adj)",
             "sig");
  const auto& b = report.baseline_stats;
  out += fmt("%-26s %5zu %7.2f %7.2f %6.2f %6.2f %8s %8s %8s %8s %-4s\n",
             condition_label(report.baseline).c_str(), b.n, b.mean, b.median,
             b.sd, b.se, "-", "-", "-", "-", "-");
  for (const auto& row : report.rows) {
    out += fmt("%-26s %5zu %7.2f %7.2f %6.2f %6.2f %8.2f %8.3f %8.2f %8.2f %-4s\n",
               condition_label(row.condition).c_str(), row.stats.n,
               row.stats.mean, row.stats.median, row.stats.sd, row.stats.se,
               row.mean_diff, row.t, row.df, row.adj_p,
               row.stars.empty() ? "" : row.stars.c_str());
  }
  return out;
}

std::string format_correlation_matrix(const CorrelationMatrix& matrix) {
  std::string out = "Pearson correlations between metrics (per review)\n";
  out += fmt("%-14s", "");
  for (Metric m : matrix.metrics) {
    out += fmt(" %13s", metric_name(m).c_str());
  }
  out += "\n";
  for (size_t i = 0; i < matrix.metrics.size(); ++i) {
    out += fmt("%-14s", metric_name(matrix.metrics[i]).c_str());
    for (size_t j = 0; j < matrix.metrics.size(); ++j) {
      if (!matrix.defined[i][j]) {
        out += fmt(" %13s", "undef");
      } else {
        out += fmt(" %13.3f", matrix.values[i][j]);
      }
    }
    out += "\n";
  }
  return out;
}

std::string format_agreement(const AgreementResult& result,
                             const std::string& title) {
  std::string out = title + "\n";
  out += fmt("  balanced accuracy: %.1f%%%s\n",
             100.0 * result.balanced_accuracy,
             result.degenerate ? " (degenerate: constant scores)" : "");
  out += fmt("  ideas: %zu, selected per side: %zu, repetitions: %zu\n",
             result.ideas_used, result.selected_per_side, result.repetitions);
  return out;
}

std::string format_topic_breakdown(const TopicBreakdown& breakdown) {
  std::string out =
      fmt("%s score by topic (mean (sd) / n)\n",
          title_case(metric_name(breakdown.metric)).c_str());
  out += fmt("%-22s", "topic");
  for (Condition c : breakdown.conditions) {
    out += fmt(" %24s", condition_label(c).c_str());
  }
  out += "\n";
  for (size_t t = 0; t < breakdown.topics.size(); ++t) {
    const std::string& name =
        breakdown.topics[t].empty() ? "(none)" : breakdown.topics[t];
    out += fmt("%-22s", name.c_str());
    for (size_t c = 0; c < breakdown.conditions.size(); ++c) {
      const auto& cell = breakdown.cells[t][c];
      if (!cell.present) {
        out += fmt(" %24s", "-");
      } else {
        out += fmt(" %15s", fmt("%.2f (%.2f)", cell.stats.mean,
                                cell.stats.sd).c_str());
        out += fmt(" / %-5zu", cell.stats.n);
      }
    }
    out += "\n";
  }
  return out;
}

json test_report_to_json(const TestReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back(json{{"condition", condition_name(row.condition)},
                        {"stats", stats_to_json(row.stats)},
                        {"mean_diff", row.mean_diff},
                        {"t", row.t},
                        {"df", row.df},
                        {"raw_p", row.raw_p},
                        {"adjusted_p", row.adj_p},
                        {"stars", row.stars},
                        {"degenerate", row.degenerate}});
  }
  return json{{"unit", report.unit},
              {"metric", metric_name(report.metric)},
              {"baseline", condition_name(report.baseline)},
              {"baseline_stats", stats_to_json(report.baseline_stats)},
              {"family_size", report.family_size},
              {"comparisons", rows}};
}

json correlation_matrix_to_json(const CorrelationMatrix& matrix) {
  json metrics = json::array();
  for (Metric m : matrix.metrics) metrics.push_back(metric_name(m));
  json values = json::array();
  for (size_t i = 0; i < matrix.values.size(); ++i) {
    json row = json::array();
    for (size_t j = 0; j < matrix.values[i].size(); ++j) {
      if (matrix.defined[i][j]) {
        row.push_back(matrix.values[i][j]);
      } else {
        row.push_back(nullptr);
      }
    }
    values.push_back(row);
  }
  return json{{"metrics", metrics}, {"values", values}};
}

json agreement_to_json(const AgreementResult& result) {
  return json{{"balanced_accuracy", result.balanced_accuracy},
              {"repetitions", result.repetitions},
              {"ideas_used", result.ideas_used},
              {"selected_per_side", result.selected_per_side},
              {"degenerate", result.degenerate}};
}

json topic_breakdown_to_json(const TopicBreakdown& breakdown) {
  json topics = json::array();
  for (size_t t = 0; t < breakdown.topics.size(); ++t) {
    json conditions = json::object();
    for (size_t c = 0; c < breakdown.conditions.size(); ++c) {
      if (breakdown.cells[t][c].present) {
        conditions[condition_name(breakdown.conditions[c])] =
            stats_to_json(breakdown.cells[t][c].stats);
      }
    }
    topics.push_back(
        json{{"topic", breakdown.topics[t]}, {"conditions", conditions}});
  }
  return json{{"metric", metric_name(breakdown.metric)}, {"topics", topics}};
}

}  // namespace ideaforge::stats
