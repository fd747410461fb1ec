#include "ideaforge/dedup/dedup.hpp"

#include <cmath>

#include "ideaforge/errors.hpp"

namespace ideaforge::dedup {

using nlohmann::json;

double cosine_similarity(const std::vector<double>& a,
                         const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error("cosine_similarity: dimension mismatch (" +
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                ")");
  }
  if (a.empty()) {
    throw Error("cosine_similarity: empty vectors");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw Error("cosine_similarity: zero vector has no direction");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<double> l2_normalize(std::vector<double> v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm == 0.0) {
    throw Error("l2_normalize: zero vector");
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

DedupReport deduplicate(const std::vector<std::vector<double>>& vectors,
                        const DedupConfig& config) {
  DedupReport report;
  report.config = config;
  report.total = vectors.size();
  report.decisions.reserve(vectors.size());

  for (size_t i = 0; i < vectors.size(); ++i) {
    DedupDecision d;
    d.index = i;
    size_t best = 0;
    bool compared = false;
    if (config.compare_all_prior) {
      for (size_t j = 0; j < i; ++j) {
        double sim = cosine_similarity(vectors[i], vectors[j]);
        if (!compared || sim > d.max_similarity) {
          d.max_similarity = sim;
          best = j;
          compared = true;
        }
      }
    } else {
      for (size_t j : report.kept) {
        double sim = cosine_similarity(vectors[i], vectors[j]);
        if (!compared || sim > d.max_similarity) {
          d.max_similarity = sim;
          best = j;
          compared = true;
        }
      }
    }
    if (compared && d.max_similarity > config.threshold) {
      d.kept = false;
      d.duplicate_of = best;
    } else {
      d.kept = true;
      report.kept.push_back(i);
    }
    report.decisions.push_back(d);
  }
  report.kept_count = report.kept.size();
  return report;
}

std::vector<CurvePoint> duplication_curve(const DedupReport& report,
                                          size_t bucket_size) {
  if (bucket_size == 0) {
    throw Error("duplication_curve: bucket_size must be >= 1");
  }
  std::vector<CurvePoint> curve;
  size_t cumulative = 0;
  for (size_t start = 0; start < report.decisions.size();
       start += bucket_size) {
    CurvePoint p;
    p.start = start;
    p.size = std::min(bucket_size, report.decisions.size() - start);
    for (size_t i = start; i < start + p.size; ++i) {
      if (report.decisions[i].kept) ++p.kept;
    }
    cumulative += p.kept;
    p.cumulative_kept = cumulative;
    p.kept_pct = 100.0 * static_cast<double>(p.kept) /
                 static_cast<double>(p.size);
    p.partial = p.size < bucket_size;
    curve.push_back(p);
  }
  return curve;
}

json report_to_json(const DedupReport& report) {
  json decisions = json::array();
  for (const auto& d : report.decisions) {
    json row{{"index", d.index},
             {"kept", d.kept},
             {"max_similarity", d.max_similarity}};
    if (d.duplicate_of) row["duplicate_of"] = *d.duplicate_of;
    decisions.push_back(row);
  }
  return json{{"threshold", report.config.threshold},
              {"compare_all_prior", report.config.compare_all_prior},
              {"total", report.total},
              {"kept_count", report.kept_count},
              {"kept", report.kept},
              {"decisions", decisions}};
}

json curve_to_json(const std::vector<CurvePoint>& curve) {
  json out = json::array();
  for (const auto& p : curve) {
    out.push_back(json{{"start", p.start},
                       {"size", p.size},
                       {"kept", p.kept},
                       {"kept_pct", p.kept_pct},
                       {"cumulative_kept", p.cumulative_kept},
                       {"partial", p.partial}});
  }
  return out;
}

}  // namespace ideaforge::dedup
