#include "ideaforge/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ideaforge/errors.hpp"
#include "ideaforge/stats/distributions.hpp"

namespace ideaforge::stats {

namespace {

TResult welch_from_moments(double mean1, double var1, double n1, double mean2,
                           double var2, double n2) {
  TResult res;
  double w1 = var1 / n1;
  double w2 = var2 / n2;
  double denom = w1 + w2;
  if (denom == 0.0) {
    // Both samples constant; computed by convention.
    res.degenerate = true;
    res.df = n1 + n2 - 2.0;
    if (mean1 == mean2) {
      res.t = 0.0;
      res.p = 1.0;
    } else {
      res.t = mean1 < mean2 ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
      res.p = 0.0;
    }
    return res;
  }
  res.t = (mean1 - mean2) / std::sqrt(denom);
  res.df = denom * denom / (w1 * w1 / (n1 - 1.0) + w2 * w2 / (n2 - 1.0));
  res.p = t_two_tailed_p(res.t, res.df);
  return res;
}

}  // namespace

double sample_mean(const std::vector<double>& x) {
  if (x.empty()) throw Error("mean of empty sample");
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

double sample_variance(const std::vector<double>& x) {
  if (x.size() < 2) throw Error("variance requires at least 2 observations");
  double m = sample_mean(x);
  double ss = 0.0;
  for (double v : x) {
    double d = v - m;
    ss += d * d;
  }
  return ss / static_cast<double>(x.size() - 1);
}

double sample_median(std::vector<double> x) {
  if (x.empty()) throw Error("median of empty sample");
  std::sort(x.begin(), x.end());
  size_t n = x.size();
  if (n % 2 == 1) return x[n / 2];
  return 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

DescriptiveStats describe(const std::vector<double>& x) {
  if (x.empty()) throw Error("describe of empty sample");
  DescriptiveStats d;
  d.n = x.size();
  d.mean = sample_mean(x);
  d.sd = x.size() >= 2 ? std::sqrt(sample_variance(x)) : 0.0;
  d.se = d.sd / std::sqrt(static_cast<double>(x.size()));
  auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  d.min = *mn;
  d.max = *mx;
  d.median = sample_median(x);
  return d;
}

TResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error("welch_t requires at least 2 observations per sample");
  }
  return welch_from_moments(sample_mean(a), sample_variance(a),
                            static_cast<double>(a.size()), sample_mean(b),
                            sample_variance(b), static_cast<double>(b.size()));
}

TResult welch_t_summary(double mean1, double sd1, size_t n1, double mean2,
                        double sd2, size_t n2) {
  if (n1 < 2 || n2 < 2) {
    throw Error("welch_t_summary requires n >= 2 per sample");
  }
  if (sd1 < 0.0 || sd2 < 0.0) {
    throw Error("welch_t_summary requires non-negative sds");
  }
  return welch_from_moments(mean1, sd1 * sd1, static_cast<double>(n1), mean2,
                            sd2 * sd2, static_cast<double>(n2));
}

TResult one_sample_t(const std::vector<double>& x, double mu0) {
  if (x.size() < 2) {
    throw Error("one_sample_t requires at least 2 observations");
  }
  TResult res;
  double n = static_cast<double>(x.size());
  double m = sample_mean(x);
  double var = sample_variance(x);
  res.df = n - 1.0;
  if (var == 0.0) {
    res.degenerate = true;
    if (m == mu0) {
      res.t = 0.0;
      res.p = 1.0;
    } else {
      res.t = m < mu0 ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::infinity();
      res.p = 0.0;
    }
    return res;
  }
  res.t = (m - mu0) / std::sqrt(var / n);
  res.p = t_two_tailed_p(res.t, res.df);
  return res;
}

double bonferroni(double p, size_t family_size) {
  if (p < 0.0 || p > 1.0) {
    throw Error("bonferroni requires p in [0, 1]");
  }
  if (family_size < 1) {
    throw Error("bonferroni requires family_size >= 1");
  }
  return std::min(1.0, p * static_cast<double>(family_size));
}

PearsonResult pearson(const std::vector<double>& x,
                      const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw Error("pearson requires equal-length inputs");
  }
  if (x.size() < 2) {
    throw Error("pearson requires at least 2 observations");
  }
  double mx = sample_mean(x);
  double my = sample_mean(y);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  PearsonResult res;
  if (sxx == 0.0 || syy == 0.0) {
    res.defined = false;
    res.r = 0.0;
    return res;
  }
  res.r = sxy / std::sqrt(sxx * syy);
  res.r = std::clamp(res.r, -1.0, 1.0);
  return res;
}

std::string significance_stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

}  // namespace ideaforge::stats
