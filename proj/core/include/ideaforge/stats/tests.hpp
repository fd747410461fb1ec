#pragma once

#include <string>
#include <vector>

namespace ideaforge::stats {

struct TResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  // Set when both inputs were constant and the result is a convention
  // (equal: t=0, p=1; unequal: p=0) rather than a computed statistic.
  bool degenerate = false;
};

struct DescriptiveStats {
  size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
};

struct PearsonResult {
  double r = 0.0;
  // False when either input has zero variance, making r undefined.
  bool defined = true;
};

DescriptiveStats describe(const std::vector<double>& x);

double sample_mean(const std::vector<double>& x);
// Sample variance with Bessel's correction (n - 1 denominator).
double sample_variance(const std::vector<double>& x);
double sample_median(std::vector<double> x);

// Welch's unequal-variance t-test, two-tailed, with the
// Welch-Satterthwaite degrees of freedom. Requires n >= 2 per sample.
TResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

// Same test computed from summary statistics (mean, sd, n) alone, for
// reproducing published tables without raw data.
TResult welch_t_summary(double mean1, double sd1, size_t n1, double mean2,
                        double sd2, size_t n2);

// Two-tailed one-sample t-test of H0: mean(x) == mu0. Requires n >= 2.
TResult one_sample_t(const std::vector<double>& x, double mu0);

// min(1, p * family_size). Requires p in [0, 1] and family_size >= 1.
double bonferroni(double p, size_t family_size);

PearsonResult pearson(const std::vector<double>& x,
                      const std::vector<double>& y);

// Significance markers on an (already adjusted) p-value:
// "***" < 0.001, "**" < 0.01, "*" < 0.05, otherwise "".
std::string significance_stars(double p);

}  // namespace ideaforge::stats
