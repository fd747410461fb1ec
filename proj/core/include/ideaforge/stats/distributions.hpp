#pragma once

namespace ideaforge::stats {

// Regularized incomplete beta function I_x(a, b), evaluated with the
// modified Lentz continued fraction. Converges to well below 1e-12 for
// the parameter ranges that arise from t-tests.
double regularized_incomplete_beta(double a, double b, double x);

// Two-tailed p-value for Student's t with `df` degrees of freedom:
// P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
double t_two_tailed_p(double t, double df);

}  // namespace ideaforge::stats
