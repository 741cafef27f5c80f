#ifndef WCS_METRICS_HPP
#define WCS_METRICS_HPP

#include <map>
#include <utility>
#include <vector>

#include "wcs/exact.hpp"

namespace wcs {

// Sum of squared errors over every variable-value pair, divided by the total
// number of values. Throws KeyMismatch when the maps disagree on variables
// or domain sizes.
double mse(const Marginals& exact, const Marginals& approx);

// Sum of absolute errors divided by N * (total number of values), N being
// the number of variables.
double avg_abs_error(const Marginals& exact, const Marginals& approx);

// (sum x^2 - M mean^2) / (M - 1), accumulated as running sums.
// Throws InsufficientChains for fewer than two values.
double sample_variance(const std::vector<double>& chain_estimates);

// Upper critical value t with P(T > t) = alpha / 2 for Student's t with df
// degrees of freedom.
double t_quantile(double alpha, int df);

// Student-t CDF, P(T <= t).
double student_t_cdf(double t, int df);

struct Interval {
  double pooled = 0.0;
  double half_width = 0.0;
};

// Mean of the chain estimates and half-width t_quantile(alpha, M-1) S / sqrt(M).
Interval confidence_interval(const std::vector<double>& chain_estimates, double alpha = 0.10);

struct ValueReport {
  Var variable = -1;
  int value = 0;
  std::vector<double> chain_estimates;
  double pooled = 0.0;
  double variance = 0.0;
  double half_width = 0.0;
  double exact = 0.0;
  double abs_error = 0.0;
};

struct MultiChainReport {
  int chains = 0;
  double alpha = 0.10;
  double t = 0.0;
  std::vector<ValueReport> values;  // ordered by (variable, value)
};

struct AccuracyReport {
  double mse = 0.0;
  double delta = 0.0;    // average absolute error
  double delta90 = 0.0;  // averaged interval half-width, same normalization as delta
  std::map<Var, double> variable_mse;
  std::map<Var, double> variable_delta;  // mean absolute error over the variable's values
};

struct Report {
  AccuracyReport accuracy;
  MultiChainReport chains;
};

Report build_report(const Marginals& exact, const std::vector<Marginals>& per_chain, double alpha = 0.10);

}  // namespace wcs

#endif  // WCS_METRICS_HPP
