#include "wcs/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <string>
#include <tuple>

#include "wcs/error.hpp"

namespace wcs {

namespace {

void check_keys(const Marginals& exact, const Marginals& approx) {
  std::string missing;
  for (const auto& [v, p] : exact) {
    const auto it = approx.find(v);
    if (it == approx.end())
      missing += " " + std::to_string(v) + "(missing)";
    else if (it->second.size() != p.size())
      missing += " " + std::to_string(v) + "(domain)";
  }
  for (const auto& [v, p] : approx)
    if (!exact.count(v)) missing += " " + std::to_string(v) + "(extra)";
  if (!missing.empty()) throw KeyMismatch("marginal maps disagree on variables:" + missing);
}

double total_values(const Marginals& m) {
  double d = 0.0;
  for (const auto& [v, p] : m) d += static_cast<double>(p.size());
  return d;
}

// Mean and sample variance from running sums of deviations from the first
// value; the shift keeps identical inputs exact.
std::pair<double, double> moments(const std::vector<double>& xs) {
  const double shift = xs.front();
  const double m = static_cast<double>(xs.size());
  double sum = 0.0, sum_sq = 0.0;
  for (double x : xs) {
    sum += x - shift;
    sum_sq += (x - shift) * (x - shift);
  }
  const double mean = sum / m;
  return {shift + mean, std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0))};
}

}  // namespace

double mse(const Marginals& exact, const Marginals& approx) {
  check_keys(exact, approx);
  double sum = 0.0;
  for (const auto& [v, p] : exact) sum += (p - approx.at(v)).squaredNorm();
  const double d = total_values(exact);
  return d > 0.0 ? sum / d : 0.0;
}

double avg_abs_error(const Marginals& exact, const Marginals& approx) {
  check_keys(exact, approx);
  double sum = 0.0;
  for (const auto& [v, p] : exact) sum += (p - approx.at(v)).cwiseAbs().sum();
  const double d = total_values(exact) * static_cast<double>(exact.size());
  return d > 0.0 ? sum / d : 0.0;
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw InsufficientChains("sample variance needs at least 2 chains");
  return moments(xs).second;
}

double student_t_cdf(double t, int df) {
  if (df < 1) throw ParameterError("degrees of freedom must be >= 1");
  return boost::math::cdf(boost::math::students_t(df), t);
}

double t_quantile(double alpha, int df) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");
  if (df < 1) throw ParameterError("degrees of freedom must be >= 1");
  if (alpha == 1.0) return 0.0;
  return boost::math::quantile(boost::math::complement(boost::math::students_t(df), alpha / 2.0));
}

Interval confidence_interval(const std::vector<double>& xs, double alpha) {
  if (xs.size() < 2) throw InsufficientChains("a confidence interval needs at least 2 chains");
  const auto [mean, var] = moments(xs);
  const double m = static_cast<double>(xs.size());
  return {mean, t_quantile(alpha, static_cast<int>(xs.size()) - 1) * std::sqrt(var / m)};
}

Report build_report(const Marginals& exact, const std::vector<Marginals>& per_chain, double alpha) {
  if (per_chain.size() < 2) throw InsufficientChains("a report needs at least 2 chains");
  for (const auto& chain : per_chain) check_keys(exact, chain);
  Report r;
  r.chains.chains = static_cast<int>(per_chain.size());
  r.chains.alpha = alpha;
  r.chains.t = t_quantile(alpha, r.chains.chains - 1);
  double sq = 0.0, abs = 0.0, half = 0.0;
  for (const auto& [v, p] : exact) {
    double vsq = 0.0, vabs = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      ValueReport vr;
      vr.variable = v;
      vr.value = static_cast<int>(k);
      for (const auto& chain : per_chain) vr.chain_estimates.push_back(chain.at(v)[k]);
      std::tie(vr.pooled, vr.variance) = moments(vr.chain_estimates);
      vr.half_width = r.chains.t * std::sqrt(vr.variance / r.chains.chains);
      vr.exact = p[k];
      vr.abs_error = std::abs(vr.pooled - vr.exact);
      vsq += vr.abs_error * vr.abs_error;
      vabs += vr.abs_error;
      half += vr.half_width;
      r.chains.values.push_back(std::move(vr));
    }
    r.accuracy.variable_mse[v] = vsq / static_cast<double>(p.size());
    r.accuracy.variable_delta[v] = vabs / static_cast<double>(p.size());
    sq += vsq;
    abs += vabs;
  }
  const double d = total_values(exact);
  const double n = static_cast<double>(exact.size());
  if (d > 0.0) {
    r.accuracy.mse = sq / d;
    r.accuracy.delta = abs / (n * d);
    r.accuracy.delta90 = half / (n * d);
  }
  return r;
}

}  // namespace wcs
