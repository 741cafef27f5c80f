#ifndef WCS_FACTOR_HPP
#define WCS_FACTOR_HPP

#include <Eigen/Dense>

#include <vector>

#include "wcs/model.hpp"

namespace wcs {

/// Nonnegative table over an ordered scope; the last scope variable varies
/// fastest. An empty scope holds a single scalar.
class Factor {
 public:
  Factor() : table_(Eigen::VectorXd::Ones(1)) {}
  Factor(std::vector<Var> scope, std::vector<int> cards, Eigen::VectorXd table);

  static Factor constant(double value);
  // Scope is the parents in CPT order followed by the child.
  static Factor from_cpt(const BayesNet& net, Var child);

  const std::vector<Var>& scope() const { return scope_; }
  const std::vector<int>& cards() const { return cards_; }
  const Eigen::VectorXd& table() const { return table_; }
  Eigen::VectorXd& table() { return table_; }
  Eigen::Index size() const { return table_.size(); }
  bool contains(Var v) const;
  bool is_scalar() const { return scope_.empty(); }
  double scalar() const { return table_(0); }

  // Entry at the configuration read from `values` (indexed by Var).
  double at(const std::vector<int>& values) const;

 private:
  std::vector<Var> scope_;
  std::vector<int> cards_;
  Eigen::VectorXd table_;
};

// Scope is f's scope followed by g's variables not in f.
Factor factor_product(const Factor& f, const Factor& g);

// Throws ParameterError when v is not in f's scope.
Factor factor_sum_out(const Factor& f, Var v);

// Sums out every variable not in `keep`; the result keeps f's relative order.
Factor factor_project(const Factor& f, const std::vector<Var>& keep);

// Slices out every scope variable assigned in `values`.
Factor factor_restrict(const Factor& f, const Assignment& values);

}  // namespace wcs

#endif  // WCS_FACTOR_HPP
