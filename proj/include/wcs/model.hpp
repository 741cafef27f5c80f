#ifndef WCS_MODEL_HPP
#define WCS_MODEL_HPP

#include <Eigen/Dense>

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "wcs/error.hpp"

namespace wcs {

// Dense variable index, 0..n-1.
using Var = int;

inline constexpr int kUnassigned = -1;

// One row per parent configuration (last parent varies fastest), one column
// per child value.
using CptTable = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Cpt {
  Var child = 0;
  std::vector<Var> parents;
  CptTable rows;
};

/// Discrete Bayesian network. Built incrementally, then shared read-only.
///
/// The structure is not checked on insertion so that malformed networks can
/// be represented and reported by validate().
class BayesNet {
 public:
  Var add_variable(std::string name, int cardinality);
  void set_cpt(Var child, std::vector<Var> parents, CptTable rows);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(Var v) const { return names_[v]; }
  int cardinality(Var v) const { return cards_[v]; }
  const std::vector<int>& cardinalities() const { return cards_; }
  const std::vector<Var>& parents(Var v) const { return cpts_[v].parents; }
  const std::vector<Var>& children(Var v) const { return children_[v]; }
  const Cpt& cpt(Var v) const { return cpts_[v]; }
  int max_cardinality() const;

  // Throws ModelError for unknown names.
  Var index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return by_name_.count(name) != 0; }

  // Row of v's CPT selected by the parent values in `values` (indexed by Var).
  int row_index(Var v, const std::vector<int>& values) const;
  double probability(Var v, const std::vector<int>& values) const {
    return cpts_[v].rows(row_index(v, values), values[v]);
  }

  // Number of parent configurations of v.
  int row_count(Var v) const;

 private:
  std::vector<std::string> names_;
  std::vector<int> cards_;
  std::vector<Cpt> cpts_;
  std::vector<std::vector<Var>> children_;
  std::unordered_map<std::string, Var> by_name_;
};

// Observed values. Ordered so that iteration is deterministic.
class Evidence {
 public:
  Evidence() = default;
  Evidence(std::initializer_list<std::pair<const Var, int>> init) : values_(init) {}

  void set(Var v, int value) { values_[v] = value; }
  void erase(Var v) { values_.erase(v); }
  bool contains(Var v) const { return values_.count(v) != 0; }
  int at(Var v) const { return values_.at(v); }
  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }
  std::vector<Var> variables() const;

  bool operator==(const Evidence&) const = default;

 private:
  std::map<Var, int> values_;
};

// Dense partial or full assignment; kUnassigned marks missing entries.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int n) : values_(n, kUnassigned) {}
  explicit Assignment(std::vector<int> values) : values_(std::move(values)) {}
  Assignment(int n, const Evidence& e);

  int size() const { return static_cast<int>(values_.size()); }
  int operator[](Var v) const { return values_[v]; }
  int& operator[](Var v) { return values_[v]; }
  bool has(Var v) const { return values_[v] != kUnassigned; }
  bool is_full() const;
  const std::vector<int>& values() const { return values_; }

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<int> values_;
};

struct Diagnostic {
  enum class Kind { Cycle, Normalization, Cardinality, Negative, MissingCpt, Evidence };
  Kind kind;
  Var variable = -1;
  int row = -1;
  std::string message;
};

// Product of CPT entries. Throws IncompleteAssignment if any variable is unset.
double joint_probability(const BayesNet& net, const Assignment& a);

// Parents, children and co-parents of v, sorted ascending.
std::vector<Var> markov_blanket(const BayesNet& net, Var v);

// Empty when the network is well-formed; never throws.
std::vector<Diagnostic> validate(const BayesNet& net, double tolerance = 1e-9);

// Diagnostics for out-of-range or unknown evidence entries.
std::vector<Diagnostic> validate(const BayesNet& net, const Evidence& e);

// Kahn's algorithm, smallest index first among ready nodes. Throws ModelError
// on a cycle.
std::vector<Var> topological_order(const BayesNet& net);

}  // namespace wcs

#endif  // WCS_MODEL_HPP
