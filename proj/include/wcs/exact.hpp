#ifndef WCS_EXACT_HPP
#define WCS_EXACT_HPP

#include <Eigen/Dense>

#include <map>
#include <vector>

#include "wcs/factor.hpp"
#include "wcs/model.hpp"

namespace wcs {

struct Distribution {
  Var variable = -1;
  Eigen::VectorXd probs;
};

// Posterior marginals keyed by variable; each vector is normalized.
using Marginals = std::map<Var, Eigen::VectorXd>;

enum class OrderHeuristic { MinFill, ReverseTopological };

struct EliminationOptions {
  // Elimination is refused when the order's induced width exceeds this.
  int width_cap = 25;
  OrderHeuristic heuristic = OrderHeuristic::MinFill;
};

/// Bucket tree over the unobserved variables of a network.
///
/// The structure (elimination order, bucket contents, tree edges) depends only
/// on *which* variables are observed, so one tree serves any number of
/// queries that differ only in the observed values. CPTs are sliced by the
/// observed values rather than multiplied by indicators, so the cost of a
/// query is governed by the adjusted induced width.
class BucketTree {
 public:
  // `root`, when given, is eliminated last so that its marginal falls out of
  // the upward pass alone.
  BucketTree(const BayesNet& net, const std::vector<Var>& observed,
             const EliminationOptions& options = {}, Var root = -1);
  // Explicit elimination order over the unobserved variables.
  BucketTree(const BayesNet& net, const std::vector<Var>& observed,
             const std::vector<Var>& elimination, const EliminationOptions& options);

  const std::vector<Var>& elimination() const { return order_; }
  int width() const { return width_; }

  // Queries read only the observed entries of `values`; other entries are ignored.
  // log P(observed values). Throws ZeroEvidence when the probability is 0.
  double log_evidence(const Assignment& values) const;
  double evidence_probability(const Assignment& values) const;

  // P(q | observed values). Throws ZeroEvidence when P(values) = 0.
  Eigen::VectorXd marginal(Var q, const Assignment& values) const;

  // Two-pass propagation; marginals of every unobserved variable.
  Marginals all_marginals(const Assignment& values) const;

 private:
  // A CPT placed in a bucket: its table is read at base(observed values) +
  // map[cluster configuration].
  struct CptInput {
    Var cpt = -1;
    std::vector<std::pair<Var, int>> observed_strides;
    std::vector<int> map;
  };
  struct Bucket {
    std::vector<Var> cluster;    // sorted; includes the bucket variable
    std::vector<int> cards;
    int size = 1;                // number of cluster configurations
    int var_stride = 1;          // stride of the bucket variable in the cluster
    std::vector<CptInput> cpts;
    std::vector<Var> children;
    std::vector<std::vector<int>> child_maps;  // cluster config -> child separator index
    Var parent = -1;             // -1 for a root
    std::vector<Var> separator;
    int separator_size = 1;
    std::vector<int> separator_map;  // cluster config -> separator index
  };
  struct Pass {
    std::vector<Eigen::VectorXd> local;  // product of the bucket's CPTs
    std::vector<Eigen::VectorXd> up;     // upward messages, max-normalized
    double log_scale = 0.0;
  };

  void build(const std::vector<Var>& observed);
  Pass upward(const Assignment& values) const;
  // local[v] times the messages from every child except `skip_child`.
  Eigen::VectorXd combine(const Pass& pass, Var v, Var skip_child) const;
  Eigen::VectorXd bucket_belief(const Eigen::VectorXd& cluster_table, Var v) const;

  const BayesNet* net_;
  EliminationOptions options_;
  std::vector<Var> order_;
  std::vector<int> position_;  // -1 for observed variables
  std::vector<Bucket> buckets_;
  std::vector<int> constants_; // CPTs whose scope is fully observed
  int width_ = 0;
};

double be_evidence_prob(const BayesNet& net, const Evidence& e, const EliminationOptions& options = {});

// Throws ParameterError when q is observed, ZeroEvidence when P(e) = 0.
Distribution be_marginal(const BayesNet& net, const Evidence& e, Var q,
                         const EliminationOptions& options = {});

Marginals all_marginals(const BayesNet& net, const Evidence& e, const EliminationOptions& options = {});

}  // namespace wcs

#endif  // WCS_EXACT_HPP
