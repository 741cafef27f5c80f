#include "wcs/exact.hpp"

#include <algorithm>
#include <cmath>

#include "wcs/graph.hpp"

namespace wcs {

namespace {

std::vector<bool> mask_of(int n, const std::vector<Var>& vars) {
  std::vector<bool> mask(n, false);
  for (Var v : vars) mask[v] = true;
  return mask;
}

}  // namespace

BucketTree::BucketTree(const BayesNet& net, const std::vector<Var>& observed,
                       const EliminationOptions& options, Var root)
    : net_(&net), options_(options) {
  const auto mask = mask_of(net.size(), observed);
  if (root >= 0 && mask[root]) throw ParameterError("query variable '" + net.name(root) + "' is observed");
  if (options.heuristic == OrderHeuristic::MinFill) {
    const Ordering o = min_fill_ordering(moralize(net, mask), root);
    for (int v : o.elimination())
      if (!mask[v]) order_.push_back(v);
  } else {
    auto topo = topological_order(net);
    for (auto it = topo.rbegin(); it != topo.rend(); ++it)
      if (!mask[*it] && *it != root) order_.push_back(*it);
    if (root >= 0) order_.push_back(root);
  }
  build(observed);
}

BucketTree::BucketTree(const BayesNet& net, const std::vector<Var>& observed,
                       const std::vector<Var>& elimination, const EliminationOptions& options)
    : net_(&net), options_(options), order_(elimination) {
  build(observed);
}

namespace {

// map[i] = sum over target variables of (digit of that variable in cluster
// configuration i) * stride.
std::vector<int> index_map(const std::vector<Var>& cluster, const std::vector<int>& cards,
                           const std::vector<std::pair<Var, int>>& strides) {
  const int k = static_cast<int>(cluster.size());
  std::vector<int> digit_stride(k, 0);
  for (const auto& [u, stride] : strides) {
    const auto pos = std::find(cluster.begin(), cluster.end(), u) - cluster.begin();
    digit_stride[pos] += stride;
  }
  int size = 1;
  for (int c : cards) size *= c;
  std::vector<int> map(size);
  std::vector<int> digits(k, 0);
  int idx = 0;
  for (int i = 0; i < size; ++i) {
    map[i] = idx;
    for (int d = k - 1; d >= 0; --d) {
      idx += digit_stride[d];
      if (++digits[d] < cards[d]) break;
      idx -= digit_stride[d] * cards[d];
      digits[d] = 0;
    }
  }
  return map;
}

std::vector<std::pair<Var, int>> last_fastest(const std::vector<Var>& scope, const BayesNet& net) {
  std::vector<std::pair<Var, int>> out(scope.size());
  int acc = 1;
  for (std::size_t i = scope.size(); i-- > 0;) {
    out[i] = {scope[i], acc};
    acc *= net.cardinality(scope[i]);
  }
  return out;
}

}  // namespace

void BucketTree::build(const std::vector<Var>& observed) {
  const BayesNet& net = *net_;
  const int n = net.size();
  const auto mask = mask_of(n, observed);
  position_.assign(n, -1);
  for (std::size_t i = 0; i < order_.size(); ++i) {
    const Var v = order_[i];
    if (v < 0 || v >= n || mask[v] || position_[v] >= 0)
      throw ParameterError("elimination order is not a permutation of the unobserved variables");
    position_[v] = static_cast<int>(i);
  }
  for (Var v = 0; v < n; ++v)
    if (!mask[v] && position_[v] < 0) throw ParameterError("elimination order misses '" + net.name(v) + "'");

  buckets_.assign(n, Bucket{});
  constants_.clear();
  auto earliest = [&](const std::vector<Var>& scope) {
    Var best = -1;
    for (Var u : scope)
      if (position_[u] >= 0 && (best < 0 || position_[u] < position_[best])) best = u;
    return best;
  };

  std::vector<std::vector<Var>> cluster(n);
  for (Var v = 0; v < n; ++v) {
    std::vector<Var> scope;
    for (Var p : net.parents(v))
      if (!mask[p]) scope.push_back(p);
    if (!mask[v]) scope.push_back(v);
    const Var b = earliest(scope);
    if (b < 0) {
      constants_.push_back(v);
      continue;
    }
    buckets_[b].cpts.push_back(CptInput{v, {}, {}});
    cluster[b].insert(cluster[b].end(), scope.begin(), scope.end());
  }

  width_ = 0;
  for (Var v : order_) {
    auto& c = cluster[v];
    c.push_back(v);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    width_ = std::max(width_, static_cast<int>(c.size()) - 1);
    Bucket& b = buckets_[v];
    for (Var u : c)
      if (u != v) b.separator.push_back(u);
    b.parent = earliest(b.separator);
    if (b.parent >= 0) {
      buckets_[b.parent].children.push_back(v);
      auto& pc = cluster[b.parent];
      pc.insert(pc.end(), b.separator.begin(), b.separator.end());
    }
  }
  if (width_ > options_.width_cap)
    throw WidthGuard("induced width " + std::to_string(width_) + " exceeds cap " +
                     std::to_string(options_.width_cap));

  for (Var v : order_) {
    Bucket& b = buckets_[v];
    b.cluster = cluster[v];
    b.cards.clear();
    b.size = 1;
    for (Var u : b.cluster) {
      b.cards.push_back(net.cardinality(u));
      b.size *= net.cardinality(u);
    }
    for (const auto& [u, stride] : last_fastest(b.cluster, net))
      if (u == v) b.var_stride = stride;
    for (CptInput& in : b.cpts) {
      std::vector<Var> family(net.parents(in.cpt));
      family.push_back(in.cpt);
      std::vector<std::pair<Var, int>> free;
      for (const auto& [u, stride] : last_fastest(family, net)) {
        if (mask[u])
          in.observed_strides.emplace_back(u, stride);
        else
          free.emplace_back(u, stride);
      }
      in.map = index_map(b.cluster, b.cards, free);
    }
    const auto sep = last_fastest(b.separator, net);
    b.separator_size = 1;
    for (Var u : b.separator) b.separator_size *= net.cardinality(u);
    b.separator_map = index_map(b.cluster, b.cards, sep);
  }
  for (Var v : order_) {
    Bucket& b = buckets_[v];
    for (Var c : b.children) b.child_maps.push_back(index_map(b.cluster, b.cards, last_fastest(buckets_[c].separator, net)));
  }
}

BucketTree::Pass BucketTree::upward(const Assignment& values) const {
  const BayesNet& net = *net_;
  Pass pass;
  pass.local.resize(net.size());
  pass.up.resize(net.size());
  for (Var c : constants_) {
    for (Var p : net.parents(c))
      if (!values.has(p)) throw ParameterError("no value supplied for observed variable '" + net.name(p) + "'");
    if (!values.has(c)) throw ParameterError("no value supplied for observed variable '" + net.name(c) + "'");
    const double p = net.probability(c, values.values());
    if (!(p > 0.0)) throw ZeroEvidence("evidence has zero probability (CPT of '" + net.name(c) + "')");
    pass.log_scale += std::log(p);
  }
  for (Var v : order_) {
    const Bucket& b = buckets_[v];
    Eigen::VectorXd local = Eigen::VectorXd::Ones(b.size);
    for (const CptInput& in : b.cpts) {
      int base = 0;
      for (const auto& [u, stride] : in.observed_strides) {
        if (!values.has(u)) throw ParameterError("no value supplied for observed variable '" + net.name(u) + "'");
        base += stride * values[u];
      }
      const double* table = net.cpt(in.cpt).rows.data() + base;
      for (int i = 0; i < b.size; ++i) local[i] *= table[in.map[i]];
    }
    pass.local[v] = std::move(local);
    const Eigen::VectorXd t = combine(pass, v, -1);
    Eigen::VectorXd msg = Eigen::VectorXd::Zero(b.separator_size);
    for (int i = 0; i < b.size; ++i) msg[b.separator_map[i]] += t[i];
    const double mx = msg.maxCoeff();
    if (!(mx > 0.0)) throw ZeroEvidence("evidence has zero probability");
    msg /= mx;
    pass.log_scale += std::log(mx);
    pass.up[v] = std::move(msg);
  }
  return pass;
}

Eigen::VectorXd BucketTree::combine(const Pass& pass, Var v, Var skip_child) const {
  const Bucket& b = buckets_[v];
  Eigen::VectorXd t = pass.local[v];
  for (std::size_t k = 0; k < b.children.size(); ++k) {
    if (b.children[k] == skip_child) continue;
    const Eigen::VectorXd& m = pass.up[b.children[k]];
    const auto& map = b.child_maps[k];
    for (int i = 0; i < b.size; ++i) t[i] *= m[map[i]];
  }
  return t;
}

Eigen::VectorXd BucketTree::bucket_belief(const Eigen::VectorXd& cluster_table, Var v) const {
  const Bucket& b = buckets_[v];
  const int card = net_->cardinality(v);
  Eigen::VectorXd belief = Eigen::VectorXd::Zero(card);
  for (int i = 0; i < b.size; ++i) belief[(i / b.var_stride) % card] += cluster_table[i];
  const double sum = belief.sum();
  if (!(sum > 0.0)) throw ZeroEvidence("evidence has zero probability");
  return belief / sum;
}

double BucketTree::log_evidence(const Assignment& values) const { return upward(values).log_scale; }

double BucketTree::evidence_probability(const Assignment& values) const {
  try {
    return std::exp(log_evidence(values));
  } catch (const ZeroEvidence&) {
    return 0.0;
  }
}

Eigen::VectorXd BucketTree::marginal(Var q, const Assignment& values) const {
  if (q < 0 || q >= net_->size() || position_[q] < 0) throw ParameterError("query variable is observed or unknown");
  if (buckets_[q].parent >= 0) return all_marginals(values).at(q);
  const Pass pass = upward(values);
  return bucket_belief(combine(pass, q, -1), q);
}

Marginals BucketTree::all_marginals(const Assignment& values) const {
  const Pass pass = upward(values);
  std::vector<Eigen::VectorXd> down(net_->size());
  Marginals out;
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    const Var v = *it;
    const Bucket& b = buckets_[v];
    const bool has_down = b.parent >= 0;
    for (std::size_t k = 0; k < b.children.size(); ++k) {
      const Var c = b.children[k];
      Eigen::VectorXd t = combine(pass, v, c);
      if (has_down)
        for (int i = 0; i < b.size; ++i) t[i] *= down[v][b.separator_map[i]];
      Eigen::VectorXd msg = Eigen::VectorXd::Zero(buckets_[c].separator_size);
      const auto& map = b.child_maps[k];
      for (int i = 0; i < b.size; ++i) msg[map[i]] += t[i];
      const double mx = msg.maxCoeff();
      if (!(mx > 0.0)) throw ZeroEvidence("evidence has zero probability");
      down[c] = msg / mx;
    }
    Eigen::VectorXd t = combine(pass, v, -1);
    if (has_down)
      for (int i = 0; i < b.size; ++i) t[i] *= down[v][b.separator_map[i]];
    out.emplace(v, bucket_belief(t, v));
  }
  return out;
}

double be_evidence_prob(const BayesNet& net, const Evidence& e, const EliminationOptions& options) {
  BucketTree tree(net, e.variables(), options);
  return tree.evidence_probability(Assignment(net.size(), e));
}

Distribution be_marginal(const BayesNet& net, const Evidence& e, Var q, const EliminationOptions& options) {
  BucketTree tree(net, e.variables(), options, q);
  return {q, tree.marginal(q, Assignment(net.size(), e))};
}

Marginals all_marginals(const BayesNet& net, const Evidence& e, const EliminationOptions& options) {
  BucketTree tree(net, e.variables(), options);
  return tree.all_marginals(Assignment(net.size(), e));
}

}  // namespace wcs
