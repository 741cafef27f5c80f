// Shared fixtures and brute-force oracles for the test suites. Nothing here
// calls into the elimination or sampling code paths it is used to check.
#ifndef WCS_TESTS_FIXTURES_HPP
#define WCS_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <map>
#include <random>
#include <vector>

#include "wcs/model.hpp"

namespace fixtures {

using wcs::BayesNet;
using wcs::CptTable;
using wcs::Evidence;
using wcs::Var;

inline CptTable rows(std::initializer_list<std::initializer_list<double>> r) {
  CptTable t(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double x : row) t(i, j++) = x;
    ++i;
  }
  return t;
}

// X1 -> X2 -> X3, binary, value index 1 = "true".
inline BayesNet chain3() {
  BayesNet net;
  Var x1 = net.add_variable("X1", 2);
  Var x2 = net.add_variable("X2", 2);
  Var x3 = net.add_variable("X3", 2);
  net.set_cpt(x1, {}, rows({{0.4, 0.6}}));
  net.set_cpt(x2, {x1}, rows({{0.8, 0.2}, {0.3, 0.7}}));
  net.set_cpt(x3, {x2}, rows({{0.9, 0.1}, {0.1, 0.9}}));
  return net;
}

inline CptTable random_rows(int nrows, int card, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CptTable t(nrows, card);
  for (int r = 0; r < nrows; ++r) {
    for (int c = 0; c < card; ++c) t(r, c) = u(rng);
    t.row(r) /= t.row(r).sum();
  }
  return t;
}

// Builds a binary net from a parent list, with uniform-random normalized CPTs.
inline BayesNet from_parents(const std::vector<std::vector<Var>>& parents, std::uint64_t seed,
                             const std::vector<std::string>& names = {}) {
  std::mt19937_64 rng(seed);
  BayesNet net;
  for (std::size_t v = 0; v < parents.size(); ++v)
    net.add_variable(names.empty() ? "V" + std::to_string(v) : names[v], 2);
  for (std::size_t v = 0; v < parents.size(); ++v)
    net.set_cpt(static_cast<Var>(v), parents[v], random_rows(1 << parents[v].size(), 2, rng));
  return net;
}

// A -> B, A -> C, B -> D, C -> D; uniform-random CPTs under seed 7.
inline BayesNet diamond() { return from_parents({{}, {0}, {0}, {1, 2}}, 7, {"A", "B", "C", "D"}); }

// A -> C <- B.
inline BayesNet collider() { return from_parents({{}, {}, {0, 1}}, 11, {"A", "B", "C"}); }

// Random DAG over n binary variables; each node takes up to max_parents
// parents among lower indices. CPT entries drawn from [floor, 1] then
// normalized, so floor > 0 keeps the net ergodic.
inline BayesNet random_dag(int n, int max_parents, std::uint64_t seed, double floor = 0.0) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Var>> parents(n);
  for (int v = 1; v < n; ++v) {
    std::vector<Var> pool(v);
    for (int u = 0; u < v; ++u) pool[u] = u;
    std::shuffle(pool.begin(), pool.end(), rng);
    const int k = std::uniform_int_distribution<int>(0, std::min(max_parents, v))(rng);
    parents[v].assign(pool.begin(), pool.begin() + k);
    std::sort(parents[v].begin(), parents[v].end());
  }
  BayesNet net;
  for (int v = 0; v < n; ++v) net.add_variable("N" + std::to_string(v), 2);
  std::uniform_real_distribution<double> u(floor, 1.0);
  for (int v = 0; v < n; ++v) {
    CptTable t(1 << parents[v].size(), 2);
    for (int r = 0; r < t.rows(); ++r) {
      for (int c = 0; c < 2; ++c) t(r, c) = u(rng);
      t.row(r) /= t.row(r).sum();
    }
    net.set_cpt(v, parents[v], t);
  }
  return net;
}

// Joint table over all configurations, first variable slowest, computed by
// direct CPT lookups.
inline std::vector<double> joint_table(const BayesNet& net) {
  const int n = net.size();
  std::vector<int> cards = net.cardinalities();
  long total = 1;
  for (int c : cards) total *= c;
  std::vector<double> joint(total);
  std::vector<int> x(n, 0);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    for (int v = n - 1; v >= 0; --v) {
      x[v] = static_cast<int>(rem % cards[v]);
      rem /= cards[v];
    }
    double p = 1.0;
    for (int v = 0; v < n; ++v) {
      const auto& cpt = net.cpt(v);
      int row = 0;
      for (Var q : cpt.parents) row = row * cards[q] + x[q];
      p *= cpt.rows(row, x[v]);
    }
    joint[idx] = p;
  }
  return joint;
}

template <typename F>
inline void for_each_config(const BayesNet& net, F&& f) {
  const auto joint = joint_table(net);
  const int n = net.size();
  std::vector<int> x(n, 0);
  for (long idx = 0; idx < static_cast<long>(joint.size()); ++idx) {
    long rem = idx;
    for (int v = n - 1; v >= 0; --v) {
      x[v] = static_cast<int>(rem % net.cardinality(v));
      rem /= net.cardinality(v);
    }
    f(x, joint[idx]);
  }
}

inline bool consistent(const std::vector<int>& x, const Evidence& e) {
  for (const auto& [v, val] : e)
    if (x[v] != val) return false;
  return true;
}

inline double enum_evidence_prob(const BayesNet& net, const Evidence& e) {
  double z = 0.0;
  for_each_config(net, [&](const std::vector<int>& x, double p) {
    if (consistent(x, e)) z += p;
  });
  return z;
}

// Posterior marginals of all unobserved variables by enumeration.
inline std::map<Var, std::vector<double>> enum_marginals(const BayesNet& net, const Evidence& e) {
  std::map<Var, std::vector<double>> out;
  for (Var v = 0; v < net.size(); ++v)
    if (!e.contains(v)) out[v].assign(net.cardinality(v), 0.0);
  double z = 0.0;
  for_each_config(net, [&](const std::vector<int>& x, double p) {
    if (!consistent(x, e)) return;
    z += p;
    for (auto& [v, probs] : out) probs[x[v]] += p;
  });
  for (auto& [v, probs] : out)
    for (double& q : probs) q /= z;
  return out;
}

// Forward sample of the full net, used to draw evidence with P(e) > 0.
inline std::vector<int> forward_sample(const BayesNet& net, std::mt19937_64& rng) {
  std::vector<int> x(net.size(), 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Var v = 0; v < net.size(); ++v) {  // random_dag is index-topological
    const auto& cpt = net.cpt(v);
    int row = 0;
    for (Var q : cpt.parents) row = row * net.cardinality(q) + x[q];
    double r = u(rng), acc = 0.0;
    x[v] = net.cardinality(v) - 1;
    for (int k = 0; k < net.cardinality(v); ++k) {
      acc += cpt.rows(row, k);
      if (r < acc) {
        x[v] = k;
        break;
      }
    }
  }
  return x;
}

inline Evidence random_evidence(const BayesNet& net, int count, std::mt19937_64& rng) {
  const auto x = forward_sample(net, rng);
  std::vector<Var> vars(net.size());
  for (Var v = 0; v < net.size(); ++v) vars[v] = v;
  std::shuffle(vars.begin(), vars.end(), rng);
  Evidence e;
  for (int i = 0; i < count && i < net.size(); ++i) e.set(vars[i], x[vars[i]]);
  return e;
}

// Up to two parents per node, each from a different connected component, so
// the skeleton stays a forest.
inline BayesNet random_polytree(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Var>> parents(n);
  std::vector<int> comp(n);
  for (int v = 0; v < n; ++v) comp[v] = v;
  auto find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (int v = 1; v < n; ++v) {
    const int want = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int t = 0; t < 6 && static_cast<int>(parents[v].size()) < want; ++t) {
      const int p = std::uniform_int_distribution<int>(0, v - 1)(rng);
      if (find(p) == find(v)) continue;
      comp[find(p)] = find(v);
      parents[v].push_back(p);
    }
    std::sort(parents[v].begin(), parents[v].end());
  }
  return from_parents(parents, seed + 100);
}

}  // namespace fixtures

#endif  // WCS_TESTS_FIXTURES_HPP
