#include "wcs/ibp.hpp"

#include "wcs/error.hpp"
#include "wcs/factor.hpp"

namespace wcs {

namespace {

struct Node {
  Factor factor;
  std::vector<int> edges;  // one per scope position
};

void normalize(Eigen::VectorXd& m) {
  const double s = m.sum();
  if (s > 0.0) m /= s;
}

}  // namespace

Marginals ibp_run(const BayesNet& net, const Evidence& e, int iterations) {
  if (iterations < 1) throw ParameterError("IBP needs at least one iteration");
  const Assignment observed(net.size(), e);

  std::vector<Node> factors;
  std::vector<Var> edge_var;
  std::vector<std::vector<int>> var_edges(net.size());
  for (Var v = 0; v < net.size(); ++v) {
    Factor f = factor_restrict(Factor::from_cpt(net, v), observed);
    if (f.is_scalar()) {
      if (!(f.scalar() > 0.0)) throw ZeroEvidence("evidence has zero probability (CPT of '" + net.name(v) + "')");
      continue;
    }
    Node node{std::move(f), {}};
    for (Var u : node.factor.scope()) {
      const int id = static_cast<int>(edge_var.size());
      edge_var.push_back(u);
      var_edges[u].push_back(id);
      node.edges.push_back(id);
    }
    factors.push_back(std::move(node));
  }

  const std::size_t m = edge_var.size();
  std::vector<Eigen::VectorXd> to_factor(m), to_var(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int card = net.cardinality(edge_var[i]);
    to_factor[i] = Eigen::VectorXd::Constant(card, 1.0 / card);
    to_var[i] = to_factor[i];
  }

  for (int it = 0; it < iterations; ++it) {
    for (const Node& node : factors) {
      const auto& cards = node.factor.cards();
      const auto& table = node.factor.table();
      const int k = static_cast<int>(cards.size());
      std::vector<Eigen::VectorXd> out(k);
      for (int j = 0; j < k; ++j) out[j] = Eigen::VectorXd::Zero(cards[j]);
      std::vector<int> digit(k, 0);
      for (Eigen::Index i = 0; i < table.size(); ++i) {
        for (int j = 0; j < k; ++j) {
          double w = table[i];
          for (int l = 0; l < k && w != 0.0; ++l)
            if (l != j) w *= to_factor[node.edges[l]][digit[l]];
          out[j][digit[j]] += w;
        }
        for (int d = k - 1; d >= 0; --d) {
          if (++digit[d] < cards[d]) break;
          digit[d] = 0;
        }
      }
      for (int j = 0; j < k; ++j) {
        normalize(out[j]);
        to_var[node.edges[j]] = std::move(out[j]);
      }
    }
    for (Var v = 0; v < net.size(); ++v) {
      for (int a : var_edges[v]) {
        Eigen::VectorXd msg = Eigen::VectorXd::Ones(net.cardinality(v));
        for (int b : var_edges[v])
          if (b != a) msg.array() *= to_var[b].array();
        normalize(msg);
        to_factor[a] = std::move(msg);
      }
    }
  }

  Marginals beliefs;
  for (Var v = 0; v < net.size(); ++v) {
    if (e.contains(v)) continue;
    Eigen::VectorXd b = Eigen::VectorXd::Ones(net.cardinality(v));
    for (int a : var_edges[v]) b.array() *= to_var[a].array();
    const double s = b.sum();
    if (!(s > 0.0)) throw ZeroBelief("belief of '" + net.name(v) + "' vanished");
    beliefs.emplace(v, b / s);
  }
  return beliefs;
}

}  // namespace wcs
