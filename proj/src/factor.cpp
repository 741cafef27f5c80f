#include "wcs/factor.hpp"

#include <algorithm>

namespace wcs {

namespace {

std::vector<Eigen::Index> strides_of(const std::vector<int>& cards) {
  std::vector<Eigen::Index> s(cards.size());
  Eigen::Index acc = 1;
  for (std::size_t i = cards.size(); i-- > 0;) {
    s[i] = acc;
    acc *= cards[i];
  }
  return s;
}

Eigen::Index position(const std::vector<Var>& scope, Var v) {
  auto it = std::find(scope.begin(), scope.end(), v);
  return it == scope.end() ? -1 : it - scope.begin();
}

// Odometer over `cards` (last fastest), tracking two linear indices that move
// by the given per-digit strides.
template <typename Body>
void odometer(const std::vector<int>& cards, const std::vector<Eigen::Index>& sa,
              const std::vector<Eigen::Index>& sb, Eigen::Index total, Eigen::Index a0,
              Eigen::Index b0, Body&& body) {
  const int k = static_cast<int>(cards.size());
  std::vector<int> count(k, 0);
  Eigen::Index a = a0, b = b0;
  for (Eigen::Index i = 0; i < total; ++i) {
    body(i, a, b);
    for (int d = k - 1; d >= 0; --d) {
      ++count[d];
      a += sa[d];
      b += sb[d];
      if (count[d] < cards[d]) break;
      a -= sa[d] * cards[d];
      b -= sb[d] * cards[d];
      count[d] = 0;
    }
  }
}

}  // namespace

Factor::Factor(std::vector<Var> scope, std::vector<int> cards, Eigen::VectorXd table)
    : scope_(std::move(scope)), cards_(std::move(cards)), table_(std::move(table)) {
  Eigen::Index expected = 1;
  for (int c : cards_) expected *= c;
  if (scope_.size() != cards_.size() || table_.size() != expected)
    throw ParameterError("factor table size does not match its scope");
}

Factor Factor::constant(double value) {
  Factor f;
  f.table_(0) = value;
  return f;
}

Factor Factor::from_cpt(const BayesNet& net, Var child) {
  const Cpt& cpt = net.cpt(child);
  std::vector<Var> scope(cpt.parents);
  scope.push_back(child);
  std::vector<int> cards;
  cards.reserve(scope.size());
  for (Var v : scope) cards.push_back(net.cardinality(v));
  // Row-major storage already matches "last variable fastest".
  Eigen::VectorXd table = Eigen::Map<const Eigen::VectorXd>(cpt.rows.data(), cpt.rows.size());
  return Factor(std::move(scope), std::move(cards), std::move(table));
}

bool Factor::contains(Var v) const { return position(scope_, v) >= 0; }

double Factor::at(const std::vector<int>& values) const {
  Eigen::Index idx = 0;
  for (std::size_t i = 0; i < scope_.size(); ++i) idx = idx * cards_[i] + values[scope_[i]];
  return table_(idx);
}

Factor factor_product(const Factor& f, const Factor& g) {
  if (f.is_scalar()) {
    Factor out = g;
    out.table() *= f.scalar();
    return out;
  }
  if (g.is_scalar()) {
    Factor out = f;
    out.table() *= g.scalar();
    return out;
  }
  std::vector<Var> scope(f.scope());
  std::vector<int> cards(f.cards());
  for (std::size_t i = 0; i < g.scope().size(); ++i) {
    if (!f.contains(g.scope()[i])) {
      scope.push_back(g.scope()[i]);
      cards.push_back(g.cards()[i]);
    }
  }
  const auto fs = strides_of(f.cards());
  const auto gs = strides_of(g.cards());
  std::vector<Eigen::Index> sf(scope.size(), 0), sg(scope.size(), 0);
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (auto p = position(f.scope(), scope[i]); p >= 0) sf[i] = fs[p];
    if (auto p = position(g.scope(), scope[i]); p >= 0) sg[i] = gs[p];
  }
  Eigen::Index total = 1;
  for (int c : cards) total *= c;
  Eigen::VectorXd table(total);
  const double* ft = f.table().data();
  const double* gt = g.table().data();
  odometer(cards, sf, sg, total, 0, 0,
           [&](Eigen::Index i, Eigen::Index a, Eigen::Index b) { table[i] = ft[a] * gt[b]; });
  return Factor(std::move(scope), std::move(cards), std::move(table));
}

Factor factor_project(const Factor& f, const std::vector<Var>& keep) {
  std::vector<Var> scope;
  std::vector<int> cards;
  for (std::size_t i = 0; i < f.scope().size(); ++i) {
    if (std::find(keep.begin(), keep.end(), f.scope()[i]) != keep.end()) {
      scope.push_back(f.scope()[i]);
      cards.push_back(f.cards()[i]);
    }
  }
  if (scope.size() == f.scope().size()) return f;
  const auto os = strides_of(cards);
  std::vector<Eigen::Index> so(f.scope().size(), 0), none(f.scope().size(), 0);
  for (std::size_t i = 0; i < f.scope().size(); ++i)
    if (auto p = position(scope, f.scope()[i]); p >= 0) so[i] = os[p];
  Eigen::Index total = 1;
  for (int c : cards) total *= c;
  Eigen::VectorXd table = Eigen::VectorXd::Zero(total);
  const double* ft = f.table().data();
  odometer(f.cards(), so, none, f.size(), 0, 0,
           [&](Eigen::Index i, Eigen::Index a, Eigen::Index) { table[a] += ft[i]; });
  return Factor(std::move(scope), std::move(cards), std::move(table));
}

Factor factor_sum_out(const Factor& f, Var v) {
  if (!f.contains(v)) throw ParameterError("sum-out variable not in factor scope");
  std::vector<Var> keep;
  for (Var u : f.scope())
    if (u != v) keep.push_back(u);
  return factor_project(f, keep);
}

Factor factor_restrict(const Factor& f, const Assignment& values) {
  const auto fs = strides_of(f.cards());
  std::vector<Var> scope;
  std::vector<int> cards;
  std::vector<Eigen::Index> sf;
  Eigen::Index base = 0;
  for (std::size_t i = 0; i < f.scope().size(); ++i) {
    const Var v = f.scope()[i];
    if (v < values.size() && values.has(v)) {
      base += fs[i] * values[v];
    } else {
      scope.push_back(v);
      cards.push_back(f.cards()[i]);
      sf.push_back(fs[i]);
    }
  }
  if (scope.size() == f.scope().size()) return f;
  Eigen::Index total = 1;
  for (int c : cards) total *= c;
  Eigen::VectorXd table(total);
  const double* ft = f.table().data();
  std::vector<Eigen::Index> none(scope.size(), 0);
  odometer(cards, sf, none, total, base, 0,
           [&](Eigen::Index i, Eigen::Index a, Eigen::Index) { table[i] = ft[a]; });
  return Factor(std::move(scope), std::move(cards), std::move(table));
}

}  // namespace wcs
