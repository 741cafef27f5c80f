#include "wcs/model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace wcs {

Var BayesNet::add_variable(std::string name, int cardinality) {
  if (cardinality < 1) throw ModelError("variable '" + name + "' has cardinality < 1");
  if (by_name_.count(name)) throw ModelError("duplicate variable name '" + name + "'");
  const Var v = size();
  by_name_.emplace(name, v);
  names_.push_back(std::move(name));
  cards_.push_back(cardinality);
  Cpt cpt;
  cpt.child = v;
  cpt.rows = CptTable::Constant(1, cardinality, 1.0 / cardinality);
  cpts_.push_back(std::move(cpt));
  children_.emplace_back();
  return v;
}

void BayesNet::set_cpt(Var child, std::vector<Var> parents, CptTable rows) {
  if (child < 0 || child >= size()) throw ModelError("CPT for unknown variable");
  for (Var p : parents) {
    if (p < 0 || p >= size()) throw ModelError("CPT of '" + names_[child] + "' names unknown parent");
    if (p == child) throw ModelError("variable '" + names_[child] + "' lists itself as parent");
  }
  for (Var p : cpts_[child].parents) {
    auto& ch = children_[p];
    ch.erase(std::remove(ch.begin(), ch.end(), child), ch.end());
  }
  for (Var p : parents) {
    auto& ch = children_[p];
    ch.insert(std::lower_bound(ch.begin(), ch.end(), child), child);
  }
  cpts_[child].parents = std::move(parents);
  cpts_[child].rows = std::move(rows);
}

int BayesNet::max_cardinality() const {
  return cards_.empty() ? 0 : *std::max_element(cards_.begin(), cards_.end());
}

Var BayesNet::index_of(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw ModelError("unknown variable '" + name + "'");
  return it->second;
}

int BayesNet::row_index(Var v, const std::vector<int>& values) const {
  int row = 0;
  for (Var p : cpts_[v].parents) row = row * cards_[p] + values[p];
  return row;
}

int BayesNet::row_count(Var v) const {
  int rows = 1;
  for (Var p : cpts_[v].parents) rows *= cards_[p];
  return rows;
}

std::vector<Var> Evidence::variables() const {
  std::vector<Var> out;
  out.reserve(values_.size());
  for (const auto& [v, value] : values_) out.push_back(v);
  return out;
}

Assignment::Assignment(int n, const Evidence& e) : values_(n, kUnassigned) {
  for (const auto& [v, value] : e) values_[v] = value;
}

bool Assignment::is_full() const {
  return std::none_of(values_.begin(), values_.end(), [](int x) { return x == kUnassigned; });
}

double joint_probability(const BayesNet& net, const Assignment& a) {
  if (a.size() != net.size() || !a.is_full())
    throw IncompleteAssignment("joint probability requires a full assignment");
  double p = 1.0;
  for (Var v = 0; v < net.size(); ++v) {
    if (a[v] < 0 || a[v] >= net.cardinality(v))
      throw IncompleteAssignment("value out of range for '" + net.name(v) + "'");
    p *= net.probability(v, a.values());
  }
  return p;
}

std::vector<Var> markov_blanket(const BayesNet& net, Var v) {
  std::vector<Var> out(net.parents(v).begin(), net.parents(v).end());
  for (Var c : net.children(v)) {
    out.push_back(c);
    for (Var cp : net.parents(c)) out.push_back(cp);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), v), out.end());
  return out;
}

std::vector<Var> topological_order(const BayesNet& net) {
  const int n = net.size();
  std::vector<int> indegree(n);
  for (Var v = 0; v < n; ++v) indegree[v] = static_cast<int>(net.parents(v).size());
  std::priority_queue<Var, std::vector<Var>, std::greater<>> ready;
  for (Var v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<Var> order;
  order.reserve(n);
  while (!ready.empty()) {
    Var v = ready.top();
    ready.pop();
    order.push_back(v);
    for (Var c : net.children(v))
      if (--indegree[c] == 0) ready.push(c);
  }
  if (static_cast<int>(order.size()) != n) throw ModelError("parent relation contains a cycle");
  return order;
}

std::vector<Diagnostic> validate(const BayesNet& net, double tolerance) {
  std::vector<Diagnostic> out;
  const int n = net.size();

  // Cycle detection on the parent relation.
  std::vector<int> indegree(n);
  for (Var v = 0; v < n; ++v) indegree[v] = static_cast<int>(net.parents(v).size());
  std::vector<Var> stack;
  for (Var v = 0; v < n; ++v)
    if (indegree[v] == 0) stack.push_back(v);
  int seen = 0;
  while (!stack.empty()) {
    Var v = stack.back();
    stack.pop_back();
    ++seen;
    for (Var c : net.children(v))
      if (--indegree[c] == 0) stack.push_back(c);
  }
  if (seen != n) {
    std::ostringstream msg;
    msg << "parent relation is cyclic; variables on or after a cycle:";
    for (Var v = 0; v < n; ++v)
      if (indegree[v] > 0) msg << ' ' << net.name(v);
    out.push_back({Diagnostic::Kind::Cycle, -1, -1, msg.str()});
  }

  for (Var v = 0; v < n; ++v) {
    const Cpt& cpt = net.cpt(v);
    const int rows = net.row_count(v);
    if (cpt.rows.rows() != rows || cpt.rows.cols() != net.cardinality(v)) {
      std::ostringstream msg;
      msg << "CPT of '" << net.name(v) << "' is " << cpt.rows.rows() << "x" << cpt.rows.cols()
          << ", expected " << rows << "x" << net.cardinality(v);
      out.push_back({Diagnostic::Kind::Cardinality, v, -1, msg.str()});
      continue;
    }
    for (int r = 0; r < rows; ++r) {
      if ((cpt.rows.row(r).array() < 0.0).any() || !cpt.rows.row(r).allFinite()) {
        out.push_back({Diagnostic::Kind::Negative, v, r,
                       "CPT of '" + net.name(v) + "' row " + std::to_string(r) +
                           " has a negative or non-finite entry"});
        continue;
      }
      const double sum = cpt.rows.row(r).sum();
      if (std::abs(sum - 1.0) > tolerance) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "CPT of '" << net.name(v) << "' row " << r << " sums to " << sum;
        out.push_back({Diagnostic::Kind::Normalization, v, r, msg.str()});
      }
    }
  }
  return out;
}

std::vector<Diagnostic> validate(const BayesNet& net, const Evidence& e) {
  std::vector<Diagnostic> out;
  for (const auto& [v, value] : e) {
    if (v < 0 || v >= net.size()) {
      out.push_back({Diagnostic::Kind::Evidence, v, -1, "evidence on unknown variable"});
    } else if (value < 0 || value >= net.cardinality(v)) {
      out.push_back({Diagnostic::Kind::Evidence, v, -1,
                     "evidence value " + std::to_string(value) + " out of range for '" +
                         net.name(v) + "'"});
    }
  }
  return out;
}

}  // namespace wcs
