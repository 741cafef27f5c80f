#include "wcs/bench.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "wcs/error.hpp"

namespace wcs {

namespace {

CptTable random_rows(int rows, int card, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CptTable t(rows, card);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < card; ++c) t(r, c) = u(rng);
    t.row(r) /= t.row(r).sum();
  }
  return t;
}

CptTable uniform_prior(int card) { return CptTable::Constant(1, card, 1.0 / card); }

// p distinct values from [0, range), sorted.
std::vector<Var> choose(int range, int p, std::mt19937_64& rng) {
  std::vector<Var> pool(range);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < p; ++i) {
    std::uniform_int_distribution<int> pick(i, range - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(p);
  std::sort(pool.begin(), pool.end());
  return pool;
}

void set_random_cpt(BayesNet& net, Var v, std::vector<Var> parents, std::mt19937_64& rng) {
  int rows = 1;
  for (Var p : parents) rows *= net.cardinality(p);
  net.set_cpt(v, std::move(parents), random_rows(rows, net.cardinality(v), rng));
}

}  // namespace

BayesNet gen_random(int n, int roots, int parents, std::uint64_t seed) {
  if (n < 1 || roots < 1 || roots > n) throw ParameterError("gen_random needs 1 <= roots <= n");
  if (roots < n && parents < 1) throw ParameterError("gen_random needs p >= 1");
  if (roots < n && parents > roots) throw ParameterError("p exceeds the variables available as parents");
  std::mt19937_64 rng(seed);
  BayesNet net;
  for (int v = 0; v < n; ++v) net.add_variable("X" + std::to_string(v), 2);
  for (Var v = 0; v < roots; ++v) net.set_cpt(v, {}, uniform_prior(2));
  for (Var v = roots; v < n; ++v) set_random_cpt(net, v, choose(v, parents, rng), rng);
  return net;
}

BayesNet gen_twolayer(int roots, int n, int parents, std::uint64_t seed) {
  if (roots < 1 || roots >= n) throw ParameterError("gen_twolayer needs 1 <= roots < n");
  if (parents < 1 || parents > roots) throw ParameterError("gen_twolayer needs 1 <= p <= roots");
  std::mt19937_64 rng(seed);
  BayesNet net;
  for (int v = 0; v < n; ++v) net.add_variable((v < roots ? "R" : "L") + std::to_string(v < roots ? v : v - roots), 2);
  for (Var v = 0; v < roots; ++v) net.set_cpt(v, {}, uniform_prior(2));
  for (Var v = roots; v < n; ++v) set_random_cpt(net, v, choose(roots, parents, rng), rng);
  return net;
}

BayesNet gen_grid(int rows, int cols, std::uint64_t seed, bool diagonal) {
  if (rows < 1 || cols < 1) throw ParameterError("gen_grid needs rows, cols >= 1");
  std::mt19937_64 rng(seed);
  BayesNet net;
  auto id = [cols](int i, int j) { return i * cols + j; };
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) net.add_variable("G" + std::to_string(i) + "_" + std::to_string(j), 2);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      std::vector<Var> parents;
      if (diagonal && i > 0 && j > 0) parents.push_back(id(i - 1, j - 1));
      if (i > 0) parents.push_back(id(i - 1, j));
      if (j > 0) parents.push_back(id(i, j - 1));
      std::sort(parents.begin(), parents.end());
      set_random_cpt(net, id(i, j), std::move(parents), rng);
    }
  }
  return net;
}

ParityMatrix random_parity_matrix(int k, std::uint64_t seed) {
  if (k < 3) throw ParameterError("coding networks need k >= 3");
  std::mt19937_64 rng(seed);
  ParityMatrix h(k);
  for (auto& row : h) {
    const auto c = choose(k, 3, rng);
    row = {c[0], c[1], c[2]};
  }
  return h;
}

ParityMatrix read_parity_matrix(std::istream& in, int k) {
  ParityMatrix h;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<long> cols;
    long c;
    while (ss >> c) cols.push_back(c);
    if (!ss.eof()) throw FormatError("parity matrix line " + std::to_string(lineno) + ": expected integers");
    if (cols.empty()) continue;
    if (cols.size() != 3) throw FormatError("parity matrix line " + std::to_string(lineno) + ": expected 3 columns");
    for (long x : cols)
      if (x < 0 || x >= k)
        throw FormatError("parity matrix line " + std::to_string(lineno) + ": column " + std::to_string(x) +
                          " out of range");
    if (cols[0] == cols[1] || cols[0] == cols[2] || cols[1] == cols[2])
      throw FormatError("parity matrix line " + std::to_string(lineno) + ": repeated column");
    std::array<int, 3> row{static_cast<int>(cols[0]), static_cast<int>(cols[1]), static_cast<int>(cols[2])};
    std::sort(row.begin(), row.end());
    h.push_back(row);
  }
  return h;
}

BayesNet gen_coding(int k, std::uint64_t seed, double flip) { return gen_coding(k, random_parity_matrix(k, seed), flip); }

BayesNet gen_coding(int k, const ParityMatrix& h, double flip) {
  if (k < 3) throw ParameterError("coding networks need k >= 3");
  if (!(flip >= 0.0 && flip <= 1.0)) throw ParameterError("flip must be a probability");
  const int m = static_cast<int>(h.size());
  BayesNet net;
  for (int i = 0; i < k; ++i) net.add_variable("U" + std::to_string(i), 2);
  for (int i = 0; i < m; ++i) net.add_variable("P" + std::to_string(i), 2);
  for (int i = 0; i < k; ++i) net.add_variable("YU" + std::to_string(i), 2);
  for (int i = 0; i < m; ++i) net.add_variable("YP" + std::to_string(i), 2);
  for (Var v = 0; v < k; ++v) net.set_cpt(v, {}, uniform_prior(2));
  for (int i = 0; i < m; ++i) {
    CptTable xor3(8, 2);
    for (int r = 0; r < 8; ++r) {
      const int parity = ((r >> 2) ^ (r >> 1) ^ r) & 1;
      xor3(r, 0) = parity == 0 ? 1.0 : 0.0;
      xor3(r, 1) = parity == 1 ? 1.0 : 0.0;
    }
    for (int c : h[i])
      if (c < 0 || c >= k) throw ParameterError("parity matrix column out of range");
    net.set_cpt(k + i, {h[i][0], h[i][1], h[i][2]}, xor3);
  }
  CptTable channel(2, 2);
  channel << 1.0 - flip, flip, flip, 1.0 - flip;
  for (int i = 0; i < k + m; ++i) net.set_cpt(k + m + i, {i}, channel);
  return net;
}

EvidencePolicy parse_evidence_policy(const std::string& s) {
  if (s == "leaves") return EvidencePolicy::Leaves;
  if (s == "channel") return EvidencePolicy::Channel;
  if (s == "any") return EvidencePolicy::Any;
  throw ParameterError("unknown evidence policy '" + s + "'");
}

std::vector<int> forward_sample(const BayesNet& net, std::mt19937_64& rng) {
  std::vector<int> x(net.size(), kUnassigned);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Var v : topological_order(net)) {
    const auto row = net.cpt(v).rows.row(net.row_index(v, x));
    double r = u(rng) * row.sum();
    int value = net.cardinality(v) - 1;
    for (int c = 0; c < net.cardinality(v); ++c) {
      if (r < row(c)) {
        value = c;
        break;
      }
      r -= row(c);
    }
    while (row(value) <= 0.0 && value > 0) --value;
    x[v] = value;
  }
  return x;
}

Evidence gen_evidence(const BayesNet& net, int count, EvidencePolicy policy, std::uint64_t seed) {
  if (count < 0) throw ParameterError("evidence count must be >= 0");
  if (count == 0) return {};
  std::vector<Var> eligible;
  for (Var v = 0; v < net.size(); ++v) {
    const bool leaf = net.children(v).empty();
    if (policy == EvidencePolicy::Any || (leaf && (policy == EvidencePolicy::Leaves || net.parents(v).size() == 1)))
      eligible.push_back(v);
  }
  if (eligible.empty()) throw ParameterError("no variable is eligible for evidence under this policy");
  if (count > static_cast<int>(eligible.size()))
    throw ParameterError("requested " + std::to_string(count) + " evidence variables but only " +
                         std::to_string(eligible.size()) + " are eligible");
  std::mt19937_64 rng(seed);
  std::vector<Var> chosen;
  for (int i : choose(static_cast<int>(eligible.size()), count, rng)) chosen.push_back(eligible[i]);
  const auto x = forward_sample(net, rng);
  Evidence e;
  for (Var v : chosen) e.set(v, x[v]);
  return e;
}

}  // namespace wcs
