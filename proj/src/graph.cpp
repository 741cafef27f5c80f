#include "wcs/graph.hpp"

#include <algorithm>
#include <bit>
#include <functional>

namespace wcs {

namespace {

inline int popcount_and(const std::uint64_t* a, const std::uint64_t* b, int words) {
  int c = 0;
  for (int k = 0; k < words; ++k) c += std::popcount(a[k] & b[k]);
  return c;
}

inline int popcount_row(const std::uint64_t* a, int words) {
  int c = 0;
  for (int k = 0; k < words; ++k) c += std::popcount(a[k]);
  return c;
}

template <typename F>
inline void for_each_bit(const std::uint64_t* a, int words, F&& f) {
  for (int k = 0; k < words; ++k) {
    std::uint64_t w = a[k];
    while (w) {
      const int b = std::countr_zero(w);
      f(k * 64 + b);
      w &= w - 1;
    }
  }
}

// Fill edges that eliminating v would add.
int fill_in(const UGraph& g, int v) {
  const auto* nv = g.row(v);
  const int deg = popcount_row(nv, g.words());
  long long present = 0;
  for_each_bit(nv, g.words(), [&](int u) { present += popcount_and(g.row(u), nv, g.words()); });
  return static_cast<int>(static_cast<long long>(deg) * (deg - 1) / 2 - present / 2);
}

// Connects all neighbours of v pairwise, then isolates v.
void eliminate(UGraph& g, int v) {
  const int words = g.words();
  std::vector<std::uint64_t> nv(g.row(v), g.row(v) + words);
  for_each_bit(nv.data(), words, [&](int u) {
    auto* ru = g.row(u);
    for (int k = 0; k < words; ++k) ru[k] |= nv[k];
    ru[u / 64] &= ~(std::uint64_t{1} << (u % 64));
  });
  g.isolate(v);
}

struct MinFillResult {
  std::vector<int> elimination;
  int width = 0;
};

MinFillResult run_min_fill(UGraph g, int stop_above, int last = -1) {
  const int n = g.size();
  const int words = g.words();
  std::vector<int> fill(n), degree(n);
  std::vector<char> done(n, 0);
  for (int v = 0; v < n; ++v) {
    fill[v] = fill_in(g, v);
    degree[v] = g.degree(v);
  }
  MinFillResult out;
  out.elimination.reserve(n);
  std::vector<char> dirty(n, 0);
  std::vector<std::uint64_t> touched(words);
  for (int step = 0; step < n; ++step) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (done[v] || (v == last && step + 1 < n)) continue;
      if (best < 0 || fill[v] < fill[best] || (fill[v] == fill[best] && degree[v] < degree[best]))
        best = v;
    }
    out.width = std::max(out.width, degree[best]);
    out.elimination.push_back(best);
    if (out.width > stop_above) return out;

    // Nodes whose fill may change: neighbours of best and their neighbours.
    std::fill(touched.begin(), touched.end(), 0);
    const auto* nb = g.row(best);
    for_each_bit(nb, words, [&](int u) {
      const auto* ru = g.row(u);
      for (int k = 0; k < words; ++k) touched[k] |= ru[k] | nb[k];
    });
    eliminate(g, best);
    done[best] = 1;
    for_each_bit(touched.data(), words, [&](int u) {
      if (!done[u]) {
        fill[u] = fill_in(g, u);
        degree[u] = g.degree(u);
      }
    });
  }
  return out;
}

}  // namespace

UGraph::UGraph(int n) : n_(n), words_((n + 63) / 64), bits_(static_cast<std::size_t>(n) * words_, 0) {}

void UGraph::add_edge(int u, int v) {
  if (u == v) return;
  row(u)[v / 64] |= std::uint64_t{1} << (v % 64);
  row(v)[u / 64] |= std::uint64_t{1} << (u % 64);
}

void UGraph::remove_edge(int u, int v) {
  row(u)[v / 64] &= ~(std::uint64_t{1} << (v % 64));
  row(v)[u / 64] &= ~(std::uint64_t{1} << (u % 64));
}

void UGraph::isolate(int v) {
  for (int u : neighbors(v)) remove_edge(u, v);
}

bool UGraph::adjacent(int u, int v) const { return (row(u)[v / 64] >> (v % 64)) & 1U; }

int UGraph::degree(int v) const { return popcount_row(row(v), words_); }

std::vector<int> UGraph::neighbors(int v) const {
  std::vector<int> out;
  for_each_bit(row(v), words_, [&](int u) { out.push_back(u); });
  return out;
}

std::vector<std::pair<int, int>> UGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n_; ++u)
    for_each_bit(row(u), words_, [&](int v) {
      if (u < v) out.emplace_back(u, v);
    });
  return out;
}

std::size_t UGraph::edge_count() const {
  std::size_t c = 0;
  for (int u = 0; u < n_; ++u) c += degree(u);
  return c / 2;
}

UGraph moralize(const BayesNet& net, const std::vector<bool>& removed) {
  UGraph g(net.size());
  for (Var v = 0; v < net.size(); ++v) {
    const auto& pa = net.parents(v);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      g.add_edge(v, pa[i]);
      for (std::size_t j = i + 1; j < pa.size(); ++j) g.add_edge(pa[i], pa[j]);
    }
  }
  for (Var v = 0; v < net.size(); ++v)
    if (v < static_cast<Var>(removed.size()) && removed[v]) g.isolate(v);
  return g;
}

UGraph moralize(const BayesNet& net, const std::vector<Var>& removed) {
  std::vector<bool> mask(net.size(), false);
  for (Var v : removed) mask[v] = true;
  return moralize(net, mask);
}

UGraph skeleton(const BayesNet& net) {
  UGraph g(net.size());
  for (Var v = 0; v < net.size(); ++v)
    for (Var p : net.parents(v)) g.add_edge(v, p);
  return g;
}

int induced_width(const UGraph& g, const std::vector<int>& sequence) {
  UGraph h = g;
  const int words = h.words();
  std::vector<std::uint64_t> earlier(words, 0);
  for (int v : sequence) earlier[v / 64] |= std::uint64_t{1} << (v % 64);
  int width = 0;
  std::vector<std::uint64_t> parents(words);
  for (auto it = sequence.rbegin(); it != sequence.rend(); ++it) {
    const int v = *it;
    earlier[v / 64] &= ~(std::uint64_t{1} << (v % 64));
    for (int k = 0; k < words; ++k) parents[k] = h.row(v)[k] & earlier[k];
    width = std::max(width, popcount_row(parents.data(), words));
    for_each_bit(parents.data(), words, [&](int u) {
      auto* ru = h.row(u);
      for (int k = 0; k < words; ++k) ru[k] |= parents[k];
      ru[u / 64] &= ~(std::uint64_t{1} << (u % 64));
    });
  }
  return width;
}

int induced_width(const UGraph& g, const Ordering& o) { return induced_width(g, o.sequence); }

Ordering min_fill_ordering(const UGraph& g, int last) {
  MinFillResult r = run_min_fill(g, INT_MAX, last);
  Ordering o;
  o.sequence.assign(r.elimination.rbegin(), r.elimination.rend());
  o.width = r.width;
  return o;
}

int min_fill_width(UGraph g, int stop_above) { return run_min_fill(std::move(g), stop_above).width; }

int adjusted_width(const BayesNet& net, const std::vector<Var>& cutset,
                   const std::vector<Var>& evidence_vars) {
  std::vector<Var> removed(cutset);
  removed.insert(removed.end(), evidence_vars.begin(), evidence_vars.end());
  return min_fill_width(moralize(net, removed));
}

WidthEstimator::WidthEstimator(const BayesNet& net) : moral_(moralize(net)) {}

UGraph WidthEstimator::induced(const std::vector<bool>& removed) const {
  UGraph g = moral_;
  const int words = g.words();
  std::vector<std::uint64_t> keep(words, 0);
  for (int v = 0; v < g.size(); ++v)
    if (!(v < static_cast<int>(removed.size()) && removed[v])) keep[v / 64] |= std::uint64_t{1} << (v % 64);
  for (int v = 0; v < g.size(); ++v) {
    auto* r = g.row(v);
    const bool kept = (keep[v / 64] >> (v % 64)) & 1U;
    for (int k = 0; k < words; ++k) r[k] = kept ? (r[k] & keep[k]) : 0;
  }
  return g;
}

int WidthEstimator::width(const std::vector<bool>& removed) const {
  return min_fill_width(induced(removed));
}

bool WidthEstimator::within(const std::vector<bool>& removed, int bound) const {
  return min_fill_width(induced(removed), bound) <= bound;
}

bool is_forest(const UGraph& g) {
  // A graph is a forest iff |E| = |V| - #components.
  const int n = g.size();
  std::vector<int> comp(n, -1);
  int components = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    ++components;
    comp[s] = s;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : g.neighbors(v))
        if (comp[u] < 0) {
          comp[u] = s;
          stack.push_back(u);
        }
    }
  }
  return g.edge_count() == static_cast<std::size_t>(n - components);
}

namespace {

// Marks every node incident to a non-bridge edge, i.e. every node on a cycle.
std::vector<char> nodes_on_cycles(const UGraph& g) {
  const int n = g.size();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<char> on_cycle(n, 0);
  int timer = 0;
  std::function<void(int, int)> dfs = [&](int v, int parent) {
    disc[v] = low[v] = timer++;
    for (int u : g.neighbors(v)) {
      if (u == parent) continue;
      if (disc[u] >= 0) {
        low[v] = std::min(low[v], disc[u]);
      } else {
        dfs(u, v);
        low[v] = std::min(low[v], low[u]);
        if (low[u] <= disc[v]) on_cycle[u] = on_cycle[v] = 1;
      }
    }
  };
  for (int v = 0; v < n; ++v)
    if (disc[v] < 0) dfs(v, -1);
  return on_cycle;
}

}  // namespace

std::vector<Var> loop_cutset(const BayesNet& net, const std::vector<Var>& exclude) {
  UGraph g = skeleton(net);
  for (Var v : exclude) g.isolate(v);
  std::vector<Var> cutset;
  while (!is_forest(g)) {
    const auto on_cycle = nodes_on_cycles(g);
    int best = -1;
    for (int v = 0; v < g.size(); ++v) {
      if (!on_cycle[v]) continue;
      if (best < 0 || g.degree(v) > g.degree(best)) best = v;
    }
    cutset.push_back(best);
    g.isolate(best);
  }
  std::sort(cutset.begin(), cutset.end());
  return cutset;
}

}  // namespace wcs
