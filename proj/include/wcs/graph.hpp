#ifndef WCS_GRAPH_HPP
#define WCS_GRAPH_HPP

#include <climits>
#include <cstdint>
#include <utility>
#include <vector>

#include "wcs/model.hpp"

namespace wcs {

/// Undirected simple graph on nodes 0..n-1, stored as adjacency bitsets.
/// Deleting a node keeps its index and drops its incident edges.
class UGraph {
 public:
  UGraph() = default;
  explicit UGraph(int n);

  int size() const { return n_; }
  void add_edge(int u, int v);
  void remove_edge(int u, int v);
  void isolate(int v);
  bool adjacent(int u, int v) const;
  int degree(int v) const;
  std::vector<int> neighbors(int v) const;
  std::vector<std::pair<int, int>> edges() const;
  std::size_t edge_count() const;

  // Raw row access for the elimination kernels.
  int words() const { return words_; }
  const std::uint64_t* row(int v) const { return bits_.data() + static_cast<std::size_t>(v) * words_; }
  std::uint64_t* row(int v) { return bits_.data() + static_cast<std::size_t>(v) * words_; }

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// A node ordering d. Nodes are processed (eliminated) from the back of
/// `sequence` to the front; `width` is the induced width of that processing.
struct Ordering {
  std::vector<int> sequence;
  int width = 0;

  // Order in which nodes are eliminated, i.e. `sequence` reversed.
  std::vector<int> elimination() const { return {sequence.rbegin(), sequence.rend()}; }
};

// Moral graph of the full network, then nodes in `removed` are deleted.
UGraph moralize(const BayesNet& net, const std::vector<bool>& removed);
UGraph moralize(const BayesNet& net, const std::vector<Var>& removed = {});

// Undirected skeleton of the DAG (no moral edges).
UGraph skeleton(const BayesNet& net);

int induced_width(const UGraph& g, const Ordering& o);
int induced_width(const UGraph& g, const std::vector<int>& sequence);

// Greedy min-fill; ties by current degree, then lower index. When `last` is
// a node, it is held back and eliminated last (it ends up at sequence[0]).
Ordering min_fill_ordering(const UGraph& g, int last = -1);

// Width of the min-fill ordering. Stops as soon as the width exceeds
// `stop_above` and returns the first width seen above it.
int min_fill_width(UGraph g, int stop_above = INT_MAX);

// Min-fill width of the moral graph with cutset and evidence deleted.
int adjusted_width(const BayesNet& net, const std::vector<Var>& cutset,
                   const std::vector<Var>& evidence_vars);

/// Reusable adjusted-width estimator: moralizes once, then answers width
/// queries for arbitrary removed sets.
class WidthEstimator {
 public:
  explicit WidthEstimator(const BayesNet& net);

  int width(const std::vector<bool>& removed) const;
  bool within(const std::vector<bool>& removed, int bound) const;

 private:
  UGraph induced(const std::vector<bool>& removed) const;
  UGraph moral_;
};

bool is_forest(const UGraph& g);

// Greedy loop cutset: while the skeleton of the remaining nodes has a cycle,
// remove the highest-degree node lying on a cycle (ties by lower index).
std::vector<Var> loop_cutset(const BayesNet& net, const std::vector<Var>& exclude = {});

}  // namespace wcs

#endif  // WCS_GRAPH_HPP
