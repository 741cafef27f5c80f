#include "wcs/wcutset.hpp"

#include <algorithm>
#include <chrono>

#include "wcs/error.hpp"
#include "wcs/graph.hpp"

namespace wcs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Removes candidates from `in_cutset` one at a time, keeping each removal
// whose resulting width is at most w.
void greedy_pass(const WidthEstimator& est, const std::vector<Var>& candidates, int w,
                 std::vector<bool>& in_cutset, const std::vector<bool>& observed, std::vector<int>& trace) {
  const int n = static_cast<int>(in_cutset.size());
  std::vector<bool> removed(n);
  for (int v = 0; v < n; ++v) removed[v] = in_cutset[v] || observed[v];
  for (Var v : candidates) {
    if (!in_cutset[v]) continue;
    removed[v] = false;
    if (est.within(removed, w)) {
      in_cutset[v] = false;
      trace.push_back(est.width(removed));
    } else {
      removed[v] = true;
    }
  }
}

SelectionReport finish(SelectionMethod method, int w, const std::vector<bool>& in_cutset,
                       const std::vector<bool>& observed, const WidthEstimator& est, std::vector<int> trace,
                       Clock::time_point start) {
  SelectionReport r;
  r.method = method;
  r.w_bound = w;
  std::vector<bool> removed(in_cutset.size());
  for (std::size_t v = 0; v < in_cutset.size(); ++v) {
    if (in_cutset[v]) r.cutset.members.push_back(static_cast<Var>(v));
    removed[v] = in_cutset[v] || observed[v];
  }
  r.cutset.w_bound = w;
  r.cutset.measured_width = est.width(removed);
  r.width_trace = std::move(trace);
  r.elapsed = seconds_since(start);
  return r;
}

std::vector<bool> observed_mask(const BayesNet& net, const Evidence& e) {
  std::vector<bool> m(net.size(), false);
  for (const auto& [v, value] : e) m[v] = true;
  return m;
}

std::vector<bool> unobserved(const std::vector<bool>& observed) {
  std::vector<bool> c(observed.size());
  for (std::size_t v = 0; v < observed.size(); ++v) c[v] = !observed[v];
  return c;
}

}  // namespace

std::string to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::GA: return "ga";
    case SelectionMethod::MG: return "mg";
    case SelectionMethod::HG: return "hg";
  }
  return "?";
}

SelectionMethod parse_selection_method(const std::string& s) {
  if (s == "ga" || s == "GA") return SelectionMethod::GA;
  if (s == "mg" || s == "MG") return SelectionMethod::MG;
  if (s == "hg" || s == "HG") return SelectionMethod::HG;
  throw ParameterError("unknown selection method '" + s + "'");
}

SelectionReport select_ga(const BayesNet& net, const Evidence& e, int w) {
  if (w < 0) throw ParameterError("w must be >= 0");
  const auto start = Clock::now();
  const WidthEstimator est(net);
  const auto observed = observed_mask(net, e);
  auto in_cutset = unobserved(observed);
  std::vector<int> trace;
  greedy_pass(est, topological_order(net), w, in_cutset, observed, trace);
  return finish(SelectionMethod::GA, w, in_cutset, observed, est, std::move(trace), start);
}

std::vector<SelectionReport> select_mg_chain(const BayesNet& net, const Evidence& e, int w_max) {
  if (w_max < 1) throw ParameterError("MG needs w >= 1");
  const auto start = Clock::now();
  const WidthEstimator est(net);
  const auto observed = observed_mask(net, e);
  const auto topo = topological_order(net);
  auto in_cutset = unobserved(observed);
  std::vector<int> trace;
  std::vector<SelectionReport> out;
  for (int w = 1; w <= w_max; ++w) {
    greedy_pass(est, topo, w, in_cutset, observed, trace);
    out.push_back(finish(SelectionMethod::MG, w, in_cutset, observed, est, trace, start));
  }
  return out;
}

SelectionReport select_mg(const BayesNet& net, const Evidence& e, int w) {
  return select_mg_chain(net, e, w).back();
}

SelectionReport select_hg(const BayesNet& net, const Evidence& e, int w) {
  if (w < 0) throw ParameterError("w must be >= 0");
  const auto start = Clock::now();
  const WidthEstimator est(net);
  const auto observed = observed_mask(net, e);
  auto order = topological_order(net);
  std::vector<std::size_t> blanket(net.size());
  for (Var v = 0; v < net.size(); ++v) blanket[v] = markov_blanket(net, v).size();
  std::stable_sort(order.begin(), order.end(), [&](Var a, Var b) { return blanket[a] < blanket[b]; });
  auto in_cutset = unobserved(observed);
  std::vector<int> trace;
  greedy_pass(est, order, w, in_cutset, observed, trace);
  return finish(SelectionMethod::HG, w, in_cutset, observed, est, std::move(trace), start);
}

SelectionReport select_cutset(SelectionMethod method, const BayesNet& net, const Evidence& e, int w) {
  switch (method) {
    case SelectionMethod::GA: return select_ga(net, e, w);
    case SelectionMethod::MG: return select_mg(net, e, w);
    case SelectionMethod::HG: return select_hg(net, e, w);
  }
  throw ParameterError("unknown selection method");
}

}  // namespace wcs
