#ifndef WCS_WCUTSET_HPP
#define WCS_WCUTSET_HPP

#include <string>
#include <vector>

#include "wcs/model.hpp"
#include "wcs/sampling.hpp"

namespace wcs {

enum class SelectionMethod { GA, MG, HG };

std::string to_string(SelectionMethod m);
SelectionMethod parse_selection_method(const std::string& s);

struct SelectionReport {
  SelectionMethod method = SelectionMethod::GA;
  int w_bound = 0;
  Cutset cutset;
  // Width estimate after each accepted removal, in removal order.
  std::vector<int> width_trace;
  double elapsed = 0.0;
};

// Greedy: start from every unobserved variable and, in topological order,
// drop each one whose removal keeps the adjusted width within w.
SelectionReport select_ga(const BayesNet& net, const Evidence& e, int w);

// Monotonous greedy: the 1-cutset seeds the 2-cutset and so on up to w, so
// the cutset for w+1 is always a subset of the one for w.
SelectionReport select_mg(const BayesNet& net, const Evidence& e, int w);

// All MG cutsets for bounds 1..w_max from a single run; element k is the
// (k+1)-cutset.
std::vector<SelectionReport> select_mg_chain(const BayesNet& net, const Evidence& e, int w_max);

// Like GA, but candidates are tried in ascending Markov-blanket size (ties in
// topological order), so nodes with large blankets stay in the cutset.
SelectionReport select_hg(const BayesNet& net, const Evidence& e, int w);

SelectionReport select_cutset(SelectionMethod method, const BayesNet& net, const Evidence& e, int w);

}  // namespace wcs

#endif  // WCS_WCUTSET_HPP
