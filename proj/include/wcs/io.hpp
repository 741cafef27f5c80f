#ifndef WCS_IO_HPP
#define WCS_IO_HPP

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "wcs/exact.hpp"
#include "wcs/model.hpp"

namespace wcs {

// Network text format:
//   var <name> <cardinality>
//   cpt <child> | <parent...>
//   <one row of child probabilities per parent configuration>
// `#` starts a comment. The last listed parent varies fastest.
//
// Numbers are written in the shortest form that reads back to the same double.
void write_network(std::ostream& out, const BayesNet& net);
// Throws FormatError on syntax errors and ModelError when the network fails
// validation.
BayesNet read_network(std::istream& in);

// `<name> <value-index>` per line.
void write_evidence(std::ostream& out, const BayesNet& net, const Evidence& e);
Evidence read_evidence(std::istream& in, const BayesNet& net);

// One variable name per line.
void write_cutset(std::ostream& out, const BayesNet& net, const std::vector<Var>& cutset);
std::vector<Var> read_cutset(std::istream& in, const BayesNet& net);

BayesNet load_network(const std::string& path);
Evidence load_evidence(const std::string& path, const BayesNet& net);
std::vector<Var> load_cutset(const std::string& path, const BayesNet& net);

// Marginals CSV: variable,value,estimate[,exact,abs_error], %.9f, LF.
// Rows follow variable index order, then value order.
void write_marginals_csv(std::ostream& out, const BayesNet& net, const Marginals& estimate,
                         const Marginals* exact = nullptr);

using CsvKey = std::pair<std::string, int>;

// Reads the `estimate` column of a marginals CSV (columns located by header
// name), keyed by (variable, value).
std::map<CsvKey, double> read_marginals_csv(std::istream& in);

std::string format_fixed(double x);
std::string format_shortest(double x);

}  // namespace wcs

#endif  // WCS_IO_HPP
