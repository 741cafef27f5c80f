#include "wcs/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wcs/error.hpp"

namespace wcs {

namespace {

std::vector<std::string> tokens(std::string line) {
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

[[noreturn]] void fail(int lineno, const std::string& msg) {
  throw FormatError("line " + std::to_string(lineno) + ": " + msg);
}

int parse_int(const std::string& s, int lineno) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(lineno, "expected an integer, got '" + s + "'");
  return v;
}

double parse_double(const std::string& s, int lineno) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) fail(lineno, "expected a number, got '" + s + "'");
  return v;
}

Var lookup(const BayesNet& net, const std::string& name, int lineno) {
  if (!net.contains(name)) fail(lineno, "unknown variable '" + name + "'");
  return net.index_of(name);
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return in;
}

std::string diagnostics_text(const std::vector<Diagnostic>& ds) {
  std::string s;
  for (std::size_t i = 0; i < ds.size() && i < 5; ++i) s += (i ? "; " : "") + ds[i].message;
  if (ds.size() > 5) s += "; ...";
  return s;
}

}  // namespace

std::string format_shortest(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string format_fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

void write_network(std::ostream& out, const BayesNet& net) {
  for (Var v = 0; v < net.size(); ++v) out << "var " << net.name(v) << ' ' << net.cardinality(v) << '\n';
  for (Var v = 0; v < net.size(); ++v) {
    out << "\ncpt " << net.name(v) << " |";
    for (Var p : net.parents(v)) out << ' ' << net.name(p);
    out << '\n';
    const auto& rows = net.cpt(v).rows;
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
      for (Eigen::Index c = 0; c < rows.cols(); ++c) out << (c ? " " : "") << format_shortest(rows(r, c));
      out << '\n';
    }
  }
}

BayesNet read_network(std::istream& in) {
  BayesNet net;
  std::vector<bool> has_cpt;
  struct Pending {
    Var child = -1;
    std::vector<Var> parents;
    int rows = 0;
    std::vector<double> values;
    int header_line = 0;
  };
  std::optional<Pending> cur;
  auto flush = [&]() {
    if (!cur) return;
    const int card = net.cardinality(cur->child);
    if (static_cast<int>(cur->values.size()) != cur->rows * card)
      fail(cur->header_line, "CPT of '" + net.name(cur->child) + "' needs " + std::to_string(cur->rows) +
                                 " rows, got " + std::to_string(cur->values.size() / card));
    CptTable t(cur->rows, card);
    for (int r = 0; r < cur->rows; ++r)
      for (int c = 0; c < card; ++c) t(r, c) = cur->values[static_cast<std::size_t>(r) * card + c];
    net.set_cpt(cur->child, std::move(cur->parents), std::move(t));
    has_cpt[cur->child] = true;
    cur.reset();
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (tok[0] == "var") {
      flush();
      if (tok.size() != 3) fail(lineno, "expected 'var <name> <cardinality>'");
      if (net.contains(tok[1])) fail(lineno, "duplicate variable '" + tok[1] + "'");
      const int card = parse_int(tok[2], lineno);
      if (card < 1) fail(lineno, "cardinality must be >= 1");
      net.add_variable(tok[1], card);
      has_cpt.push_back(false);
    } else if (tok[0] == "cpt") {
      flush();
      if (tok.size() < 2) fail(lineno, "expected 'cpt <child> | <parents...>'");
      Pending p;
      p.header_line = lineno;
      p.child = lookup(net, tok[1], lineno);
      if (has_cpt[p.child]) fail(lineno, "second CPT for '" + tok[1] + "'");
      std::size_t i = 2;
      if (i < tok.size()) {
        if (tok[i] != "|") fail(lineno, "expected '|' after the child name");
        ++i;
      }
      p.rows = 1;
      for (; i < tok.size(); ++i) {
        const Var q = lookup(net, tok[i], lineno);
        if (q == p.child) fail(lineno, "'" + tok[i] + "' lists itself as a parent");
        for (Var seen : p.parents)
          if (seen == q) fail(lineno, "parent '" + tok[i] + "' repeated");
        p.parents.push_back(q);
        p.rows *= net.cardinality(q);
      }
      cur = std::move(p);
    } else {
      if (!cur) fail(lineno, "unexpected '" + tok[0] + "'");
      const int card = net.cardinality(cur->child);
      if (static_cast<int>(tok.size()) != card)
        fail(lineno, "row of '" + net.name(cur->child) + "' needs " + std::to_string(card) + " entries");
      if (static_cast<int>(cur->values.size()) >= cur->rows * card)
        fail(lineno, "too many rows for '" + net.name(cur->child) + "'");
      for (const auto& t : tok) cur->values.push_back(parse_double(t, lineno));
    }
  }
  flush();

  std::vector<Diagnostic> ds;
  for (Var v = 0; v < net.size(); ++v)
    if (!has_cpt[v]) ds.push_back({Diagnostic::Kind::MissingCpt, v, -1, "no CPT for '" + net.name(v) + "'"});
  if (ds.empty()) ds = validate(net);
  if (!ds.empty()) throw ModelError(diagnostics_text(ds));
  return net;
}

void write_evidence(std::ostream& out, const BayesNet& net, const Evidence& e) {
  for (const auto& [v, value] : e) out << net.name(v) << ' ' << value << '\n';
}

Evidence read_evidence(std::istream& in, const BayesNet& net) {
  Evidence e;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) fail(lineno, "expected '<name> <value-index>'");
    const Var v = lookup(net, tok[0], lineno);
    if (e.contains(v)) fail(lineno, "'" + tok[0] + "' observed twice");
    const int value = parse_int(tok[1], lineno);
    if (value < 0 || value >= net.cardinality(v))
      throw ModelError("evidence value " + tok[1] + " out of range for '" + tok[0] + "'");
    e.set(v, value);
  }
  return e;
}

void write_cutset(std::ostream& out, const BayesNet& net, const std::vector<Var>& cutset) {
  for (Var v : cutset) out << net.name(v) << '\n';
}

std::vector<Var> read_cutset(std::istream& in, const BayesNet& net) {
  std::vector<Var> c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 1) fail(lineno, "expected one variable name");
    const Var v = lookup(net, tok[0], lineno);
    for (Var seen : c)
      if (seen == v) fail(lineno, "'" + tok[0] + "' listed twice");
    c.push_back(v);
  }
  return c;
}

BayesNet load_network(const std::string& path) {
  auto in = open(path);
  return read_network(in);
}

Evidence load_evidence(const std::string& path, const BayesNet& net) {
  auto in = open(path);
  return read_evidence(in, net);
}

std::vector<Var> load_cutset(const std::string& path, const BayesNet& net) {
  auto in = open(path);
  return read_cutset(in, net);
}

void write_marginals_csv(std::ostream& out, const BayesNet& net, const Marginals& estimate, const Marginals* exact) {
  out << "variable,value,estimate" << (exact ? ",exact,abs_error" : "") << '\n';
  for (const auto& [v, p] : estimate) {
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      out << net.name(v) << ',' << k << ',' << format_fixed(p[k]);
      if (exact) {
        const auto it = exact->find(v);
        if (it == exact->end() || it->second.size() != p.size())
          throw KeyMismatch("no exact marginal for '" + net.name(v) + "'");
        out << ',' << format_fixed(it->second[k]) << ',' << format_fixed(std::abs(p[k] - it->second[k]));
      }
      out << '\n';
    }
  }
}

std::map<CsvKey, double> read_marginals_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty CSV");
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(s);
    while (std::getline(ss, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      cells.push_back(cell);
    }
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  const auto header = split(line);
  int col_var = -1, col_val = -1, col_est = -1;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    if (header[i] == "variable") col_var = i;
    if (header[i] == "value") col_val = i;
    if (header[i] == "estimate") col_est = i;
  }
  if (col_var < 0 || col_val < 0 || col_est < 0)
    throw FormatError("CSV header needs variable, value and estimate columns");
  std::map<CsvKey, double> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) fail(lineno, "expected " + std::to_string(header.size()) + " columns");
    CsvKey key{cells[col_var], parse_int(cells[col_val], lineno)};
    if (!out.emplace(key, parse_double(cells[col_est], lineno)).second)
      fail(lineno, "duplicate row for " + key.first + "," + std::to_string(key.second));
  }
  return out;
}

}  // namespace wcs
