#include "wcs/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "wcs/bench.hpp"
#include "wcs/error.hpp"
#include "wcs/exact.hpp"
#include "wcs/graph.hpp"
#include "wcs/ibp.hpp"
#include "wcs/io.hpp"
#include "wcs/metrics.hpp"
#include "wcs/sampling.hpp"
#include "wcs/wcutset.hpp"

namespace wcs {

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  bool quiet = false;
};

struct GenArgs {
  std::string family;
  int n = 0, roots = 0, parents = 3;
  int rows = 0, cols = 0;
  bool diagonal = false;
  int k = 0;
  double flip = 0.05;
  std::string parity;
  std::string evidence_out;
  int evidence_count = 0;
  std::string evidence_policy = "leaves";
};

struct CutsetArgs {
  std::string net, evidence, method = "mg", w = "1", cutset_out;
};

struct InferArgs {
  std::string net, evidence, algorithm = "exact";
  std::string cutset_source = "loop", cutset_file;
  int w = 1;
  int chains = 20;
  long samples = 1000;
  std::optional<double> time_bound;
  long burn_in = 0;
  int iterations = 25;
  std::string exact_ref;
  bool exact = false;
  std::string report;
};

struct EvalArgs {
  std::string estimates, exact;
};

int exit_code(const Error& e) {
  if (dynamic_cast<const ZeroEvidence*>(&e) || dynamic_cast<const ZeroBelief*>(&e)) return kExitZeroEvidence;
  if (dynamic_cast<const WidthGuard*>(&e)) return kExitWidthGuard;
  if (dynamic_cast<const TrappedState*>(&e)) return kExitTrapped;
  if (dynamic_cast<const ModelError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
      dynamic_cast<const KeyMismatch*>(&e) || dynamic_cast<const IncompleteAssignment*>(&e))
    return kExitModelInvalid;
  return kExitUsage;
}

// Writes to --out when given, otherwise to the primary stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary);
    if (!file_) throw ParameterError("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write '" + path + "'");
  f << text;
}

std::pair<int, int> parse_w_range(const std::string& s) {
  auto to_int = [&](const std::string& t) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw ParameterError("invalid --w '" + s + "'");
    }
  };
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const int w = to_int(s);
    return {w, w};
  }
  const int lo = to_int(s.substr(0, dots)), hi = to_int(s.substr(dots + 2));
  if (lo > hi) throw ParameterError("empty --w range '" + s + "'");
  return {lo, hi};
}

Evidence load_optional_evidence(const std::string& path, const BayesNet& net) {
  return path.empty() ? Evidence{} : load_evidence(path, net);
}

int cmd_gen(const Globals& g, const GenArgs& a, std::ostream& out, std::ostream& err) {
  BayesNet net;
  if (a.family == "random") {
    net = gen_random(a.n, a.roots, a.parents, g.seed);
  } else if (a.family == "twolayer") {
    net = gen_twolayer(a.roots, a.n, a.parents, g.seed);
  } else if (a.family == "grid") {
    net = gen_grid(a.rows, a.cols, g.seed, a.diagonal);
  } else if (a.family == "coding") {
    if (a.parity.empty()) {
      net = gen_coding(a.k, g.seed, a.flip);
    } else {
      std::ifstream in(a.parity);
      if (!in) throw FormatError("cannot open '" + a.parity + "'");
      net = gen_coding(a.k, read_parity_matrix(in, a.k), a.flip);
    }
  } else {
    throw ParameterError("unknown family '" + a.family + "' (random, twolayer, grid, coding)");
  }
  Sink sink(g.out, out);
  write_network(sink.stream(), net);
  if (!a.evidence_out.empty()) {
    const auto e = gen_evidence(net, a.evidence_count, parse_evidence_policy(a.evidence_policy), g.seed + 1);
    std::ostringstream text;
    write_evidence(text, net, e);
    write_file(a.evidence_out, text.str());
  }
  if (!g.quiet) {
    std::size_t edges = 0;
    for (Var v = 0; v < net.size(); ++v) edges += net.parents(v).size();
    (sink.to_file() ? out : err) << "nodes " << net.size() << " edges " << edges << '\n';
  }
  return kExitOk;
}

int cmd_cutset(const Globals& g, const CutsetArgs& a, std::ostream& out, std::ostream&) {
  const BayesNet net = load_network(a.net);
  const Evidence e = load_optional_evidence(a.evidence, net);
  const auto [lo, hi] = parse_w_range(a.w);
  const EliminationOptions limits;
  if (a.method != "loop" && hi > limits.width_cap)
    throw WidthGuard("w " + std::to_string(hi) + " exceeds the elimination width cap " +
                     std::to_string(limits.width_cap));

  std::vector<SelectionReport> reports;
  if (a.method == "loop") {
    const auto start = std::chrono::steady_clock::now();
    SelectionReport r;
    r.cutset.members = loop_cutset(net, e.variables());
    r.cutset.measured_width = adjusted_width(net, r.cutset.members, e.variables());
    r.cutset.w_bound = r.cutset.measured_width;
    r.w_bound = r.cutset.measured_width;
    r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    reports.push_back(r);
  } else {
    const auto method = parse_selection_method(a.method);
    if (method == SelectionMethod::MG) {
      if (lo < 1) throw ParameterError("MG needs w >= 1");
      auto chain = select_mg_chain(net, e, hi);
      reports.assign(chain.begin() + (lo - 1), chain.end());
    } else {
      for (int w = lo; w <= hi; ++w) reports.push_back(select_cutset(method, net, e, w));
    }
  }

  Sink sink(g.out, out);
  auto& s = sink.stream();
  s << "method,w,size,width,elapsed\n";
  for (const auto& r : reports) {
    s << a.method << ',' << r.w_bound << ',' << r.cutset.members.size() << ',' << r.cutset.measured_width << ','
        << format_fixed(r.elapsed) << '\n';
  }
  if (!a.cutset_out.empty()) {
    std::ostringstream text;
    write_cutset(text, net, reports.back().cutset.members);
    write_file(a.cutset_out, text.str());
  }
  return kExitOk;
}

Marginals marginals_from_csv(const std::map<CsvKey, double>& rows, const BayesNet& net) {
  Marginals m;
  for (Var v = 0; v < net.size(); ++v) {
    if (!rows.count({net.name(v), 0})) continue;
    Eigen::VectorXd p(net.cardinality(v));
    for (int k = 0; k < net.cardinality(v); ++k) {
      const auto it = rows.find({net.name(v), k});
      if (it == rows.end()) throw KeyMismatch("exact reference lacks " + net.name(v) + "," + std::to_string(k));
      p[k] = it->second;
    }
    m.emplace(v, p);
  }
  return m;
}

int cmd_infer(const Globals& g, const InferArgs& a, std::ostream& out, std::ostream& err) {
  const BayesNet net = load_network(a.net);
  const Evidence e = load_optional_evidence(a.evidence, net);
  if (const auto ds = validate(net, e); !ds.empty()) throw ModelError(ds.front().message);

  SamplerConfig cfg;
  cfg.chains = a.chains;
  cfg.samples_per_chain = a.samples;
  cfg.seed = g.seed;
  cfg.time_bound = a.time_bound;
  cfg.burn_in = a.burn_in;
  if (cfg.chains < 1) throw ParameterError("--chains must be >= 1");
  if (cfg.samples_per_chain < 1) throw ParameterError("--samples must be >= 1");

  Marginals estimate;
  std::optional<SamplingResult> sampled;
  if (a.algorithm == "exact") {
    estimate = all_marginals(net, e);
  } else if (a.algorithm == "ibp") {
    estimate = ibp_run(net, e, a.iterations);
  } else if (a.algorithm == "gibbs") {
    sampled = gibbs_estimate(net, e, cfg);
  } else if (a.algorithm == "cutset") {
    Cutset c;
    if (!a.cutset_file.empty() || a.cutset_source == "file") {
      if (a.cutset_file.empty()) throw ParameterError("--cutset-source file needs --cutset");
      c.members = load_cutset(a.cutset_file, net);
      for (Var v : c.members)
        if (e.contains(v)) throw ParameterError("cutset member '" + net.name(v) + "' is observed");
    } else if (a.cutset_source == "loop") {
      c.members = loop_cutset(net, e.variables());
    } else {
      c = select_cutset(parse_selection_method(a.cutset_source), net, e, a.w).cutset;
    }
    if (!g.quiet) err << "cutset size " << c.members.size() << '\n';
    CutsetSampler sampler(net, c, e);
    try {
      if (be_evidence_prob(net, e) <= 0.0) throw ZeroEvidence("evidence has zero probability");
    } catch (const WidthGuard&) {
      // Too wide to check up front; the chains report impossible evidence.
    }
    sampled = sampler.run(cfg);
  } else {
    throw ParameterError("unknown algorithm '" + a.algorithm + "' (exact, gibbs, cutset, ibp)");
  }
  if (sampled) {
    estimate = sampled->pooled;
    if (!g.quiet && sampled->restarts > 0) err << "restarts " << sampled->restarts << '\n';
  }

  std::optional<Marginals> exact;
  if (!a.exact_ref.empty()) {
    std::ifstream in(a.exact_ref);
    if (!in) throw FormatError("cannot open '" + a.exact_ref + "'");
    exact = marginals_from_csv(read_marginals_csv(in), net);
  } else if (a.exact) {
    exact = a.algorithm == "exact" ? estimate : all_marginals(net, e);
  }

  Sink sink(g.out, out);
  write_marginals_csv(sink.stream(), net, estimate, exact ? &*exact : nullptr);

  if (!a.report.empty()) {
    std::ostringstream r;
    r << "metric,value\n";
    if (exact) {
      r << "mse," << format_fixed(mse(*exact, estimate)) << '\n';
      r << "delta," << format_fixed(avg_abs_error(*exact, estimate)) << '\n';
      if (sampled && sampled->per_chain.size() >= 2)
        r << "delta90," << format_fixed(build_report(*exact, sampled->per_chain).accuracy.delta90) << '\n';
    }
    if (sampled) {
      long total = 0;
      for (long s : sampled->samples) total += s;
      r << "chains," << sampled->per_chain.size() << "\nsamples," << total << "\nrestarts," << sampled->restarts
        << '\n';
    }
    write_file(a.report, r.str());
  }
  return kExitOk;
}

int cmd_eval(const Globals& g, const EvalArgs& a, std::ostream& out, std::ostream&) {
  auto load = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    return read_marginals_csv(in);
  };
  const auto est = load(a.estimates);
  const auto ref = load(a.exact);

  std::string bad;
  int shown = 0;
  auto note = [&](const CsvKey& k, const char* side) {
    if (shown++ < 10) bad += " " + k.first + "," + std::to_string(k.second) + "(" + side + ")";
  };
  for (const auto& [k, v] : ref)
    if (!est.count(k)) note(k, "missing from estimates");
  for (const auto& [k, v] : est)
    if (!ref.count(k)) note(k, "missing from exact");
  if (shown > 0) throw KeyMismatch("join mismatch on" + bad + (shown > 10 ? " ..." : ""));

  // Variables in order of first appearance in the exact file's sorted keys.
  std::vector<std::string> names;
  for (const auto& [k, v] : ref)
    if (names.empty() || names.back() != k.first) names.push_back(k.first);
  Marginals exact, approx;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::vector<double> pe, pa;
    for (auto it = ref.lower_bound({names[i], 0}); it != ref.end() && it->first.first == names[i]; ++it) {
      if (it->first.second != static_cast<int>(pe.size()))
        throw FormatError("values of '" + names[i] + "' are not 0..k-1");
      pe.push_back(it->second);
      pa.push_back(est.at(it->first));
    }
    exact.emplace(static_cast<Var>(i), Eigen::Map<Eigen::VectorXd>(pe.data(), static_cast<Eigen::Index>(pe.size())));
    approx.emplace(static_cast<Var>(i), Eigen::Map<Eigen::VectorXd>(pa.data(), static_cast<Eigen::Index>(pa.size())));
  }

  Sink sink(g.out, out);
  auto& s = sink.stream();
  s << "scope,mse,avg_abs_error\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const Var v = static_cast<Var>(i);
    const Eigen::VectorXd diff = exact.at(v) - approx.at(v);
    const double n = static_cast<double>(diff.size());
    s << names[i] << ',' << format_fixed(diff.squaredNorm() / n) << ',' << format_fixed(diff.cwiseAbs().sum() / n)
      << '\n';
  }
  s << "total," << format_fixed(mse(exact, approx)) << ',' << format_fixed(avg_abs_error(exact, approx)) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"w-cutset sampling for discrete Bayesian networks", "wcs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Write the primary output here instead of stdout");
  app.add_flag("--quiet", g.quiet, "Suppress summaries");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate a benchmark network");
  gen->add_option("family", ga.family, "random | twolayer | grid | coding")->required();
  gen->add_option("--n", ga.n, "Total variables (random, twolayer)");
  gen->add_option("--roots", ga.roots, "Root variables (random, twolayer)");
  gen->add_option("--parents", ga.parents, "Parents per non-root (random, twolayer)");
  gen->add_option("--rows", ga.rows, "Grid rows");
  gen->add_option("--cols", ga.cols, "Grid columns");
  gen->add_flag("--diagonal", ga.diagonal, "Grid: add the (i-1,j-1) parent");
  gen->add_option("--k", ga.k, "Coding: code bits");
  gen->add_option("--flip", ga.flip, "Coding: channel flip probability");
  gen->add_option("--parity", ga.parity, "Coding: parity matrix file");
  gen->add_option("--evidence-out", ga.evidence_out, "Also write forward-sampled evidence here");
  gen->add_option("--evidence-count", ga.evidence_count, "Observed variables");
  gen->add_option("--evidence-policy", ga.evidence_policy, "leaves | channel | any");

  CutsetArgs ca;
  auto* cut = app.add_subcommand("cutset", "Select a w-cutset");
  cut->add_option("--net", ca.net, "Network file")->required();
  cut->add_option("--evidence", ca.evidence, "Evidence file");
  cut->add_option("--method", ca.method, "loop | ga | mg | hg");
  cut->add_option("--w", ca.w, "Width bound or range lo..hi");
  cut->add_option("--cutset-out", ca.cutset_out, "Write the (last) cutset here");

  InferArgs ia;
  auto* inf = app.add_subcommand("infer", "Compute posterior marginals");
  inf->add_option("--net", ia.net, "Network file")->required();
  inf->add_option("--evidence", ia.evidence, "Evidence file");
  inf->add_option("--algorithm", ia.algorithm, "exact | gibbs | cutset | ibp");
  inf->add_option("--cutset-source", ia.cutset_source, "loop | ga | mg | hg | file");
  inf->add_option("--cutset", ia.cutset_file, "Cutset file");
  inf->add_option("--w", ia.w, "Width bound for ga/mg/hg");
  inf->add_option("--chains", ia.chains, "Independent chains M");
  auto* samples = inf->add_option("--samples", ia.samples, "Samples per chain T");
  inf->add_option("--time", ia.time_bound, "Total time bound in seconds")->excludes(samples);
  inf->add_option("--burn-in", ia.burn_in, "Discarded sweeps per chain");
  inf->add_option("--iterations", ia.iterations, "IBP iterations");
  auto* ref = inf->add_option("--exact-ref", ia.exact_ref, "Exact marginals CSV to compare against");
  inf->add_flag("--exact", ia.exact, "Compare against bucket elimination")->excludes(ref);
  inf->add_option("--report", ia.report, "Write MSE / delta / delta90 here");

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "Score estimates against exact marginals");
  ev->add_option("--estimates", ea.estimates, "Estimates CSV")->required();
  ev->add_option("--exact", ea.exact, "Exact CSV")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error usage: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(g, ga, out, err);
    if (*cut) return cmd_cutset(g, ca, out, err);
    if (*inf) return cmd_infer(g, ia, out, err);
    return cmd_eval(g, ea, out, err);
  } catch (const Error& e) {
    err << "error " << e.kind() << ": " << e.what() << '\n';
    return exit_code(e);
  }
}

}  // namespace wcs
