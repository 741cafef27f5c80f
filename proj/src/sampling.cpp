#include "wcs/sampling.hpp"

#include <chrono>

namespace wcs {

namespace {

constexpr int kInitAttempts = 1000;
constexpr int kClockBlock = 32;

// Forward sample of the whole network with evidence clamped.
Assignment forward_sample(const BayesNet& net, const std::vector<Var>& topo, const Evidence& e,
                          std::mt19937_64& rng) {
  Assignment x(net.size(), e);
  for (Var v : topo) {
    if (e.contains(v)) continue;
    const int row = net.row_index(v, x.values());
    x[v] = draw(net.cpt(v).rows.row(row).transpose(), rng);
  }
  return x;
}

template <typename Init, typename Step>
SamplingResult run_chains(const SamplerConfig& config, Init&& init, Step&& step) {
  if (config.chains < 1) throw ParameterError("at least one chain is required");
  if (!config.time_bound && config.samples_per_chain < 1)
    throw ParameterError("at least one sample per chain is required");
  if (config.time_bound && !(*config.time_bound > 0.0)) throw ParameterError("time bound must be positive");

  using Clock = std::chrono::steady_clock;
  SamplingResult result;
  for (int m = 0; m < config.chains; ++m) {
    ChainState state = init(chain_rng(config.seed, m));
    RunningEstimator est;
    auto advance = [&](bool record) {
      try {
        step(state, record ? &est : nullptr);
      } catch (const ZeroEvidence&) {
        state = init(std::move(state.rng));
        ++result.restarts;
      } catch (const TrappedState& err) {
        throw TrappedState(std::string(err.what()) + " (chain " + std::to_string(m) + ", step " +
                           std::to_string(state.t) + ")");
      }
    };
    for (long b = 0; b < config.burn_in; ++b) advance(false);
    if (config.time_bound) {
      const auto budget = std::chrono::duration<double>(*config.time_bound / config.chains);
      const auto start = Clock::now();
      do {
        for (int k = 0; k < kClockBlock; ++k) advance(true);
      } while (Clock::now() - start < budget);
    } else {
      for (long t = 0; t < config.samples_per_chain; ++t) advance(true);
    }
    result.samples.push_back(est.count());
    result.per_chain.push_back(est.estimate());
  }
  for (const auto& chain : result.per_chain)
    for (const auto& [v, p] : chain) {
      auto [it, fresh] = result.pooled.try_emplace(v, Eigen::VectorXd::Zero(p.size()));
      it->second += p;
    }
  for (auto& [v, p] : result.pooled) p /= static_cast<double>(config.chains);
  return result;
}

}  // namespace

std::mt19937_64 chain_rng(std::uint64_t seed, int chain) {
  return std::mt19937_64(seed ^ static_cast<std::uint64_t>(chain));
}

int draw(const Eigen::VectorXd& probs, std::mt19937_64& rng) {
  const double total = probs.sum();
  const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng) * total;
  double acc = 0.0;
  int last = 0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    if (probs(k) <= 0.0) continue;
    acc += probs(k);
    last = static_cast<int>(k);
    if (r < acc) return last;
  }
  return last;
}

void RunningEstimator::add(Var v, const Eigen::VectorXd& conditional) {
  auto [it, fresh] = sums_.try_emplace(v, Eigen::VectorXd::Zero(conditional.size()));
  it->second += conditional;
}

void RunningEstimator::add(const Marginals& conditionals) {
  for (const auto& [v, p] : conditionals) add(v, p);
}

Marginals RunningEstimator::estimate() const {
  Marginals out;
  for (const auto& [v, sum] : sums_) out.emplace(v, sum / sum.sum());
  return out;
}

Distribution gibbs_conditional(const BayesNet& net, Var v, const Assignment& state, const Evidence& e) {
  if (e.contains(v)) throw ParameterError("variable '" + net.name(v) + "' is observed");
  std::vector<int> x = state.values();
  Eigen::VectorXd w(net.cardinality(v));
  for (int k = 0; k < net.cardinality(v); ++k) {
    x[v] = k;
    double p = net.probability(v, x);
    for (Var c : net.children(v)) p *= net.probability(c, x);
    w(k) = p;
  }
  const double total = w.sum();
  if (!(total > 0.0))
    throw TrappedState("all values of '" + net.name(v) + "' have zero weight in the current state");
  return {v, w / total};
}

ChainState gibbs_initialize(const BayesNet& net, const Evidence& e, std::mt19937_64 rng) {
  const auto topo = topological_order(net);
  for (int attempt = 0; attempt < kInitAttempts; ++attempt) {
    Assignment x = forward_sample(net, topo, e, rng);
    if (joint_probability(net, x) > 0.0) return {0, std::move(x), std::move(rng)};
  }
  throw TrappedState("no initial state with nonzero probability after 1000 attempts");
}

void gibbs_sweep(const BayesNet& net, ChainState& state, const Evidence& e) {
  for (Var v = 0; v < net.size(); ++v) {
    if (e.contains(v)) continue;
    state.values[v] = draw(gibbs_conditional(net, v, state.values, e).probs, state.rng);
  }
  ++state.t;
}

SamplingResult gibbs_estimate(const BayesNet& net, const Evidence& e, const SamplerConfig& config) {
  auto init = [&](std::mt19937_64 rng) { return gibbs_initialize(net, e, std::move(rng)); };
  auto step = [&](ChainState& state, RunningEstimator* est) {
    gibbs_sweep(net, state, e);
    if (!est) return;
    for (Var v = 0; v < net.size(); ++v)
      if (!e.contains(v)) est->add(v, gibbs_conditional(net, v, state.values, e).probs);
    est->close_sample();
  };
  return run_chains(config, init, step);
}

// ---- cutset sampling ----

namespace {

std::vector<Var> observed_for_member(const Cutset& c, int i, const Evidence& e) {
  std::vector<Var> obs = e.variables();
  for (int j = 0; j < static_cast<int>(c.members.size()); ++j)
    if (j != i) obs.push_back(c.members[j]);
  return obs;
}

std::vector<Var> observed_all(const Cutset& c, const Evidence& e) {
  std::vector<Var> obs = e.variables();
  obs.insert(obs.end(), c.members.begin(), c.members.end());
  return obs;
}

}  // namespace

CutsetSampler::CutsetSampler(const BayesNet& net, Cutset cutset, Evidence e, const EliminationOptions& options)
    : net_(&net),
      cutset_(std::move(cutset)),
      evidence_(std::move(e)),
      rest_tree_(net, observed_all(cutset_, evidence_), options) {
  std::vector<bool> seen(net.size(), false);
  for (Var c : cutset_.members) {
    if (c < 0 || c >= net.size()) throw ParameterError("cutset member out of range");
    if (evidence_.contains(c)) throw ParameterError("cutset member '" + net.name(c) + "' is observed");
    if (seen[c]) throw ParameterError("cutset member '" + net.name(c) + "' listed twice");
    seen[c] = true;
  }
  member_trees_.reserve(cutset_.members.size());
  for (int i = 0; i < static_cast<int>(cutset_.members.size()); ++i)
    member_trees_.emplace_back(net, observed_for_member(cutset_, i, evidence_), options, cutset_.members[i]);
}

Eigen::VectorXd CutsetSampler::conditional(int i, const Assignment& state) const {
  return member_trees_[i].marginal(cutset_.members[i], state);
}

ChainState CutsetSampler::initialize(std::mt19937_64 rng) const {
  const auto topo = topological_order(*net_);
  for (int attempt = 0; attempt < kInitAttempts; ++attempt) {
    Assignment x = forward_sample(*net_, topo, evidence_, rng);
    try {
      rest_tree_.log_evidence(x);
      return {0, std::move(x), std::move(rng)};
    } catch (const ZeroEvidence&) {
    }
  }
  throw TrappedState("no initial cutset state with nonzero probability after 1000 attempts");
}

void CutsetSampler::sweep(ChainState& state, Eigen::VectorXd* last) const {
  for (int i = 0; i < static_cast<int>(cutset_.members.size()); ++i) {
    Eigen::VectorXd p = conditional(i, state.values);
    state.values[cutset_.members[i]] = draw(p, state.rng);
    if (last && i + 1 == static_cast<int>(cutset_.members.size())) *last = std::move(p);
  }
  ++state.t;
}

Marginals CutsetSampler::sample_conditionals(const Assignment& state, const Eigen::VectorXd* last) const {
  Marginals out = rest_tree_.all_marginals(state);
  const int k = static_cast<int>(cutset_.members.size());
  for (int i = 0; i < k; ++i) {
    if (last && i + 1 == k)
      out.emplace(cutset_.members[i], *last);
    else
      out.emplace(cutset_.members[i], conditional(i, state));
  }
  return out;
}

SamplingResult CutsetSampler::run(const SamplerConfig& config) const {
  auto init = [&](std::mt19937_64 rng) { return initialize(std::move(rng)); };
  auto step = [&](ChainState& state, RunningEstimator* est) {
    Eigen::VectorXd last;
    sweep(state, &last);
    if (!est) return;
    est->add(sample_conditionals(state.values, cutset_.members.empty() ? nullptr : &last));
    est->close_sample();
  };
  return run_chains(config, init, step);
}

Distribution cutset_conditional(const BayesNet& net, const Cutset& cutset, int i, const ChainState& state,
                                const Evidence& e) {
  BucketTree tree(net, observed_for_member(cutset, i, e), {}, cutset.members[i]);
  return {cutset.members[i], tree.marginal(cutset.members[i], state.values)};
}

void cutset_sweep(const BayesNet& net, const Cutset& cutset, ChainState& state, const Evidence& e) {
  CutsetSampler(net, cutset, e).sweep(state);
}

SamplingResult cutset_estimate(const BayesNet& net, const Cutset& cutset, const Evidence& e,
                               const SamplerConfig& config, const EliminationOptions& options) {
  return CutsetSampler(net, cutset, e, options).run(config);
}

}  // namespace wcs
