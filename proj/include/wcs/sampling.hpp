#ifndef WCS_SAMPLING_HPP
#define WCS_SAMPLING_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "wcs/exact.hpp"
#include "wcs/model.hpp"

namespace wcs {

struct SamplerConfig {
  int chains = 20;
  long samples_per_chain = 1000;
  std::uint64_t seed = 0;
  // Total wall-clock budget in seconds, split evenly across chains. When set,
  // samples_per_chain is ignored and chains run until their share elapses,
  // checking the clock every 32 sweeps.
  std::optional<double> time_bound;
  long burn_in = 0;
};

// Generator for chain m: mt19937_64 seeded with seed xor m.
std::mt19937_64 chain_rng(std::uint64_t seed, int chain);

/// One Markov chain. `values` is a full assignment: the sampled variables
/// carry the current sample, evidence variables their observed value, and
/// any remaining variables a forward-sampled filler that is never read.
struct ChainState {
  long t = 0;
  Assignment values;
  std::mt19937_64 rng;
};

/// Running sums of per-sample conditional distributions (one sample is one
/// sweep over the sampled set).
class RunningEstimator {
 public:
  void add(Var v, const Eigen::VectorXd& conditional);
  void add(const Marginals& conditionals);
  void close_sample() { ++count_; }
  long count() const { return count_; }
  Marginals estimate() const;

 private:
  std::map<Var, Eigen::VectorXd> sums_;
  long count_ = 0;
};

struct SamplingResult {
  Marginals pooled;                    // average of the per-chain estimates
  std::vector<Marginals> per_chain;
  std::vector<long> samples;           // samples accumulated per chain
  long restarts = 0;                   // chains restarted after a zero-weight state
};

// Value index drawn from the (possibly unnormalized) weights `probs`.
int draw(const Eigen::VectorXd& probs, std::mt19937_64& rng);

// ---- Gibbs sampling over all unobserved variables ----

// P(v | all other values) from v's CPT row and its children's rows.
// Throws TrappedState when every value has zero weight.
Distribution gibbs_conditional(const BayesNet& net, Var v, const Assignment& state, const Evidence& e);

// Forward sample with evidence clamped; retried until the state has nonzero
// probability (up to 1000 attempts, then TrappedState).
ChainState gibbs_initialize(const BayesNet& net, const Evidence& e, std::mt19937_64 rng);

// Resamples every unobserved variable once, in index order.
void gibbs_sweep(const BayesNet& net, ChainState& state, const Evidence& e);

// Rao-Blackwellised estimate: averages gibbs_conditional over samples, then
// over chains.
SamplingResult gibbs_estimate(const BayesNet& net, const Evidence& e, const SamplerConfig& config);

// ---- Cutset sampling ----

struct Cutset {
  std::vector<Var> members;
  int w_bound = -1;
  int measured_width = -1;

  bool operator==(const Cutset&) const = default;
};

/// Gibbs sampling restricted to a cutset, with every conditional computed by
/// exact elimination over the rest of the network.
///
/// One bucket tree is prepared per cutset member (everything else in the
/// cutset plus the evidence observed, the member eliminated last) and one
/// for the non-cutset variables, so each sample only pays for numeric
/// propagation.
class CutsetSampler {
 public:
  CutsetSampler(const BayesNet& net, Cutset cutset, Evidence e, const EliminationOptions& options = {});

  const Cutset& cutset() const { return cutset_; }

  // P(C_i | other members as in `state`, e). Throws ZeroEvidence when the
  // conditioning event has zero probability.
  Eigen::VectorXd conditional(int i, const Assignment& state) const;

  ChainState initialize(std::mt19937_64 rng) const;

  // Resamples each member in stored order. When `last` is given it receives
  // the conditional used for the final member, which equals that member's
  // conditional at the finished sample.
  void sweep(ChainState& state, Eigen::VectorXd* last = nullptr) const;

  // Per-sample contribution: conditionals of the members and exact
  // marginals of everything else given the sample and e.
  Marginals sample_conditionals(const Assignment& state, const Eigen::VectorXd* last = nullptr) const;

  SamplingResult run(const SamplerConfig& config) const;

 private:
  const BayesNet* net_;
  Cutset cutset_;
  Evidence evidence_;
  std::vector<BucketTree> member_trees_;
  BucketTree rest_tree_;
};

Distribution cutset_conditional(const BayesNet& net, const Cutset& cutset, int i, const ChainState& state,
                                const Evidence& e);
void cutset_sweep(const BayesNet& net, const Cutset& cutset, ChainState& state, const Evidence& e);
SamplingResult cutset_estimate(const BayesNet& net, const Cutset& cutset, const Evidence& e,
                               const SamplerConfig& config, const EliminationOptions& options = {});

}  // namespace wcs

#endif  // WCS_SAMPLING_HPP
