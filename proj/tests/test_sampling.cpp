#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>

#include "fixtures.hpp"
#include "wcs/graph.hpp"
#include "wcs/sampling.hpp"

using namespace wcs;

namespace {

// Conditional of v given every other variable, by enumeration.
Eigen::VectorXd enum_conditional(const BayesNet& net, Var v, const std::vector<int>& x) {
  Eigen::VectorXd w(net.cardinality(v));
  const auto joint = fixtures::joint_table(net);
  std::vector<int> y = x;
  for (int k = 0; k < net.cardinality(v); ++k) {
    y[v] = k;
    long idx = 0;
    for (Var u = 0; u < net.size(); ++u) idx = idx * net.cardinality(u) + y[u];
    w(k) = joint[idx];
  }
  return w / w.sum();
}

double mse(const Marginals& approx, const std::map<Var, std::vector<double>>& exact) {
  double s = 0.0;
  int count = 0;
  for (const auto& [v, p] : exact)
    for (std::size_t k = 0; k < p.size(); ++k) {
      s += (approx.at(v)(k) - p[k]) * (approx.at(v)(k) - p[k]);
      ++count;
    }
  return s / count;
}

std::vector<int> random_state(const BayesNet& net, std::mt19937_64& rng) {
  std::vector<int> x(net.size());
  for (Var v = 0; v < net.size(); ++v) x[v] = std::uniform_int_distribution<int>(0, net.cardinality(v) - 1)(rng);
  return x;
}

}  // namespace

TEST_CASE("gibbs conditional on chain3") {
  const BayesNet net = fixtures::chain3();
  const Evidence e{{2, 1}};
  const Assignment state(std::vector<int>{1, 0, 1});
  const Distribution d = gibbs_conditional(net, 1, state, e);
  const Eigen::VectorXd oracle = enum_conditional(net, 1, {1, 0, 1});
  CHECK(oracle(0) == doctest::Approx(0.0455).epsilon(1e-3));
  CHECK(d.probs.isApprox(oracle, 1e-12));
  CHECK(d.probs(1) == doctest::Approx(0.9545).epsilon(1e-3));
}

TEST_CASE("gibbs conditional with uniform rows is uniform") {
  BayesNet net;
  Var a = net.add_variable("A", 3);
  Var b = net.add_variable("B", 2);
  net.set_cpt(a, {}, fixtures::rows({{1.0 / 3, 1.0 / 3, 1.0 / 3}}));
  net.set_cpt(b, {a}, fixtures::rows({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}));
  const Distribution d = gibbs_conditional(net, a, Assignment(std::vector<int>{0, 1}), {});
  CHECK(d.probs.isApprox(Eigen::Vector3d::Constant(1.0 / 3), 1e-12));
}

TEST_CASE("gibbs conditional matches enumeration on random nets") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const BayesNet net = fixtures::random_dag(4 + trial % 7, 3, 100 + trial);
    for (int s = 0; s < 5; ++s) {
      const auto x = random_state(net, rng);
      for (Var v = 0; v < net.size(); ++v) {
        const Distribution d = gibbs_conditional(net, v, Assignment(x), {});
        CHECK((d.probs - enum_conditional(net, v, x)).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("gibbs conditional reports trapped states") {
  BayesNet det;
  Var a = det.add_variable("A", 2);
  Var b = det.add_variable("B", 2);
  Var c = det.add_variable("C", 2);
  det.set_cpt(a, {}, fixtures::rows({{0.5, 0.5}}));
  det.set_cpt(b, {a}, fixtures::rows({{1, 0}, {0, 1}}));
  det.set_cpt(c, {a}, fixtures::rows({{1, 0}, {0, 1}}));
  CHECK_THROWS_AS(gibbs_conditional(det, a, Assignment(std::vector<int>{0, 0, 1}), {}), TrappedState);
}

TEST_CASE("sweep over independent variables draws from the priors") {
  BayesNet net;
  for (int i = 0; i < 3; ++i) net.add_variable("I" + std::to_string(i), 2);
  net.set_cpt(0, {}, fixtures::rows({{0.2, 0.8}}));
  net.set_cpt(1, {}, fixtures::rows({{0.5, 0.5}}));
  net.set_cpt(2, {}, fixtures::rows({{0.9, 0.1}}));
  ChainState s = gibbs_initialize(net, {}, chain_rng(3, 0));
  const int sweeps = 20000;
  std::vector<int> ones(3, 0);
  for (int t = 0; t < sweeps; ++t) {
    gibbs_sweep(net, s, {});
    for (int v = 0; v < 3; ++v) ones[v] += s.values[v];
  }
  const double p[3] = {0.8, 0.5, 0.1};
  for (int v = 0; v < 3; ++v) {
    const double sigma = std::sqrt(p[v] * (1 - p[v]) / sweeps);
    CHECK(std::abs(ones[v] / double(sweeps) - p[v]) < 3 * sigma);
  }
  CHECK(s.t == sweeps);
}

TEST_CASE("sweeps are deterministic given the seed") {
  const BayesNet net = fixtures::random_dag(10, 3, 5, 0.05);
  ChainState a = gibbs_initialize(net, {}, chain_rng(99, 2));
  ChainState b = gibbs_initialize(net, {}, chain_rng(99, 2));
  for (int t = 0; t < 50; ++t) {
    gibbs_sweep(net, a, {});
    gibbs_sweep(net, b, {});
  }
  CHECK(a.values == b.values);
}

TEST_CASE("next-state frequencies match the product of conditional draws") {
  const BayesNet net = fixtures::chain3();
  const Evidence e{{2, 1}};
  const std::vector<int> start{1, 0, 1};
  // Oracle: X1' ~ P(X1 | X2=0), then X2' ~ P(X2 | X1', X3=1).
  std::map<std::pair<int, int>, double> expected;
  const Eigen::VectorXd p1 = enum_conditional(net, 0, start);
  for (int a = 0; a < 2; ++a) {
    const Eigen::VectorXd p2 = enum_conditional(net, 1, {a, 0, 1});
    for (int b = 0; b < 2; ++b) expected[{a, b}] = p1(a) * p2(b);
  }
  std::map<std::pair<int, int>, int> counts;
  std::mt19937_64 rng(17);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    ChainState s{0, Assignment(start), std::mt19937_64(rng())};
    gibbs_sweep(net, s, e);
    ++counts[{s.values[0], s.values[1]}];
  }
  for (const auto& [key, p] : expected) {
    const double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(counts[key] / double(n) - p) <= 3 * sigma + 1e-12);
  }
}

TEST_CASE("gibbs estimate with one sample is the conditional at that sample") {
  const BayesNet net = fixtures::random_dag(6, 2, 8, 0.05);
  const Evidence e{{5, 1}};
  SamplerConfig cfg;
  cfg.chains = 1;
  cfg.samples_per_chain = 1;
  cfg.seed = 4;
  const SamplingResult r = gibbs_estimate(net, e, cfg);
  ChainState s = gibbs_initialize(net, e, chain_rng(4, 0));
  gibbs_sweep(net, s, e);
  for (Var v = 0; v < 5; ++v)
    CHECK((r.pooled.at(v) - gibbs_conditional(net, v, s.values, e).probs).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(r.pooled.count(5) == 0);
}

TEST_CASE("gibbs estimate converges on chain3") {
  const BayesNet net = fixtures::chain3();
  SamplerConfig cfg;
  cfg.chains = 4;
  cfg.samples_per_chain = 50000;
  cfg.seed = 1;
  const SamplingResult r = gibbs_estimate(net, {{2, 1}}, cfg);
  CHECK(r.pooled.at(0)(1) == doctest::Approx(0.792).epsilon(0.01 / 0.792));
  CHECK(r.per_chain.size() == 4);
  for (const auto& [v, p] : r.pooled) CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gibbs estimate of an isolated variable is its prior") {
  BayesNet net;
  Var a = net.add_variable("A", 3);
  net.set_cpt(a, {}, fixtures::rows({{0.2, 0.3, 0.5}}));
  SamplerConfig cfg;
  cfg.chains = 2;
  cfg.samples_per_chain = 17;
  const SamplingResult r = gibbs_estimate(net, {}, cfg);
  CHECK(r.pooled.at(0).isApprox(Eigen::Vector3d(0.2, 0.3, 0.5), 1e-14));
}

TEST_CASE("full cutset conditional equals the gibbs conditional") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const BayesNet net = fixtures::random_dag(7, 3, 300 + trial);
    const Evidence e{{6, 1}};
    Cutset c;
    for (Var v = 0; v < 6; ++v) c.members.push_back(v);
    const CutsetSampler sampler(net, c, e);
    for (int s = 0; s < 10; ++s) {
      auto x = random_state(net, rng);
      x[6] = 1;
      for (int i = 0; i < 6; ++i) {
        const Eigen::VectorXd a = sampler.conditional(i, Assignment(x));
        const Eigen::VectorXd b = gibbs_conditional(net, c.members[i], Assignment(x), e).probs;
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}

TEST_CASE("cutset conditional examples") {
  const BayesNet net = fixtures::chain3();
  const Evidence e{{2, 1}};
  Cutset c{{1}};
  ChainState s{0, Assignment(std::vector<int>{0, 0, 1}), chain_rng(0, 0)};
  const Distribution d = cutset_conditional(net, c, 0, s, e);
  const auto oracle = fixtures::enum_marginals(net, e);
  CHECK(d.probs(1) == doctest::Approx(oracle.at(1)[1]).epsilon(1e-12));
  CHECK(d.probs(1) == doctest::Approx(0.9).epsilon(1e-12));

  BayesNet with_iso = fixtures::chain3();
  Var z = with_iso.add_variable("Z", 2);
  with_iso.set_cpt(z, {}, fixtures::rows({{0.35, 0.65}}));
  Cutset cz{{1, z}};
  ChainState sz{0, Assignment(std::vector<int>{0, 1, 1, 0}), chain_rng(0, 0)};
  CHECK(cutset_conditional(with_iso, cz, 1, sz, e).probs.isApprox(Eigen::Vector2d(0.35, 0.65), 1e-12));
}

TEST_CASE("empty cutset sweep is a no-op and estimates are exact") {
  const BayesNet net = fixtures::chain3();
  const Evidence e{{2, 1}};
  ChainState s{0, Assignment(std::vector<int>{1, 1, 1}), chain_rng(0, 0)};
  const auto before = s.values;
  cutset_sweep(net, Cutset{}, s, e);
  CHECK(s.values == before);

  SamplerConfig cfg;
  cfg.chains = 1;
  cfg.samples_per_chain = 1;
  const SamplingResult r = cutset_estimate(net, Cutset{}, e, cfg);
  const auto oracle = fixtures::enum_marginals(net, e);
  for (const auto& [v, p] : oracle)
    for (int k = 0; k < 2; ++k) CHECK(std::abs(r.pooled.at(v)(k) - p[k]) < 1e-9);
}

TEST_CASE("cutset sweeps are deterministic") {
  const BayesNet net = fixtures::random_dag(12, 3, 31, 0.05);
  Cutset c{loop_cutset(net)};
  CutsetSampler sampler(net, c, {});
  ChainState a = sampler.initialize(chain_rng(5, 1));
  ChainState b = sampler.initialize(chain_rng(5, 1));
  for (int t = 0; t < 20; ++t) {
    sampler.sweep(a);
    sampler.sweep(b);
  }
  CHECK(a.values == b.values);
  CHECK(a.t == 20);
}

TEST_CASE("cutset chain is stationary for the posterior") {
  const BayesNet net = fixtures::chain3();
  const Evidence e{{2, 1}};
  Cutset c{{0, 1}};
  CutsetSampler sampler(net, c, e);
  ChainState s = sampler.initialize(chain_rng(8, 0));
  // Oracle: joint posterior of (X1, X2) by enumeration.
  std::map<std::pair<int, int>, double> post;
  const double z = fixtures::enum_evidence_prob(net, e);
  fixtures::for_each_config(net, [&](const std::vector<int>& x, double p) {
    if (x[2] == 1) post[{x[0], x[1]}] += p / z;
  });
  // Thinning keeps retained samples close to independent.
  const int kept = 40000, thin = 5;
  std::map<std::pair<int, int>, int> counts;
  for (int i = 0; i < kept; ++i) {
    for (int k = 0; k < thin; ++k) sampler.sweep(s);
    ++counts[{s.values[0], s.values[1]}];
  }
  for (const auto& [key, p] : post) {
    const double sigma = std::sqrt(p * (1 - p) / kept);
    CHECK(std::abs(counts[key] / double(kept) - p) <= 3 * sigma);
  }
}

TEST_CASE("cutset estimate converges on chain3") {
  const BayesNet net = fixtures::chain3();
  const Evidence e{{2, 1}};
  SamplerConfig cfg;
  cfg.chains = 4;
  cfg.samples_per_chain = 20000;
  cfg.seed = 3;
  const SamplingResult r = cutset_estimate(net, Cutset{{1}}, e, cfg);
  const auto oracle = fixtures::enum_marginals(net, e);
  for (const auto& [v, p] : oracle) {
    CHECK(std::abs(r.pooled.at(v)(1) - p[1]) < 0.01);
    CHECK(r.pooled.at(v).sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(r.restarts == 0);
}

TEST_CASE("full cutset sampling agrees with gibbs sampling") {
  const BayesNet net = fixtures::random_dag(8, 3, 55, 0.1);
  const Evidence e{{7, 0}};
  Cutset all;
  for (Var v = 0; v < 7; ++v) all.members.push_back(v);
  SamplerConfig cfg;
  cfg.chains = 2;
  cfg.samples_per_chain = 20000;
  cfg.seed = 10;
  const SamplingResult g = gibbs_estimate(net, e, cfg);
  const SamplingResult c = cutset_estimate(net, all, e, cfg);
  const auto oracle = fixtures::enum_marginals(net, e);
  for (Var v = 0; v < 7; ++v) {
    CHECK(std::abs(g.pooled.at(v)(1) - c.pooled.at(v)(1)) < 0.02);
    CHECK(std::abs(c.pooled.at(v)(1) - oracle.at(v)[1]) < 0.02);
  }
}

TEST_CASE("time-bounded runs produce samples") {
  const BayesNet net = fixtures::chain3();
  SamplerConfig cfg;
  cfg.chains = 2;
  cfg.time_bound = 0.05;
  const SamplingResult r = gibbs_estimate(net, {{2, 1}}, cfg);
  REQUIRE(r.samples.size() == 2);
  CHECK(r.samples[0] >= 32);
  CHECK(r.samples[0] % 32 == 0);
}

TEST_CASE("invalid configurations are rejected") {
  const BayesNet net = fixtures::chain3();
  SamplerConfig cfg;
  cfg.chains = 0;
  CHECK_THROWS_AS(gibbs_estimate(net, {}, cfg), ParameterError);
  CHECK_THROWS_AS(CutsetSampler(net, Cutset{{2}}, Evidence{{2, 1}}), ParameterError);
}

TEST_CASE("longer chains are more accurate") {
  // Nets whose loop cutset has fewer than two members are skipped: there the
  // cutset estimate is exact (or nearly so) at any chain length.
  int gibbs_wins = 0, cutset_wins = 0, trials = 0;
  for (std::uint64_t seed = 700; trials < 30; ++seed) {
    const BayesNet net = fixtures::random_dag(10, 3, seed, 0.05);
    std::mt19937_64 rng(seed);
    const Evidence e = fixtures::random_evidence(net, 2, rng);
    Cutset c{loop_cutset(net, e.variables())};
    if (c.members.size() < 2) continue;
    ++trials;
    const auto exact = fixtures::enum_marginals(net, e);
    SamplerConfig short_run, long_run;
    short_run.chains = long_run.chains = 1;
    short_run.seed = long_run.seed = seed;
    short_run.samples_per_chain = 500;
    long_run.samples_per_chain = 50000;
    if (mse(gibbs_estimate(net, e, long_run).pooled, exact) < mse(gibbs_estimate(net, e, short_run).pooled, exact))
      ++gibbs_wins;
    if (mse(cutset_estimate(net, c, e, long_run).pooled, exact) <
        mse(cutset_estimate(net, c, e, short_run).pooled, exact))
      ++cutset_wins;
  }
  MESSAGE("gibbs " << gibbs_wins << "/30, cutset " << cutset_wins << "/30");
  CHECK(gibbs_wins >= 28);
  CHECK(cutset_wins >= 28);
}
