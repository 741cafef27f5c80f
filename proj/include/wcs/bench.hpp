#ifndef WCS_BENCH_HPP
#define WCS_BENCH_HPP

#include <array>
#include <cstdint>
#include <istream>
#include <random>
#include <string>
#include <vector>

#include "wcs/model.hpp"

namespace wcs {

// Variables 0..r-1 are roots with uniform priors; every later variable takes
// p distinct parents uniformly from the variables before it. Binary domains,
// CPT rows drawn uniformly and normalized.
BayesNet gen_random(int n, int roots, int parents, std::uint64_t seed);

// r roots followed by n-r leaves, each leaf with p parents among the roots.
BayesNet gen_twolayer(int roots, int n, int parents, std::uint64_t seed);

// Directed grid: node (i,j) has parents (i-1,j) and (i,j-1); with `diagonal`
// also (i-1,j-1).
BayesNet gen_grid(int rows, int cols, std::uint64_t seed, bool diagonal = false);

// Each row lists the 3 code bits checked by one parity bit.
using ParityMatrix = std::vector<std::array<int, 3>>;

ParityMatrix random_parity_matrix(int k, std::uint64_t seed);
// Whitespace-separated column indices, 3 per line; `#` starts a comment.
ParityMatrix read_parity_matrix(std::istream& in, int k);

// Code bits U0..U(k-1), parity bits P0..P(m-1) (XOR of three code bits), and
// one noisy channel child per code and parity bit (YU*, YP*), each flipping
// its parent with probability `flip`.
BayesNet gen_coding(int k, std::uint64_t seed, double flip = 0.05);
BayesNet gen_coding(int k, const ParityMatrix& h, double flip = 0.05);

enum class EvidencePolicy { Leaves, Channel, Any };

EvidencePolicy parse_evidence_policy(const std::string& s);

// All variables sampled in topological order.
std::vector<int> forward_sample(const BayesNet& net, std::mt19937_64& rng);

// `count` variables eligible under the policy (leaves; leaves with a single
// parent; anything), valued by one forward sample of the network.
Evidence gen_evidence(const BayesNet& net, int count, EvidencePolicy policy, std::uint64_t seed);

}  // namespace wcs

#endif  // WCS_BENCH_HPP
