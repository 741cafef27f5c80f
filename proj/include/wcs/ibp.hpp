#ifndef WCS_IBP_HPP
#define WCS_IBP_HPP

#include "wcs/exact.hpp"
#include "wcs/model.hpp"

namespace wcs {

// Loopy belief propagation on the factor graph of the CPTs, evidence
// absorbed. Each round updates every factor-to-variable message from the
// previous variable-to-factor messages, then every variable-to-factor
// message; messages start uniform and are normalized. Returns the beliefs of
// the unobserved variables after exactly `iterations` rounds.
// Throws ZeroBelief when a belief vanishes.
Marginals ibp_run(const BayesNet& net, const Evidence& e, int iterations = 25);

}  // namespace wcs

#endif  // WCS_IBP_HPP
