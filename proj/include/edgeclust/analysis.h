#pragma once

#include "edgeclust/core.h"
#include "edgeclust/density.h"
#include "edgeclust/edge_features.h"
#include "edgeclust/random.h"

namespace edgeclust {

// log_likelihood_theta == log_likelihood_g0 - disagreement_term.
struct LikelihoodReport {
  double log_likelihood_theta = 0.0;
  double log_likelihood_g0 = 0.0;
  double disagreement_term = 0.0;
};

// Sums over every pair of `features`, which must cover all C(n, 2) pairs of
// p exactly once (std::invalid_argument otherwise). The disagreement term
// uses the unclamped log-density difference, so the identity is exact up to
// rounding. A pair whose densities tie never disagrees.
LikelihoodReport log_likelihood(const Partition& p,
                                const EdgeFeatureSet& features,
                                const Density& p1, const Density& p0);

// Disagreement of G0 against the planted partition.
double empirical_dis(const SignedWeightedGraph& g, const Partition& truth);

struct ExpectedDisReport {
  Index n0 = 0;  // inter-cluster pairs
  Index n1 = 0;  // intra-cluster pairs
  double estimate = 0.0;
  double std_error = 0.0;
  Index sample_count = 0;  // draws per density
};

// Monte Carlo estimate of
//   n1 E_{P1}[log(P0/P1) 1(P1 <= P0)] + n0 E_{P0}[log(P1/P0) 1(P0 <= P1)]
// with log-ratios clamped like edge costs. Throws std::invalid_argument for
// samples < 1000 or mismatched dimensions.
ExpectedDisReport expected_dis(const ParametricDensity& p1,
                               const ParametricDensity& p0, Index n1,
                               Index n0, Index samples, Rng& rng);

}  // namespace edgeclust
