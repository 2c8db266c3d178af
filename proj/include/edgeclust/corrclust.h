#pragma once

#include <vector>

#include "edgeclust/core.h"
#include "edgeclust/density.h"
#include "edgeclust/lp.h"
#include "edgeclust/random.h"

namespace edgeclust {

// Sum of costs of +edges cut by p plus -edges kept inside a cluster.
// Throws std::invalid_argument when p does not cover exactly g.n nodes.
double disagreement_cost(const SignedWeightedGraph& g, const Partition& p);

// LP relaxation of MinimizeDisagreements over the nodes incident to kept
// edges. x(a, b) is the fractional distance between nodes[a] and nodes[b].
struct FractionalMetric {
  std::vector<Index> nodes;  // ascending original node ids
  Matrix x;
  double objective = 0.0;
  LpStats stats;

  // max over triples of x_ij - x_il - x_lj (0 when the metric is exact).
  double max_triangle_violation() const;
};

struct LpRelaxOptions {
  Index max_cuts_per_round = 1000;
  double violation_tolerance = 1e-6;
  Index max_rounds = 10000;
};

// min sum_{+} C x + sum_{-} C (1 - x) over 0 <= x <= 1 with triangle
// inequalities added lazily. Throws std::invalid_argument when g has no kept
// edge and SolverError when the simplex does not converge.
FractionalMetric lp_relax(const SignedWeightedGraph& g,
                          const LpRelaxOptions& options = {});

// c1 = 2 + 1/ln(n + 1).
double approximation_constant(Index n);

// Region growing: balls around the lowest-indexed unassigned node, radius
// below 1/2, accepted once the +edge cut is at most c1 ln(n+1) times the
// ball volume. Nodes outside the metric become singletons.
Partition round_regions(const FractionalMetric& metric,
                        const SignedWeightedGraph& g);

// Randomized pivot: each pivot takes every unassigned node joined to it by a
// kept + edge.
Partition kwik_cluster(const SignedWeightedGraph& g, Rng& rng);

struct OptimumResult {
  Partition partition;
  double cost = 0.0;
};

inline constexpr Index kBruteForceMaxNodes = 12;

// Exact minimizer by enumerating set partitions (first optimum in
// restricted-growth order). Throws std::invalid_argument for n > 12.
OptimumResult brute_force_optimum(const SignedWeightedGraph& g);

struct SolveCertificate {
  Index n = 0;
  double lp_lower_bound = 0.0;
  double rounded_cost = 0.0;
  double c1 = 0.0;
  double bound_rhs = 0.0;  // c1 * ln(n + 1) * lp_lower_bound
  double max_triangle_violation = 0.0;
};

struct SolveResult {
  Partition partition;
  SolveCertificate certificate;
};

// lp_relax followed by round_regions.
SolveResult solve(const SignedWeightedGraph& g,
                  const LpRelaxOptions& options = {});

}  // namespace edgeclust
