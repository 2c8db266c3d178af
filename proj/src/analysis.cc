#include "edgeclust/analysis.h"

#include <algorithm>
#include <cmath>

#include "edgeclust/corrclust.h"

namespace edgeclust {

LikelihoodReport log_likelihood(const Partition& p,
                                const EdgeFeatureSet& features,
                                const Density& p1, const Density& p0) {
  const Index n = p.size();
  if (features.n != n || features.size() != pair_count(n)) {
    throw std::invalid_argument("log_likelihood: features must cover all " +
                                std::to_string(pair_count(n)) + " pairs of " +
                                std::to_string(n) + " nodes");
  }
  std::vector<bool> seen(pair_count(n), false);
  LikelihoodReport r;
  for (Index e = 0; e < features.size(); ++e) {
    const PairIndex pair = features.pairs[e];
    if (pair.i >= pair.j || pair.j >= n) {
      throw std::invalid_argument("log_likelihood: invalid pair");
    }
    const Index rank = pair_rank(n, pair);
    if (seen[rank]) throw std::invalid_argument("log_likelihood: duplicate pair");
    seen[rank] = true;
    const auto x = features.vectors.row(e);
    const double l1 = p1.log_pdf(x);
    const double l0 = p0.log_pdf(x);
    const bool same = p[pair.i] == p[pair.j];
    r.log_likelihood_theta += same ? l1 : l0;
    r.log_likelihood_g0 += std::max(l1, l0);
    if (same && l1 < l0) r.disagreement_term += l0 - l1;
    if (!same && l0 < l1) r.disagreement_term += l1 - l0;
  }
  return r;
}

double empirical_dis(const SignedWeightedGraph& g, const Partition& truth) {
  return disagreement_cost(g, truth);
}

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Draws from `from` and averages the clamped log(other/from) where other
// dominates.
Moments restricted_divergence(const ParametricDensity& from,
                              const ParametricDensity& other, Index samples,
                              Rng& rng) {
  double sum = 0.0, sum_sq = 0.0;
  for (Index s = 0; s < samples; ++s) {
    const auto e = from.sample(rng);
    const double lf = from.log_pdf(e);
    const double lo = other.log_pdf(e);
    double term = 0.0;
    if (lo >= lf && std::isfinite(lo)) {
      term = std::min(lo - lf, kLogOddsClamp);
    }
    sum += term;
    sum_sq += term * term;
  }
  const double m = static_cast<double>(samples);
  Moments out;
  out.mean = sum / m;
  out.variance = std::max(0.0, (sum_sq - m * out.mean * out.mean) / (m - 1.0));
  return out;
}

}  // namespace

ExpectedDisReport expected_dis(const ParametricDensity& p1,
                               const ParametricDensity& p0, Index n1,
                               Index n0, Index samples, Rng& rng) {
  if (samples < 1000) {
    throw std::invalid_argument("expected_dis: need at least 1000 samples");
  }
  if (p1.dim() != p0.dim()) {
    throw std::invalid_argument("expected_dis: density dimensions differ");
  }
  Rng rng1 = rng.split(1);
  Rng rng0 = rng.split(0);
  const Moments a = restricted_divergence(p1, p0, samples, rng1);
  const Moments b = restricted_divergence(p0, p1, samples, rng0);
  const double w1 = static_cast<double>(n1), w0 = static_cast<double>(n0);
  const double m = static_cast<double>(samples);
  ExpectedDisReport r;
  r.n1 = n1;
  r.n0 = n0;
  r.sample_count = samples;
  r.estimate = w1 * a.mean + w0 * b.mean;
  r.std_error = std::sqrt((w1 * w1 * a.variance + w0 * w0 * b.variance) / m);
  return r;
}

}  // namespace edgeclust
