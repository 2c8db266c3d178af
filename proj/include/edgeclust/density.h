#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "edgeclust/core.h"
#include "edgeclust/edge_features.h"
#include "edgeclust/random.h"

namespace edgeclust {

// Lower clamp on KDE log-densities (about log 1e-20).
inline constexpr double kLogDensityFloor = -46.05;
// Symmetric clamp on log-odds before they become edge costs.
inline constexpr double kLogOddsClamp = 50.0;

// A density over edge feature vectors, evaluated in log space.
class Density {
 public:
  virtual ~Density() = default;
  virtual Index dim() const = 0;
  virtual double log_pdf(std::span<const double> x) const = 0;
};

// Gaussian product-kernel density estimate.
class DensityModel final : public Density {
 public:
  DensityModel(Matrix training_points, std::vector<double> bandwidths,
               double log_floor = kLogDensityFloor);

  Index dim() const override { return points_.cols(); }
  Index size() const { return points_.rows(); }
  const Matrix& training_points() const { return points_; }
  const std::vector<double>& bandwidths() const { return bandwidths_; }
  double log_floor() const { return log_floor_; }

  // Throws std::invalid_argument on dimension mismatch; never returns NaN
  // or -inf.
  double log_pdf(std::span<const double> x) const override;

 private:
  Matrix points_;
  std::vector<double> bandwidths_;
  double log_floor_;
  double log_norm_;  // -log m - sum log h - d/2 log(2 pi)
};

// Scott's rule per dimension: h_j = sigma_j * m^(-1/(d+4)), floored at
// 1e-6 * (1 + |sigma_j|). Needs at least two rows.
DensityModel kde_fit(const Matrix& vectors);
double kde_logpdf(const DensityModel& model, std::span<const double> x);

// Closed-form densities used by the edge-level generator and by tests.
struct GaussianComponent {
  std::vector<double> mean;
  std::vector<double> sd;
};
struct UniformComponent {
  std::vector<double> lo;
  std::vector<double> hi;
};
using DensityComponent = std::variant<GaussianComponent, UniformComponent>;

class ParametricDensity final : public Density {
 public:
  ParametricDensity(std::vector<double> weights,
                    std::vector<DensityComponent> components);

  static ParametricDensity gaussian(std::vector<double> mean,
                                    std::vector<double> sd);
  static ParametricDensity uniform(std::vector<double> lo,
                                   std::vector<double> hi);

  Index dim() const override { return dim_; }
  // -inf outside the support.
  double log_pdf(std::span<const double> x) const override;
  std::vector<double> sample(Rng& rng) const;

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<DensityComponent>& components() const {
    return components_;
  }

 private:
  std::vector<double> weights_;
  std::vector<DensityComponent> components_;
  Index dim_ = 0;
};

struct LogOdds {
  int sign = 0;  // +1, -1, or 0 when the densities tie
  double cost = 0.0;
};

// r = log p1(e) - log p0(e) clamped to [-50, 50]; sign(r) and |r|.
LogOdds log_odds(const Density& p1, const Density& p0,
                 std::span<const double> e);

struct SignedEdge {
  PairIndex pair;
  int sign = 0;  // +1 or -1
  double cost = 0.0;
};

// G0: the log-odds graph. Every input pair lands in exactly one of
// `edges` or `dropped`.
struct SignedWeightedGraph {
  Index n = 0;
  std::vector<SignedEdge> edges;
  std::vector<PairIndex> dropped;
};

// Pairs whose cost is <= sparsify_below (sign-0 pairs always) are dropped.
// Throws std::invalid_argument for duplicate pairs, a negative threshold or
// a dimension mismatch.
SignedWeightedGraph build_signed_graph(const EdgeFeatureSet& features,
                                       const Density& p1, const Density& p0,
                                       double sparsify_below = 0.0);

// TSV: `i<TAB>j<TAB>sign<TAB>cost` per kept edge, 0-indexed, LF endings.
void write_graph_tsv(const SignedWeightedGraph& g, std::ostream& out);
// n_nodes == 0 infers the node count as max index + 1. Throws DataError
// with the offending line number on malformed input.
SignedWeightedGraph read_graph_tsv(std::istream& in, Index n_nodes = 0);

}  // namespace edgeclust
