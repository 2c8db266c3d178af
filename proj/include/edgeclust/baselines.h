#pragma once

#include <optional>
#include <vector>

#include "edgeclust/core.h"
#include "edgeclust/random.h"

namespace edgeclust {

struct KMeansResult {
  Partition partition;
  double inertia = 0.0;
  // Inertia after each Lloyd step of the winning restart.
  std::vector<double> inertia_trace;
};

// Lloyd iterations from k-means++ seeds; the restart with the lowest
// inertia wins (earliest on ties). A cluster that empties is reseeded with
// the point farthest from its current center. Throws std::invalid_argument
// unless 1 <= k <= rows.
KMeansResult kmeans(const Matrix& points, Index k, Rng& rng, int restarts = 10,
                    int max_iterations = 300);
Partition kmeans(const SampleSet& s, Index k, Rng& rng);

struct SpectralConfig {
  Index knn = 20;
  std::optional<double> sigma;  // median pairwise distance when unset
  Index k = 2;
};

// Gaussian affinities kept only between mutual k-nearest neighbours. A node
// left without neighbours gets a self-loop of weight 1e-8.
Matrix spectral_affinity(const Matrix& points, const SpectralConfig& cfg);

// Embeds nodes with the k smallest eigenvectors of I - D^-1 W (obtained from
// the symmetric normalized form and rescaled by D^-1/2) and runs kmeans on
// the rows. Throws std::invalid_argument for knn == 0, k == 0 or k > n.
Partition spectral(const SampleSet& s, const SpectralConfig& cfg, Rng& rng);

}  // namespace edgeclust
