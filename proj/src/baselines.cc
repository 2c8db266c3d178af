#include "edgeclust/baselines.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace edgeclust {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (Index c = 0; c < a.size(); ++c) {
    const double d = a[c] - b[c];
    s += d * d;
  }
  return s;
}

Matrix plus_plus_seeds(const Matrix& points, Index k, Rng& rng) {
  const Index n = points.rows();
  Matrix centers(k, points.cols());
  const auto first = points.row(rng.below(n));
  std::copy(first.begin(), first.end(), centers.row(0).begin());
  std::vector<double> nearest(n);
  for (Index i = 0; i < n; ++i) nearest[i] = squared_distance(points.row(i), centers.row(0));
  for (Index c = 1; c < k; ++c) {
    const double total = std::accumulate(nearest.begin(), nearest.end(), 0.0);
    Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        target -= nearest[i];
        if (target < 0.0 && nearest[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.below(n);
    }
    const auto row = points.row(pick);
    std::copy(row.begin(), row.end(), centers.row(c).begin());
    for (Index i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), centers.row(c)));
    }
  }
  return centers;
}

struct Run {
  std::vector<int> assign;
  double inertia = 0.0;
  std::vector<double> trace;
};

Run lloyd(const Matrix& points, Matrix centers, int max_iterations) {
  const Index n = points.rows(), d = points.cols(), k = centers.rows();
  Run run;
  run.assign.assign(n, -1);
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Index c = 0; c < k; ++c) {
        const double dist = squared_distance(points.row(i), centers.row(c));
        if (dist < best_d) {
          best_d = dist;
          best = static_cast<int>(c);
        }
      }
      if (run.assign[i] != best) {
        run.assign[i] = best;
        changed = true;
      }
    }
    std::vector<Index> count(k, 0);
    for (int a : run.assign) ++count[static_cast<Index>(a)];
    for (Index c = 0; c < k; ++c) {
      if (count[c] > 0) continue;
      // Reseed from the point farthest from its own center.
      Index far = 0;
      double far_d = -1.0;
      for (Index i = 0; i < n; ++i) {
        const Index own = static_cast<Index>(run.assign[i]);
        if (count[own] < 2) continue;
        const double dist = squared_distance(points.row(i), centers.row(own));
        if (dist > far_d) {
          far_d = dist;
          far = i;
        }
      }
      --count[static_cast<Index>(run.assign[far])];
      run.assign[far] = static_cast<int>(c);
      count[c] = 1;
      changed = true;
    }
    centers = Matrix(k, d);
    for (Index i = 0; i < n; ++i) {
      auto row = centers.row(static_cast<Index>(run.assign[i]));
      const auto p = points.row(i);
      for (Index j = 0; j < d; ++j) row[j] += p[j];
    }
    for (Index c = 0; c < k; ++c) {
      for (double& v : centers.row(c)) v /= static_cast<double>(count[c]);
    }
    run.inertia = 0.0;
    for (Index i = 0; i < n; ++i) {
      run.inertia += squared_distance(points.row(i), centers.row(static_cast<Index>(run.assign[i])));
    }
    run.trace.push_back(run.inertia);
    if (!changed) break;
  }
  return run;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, Index k, Rng& rng, int restarts,
                    int max_iterations) {
  if (k == 0 || k > points.rows()) {
    throw std::invalid_argument("kmeans: k must be in [1, " +
                                std::to_string(points.rows()) + "]");
  }
  if (restarts < 1 || max_iterations < 1) {
    throw std::invalid_argument("kmeans: restarts and iterations must be positive");
  }
  Run best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Run run = lloyd(points, plus_plus_seeds(points, k, rng), max_iterations);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  std::vector<int> labels(best.assign.begin(), best.assign.end());
  return {validate_partition(labels), best.inertia, std::move(best.trace)};
}

Partition kmeans(const SampleSet& s, Index k, Rng& rng) {
  return kmeans(s.features, k, rng).partition;
}

Matrix spectral_affinity(const Matrix& points, const SpectralConfig& cfg) {
  const Index n = points.rows();
  if (cfg.knn == 0) throw std::invalid_argument("spectral: knn must be >= 1");
  Matrix dist(n, n);
  std::vector<double> all;
  all.reserve(pair_count(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      dist(i, j) = dist(j, i) = std::sqrt(squared_distance(points.row(i), points.row(j)));
      all.push_back(dist(i, j));
    }
  }
  double sigma = 1.0;
  if (cfg.sigma) {
    if (!(*cfg.sigma > 0.0)) throw std::invalid_argument("spectral: sigma must be positive");
    sigma = *cfg.sigma;
  } else if (!all.empty()) {
    const auto mid = all.begin() + static_cast<std::ptrdiff_t>(all.size() / 2);
    std::nth_element(all.begin(), mid, all.end());
    double median = *mid;
    if (all.size() % 2 == 0) {
      median = (median + *std::max_element(all.begin(), mid)) / 2.0;
    }
    if (median > 0.0) sigma = median;
  }
  const Index kn = std::min(cfg.knn, n > 0 ? n - 1 : 0);
  // neighbour[i][j]: j is among the kn nearest of i (ties by index).
  std::vector<std::vector<bool>> neighbour(n, std::vector<bool>(n, false));
  std::vector<Index> order(n);
  for (Index i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), Index{0});
    std::erase(order, i);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kn),
                      order.end(), [&](Index a, Index b) {
                        return dist(i, a) != dist(i, b) ? dist(i, a) < dist(i, b) : a < b;
                      });
    for (Index r = 0; r < kn; ++r) neighbour[i][order[r]] = true;
    order.resize(n);
  }
  Matrix w(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (neighbour[i][j] && neighbour[j][i]) {
        w(i, j) = w(j, i) = std::exp(-dist(i, j) * dist(i, j) / (2.0 * sigma * sigma));
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    double degree = 0.0;
    for (Index j = 0; j < n; ++j) degree += w(i, j);
    if (degree <= 0.0) w(i, i) = 1e-8;
  }
  return w;
}

Partition spectral(const SampleSet& s, const SpectralConfig& cfg, Rng& rng) {
  const Index n = s.n();
  if (cfg.k == 0 || cfg.k > n) {
    throw std::invalid_argument("spectral: k must be in [1, " + std::to_string(n) + "]");
  }
  if (cfg.k == 1) return validate_partition(std::vector<int>(n, 1));
  const Matrix w = spectral_affinity(s.features, cfg);
  std::vector<double> inv_sqrt(n);
  for (Index i = 0; i < n; ++i) {
    double degree = 0.0;
    for (Index j = 0; j < n; ++j) degree += w(i, j);
    inv_sqrt[i] = 1.0 / std::sqrt(degree);
  }
  // Largest eigenvectors of D^-1/2 W D^-1/2 are the smallest of L_sym.
  Matrix normalized(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) normalized(i, j) = inv_sqrt[i] * w(i, j) * inv_sqrt[j];
  }
  const SymmetricEigen eig = jacobi_eigen(normalized);
  Matrix embedding(n, cfg.k);
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < cfg.k; ++c) embedding(i, c) = inv_sqrt[i] * eig.vectors(i, c);
  }
  return kmeans(embedding, cfg.k, rng).partition;
}

}  // namespace edgeclust
