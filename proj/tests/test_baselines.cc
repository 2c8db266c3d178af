#include <cmath>
#include <vector>

#include "doctest.h"
#include "edgeclust/baselines.h"
#include "edgeclust/datagen.h"

using namespace edgeclust;

namespace {

double total_scatter(const Matrix& m) {
  double s = 0.0;
  for (Index c = 0; c < m.cols(); ++c) {
    double mean = 0.0;
    for (Index i = 0; i < m.rows(); ++i) mean += m(i, c);
    mean /= static_cast<double>(m.rows());
    for (Index i = 0; i < m.rows(); ++i) s += (m(i, c) - mean) * (m(i, c) - mean);
  }
  return s;
}

}  // namespace

TEST_CASE("kmeans on two separated pairs") {
  SampleSet s;
  s.features = Matrix{{0, 0}, {0.1, 0}, {10, 10}, {10, 10.1}};
  s.labels = std::vector<int>{1, 1, 2, 2};
  Rng rng(1);
  CHECK(score(kmeans(s, 2, rng), s.truth()).nmi == 1.0);
}

TEST_CASE("kmeans extreme k") {
  Rng rng(2);
  Matrix m(15, 2);
  for (double& v : m.data()) v = rng.normal();
  const KMeansResult one = kmeans(m, 1, rng);
  CHECK(one.partition.k() == 1);
  CHECK(one.inertia == doctest::Approx(total_scatter(m)));
  const KMeansResult all = kmeans(m, 15, rng);
  CHECK(all.partition.k() == 15);
  CHECK(all.inertia == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(kmeans(m, 16, rng), std::invalid_argument);
  CHECK_THROWS_AS(kmeans(m, 0, rng), std::invalid_argument);
}

TEST_CASE("kmeans inertia never increases across Lloyd steps") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    Matrix m(80, 3);
    for (double& v : m.data()) v = rng.normal();
    const KMeansResult r = kmeans(m, 5, rng);
    for (Index i = 1; i < r.inertia_trace.size(); ++i) {
      CHECK(r.inertia_trace[i] <= r.inertia_trace[i - 1] + 1e-12);
    }
    CHECK(r.inertia == r.inertia_trace.back());
  }
}

TEST_CASE("kmeans survives duplicate points") {
  const Matrix m{{1, 1}, {1, 1}, {1, 1}, {2, 2}};
  Rng rng(4);
  const KMeansResult r = kmeans(m, 3, rng);
  CHECK(r.partition.k() == 3);
}

TEST_CASE("baselines are deterministic under a seed") {
  Rng data(5);
  const SampleSet s = gen_synthetic({SyntheticKind::kBlobs, 60, 3, 0.2}, data);
  Rng a(7), b(7);
  CHECK(kmeans(s, 3, a) == kmeans(s, 3, b));
  SpectralConfig cfg;
  cfg.k = 3;
  Rng c(8), d(8);
  CHECK(spectral(s, cfg, c) == spectral(s, cfg, d));
}

TEST_CASE("spectral affinity is symmetric and the rw laplacian rows sum to zero") {
  Rng rng(6);
  Matrix m(40, 2);
  for (double& v : m.data()) v = rng.normal();
  SpectralConfig cfg;
  cfg.knn = 5;
  const Matrix w = spectral_affinity(m, cfg);
  for (Index i = 0; i < 40; ++i) {
    double degree = 0.0;
    for (Index j = 0; j < 40; ++j) {
      CHECK(w(i, j) == w(j, i));
      degree += w(i, j);
    }
    REQUIRE(degree > 0.0);
    double row = 0.0;
    for (Index j = 0; j < 40; ++j) row += (i == j ? 1.0 : 0.0) - w(i, j) / degree;
    CHECK(std::abs(row) <= 1e-8);
  }
}

TEST_CASE("isolated nodes get a tiny self-loop") {
  const Matrix m{{0, 0}, {0.1, 0}, {0, 0.1}, {50, 50}};
  SpectralConfig cfg;
  cfg.knn = 1;
  const Matrix w = spectral_affinity(m, cfg);
  CHECK(w(3, 3) == 1e-8);
}

TEST_CASE("spectral separates blobs and concentric circles") {
  Rng rng(9);
  const SampleSet blobs = gen_synthetic({SyntheticKind::kBlobs, 80, 2, 0.05}, rng);
  SpectralConfig cfg;
  cfg.k = 2;
  CHECK(score(spectral(blobs, cfg, rng), blobs.truth()).nmi == 1.0);
  const SampleSet circles = gen_synthetic({SyntheticKind::kCircles, 200, 2, 0.02}, rng);
  CHECK(score(spectral(circles, cfg, rng), circles.truth()).nmi == 1.0);
  cfg.k = 1;
  CHECK(spectral(blobs, cfg, rng).k() == 1);
  cfg.k = 0;
  CHECK_THROWS_AS(spectral(blobs, cfg, rng), std::invalid_argument);
}
