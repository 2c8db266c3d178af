#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "edgeclust/analysis.h"
#include "edgeclust/corrclust.h"
#include "edgeclust/datagen.h"

using namespace edgeclust;

namespace {

double normal_pdf(double x, double mean) {
  const double z = x - mean;
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb, double whole, double tol, int depth) {
  const double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * tol) {
    return left + right + (left + right - whole) / 15;
  }
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  const double fa = f(a), fb = f(b), fm = f((a + b) / 2);
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), 1e-12, 40);
}

// n1 * int_{P1 <= P0} P1 log(P0/P1) + n0 * int_{P0 <= P1} P0 log(P1/P0) for
// P1 = N(0,1), P0 = N(2,1); the densities cross at e = 1.
double quadrature_expected_dis(double n1, double n0) {
  const auto upper = [](double e) {
    return normal_pdf(e, 0.0) * std::log(normal_pdf(e, 2.0) / normal_pdf(e, 0.0));
  };
  const auto lower = [](double e) {
    return normal_pdf(e, 2.0) * std::log(normal_pdf(e, 0.0) / normal_pdf(e, 2.0));
  };
  return n1 * integrate(upper, 1.0, 14.0) + n0 * integrate(lower, -12.0, 1.0);
}

EdgeFeatureSet complete_1d(Index n, Rng& rng) {
  EdgeFeatureSet f;
  f.n = n;
  f.vectors = Matrix(0, 1);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      f.pairs.push_back({i, j});
      f.vectors.append_row(std::vector<double>{rng.uniform(-1.0, 3.0)});
    }
  }
  return f;
}

}  // namespace

TEST_CASE("quadrature oracle agrees with the closed form") {
  // int_1^inf phi(e)(2e - 2) de = 2 phi(1) - 2 (1 - Phi(1))
  const double tail = 0.5 * std::erfc(1.0 / std::sqrt(2.0));
  CHECK(quadrature_expected_dis(1, 0) == doctest::Approx(2 * normal_pdf(1.0, 0.0) - 2 * tail).epsilon(1e-9));
  CHECK(quadrature_expected_dis(0, 1) == doctest::Approx(quadrature_expected_dis(1, 0)).epsilon(1e-9));
}

TEST_CASE("likelihood identity on 5 nodes with KDE densities") {
  Rng rng(1);
  Matrix same(0, 1), diff(0, 1);
  for (int i = 0; i < 300; ++i) {
    same.append_row(std::vector<double>{rng.normal(0.0, 1.0)});
    diff.append_row(std::vector<double>{rng.normal(2.0, 1.0)});
  }
  const DensityModel p1 = kde_fit(same), p0 = kde_fit(diff);
  const EdgeFeatureSet f = complete_1d(5, rng);
  const Partition p = validate_partition({1, 1, 2, 2, 1});
  const LikelihoodReport r = log_likelihood(p, f, p1, p0);
  double direct = 0.0;
  for (Index e = 0; e < f.size(); ++e) {
    const bool theta = p[f.pairs[e].i] == p[f.pairs[e].j];
    direct += theta ? kde_logpdf(p1, f.vectors.row(e)) : kde_logpdf(p0, f.vectors.row(e));
  }
  CHECK(std::abs(r.log_likelihood_theta - direct) <= 1e-8);
  CHECK(std::abs(r.log_likelihood_theta - (r.log_likelihood_g0 - r.disagreement_term)) <= 1e-8);
  CHECK(r.disagreement_term >= 0.0);
  const SignedWeightedGraph g = build_signed_graph(f, p1, p0);
  CHECK(disagreement_cost(g, p) == doctest::Approx(r.disagreement_term).epsilon(1e-12));
}

TEST_CASE("tied densities make theta irrelevant") {
  const ParametricDensity d = ParametricDensity::gaussian({0.0}, {1.0});
  EdgeFeatureSet f;
  f.n = 2;
  f.pairs = {{0, 1}};
  f.vectors = Matrix{{0.3}};
  const LikelihoodReport a = log_likelihood(validate_partition({1, 1}), f, d, d);
  const LikelihoodReport b = log_likelihood(validate_partition({1, 2}), f, d, d);
  CHECK(a.log_likelihood_theta == b.log_likelihood_theta);
  CHECK(a.disagreement_term == 0.0);
  CHECK(b.disagreement_term == 0.0);
}

TEST_CASE("partition matching every sign has zero disagreement") {
  const ParametricDensity p1 = ParametricDensity::gaussian({0.0}, {1.0});
  const ParametricDensity p0 = ParametricDensity::gaussian({2.0}, {1.0});
  EdgeFeatureSet f;
  f.n = 3;
  f.pairs = {{0, 1}, {0, 2}, {1, 2}};
  f.vectors = Matrix{{0.0}, {3.0}, {2.5}};
  const LikelihoodReport r = log_likelihood(validate_partition({1, 1, 2}), f, p1, p0);
  CHECK(r.disagreement_term == 0.0);
  CHECK(r.log_likelihood_theta == r.log_likelihood_g0);
}

TEST_CASE("log_likelihood needs every pair") {
  const ParametricDensity d = ParametricDensity::gaussian({0.0}, {1.0});
  EdgeFeatureSet f;
  f.n = 3;
  f.pairs = {{0, 1}, {0, 2}};
  f.vectors = Matrix{{0.0}, {1.0}};
  CHECK_THROWS_AS(log_likelihood(validate_partition({1, 1, 2}), f, d, d), std::invalid_argument);
  f.pairs.push_back({0, 1});
  f.vectors.append_row(std::vector<double>{2.0});
  CHECK_THROWS_AS(log_likelihood(validate_partition({1, 1, 2}), f, d, d), std::invalid_argument);
}

TEST_CASE("empirical_dis special cases") {
  Rng rng(2);
  const ParametricDensity u1 = ParametricDensity::uniform({0.0}, {1.0});
  const ParametricDensity u0 = ParametricDensity::uniform({2.0}, {3.0});
  const EdgeLevelData disjoint = gen_edge_level({{4, 3, 5}, u1, u0}, rng);
  CHECK(empirical_dis(build_signed_graph(disjoint.features, u1, u0), disjoint.truth) == 0.0);
  const ParametricDensity g = ParametricDensity::gaussian({0.0}, {1.0});
  const EdgeLevelData same = gen_edge_level({{4, 4}, g, g}, rng);
  CHECK(empirical_dis(build_signed_graph(same.features, g, g), same.truth) == 0.0);
  const ParametricDensity g0 = ParametricDensity::gaussian({2.0}, {1.0});
  const EdgeLevelData mixed = gen_edge_level({{10, 10}, g, g0}, rng);
  const double dis = empirical_dis(build_signed_graph(mixed.features, g, g0), mixed.truth);
  CHECK(dis > 0.0);
  CHECK(std::isfinite(dis));
  CHECK_THROWS_AS(empirical_dis(build_signed_graph(mixed.features, g, g0), validate_partition({1, 2})),
                  std::invalid_argument);
}

TEST_CASE("expected_dis special cases") {
  Rng rng(3);
  const ParametricDensity g = ParametricDensity::gaussian({0.5}, {1.0});
  const ExpectedDisReport tie = expected_dis(g, g, 10, 20, 5000, rng);
  CHECK(tie.estimate == 0.0);
  const ExpectedDisReport disjoint = expected_dis(ParametricDensity::uniform({0.0}, {1.0}),
                                                  ParametricDensity::uniform({2.0}, {3.0}), 10, 20, 5000, rng);
  CHECK(disjoint.estimate == 0.0);
  CHECK(disjoint.std_error == 0.0);
  CHECK(disjoint.n1 == 10);
  CHECK(disjoint.n0 == 20);
  CHECK_THROWS_AS(expected_dis(g, g, 1, 1, 999, rng), std::invalid_argument);
}

TEST_CASE("expected_dis matches quadrature for N(0,1) vs N(2,1)") {
  Rng rng(4);
  const ExpectedDisReport r = expected_dis(ParametricDensity::gaussian({0.0}, {1.0}),
                                           ParametricDensity::gaussian({2.0}, {1.0}), 1, 1, 200000, rng);
  CHECK(r.sample_count == 200000);
  CHECK(r.std_error > 0.0);
  CHECK(r.estimate >= -3 * r.std_error);
  CHECK(std::abs(r.estimate - quadrature_expected_dis(1, 1)) <= 3 * r.std_error);
}

TEST_CASE("expected_dis is reproducible") {
  Rng a(9), b(9);
  const ParametricDensity p1 = ParametricDensity::gaussian({0.0}, {1.0});
  const ParametricDensity p0 = ParametricDensity::gaussian({1.0}, {1.0});
  CHECK(expected_dis(p1, p0, 3, 4, 2000, a).estimate == expected_dis(p1, p0, 3, 4, 2000, b).estimate);
}
