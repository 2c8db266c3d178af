#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "edgeclust/corrclust.h"

using namespace edgeclust;

namespace {

SignedWeightedGraph random_graph(Index n, double keep, Rng& rng) {
  SignedWeightedGraph g;
  g.n = n;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (rng.uniform() >= keep) {
        g.dropped.push_back({i, j});
        continue;
      }
      g.edges.push_back({{i, j}, rng.uniform() < 0.5 ? 1 : -1, rng.uniform(0.1, 3.0)});
    }
  }
  return g;
}

// Every labeling in {0..n-1}^n, no symmetry reduction.
double exhaustive_optimum(const SignedWeightedGraph& g) {
  const Index n = g.n;
  std::vector<int> labels(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    double cost = 0.0;
    for (const SignedEdge& e : g.edges) {
      const bool same = labels[e.pair.i] == labels[e.pair.j];
      if (e.sign > 0 ? !same : same) cost += e.cost;
    }
    best = std::min(best, cost);
    Index pos = 0;
    while (pos < n && ++labels[pos] == static_cast<int>(n)) labels[pos++] = 0;
    if (pos == n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("disagreement cost counts cut + edges and kept - edges") {
  SignedWeightedGraph g;
  g.n = 4;
  g.edges = {{{0, 1}, 1, 2.0}, {{1, 2}, -1, 0.5}, {{2, 3}, 1, 1.0}, {{0, 3}, -1, 4.0}};
  CHECK(disagreement_cost(g, validate_partition({1, 1, 2, 2})) == 0.0);
  CHECK(disagreement_cost(g, validate_partition({1, 1, 1, 1})) == 4.5);
  CHECK(disagreement_cost(g, validate_partition({1, 2, 3, 4})) == 3.0);
  CHECK_THROWS_AS(disagreement_cost(g, validate_partition({1, 2})), std::invalid_argument);
}

TEST_CASE("unit triangle with one negative edge has LP value 1") {
  SignedWeightedGraph g;
  g.n = 3;
  g.edges = {{{0, 1}, 1, 1.0}, {{1, 2}, 1, 1.0}, {{0, 2}, -1, 1.0}};
  const FractionalMetric m = lp_relax(g);
  CHECK(m.objective == doctest::Approx(1.0));
  CHECK(m.max_triangle_violation() <= 1e-6);
  CHECK(brute_force_optimum(g).cost == 1.0);
}

TEST_CASE("approximation constant") {
  CHECK(approximation_constant(100) == doctest::Approx(2.0 + 1.0 / std::log(101.0)));
}

TEST_CASE("brute force matches exhaustive labeling") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 2 + rng.below(5);
    const SignedWeightedGraph g = random_graph(n, 0.8, rng);
    const OptimumResult opt = brute_force_optimum(g);
    CHECK(opt.cost == doctest::Approx(exhaustive_optimum(g)));
    CHECK(disagreement_cost(g, opt.partition) == doctest::Approx(opt.cost));
  }
}

TEST_CASE("brute force rejects large graphs") {
  SignedWeightedGraph g;
  g.n = 13;
  CHECK_THROWS_AS(brute_force_optimum(g), std::invalid_argument);
}

TEST_CASE("LP bound and rounding sandwich the optimum") {
  Rng rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 3 + rng.below(6);
    const SignedWeightedGraph g = random_graph(n, 0.85, rng);
    if (g.edges.empty()) continue;
    const double opt = brute_force_optimum(g).cost;
    const SolveResult r = solve(g);
    const SolveCertificate& c = r.certificate;
    CAPTURE(trial);
    CHECK(c.lp_lower_bound <= opt + 1e-7);
    CHECK(c.rounded_cost >= opt - 1e-9);
    CHECK(c.rounded_cost <= c.bound_rhs + 1e-7);
    CHECK(c.max_triangle_violation <= 1e-6);
    CHECK(r.partition.size() == n);
  }
}

TEST_CASE("nodes without kept edges become singletons") {
  SignedWeightedGraph g;
  g.n = 5;
  g.edges = {{{0, 2}, 1, 1.0}, {{2, 3}, 1, 1.0}};
  const SolveResult r = solve(g);
  CHECK(r.partition[0] == r.partition[2]);
  CHECK(r.partition[2] == r.partition[3]);
  CHECK(r.partition.k() == 3);
  CHECK(r.certificate.rounded_cost == 0.0);
}

TEST_CASE("empty graph solves to all singletons") {
  SignedWeightedGraph g;
  g.n = 3;
  const SolveResult r = solve(g);
  CHECK(r.partition.k() == 3);
  CHECK(r.certificate.lp_lower_bound == 0.0);
}

TEST_CASE("kwik cluster only merges along + edges") {
  Rng rng(2);
  const SignedWeightedGraph g = random_graph(20, 0.5, rng);
  Rng pick(9);
  const Partition p = kwik_cluster(g, pick);
  CHECK(p.size() == 20);
  Rng again(9);
  CHECK(kwik_cluster(g, again) == p);
}

TEST_CASE("planted clusters are recovered exactly") {
  Rng rng(4);
  SignedWeightedGraph g;
  g.n = 30;
  for (Index i = 0; i < g.n; ++i) {
    for (Index j = i + 1; j < g.n; ++j) {
      const bool same = i % 3 == j % 3;
      g.edges.push_back({{i, j}, same ? 1 : -1, rng.uniform(0.5, 2.0)});
    }
  }
  const SolveResult r = solve(g);
  CHECK(r.certificate.rounded_cost == 0.0);
  CHECK(r.partition.k() == 3);
  CHECK(r.certificate.lp_lower_bound == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("single-sign graphs give integral LP solutions") {
  SignedWeightedGraph plus, minus;
  plus.n = minus.n = 5;
  for (Index i = 0; i < 5; ++i) {
    for (Index j = i + 1; j < 5; ++j) {
      plus.edges.push_back({{i, j}, 1, 1.0 + static_cast<double>(i)});
      minus.edges.push_back({{i, j}, -1, 2.0});
    }
  }
  const FractionalMetric mp = lp_relax(plus);
  const FractionalMetric mm = lp_relax(minus);
  CHECK(mp.objective == 0.0);
  CHECK(mm.objective == 0.0);
  for (Index i = 0; i < 5; ++i) {
    for (Index j = i + 1; j < 5; ++j) {
      CHECK(mp.x(i, j) == 0.0);
      CHECK(mm.x(i, j) == 1.0);
    }
  }
  CHECK(round_regions(mp, plus).k() == 1);
  CHECK(round_regions(mm, minus).k() == 5);
  const SolveResult r = solve(plus);
  CHECK(r.certificate.rounded_cost == 0.0);
  CHECK(r.certificate.lp_lower_bound == 0.0);
}

TEST_CASE("brute force examples") {
  SignedWeightedGraph cliques;
  cliques.n = 5;
  cliques.edges = {{{0, 1}, 1, 1.0}, {{0, 2}, 1, 1.0}, {{1, 2}, 1, 1.0}, {{3, 4}, 1, 2.0}};
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 3; j < 5; ++j) cliques.edges.push_back({{i, j}, -1, 1.0});
  }
  const OptimumResult c = brute_force_optimum(cliques);
  CHECK(c.cost == 0.0);
  CHECK(c.partition == validate_partition({1, 1, 1, 2, 2}));
  SignedWeightedGraph single;
  single.n = 2;
  single.edges = {{{0, 1}, -1, 1.0}};
  const OptimumResult s = brute_force_optimum(single);
  CHECK(s.cost == 0.0);
  CHECK(s.partition.k() == 2);
}

TEST_CASE("kwik cluster on simple graphs") {
  SignedWeightedGraph plus, minus;
  plus.n = minus.n = 6;
  for (Index i = 0; i < 6; ++i) {
    for (Index j = i + 1; j < 6; ++j) {
      plus.edges.push_back({{i, j}, 1, 1.0});
      minus.edges.push_back({{i, j}, -1, 1.0});
    }
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng a(seed), b(seed);
    CHECK(kwik_cluster(plus, a).k() == 1);
    CHECK(kwik_cluster(minus, b).k() == 6);
  }
}

TEST_CASE("kwik cluster expected cost on the unit triangle") {
  SignedWeightedGraph g;
  g.n = 3;
  g.edges = {{{0, 1}, 1, 1.0}, {{1, 2}, 1, 1.0}, {{0, 2}, -1, 1.0}};
  // Pivot 0 or 2 cuts one + edge; pivot 1 merges all three and keeps the
  // - edge. Every pivot costs exactly 1.
  double total = 0.0;
  const int runs = 3000;
  for (int s = 0; s < runs; ++s) {
    Rng rng(static_cast<std::uint64_t>(s));
    total += disagreement_cost(g, kwik_cluster(g, rng));
  }
  CHECK(total / runs == 1.0);
  CHECK(total / runs <= 3.0 * brute_force_optimum(g).cost);
}

TEST_CASE("rounding stays within the approximation factor of the optimum") {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 3 + rng.below(6);
    const SignedWeightedGraph g = random_graph(n, 0.9, rng);
    if (g.edges.empty()) continue;
    const double opt = brute_force_optimum(g).cost;
    const SolveResult r = solve(g);
    const double factor = approximation_constant(n) * std::log(static_cast<double>(n) + 1.0);
    CHECK(r.certificate.rounded_cost <= factor * opt + 1e-6);
  }
}

TEST_CASE("scaling costs by a power of two scales every objective exactly") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const SignedWeightedGraph g = random_graph(7, 0.9, rng);
    if (g.edges.empty()) continue;
    SignedWeightedGraph scaled = g;
    for (SignedEdge& e : scaled.edges) e.cost *= 4.0;
    const SolveResult a = solve(g), b = solve(scaled);
    CHECK(b.certificate.lp_lower_bound == doctest::Approx(4.0 * a.certificate.lp_lower_bound));
    CHECK(b.certificate.rounded_cost == 4.0 * a.certificate.rounded_cost);
    CHECK(a.partition == b.partition);
    const OptimumResult oa = brute_force_optimum(g), ob = brute_force_optimum(scaled);
    CHECK(ob.cost == 4.0 * oa.cost);
    CHECK(oa.partition == ob.partition);
  }
}

TEST_CASE("lp_relax rejects a graph without kept edges") {
  SignedWeightedGraph g;
  g.n = 4;
  CHECK_THROWS_AS(lp_relax(g), std::invalid_argument);
}
