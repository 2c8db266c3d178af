#include "edgeclust/corrclust.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace edgeclust {

double disagreement_cost(const SignedWeightedGraph& g, const Partition& p) {
  if (p.size() != g.n) {
    throw std::invalid_argument("disagreement_cost: partition covers " +
                                std::to_string(p.size()) + " nodes, graph has " +
                                std::to_string(g.n));
  }
  double cost = 0.0;
  for (const SignedEdge& e : g.edges) {
    const bool same = p[e.pair.i] == p[e.pair.j];
    if ((e.sign > 0 && !same) || (e.sign < 0 && same)) cost += e.cost;
  }
  return cost;
}

double FractionalMetric::max_triangle_violation() const {
  const Index n = nodes.size();
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double xij = x(i, j);
      for (Index l = 0; l < n; ++l) {
        if (l == i || l == j) continue;
        worst = std::max(worst, xij - x(i, l) - x(l, j));
      }
    }
  }
  return worst;
}

double approximation_constant(Index n) {
  return 2.0 + 1.0 / std::log(static_cast<double>(n) + 1.0);
}

namespace {

struct Cut {
  double violation;
  Index i, j, l;
};

std::vector<Index> kept_nodes(const SignedWeightedGraph& g) {
  std::vector<bool> used(g.n, false);
  for (const SignedEdge& e : g.edges) {
    used[e.pair.i] = true;
    used[e.pair.j] = true;
  }
  std::vector<Index> nodes;
  for (Index v = 0; v < g.n; ++v) {
    if (used[v]) nodes.push_back(v);
  }
  return nodes;
}

}  // namespace

FractionalMetric lp_relax(const SignedWeightedGraph& g,
                          const LpRelaxOptions& options) {
  if (g.edges.empty()) {
    throw std::invalid_argument("lp_relax: graph has no kept edges");
  }
  FractionalMetric metric;
  metric.nodes = kept_nodes(g);
  const Index n = metric.nodes.size();
  std::vector<Index> local(g.n, 0);
  for (Index a = 0; a < n; ++a) local[metric.nodes[a]] = a;

  const Index vars = pair_count(n);
  const auto var = [n](Index a, Index b) {
    return a < b ? pair_rank(n, {a, b}) : pair_rank(n, {b, a});
  };
  std::vector<double> cost(vars, 0.0);
  double constant = 0.0;
  for (const SignedEdge& e : g.edges) {
    const Index v = var(local[e.pair.i], local[e.pair.j]);
    if (e.sign > 0) {
      cost[v] = e.cost;
    } else {
      cost[v] = -e.cost;
      constant += e.cost;
    }
  }
  DualSimplex lp(cost, std::vector<double>(vars, 0.0),
                 std::vector<double>(vars, 1.0));

  Matrix x(n, n);
  const auto load = [&] {
    const auto values = lp.values();
    for (Index a = 0; a < n; ++a) {
      for (Index b = a + 1; b < n; ++b) {
        x(a, b) = x(b, a) = values[var(a, b)];
      }
    }
  };

  std::vector<Cut> cuts;
  for (Index round = 0;; ++round) {
    if (round >= options.max_rounds) {
      throw SolverError("lp_relax: cutting-plane round limit reached");
    }
    lp.optimize();
    load();
    cuts.clear();
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double xij = x(i, j);
        if (xij <= options.violation_tolerance) continue;
        for (Index l = 0; l < n; ++l) {
          if (l == i || l == j) continue;
          const double v = xij - x(i, l) - x(l, j);
          if (v > options.violation_tolerance) cuts.push_back({v, i, j, l});
        }
      }
    }
    if (cuts.empty()) break;
    const auto order = [](const Cut& a, const Cut& b) {
      if (a.violation != b.violation) return a.violation > b.violation;
      return std::tie(a.i, a.j, a.l) < std::tie(b.i, b.j, b.l);
    };
    const Index take = std::min(cuts.size(), options.max_cuts_per_round);
    std::partial_sort(cuts.begin(), cuts.begin() + static_cast<std::ptrdiff_t>(take),
                      cuts.end(), order);
    lp.drop_inactive_rows();
    for (Index c = 0; c < take; ++c) {
      const Cut& cut = cuts[c];
      const LpEntry row[3] = {{var(cut.i, cut.j), 1.0},
                              {var(cut.i, cut.l), -1.0},
                              {var(cut.l, cut.j), -1.0}};
      lp.add_row(row, 0.0);
    }
  }
  metric.x = std::move(x);
  metric.objective = constant + lp.objective();
  metric.stats = lp.stats();
  return metric;
}

Partition round_regions(const FractionalMetric& metric,
                        const SignedWeightedGraph& g) {
  const Index n = metric.nodes.size();
  if (metric.x.rows() != n || metric.x.cols() != n) {
    throw std::invalid_argument("round_regions: metric shape mismatch");
  }
  std::vector<std::int64_t> local(g.n, -1);
  for (Index a = 0; a < n; ++a) {
    if (metric.nodes[a] >= g.n) {
      throw std::invalid_argument("round_regions: metric node outside graph");
    }
    local[metric.nodes[a]] = static_cast<std::int64_t>(a);
  }
  struct Arc {
    Index to;
    double cost;
  };
  std::vector<std::vector<Arc>> positive(n);
  for (const SignedEdge& e : g.edges) {
    if (e.sign <= 0) continue;
    const std::int64_t a = local[e.pair.i];
    const std::int64_t b = local[e.pair.j];
    if (a < 0 || b < 0) {
      throw std::invalid_argument("round_regions: edge endpoint not in metric");
    }
    positive[static_cast<Index>(a)].push_back({static_cast<Index>(b), e.cost});
    positive[static_cast<Index>(b)].push_back({static_cast<Index>(a), e.cost});
  }

  const double factor =
      approximation_constant(g.n) * std::log(static_cast<double>(g.n) + 1.0);
  const double seed_volume =
      std::max(metric.objective, 0.0) / static_cast<double>(std::max<Index>(n, 1));
  const double slack = 1e-12 * (1.0 + std::abs(metric.objective));

  std::vector<int> label(n, 0);
  std::vector<bool> assigned(n, false);
  std::vector<bool> in_ball(n, false);
  int next_label = 0;
  for (Index u = 0; u < n; ++u) {
    if (assigned[u]) continue;
    std::vector<double> radii;
    for (Index v = 0; v < n; ++v) {
      if (!assigned[v]) radii.push_back(v == u ? 0.0 : metric.x(u, v));
    }
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    std::vector<Index> best_ball;
    double best_margin = std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (Index k = 0; k < radii.size() && radii[k] < 0.5; ++k) {
      const double r = radii[k];
      // Same ball for every radius in [r, r_hi); evaluate at the top end.
      const double r_hi = k + 1 < radii.size() ? std::min(radii[k + 1], 0.5) : 0.5;
      std::vector<Index> ball;
      for (Index v = 0; v < n; ++v) {
        if (assigned[v]) continue;
        const double dist = v == u ? 0.0 : metric.x(u, v);
        if (dist <= r) {
          ball.push_back(v);
          in_ball[v] = true;
        }
      }
      double cut = 0.0;
      double volume = seed_volume;
      for (Index v : ball) {
        const double dv = v == u ? 0.0 : metric.x(u, v);
        for (const Arc& arc : positive[v]) {
          if (assigned[arc.to]) continue;
          if (in_ball[arc.to]) {
            if (v < arc.to) volume += arc.cost * metric.x(v, arc.to);
          } else {
            cut += arc.cost;
            volume += arc.cost * (r_hi - dv);
          }
        }
      }
      for (Index v : ball) in_ball[v] = false;
      const double margin = cut - factor * volume;
      if (margin <= slack) {
        best_ball = std::move(ball);
        accepted = true;
        break;
      }
      if (margin < best_margin) {
        best_margin = margin;
        best_ball = std::move(ball);
      }
    }
    if (!accepted && best_ball.empty()) best_ball = {u};
    ++next_label;
    for (Index v : best_ball) {
      assigned[v] = true;
      label[v] = next_label;
    }
  }

  std::vector<int> labels(g.n, 0);
  for (Index a = 0; a < n; ++a) labels[metric.nodes[a]] = label[a];
  for (Index v = 0; v < g.n; ++v) {
    if (labels[v] == 0) labels[v] = ++next_label;
  }
  return validate_partition(labels);
}

Partition kwik_cluster(const SignedWeightedGraph& g, Rng& rng) {
  if (g.n == 0) throw std::invalid_argument("kwik_cluster: empty graph");
  std::vector<std::vector<Index>> positive(g.n);
  for (const SignedEdge& e : g.edges) {
    if (e.sign > 0) {
      positive[e.pair.i].push_back(e.pair.j);
      positive[e.pair.j].push_back(e.pair.i);
    }
  }
  std::vector<int> labels(g.n, 0);
  std::vector<Index> unassigned(g.n);
  std::iota(unassigned.begin(), unassigned.end(), Index{0});
  int next_label = 0;
  while (!unassigned.empty()) {
    const Index pivot = unassigned[rng.below(unassigned.size())];
    ++next_label;
    labels[pivot] = next_label;
    for (Index v : positive[pivot]) {
      if (labels[v] == 0) labels[v] = next_label;
    }
    std::erase_if(unassigned, [&](Index v) { return labels[v] != 0; });
  }
  return validate_partition(labels);
}

OptimumResult brute_force_optimum(const SignedWeightedGraph& g) {
  if (g.n > kBruteForceMaxNodes) {
    throw std::invalid_argument("brute_force_optimum: n = " + std::to_string(g.n) +
                                " exceeds the limit of 12");
  }
  if (g.n == 0) throw std::invalid_argument("brute_force_optimum: empty graph");
  const Index n = g.n;
  // Signed weight: > 0 for + edges, < 0 for - edges, 0 when absent.
  Matrix w(n, n);
  for (const SignedEdge& e : g.edges) {
    w(e.pair.i, e.pair.j) = w(e.pair.j, e.pair.i) = e.sign * e.cost;
  }
  std::vector<int> current(n, 0);
  std::vector<int> best(n, 0);
  double best_cost = std::numeric_limits<double>::infinity();

  // Depth-first over restricted growth strings; a branch is pruned once its
  // partial cost reaches the incumbent because costs only accumulate.
  const auto recurse = [&](auto&& self, Index v, int blocks, double partial) -> void {
    if (partial >= best_cost) return;
    if (v == n) {
      best_cost = partial;
      best = current;
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      double add = 0.0;
      for (Index u = 0; u < v; ++u) {
        const double wt = w(u, v);
        if (wt == 0.0) continue;
        const bool same = current[u] == b;
        if (wt > 0 && !same) add += wt;
        if (wt < 0 && same) add -= wt;
      }
      current[v] = b;
      self(self, v + 1, std::max(blocks, b + 1), partial + add);
    }
  };
  current[0] = 0;
  recurse(recurse, 1, 1, 0.0);
  for (int& l : best) ++l;
  return {validate_partition(best), best_cost};
}

SolveResult solve(const SignedWeightedGraph& g, const LpRelaxOptions& options) {
  if (g.n == 0) throw std::invalid_argument("solve: empty graph");
  SolveResult result;
  SolveCertificate& cert = result.certificate;
  cert.n = g.n;
  cert.c1 = approximation_constant(g.n);
  if (g.edges.empty()) {
    std::vector<int> labels(g.n);
    std::iota(labels.begin(), labels.end(), 1);
    result.partition = validate_partition(labels);
    return result;
  }
  const FractionalMetric metric = lp_relax(g, options);
  result.partition = round_regions(metric, g);
  cert.lp_lower_bound = metric.objective;
  cert.rounded_cost = disagreement_cost(g, result.partition);
  cert.bound_rhs =
      cert.c1 * std::log(static_cast<double>(g.n) + 1.0) * cert.lp_lower_bound;
  cert.max_triangle_violation = metric.max_triangle_violation();
  return result;
}

}  // namespace edgeclust
