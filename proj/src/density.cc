#include "edgeclust/density.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "edgeclust/parallel.h"

namespace edgeclust {

namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

DensityModel::DensityModel(Matrix training_points,
                           std::vector<double> bandwidths, double log_floor)
    : points_(std::move(training_points)),
      bandwidths_(std::move(bandwidths)),
      log_floor_(log_floor) {
  if (points_.rows() == 0) {
    throw std::invalid_argument("DensityModel: no training points");
  }
  if (bandwidths_.size() != points_.cols()) {
    throw std::invalid_argument("DensityModel: one bandwidth per dimension");
  }
  log_norm_ = -std::log(static_cast<double>(points_.rows())) -
              static_cast<double>(points_.cols()) * kLogSqrtTwoPi;
  for (double h : bandwidths_) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw std::invalid_argument("DensityModel: bandwidths must be positive");
    }
    log_norm_ -= std::log(h);
  }
}

double DensityModel::log_pdf(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("kde_logpdf: dimension mismatch");
  }
  const Index m = points_.rows();
  const Index d = dim();
  std::vector<double> exponents(m);
  double peak = kNegInf;
  for (Index k = 0; k < m; ++k) {
    const auto p = points_.row(k);
    double q = 0.0;
    for (Index c = 0; c < d; ++c) {
      const double z = (x[c] - p[c]) / bandwidths_[c];
      q += z * z;
    }
    exponents[k] = -0.5 * q;
    peak = std::max(peak, exponents[k]);
  }
  if (!std::isfinite(peak)) return log_floor_;
  double sum = 0.0;
  for (double e : exponents) sum += std::exp(e - peak);
  const double value = log_norm_ + peak + std::log(sum);
  if (std::isnan(value)) return log_floor_;
  return std::max(value, log_floor_);
}

DensityModel kde_fit(const Matrix& vectors) {
  if (vectors.rows() < 2) {
    throw std::invalid_argument(
        "kde_fit: bandwidth needs >= 2 training rows; construct DensityModel "
        "with explicit bandwidths instead");
  }
  const Index m = vectors.rows();
  const Index d = vectors.cols();
  const double factor =
      std::pow(static_cast<double>(m), -1.0 / (static_cast<double>(d) + 4.0));
  std::vector<double> h(d);
  for (Index c = 0; c < d; ++c) {
    double mean = 0.0;
    for (Index r = 0; r < m; ++r) mean += vectors(r, c);
    mean /= static_cast<double>(m);
    double ss = 0.0;
    for (Index r = 0; r < m; ++r) {
      const double dv = vectors(r, c) - mean;
      ss += dv * dv;
    }
    const double sigma = std::sqrt(ss / static_cast<double>(m - 1));
    h[c] = std::max(sigma * factor, 1e-6 * (1.0 + std::abs(sigma)));
  }
  return DensityModel(vectors, std::move(h));
}

double kde_logpdf(const DensityModel& model, std::span<const double> x) {
  return model.log_pdf(x);
}

ParametricDensity::ParametricDensity(std::vector<double> weights,
                                     std::vector<DensityComponent> components)
    : weights_(std::move(weights)), components_(std::move(components)) {
  if (components_.empty() || weights_.size() != components_.size()) {
    throw std::invalid_argument(
        "ParametricDensity: need one weight per component");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0)) throw std::invalid_argument("ParametricDensity: weight <= 0");
    total += w;
  }
  for (double& w : weights_) w /= total;
  for (Index c = 0; c < components_.size(); ++c) {
    const Index d = std::visit(
        [](const auto& comp) -> Index {
          using T = std::decay_t<decltype(comp)>;
          if constexpr (std::is_same_v<T, GaussianComponent>) {
            if (comp.mean.size() != comp.sd.size() || comp.mean.empty()) {
              throw std::invalid_argument("gaussian: mean/sd size mismatch");
            }
            for (double s : comp.sd) {
              if (!(s > 0.0)) throw std::invalid_argument("gaussian: sd <= 0");
            }
            return comp.mean.size();
          } else {
            if (comp.lo.size() != comp.hi.size() || comp.lo.empty()) {
              throw std::invalid_argument("uniform: lo/hi size mismatch");
            }
            for (Index j = 0; j < comp.lo.size(); ++j) {
              if (!(comp.hi[j] > comp.lo[j])) {
                throw std::invalid_argument("uniform: need hi > lo");
              }
            }
            return comp.lo.size();
          }
        },
        components_[c]);
    if (c == 0) {
      dim_ = d;
    } else if (d != dim_) {
      throw std::invalid_argument("ParametricDensity: component dims differ");
    }
  }
}

ParametricDensity ParametricDensity::gaussian(std::vector<double> mean,
                                              std::vector<double> sd) {
  return ParametricDensity(
      {1.0}, {GaussianComponent{std::move(mean), std::move(sd)}});
}

ParametricDensity ParametricDensity::uniform(std::vector<double> lo,
                                             std::vector<double> hi) {
  return ParametricDensity({1.0},
                           {UniformComponent{std::move(lo), std::move(hi)}});
}

double ParametricDensity::log_pdf(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw std::invalid_argument("ParametricDensity: dimension mismatch");
  }
  std::vector<double> terms;
  terms.reserve(components_.size());
  for (Index c = 0; c < components_.size(); ++c) {
    double lp = std::log(weights_[c]);
    std::visit(
        [&](const auto& comp) {
          using T = std::decay_t<decltype(comp)>;
          if constexpr (std::is_same_v<T, GaussianComponent>) {
            for (Index j = 0; j < dim_; ++j) {
              const double z = (x[j] - comp.mean[j]) / comp.sd[j];
              lp += -0.5 * z * z - std::log(comp.sd[j]) - kLogSqrtTwoPi;
            }
          } else {
            for (Index j = 0; j < dim_; ++j) {
              if (x[j] < comp.lo[j] || x[j] > comp.hi[j]) {
                lp = kNegInf;
                return;
              }
              lp -= std::log(comp.hi[j] - comp.lo[j]);
            }
          }
        },
        components_[c]);
    terms.push_back(lp);
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - peak);
  return peak + std::log(sum);
}

std::vector<double> ParametricDensity::sample(Rng& rng) const {
  double u = rng.uniform();
  Index pick = components_.size() - 1;
  for (Index c = 0; c < components_.size(); ++c) {
    if (u < weights_[c]) {
      pick = c;
      break;
    }
    u -= weights_[c];
  }
  std::vector<double> out(dim_);
  std::visit(
      [&](const auto& comp) {
        using T = std::decay_t<decltype(comp)>;
        for (Index j = 0; j < dim_; ++j) {
          if constexpr (std::is_same_v<T, GaussianComponent>) {
            out[j] = rng.normal(comp.mean[j], comp.sd[j]);
          } else {
            out[j] = rng.uniform(comp.lo[j], comp.hi[j]);
          }
        }
      },
      components_[pick]);
  return out;
}

LogOdds log_odds(const Density& p1, const Density& p0,
                 std::span<const double> e) {
  if (p1.dim() != e.size() || p0.dim() != e.size()) {
    throw std::invalid_argument("log_odds: dimension mismatch");
  }
  double r = p1.log_pdf(e) - p0.log_pdf(e);
  // Both densities zero (-inf - -inf): no evidence either way.
  if (std::isnan(r)) r = 0.0;
  r = std::clamp(r, -kLogOddsClamp, kLogOddsClamp);
  LogOdds out;
  out.sign = r > 0 ? 1 : (r < 0 ? -1 : 0);
  out.cost = std::abs(r);
  return out;
}

SignedWeightedGraph build_signed_graph(const EdgeFeatureSet& features,
                                       const Density& p1, const Density& p0,
                                       double sparsify_below) {
  if (!(sparsify_below >= 0.0)) {
    throw std::invalid_argument("build_signed_graph: threshold must be >= 0");
  }
  if (features.dim() != p1.dim() || features.dim() != p0.dim()) {
    throw std::invalid_argument("build_signed_graph: dimension mismatch");
  }
  {
    std::vector<PairIndex> sorted = features.pairs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("build_signed_graph: duplicate pair");
    }
  }
  std::vector<LogOdds> odds(features.size());
  parallel_for(features.size(), [&](Index begin, Index end) {
    for (Index r = begin; r < end; ++r) {
      odds[r] = log_odds(p1, p0, features.vectors.row(r));
    }
  });

  SignedWeightedGraph g;
  g.n = features.n;
  for (const PairIndex& p : features.pairs) g.n = std::max(g.n, p.j + 1);
  for (Index r = 0; r < features.size(); ++r) {
    if (odds[r].sign == 0 || odds[r].cost <= sparsify_below) {
      g.dropped.push_back(features.pairs[r]);
    } else {
      g.edges.push_back({features.pairs[r], odds[r].sign, odds[r].cost});
    }
  }
  return g;
}

void write_graph_tsv(const SignedWeightedGraph& g, std::ostream& out) {
  char buf[64];
  for (const SignedEdge& e : g.edges) {
    const auto res = std::to_chars(buf, buf + sizeof buf, e.cost);
    out << e.pair.i << '\t' << e.pair.j << '\t' << e.sign << '\t'
        << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))
        << '\n';
  }
}

SignedWeightedGraph read_graph_tsv(std::istream& in, Index n_nodes) {
  SignedWeightedGraph g;
  std::string line;
  Index line_no = 0;
  Index max_node = 0;
  bool any = false;
  std::vector<PairIndex> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    const auto fail = [&](const std::string& why) {
      return DataError("graph TSV line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 4) throw fail("expected 4 tab-separated fields");
    long long i = 0, j = 0;
    int sign = 0;
    double cost = 0.0;
    try {
      std::size_t pos = 0;
      i = std::stoll(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument("i");
      j = std::stoll(fields[1], &pos);
      if (pos != fields[1].size()) throw std::invalid_argument("j");
      sign = std::stoi(fields[2], &pos);
      if (pos != fields[2].size()) throw std::invalid_argument("sign");
      cost = std::stod(fields[3], &pos);
      if (pos != fields[3].size()) throw std::invalid_argument("cost");
    } catch (const std::exception&) {
      throw fail("non-numeric field");
    }
    if (i < 0 || j < 0 || i == j) throw fail("invalid node pair");
    if (sign != 1 && sign != -1) throw fail("sign must be +1 or -1");
    if (!std::isfinite(cost) || cost < 0) throw fail("cost must be finite >= 0");
    const PairIndex p = make_pair_index(static_cast<Index>(i),
                                        static_cast<Index>(j));
    g.edges.push_back({p, sign, cost});
    seen.push_back(p);
    max_node = std::max(max_node, p.j);
    any = true;
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw DataError("graph TSV: duplicate pair");
  }
  const Index inferred = any ? max_node + 1 : 0;
  if (n_nodes != 0 && n_nodes < inferred) {
    throw DataError("graph TSV references node >= declared node count");
  }
  g.n = n_nodes != 0 ? n_nodes : inferred;
  return g;
}

}  // namespace edgeclust
