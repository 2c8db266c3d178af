#include "edgeclust/edge_features.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "edgeclust/parallel.h"

namespace edgeclust {

std::string_view to_string(Similarity kind) {
  return kind == Similarity::kAbsDiff ? "absdiff" : "euclid";
}

Similarity parse_similarity(std::string_view name) {
  if (name == "absdiff" || name == "abs_diff") return Similarity::kAbsDiff;
  if (name == "euclid" || name == "euclidean") return Similarity::kEuclidean;
  throw std::invalid_argument("unknown similarity '" + std::string(name) + "'");
}

Index similarity_dim(Index node_dim, Similarity kind) {
  return kind == Similarity::kAbsDiff ? node_dim : 1;
}

namespace {

void similarity_into(std::span<const double> u, std::span<const double> v,
                     Similarity kind, std::span<double> out) {
  if (kind == Similarity::kAbsDiff) {
    for (Index c = 0; c < u.size(); ++c) out[c] = std::abs(u[c] - v[c]);
  } else {
    double ss = 0.0;
    for (Index c = 0; c < u.size(); ++c) {
      const double d = u[c] - v[c];
      ss += d * d;
    }
    out[0] = std::sqrt(ss);
  }
}

}  // namespace

std::vector<double> similarity(std::span<const double> u,
                               std::span<const double> v, Similarity kind) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("similarity: dimension mismatch");
  }
  if (u.empty()) throw std::invalid_argument("similarity: empty vectors");
  for (Index c = 0; c < u.size(); ++c) {
    if (!std::isfinite(u[c]) || !std::isfinite(v[c])) {
      throw std::invalid_argument("similarity: non-finite input");
    }
  }
  std::vector<double> out(similarity_dim(u.size(), kind));
  similarity_into(u, v, kind, out);
  return out;
}

EdgeFeatureSet edge_features(const SampleSet& s,
                             std::span<const PairIndex> pairs,
                             Similarity kind) {
  check_sample_set(s);
  EdgeFeatureSet out;
  out.n = s.n();
  out.pairs.assign(pairs.begin(), pairs.end());
  out.vectors = Matrix(pairs.size(), similarity_dim(s.dim(), kind));
  for (const PairIndex& p : pairs) {
    if (p.i >= p.j || p.j >= s.n()) {
      throw std::invalid_argument("edge_features: invalid pair");
    }
  }
  parallel_for(pairs.size(), [&](Index begin, Index end) {
    for (Index r = begin; r < end; ++r) {
      similarity_into(s.features.row(pairs[r].i), s.features.row(pairs[r].j),
                      kind, out.vectors.row(r));
    }
  });
  return out;
}

EdgeFeatureSet complete_edge_features(const SampleSet& s, Similarity kind) {
  std::vector<PairIndex> pairs;
  pairs.reserve(pair_count(s.n()));
  for (Index i = 0; i < s.n(); ++i) {
    for (Index j = i + 1; j < s.n(); ++j) pairs.push_back({i, j});
  }
  return edge_features(s, pairs, kind);
}

LabeledPairSet labeled_pairs_from_list(const SampleSet& s,
                                       std::span<const LabeledPair> pairs,
                                       Similarity kind) {
  check_sample_set(s);
  const Index d = similarity_dim(s.dim(), kind);
  LabeledPairSet out;
  out.same_vectors = Matrix(0, d);
  out.diff_vectors = Matrix(0, d);
  std::vector<double> buf(d);
  for (const LabeledPair& lp : pairs) {
    if (lp.pair.i >= lp.pair.j || lp.pair.j >= s.n()) {
      throw DataError("labeled pair (" + std::to_string(lp.pair.i) + "," +
                      std::to_string(lp.pair.j) + ") is not a valid pair");
    }
    similarity_into(s.features.row(lp.pair.i), s.features.row(lp.pair.j), kind,
                    buf);
    (lp.same ? out.same_vectors : out.diff_vectors).append_row(buf);
    out.pairs.push_back(lp);
  }
  return out;
}

LabeledPairSet sample_labeled_pairs(const SampleSet& s, Index m,
                                    Similarity kind, Rng& rng) {
  if (m == 0) throw std::invalid_argument("sample_labeled_pairs: m must be > 0");
  if (!s.has_labels()) throw DataError("sample_labeled_pairs: labels required");
  check_sample_set(s);
  const Partition truth = s.truth();
  if (s.n() < 2 || truth.k() == 1 || truth.k() == static_cast<int>(s.n())) {
    throw DataError(
        "sample_labeled_pairs: labeling has no same-cluster or no "
        "cross-cluster pairs");
  }
  const Index total = pair_count(s.n());
  std::vector<Index> ranks;
  if (m >= total) {
    ranks.resize(total);
    for (Index r = 0; r < total; ++r) ranks[r] = r;
  } else {
    // Floyd's algorithm: m distinct ranks from [0, total).
    std::unordered_set<Index> chosen;
    chosen.reserve(2 * m);
    for (Index j = total - m; j < total; ++j) {
      const Index t = rng.below(j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    ranks.assign(chosen.begin(), chosen.end());
    std::sort(ranks.begin(), ranks.end());
  }
  std::vector<LabeledPair> pairs;
  pairs.reserve(ranks.size());
  for (Index r : ranks) {
    const PairIndex p = pair_from_rank(s.n(), r);
    pairs.push_back({p, same_cluster(truth, p) == 1});
  }
  return labeled_pairs_from_list(s, pairs, kind);
}

PcaModel pca_fit(const Matrix& vectors, double variance_target) {
  if (vectors.rows() < 2) throw std::invalid_argument("pca_fit: need >= 2 rows");
  if (!(variance_target > 0.0 && variance_target <= 1.0)) {
    throw std::invalid_argument("pca_fit: variance_target must be in (0, 1]");
  }
  const Index m = vectors.rows();
  const Index d = vectors.cols();
  PcaModel model;
  model.mean.assign(d, 0.0);
  for (Index r = 0; r < m; ++r) {
    for (Index c = 0; c < d; ++c) model.mean[c] += vectors(r, c);
  }
  for (double& x : model.mean) x /= static_cast<double>(m);

  Matrix cov(d, d);
  for (Index r = 0; r < m; ++r) {
    for (Index a = 0; a < d; ++a) {
      const double da = vectors(r, a) - model.mean[a];
      for (Index b = a; b < d; ++b) {
        cov(a, b) += da * (vectors(r, b) - model.mean[b]);
      }
    }
  }
  for (Index a = 0; a < d; ++a) {
    for (Index b = a; b < d; ++b) {
      cov(a, b) /= static_cast<double>(m - 1);
      cov(b, a) = cov(a, b);
    }
  }
  const SymmetricEigen eig = jacobi_eigen(cov);
  double total = 0.0;
  for (double v : eig.values) total += std::max(v, 0.0);

  Index r = 1;
  if (total <= 0.0) {
    model.zero_variance = true;
  } else {
    double cumulative = 0.0;
    r = d;
    for (Index c = 0; c < d; ++c) {
      cumulative += std::max(eig.values[c], 0.0);
      // Relative slack absorbs rounding in the cumulative sum.
      if (cumulative >= variance_target * total * (1.0 - 1e-12)) {
        r = c + 1;
        break;
      }
    }
  }
  model.components = Matrix(d, r);
  model.explained_variance.resize(r);
  for (Index c = 0; c < r; ++c) {
    model.explained_variance[c] = std::max(eig.values[c], 0.0);
    for (Index a = 0; a < d; ++a) model.components(a, c) = eig.vectors(a, c);
  }
  return model;
}

Matrix pca_transform(const PcaModel& model, const Matrix& vectors) {
  if (vectors.cols() != model.input_dim()) {
    throw std::invalid_argument("pca_transform: dimension mismatch");
  }
  const Index r = model.output_dim();
  Matrix out(vectors.rows(), r);
  for (Index row = 0; row < vectors.rows(); ++row) {
    for (Index a = 0; a < model.input_dim(); ++a) {
      const double centered = vectors(row, a) - model.mean[a];
      for (Index c = 0; c < r; ++c) {
        out(row, c) += centered * model.components(a, c);
      }
    }
  }
  return out;
}

Matrix pca_inverse(const PcaModel& model, const Matrix& projected) {
  if (projected.cols() != model.output_dim()) {
    throw std::invalid_argument("pca_inverse: dimension mismatch");
  }
  Matrix out(projected.rows(), model.input_dim());
  for (Index row = 0; row < projected.rows(); ++row) {
    for (Index a = 0; a < model.input_dim(); ++a) {
      double x = model.mean[a];
      for (Index c = 0; c < model.output_dim(); ++c) {
        x += projected(row, c) * model.components(a, c);
      }
      out(row, a) = x;
    }
  }
  return out;
}

}  // namespace edgeclust
