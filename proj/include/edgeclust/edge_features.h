#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "edgeclust/core.h"
#include "edgeclust/random.h"

namespace edgeclust {

enum class Similarity { kAbsDiff, kEuclidean };

std::string_view to_string(Similarity kind);
// Accepts "absdiff" / "euclid" (and the long forms "abs_diff" / "euclidean").
Similarity parse_similarity(std::string_view name);

// Edge feature vector for a node pair. abs_diff is elementwise |u - v|;
// euclidean is the one-element vector [||u - v||_2].
std::vector<double> similarity(std::span<const double> u,
                               std::span<const double> v, Similarity kind);

Index similarity_dim(Index node_dim, Similarity kind);

// Per-pair edge features. Row r of `vectors` belongs to pairs[r]; `n` is the
// node count of the graph the pairs index into.
struct EdgeFeatureSet {
  Index n = 0;
  std::vector<PairIndex> pairs;
  Matrix vectors;

  Index size() const { return pairs.size(); }
  Index dim() const { return vectors.cols(); }
};

EdgeFeatureSet edge_features(const SampleSet& s,
                             std::span<const PairIndex> pairs,
                             Similarity kind);

// Features for all C(n, 2) pairs in row-major pair order.
EdgeFeatureSet complete_edge_features(const SampleSet& s, Similarity kind);

struct LabeledPair {
  PairIndex pair;
  bool same = false;
};

// Training pairs split by the ground-truth co-membership indicator.
struct LabeledPairSet {
  Matrix same_vectors;
  Matrix diff_vectors;
  std::vector<LabeledPair> pairs;  // sampling order: ascending pair rank
};

// Draws min(m, C(n,2)) distinct pairs uniformly. Throws std::invalid_argument
// for m == 0 and DataError for unlabeled or degenerate sample sets.
LabeledPairSet sample_labeled_pairs(const SampleSet& s, Index m,
                                    Similarity kind, Rng& rng);

// Rebuilds a LabeledPairSet from an explicit pair list (e.g. a pairs file).
LabeledPairSet labeled_pairs_from_list(const SampleSet& s,
                                       std::span<const LabeledPair> pairs,
                                       Similarity kind);

struct PcaModel {
  std::vector<double> mean;
  Matrix components;  // d x r, orthonormal columns
  std::vector<double> explained_variance;
  bool zero_variance = false;  // all fitted rows were identical

  Index input_dim() const { return mean.size(); }
  Index output_dim() const { return components.cols(); }
};

// Keeps the smallest r whose cumulative explained variance reaches
// variance_target. Throws std::invalid_argument for < 2 rows or a target
// outside (0, 1].
PcaModel pca_fit(const Matrix& vectors, double variance_target = 0.95);
Matrix pca_transform(const PcaModel& model, const Matrix& vectors);
Matrix pca_inverse(const PcaModel& model, const Matrix& projected);

}  // namespace edgeclust
