#pragma once

#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "edgeclust/matrix.h"

namespace edgeclust {

// Malformed input files or datasets that violate a documented invariant.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The LP solver exhausted its iteration budget or lost feasibility.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unordered node pair stored with i < j.
struct PairIndex {
  Index i = 0;
  Index j = 0;

  friend auto operator<=>(const PairIndex&, const PairIndex&) = default;
};

// Throws std::invalid_argument when a == b.
PairIndex make_pair_index(Index a, Index b);

// Number of unordered pairs among n nodes.
constexpr Index pair_count(Index n) { return n < 2 ? 0 : n * (n - 1) / 2; }

// Position of (i, j), i < j, in the row-major enumeration of all pairs.
constexpr Index pair_rank(Index n, PairIndex p) {
  return p.i * n - p.i * (p.i + 1) / 2 + (p.j - p.i - 1);
}

PairIndex pair_from_rank(Index n, Index rank);

// Cluster assignment for n nodes. Labels are 1-based and dense: every value
// in 1..k occurs, numbered in order of first appearance.
class Partition {
 public:
  Partition() = default;

  Index size() const { return labels_.size(); }
  int k() const { return k_; }
  const std::vector<int>& labels() const { return labels_; }
  int operator[](Index node) const { return labels_[node]; }

  // Members of each cluster, cluster c at position c - 1.
  std::vector<std::vector<Index>> clusters() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  friend Partition validate_partition(std::span<const int> labels);
  std::vector<int> labels_;
  int k_ = 0;
};

// Canonical relabeling by first appearance. Throws std::invalid_argument on
// an empty vector.
Partition validate_partition(std::span<const int> labels);
Partition validate_partition(std::initializer_list<int> labels);

// 1 iff both endpoints share a cluster. Throws std::out_of_range when an
// endpoint is not a node of p and std::invalid_argument unless i < j.
int same_cluster(const Partition& p, PairIndex e);

struct SampleSet {
  Matrix features;
  std::optional<std::vector<int>> labels;

  Index n() const { return features.rows(); }
  Index dim() const { return features.cols(); }
  bool has_labels() const { return labels.has_value(); }
  Partition truth() const;
};

// Throws DataError if a SampleSet invariant is violated.
void check_sample_set(const SampleSet& s);

struct ScoreReport {
  double nmi = 0.0;
  double pairwise_precision = 0.0;
  double pairwise_recall = 0.0;
  double pairwise_f1 = 0.0;
  int k_predicted = 0;
};

// NMI with the arithmetic-mean normalizer (natural log) plus pair-counting
// precision/recall, treating each same-cluster pair as a positive.
ScoreReport score(const Partition& predicted, const Partition& truth);

double normalized_mutual_information(const Partition& a, const Partition& b);

}  // namespace edgeclust
