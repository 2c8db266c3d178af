#include "edgeclust/core.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace edgeclust {

PairIndex make_pair_index(Index a, Index b) {
  if (a == b) throw std::invalid_argument("pair endpoints must differ");
  return a < b ? PairIndex{a, b} : PairIndex{b, a};
}

PairIndex pair_from_rank(Index n, Index rank) {
  if (rank >= pair_count(n)) throw std::out_of_range("pair rank out of range");
  // Row i starts at i*n - i*(i+1)/2; invert the quadratic, then correct
  // for floating-point rounding.
  const auto row_start = [n](Index i) { return i * n - i * (i + 1) / 2; };
  const double b = 2.0 * static_cast<double>(n) - 1.0;
  const double disc = b * b - 8.0 * static_cast<double>(rank);
  auto i = static_cast<Index>(
      std::max(0.0, std::floor((b - std::sqrt(std::max(disc, 0.0))) / 2.0)));
  i = std::min(i, n - 2);
  while (i > 0 && row_start(i) > rank) --i;
  while (i + 1 < n - 1 && row_start(i + 1) <= rank) ++i;
  return {i, i + 1 + (rank - row_start(i))};
}

std::vector<std::vector<Index>> Partition::clusters() const {
  std::vector<std::vector<Index>> out(static_cast<Index>(k_));
  for (Index v = 0; v < labels_.size(); ++v) {
    out[static_cast<Index>(labels_[v] - 1)].push_back(v);
  }
  return out;
}

Partition validate_partition(std::span<const int> labels) {
  if (labels.empty()) {
    throw std::invalid_argument("validate_partition: empty label vector");
  }
  Partition p;
  p.labels_.reserve(labels.size());
  std::unordered_map<int, int> remap;
  for (int raw : labels) {
    auto [it, inserted] = remap.try_emplace(raw, p.k_ + 1);
    if (inserted) ++p.k_;
    p.labels_.push_back(it->second);
  }
  return p;
}

Partition validate_partition(std::initializer_list<int> labels) {
  return validate_partition(std::span<const int>(labels.begin(), labels.size()));
}

int same_cluster(const Partition& p, PairIndex e) {
  if (e.i >= e.j) throw std::invalid_argument("same_cluster: need i < j");
  if (e.j >= p.size()) throw std::out_of_range("same_cluster: node out of range");
  return p[e.i] == p[e.j] ? 1 : 0;
}

Partition SampleSet::truth() const {
  if (!labels) throw DataError("sample set has no labels");
  return validate_partition(*labels);
}

void check_sample_set(const SampleSet& s) {
  if (s.n() == 0) throw DataError("sample set is empty");
  for (double x : s.features.data()) {
    if (!std::isfinite(x)) throw DataError("sample set has non-finite feature");
  }
  if (s.labels) {
    if (s.labels->size() != s.n()) {
      throw DataError("label count does not match sample count");
    }
    const int k = *std::max_element(s.labels->begin(), s.labels->end());
    std::vector<bool> used(static_cast<Index>(std::max(k, 0)) + 1, false);
    for (int l : *s.labels) {
      if (l < 1) throw DataError("labels must be positive integers");
      used[static_cast<Index>(l)] = true;
    }
    for (int l = 1; l <= k; ++l) {
      if (!used[static_cast<Index>(l)]) {
        throw DataError("labels must use every value in 1..k");
      }
    }
  }
}

namespace {

struct Contingency {
  std::map<std::pair<int, int>, double> joint;
  std::vector<double> rows;  // cluster sizes of a
  std::vector<double> cols;  // cluster sizes of b
  double n = 0;
};

Contingency contingency(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("score: partitions differ in length");
  }
  Contingency t;
  t.rows.assign(static_cast<Index>(a.k()), 0.0);
  t.cols.assign(static_cast<Index>(b.k()), 0.0);
  for (Index v = 0; v < a.size(); ++v) {
    t.joint[{a[v], b[v]}] += 1.0;
    t.rows[static_cast<Index>(a[v] - 1)] += 1.0;
    t.cols[static_cast<Index>(b[v] - 1)] += 1.0;
  }
  t.n = static_cast<double>(a.size());
  return t;
}

double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

double pairs_of(double c) { return c * (c - 1.0) / 2.0; }

}  // namespace

double normalized_mutual_information(const Partition& a, const Partition& b) {
  const Contingency t = contingency(a, b);
  const double ha = entropy(t.rows, t.n);
  const double hb = entropy(t.cols, t.n);
  if (ha == 0.0 && hb == 0.0) return a.k() == b.k() ? 1.0 : 0.0;
  // Identical up to relabeling.
  if (t.joint.size() == t.rows.size() && t.rows.size() == t.cols.size()) {
    return 1.0;
  }
  double mi = 0.0;
  for (const auto& [key, c] : t.joint) {
    const double pa = t.rows[static_cast<Index>(key.first - 1)] / t.n;
    const double pb = t.cols[static_cast<Index>(key.second - 1)] / t.n;
    const double pj = c / t.n;
    mi += pj * std::log(pj / (pa * pb));
  }
  const double nmi = mi / (0.5 * (ha + hb));
  return std::clamp(nmi, 0.0, 1.0);
}

ScoreReport score(const Partition& predicted, const Partition& truth) {
  const Contingency t = contingency(predicted, truth);
  ScoreReport r;
  r.nmi = normalized_mutual_information(predicted, truth);
  r.k_predicted = predicted.k();

  double tp = 0.0, pred_pos = 0.0, true_pos = 0.0;
  for (const auto& [key, c] : t.joint) tp += pairs_of(c);
  for (double c : t.rows) pred_pos += pairs_of(c);
  for (double c : t.cols) true_pos += pairs_of(c);
  r.pairwise_precision = pred_pos > 0 ? tp / pred_pos : 0.0;
  r.pairwise_recall = true_pos > 0 ? tp / true_pos : 0.0;
  const double sum = r.pairwise_precision + r.pairwise_recall;
  r.pairwise_f1 =
      sum > 0 ? 2.0 * r.pairwise_precision * r.pairwise_recall / sum : 0.0;
  return r;
}

}  // namespace edgeclust
