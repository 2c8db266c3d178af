#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "edgeclust/core.h"
#include "edgeclust/density.h"
#include "edgeclust/edge_features.h"
#include "edgeclust/random.h"

namespace edgeclust {

enum class SyntheticKind { kCrossbones, kGrid, kBlobs, kCircles };

std::string_view to_string(SyntheticKind kind);
// Throws std::invalid_argument for an unknown name.
SyntheticKind parse_synthetic_kind(std::string_view name);

// 2-D point clouds. Cluster sizes are balanced; node i has label i % k + 1.
//   crossbones: k = 2 segments of `length` crossing at their midpoints at
//               `angle_degrees`.
//   grid:       k segments of `length` on a square lattice, alternating
//               horizontal/vertical in a checkerboard, with `spacing`
//               between a segment end and the neighbouring segment.
//   blobs:      k isotropic Gaussians with centers on a circle of radius
//               `length`.
//   circles:    k concentric circles of radius length * c / k, c = 1..k.
// Segment and circle noise is isotropic Gaussian with sd noise * length;
// blob sd is noise * length as well.
struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kCrossbones;
  Index n = 100;
  Index k = 2;
  double noise = 0.03;
  double length = 1.0;
  double angle_degrees = 75.0;
  double spacing = 0.5;
};

// Throws std::invalid_argument for an invalid spec.
SampleSet gen_synthetic(const SyntheticSpec& spec, Rng& rng);

// Planted partition directly on edges: e_ij ~ p1 when i and j share a
// cluster, p0 otherwise. Nodes are labeled in contiguous blocks of `sizes`.
struct EdgeLevelSpec {
  std::vector<Index> sizes;
  ParametricDensity p1;
  ParametricDensity p0;
};

struct EdgeLevelData {
  EdgeFeatureSet features;  // all C(n, 2) pairs in rank order
  Partition truth;
};

EdgeLevelData gen_edge_level(const EdgeLevelSpec& spec, Rng& rng);

// Comma-separated numeric rows, LF or CRLF. A first row with any
// non-numeric cell is a header. With has_labels the last column holds
// integer class ids, mapped to 1..k in ascending order of value. Throws
// DataError naming line and column on malformed input.
SampleSet read_csv(std::istream& in, bool has_labels);
SampleSet load_csv(const std::filesystem::path& path, bool has_labels);
void write_csv(const SampleSet& s, std::ostream& out);

// `i,j,same` rows with same in {0, 1}; optional header. Pairs must index
// into n nodes and be distinct.
std::vector<LabeledPair> read_pairs_csv(std::istream& in, Index n);
void write_pairs_csv(std::span<const LabeledPair> pairs, std::ostream& out);

}  // namespace edgeclust
