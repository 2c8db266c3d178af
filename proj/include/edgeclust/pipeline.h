#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edgeclust/analysis.h"
#include "edgeclust/core.h"
#include "edgeclust/corrclust.h"
#include "edgeclust/datagen.h"
#include "edgeclust/edge_features.h"

namespace edgeclust {

enum class Algorithm { kLpRound, kPivot, kOracle };
std::string_view to_string(Algorithm a);
// Accepts "lp", "lp_round", "pivot", "oracle".
Algorithm parse_algorithm(std::string_view name);

enum class SourceKind { kSynthetic, kCsv, kEdgeLevel };
std::string_view to_string(SourceKind s);

// Edge-level presets for the direct planted-partition generator.
//   disjoint: P1 = U[0, 1], P0 = U[2, 3]
//   gaussian: P1 = N(0, 1), P0 = N(2, 1)
enum class EdgePreset { kDisjoint, kGaussian };
std::string_view to_string(EdgePreset p);
EdgePreset parse_edge_preset(std::string_view name);
std::pair<ParametricDensity, ParametricDensity> edge_preset_densities(EdgePreset p);

struct RunConfig {
  std::uint64_t seed = 0;
  SourceKind source = SourceKind::kSynthetic;
  SyntheticSpec synthetic;
  std::filesystem::path csv_path;
  EdgePreset edge_preset = EdgePreset::kDisjoint;
  Index k = 2;                // clusters for generated data and baselines
  Index holdout = 100;        // nodes to cluster
  Index training_pool = 500;  // nodes the labeled pairs come from (disjoint)
  Index pairs = 5000;
  Similarity similarity = Similarity::kAbsDiff;
  double sparsify = 0.0;
  std::optional<double> pca;  // variance target; unset means off
  Algorithm algorithm = Algorithm::kLpRound;
  bool baselines = true;
  Index knn = 20;
};

// Throws std::invalid_argument when the config is inconsistent.
void check_config(const RunConfig& cfg);

struct StageTime {
  std::string stage;
  double seconds = 0.0;
};

struct GraphSummary {
  Index kept_edges = 0;
  Index dropped_edges = 0;
  Index positive_edges = 0;
};

struct ResultsReport {
  RunConfig config;
  Partition predicted;
  std::optional<Partition> truth;
  std::vector<std::pair<std::string, ScoreReport>> scores;  // method, score
  std::optional<SolveCertificate> certificate;
  double disagreement_cost = 0.0;
  LikelihoodReport likelihood;
  GraphSummary graph;
  Index training_same = 0;
  Index training_diff = 0;
  Index pca_dim = 0;  // 0 when PCA is off
  std::vector<StageTime> timing;
  int k_predicted = 0;
};

// Fits P1/P0 on labeled pairs from a training pool disjoint from the
// hold-out nodes, builds G0 on the hold-out complete graph, solves, and
// scores against the truth when labels exist. Errors keep their type
// (std::invalid_argument, DataError, SolverError) and gain a stage prefix.
ResultsReport run_pipeline(const RunConfig& cfg);

// Scatter plot; nodes with d > 2 are projected on their first two
// principal components. Throws std::invalid_argument for an empty set or a
// partition of the wrong size.
std::string svg_document(const SampleSet& s, const Partition& p);
void render_svg(const SampleSet& s, const Partition& p,
                const std::filesystem::path& path);

}  // namespace edgeclust
