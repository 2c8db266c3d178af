#include "edgeclust/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <type_traits>

#include "edgeclust/baselines.h"
#include "edgeclust/density.h"

namespace edgeclust {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kLpRound: return "lp";
    case Algorithm::kPivot: return "pivot";
    case Algorithm::kOracle: return "oracle";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "lp" || name == "lp_round") return Algorithm::kLpRound;
  if (name == "pivot") return Algorithm::kPivot;
  if (name == "oracle") return Algorithm::kOracle;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                              "' (expected lp, pivot or oracle)");
}

std::string_view to_string(SourceKind s) {
  switch (s) {
    case SourceKind::kSynthetic: return "synthetic";
    case SourceKind::kCsv: return "csv";
    case SourceKind::kEdgeLevel: return "edge_level";
  }
  return "?";
}

std::string_view to_string(EdgePreset p) {
  return p == EdgePreset::kDisjoint ? "disjoint" : "gaussian";
}

EdgePreset parse_edge_preset(std::string_view name) {
  if (name == "disjoint") return EdgePreset::kDisjoint;
  if (name == "gaussian") return EdgePreset::kGaussian;
  throw std::invalid_argument("unknown edge preset '" + std::string(name) +
                              "' (expected disjoint or gaussian)");
}

std::pair<ParametricDensity, ParametricDensity> edge_preset_densities(EdgePreset p) {
  if (p == EdgePreset::kDisjoint) {
    return {ParametricDensity::uniform({0.0}, {1.0}),
            ParametricDensity::uniform({2.0}, {3.0})};
  }
  return {ParametricDensity::gaussian({0.0}, {1.0}),
          ParametricDensity::gaussian({2.0}, {1.0})};
}

void check_config(const RunConfig& cfg) {
  if (cfg.holdout < 2) throw std::invalid_argument("holdout must be >= 2");
  if (cfg.pairs == 0) throw std::invalid_argument("pairs must be >= 1");
  if (!(cfg.sparsify >= 0.0)) throw std::invalid_argument("sparsify must be >= 0");
  if (cfg.pca && !(*cfg.pca > 0.0 && *cfg.pca <= 1.0)) {
    throw std::invalid_argument("pca variance target must be in (0, 1]");
  }
  if (cfg.algorithm == Algorithm::kOracle && cfg.holdout > kBruteForceMaxNodes) {
    throw std::invalid_argument("algorithm oracle supports at most 12 nodes, holdout is " +
                                std::to_string(cfg.holdout));
  }
  if (cfg.k < 1) throw std::invalid_argument("k must be >= 1");
  if (cfg.knn < 1) throw std::invalid_argument("knn must be >= 1");
  if (cfg.source != SourceKind::kCsv) {
    if (cfg.training_pool < 2) throw std::invalid_argument("training pool must be >= 2");
    if (cfg.holdout < cfg.k || cfg.training_pool < cfg.k) {
      throw std::invalid_argument("holdout and training pool must have at least k nodes");
    }
  }
  if (cfg.source == SourceKind::kSynthetic &&
      cfg.synthetic.kind == SyntheticKind::kCrossbones && cfg.k != 2) {
    throw std::invalid_argument("crossbones has exactly 2 clusters");
  }
  if (cfg.source == SourceKind::kCsv && cfg.csv_path.empty()) {
    throw std::invalid_argument("csv source needs a path");
  }
}

namespace {

template <typename E>
[[noreturn]] void retag(const char* stage, const E& e) {
  throw E(std::string(stage) + ": " + e.what());
}

// Runs one stage, records its wall time and prefixes any error with the
// stage name.
template <typename F>
auto stage(const char* name, std::vector<StageTime>& timing, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  const auto record = [&] {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    timing.push_back({name, dt.count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      record();
    } else {
      auto out = body();
      record();
      return out;
    }
  } catch (const DataError& e) {
    retag(name, e);
  } catch (const SolverError& e) {
    retag(name, e);
  } catch (const std::invalid_argument& e) {
    retag(name, e);
  } catch (const std::out_of_range& e) {
    retag(name, e);
  }
}

std::vector<Index> balanced_sizes(Index n, Index k) {
  std::vector<Index> sizes(k, n / k);
  for (Index c = 0; c < n % k; ++c) ++sizes[c];
  return sizes;
}

SampleSet take_rows(const SampleSet& s, std::span<const Index> rows) {
  SampleSet out;
  out.features = Matrix(rows.size(), s.dim());
  if (s.labels) out.labels = std::vector<int>();
  for (Index r = 0; r < rows.size(); ++r) {
    const auto src = s.features.row(rows[r]);
    std::copy(src.begin(), src.end(), out.features.row(r).begin());
    if (s.labels) out.labels->push_back((*s.labels)[rows[r]]);
  }
  if (out.labels) {
    // Keep labels dense after subsetting.
    out.labels = validate_partition(*out.labels).labels();
  }
  return out;
}

void shuffle(std::vector<Index>& v, Rng& rng) {
  for (Index i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

struct Inputs {
  std::optional<SampleSet> holdout_nodes;  // absent for edge-level data
  EdgeFeatureSet holdout;
  std::optional<Partition> truth;
  LabeledPairSet training;
};

Inputs prepare_nodes(const RunConfig& cfg, const SampleSet& pool,
                     SampleSet holdout, Rng& pair_rng) {
  Inputs in;
  in.training = sample_labeled_pairs(pool, cfg.pairs, cfg.similarity, pair_rng);
  in.holdout = complete_edge_features(holdout, cfg.similarity);
  if (holdout.labels) in.truth = holdout.truth();
  in.holdout_nodes = std::move(holdout);
  return in;
}

Inputs load_inputs(const RunConfig& cfg, Rng& root) {
  Rng data_rng = root.split(1);
  Rng pair_rng = root.split(2);
  switch (cfg.source) {
    case SourceKind::kSynthetic: {
      SyntheticSpec spec = cfg.synthetic;
      spec.k = cfg.k;
      spec.n = cfg.training_pool;
      Rng pool_rng = data_rng.split(1);
      Rng holdout_rng = data_rng.split(2);
      const SampleSet pool = gen_synthetic(spec, pool_rng);
      spec.n = cfg.holdout;
      return prepare_nodes(cfg, pool, gen_synthetic(spec, holdout_rng), pair_rng);
    }
    case SourceKind::kCsv: {
      const SampleSet all = load_csv(cfg.csv_path, true);
      if (all.n() < cfg.holdout + 2) {
        throw DataError(cfg.csv_path.string() + " has " + std::to_string(all.n()) +
                        " rows; need holdout + 2");
      }
      std::vector<Index> order(all.n());
      std::iota(order.begin(), order.end(), Index{0});
      shuffle(order, data_rng);
      const Index pool_n = std::min(cfg.training_pool, all.n() - cfg.holdout);
      const std::span<const Index> rows(order);
      return prepare_nodes(cfg, take_rows(all, rows.subspan(cfg.holdout, pool_n)),
                           take_rows(all, rows.first(cfg.holdout)), pair_rng);
    }
    case SourceKind::kEdgeLevel: {
      auto [p1, p0] = edge_preset_densities(cfg.edge_preset);
      Rng pool_rng = data_rng.split(1);
      Rng holdout_rng = data_rng.split(2);
      const EdgeLevelData pool =
          gen_edge_level({balanced_sizes(cfg.training_pool, cfg.k), p1, p0}, pool_rng);
      std::vector<Index> rows(pool.features.size());
      std::iota(rows.begin(), rows.end(), Index{0});
      shuffle(rows, pair_rng);
      rows.resize(std::min(rows.size(), cfg.pairs));
      std::sort(rows.begin(), rows.end());
      Inputs in;
      const Index d = pool.features.dim();
      in.training.same_vectors = Matrix(0, d);
      in.training.diff_vectors = Matrix(0, d);
      for (Index r : rows) {
        const PairIndex p = pool.features.pairs[r];
        const bool same = pool.truth[p.i] == pool.truth[p.j];
        (same ? in.training.same_vectors : in.training.diff_vectors)
            .append_row(pool.features.vectors.row(r));
        in.training.pairs.push_back({p, same});
      }
      EdgeLevelData holdout =
          gen_edge_level({balanced_sizes(cfg.holdout, cfg.k), p1, p0}, holdout_rng);
      in.holdout = std::move(holdout.features);
      in.truth = std::move(holdout.truth);
      return in;
    }
  }
  throw std::invalid_argument("unknown source");
}

Matrix project(const std::optional<PcaModel>& pca, Matrix m) {
  return pca ? pca_transform(*pca, m) : m;
}

}  // namespace

ResultsReport run_pipeline(const RunConfig& cfg) {
  ResultsReport report;
  report.config = cfg;
  auto& timing = report.timing;
  stage("config", timing, [&] { check_config(cfg); });
  Rng root(cfg.seed);

  Inputs in = stage("data", timing, [&] { return load_inputs(cfg, root); });
  report.truth = in.truth;
  report.training_same = in.training.same_vectors.rows();
  report.training_diff = in.training.diff_vectors.rows();

  std::optional<PcaModel> pca;
  auto [p1, p0] = stage("fit", timing, [&] {
    if (in.training.same_vectors.rows() < 2 || in.training.diff_vectors.rows() < 2) {
      throw DataError("need at least 2 same-cluster and 2 cross-cluster training pairs (got " +
                      std::to_string(in.training.same_vectors.rows()) + " and " +
                      std::to_string(in.training.diff_vectors.rows()) + ")");
    }
    if (cfg.pca) {
      Matrix both = in.training.same_vectors;
      for (Index r = 0; r < in.training.diff_vectors.rows(); ++r) {
        both.append_row(in.training.diff_vectors.row(r));
      }
      pca = pca_fit(both, *cfg.pca);
    }
    return std::pair{kde_fit(project(pca, in.training.same_vectors)),
                     kde_fit(project(pca, in.training.diff_vectors))};
  });
  report.pca_dim = pca ? pca->output_dim() : 0;

  const EdgeFeatureSet features = stage("features", timing, [&] {
    EdgeFeatureSet f = in.holdout;
    f.vectors = project(pca, std::move(f.vectors));
    return f;
  });
  const SignedWeightedGraph g = stage("graph", timing, [&] {
    return build_signed_graph(features, p1, p0, cfg.sparsify);
  });
  report.graph.kept_edges = g.edges.size();
  report.graph.dropped_edges = g.dropped.size();
  for (const SignedEdge& e : g.edges) report.graph.positive_edges += e.sign > 0;

  report.predicted = stage("solve", timing, [&] {
    switch (cfg.algorithm) {
      case Algorithm::kLpRound: {
        SolveResult r = solve(g);
        report.certificate = r.certificate;
        return r.partition;
      }
      case Algorithm::kPivot: {
        Rng pivot_rng = root.split(4);
        return kwik_cluster(g, pivot_rng);
      }
      case Algorithm::kOracle:
        return brute_force_optimum(g).partition;
    }
    throw std::invalid_argument("unknown algorithm");
  });
  report.k_predicted = report.predicted.k();
  report.disagreement_cost = disagreement_cost(g, report.predicted);

  stage("score", timing, [&] {
    report.likelihood = log_likelihood(report.predicted, features, p1, p0);
    if (in.truth) report.scores.emplace_back("structured", score(report.predicted, *in.truth));
  });

  if (cfg.baselines && in.holdout_nodes && in.truth) {
    stage("baselines", timing, [&] {
      const Index k = static_cast<Index>(in.truth->k());
      Rng km_rng = root.split(3);
      report.scores.emplace_back("kmeans", score(kmeans(*in.holdout_nodes, k, km_rng), *in.truth));
      if (k >= 2) {
        Rng sp_rng = root.split(5);
        SpectralConfig sc;
        sc.knn = cfg.knn;
        sc.k = k;
        report.scores.emplace_back("spectral",
                                   score(spectral(*in.holdout_nodes, sc, sp_rng), *in.truth));
      }
    });
  }
  return report;
}

namespace {

constexpr const char* kPalette[12] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};

}  // namespace

std::string svg_document(const SampleSet& s, const Partition& p) {
  if (s.n() == 0 || p.size() == 0) throw std::invalid_argument("svg: nothing to plot");
  if (p.size() != s.n()) throw std::invalid_argument("svg: partition size mismatch");
  if (s.dim() < 2) throw std::invalid_argument("svg: need at least 2 feature columns");
  Matrix xy(s.n(), 2);
  if (s.dim() == 2) {
    xy = s.features;
  } else if (s.n() >= 2) {
    const PcaModel pca = pca_fit(s.features, 1.0);
    const Matrix z = pca_transform(pca, s.features);
    for (Index i = 0; i < s.n(); ++i) {
      for (Index c = 0; c < std::min<Index>(2, z.cols()); ++c) xy(i, c) = z(i, c);
    }
  }
  double lo[2], hi[2];
  for (Index c = 0; c < 2; ++c) {
    lo[c] = hi[c] = xy(0, c);
    for (Index i = 1; i < s.n(); ++i) {
      lo[c] = std::min(lo[c], xy(i, c));
      hi[c] = std::max(hi[c], xy(i, c));
    }
    double span = hi[c] - lo[c];
    if (span <= 0.0) span = 1.0;
    lo[c] -= 0.05 * span;
    hi[c] += 0.05 * span;
  }
  constexpr double kSize = 480.0;
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
      << kSize << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (Index i = 0; i < s.n(); ++i) {
    const double x = (xy(i, 0) - lo[0]) / (hi[0] - lo[0]) * kSize;
    const double y = kSize - (xy(i, 1) - lo[1]) / (hi[1] - lo[1]) * kSize;
    out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\""
        << kPalette[static_cast<Index>(p[i] - 1) % 12] << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void render_svg(const SampleSet& s, const Partition& p, const std::filesystem::path& path) {
  const std::string doc = svg_document(s, p);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path.string());
  out << doc;
  if (!out) throw std::invalid_argument("failed writing " + path.string());
}

}  // namespace edgeclust
