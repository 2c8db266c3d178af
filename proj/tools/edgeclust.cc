#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "edgeclust/baselines.h"
#include "edgeclust/corrclust.h"
#include "edgeclust/datagen.h"
#include "edgeclust/density.h"
#include "edgeclust/json_io.h"
#include "edgeclust/pipeline.h"

namespace ec = edgeclust;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitSolver = 4;

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ec::DataError("cannot open " + path);
  return in;
}

ec::Json read_json(const std::string& path) {
  auto in = open_input(path);
  try {
    return ec::Json::parse(in);
  } catch (const ec::Json::exception& e) {
    throw ec::DataError(path + ": " + e.what());
  }
}

std::string labels_csv(const ec::Partition& p) {
  std::ostringstream out;
  out << "node,label\n";
  for (ec::Index i = 0; i < p.size(); ++i) out << i << ',' << p[i] << '\n';
  return out.str();
}

ec::Partition read_labels(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::vector<int> labels;
  ec::Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line == "node,label")) continue;
    unsigned long long node = 0;
    long long label = 0;
    char comma = 0;
    std::istringstream fields(line);
    if (!(fields >> node >> comma >> label) || comma != ',' || node != labels.size()) {
      throw ec::DataError(path + " line " + std::to_string(line_no) +
                          ": expected 'node,label' with consecutive node ids");
    }
    labels.push_back(static_cast<int>(label));
  }
  if (labels.empty()) throw ec::DataError(path + ": no labels");
  return ec::validate_partition(labels);
}

ec::SignedWeightedGraph read_graph(const std::string& path, ec::Index nodes) {
  auto in = open_input(path);
  try {
    return ec::read_graph_tsv(in, nodes);
  } catch (const ec::DataError& e) {
    throw ec::DataError(path + ": " + e.what());
  }
}

std::optional<double> parse_pca(const std::string& text) {
  if (text == "off") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && v > 0.0 && v <= 1.0) return v;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("--pca expects a value in (0, 1] or 'off', got '" + text + "'");
}

struct Model {
  ec::Similarity similarity;
  std::optional<ec::PcaModel> pca;
  ec::DensityModel p1;
  ec::DensityModel p0;
};

Model read_model(const std::string& path) {
  const ec::Json j = read_json(path);
  try {
    std::optional<ec::PcaModel> pca;
    if (!j.at("pca").is_null()) pca = ec::pca_from_json(j.at("pca"));
    return {ec::parse_similarity(j.at("similarity").get<std::string>()), pca,
            ec::density_from_json(j.at("p1")), ec::density_from_json(j.at("p0"))};
  } catch (const ec::Json::exception& e) {
    throw ec::DataError(path + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-feature planted-partition clustering"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out_path;
  std::string data_path;
  std::string similarity = "absdiff";
  std::string pca_text = "off";
  std::string algo = "lp";
  double sparsify = 0.0;
  ec::Index pairs = 5000;
  ec::Index holdout = 100;
  bool unlabeled = false;

  const auto add_seed = [&](CLI::App* c) { c->add_option("--seed", seed, "Random seed"); };
  const auto add_out = [&](CLI::App* c) { c->add_option("-o,--out", out_path, "Output file (default stdout)"); };
  const auto add_similarity = [&](CLI::App* c) {
    c->add_option("--similarity", similarity, "absdiff or euclid")->capture_default_str();
  };

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic 2-D dataset as CSV");
  ec::SyntheticSpec spec;
  std::string kind = "crossbones";
  gen->add_option("--kind", kind, "crossbones, grid, blobs or circles")->capture_default_str();
  gen->add_option("--n", spec.n, "Number of points")->capture_default_str();
  gen->add_option("--k", spec.k, "Number of clusters")->capture_default_str();
  gen->add_option("--noise", spec.noise, "Noise sd as a fraction of length")->capture_default_str();
  gen->add_option("--length", spec.length)->capture_default_str();
  gen->add_option("--angle", spec.angle_degrees, "Crossbones angle in degrees")->capture_default_str();
  gen->add_option("--spacing", spec.spacing, "Grid gap between segments")->capture_default_str();
  add_seed(gen);
  add_out(gen);

  // pairs
  auto* pairs_cmd = app.add_subcommand("pairs", "Sample labeled training pairs");
  pairs_cmd->add_option("--data", data_path, "Labeled node CSV")->required();
  pairs_cmd->add_option("--pairs", pairs, "Pair count")->capture_default_str();
  add_seed(pairs_cmd);
  add_out(pairs_cmd);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit P1/P0 densities from labeled pairs");
  std::string pairs_path;
  fit->add_option("--data", data_path, "Node CSV the pairs index into")->required();
  fit->add_option("--pairs-file", pairs_path, "i,j,same CSV")->required();
  fit->add_flag("--unlabeled", unlabeled, "Node CSV has no label column");
  fit->add_option("--pca", pca_text, "Variance target in (0,1] or off")->capture_default_str();
  add_similarity(fit);
  add_out(fit);

  // graph
  auto* graph = app.add_subcommand("graph", "Build the signed log-odds graph as TSV");
  std::string model_path;
  graph->add_option("--data", data_path, "Node CSV to cluster")->required();
  graph->add_option("--model", model_path, "Model JSON from fit")->required();
  graph->add_flag("--unlabeled", unlabeled, "Node CSV has no label column");
  graph->add_option("--sparsify", sparsify, "Drop edges with cost <= this")->capture_default_str();
  add_out(graph);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Cluster a signed graph");
  std::string graph_path, cert_path;
  ec::Index nodes = 0;
  cluster->add_option("--graph", graph_path, "Graph TSV")->required();
  cluster->add_option("--nodes", nodes, "Node count (default: inferred)");
  cluster->add_option("--algo", algo, "lp, pivot or oracle")->capture_default_str();
  cluster->add_option("--certificate", cert_path, "Write the LP certificate JSON here");
  add_seed(cluster);
  add_out(cluster);

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Run k-means or spectral clustering");
  std::string method = "kmeans";
  ec::Index k = 2;
  ec::Index knn = 20;
  baseline->add_option("--data", data_path, "Node CSV")->required();
  baseline->add_option("--method", method, "kmeans or spectral")->capture_default_str();
  baseline->add_option("--k", k, "Cluster count")->capture_default_str();
  baseline->add_option("--knn", knn, "Mutual kNN size for spectral")->capture_default_str();
  baseline->add_flag("--unlabeled", unlabeled, "Node CSV has no label column");
  add_seed(baseline);
  add_out(baseline);

  // eval
  auto* eval = app.add_subcommand("eval", "Score labels against the truth column of a CSV");
  std::string labels_path;
  eval->add_option("--labels", labels_path, "node,label CSV")->required();
  eval->add_option("--truth", data_path, "Labeled node CSV")->required();
  add_out(eval);

  // certify
  auto* certify = app.add_subcommand("certify", "Check a partition against the LP bound");
  certify->add_option("--graph", graph_path, "Graph TSV")->required();
  certify->add_option("--labels", labels_path, "node,label CSV")->required();
  add_out(certify);

  // plot
  auto* plot = app.add_subcommand("plot", "Render a clustering as SVG");
  plot->add_option("--data", data_path, "Node CSV")->required();
  plot->add_option("--labels", labels_path, "node,label CSV")->required();
  plot->add_flag("--unlabeled", unlabeled, "Node CSV has no label column");
  add_out(plot);

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run the full pipeline and emit a JSON report");
  ec::RunConfig cfg;
  std::string dataset = "crossbones";
  std::string csv_path;
  std::string svg_path;
  bool no_baselines = false;
  bool no_timing = false;
  pipeline->add_option("--dataset", dataset,
                       "crossbones, grid, blobs, circles, edge-disjoint, edge-gaussian or csv")
      ->capture_default_str();
  pipeline->add_option("--csv", csv_path, "Labeled CSV when --dataset csv");
  pipeline->add_option("--k", cfg.k, "Clusters for generated data")->capture_default_str();
  pipeline->add_option("--noise", cfg.synthetic.noise)->capture_default_str();
  pipeline->add_option("--holdout", holdout, "Hold-out nodes to cluster")->capture_default_str();
  pipeline->add_option("--pool", cfg.training_pool, "Training pool size")->capture_default_str();
  pipeline->add_option("--pairs", pairs, "Labeled training pairs")->capture_default_str();
  pipeline->add_option("--sparsify", sparsify)->capture_default_str();
  pipeline->add_option("--pca", pca_text)->capture_default_str();
  pipeline->add_option("--algo", algo)->capture_default_str();
  pipeline->add_option("--knn", cfg.knn)->capture_default_str();
  pipeline->add_flag("--no-baselines", no_baselines);
  pipeline->add_flag("--no-timing", no_timing, "Omit timing from the report");
  pipeline->add_option("--svg", svg_path, "Also plot the hold-out clustering");
  add_similarity(pipeline);
  add_seed(pipeline);
  add_out(pipeline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) {
      spec.kind = ec::parse_synthetic_kind(kind);
      ec::Rng rng(seed);
      std::ostringstream out;
      ec::write_csv(ec::gen_synthetic(spec, rng), out);
      emit(out_path, out.str());
    } else if (*pairs_cmd) {
      const ec::SampleSet s = ec::load_csv(data_path, true);
      ec::Rng rng(seed);
      const auto set = ec::sample_labeled_pairs(s, pairs, ec::Similarity::kAbsDiff, rng);
      std::ostringstream out;
      ec::write_pairs_csv(set.pairs, out);
      emit(out_path, out.str());
    } else if (*fit) {
      const ec::Similarity kind_sim = ec::parse_similarity(similarity);
      const auto pca_target = parse_pca(pca_text);
      const ec::SampleSet s = ec::load_csv(data_path, !unlabeled);
      auto in = open_input(pairs_path);
      const auto list = ec::read_pairs_csv(in, s.n());
      const auto set = ec::labeled_pairs_from_list(s, list, kind_sim);
      std::optional<ec::PcaModel> pca;
      ec::Matrix same = set.same_vectors, diff = set.diff_vectors;
      if (same.rows() < 2 || diff.rows() < 2) {
        throw ec::DataError("need at least 2 same and 2 cross pairs to fit densities");
      }
      if (pca_target) {
        ec::Matrix both = same;
        for (ec::Index r = 0; r < diff.rows(); ++r) both.append_row(diff.row(r));
        pca = ec::pca_fit(both, *pca_target);
        same = ec::pca_transform(*pca, same);
        diff = ec::pca_transform(*pca, diff);
      }
      ec::Json j;
      j["similarity"] = ec::to_string(kind_sim);
      j["pca"] = pca ? ec::to_json(*pca) : ec::Json(nullptr);
      j["p1"] = ec::to_json(ec::kde_fit(same));
      j["p0"] = ec::to_json(ec::kde_fit(diff));
      emit(out_path, j.dump() + "\n");
    } else if (*graph) {
      const Model model = read_model(model_path);
      const ec::SampleSet s = ec::load_csv(data_path, !unlabeled);
      ec::EdgeFeatureSet f = ec::complete_edge_features(s, model.similarity);
      if (model.pca) f.vectors = ec::pca_transform(*model.pca, f.vectors);
      const auto g = ec::build_signed_graph(f, model.p1, model.p0, sparsify);
      std::ostringstream out;
      ec::write_graph_tsv(g, out);
      emit(out_path, out.str());
    } else if (*cluster) {
      const ec::Algorithm a = ec::parse_algorithm(algo);
      const auto g = read_graph(graph_path, nodes);
      ec::Partition p;
      if (a == ec::Algorithm::kLpRound) {
        const ec::SolveResult r = ec::solve(g);
        p = r.partition;
        if (!cert_path.empty()) emit(cert_path, ec::to_json(r.certificate).dump(2) + "\n");
      } else if (a == ec::Algorithm::kPivot) {
        ec::Rng rng(seed);
        p = ec::kwik_cluster(g, rng);
      } else {
        p = ec::brute_force_optimum(g).partition;
      }
      emit(out_path, labels_csv(p));
    } else if (*baseline) {
      const ec::SampleSet s = ec::load_csv(data_path, !unlabeled);
      ec::Rng rng(seed);
      ec::Partition p;
      if (method == "kmeans") {
        p = ec::kmeans(s, k, rng);
      } else if (method == "spectral") {
        ec::SpectralConfig sc;
        sc.k = k;
        sc.knn = knn;
        p = ec::spectral(s, sc, rng);
      } else {
        throw std::invalid_argument("unknown baseline '" + method + "' (expected kmeans or spectral)");
      }
      emit(out_path, labels_csv(p));
    } else if (*eval) {
      const ec::SampleSet s = ec::load_csv(data_path, true);
      const ec::Partition p = read_labels(labels_path);
      if (p.size() != s.n()) throw ec::DataError("label count does not match the truth file");
      emit(out_path, ec::to_json(ec::score(p, s.truth())).dump(2) + "\n");
    } else if (*certify) {
      const ec::Partition p = read_labels(labels_path);
      const auto g = read_graph(graph_path, p.size());
      ec::Json j;
      j["n"] = g.n;
      j["cost"] = ec::disagreement_cost(g, p);
      j["c1"] = ec::approximation_constant(g.n);
      if (g.edges.empty()) {
        j["lp_lower_bound"] = 0.0;
        j["bound_rhs"] = 0.0;
        j["max_triangle_violation"] = 0.0;
      } else {
        const ec::FractionalMetric m = ec::lp_relax(g);
        j["lp_lower_bound"] = m.objective;
        j["bound_rhs"] = ec::approximation_constant(g.n) *
                         std::log(static_cast<double>(g.n) + 1.0) * m.objective;
        j["max_triangle_violation"] = m.max_triangle_violation();
      }
      j["within_bound"] = j["cost"].get<double>() <= j["bound_rhs"].get<double>() + 1e-6;
      emit(out_path, j.dump(2) + "\n");
    } else if (*plot) {
      const ec::SampleSet s = ec::load_csv(data_path, !unlabeled);
      const ec::Partition p = read_labels(labels_path);
      if (out_path.empty()) throw std::invalid_argument("plot needs -o");
      ec::render_svg(s, p, out_path);
    } else if (*pipeline) {
      cfg.seed = seed;
      cfg.holdout = holdout;
      cfg.pairs = pairs;
      cfg.similarity = ec::parse_similarity(similarity);
      cfg.sparsify = sparsify;
      cfg.pca = parse_pca(pca_text);
      cfg.algorithm = ec::parse_algorithm(algo);
      cfg.baselines = !no_baselines;
      if (dataset == "csv") {
        cfg.source = ec::SourceKind::kCsv;
        cfg.csv_path = csv_path;
      } else if (dataset == "edge-disjoint" || dataset == "edge-gaussian") {
        cfg.source = ec::SourceKind::kEdgeLevel;
        cfg.edge_preset = ec::parse_edge_preset(dataset.substr(5));
      } else {
        cfg.source = ec::SourceKind::kSynthetic;
        cfg.synthetic.kind = ec::parse_synthetic_kind(dataset);
      }
      const ec::ResultsReport r = ec::run_pipeline(cfg);
      emit(out_path, ec::to_json(r, !no_timing).dump(2) + "\n");
      if (!svg_path.empty() && cfg.source == ec::SourceKind::kSynthetic) {
        ec::SyntheticSpec hs = cfg.synthetic;
        hs.k = cfg.k;
        hs.n = cfg.holdout;
        ec::Rng data_rng = ec::Rng(cfg.seed).split(1);
        ec::Rng holdout_rng = data_rng.split(2);
        ec::render_svg(ec::gen_synthetic(hs, holdout_rng), r.predicted, svg_path);
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ec::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ec::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
