#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <string>

#include "doctest.h"
#include "edgeclust/json_io.h"
#include "edgeclust/pipeline.h"

using namespace edgeclust;

namespace {

RunConfig small_edge_config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.source = SourceKind::kEdgeLevel;
  cfg.edge_preset = EdgePreset::kDisjoint;
  cfg.k = 3;
  cfg.holdout = 24;
  cfg.training_pool = 30;
  cfg.pairs = 300;
  return cfg;
}

RunConfig small_synthetic_config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.synthetic.kind = SyntheticKind::kBlobs;
  cfg.synthetic.noise = 0.05;
  cfg.k = 3;
  cfg.holdout = 24;
  cfg.training_pool = 60;
  cfg.pairs = 800;
  return cfg;
}

}  // namespace

TEST_CASE("disjoint edge-level data is recovered exactly") {
  const ResultsReport r = run_pipeline(small_edge_config(1));
  REQUIRE(r.scores.size() == 1);
  CHECK(r.scores[0].first == "structured");
  CHECK(r.scores[0].second.nmi == 1.0);
  CHECK(r.k_predicted == 3);
  REQUIRE(r.certificate);
  CHECK(r.certificate->rounded_cost == 0.0);
  CHECK(r.certificate->max_triangle_violation <= 1e-6);
  CHECK(r.likelihood.disagreement_term == 0.0);
}

TEST_CASE("synthetic pipeline scores every method") {
  const ResultsReport r = run_pipeline(small_synthetic_config(2));
  REQUIRE(r.scores.size() == 3);
  CHECK(r.scores[1].first == "kmeans");
  CHECK(r.scores[2].first == "spectral");
  CHECK(r.graph.kept_edges + r.graph.dropped_edges == pair_count(24));
  CHECK(r.training_same + r.training_diff == 800);
  CHECK(r.certificate->lp_lower_bound <= r.certificate->rounded_cost + 1e-9);
  CHECK(r.certificate->rounded_cost <= r.certificate->bound_rhs + 1e-9);
  CHECK(std::abs(r.likelihood.log_likelihood_theta -
                 (r.likelihood.log_likelihood_g0 - r.likelihood.disagreement_term)) <= 1e-8);
}

TEST_CASE("reports are byte-identical apart from timing") {
  for (RunConfig cfg : {small_edge_config(3), small_synthetic_config(3)}) {
    const std::string a = to_json(run_pipeline(cfg), false).dump();
    const std::string b = to_json(run_pipeline(cfg), false).dump();
    CHECK(a == b);
    CHECK(a.find("timing") == std::string::npos);
  }
  const Json with = to_json(run_pipeline(small_edge_config(3)), true);
  CHECK(with.contains("timing"));
  CHECK(with["timing"].contains("solve"));
}

TEST_CASE("report echoes the resolved config") {
  RunConfig cfg = small_synthetic_config(4);
  cfg.pca = 0.9;
  cfg.sparsify = 0.25;
  const Json j = to_json(run_pipeline(cfg));
  const Json& c = j["config"];
  CHECK(c["seed"] == 4);
  CHECK(c["source"] == "synthetic");
  CHECK(c["dataset"]["kind"] == "blobs");
  CHECK(c["pairs"] == 800);
  CHECK(c["holdout"] == 24);
  CHECK(c["similarity"] == "absdiff");
  CHECK(c["sparsify"] == 0.25);
  CHECK(c["pca"] == 0.9);
  CHECK(c["algo"] == "lp");
  CHECK(c["knn"] == 20);
  CHECK(j["training"]["pca_dim"].get<int>() >= 1);
  CHECK(j["labels"].size() == 24);
}

TEST_CASE("pivot and oracle algorithms") {
  RunConfig cfg = small_edge_config(5);
  cfg.algorithm = Algorithm::kPivot;
  const ResultsReport pivot = run_pipeline(cfg);
  CHECK_FALSE(pivot.certificate);
  CHECK(pivot.scores[0].second.nmi == 1.0);

  cfg.algorithm = Algorithm::kOracle;
  cfg.holdout = 9;
  const ResultsReport oracle = run_pipeline(cfg);
  CHECK(oracle.scores[0].second.nmi == 1.0);

  cfg.holdout = 100;
  CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("oracle"), std::invalid_argument);
}

TEST_CASE("errors carry the stage name") {
  RunConfig cfg;
  cfg.source = SourceKind::kCsv;
  cfg.csv_path = "/nonexistent/data.csv";
  CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("data: "), DataError);
  RunConfig bad;
  bad.pca = 1.5;
  CHECK_THROWS_WITH_AS(run_pipeline(bad), doctest::Contains("config: "), std::invalid_argument);
}

TEST_CASE("csv source splits hold-out and training rows") {
  const auto path = std::filesystem::temp_directory_path() / "edgeclust_pipeline_test.csv";
  {
    Rng rng(6);
    SyntheticSpec spec;
    spec.kind = SyntheticKind::kBlobs;
    spec.n = 90;
    spec.k = 3;
    spec.noise = 0.05;
    std::ofstream out(path);
    write_csv(gen_synthetic(spec, rng), out);
  }
  RunConfig cfg;
  cfg.source = SourceKind::kCsv;
  cfg.csv_path = path;
  cfg.holdout = 20;
  cfg.pairs = 500;
  const ResultsReport r = run_pipeline(cfg);
  CHECK(r.predicted.size() == 20);
  CHECK(r.training_same + r.training_diff == 500);
  CHECK(r.scores[0].second.nmi == 1.0);
  std::filesystem::remove(path);
}

TEST_CASE("svg has one circle per point") {
  SampleSet s;
  s.features = Matrix{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const std::string svg = svg_document(s, validate_partition({1, 1, 2, 2}));
  const std::regex circle("<circle [^>]*fill=\"(#[0-9a-f]{6})\"");
  std::set<std::string> fills;
  Index count = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle); it != std::sregex_iterator(); ++it) {
    fills.insert((*it)[1]);
    ++count;
  }
  CHECK(count == 4);
  CHECK(fills.size() == 2);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("svg projects higher-dimensional data and rejects bad input") {
  SampleSet s;
  s.features = Matrix{{74, 85, 123}, {73, 84, 122}, {255, 255, 255}, {10, 20, 30}};
  const std::string svg = svg_document(s, validate_partition({1, 1, 2, 2}));
  Index count = 0;
  for (std::size_t pos = 0; (pos = svg.find("<circle", pos)) != std::string::npos; ++pos) ++count;
  CHECK(count == 4);
  CHECK_THROWS_AS(svg_document(SampleSet{}, Partition{}), std::invalid_argument);
  CHECK_THROWS_AS(svg_document(s, validate_partition({1, 2})), std::invalid_argument);
  CHECK_THROWS_AS(render_svg(s, validate_partition({1, 1, 2, 2}), "/nonexistent/dir/plot.svg"),
                  std::invalid_argument);
}

TEST_CASE("model json round trip") {
  Rng rng(7);
  Matrix pts(30, 2);
  for (double& v : pts.data()) v = rng.normal();
  const DensityModel m = kde_fit(pts);
  const DensityModel back = density_from_json(Json::parse(to_json(m).dump()));
  CHECK(back.training_points() == m.training_points());
  CHECK(back.bandwidths() == m.bandwidths());
  const PcaModel p = pca_fit(pts, 1.0);
  const PcaModel pb = pca_from_json(Json::parse(to_json(p).dump()));
  CHECK(pb.components == p.components);
  CHECK(pb.mean == p.mean);
  CHECK_THROWS_AS(density_from_json(Json::parse("{\"points\": 3}")), DataError);
}
