#include "edgeclust/json_io.h"

namespace edgeclust {

Json to_json(const RunConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["source"] = to_string(cfg.source);
  switch (cfg.source) {
    case SourceKind::kSynthetic:
      j["dataset"] = {{"kind", to_string(cfg.synthetic.kind)},
                      {"noise", cfg.synthetic.noise},
                      {"length", cfg.synthetic.length},
                      {"angle_degrees", cfg.synthetic.angle_degrees},
                      {"spacing", cfg.synthetic.spacing}};
      break;
    case SourceKind::kCsv:
      j["dataset"] = {{"path", cfg.csv_path.string()}};
      break;
    case SourceKind::kEdgeLevel:
      j["dataset"] = {{"preset", to_string(cfg.edge_preset)}};
      break;
  }
  j["k"] = cfg.k;
  j["holdout"] = cfg.holdout;
  j["training_pool"] = cfg.training_pool;
  j["pairs"] = cfg.pairs;
  j["similarity"] = to_string(cfg.similarity);
  j["sparsify"] = cfg.sparsify;
  j["pca"] = cfg.pca ? Json(*cfg.pca) : Json("off");
  j["algo"] = to_string(cfg.algorithm);
  j["baselines"] = cfg.baselines;
  j["knn"] = cfg.knn;
  return j;
}

Json to_json(const ScoreReport& s) {
  return {{"nmi", s.nmi},
          {"pairwise_precision", s.pairwise_precision},
          {"pairwise_recall", s.pairwise_recall},
          {"pairwise_f1", s.pairwise_f1},
          {"k_predicted", s.k_predicted}};
}

Json to_json(const SolveCertificate& c) {
  return {{"n", c.n},
          {"lp_lower_bound", c.lp_lower_bound},
          {"rounded_cost", c.rounded_cost},
          {"c1", c.c1},
          {"bound_rhs", c.bound_rhs},
          {"max_triangle_violation", c.max_triangle_violation}};
}

Json to_json(const LikelihoodReport& l) {
  return {{"log_likelihood_theta", l.log_likelihood_theta},
          {"log_likelihood_g0", l.log_likelihood_g0},
          {"disagreement_term", l.disagreement_term}};
}

Json to_json(const ExpectedDisReport& e) {
  return {{"n0", e.n0},
          {"n1", e.n1},
          {"estimate", e.estimate},
          {"std_error", e.std_error},
          {"sample_count", e.sample_count}};
}

Json to_json(const LpStats& s) {
  return {{"iterations", s.iterations},
          {"bland_iterations", s.bland_iterations},
          {"rows_added", s.rows_added},
          {"rows_dropped", s.rows_dropped}};
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

Matrix matrix_from_json(const Json& j) {
  try {
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    const Json& data = j.at("data");
    if (data.size() != rows) throw DataError("matrix row count mismatch");
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      const auto row = data[r].get<std::vector<double>>();
      if (row.size() != cols) throw DataError("matrix row " + std::to_string(r) + " has wrong length");
      std::copy(row.begin(), row.end(), m.row(r).begin());
    }
    return m;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed matrix: ") + e.what());
  }
}

Json to_json(const DensityModel& m) {
  return {{"bandwidths", m.bandwidths()},
          {"log_floor", m.log_floor()},
          {"points", to_json(m.training_points())}};
}

DensityModel density_from_json(const Json& j) {
  try {
    return DensityModel(matrix_from_json(j.at("points")),
                        j.at("bandwidths").get<std::vector<double>>(),
                        j.at("log_floor").get<double>());
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed density model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid density model: ") + e.what());
  }
}

Json to_json(const PcaModel& m) {
  return {{"mean", m.mean},
          {"components", to_json(m.components)},
          {"explained_variance", m.explained_variance},
          {"zero_variance", m.zero_variance}};
}

PcaModel pca_from_json(const Json& j) {
  try {
    PcaModel m;
    m.mean = j.at("mean").get<std::vector<double>>();
    m.components = matrix_from_json(j.at("components"));
    m.explained_variance = j.at("explained_variance").get<std::vector<double>>();
    m.zero_variance = j.at("zero_variance").get<bool>();
    if (m.components.rows() != m.mean.size()) throw DataError("pca shape mismatch");
    return m;
  } catch (const Json::exception& e) {
    throw DataError(std::string("malformed pca model: ") + e.what());
  }
}

Json to_json(const ResultsReport& r, bool include_timing) {
  Json j;
  j["config"] = to_json(r.config);
  j["k_predicted"] = r.k_predicted;
  Json scores = Json::object();
  for (const auto& [method, s] : r.scores) scores[method] = to_json(s);
  j["scores"] = scores;
  j["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  j["disagreement_cost"] = r.disagreement_cost;
  j["likelihood"] = to_json(r.likelihood);
  j["graph"] = {{"kept_edges", r.graph.kept_edges},
                {"dropped_edges", r.graph.dropped_edges},
                {"positive_edges", r.graph.positive_edges}};
  j["training"] = {{"same_pairs", r.training_same},
                   {"diff_pairs", r.training_diff},
                   {"pca_dim", r.pca_dim}};
  j["labels"] = r.predicted.labels();
  if (include_timing) {
    Json t = Json::object();
    for (const StageTime& s : r.timing) t[s.stage] = s.seconds;
    j["timing"] = t;
  }
  return j;
}

}  // namespace edgeclust
