#pragma once

#include "json.hpp"

#include "edgeclust/analysis.h"
#include "edgeclust/corrclust.h"
#include "edgeclust/density.h"
#include "edgeclust/edge_features.h"
#include "edgeclust/pipeline.h"

namespace edgeclust {

using Json = nlohmann::ordered_json;

Json to_json(const RunConfig& cfg);
Json to_json(const ScoreReport& s);
Json to_json(const SolveCertificate& c);
Json to_json(const LikelihoodReport& l);
Json to_json(const ExpectedDisReport& e);
Json to_json(const LpStats& s);
Json to_json(const DensityModel& m);
Json to_json(const PcaModel& m);
// Throw DataError on malformed documents.
DensityModel density_from_json(const Json& j);
PcaModel pca_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
Json to_json(const Matrix& m);

// Timing is the only field outside the determinism contract.
Json to_json(const ResultsReport& r, bool include_timing = true);

}  // namespace edgeclust
