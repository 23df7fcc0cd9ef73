#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "irscov/channel_model.hpp"
#include "irscov/harness.hpp"
#include "irscov/measurement.hpp"
#include "irscov/reflection.hpp"
#include "irscov/walra.hpp"

namespace irscov {

using Json = nlohmann::json;

// Complex matrices are stored as {"rows", "cols", "re": [[...]], "im": [[...]]}
// in row-major nested arrays. Doubles round-trip exactly.
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

Json reflection_to_json(const ReflectionVector& v);
ReflectionVector reflection_from_json(const Json& j, int bits);
/// "0,3,1,2"
std::string reflection_to_csv(const ReflectionVector& v);

Json channel_snapshot_to_json(const CascadedChannel& h, const CMatrix& R, Index true_rank);
CascadedChannel channel_from_json(const Json& j);

Json measurement_to_json(const MeasurementSet& set);
MeasurementSet measurement_from_json(const Json& j);

Json estimate_to_json(const WalraResult& r, Index d_stop);
/// Reads the "R" (or, when present and psd is true, "R_psd") matrix.
CMatrix estimate_matrix_from_json(const Json& j, bool psd = true);

Json report_to_json(const OptimizationReport& r);

Json profile_to_json(const MultipathProfile& p);
MultipathProfile profile_from_json(const Json& j, MultipathProfile base = {});

Json config_to_json(const ScenarioConfig& c);
/// Fields absent from j keep their value in base.
ScenarioConfig config_from_json(const Json& j, ScenarioConfig base);

Json result_to_json(const ExperimentResult& r);
ExperimentResult result_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace irscov
