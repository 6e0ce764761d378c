#pragma once

// JSON and CSV serialization for curves, boundary data, certificates,
// diagnostics, pipeline configs and ledgers. Doubles in JSON use the shortest
// representation that round-trips; CSV uses %.17g.

#include <string>

#include <json.hpp>

#include "nullcurve/diagnostics.hpp"
#include "nullcurve/pipelines.hpp"
#include "nullcurve/riemann_hilbert.hpp"
#include "nullcurve/weierstrass.hpp"

namespace nullcurve {

using Json = nlohmann::ordered_json;

Json to_json(const SeriesMap& F);
SeriesMap series_from_json(const Json& j);

Json to_json(const BoundaryData& bd);
BoundaryData boundary_data_from_json(const Json& j);

Json to_json(const RHCertificate& cert);
Json to_json(const PeriodMatrix& p);
Json to_json(const RadiusReport& r);
Json to_json(const BoundedCoordinateReport& r);
Json to_json(const EmbeddednessReport& r);
/// {iterations: [{t, residual_norm}]}
Json kill_trace_json(const std::vector<NewtonStep>& trace);

/// Unknown keys are rejected so that misspelled fields do not pass silently.
Json to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const Json& j);

/// Header k,delta,intrinsic,extrinsic,supF3,cert_a,cert_b,cert_c,rh_k followed
/// by cert_d,minF12,shortcut,directions (directions joined with ';').
std::string ledger_csv(const GrowthLedger& ledger);

/// %.17g
std::string format_double(double x);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace nullcurve
