#pragma once

// JSON serialisation of matrices, strategies, channels and run summaries.
//
// Matrix:   [[[re, im], ...], ...]  (plain numbers are accepted as real entries)
// Strategy: {"d", "target", "pairs": [{"p", "rho", "effect"}], "metadata"?}
// Channel:  {"kind": <noise kind>, "d", "params": {"p" | "theta"}}
//           {"kind": "composed", "d", "stages": [<channel without d>, ...]}
//           {"kind": "kraus", "d", "ops": [<matrix>, ...]}
//           {"kind": "ideal", "d"}

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qgv/channels.hpp"
#include "qgv/protocol_sim.hpp"
#include "qgv/strategies.hpp"

namespace qgv::io {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json strategy_to_json(const Strategy& s, const Json& metadata = Json::object());
// Parses and validates.
Strategy strategy_from_json(const Json& j);

Json noise_model_to_json(const NoiseModel& model);
NoiseModel noise_model_from_json(const Json& j);

// Builds the Kraus channel described by any of the channel forms above.
KrausChannel channel_from_json(const Json& j);
Json channel_to_json(const KrausChannel& ch);
Json channel_to_json(const NoiseModel& model, int d);

Json run_summary_json(const VerificationRun& run, const Verdict& v, double epsilon, double delta);

// File helpers; parse and I/O failures surface as ValidationError.
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);
std::string read_text(const std::filesystem::path& path);

}  // namespace qgv::io
