#pragma once

#include <json.hpp>

#include <string>

#include "bicm/gexit.hpp"

namespace bicm::cli {

nlohmann::json curve_to_json(const GexitCurve& curve);
GexitCurve curve_from_json(const nlohmann::json& j);

/// CSV with the fixed header "alpha,g,stderr"; %.17g columns so a reload
/// reproduces the values exactly. Throws on an empty curve (no file is
/// created).
void write_curve_csv(const GexitCurve& curve, const std::string& path);
GexitCurve curve_from_csv(const std::string& path);

/// Result envelope shared by all subcommands: version, seed, and the
/// effective configuration ride along with every result. No timestamps, so
/// equal configs produce byte-identical bodies.
nlohmann::json make_envelope(const nlohmann::json& config, std::uint64_t seed,
                             nlohmann::json result);

void write_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace bicm::cli
