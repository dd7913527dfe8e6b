#pragma once

#include <string>

#include <json.hpp>

namespace rncurves {

using ordered_json = nlohmann::ordered_json;

// Deterministic serialization: insertion key order, doubles at 17 significant
// digits, 2-space indent. Identical values yield byte-identical output.
std::string dump_json17(const ordered_json& j, int indent = 2);

ordered_json complex_json(double re, double im);

}  // namespace rncurves
