#pragma once

// Run configuration and file formats shared by the command-line tool.
//
// Curve file (schema 1):
//   {"schema": 1, "fields": [x, y], "orientation_conventions": {...},
//    "loops": [{"sign_class": "positive"|"negative",
//               "points": [[x1, x2, x3, x4], ...]}, ...]}
// Loops are closed implicitly (last point joins the first).
//
// OBJ export: stereographic images in ℝ³ from a pole away from all loops;
// one `v` line per point and one closed `l` element per loop.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "combing/extract.hpp"
#include "combing/loops.hpp"

namespace combing {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
    std::string command;
    std::string x, y;
    ExtractionParams extraction{};
    std::optional<double> perturb;  ///< amplitude applied to y
    std::uint64_t seed = 1;
    std::string out, obj;
    std::string suite = "quick";
};

/// Overlays the keys of a JSON config object onto `cfg`: x, y, resolution,
/// eps, step, perturb, seed, out, obj, suite. Throws std::invalid_argument on
/// unknown keys or wrong types.
void apply_config_json(RunConfig& cfg, const nlohmann::json& j);

nlohmann::json orientation_conventions();

nlohmann::json curves_to_json(const std::string& x, const std::string& y, const CollinearityLinks& links);

struct TaggedLoop {
    SignClass sign_class = SignClass::Positive;
    OrientedLoop loop;
};
/// Inverse of curves_to_json. Throws std::invalid_argument on malformed input.
std::vector<TaggedLoop> curves_from_json(const nlohmann::json& j);

void write_obj(std::ostream& os, const std::vector<TaggedLoop>& loops);

/// Polylines of an OBJ file written by write_obj (vertices of each `l`
/// element, without the repeated closing index).
std::vector<std::vector<Vec3>> read_obj(std::istream& is);

}  // namespace combing
