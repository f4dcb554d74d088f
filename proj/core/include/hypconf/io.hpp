#pragma once

// JSON and CSV formats for surfaces, targets, flip logs and solver output.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypconf/flow.hpp"
#include "hypconf/metric.hpp"
#include "hypconf/teich.hpp"

namespace hypconf::io {

using nlohmann::json;

struct SurfaceFile {
    PolyhedralMetric metric;
    std::vector<std::string> vertex_names;
};

// Throws ValidationError with the offending element on malformed input.
SurfaceFile surface_from_json(const json& doc);
json surface_to_json(const PolyhedralMetric& m, const std::vector<std::string>& vertex_names = {});

json flip_move_to_json(const FlipMove& move);
FlipMove flip_move_from_json(const json& doc);
json flip_log_to_json(const std::vector<FlipMove>& log);
std::vector<FlipMove> flip_log_from_json(const json& doc);

// Either the string "zero" or an object keyed by vertex id or vertex name.
std::vector<double> target_from_json(const json& doc, const Triangulation& t,
                                     const std::vector<std::string>& vertex_names = {});

json report_to_json(const SolveReport& report);
json decision_to_json(const ConformalDecision& decision);
json shear_to_json(const LambdaMetric& l);
std::string trace_to_csv(const FlowTrace& trace);

json read_json(const std::filesystem::path& path);
// Two-space indented, newline terminated.
void write_json(const std::filesystem::path& path, const json& doc);
void write_text(const std::filesystem::path& path, const std::string& text);

SurfaceFile load_surface(const std::filesystem::path& path);

}  // namespace hypconf::io
