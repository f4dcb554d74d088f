#include "hypconf/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "hypconf/errors.hpp"

namespace hypconf::io {

namespace {

SideRef side_from_json(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
        throw ValidationError(where + " must be a [triangle, side] pair of integers");
    }
    return {j[0].get<int>(), j[1].get<int>()};
}

json side_to_json(SideRef s) { return json::array({s.triangle, s.side}); }

json gluing_to_json(const Triangulation& t)
{
    json out = json::array();
    for (const auto& [a, b] : t.gluing()) out.push_back(json::array({side_to_json(a), side_to_json(b)}));
    return out;
}

struct Complex {
    int triangles;
    std::vector<Gluing> gluing;
    std::optional<std::vector<std::array<int, 3>>> corners;
};

Complex complex_from_json(const json& doc, const std::string& where)
{
    if (!doc.is_object()) throw ValidationError(where + " must be a JSON object");
    if (!doc.contains("triangles") || !doc["triangles"].is_number_integer()) {
        throw ValidationError(where + ": \"triangles\" must be an integer");
    }
    if (!doc.contains("gluing") || !doc["gluing"].is_array()) {
        throw ValidationError(where + ": \"gluing\" must be a list of side pairs");
    }
    Complex c{doc["triangles"].get<int>(), {}, std::nullopt};
    const json& g = doc["gluing"];
    for (std::size_t i = 0; i < g.size(); ++i) {
        const std::string at = where + ": gluing " + std::to_string(i);
        if (!g[i].is_array() || g[i].size() != 2) throw ValidationError(at + " must hold two sides");
        c.gluing.emplace_back(side_from_json(g[i][0], at), side_from_json(g[i][1], at));
    }
    if (doc.contains("corner_vertices")) {
        const json& cv = doc["corner_vertices"];
        if (!cv.is_array()) throw ValidationError(where + ": \"corner_vertices\" must be a list");
        std::vector<std::array<int, 3>> rows;
        for (std::size_t t = 0; t < cv.size(); ++t) {
            if (!cv[t].is_array() || cv[t].size() != 3) {
                throw ValidationError(where + ": corner_vertices row " + std::to_string(t) +
                                      " must list three vertex ids");
            }
            rows.push_back({cv[t][0].get<int>(), cv[t][1].get<int>(), cv[t][2].get<int>()});
        }
        c.corners = std::move(rows);
    }
    return c;
}

Triangulation build(const Complex& c) { return Triangulation::build(c.triangles, c.gluing, c.corners); }

json complex_to_json(const Triangulation& t)
{
    json out;
    out["triangles"] = t.triangle_count();
    out["gluing"] = gluing_to_json(t);
    if (!t.has_canonical_vertex_ids()) out["corner_vertices"] = t.corner_vertices();
    return out;
}

json doubles(const std::vector<double>& v)
{
    json out = json::array();
    for (double x : v) out.push_back(x);
    return out;
}

}  // namespace

SurfaceFile surface_from_json(const json& doc)
{
    Triangulation tri = build(complex_from_json(doc, "surface"));
    if (!doc.contains("lengths") || !doc["lengths"].is_array()) {
        throw ValidationError("surface: \"lengths\" must be a list of numbers");
    }
    std::vector<double> lengths;
    for (std::size_t e = 0; e < doc["lengths"].size(); ++e) {
        const json& x = doc["lengths"][e];
        if (!x.is_number()) throw ValidationError("surface: length " + std::to_string(e) + " is not a number");
        lengths.push_back(x.get<double>());
    }

    if (doc.contains("lineage")) {
        const json& lin = doc["lineage"];
        if (!lin.is_object() || !lin.contains("root") || !lin.contains("flips")) {
            throw ValidationError("surface: \"lineage\" needs \"root\" and \"flips\"");
        }
        Triangulation replayed = build(complex_from_json(lin["root"], "lineage root"));
        for (const FlipMove& move : flip_log_from_json(lin["flips"])) {
            try {
                replayed = apply_flip_move(replayed, move);
            }
            catch (const UsageError& err) {
                throw ValidationError(std::string("surface lineage: ") + err.what());
            }
        }
        if (!(replayed == tri)) {
            throw ValidationError("surface lineage does not reproduce the stored triangulation");
        }
        tri.set_lineage(replayed.lineage());
    }

    SurfaceFile out{PolyhedralMetric(std::move(tri), std::move(lengths)), {}};
    if (doc.contains("vertex_names")) {
        const json& names = doc["vertex_names"];
        if (!names.is_array() ||
            static_cast<int>(names.size()) != out.metric.triangulation().vertex_count()) {
            throw ValidationError("surface: \"vertex_names\" must name each of the " +
                                  std::to_string(out.metric.triangulation().vertex_count()) +
                                  " vertices");
        }
        for (const json& n : names) out.vertex_names.push_back(n.is_string() ? n.get<std::string>() : n.dump());
    }
    return out;
}

json surface_to_json(const PolyhedralMetric& m, const std::vector<std::string>& vertex_names)
{
    const Triangulation& t = m.triangulation();
    json out = complex_to_json(t);
    out["lengths"] = doubles(m.lengths());
    if (!vertex_names.empty()) out["vertex_names"] = vertex_names;
    if (!t.lineage().flips.empty()) {
        out["lineage"] = {{"root", complex_to_json(t.root())},
                          {"flips", flip_log_to_json(t.lineage().flips)}};
    }
    return out;
}

json flip_move_to_json(const FlipMove& move)
{
    json boundary = json::array();
    for (SideRef s : move.boundary) boundary.push_back(side_to_json(s));
    return {{"edge", move.edge},
            {"boundary", boundary},
            {"new_edge", move.new_edge},
            {"clockwise", move.clockwise}};
}

FlipMove flip_move_from_json(const json& doc)
{
    if (!doc.is_object() || !doc.contains("edge") || !doc.contains("boundary") ||
        !doc["boundary"].is_array() || doc["boundary"].size() != 4) {
        throw ValidationError("flip move needs \"edge\" and a four-side \"boundary\"");
    }
    FlipMove move;
    move.edge = doc["edge"].get<int>();
    for (int k = 0; k < 4; ++k) move.boundary[k] = side_from_json(doc["boundary"][k], "flip boundary");
    move.new_edge = doc.value("new_edge", move.edge);
    move.clockwise = doc.value("clockwise", false);
    return move;
}

json flip_log_to_json(const std::vector<FlipMove>& log)
{
    json out = json::array();
    for (const FlipMove& m : log) out.push_back(flip_move_to_json(m));
    return out;
}

std::vector<FlipMove> flip_log_from_json(const json& doc)
{
    if (!doc.is_array()) throw ValidationError("flip log must be a list");
    std::vector<FlipMove> out;
    for (const json& m : doc) out.push_back(flip_move_from_json(m));
    return out;
}

std::vector<double> target_from_json(const json& doc, const Triangulation& t,
                                     const std::vector<std::string>& vertex_names)
{
    const int n = t.vertex_count();
    if (doc.is_string()) {
        if (doc.get<std::string>() != "zero") {
            throw InvalidTarget("target must be \"zero\" or an object of vertex curvatures");
        }
        return std::vector<double>(n, 0.0);
    }
    if (!doc.is_object()) throw InvalidTarget("target must be \"zero\" or an object of vertex curvatures");
    std::vector<double> k(n, 0.0);
    std::vector<char> set(n, 0);
    for (const auto& [key, value] : doc.items()) {
        int v = -1;
        const auto named = std::find(vertex_names.begin(), vertex_names.end(), key);
        if (named != vertex_names.end()) {
            v = static_cast<int>(named - vertex_names.begin());
        }
        else {
            std::size_t used = 0;
            try {
                v = std::stoi(key, &used);
            }
            catch (const std::exception&) {
                used = 0;
            }
            if (used != key.size()) v = -1;
        }
        if (v < 0 || v >= n) throw InvalidTarget("target names unknown vertex \"" + key + "\"");
        if (!value.is_number()) throw InvalidTarget("target for vertex \"" + key + "\" is not a number");
        k[v] = value.get<double>();
        set[v] = 1;
    }
    for (int v = 0; v < n; ++v) {
        if (!set[v]) throw InvalidTarget("target is missing vertex " + std::to_string(v));
    }
    return k;
}

json report_to_json(const SolveReport& r)
{
    json out;
    out["converged"] = r.converged;
    out["iterations"] = r.iterations;
    out["residual_inf"] = r.residual_history.empty() ? 0.0 : r.residual_history.back();
    out["residual_history"] = doubles(r.residual_history);
    out["u"] = doubles(r.u);
    out["lengths"] = doubles(r.metric.lengths());
    out["area"] = total_area(r.metric);
    out["curvature"] = doubles(curvature(r.metric));
    out["flip_count"] = r.flips.size();
    out["flips"] = flip_log_to_json(r.flips);
    out["quadratic_constant"] = r.quadratic_constant;
    out["decay_rate"] = r.decay_rate;
    out["decay_r2"] = r.decay_r2;
    if (!r.diagnostic.empty()) out["diagnostic"] = r.diagnostic;
    if (!r.degenerating_vertices.empty()) out["degenerating_vertices"] = r.degenerating_vertices;
    if (!r.collapsing_edges.empty()) out["collapsing_edges"] = r.collapsing_edges;
    return out;
}

json decision_to_json(const ConformalDecision& d)
{
    json out;
    out["conformal"] = d.conformal;
    out["residual"] = d.residual;
    out["flips_first"] = flip_log_to_json(d.flips_first);
    out["flips_second"] = flip_log_to_json(d.flips_second);
    if (d.conformal) {
        out["factor"] = doubles(d.factor);
        out["factor_residual"] = d.factor_residual;
    }
    return out;
}

json shear_to_json(const LambdaMetric& l)
{
    return {{"shear", doubles(shear(l))}, {"log_shear", doubles(log_shear(l))}};
}

std::string trace_to_csv(const FlowTrace& trace)
{
    std::ostringstream os;
    os.precision(17);
    os << "step,t,residual_inf,flips_this_step,area\n";
    for (const auto& row : trace.rows) {
        os << row.step << ',' << row.t << ',' << row.residual_inf << ',' << row.flips_this_step
           << ',' << row.area << '\n';
    }
    return os.str();
}

json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    try {
        return json::parse(in);
    }
    catch (const json::parse_error& err) {
        throw ValidationError(path.string() + ": " + err.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& doc)
{
    write_text(path, doc.dump(2) + "\n");
}

SurfaceFile load_surface(const std::filesystem::path& path)
{
    try {
        return surface_from_json(read_json(path));
    }
    catch (const json::exception& err) {
        throw ValidationError(path.string() + ": " + err.what());
    }
}

}  // namespace hypconf::io
