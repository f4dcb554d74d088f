#include "commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "hypconf/errors.hpp"
#include "hypconf/fixtures.hpp"
#include "hypconf/flow.hpp"
#include "hypconf/io.hpp"
#include "hypconf/metric.hpp"
#include "hypconf/teich.hpp"

namespace hypconf::cli {

namespace {

using io::json;

void emit(std::ostream& out, const std::string& path, const json& doc)
{
    if (path.empty() || path == "-") {
        out << doc.dump(2) << '\n';
    }
    else {
        io::write_json(path, doc);
    }
}

std::vector<double> load_target(const std::string& arg, const io::SurfaceFile& surface)
{
    json doc;
    if (arg == "zero" && !std::filesystem::exists(arg)) {
        doc = "zero";
    }
    else {
        doc = io::read_json(arg);
    }
    return io::target_from_json(doc, surface.metric.triangulation(), surface.vertex_names);
}

std::string newton_csv(const SolveReport& r)
{
    FlowTrace trace;
    for (std::size_t k = 0; k < r.residual_history.size(); ++k) {
        trace.rows.push_back({static_cast<int>(k), static_cast<double>(k), r.residual_history[k],
                              r.flips_per_step[k], r.area_history[k]});
    }
    return io::trace_to_csv(trace);
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err)
{
    std::optional<io::SurfaceFile> file;
    try {
        file = io::load_surface(path);
    }
    catch (const Error& e) {
        err << "invalid surface: " << e.what() << '\n';
        return kInvalid;
    }
    const PolyhedralMetric& m = file->metric;
    const Triangulation& t = m.triangulation();
    out << "triangles " << t.triangle_count() << '\n'
        << "edges " << t.edge_count() << '\n'
        << "vertices " << t.vertex_count() << '\n'
        << "euler_characteristic " << t.euler_characteristic() << '\n'
        << "orientable yes\n"
        << "genus " << t.genus() << '\n';

    std::vector<int> bad;
    for (int f = 0; f < t.triangle_count(); ++f) {
        if (!m.triangle(f).satisfies_triangle_inequality()) bad.push_back(f);
    }
    if (!bad.empty()) {
        out << "triangle_inequality violated:";
        for (int f : bad) out << ' ' << f;
        out << '\n';
        err << "invalid surface: triangle " << bad.front() << " violates the triangle inequality\n";
        return kInvalid;
    }
    out << "triangle_inequality ok\n";
    const auto check = is_delaunay(m);
    out << "delaunay " << (check.delaunay ? "yes" : "no") << '\n';
    out << std::setprecision(17);
    for (int e = 0; e < t.edge_count(); ++e) {
        out << "edge " << e << " excess " << edge_delaunay_excess(m, e)
            << (t.is_folded(e) ? " folded" : "") << '\n';
    }
    return kOk;
}

int cmd_delaunay(const std::string& path, double eps, const std::string& output,
                 const std::string& log_path, std::ostream& out, std::ostream& err)
{
    const io::SurfaceFile file = io::load_surface(path);
    file.metric.validate();
    try {
        const auto result = make_delaunay(file.metric, eps);
        emit(out, output, io::surface_to_json(result.metric, file.vertex_names));
        if (!log_path.empty()) io::write_json(log_path, io::flip_log_to_json(result.flips));
        err << result.flips.size() << " flips\n";
        return kOk;
    }
    catch (const FlipLimitExceeded& e) {
        err << "flip limit: " << e.what() << " (worst edge " << e.worst_edge() << ", excess "
            << e.worst_excess() << ")\n";
        return kFlipCap;
    }
}

int finish_solve(const SolveReport& report, const io::SurfaceFile& file, const json& doc,
                 const std::string& output, const std::string& report_path, std::ostream& out,
                 std::ostream& err)
{
    if (!output.empty()) io::write_json(output, io::surface_to_json(report.metric, file.vertex_names));
    emit(out, report_path, doc);
    if (!report.converged) {
        err << "no convergence: " << report.diagnostic << '\n';
        return kDiverged;
    }
    return kOk;
}

int cmd_solve(const std::string& path, const std::string& target_arg, double tol, int max_iter,
              const std::string& trace_path, const std::string& output,
              const std::string& report_path, std::ostream& out, std::ostream& err)
{
    const io::SurfaceFile file = io::load_surface(path);
    const auto target = load_target(target_arg, file);
    NewtonConfig cfg;
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    const SolveReport report = newton_solve(file.metric, target, cfg);
    if (!trace_path.empty()) io::write_text(trace_path, newton_csv(report));
    return finish_solve(report, file, io::report_to_json(report), output, report_path, out, err);
}

int cmd_flow(const std::string& path, const std::string& target_arg, double t_max, double tol,
             const std::string& trace_path, const std::string& output,
             const std::string& report_path, std::ostream& out, std::ostream& err)
{
    const io::SurfaceFile file = io::load_surface(path);
    const auto target = load_target(target_arg, file);
    FlowConfig cfg;
    cfg.t_max = t_max;
    cfg.tol = tol;
    const FlowResult result = yamabe_flow(file.metric, target, cfg);
    if (!trace_path.empty()) io::write_text(trace_path, io::trace_to_csv(result.trace));
    json doc = io::report_to_json(result.report);
    doc["energy_monotone"] = result.trace.energy_monotone;
    json surgeries = json::array();
    for (const auto& s : result.trace.surgeries) {
        surgeries.push_back(
            {{"step", s.step}, {"t", s.t}, {"flips", s.flips}, {"residual_jump", s.residual_jump}});
    }
    doc["surgeries"] = surgeries;
    return finish_solve(result.report, file, doc, output, report_path, out, err);
}

int cmd_decide(const std::string& first, const std::string& second, double tol,
               const std::string& witness, std::ostream& out, std::ostream& err)
{
    const io::SurfaceFile a = io::load_surface(first);
    const io::SurfaceFile b = io::load_surface(second);
    a.metric.validate();
    b.metric.validate();
    try {
        const auto decision = decide_discrete_conformal(a.metric, b.metric, tol);
        out << (decision.conformal ? "yes" : "no") << '\n';
        emit(out, witness, io::decision_to_json(decision));
        return decision.conformal ? kOk : kNo;
    }
    catch (const UnsupportedInput& e) {
        err << "unsupported: " << e.what() << '\n';
        return kInvalid;
    }
}

int cmd_shear(const std::string& path, std::optional<std::uint64_t> rescale, double eps,
              std::ostream& out)
{
    const io::SurfaceFile file = io::load_surface(path);
    file.metric.validate();
    LambdaMetric l = theta(make_delaunay(file.metric, eps).metric);
    if (rescale) {
        std::mt19937_64 rng(*rescale);
        std::uniform_real_distribution<double> weight(-1.0, 1.0);
        std::vector<double> u(l.triangulation().vertex_count());
        for (double& x : u) x = weight(rng);
        l = scale_vertices(l, u);
    }
    out << io::shear_to_json(l).dump(2) << '\n';
    return kOk;
}

int cmd_conformal(const std::string& path, std::optional<std::uint64_t> seed, double scale,
                  const std::vector<double>& factor, double eps, const std::string& output,
                  std::ostream& out, std::ostream& err)
{
    const io::SurfaceFile file = io::load_surface(path);
    file.metric.validate();
    const auto base = make_delaunay(file.metric, eps);
    const int n = base.metric.triangulation().vertex_count();
    std::vector<double> u = factor;
    if (u.empty()) {
        u.assign(n, 0.0);
        std::mt19937_64 rng(seed.value_or(0));
        std::uniform_real_distribution<double> pick(-scale, scale);
        for (double& x : u) x = pick(rng);
    }
    if (static_cast<int>(u.size()) != n) {
        err << "conformal factor needs " << n << " entries\n";
        return kInvalid;
    }
    const auto image = conformal_change(base.metric, u, eps);
    emit(out, output, io::surface_to_json(image.metric, file.vertex_names));
    return kOk;
}

int cmd_fixture(const std::string& name, int vertices, std::optional<std::uint64_t> seed,
                double length, double spread, const std::string& output, std::ostream& out,
                std::ostream& err)
{
    Triangulation t = fixtures::sphere();
    if (name == "sphere") {
        t = fixtures::sphere();
    }
    else if (name == "torus") {
        t = fixtures::torus();
    }
    else if (name == "genus2") {
        t = fixtures::genus2_with_vertices(vertices);
    }
    else {
        err << "unknown fixture \"" << name << "\" (sphere, torus, genus2)\n";
        return kInvalid;
    }
    if (name != "genus2" && vertices != 0) {
        for (int k = 0; k < vertices; ++k) t = fixtures::split_triangle(t, k % t.triangle_count());
    }
    const PolyhedralMetric m = seed ? fixtures::random_metric(t, *seed, spread)
                                    : fixtures::uniform_metric(t, length);
    emit(out, output, io::surface_to_json(m));
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Discrete conformal geometry of hyperbolic polyhedral surfaces"};
    app.name(args.empty() ? "hypconf" : std::filesystem::path(args[0]).filename().string());
    app.require_subcommand(1);

    std::string file, file2, target, output, log_path, trace, report_path, witness;
    double eps = kDelaunayEpsilon;
    double tol = 1e-10;
    double decide_tol = kShearTolerance;
    double t_max = 1e3;
    double length = 1.0;
    double spread = 1.0;
    double scale = 1.0;
    int max_iter = 100;
    int vertices = 0;
    std::optional<std::uint64_t> seed;
    std::vector<double> factor;
    std::function<int()> action;

    auto* validate = app.add_subcommand("validate", "Check a surface file and report its invariants");
    validate->add_option("surface", file, "Surface JSON")->required();
    validate->callback([&] { action = [&] { return cmd_validate(file, out, err); }; });

    auto* delaunay = app.add_subcommand("delaunay", "Flip to a Delaunay triangulation");
    delaunay->add_option("surface", file, "Surface JSON")->required();
    delaunay->add_option("--eps", eps, "Delaunay tolerance")->capture_default_str();
    delaunay->add_option("-o,--output", output, "Output surface (default stdout)");
    delaunay->add_option("--flip-log", log_path, "Write the flip log here");
    delaunay->callback([&] {
        action = [&] { return cmd_delaunay(file, eps, output, log_path, out, err); };
    });

    auto* solve = app.add_subcommand("solve", "Newton solve for prescribed curvature");
    solve->add_option("surface", file, "Surface JSON")->required();
    solve->add_option("target", target, "Target JSON, or zero")->required();
    solve->add_option("--tol", tol, "Residual tolerance")->capture_default_str();
    solve->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
    solve->add_option("--trace", trace, "CSV trace output");
    solve->add_option("-o,--output", output, "Final surface output");
    solve->add_option("--report", report_path, "Report JSON (default stdout)");
    solve->callback([&] {
        action = [&] {
            return cmd_solve(file, target, tol, max_iter, trace, output, report_path, out, err);
        };
    });

    auto* flow = app.add_subcommand("flow", "Yamabe flow with surgery");
    flow->add_option("surface", file, "Surface JSON")->required();
    flow->add_option("target", target, "Target JSON, or zero")->required();
    flow->add_option("--t-max", t_max, "Final time")->capture_default_str();
    flow->add_option("--tol", tol, "Residual tolerance")->capture_default_str();
    flow->add_option("--trace", trace, "CSV trace output");
    flow->add_option("-o,--output", output, "Final surface output");
    flow->add_option("--report", report_path, "Report JSON (default stdout)");
    flow->callback([&] {
        action = [&] { return cmd_flow(file, target, t_max, tol, trace, output, report_path, out, err); };
    });

    auto* decide = app.add_subcommand("decide", "Decide whether two metrics are discrete conformal");
    decide->add_option("first", file, "Surface JSON")->required();
    decide->add_option("second", file2, "Surface JSON")->required();
    decide->add_option("--tol", decide_tol, "Log-shear tolerance")->capture_default_str();
    decide->add_option("--witness", witness, "Witness JSON (default stdout)");
    decide->callback([&] {
        action = [&] { return cmd_decide(file, file2, decide_tol, witness, out, err); };
    });

    auto* shear_cmd = app.add_subcommand("shear", "Shear coordinates of the Delaunay triangulation");
    shear_cmd->add_option("surface", file, "Surface JSON")->required();
    shear_cmd->add_option("--rescale", seed, "Rescale lambda by random vertex weights from this seed");
    shear_cmd->add_option("--eps", eps, "Delaunay tolerance")->capture_default_str();
    shear_cmd->callback([&] { action = [&] { return cmd_shear(file, seed, eps, out); }; });

    auto* conformal = app.add_subcommand("conformal", "Apply a conformal factor with surgery");
    conformal->add_option("surface", file, "Surface JSON")->required();
    conformal->add_option("--u", factor, "Conformal factor, one value per vertex");
    conformal->add_option("--seed", seed, "Draw u uniformly in [-scale, scale]");
    conformal->add_option("--scale", scale, "Bound on random u")->capture_default_str();
    conformal->add_option("--eps", eps, "Delaunay tolerance")->capture_default_str();
    conformal->add_option("-o,--output", output, "Output surface (default stdout)");
    conformal->callback([&] {
        action = [&] { return cmd_conformal(file, seed, scale, factor, eps, output, out, err); };
    });

    auto* fixture = app.add_subcommand("fixture", "Write a reference surface");
    fixture->add_option("name", file, "sphere, torus or genus2")->required();
    fixture->add_option("--vertices", vertices, "Extra vertices inserted into triangles 0, 1, ...");
    fixture->add_option("--seed", seed, "Random lengths from this seed");
    fixture->add_option("--length", length, "Uniform edge length")->capture_default_str();
    fixture->add_option("--spread", spread, "Random log-length half-width")->capture_default_str();
    fixture->add_option("-o,--output", output, "Output surface (default stdout)");
    fixture->callback([&] {
        action = [&] { return cmd_fixture(file, vertices, seed, length, spread, output, out, err); };
    });

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        return action();
    }
    catch (const InvalidTarget& e) {
        err << "invalid target: " << e.what() << '\n';
        return kInvalid;
    }
    catch (const FlipLimitExceeded& e) {
        err << "flip limit: " << e.what() << '\n';
        return kFlipCap;
    }
    catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }
    catch (const io::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }
}

}  // namespace hypconf::cli
