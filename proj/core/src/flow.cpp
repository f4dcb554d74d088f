#include "hypconf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>

#include "hypconf/errors.hpp"
#include "hypconf/hyptrig.hpp"

namespace hypconf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double inf_norm(const std::vector<double>& v)
{
    double n = 0.0;
    for (double x : v) n = std::max(n, std::abs(x));
    return n;
}

double sq_norm(const std::vector<double>& v)
{
    double n = 0.0;
    for (double x : v) n += x * x;
    return n;
}

std::vector<double> residual(const PolyhedralMetric& m, const std::vector<double>& target)
{
    auto k = curvature(m);
    for (std::size_t i = 0; i < k.size(); ++i) k[i] -= target[i];
    return k;
}

std::vector<double> axpy(const std::vector<double>& x, double a, const std::vector<double>& y)
{
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double min_excess(const LambdaMetric& l)
{
    double m = std::numeric_limits<double>::infinity();
    for (int e = 0; e < l.triangulation().edge_count(); ++e) {
        if (!l.triangulation().is_folded(e)) m = std::min(m, decorated_delaunay_excess(l, e));
    }
    return m;
}

void describe_degeneration(SolveReport& report, const PolyhedralMetric& m,
                           const std::vector<double>& k)
{
    for (std::size_t v = 0; v < k.size(); ++v) {
        if (k[v] > kTwoPi - 0.1) report.degenerating_vertices.push_back(static_cast<int>(v));
    }
    for (int e = 0; e < m.triangulation().edge_count(); ++e) {
        if (m.length(e) < 1e-6) report.collapsing_edges.push_back(e);
    }
    std::ostringstream os;
    os << report.diagnostic;
    if (!report.degenerating_vertices.empty()) {
        os << "; cone angles collapsing at vertices";
        for (int v : report.degenerating_vertices) os << ' ' << v;
    }
    if (!report.collapsing_edges.empty()) {
        os << "; edges shrinking to zero:";
        for (int e : report.collapsing_edges) os << ' ' << e;
    }
    const double spread = report.u.empty() ? 0.0 : inf_norm(report.u);
    if (spread > 30.0) os << "; conformal factor escaping to infinity (|u| = " << spread << ")";
    report.diagnostic = os.str();
}

struct Prepared {
    ConformalState state;
    std::vector<FlipMove> delaunay_flips;
    // The metric at the starting state; exactly the Delaunay base when u = 0.
    PolyhedralMetric start;
};

Prepared prepare(const PolyhedralMetric& base, const std::vector<double>& target,
                 const std::optional<std::vector<double>>& initial_u, double eps)
{
    validate_target(base.triangulation(), target);
    base.validate();
    auto d = make_delaunay(base, eps);
    Prepared p{initial_state(d.metric), std::move(d.flips), d.metric};
    if (initial_u) {
        p.state = advance(p.state, *initial_u, eps);
        p.start = p.state.metric();
    }
    return p;
}

std::vector<FlipMove> concat(std::vector<FlipMove> a, const std::vector<FlipMove>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

void validate_target(const Triangulation& t, const std::vector<double>& target)
{
    if (static_cast<int>(target.size()) != t.vertex_count()) {
        throw InvalidTarget("target has " + std::to_string(target.size()) + " entries for " +
                            std::to_string(t.vertex_count()) + " vertices");
    }
    double sum = 0.0;
    for (std::size_t v = 0; v < target.size(); ++v) {
        if (!std::isfinite(target[v]) || target[v] >= kTwoPi) {
            throw InvalidTarget("target curvature " + std::to_string(target[v]) + " at vertex " +
                                std::to_string(v) + " is not below 2 pi");
        }
        sum += target[v];
    }
    const double bound = kTwoPi * t.euler_characteristic();
    if (!(sum > bound)) {
        throw InvalidTarget("target curvatures sum to " + std::to_string(sum) +
                            ", which does not exceed 2 pi chi = " + std::to_string(bound));
    }
}

ConformalState initial_state(const PolyhedralMetric& delaunay_base)
{
    return {std::vector<double>(delaunay_base.triangulation().vertex_count(), 0.0),
            theta(delaunay_base), {}};
}

ConformalState advance(const ConformalState& from, const std::vector<double>& u, double eps)
{
    if (u.size() != from.u.size()) {
        throw UsageError("conformal factor has " + std::to_string(u.size()) + " entries for " +
                         std::to_string(from.u.size()) + " vertices");
    }
    std::vector<double> du(u.size());
    bool moved = false;
    for (std::size_t i = 0; i < u.size(); ++i) {
        du[i] = u[i] - from.u[i];
        moved = moved || du[i] != 0.0;
    }
    if (!moved) return from;
    auto repaired = make_decorated_delaunay(scale_vertices(from.lambda, du), eps);
    return {u, std::move(repaired.lambda), concat(from.flips, repaired.flips)};
}

CurvatureMapResult curvature_map(const PolyhedralMetric& base, const std::vector<double>& u, double eps)
{
    if (!is_delaunay(base, eps).delaunay) {
        throw UsageError("the curvature map needs a Delaunay base metric");
    }
    const ConformalState s = advance(initial_state(base), u, eps);
    PolyhedralMetric m = s.metric();
    if (s.flips.empty() && u == std::vector<double>(u.size(), 0.0)) m = base;
    auto k = curvature(m);
    return {std::move(k), std::move(m), s.flips};
}

Eigen::MatrixXd curvature_jacobian(const PolyhedralMetric& m)
{
    const auto& tri = m.triangulation();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(tri.vertex_count(), tri.vertex_count());
    for (int t = 0; t < tri.triangle_count(); ++t) {
        const auto jac = trig::angle_jacobian(m.triangle(t));
        std::array<double, 3> rate{};
        for (int j = 0; j < 3; ++j) rate[j] = 2.0 * std::tanh(0.5 * m.side_length({t, j}));
        for (int k = 0; k < 3; ++k) {
            const int v = tri.corner_vertex(t, k);
            const int opp = static_cast<int>(side_opposite_corner(k));
            for (int j = 0; j < 3; ++j) {
                const double d = jac[opp][j] * rate[j];
                h(v, tri.corner_vertex(t, j)) -= d;
                h(v, tri.corner_vertex(t, (j + 1) % 3)) -= d;
            }
        }
    }
    return h;
}

HessianResult hessian(const ConformalState& state, double eps)
{
    HessianResult result{{}, state, 0};
    const int edges = state.lambda.triangulation().edge_count();
    for (int e = 0; e < edges; ++e) {
        const LambdaMetric& l = result.state.lambda;
        if (l.triangulation().is_folded(e)) continue;
        const double before = decorated_delaunay_excess(l, e);
        if (std::abs(before) >= 10.0 * eps) continue;
        auto flipped = penner_flip(l, e);
        if (decorated_delaunay_excess(flipped.lambda, e) <= before) continue;
        if (min_excess(flipped.lambda) < -eps) continue;
        result.state.lambda = std::move(flipped.lambda);
        result.state.flips.push_back(flipped.move);
        ++result.nudges;
    }
    result.matrix = curvature_jacobian(result.state.metric());
    return result;
}

Eigen::MatrixXd hessian(const PolyhedralMetric& base, const std::vector<double>& u, double eps)
{
    if (!is_delaunay(base, eps).delaunay) {
        throw UsageError("the Hessian needs a Delaunay base metric");
    }
    return hessian(advance(initial_state(base), u, eps), eps).matrix;
}

SolveReport newton_solve(const PolyhedralMetric& base, const std::vector<double>& target,
                         const NewtonConfig& cfg)
{
    Prepared p = prepare(base, target, cfg.initial_u, cfg.eps);
    ConformalState state = std::move(p.state);
    SolveReport report{.metric = p.start};

    std::vector<double> r = residual(report.metric, target);
    report.residual_history.push_back(inf_norm(r));
    report.flips_per_step.push_back(0);
    report.area_history.push_back(total_area(report.metric));
    while (true) {
        if (inf_norm(r) <= cfg.tol) {
            report.converged = true;
            break;
        }
        if (report.iterations >= cfg.max_iter) {
            report.diagnostic = "no convergence after " + std::to_string(cfg.max_iter) + " iterations";
            break;
        }
        const std::size_t flips_before = state.flips.size();
        HessianResult h = hessian(state, cfg.eps);
        state = std::move(h.state);
        Eigen::LLT<Eigen::MatrixXd> llt(h.matrix);
        if (llt.info() != Eigen::Success) {
            report.diagnostic = "Hessian is not positive definite; the metric is near degeneration";
            break;
        }
        const Eigen::VectorXd rv = Eigen::Map<const Eigen::VectorXd>(r.data(), r.size());
        const Eigen::VectorXd dv = -llt.solve(rv);
        std::vector<double> step(dv.data(), dv.data() + dv.size());
        const double size = inf_norm(step);
        if (size > cfg.max_step) {
            for (double& x : step) x *= cfg.max_step / size;
        }

        const double merit = sq_norm(r);
        bool accepted = false;
        for (double scale = 1.0; scale > 1e-12; scale *= 0.5) {
            try {
                ConformalState trial = advance(state, axpy(state.u, scale, step), cfg.eps);
                PolyhedralMetric m = trial.metric();
                std::vector<double> rt = residual(m, target);
                if (sq_norm(rt) <= (1.0 - 1e-4 * scale) * merit) {
                    state = std::move(trial);
                    report.metric = std::move(m);
                    r = std::move(rt);
                    accepted = true;
                    break;
                }
            }
            catch (const Error&) {
                // The trial left the admissible region; shorten the step.
            }
        }
        if (!accepted) {
            report.diagnostic = "line search failed to reduce the residual";
            break;
        }
        ++report.iterations;
        report.residual_history.push_back(inf_norm(r));
        report.flips_per_step.push_back(static_cast<int>(state.flips.size() - flips_before));
        report.area_history.push_back(total_area(report.metric));
    }

    report.u = state.u;
    report.flips = concat(std::move(p.delaunay_flips), state.flips);
    const auto& hist = report.residual_history;
    for (std::size_t k = 0; k + 1 < hist.size(); ++k) {
        if (hist[k] <= 1e-1 && hist[k] >= 1e-7) {
            report.quadratic_constant = std::max(report.quadratic_constant, hist[k + 1] / (hist[k] * hist[k]));
        }
    }
    if (!report.converged) describe_degeneration(report, report.metric, curvature(report.metric));
    return report;
}

namespace {

// Size of the jump of F between the old chart and the flipped chart at the
// first Delaunay wall met on the segment from `from` to u.
double wall_jump(const ConformalState& from, const std::vector<double>& u, double eps)
{
    std::vector<double> du(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) du[i] = u[i] - from.u[i];
    auto crossed = [&](double s) {
        std::vector<double> part(du.size());
        for (std::size_t i = 0; i < du.size(); ++i) part[i] = s * du[i];
        return min_excess(scale_vertices(from.lambda, part)) < -eps;
    };
    if (!crossed(1.0)) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (crossed(mid) ? hi : lo) = mid;
    }
    std::vector<double> part(du.size());
    for (std::size_t i = 0; i < du.size(); ++i) part[i] = hi * du[i];
    const auto old_chart = curvature(theta_inv(scale_vertices(from.lambda, part)));
    const auto new_chart = curvature(advance(from, axpy(from.u, hi, du), eps).metric());
    double jump = 0.0;
    for (std::size_t i = 0; i < old_chart.size(); ++i) {
        jump = std::max(jump, std::abs(old_chart[i] - new_chart[i]));
    }
    return jump;
}

void fit_decay(SolveReport& report, const std::vector<FlowTraceRow>& rows)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : rows) {
        if (row.residual_inf > 0) pts.emplace_back(row.t, std::log(row.residual_inf));
    }
    if (pts.size() < 3) return;
    // Final decade of the residual; at least five samples.
    const double floor = pts.back().second + std::log(10.0);
    std::size_t first = pts.size() - 1;
    while (first > 0 && pts[first - 1].second <= floor) --first;
    first = std::min(first, pts.size() >= 5 ? pts.size() - 5 : std::size_t{0});

    const double n = static_cast<double>(pts.size() - first);
    double mt = 0.0, my = 0.0;
    for (std::size_t i = first; i < pts.size(); ++i) {
        mt += pts[i].first;
        my += pts[i].second;
    }
    mt /= n;
    my /= n;
    double stt = 0.0, sty = 0.0, syy = 0.0;
    for (std::size_t i = first; i < pts.size(); ++i) {
        const double dt = pts[i].first - mt;
        const double dy = pts[i].second - my;
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if (stt <= 0.0) return;
    report.decay_rate = sty / stt;
    report.decay_r2 = syy > 0.0 ? sty * sty / (stt * syy) : 1.0;
}

}  // namespace

FlowResult yamabe_flow(const PolyhedralMetric& base, const std::vector<double>& target,
                       const FlowConfig& cfg)
{
    Prepared p = prepare(base, target, cfg.initial_u, cfg.eps);
    ConformalState state = std::move(p.state);
    FlowResult out{SolveReport{.metric = p.start}, {}};
    SolveReport& report = out.report;
    FlowTrace& trace = out.trace;

    std::vector<double> r = residual(report.metric, target);
    double t = 0.0;
    double dt = cfg.dt0;
    double energy = 0.0;
    trace.rows.push_back({0, 0.0, inf_norm(r), 0, total_area(report.metric)});
    trace.energy.push_back(0.0);
    report.residual_history.push_back(inf_norm(r));
    report.flips_per_step.push_back(0);
    report.area_history.push_back(trace.rows.back().area);

    int step = 0;
    while (true) {
        if (inf_norm(r) <= cfg.tol) {
            report.converged = true;
            break;
        }
        if (t >= cfg.t_max || step >= cfg.max_steps) {
            report.diagnostic = "flow stopped at t = " + std::to_string(t) +
                                " before reaching the tolerance";
            break;
        }
        if (dt < cfg.min_dt) {
            report.diagnostic = "step size underflow at t = " + std::to_string(t) +
                                "; the flow is too stiff to integrate";
            break;
        }
        dt = std::min(dt, cfg.t_max - t);

        // Descent orientation: du/dt = -(K - K*).
        bool ok = false;
        ConformalState half = state, full = state;
        std::vector<double> r_half, r_full, u_single;
        try {
            u_single = axpy(state.u, -dt, r);
            half = advance(state, axpy(state.u, -0.5 * dt, r), cfg.eps);
            r_half = residual(half.metric(), target);
            full = advance(half, axpy(half.u, -0.5 * dt, r_half), cfg.eps);
            PolyhedralMetric fm = full.metric();
            r_full = residual(fm, target);
            ok = true;
        }
        catch (const Error&) {
        }
        if (!ok) {
            dt *= 0.5;
            continue;
        }

        std::vector<double> diff(u_single.size()), moved(u_single.size());
        for (std::size_t i = 0; i < diff.size(); ++i) {
            diff[i] = full.u[i] - u_single[i];
            moved[i] = full.u[i] - state.u[i];
        }
        const double err = inf_norm(diff) / std::max(inf_norm(moved), 1e-300);
        if (err > cfg.rtol) {
            dt *= 0.5;
            continue;
        }

        std::vector<double> d1(r.size()), d2(r.size()), m1(r.size()), m2(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            d1[i] = half.u[i] - state.u[i];
            d2[i] = full.u[i] - half.u[i];
            m1[i] = 0.5 * (r[i] + r_half[i]);
            m2[i] = 0.5 * (r_half[i] + r_full[i]);
        }
        const double d_energy = dot(m1, d1) + dot(m2, d2);
        if (d_energy > 0.0) {
            dt *= 0.5;
            continue;
        }

        ++step;
        const int flips = static_cast<int>(full.flips.size() - state.flips.size());
        if (flips > 0) {
            const bool first_half = half.flips.size() > state.flips.size();
            const double jump = first_half ? wall_jump(state, half.u, cfg.eps)
                                           : wall_jump(half, full.u, cfg.eps);
            trace.surgeries.push_back({step, t + dt, flips, jump});
        }
        state = std::move(full);
        r = std::move(r_full);
        t += dt;
        energy += d_energy;
        report.metric = state.metric();
        trace.rows.push_back({step, t, inf_norm(r), flips, total_area(report.metric)});
        trace.energy.push_back(energy);
        report.residual_history.push_back(inf_norm(r));
        report.flips_per_step.push_back(flips);
        report.area_history.push_back(trace.rows.back().area);

        const double grow = err > 0.0 ? 0.9 * std::sqrt(cfg.rtol / err) : 1.5;
        dt *= std::clamp(grow, 0.5, 1.5);
    }

    for (std::size_t i = 1; i < trace.energy.size(); ++i) {
        if (trace.energy[i] > trace.energy[i - 1]) trace.energy_monotone = false;
    }
    report.iterations = step;
    report.u = state.u;
    report.flips = concat(std::move(p.delaunay_flips), state.flips);
    fit_decay(report, trace.rows);
    if (!report.converged) describe_degeneration(report, report.metric, curvature(report.metric));
    return out;
}

SolveReport uniformize(const PolyhedralMetric& base, const NewtonConfig& cfg)
{
    if (base.triangulation().euler_characteristic() >= 0) {
        throw InvalidTarget("uniformization needs negative Euler characteristic, got chi = " +
                            std::to_string(base.triangulation().euler_characteristic()));
    }
    return newton_solve(base, std::vector<double>(base.triangulation().vertex_count(), 0.0), cfg);
}

}  // namespace hypconf
