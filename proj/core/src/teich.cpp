#include "hypconf/teich.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "hypconf/errors.hpp"
#include "hypconf/hyptrig.hpp"

namespace hypconf {

namespace {

double log_add_exp(double p, double q)
{
    const double hi = std::max(p, q);
    return hi + std::log1p(std::exp(std::min(p, q) - hi));
}

}  // namespace

LambdaMetric::LambdaMetric(Triangulation triangulation, std::vector<double> log_lambda)
    : triangulation_(std::move(triangulation)), log_lambda_(std::move(log_lambda))
{
    if (static_cast<int>(log_lambda_.size()) != triangulation_.edge_count()) {
        throw ValidationError("expected " + std::to_string(triangulation_.edge_count()) +
                              " lambda-lengths, got " + std::to_string(log_lambda_.size()));
    }
    for (std::size_t e = 0; e < log_lambda_.size(); ++e) {
        if (!std::isfinite(log_lambda_[e])) {
            throw ValidationError("edge " + std::to_string(e) + " has a non-finite lambda-length");
        }
    }
}

LambdaMetric LambdaMetric::from_lambda(Triangulation triangulation, const std::vector<double>& lambda)
{
    std::vector<double> logs(lambda.size());
    for (std::size_t e = 0; e < lambda.size(); ++e) {
        if (!(lambda[e] > 0.0)) {
            throw ValidationError("edge " + std::to_string(e) + " has non-positive lambda-length");
        }
        logs[e] = std::log(lambda[e]);
    }
    return {std::move(triangulation), std::move(logs)};
}

double LambdaMetric::lambda(int e) const { return std::exp(log_lambda(e)); }

LambdaMetric theta(const PolyhedralMetric& m)
{
    std::vector<double> logs(m.lengths().size());
    for (std::size_t e = 0; e < logs.size(); ++e) logs[e] = trig::log_half_sinh(m.lengths()[e]);
    return {m.triangulation(), std::move(logs)};
}

PolyhedralMetric theta_inv(const LambdaMetric& l)
{
    std::vector<double> lengths(l.log_lambda().size());
    for (std::size_t e = 0; e < lengths.size(); ++e) {
        lengths[e] = trig::length_from_log_half_sinh(l.log_lambda()[e]);
    }
    return {l.triangulation(), std::move(lengths)};
}

LambdaMetric scale_vertices(const LambdaMetric& l, const std::vector<double>& u)
{
    const auto& tri = l.triangulation();
    if (static_cast<int>(u.size()) != tri.vertex_count()) {
        throw UsageError("conformal factor has " + std::to_string(u.size()) + " entries for " +
                         std::to_string(tri.vertex_count()) + " vertices");
    }
    std::vector<double> logs = l.log_lambda();
    for (int e = 0; e < tri.edge_count(); ++e) {
        const auto [v0, v1] = tri.edge_vertices(e);
        logs[e] += u[v0] + u[v1];
    }
    return {tri, std::move(logs)};
}

FlippedLambda penner_flip(const LambdaMetric& l, int e, bool clockwise)
{
    const auto& tri = l.triangulation();
    if (tri.is_folded(e)) {
        throw UnflippableEdge("edge " + std::to_string(e) + " has both sides in one triangle", e);
    }
    const auto b = tri.quad_boundary(e);
    const double fresh = log_add_exp(l.side_log_lambda(b[0]) + l.side_log_lambda(b[2]),
                                     l.side_log_lambda(b[1]) + l.side_log_lambda(b[3])) -
                         l.log_lambda(e);
    Triangulation flipped = tri;
    const FlipMove move = flipped.flip(e, clockwise);
    std::vector<double> logs = l.log_lambda();
    logs[e] = fresh;
    return {LambdaMetric(std::move(flipped), std::move(logs)), move};
}

LambdaMetric apply_flip_move(const LambdaMetric& l, const FlipMove& move)
{
    if (move.edge < 0 || move.edge >= l.triangulation().edge_count() ||
        l.triangulation().quad_boundary(move.edge) != move.boundary) {
        throw UsageError("flip move on edge " + std::to_string(move.edge) +
                         " does not match the current quad");
    }
    return penner_flip(l, move.edge, move.clockwise).lambda;
}

double decorated_delaunay_excess(const LambdaMetric& l, int e)
{
    const auto b = l.triangulation().quad_boundary(e);
    const double l0 = l.log_lambda(e);
    return trig::delaunay_term_log(l.side_log_lambda(b[0]), l.side_log_lambda(b[1]), l0) +
           trig::delaunay_term_log(l.side_log_lambda(b[2]), l.side_log_lambda(b[3]), l0);
}

DecoratedDelaunayResult make_decorated_delaunay(const LambdaMetric& l, double eps)
{
    DecoratedDelaunayResult result{l, {}};
    const int edges = l.triangulation().edge_count();
    const int cap = 50 * edges;
    std::vector<double> excess(edges);
    for (int e = 0; e < edges; ++e) excess[e] = decorated_delaunay_excess(l, e);
    while (true) {
        int worst = -1;
        for (int e = 0; e < edges; ++e) {
            if (excess[e] < -eps && !result.lambda.triangulation().is_folded(e) &&
                (worst < 0 || excess[e] < excess[worst])) {
                worst = e;
            }
        }
        if (worst < 0) return result;
        if (static_cast<int>(result.flips.size()) >= cap) {
            throw FlipLimitExceeded("no decorated Delaunay triangulation reached after " +
                                        std::to_string(cap) + " flips; edge " +
                                        std::to_string(worst) + " still has excess " +
                                        std::to_string(excess[worst]),
                                    worst, excess[worst]);
        }
        auto flipped = penner_flip(result.lambda, worst);
        result.lambda = std::move(flipped.lambda);
        result.flips.push_back(flipped.move);
        const auto& tri = result.lambda.triangulation();
        excess[worst] = decorated_delaunay_excess(result.lambda, worst);
        for (SideRef s : tri.quad_boundary(worst)) {
            const int f = tri.side_edge(s);
            excess[f] = decorated_delaunay_excess(result.lambda, f);
        }
    }
}

std::vector<double> log_shear(const LambdaMetric& l)
{
    const auto& tri = l.triangulation();
    std::vector<double> z(tri.edge_count());
    for (int e = 0; e < tri.edge_count(); ++e) {
        const auto b = tri.quad_boundary(e);
        z[e] = l.side_log_lambda(b[0]) + l.side_log_lambda(b[2]) - l.side_log_lambda(b[1]) -
               l.side_log_lambda(b[3]);
    }
    return z;
}

std::vector<double> shear(const LambdaMetric& l)
{
    auto z = log_shear(l);
    for (double& v : z) v = std::exp(v);
    return z;
}

double shear_distance(const LambdaMetric& a, const LambdaMetric& b)
{
    if (!(a.triangulation() == b.triangulation())) {
        throw UsageError("shear coordinates compared on different triangulations");
    }
    const auto za = log_shear(a);
    const auto zb = log_shear(b);
    double worst = 0.0;
    for (std::size_t e = 0; e < za.size(); ++e) worst = std::max(worst, std::abs(za[e] - zb[e]));
    return worst;
}

bool same_hyperbolic_structure(const LambdaMetric& a, const LambdaMetric& b, double tol)
{
    return shear_distance(a, b) <= tol;
}

LambdaMetric transport(const LambdaMetric& l, const Triangulation& target)
{
    if (!(l.triangulation().root() == target.root())) {
        throw UnsupportedInput("the two triangulations share no recorded flip ancestry");
    }
    LambdaMetric out = l;
    const auto& own = l.triangulation().lineage().flips;
    const auto& theirs = target.lineage().flips;
    // Only the parts of the two logs after their common prefix need moving.
    const auto shared = static_cast<std::size_t>(
        std::mismatch(own.begin(), own.end(), theirs.begin(), theirs.end()).first - own.begin());
    for (std::size_t k = own.size(); k-- > shared;) {
        out = penner_flip(out, own[k].edge, !own[k].clockwise).lambda;
    }
    for (std::size_t k = shared; k < theirs.size(); ++k) out = apply_flip_move(out, theirs[k]);
    if (!(out.triangulation() == target)) {
        throw UnsupportedInput("replaying the recorded flips does not reproduce the triangulation");
    }
    return {target, out.log_lambda()};
}

ConformalImage conformal_change(const LambdaMetric& delaunay, const std::vector<double>& u, double eps)
{
    auto repaired = make_decorated_delaunay(scale_vertices(delaunay, u), eps);
    PolyhedralMetric metric = theta_inv(repaired.lambda);
    return {std::move(metric), std::move(repaired.lambda), std::move(repaired.flips)};
}

ConformalImage conformal_change(const PolyhedralMetric& delaunay, const std::vector<double>& u,
                                double eps)
{
    return conformal_change(theta(delaunay), u, eps);
}

ConformalDecision decide_discrete_conformal(const PolyhedralMetric& m1, const PolyhedralMetric& m2,
                                            double tol, double eps)
{
    if (!(m1.triangulation().root() == m2.triangulation().root())) {
        throw UnsupportedInput("the two metrics share no recorded flip ancestry");
    }
    auto d1 = make_delaunay(m1, eps);
    auto d2 = make_delaunay(m2, eps);
    const LambdaMetric l1 = theta(d1.metric);
    const LambdaMetric l2 = transport(theta(d2.metric), d1.metric.triangulation());

    ConformalDecision decision;
    decision.residual = shear_distance(l1, l2);
    decision.conformal = decision.residual <= tol;
    decision.flips_first = std::move(d1.flips);
    decision.flips_second = std::move(d2.flips);
    if (!decision.conformal) return decision;

    // log lambda2(e) - log lambda1(e) = u(v) + u(v') in the least-squares sense.
    const auto& tri = l1.triangulation();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(tri.edge_count(), tri.vertex_count());
    Eigen::VectorXd rhs(tri.edge_count());
    for (int e = 0; e < tri.edge_count(); ++e) {
        const auto [v0, v1] = tri.edge_vertices(e);
        a(e, v0) += 1.0;
        a(e, v1) += 1.0;
        rhs(e) = l2.log_lambda(e) - l1.log_lambda(e);
    }
    const Eigen::VectorXd u = a.colPivHouseholderQr().solve(rhs);
    decision.factor.assign(u.data(), u.data() + u.size());
    decision.factor_residual = (a * u - rhs).cwiseAbs().maxCoeff();
    return decision;
}

}  // namespace hypconf
