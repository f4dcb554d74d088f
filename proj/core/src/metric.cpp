#include "hypconf/metric.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hypconf/errors.hpp"

namespace hypconf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int next3(int i, int k = 1) { return (i + k) % 3; }

}  // namespace

PolyhedralMetric::PolyhedralMetric(Triangulation triangulation, std::vector<double> lengths)
    : triangulation_(std::move(triangulation)), lengths_(std::move(lengths))
{
    if (static_cast<int>(lengths_.size()) != triangulation_.edge_count()) {
        throw ValidationError("expected " + std::to_string(triangulation_.edge_count()) +
                              " edge lengths, got " + std::to_string(lengths_.size()));
    }
    for (std::size_t e = 0; e < lengths_.size(); ++e) {
        if (!(lengths_[e] > 0.0) || !std::isfinite(lengths_[e])) {
            throw ValidationError("edge " + std::to_string(e) + " has non-positive length " +
                                  std::to_string(lengths_[e]));
        }
    }
}

trig::TriangleLengths PolyhedralMetric::triangle(int t) const
{
    return {side_length({t, 0}), side_length({t, 1}), side_length({t, 2})};
}

bool PolyhedralMetric::is_triangulable() const
{
    for (int t = 0; t < triangulation_.triangle_count(); ++t) {
        if (!triangle(t).satisfies_triangle_inequality()) return false;
    }
    return true;
}

void PolyhedralMetric::validate() const
{
    for (int t = 0; t < triangulation_.triangle_count(); ++t) {
        const auto tl = triangle(t);
        if (!tl.satisfies_triangle_inequality()) {
            throw DegenerateTriangle("triangle " + std::to_string(t) + " with sides (" +
                                         std::to_string(tl.a) + ", " + std::to_string(tl.b) +
                                         ", " + std::to_string(tl.c) +
                                         ") violates the triangle inequality",
                                     t);
        }
    }
}

std::vector<std::array<double, 3>> corner_angles(const PolyhedralMetric& m)
{
    const int n = m.triangulation().triangle_count();
    std::vector<std::array<double, 3>> out(n);
    for (int t = 0; t < n; ++t) {
        try {
            const auto a = trig::angles(m.triangle(t));
            for (int k = 0; k < 3; ++k) out[t][k] = a[static_cast<int>(side_opposite_corner(k))];
        }
        catch (const DegenerateTriangle& err) {
            throw DegenerateTriangle("triangle " + std::to_string(t) + ": " + err.what(), t);
        }
    }
    return out;
}

std::vector<double> curvature(const PolyhedralMetric& m)
{
    const auto& tri = m.triangulation();
    std::vector<double> k(tri.vertex_count(), kTwoPi);
    const auto theta = corner_angles(m);
    for (int t = 0; t < tri.triangle_count(); ++t) {
        for (int c = 0; c < 3; ++c) k[tri.corner_vertex(t, c)] -= theta[t][c];
    }
    return k;
}

double total_area(const PolyhedralMetric& m)
{
    double area = 0.0;
    for (int t = 0; t < m.triangulation().triangle_count(); ++t) {
        try {
            area += trig::triangle_area(m.triangle(t));
        }
        catch (const DegenerateTriangle& err) {
            throw DegenerateTriangle("triangle " + std::to_string(t) + ": " + err.what(), t);
        }
    }
    return area;
}

double gauss_bonnet_residual(const PolyhedralMetric& m)
{
    double sum = 0.0;
    for (double k : curvature(m)) sum += k;
    return std::abs(sum - kTwoPi * m.triangulation().euler_characteristic() - total_area(m));
}

double edge_delaunay_excess(const PolyhedralMetric& m, int e)
{
    const auto& tri = m.triangulation();
    const auto [s0, s1] = tri.edge_sides(e);
    return trig::delaunay_excess(m.length(e), m.side_length({s0.triangle, next3(s0.side)}),
                                 m.side_length({s0.triangle, next3(s0.side, 2)}),
                                 m.side_length({s1.triangle, next3(s1.side)}),
                                 m.side_length({s1.triangle, next3(s1.side, 2)}));
}

std::vector<double> delaunay_excesses(const PolyhedralMetric& m)
{
    std::vector<double> out(m.triangulation().edge_count());
    for (int e = 0; e < static_cast<int>(out.size()); ++e) out[e] = edge_delaunay_excess(m, e);
    return out;
}

DelaunayCheck is_delaunay(const PolyhedralMetric& m, double eps)
{
    DelaunayCheck check;
    for (int e = 0; e < m.triangulation().edge_count(); ++e) {
        if (edge_delaunay_excess(m, e) < -eps) check.violations.push_back(e);
    }
    check.delaunay = check.violations.empty();
    for (int t = 0; t < m.triangulation().triangle_count(); ++t) {
        if (trig::circumcircle_classify(m.triangle(t)).kind != trig::CircumcircleClass::Kind::Compact) {
            check.non_compact.push_back(t);
        }
    }
    return check;
}

FlippedMetric flip_metric(const PolyhedralMetric& m, int e)
{
    const auto& tri = m.triangulation();
    if (tri.is_folded(e)) {
        throw UnflippableEdge("edge " + std::to_string(e) + " has both sides in one triangle", e);
    }
    const auto [s0, s1] = tri.edge_sides(e);
    const auto b = tri.quad_boundary(e);
    const trig::QuadLengths q{m.side_length(b[1]), m.side_length(b[0]), m.side_length(b[3]),
                              m.side_length(b[2]), m.length(e)};

    // Corner angles at the diagonal's ends, p (corner i0 of t0) and q.
    const auto a0 = trig::angles(m.triangle(s0.triangle));
    const auto a1 = trig::angles(m.triangle(s1.triangle));
    auto at = [](const std::array<double, 3>& a, int corner) {
        return a[static_cast<int>(side_opposite_corner(corner))];
    };
    const double at_p = at(a0, s0.side) + at(a1, next3(s1.side));
    const double at_q = at(a0, next3(s0.side)) + at(a1, s1.side);
    if (at_p >= std::numbers::pi || at_q >= std::numbers::pi) {
        throw FoldingQuad("quad around edge " + std::to_string(e) +
                              " is not convex; its other diagonal leaves the quad",
                          e);
    }

    double diagonal;
    try {
        diagonal = trig::flip_diagonal(q);
    }
    catch (const FoldingQuad& err) {
        throw FoldingQuad("edge " + std::to_string(e) + ": " + err.what(), e);
    }
    Triangulation flipped = tri;
    const FlipMove move = flipped.flip(e);
    std::vector<double> lengths = m.lengths();
    lengths[e] = diagonal;
    return {PolyhedralMetric(std::move(flipped), std::move(lengths)), move};
}

DelaunayResult make_delaunay(const PolyhedralMetric& m, double eps)
{
    DelaunayResult result{m, {}};
    const int edges = m.triangulation().edge_count();
    const int cap = 50 * edges;
    std::vector<double> excess = delaunay_excesses(m);
    while (true) {
        int worst = -1;
        for (int e = 0; e < edges; ++e) {
            if (excess[e] < -eps && !result.metric.triangulation().is_folded(e) &&
                (worst < 0 || excess[e] < excess[worst])) {
                worst = e;
            }
        }
        if (worst < 0) return result;
        if (static_cast<int>(result.flips.size()) >= cap) {
            throw FlipLimitExceeded("no Delaunay triangulation reached after " +
                                        std::to_string(cap) + " flips; edge " +
                                        std::to_string(worst) + " still has excess " +
                                        std::to_string(excess[worst]),
                                    worst, excess[worst]);
        }
        auto flipped = flip_metric(result.metric, worst);
        result.metric = std::move(flipped.metric);
        result.flips.push_back(flipped.move);
        const auto& tri = result.metric.triangulation();
        excess[worst] = edge_delaunay_excess(result.metric, worst);
        for (SideRef s : tri.quad_boundary(worst)) {
            const int f = tri.side_edge(s);
            excess[f] = edge_delaunay_excess(result.metric, f);
        }
    }
}

PolyhedralMetric conformal_apply(const PolyhedralMetric& m, const std::vector<double>& u)
{
    const auto& tri = m.triangulation();
    if (static_cast<int>(u.size()) != tri.vertex_count()) {
        throw UsageError("conformal factor has " + std::to_string(u.size()) + " entries for " +
                         std::to_string(tri.vertex_count()) + " vertices");
    }
    std::vector<double> lengths(m.lengths().size());
    for (int e = 0; e < tri.edge_count(); ++e) {
        const auto [v0, v1] = tri.edge_vertices(e);
        const double shift = u[v0] + u[v1];
        lengths[e] = shift == 0.0 ? m.length(e)
                                  : trig::length_from_log_half_sinh(
                                        trig::log_half_sinh(m.length(e)) + shift);
    }
    return {tri, std::move(lengths)};
}

}  // namespace hypconf
