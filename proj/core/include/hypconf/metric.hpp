#pragma once

// Hyperbolic polyhedral metrics: a triangulation with one length per edge.

#include <array>
#include <vector>

#include "hypconf/hyptrig.hpp"
#include "hypconf/surface.hpp"

namespace hypconf {

inline constexpr double kDelaunayEpsilon = 1e-10;

class PolyhedralMetric {
public:
    // Lengths must be positive and finite; triangle inequalities are not
    // enforced here (see validate()).
    PolyhedralMetric(Triangulation triangulation, std::vector<double> lengths);

    const Triangulation& triangulation() const { return triangulation_; }
    const std::vector<double>& lengths() const { return lengths_; }
    double length(int e) const { return lengths_.at(e); }
    double side_length(SideRef s) const { return lengths_[triangulation_.side_edge(s)]; }

    // Side lengths of triangle t in side order: a = side 0, b = side 1, c = side 2.
    trig::TriangleLengths triangle(int t) const;
    // Every triangle satisfies the strict triangle inequality.
    bool is_triangulable() const;
    // Throws DegenerateTriangle naming the first bad triangle.
    void validate() const;

private:
    Triangulation triangulation_;
    std::vector<double> lengths_;
};

// Angle at corner k of triangle t sits opposite side (k + 1) % 3.
inline trig::Side side_opposite_corner(int k) { return static_cast<trig::Side>((k + 1) % 3); }

std::vector<std::array<double, 3>> corner_angles(const PolyhedralMetric& m);
std::vector<double> curvature(const PolyhedralMetric& m);
double total_area(const PolyhedralMetric& m);
// |sum K - 2 pi chi - area|.
double gauss_bonnet_residual(const PolyhedralMetric& m);

double edge_delaunay_excess(const PolyhedralMetric& m, int e);
std::vector<double> delaunay_excesses(const PolyhedralMetric& m);

struct DelaunayCheck {
    bool delaunay = false;
    // Edges with excess below -eps.
    std::vector<int> violations;
    // Triangles whose circumcircle is not compact; empty on a healthy
    // Delaunay metric.
    std::vector<int> non_compact;
};

DelaunayCheck is_delaunay(const PolyhedralMetric& m, double eps = kDelaunayEpsilon);

struct FlippedMetric {
    PolyhedralMetric metric;
    FlipMove move;
};

// Geometric diagonal switch; the result is isometric to m. Throws
// UnflippableEdge or FoldingQuad.
FlippedMetric flip_metric(const PolyhedralMetric& m, int e);

struct DelaunayResult {
    PolyhedralMetric metric;
    std::vector<FlipMove> flips;
};

// Greedy flips on the most negative excess until every edge has excess
// >= -eps. Throws FlipLimitExceeded after 50 |E| flips.
DelaunayResult make_delaunay(const PolyhedralMetric& m, double eps = kDelaunayEpsilon);

// s(x'(e)) = exp(u(v) + u(v')) s(x(e)) at every edge. The result may fail the
// triangle inequality; check is_triangulable() before measuring it.
PolyhedralMetric conformal_apply(const PolyhedralMetric& m, const std::vector<double>& u);

}  // namespace hypconf
