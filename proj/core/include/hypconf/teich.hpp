#pragma once

// Decorated hyperbolic structures in Penner coordinates: one positive
// lambda-length per edge, stored as its logarithm.

#include <vector>

#include "hypconf/metric.hpp"
#include "hypconf/surface.hpp"

namespace hypconf {

inline constexpr double kShearTolerance = 1e-8;

class LambdaMetric {
public:
    LambdaMetric(Triangulation triangulation, std::vector<double> log_lambda);
    static LambdaMetric from_lambda(Triangulation triangulation, const std::vector<double>& lambda);

    const Triangulation& triangulation() const { return triangulation_; }
    const std::vector<double>& log_lambda() const { return log_lambda_; }
    double log_lambda(int e) const { return log_lambda_.at(e); }
    double lambda(int e) const;
    double side_log_lambda(SideRef s) const { return log_lambda_[triangulation_.side_edge(s)]; }

private:
    Triangulation triangulation_;
    std::vector<double> log_lambda_;
};

// lambda(e) = sinh(x(e) / 2), and back.
LambdaMetric theta(const PolyhedralMetric& m);
PolyhedralMetric theta_inv(const LambdaMetric& l);

// lambda(e) times exp(u(v) + u(v')) on every edge.
LambdaMetric scale_vertices(const LambdaMetric& l, const std::vector<double>& u);

struct FlippedLambda {
    LambdaMetric lambda;
    FlipMove move;
};

// Ptolemy switch lambda(e') = (lambda(a) lambda(c) + lambda(b) lambda(d)) / lambda(e).
// Defined for every flippable edge.
FlippedLambda penner_flip(const LambdaMetric& l, int e, bool clockwise = false);
// Replays a recorded move with the Ptolemy rule.
LambdaMetric apply_flip_move(const LambdaMetric& l, const FlipMove& move);

double decorated_delaunay_excess(const LambdaMetric& l, int e);

struct DecoratedDelaunayResult {
    LambdaMetric lambda;
    std::vector<FlipMove> flips;
};

DecoratedDelaunayResult make_decorated_delaunay(const LambdaMetric& l,
                                                double eps = kDelaunayEpsilon);

// z(e) = y(e1) y(e3) / (y(e2) y(e4)) with e1..e4 the quad boundary taken
// counter-clockwise from the side after e in e's first triangle.
std::vector<double> shear(const LambdaMetric& l);
std::vector<double> log_shear(const LambdaMetric& l);

// Throws UsageError unless both live on the same triangulation.
bool same_hyperbolic_structure(const LambdaMetric& a, const LambdaMetric& b,
                               double tol = kShearTolerance);
double shear_distance(const LambdaMetric& a, const LambdaMetric& b);

// Moves `l` onto `target` by undoing its own recorded flips and replaying
// those of `target`, both with Ptolemy switches. Throws UnsupportedInput when
// the two have different roots.
LambdaMetric transport(const LambdaMetric& l, const Triangulation& target);

// Discrete conformal change with surgery: scale the decorations of a
// Delaunay metric by u, then restore the Delaunay condition by Ptolemy flips.
struct ConformalImage {
    PolyhedralMetric metric;
    LambdaMetric lambda;
    std::vector<FlipMove> flips;
};

ConformalImage conformal_change(const LambdaMetric& delaunay, const std::vector<double>& u,
                                double eps = kDelaunayEpsilon);
ConformalImage conformal_change(const PolyhedralMetric& delaunay, const std::vector<double>& u,
                                double eps = kDelaunayEpsilon);

struct ConformalDecision {
    bool conformal = false;
    // max |log z1(e) - log z2(e)| on the common triangulation.
    double residual = 0.0;
    std::vector<FlipMove> flips_first;
    std::vector<FlipMove> flips_second;
    // On a yes: the conformal factor taking the first Delaunay metric's
    // decoration to the second's, and the worst edge misfit of that fit.
    std::vector<double> factor;
    double factor_residual = 0.0;
};

ConformalDecision decide_discrete_conformal(const PolyhedralMetric& m1, const PolyhedralMetric& m2,
                                            double tol = kShearTolerance,
                                            double eps = kDelaunayEpsilon);

}  // namespace hypconf
