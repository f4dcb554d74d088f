#pragma once

// Scalar hyperbolic trigonometry. Everything here is a pure function of a few
// lengths or angles; no mesh knowledge. Throughout, s(t) = sinh(t / 2).

#include <array>
#include <utility>

namespace hypconf::trig {

// Side lengths of a hyperbolic triangle.
struct TriangleLengths {
    double a;
    double b;
    double c;

    bool satisfies_triangle_inequality() const;
    // Strict triangle inequality for s(a), s(b), s(c).
    bool satisfies_half_sinh_inequality() const;
};

enum class Side { A = 0, B = 1, C = 2 };

// Two triangles (x, y, diagonal) and (z, w, diagonal) glued along the
// diagonal. x, y, z, w are the boundary sides in cyclic order, so x and y meet
// at one apex and z and w at the other; y and z share one end of the
// diagonal, w and x the other.
struct QuadLengths {
    double x;
    double y;
    double z;
    double w;
    double diagonal;
};

// Circumcircle of a hyperbolic triangle: a compact circle, a horocycle, or a
// hypercycle at distance `distance` from its geodesic axis.
struct CircumcircleClass {
    enum class Kind { Compact, Horocycle, Equidistant };
    Kind kind;
    double radius = 0.0;    // Compact only
    double distance = 0.0;  // Equidistant only
};

inline constexpr double kClassificationTolerance = 1e-10;
inline constexpr double kCosineClampTolerance = 1e-12;
// Above this length sinh overflows double; ratio formulas switch to logs.
inline constexpr double kLogSpaceThreshold = 700.0;

double half_sinh(double x);
double inv_half_sinh(double s);
// log s(x), accurate for every x > 0 including x far beyond kLogSpaceThreshold.
double log_half_sinh(double x);
// Inverse of log_half_sinh: the length whose s-value is exp(log_s).
double length_from_log_half_sinh(double log_s);
double log_sinh(double x);

double angle_from_lengths(const TriangleLengths& t, Side opposite);
std::array<double, 3> angles(const TriangleLengths& t);
double triangle_area(const TriangleLengths& t);

// (s1^2 + s2^2 - s0^2) / (s1 s2): one half of the Delaunay condition for the
// edge of length x0 seen from the triangle with other sides x1, x2.
double delaunay_term(double x1, double x2, double x0);
// Same quantity from log s-values; never overflows.
double delaunay_term_log(double log_s1, double log_s2, double log_s0);
// Sum of the two delaunay_terms of a shared edge; >= 0 iff the edge is
// Delaunay, 0 iff the quad is cyclic.
double delaunay_excess(double x0, double x1, double x2, double x3, double x4);
double delaunay_excess(const QuadLengths& q);

// Angle-sum form of the same test: opposite angles alpha, alpha' against the
// four angles adjacent to the edge.
double leibon_excess(double alpha, double alpha_p, double beta, double beta_p,
                     double gamma, double gamma_p);

CircumcircleClass circumcircle_classify(const TriangleLengths& t);
// zeta in sinh(a) / sin(alpha) = 2 zeta cosh(a/2) cosh(b/2) cosh(c/2).
double sine_rule_zeta(const TriangleLengths& t);

// Diagonals (e, f) of the cyclic quad with sides a, b, c, d in cyclic order,
// where a, b, e bound one triangle.
std::pair<double, double> cyclic_diagonals(double a, double b, double c, double d);

// Ptolemy diagonal: s(f) = (s(a) s(c) + s(b) s(d)) / s(e).
double ptolemy_flip_length(double a, double b, double c, double d, double e);
double ptolemy_flip_log(double log_a, double log_b, double log_c, double log_d,
                        double log_e);

// Length of the other diagonal of an arbitrary (not necessarily cyclic)
// quad, from two cosine laws and angle addition at the end shared by y and z.
double flip_diagonal(const QuadLengths& q);

// Partial derivative of the angle opposite `opposite` with respect to the
// length of that same side.
double angle_derivative_opposite(const TriangleLengths& t, Side opposite);
// Partial derivative of the angle opposite `opposite` with respect to the
// length of another side `adjacent` (adjacent != opposite).
double angle_derivative_adjacent(const TriangleLengths& t, Side opposite, Side adjacent);
// jacobian[i][j] = d angle_i / d length_j, both indexed by Side.
std::array<std::array<double, 3>, 3> angle_jacobian(const TriangleLengths& t);

}  // namespace hypconf::trig
