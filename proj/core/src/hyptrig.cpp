#include "hypconf/hyptrig.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hypconf/errors.hpp"

namespace hypconf::trig {

namespace {

constexpr double kPi = std::numbers::pi;

double log_cosh(double x)
{
    x = std::abs(x);
    return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2;
}

double log_add_exp(double p, double q)
{
    const double hi = std::max(p, q);
    const double lo = std::min(p, q);
    return hi + std::log1p(std::exp(lo - hi));
}

// asinh(exp(l)) without forming exp(l) when it would overflow.
double asinh_exp(double l)
{
    if (l < 20.0) return std::asinh(std::exp(l));
    return l + std::log(1.0 + std::sqrt(1.0 + std::exp(-2.0 * l)));
}

// acosh(exp(l)), l >= 0.
double acosh_exp(double l)
{
    if (l <= 0.0) return 0.0;
    if (l < 20.0) return std::acosh(std::exp(l));
    return l + std::log(1.0 + std::sqrt(1.0 - std::exp(-2.0 * l)));
}

double side_length(const TriangleLengths& t, int i)
{
    return i == 0 ? t.a : (i == 1 ? t.b : t.c);
}

// s-values of the three sides scaled by their maximum, with the log of the
// maximum. Homogeneous formulas of degree k pick up k * log_max.
struct ScaledHalfSinh {
    std::array<double, 3> s;
    double log_max;
};

ScaledHalfSinh scaled_half_sinh(const TriangleLengths& t)
{
    const std::array<double, 3> ls{log_half_sinh(t.a), log_half_sinh(t.b), log_half_sinh(t.c)};
    const double lm = std::max({ls[0], ls[1], ls[2]});
    return {{std::exp(ls[0] - lm), std::exp(ls[1] - lm), std::exp(ls[2] - lm)}, lm};
}

void require_positive(double x, const char* name)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(name) + " requires a positive finite argument, got " +
                          std::to_string(x));
    }
}

}  // namespace

bool TriangleLengths::satisfies_triangle_inequality() const
{
    return a > 0 && b > 0 && c > 0 && a + b > c && b + c > a && c + a > b;
}

bool TriangleLengths::satisfies_half_sinh_inequality() const
{
    if (!(a > 0 && b > 0 && c > 0)) return false;
    const auto [s, lm] = scaled_half_sinh(*this);
    return s[0] + s[1] > s[2] && s[1] + s[2] > s[0] && s[2] + s[0] > s[1];
}

double half_sinh(double x)
{
    require_positive(x, "half_sinh");
    return std::sinh(0.5 * x);
}

double inv_half_sinh(double s)
{
    require_positive(s, "inv_half_sinh");
    return 2.0 * std::asinh(s);
}

double log_sinh(double x)
{
    require_positive(x, "log_sinh");
    if (x < 20.0) return std::log(std::sinh(x));
    return x - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * x));
}

double log_half_sinh(double x)
{
    require_positive(x, "log_half_sinh");
    return log_sinh(0.5 * x);
}

double length_from_log_half_sinh(double log_s)
{
    return 2.0 * asinh_exp(log_s);
}

double angle_from_lengths(const TriangleLengths& t, Side opposite)
{
    const int i = static_cast<int>(opposite);
    const double a = side_length(t, i);
    const double b = side_length(t, (i + 1) % 3);
    const double c = side_length(t, (i + 2) % 3);
    if (!(a > 0 && b > 0 && c > 0)) {
        throw DegenerateTriangle("triangle side lengths must be positive");
    }
    const double pa = 0.5 * (b + c - a);
    const double pb = 0.5 * (c + a - b);
    const double pc = 0.5 * (a + b - c);
    if (pa > 0 && pb > 0 && pc > 0) {
        // Half-angle form; well conditioned for tiny and huge triangles alike.
        const double p = 0.5 * (a + b + c);
        const double log_tan2 = log_sinh(pb) + log_sinh(pc) - log_sinh(p) - log_sinh(pa);
        return 2.0 * std::atan(std::exp(0.5 * log_tan2));
    }
    // Triangle inequality fails; the cosine law tells roundoff from genuine
    // degeneracy. cos = (1 - cosh a / (cosh b cosh c)) / (tanh b tanh c).
    const double ratio = std::exp(log_cosh(a) - log_cosh(b) - log_cosh(c));
    const double cosine = (1.0 - ratio) / (std::tanh(b) * std::tanh(c));
    if (cosine > 1.0 + kCosineClampTolerance || cosine < -1.0 - kCosineClampTolerance) {
        throw DegenerateTriangle("degenerate triangle (" + std::to_string(t.a) + ", " +
                                 std::to_string(t.b) + ", " + std::to_string(t.c) + ")");
    }
    return std::acos(std::clamp(cosine, -1.0, 1.0));
}

std::array<double, 3> angles(const TriangleLengths& t)
{
    return {angle_from_lengths(t, Side::A), angle_from_lengths(t, Side::B),
            angle_from_lengths(t, Side::C)};
}

double triangle_area(const TriangleLengths& t)
{
    const double pa = 0.5 * (t.b + t.c - t.a);
    const double pb = 0.5 * (t.c + t.a - t.b);
    const double pc = 0.5 * (t.a + t.b - t.c);
    if (!(pa > 0 && pb > 0 && pc > 0)) {
        // Throws unless the failure is within roundoff; a flat triangle has no area.
        angles(t);
        return 0.0;
    }
    // Hyperbolic L'Huilier formula.
    const double p = 0.5 * (t.a + t.b + t.c);
    const double q = std::tanh(0.5 * p) * std::tanh(0.5 * pa) * std::tanh(0.5 * pb) *
                     std::tanh(0.5 * pc);
    return 4.0 * std::atan(std::sqrt(q));
}

double delaunay_term_log(double log_s1, double log_s2, double log_s0)
{
    return std::exp(log_s1 - log_s2) + std::exp(log_s2 - log_s1) -
           std::exp(2.0 * log_s0 - log_s1 - log_s2);
}

double delaunay_term(double x1, double x2, double x0)
{
    if (std::max({x1, x2, x0}) > kLogSpaceThreshold) {
        return delaunay_term_log(log_half_sinh(x1), log_half_sinh(x2), log_half_sinh(x0));
    }
    const double s1 = half_sinh(x1);
    const double s2 = half_sinh(x2);
    const double s0 = half_sinh(x0);
    return (s1 * s1 + s2 * s2 - s0 * s0) / (s1 * s2);
}

double delaunay_excess(double x0, double x1, double x2, double x3, double x4)
{
    return delaunay_term(x1, x2, x0) + delaunay_term(x3, x4, x0);
}

double delaunay_excess(const QuadLengths& q)
{
    return delaunay_excess(q.diagonal, q.x, q.y, q.z, q.w);
}

double leibon_excess(double alpha, double alpha_p, double beta, double beta_p, double gamma,
                     double gamma_p)
{
    return beta + beta_p + gamma + gamma_p - alpha - alpha_p;
}

CircumcircleClass circumcircle_classify(const TriangleLengths& t)
{
    const auto [s, lm] = scaled_half_sinh(t);
    const double perimeter = s[0] + s[1] + s[2];
    const double fa = s[1] + s[2] - s[0];
    const double fb = s[2] + s[0] - s[1];
    const double fc = s[0] + s[1] - s[2];
    const double min_factor = std::min({fa, fb, fc});
    if (std::abs(min_factor) <= kClassificationTolerance * perimeter) {
        return {CircumcircleClass::Kind::Horocycle};
    }
    // (s_a s_b s_c)^2 / (P f_a f_b f_c) is sinh^2(r)/4 or -cosh^2(D)/4;
    // the square root of 4|.| has degree one in the s-values.
    const double denominator = perimeter * fa * fb * fc;
    const double log_value =
        lm + std::log(2.0 * s[0] * s[1] * s[2]) - 0.5 * std::log(std::abs(denominator));
    if (min_factor > 0) {
        return {CircumcircleClass::Kind::Compact, asinh_exp(log_value), 0.0};
    }
    return {CircumcircleClass::Kind::Equidistant, 0.0, acosh_exp(log_value)};
}

double sine_rule_zeta(const TriangleLengths& t)
{
    if (circumcircle_classify(t).kind == CircumcircleClass::Kind::Horocycle) return 1.0;
    // zeta^2 = 4N^2 / (D + 4N^2) with N = s_a s_b s_c and D the Heron-type
    // product; this covers tanh(r) and coth(D) in one expression.
    const auto [s, lm] = scaled_half_sinh(t);
    const double perimeter = s[0] + s[1] + s[2];
    const double denominator =
        perimeter * (s[1] + s[2] - s[0]) * (s[2] + s[0] - s[1]) * (s[0] + s[1] - s[2]);
    const double n = s[0] * s[1] * s[2];
    const double ratio = denominator * std::exp(-2.0 * lm) / (4.0 * n * n);
    return 1.0 / std::sqrt(1.0 + ratio);
}

std::pair<double, double> cyclic_diagonals(double a, double b, double c, double d)
{
    for (double x : {a, b, c, d}) require_positive(x, "cyclic_diagonals");
    const std::array<double, 4> ls{log_half_sinh(a), log_half_sinh(b), log_half_sinh(c),
                                   log_half_sinh(d)};
    const double lm = *std::max_element(ls.begin(), ls.end());
    const double sa = std::exp(ls[0] - lm);
    const double sb = std::exp(ls[1] - lm);
    const double sc = std::exp(ls[2] - lm);
    const double sd = std::exp(ls[3] - lm);
    const double opposite = sa * sc + sb * sd;
    const double around_e = sa * sd + sb * sc;
    const double around_f = sa * sb + sc * sd;
    const double e = length_from_log_half_sinh(lm + 0.5 * std::log(opposite * around_e / around_f));
    const double f = length_from_log_half_sinh(lm + 0.5 * std::log(opposite * around_f / around_e));

    // Degenerate collinear quads are legitimate limits, so only violations
    // beyond roundoff are rejected.
    auto closes = [](double x, double y, double z) {
        const double tol = 1e-12 * (x + y + z);
        return x + y >= z - tol && y + z >= x - tol && z + x >= y - tol;
    };
    if (!closes(a, b, e) || !closes(c, d, e) || !closes(b, c, f) || !closes(d, a, f)) {
        throw InfeasibleQuad("sides (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
                             std::to_string(c) + ", " + std::to_string(d) +
                             ") admit no cyclic quadrilateral");
    }
    return {e, f};
}

double ptolemy_flip_log(double log_a, double log_b, double log_c, double log_d, double log_e)
{
    return log_add_exp(log_a + log_c, log_b + log_d) - log_e;
}

double ptolemy_flip_length(double a, double b, double c, double d, double e)
{
    for (double x : {a, b, c, d, e}) require_positive(x, "ptolemy_flip_length");
    if (std::max({a, b, c, d, e}) > kLogSpaceThreshold) {
        return length_from_log_half_sinh(ptolemy_flip_log(log_half_sinh(a), log_half_sinh(b),
                                                          log_half_sinh(c), log_half_sinh(d),
                                                          log_half_sinh(e)));
    }
    const double sf =
        (half_sinh(a) * half_sinh(c) + half_sinh(b) * half_sinh(d)) / half_sinh(e);
    return 2.0 * std::asinh(sf);
}

double flip_diagonal(const QuadLengths& q)
{
    // Angles at the diagonal end shared by y and z.
    const double alpha = angle_from_lengths({q.x, q.y, q.diagonal}, Side::A);
    const double beta = angle_from_lengths({q.w, q.z, q.diagonal}, Side::A);
    const double half_turn = std::sin(0.5 * (alpha + beta));
    // cosh A = cosh(y - z) + 2 sinh y sinh z sin^2((alpha + beta) / 2), written
    // for s(A)^2 so that short diagonals keep full precision.
    const double gap = std::abs(q.y - q.z);
    double log_s2;
    if (std::max(q.y, q.z) > kLogSpaceThreshold) {
        const double bend = log_sinh(q.y) + log_sinh(q.z) + 2.0 * std::log(std::abs(half_turn));
        log_s2 = gap > 0 ? log_add_exp(2.0 * log_half_sinh(gap), bend) : bend;
    }
    else {
        const double sg = std::sinh(0.5 * gap);
        const double s2 = sg * sg + std::sinh(q.y) * std::sinh(q.z) * half_turn * half_turn;
        if (!(s2 > 0.0)) throw FoldingQuad("quad folds onto itself; flipped diagonal has zero length");
        log_s2 = std::log(s2);
    }
    if (!std::isfinite(log_s2)) throw FoldingQuad("quad folds onto itself; flipped diagonal has zero length");
    return length_from_log_half_sinh(0.5 * log_s2);
}

double angle_derivative_opposite(const TriangleLengths& t, Side opposite)
{
    const int i = static_cast<int>(opposite);
    const double a = side_length(t, i);
    const double b = side_length(t, (i + 1) % 3);
    const double c = side_length(t, (i + 2) % 3);
    const double alpha = angle_from_lengths(t, opposite);
    return std::exp(log_sinh(a) - log_sinh(b) - log_sinh(c)) / std::sin(alpha);
}

double angle_derivative_adjacent(const TriangleLengths& t, Side opposite, Side adjacent)
{
    const int i = static_cast<int>(opposite);
    const int j = static_cast<int>(adjacent);
    if (i == j) throw UsageError("angle_derivative_adjacent needs two distinct sides");
    const auto third = static_cast<Side>(3 - i - j);
    return -angle_derivative_opposite(t, opposite) * std::cos(angle_from_lengths(t, third));
}

std::array<std::array<double, 3>, 3> angle_jacobian(const TriangleLengths& t)
{
    const auto theta = angles(t);
    std::array<double, 3> log_sh{log_sinh(t.a), log_sinh(t.b), log_sinh(t.c)};
    std::array<std::array<double, 3>, 3> jac{};
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        const double diag = std::exp(log_sh[i] - log_sh[j] - log_sh[k]) / std::sin(theta[i]);
        jac[i][i] = diag;
        jac[i][j] = -diag * std::cos(theta[k]);
        jac[i][k] = -diag * std::cos(theta[j]);
    }
    return jac;
}

}  // namespace hypconf::trig
