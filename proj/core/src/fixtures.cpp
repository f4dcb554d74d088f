#include "hypconf/fixtures.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hypconf/errors.hpp"

namespace hypconf::fixtures {

Triangulation sphere()
{
    return Triangulation::build(2, {{{0, 0}, {1, 0}}, {{0, 1}, {1, 2}}, {{0, 2}, {1, 1}}});
}

Triangulation torus()
{
    return Triangulation::build(2, {{{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}, {{0, 2}, {1, 2}}});
}

Triangulation genus2()
{
    std::vector<Gluing> g{{{0, 0}, {1, 1}}, {{0, 1}, {2, 1}}, {{3, 1}, {5, 1}}, {{4, 1}, {5, 2}}};
    for (int k = 0; k < 5; ++k) g.push_back({{k, 2}, {k + 1, 0}});
    return Triangulation::build(6, g);
}

Triangulation split_triangle(const Triangulation& t, int triangle)
{
    const int f = t.triangle_count();
    if (triangle < 0 || triangle >= f) throw UsageError("no triangle " + std::to_string(triangle));
    const int t1 = f;
    const int t2 = f + 1;
    auto remap = [&](SideRef s) {
        if (s.triangle != triangle || s.side == 0) return s;
        return SideRef{s.side == 1 ? t1 : t2, 0};
    };
    std::vector<Gluing> g;
    for (const auto& [a, b] : t.gluing()) g.emplace_back(remap(a), remap(b));
    g.push_back({{triangle, 1}, {t1, 2}});
    g.push_back({{t1, 1}, {t2, 2}});
    g.push_back({{t2, 1}, {triangle, 2}});
    return Triangulation::build(f + 2, g);
}

Triangulation genus2_with_vertices(int extra)
{
    Triangulation t = genus2();
    for (int k = 0; k < extra; ++k) t = split_triangle(t, k);
    return t;
}

double genus2_regular_length()
{
    const double c = std::cos(std::numbers::pi / 9.0);
    return std::acosh(c / (1.0 - c));
}

PolyhedralMetric uniform_metric(const Triangulation& t, double length)
{
    return {t, std::vector<double>(t.edge_count(), length)};
}

PolyhedralMetric random_metric(const Triangulation& t, std::mt19937_64& rng, double spread)
{
    std::uniform_real_distribution<double> log_length(-spread, spread);
    std::vector<double> lengths(t.edge_count());
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        for (double& x : lengths) x = std::exp(log_length(rng));
        PolyhedralMetric m(t, lengths);
        if (m.is_triangulable()) return m;
    }
    throw UsageError("no valid random metric found");
}

PolyhedralMetric random_metric(const Triangulation& t, std::uint64_t seed, double spread)
{
    std::mt19937_64 rng(seed);
    return random_metric(t, rng, spread);
}

}  // namespace hypconf::fixtures
