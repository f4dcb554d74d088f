#pragma once

// Small reference surfaces and seeded random metrics.

#include <cstdint>
#include <random>

#include "hypconf/metric.hpp"
#include "hypconf/surface.hpp"

namespace hypconf::fixtures {

// Two triangles glued along all three sides: V = 3, E = 3, F = 2.
Triangulation sphere();
// Two triangles, one vertex: V = 1, E = 3, F = 2.
Triangulation torus();
// Fan triangulation of the octagon a b a^-1 b^-1 c d c^-1 d^-1: V = 1, E = 9, F = 6.
Triangulation genus2();
// Cone over triangle t: a new vertex inside t joined to its three corners.
Triangulation split_triangle(const Triangulation& t, int triangle);
// genus2() with `extra` vertices inserted into triangles 0, 1, ...
Triangulation genus2_with_vertices(int extra);

// cosh L = cos(pi/9) / (1 - cos(pi/9)): the equilateral genus-2 metric with
// zero curvature.
double genus2_regular_length();

PolyhedralMetric uniform_metric(const Triangulation& t, double length);
// Log-lengths uniform in [-spread, spread], resampled until every triangle
// inequality holds.
PolyhedralMetric random_metric(const Triangulation& t, std::mt19937_64& rng, double spread = 1.0);
PolyhedralMetric random_metric(const Triangulation& t, std::uint64_t seed, double spread = 1.0);

}  // namespace hypconf::fixtures
