#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hypconf/errors.hpp"
#include "hypconf/fixtures.hpp"
#include "hypconf/teich.hpp"
#include "test_support.hpp"

using namespace hypconf;
namespace tk = hypconf::testkit;

namespace {

std::vector<double> random_factor(std::mt19937_64& rng, int n, double bound)
{
    std::uniform_real_distribution<double> u(-bound, bound);
    std::vector<double> out(n);
    for (double& x : out) x = u(rng);
    return out;
}

PolyhedralMetric random_delaunay(std::mt19937_64& rng, int extra)
{
    return make_delaunay(fixtures::random_metric(fixtures::genus2_with_vertices(extra), rng)).metric;
}

LambdaMetric random_lambda(std::mt19937_64& rng, const Triangulation& t, double spread)
{
    return {t, random_factor(rng, t.edge_count(), spread)};
}

}  // namespace

TEST(Theta, ValuesAndRoundTrip)
{
    const PolyhedralMetric m(fixtures::torus(), {2.0, 1.0, 1.5});
    const auto l = theta(m);
    EXPECT_NEAR(l.lambda(0), 1.1752011936438014, 1e-15);
    EXPECT_GT(l.lambda(0), l.lambda(2));
    EXPECT_GT(l.lambda(2), l.lambda(1));

    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; ++i) {
        const auto r = fixtures::random_metric(fixtures::genus2_with_vertices(i % 3), rng, 2.0);
        const auto back = theta_inv(theta(r));
        for (int e = 0; e < r.triangulation().edge_count(); ++e) {
            EXPECT_LE(std::abs(back.length(e) - r.length(e)), 1e-12 * std::max(1.0, r.length(e)));
        }
    }
}

TEST(Lambda, RejectsBadInput)
{
    EXPECT_THROW(LambdaMetric(fixtures::torus(), {0.0, 1.0}), ValidationError);
    EXPECT_THROW(LambdaMetric::from_lambda(fixtures::torus(), {1.0, -1.0, 2.0}), ValidationError);
    EXPECT_THROW(LambdaMetric(fixtures::torus(), {0.0, NAN, 0.0}), ValidationError);
}

TEST(PennerFlip, EqualLambdasDouble)
{
    const auto l = LambdaMetric::from_lambda(fixtures::genus2(), std::vector<double>(9, 1.7));
    for (int e = 0; e < 9; ++e) EXPECT_NEAR(penner_flip(l, e).lambda.lambda(e), 3.4, 1e-14);
}

TEST(PennerFlip, Involution)
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 30; ++i) {
        const auto l = random_lambda(rng, fixtures::genus2_with_vertices(i % 3), 2.0);
        for (int e = 0; e < l.triangulation().edge_count(); ++e) {
            const auto once = penner_flip(l, e);
            const auto twice = penner_flip(once.lambda, e);
            const auto undone = penner_flip(once.lambda, e, true);
            EXPECT_TRUE(undone.lambda.triangulation() == l.triangulation());
            for (int f = 0; f < l.triangulation().edge_count(); ++f) {
                EXPECT_LE(tk::rel_diff(twice.lambda.log_lambda(f), l.log_lambda(f)), 1e-12);
                EXPECT_LE(tk::rel_diff(undone.lambda.log_lambda(f), l.log_lambda(f)), 1e-12);
            }
            EXPECT_LE(tk::rel_diff(apply_flip_move(l, once.move).log_lambda(e), once.lambda.log_lambda(e)),
                      1e-15);
        }
    }
}

TEST(PennerFlip, ConjugateToGeometricFlipAtCyclicQuads)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.3, 2.5);
    for (int i = 0; i < 100; ++i) {
        const double l1 = u(rng), l2 = u(rng);
        const double l0 = trig::cyclic_diagonals(l1, l2, l1, l2).first;
        const PolyhedralMetric m(fixtures::torus(), {l0, l1, l2});
        const auto geometric = theta(flip_metric(m, 0).metric);
        const auto algebraic = penner_flip(theta(m), 0).lambda;
        for (int e = 0; e < 3; ++e) {
            EXPECT_LE(tk::rel_diff(geometric.lambda(e), algebraic.lambda(e)), 1e-10);
        }
    }
}

TEST(PennerFlip, FoldedEdgeRejected)
{
    const auto t = Triangulation::build(2, {{{0, 0}, {0, 1}}, {{0, 2}, {1, 2}}, {{1, 0}, {1, 1}}});
    EXPECT_THROW(penner_flip(LambdaMetric(t, {0, 0, 0}), 0), UnflippableEdge);
}

TEST(DecoratedExcess, EqualsMetricExcess)
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto m = fixtures::random_metric(fixtures::genus2_with_vertices(i % 4), rng);
        const auto l = theta(m);
        for (int e = 0; e < m.triangulation().edge_count(); ++e) {
            EXPECT_NEAR(decorated_delaunay_excess(l, e), edge_delaunay_excess(m, e),
                        1e-12 * std::max(1.0, std::abs(edge_delaunay_excess(m, e))));
        }
    }
    const auto equal = LambdaMetric::from_lambda(fixtures::genus2(), std::vector<double>(9, 0.8));
    for (int e = 0; e < 9; ++e) EXPECT_NEAR(decorated_delaunay_excess(equal, e), 2.0, 1e-14);
}

TEST(DecoratedExcess, ZeroAtPtolemyCyclic)
{
    // On the torus, lambda_0^2 = lambda_1^2 + lambda_2^2 makes edge 0 cyclic.
    const auto l = LambdaMetric::from_lambda(fixtures::torus(), {5.0, 3.0, 4.0});
    EXPECT_NEAR(decorated_delaunay_excess(l, 0), 0.0, 1e-14);
}

TEST(MakeDecoratedDelaunay, AgreesWithMetricSide)
{
    const auto m = fixtures::uniform_metric(fixtures::genus2(), 1.2);
    EXPECT_TRUE(make_decorated_delaunay(theta(m)).flips.empty());

    // The first move is always the same; the geometric and Ptolemy lengths
    // coincide afterwards only at cyclic quads, so compare the opening flip.
    std::mt19937_64 rng(5);
    int compared = 0;
    for (int i = 0; i < 60; ++i) {
        const auto r = fixtures::random_metric(fixtures::genus2_with_vertices(i % 4), rng);
        const auto metric_side = make_delaunay(r);
        const auto lambda_side = make_decorated_delaunay(theta(r));
        if (metric_side.flips.empty()) {
            EXPECT_TRUE(lambda_side.flips.empty());
            continue;
        }
        ASSERT_FALSE(lambda_side.flips.empty());
        EXPECT_EQ(metric_side.flips.front(), lambda_side.flips.front());
        ++compared;
    }
    EXPECT_GT(compared, 5);
}

TEST(MakeDecoratedDelaunay, RandomLambdasTerminate)
{
    std::mt19937_64 rng(6);
    for (int i = 0; i < 100; ++i) {
        const auto l = random_lambda(rng, fixtures::genus2_with_vertices(i % 5), 1.5);
        const auto r = make_decorated_delaunay(l);
        for (int e = 0; e < l.triangulation().edge_count(); ++e) {
            EXPECT_GE(decorated_delaunay_excess(r.lambda, e), -kDelaunayEpsilon);
        }
        // Decorated Delaunay lambdas always give a Delaunay metric.
        const auto m = theta_inv(r.lambda);
        EXPECT_TRUE(m.is_triangulable());
        EXPECT_TRUE(is_delaunay(m, 1e-9).delaunay);
    }
}

TEST(Shear, EqualLambdasGiveOne)
{
    const auto l = LambdaMetric::from_lambda(fixtures::genus2(), std::vector<double>(9, 2.3));
    for (double z : shear(l)) EXPECT_NEAR(z, 1.0, 1e-15);
}

TEST(Shear, TorusPin)
{
    const auto l = LambdaMetric::from_lambda(fixtures::torus(), {1.0, 2.0, 3.0});
    const auto z = shear(l);
    ASSERT_EQ(z.size(), 3u);
    EXPECT_NEAR(z[0], 4.0 / 9.0, 1e-15);
    EXPECT_NEAR(z[1], 9.0, 1e-14);
    EXPECT_NEAR(z[2], 0.25, 1e-15);
}

TEST(Shear, VertexRescalingInvariance)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const auto t = fixtures::genus2_with_vertices(i % 4);
        const auto l = random_lambda(rng, t, 2.0);
        const auto scaled = scale_vertices(l, random_factor(rng, t.vertex_count(), 2.0));
        const auto a = log_shear(l), b = log_shear(scaled);
        for (std::size_t e = 0; e < a.size(); ++e) EXPECT_NEAR(a[e], b[e], 1e-12);
        EXPECT_TRUE(same_hyperbolic_structure(l, scaled));
        EXPECT_TRUE(same_hyperbolic_structure(l, l));
        EXPECT_EQ(shear_distance(l, l), 0.0);
    }
}

TEST(Shear, PerturbationIsDetected)
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20; ++i) {
        const auto t = fixtures::genus2_with_vertices(i % 3);
        const auto l = random_lambda(rng, t, 1.0);
        auto logs = l.log_lambda();
        logs[rng() % logs.size()] += std::log(1.01);
        EXPECT_FALSE(same_hyperbolic_structure(l, LambdaMetric(t, logs)));
    }
}

TEST(Shear, DifferentTriangulationsRejected)
{
    const auto l = LambdaMetric(fixtures::genus2(), std::vector<double>(9, 0.0));
    const auto f = penner_flip(l, 0).lambda;
    EXPECT_THROW(same_hyperbolic_structure(l, f), UsageError);
}

TEST(Transport, UndoesAndReplaysLogs)
{
    std::mt19937_64 rng(9);
    const auto t = fixtures::genus2_with_vertices(2);
    const auto l = random_lambda(rng, t, 1.0);

    LambdaMetric a = l, b = l;
    for (int i = 0; i < 15; ++i) {
        const int ea = static_cast<int>(rng() % t.edge_count());
        const int eb = static_cast<int>(rng() % t.edge_count());
        if (!a.triangulation().is_folded(ea)) a = penner_flip(a, ea).lambda;
        if (!b.triangulation().is_folded(eb)) b = penner_flip(b, eb, true).lambda;
    }
    // Both are Ptolemy images of l, so they describe the same structure.
    const auto moved = transport(a, b.triangulation());
    EXPECT_TRUE(moved.triangulation() == b.triangulation());
    for (int e = 0; e < t.edge_count(); ++e) {
        EXPECT_LE(tk::rel_diff(moved.log_lambda(e), b.log_lambda(e)), 1e-10);
    }
    EXPECT_THROW(transport(a, fixtures::genus2()), UnsupportedInput);
}

TEST(ConformalChange, RestoresDelaunay)
{
    std::mt19937_64 rng(10);
    for (int i = 0; i < 30; ++i) {
        const auto m = random_delaunay(rng, i % 4);
        const auto u = random_factor(rng, m.triangulation().vertex_count(), 2.0);
        const auto image = conformal_change(m, u);
        EXPECT_TRUE(is_delaunay(image.metric, 1e-9).delaunay);
        Triangulation replayed = m.triangulation();
        for (const auto& move : image.flips) replayed = apply_flip_move(replayed, move);
        EXPECT_TRUE(replayed == image.metric.triangulation());
        // Without flips the image is the plain scaling.
        if (image.flips.empty()) {
            const auto plain = conformal_apply(m, u);
            for (int e = 0; e < m.triangulation().edge_count(); ++e) {
                EXPECT_LE(tk::rel_diff(image.metric.length(e), plain.length(e)), 1e-12);
            }
        }
    }
}

TEST(Decide, ConformalPairsAreRecognised)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const auto m = random_delaunay(rng, i % 4);
        const int n = m.triangulation().vertex_count();
        const auto u = random_factor(rng, n, 2.0);
        const auto image = conformal_change(m, u);
        const auto d = decide_discrete_conformal(m, image.metric);
        EXPECT_TRUE(d.conformal) << d.residual;
        EXPECT_LT(d.residual, kShearTolerance);
        ASSERT_EQ(static_cast<int>(d.factor.size()), n);
        for (int v = 0; v < n; ++v) EXPECT_NEAR(d.factor[v], u[v], 1e-8);
        EXPECT_LT(d.factor_residual, 1e-8);
    }
}

TEST(Decide, SelfAndPerturbation)
{
    std::mt19937_64 rng(12);
    for (int i = 0; i < 20; ++i) {
        const auto m = fixtures::random_metric(fixtures::genus2_with_vertices(i % 4), rng);
        const auto self = decide_discrete_conformal(m, m);
        EXPECT_TRUE(self.conformal);
        EXPECT_EQ(self.residual, 0.0);

        auto lengths = m.lengths();
        lengths[rng() % lengths.size()] *= 1.05;
        const PolyhedralMetric perturbed(m.triangulation(), lengths);
        if (!perturbed.is_triangulable()) continue;
        const auto d = decide_discrete_conformal(m, perturbed);
        EXPECT_FALSE(d.conformal);
        EXPECT_GT(d.residual, kShearTolerance);
        EXPECT_TRUE(d.factor.empty());
    }
}

TEST(Decide, UnrelatedComplexesUnsupported)
{
    const auto a = fixtures::uniform_metric(fixtures::genus2(), 2.0);
    const auto b = fixtures::uniform_metric(fixtures::genus2_with_vertices(1), 2.0);
    EXPECT_THROW(decide_discrete_conformal(a, b), UnsupportedInput);
}
