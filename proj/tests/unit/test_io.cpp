#include <gtest/gtest.h>

#include <bit>
#include <cstdint>
#include <filesystem>
#include <random>

#include "hypconf/errors.hpp"
#include "hypconf/fixtures.hpp"
#include "hypconf/io.hpp"

using namespace hypconf;
using io::json;

namespace {

void expect_bit_equal(const std::vector<double>& a, const std::vector<double>& b)
{
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(std::bit_cast<std::uint64_t>(a[i]), std::bit_cast<std::uint64_t>(b[i])) << "entry " << i;
    }
}

io::SurfaceFile through_text(const PolyhedralMetric& m, const std::vector<std::string>& names = {})
{
    return io::surface_from_json(json::parse(io::surface_to_json(m, names).dump(2)));
}

// A Delaunay metric reached by at least one flip, so it carries a lineage.
PolyhedralMetric flipped_metric()
{
    for (std::uint64_t seed = 1;; ++seed) {
        auto result = make_delaunay(fixtures::random_metric(fixtures::genus2_with_vertices(2), seed));
        if (!result.flips.empty()) return result.metric;
    }
}

json sphere_doc()
{
    return io::surface_to_json(fixtures::uniform_metric(fixtures::sphere(), 1.0));
}

}  // namespace

TEST(SurfaceJson, RandomLengthsRoundTripBitExactly)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = fixtures::random_metric(fixtures::genus2_with_vertices(trial % 4), rng, 1.5);
        const auto back = through_text(m);
        expect_bit_equal(m.lengths(), back.metric.lengths());
        EXPECT_EQ(back.metric.triangulation(), m.triangulation());
        EXPECT_TRUE(back.vertex_names.empty());
    }
}

TEST(SurfaceJson, AwkwardDoublesSurvive)
{
    const auto t = fixtures::torus();
    const PolyhedralMetric m(t, {0.1 + 0.2, std::nextafter(1.0, 2.0), 1e-300 * 1e10});
    expect_bit_equal(m.lengths(), through_text(m).metric.lengths());
}

TEST(SurfaceJson, FixtureSerializationIsStable)
{
    const auto doc = sphere_doc();
    EXPECT_EQ(doc["triangles"], 2);
    EXPECT_EQ(doc["gluing"].size(), 3u);
    EXPECT_EQ(doc["lengths"].size(), 3u);
    EXPECT_FALSE(doc.contains("corner_vertices"));
    EXPECT_FALSE(doc.contains("lineage"));
    EXPECT_EQ(io::surface_to_json(io::surface_from_json(doc).metric).dump(), doc.dump());
}

TEST(SurfaceJson, VertexNamesRoundTrip)
{
    const auto m = fixtures::uniform_metric(fixtures::genus2_with_vertices(2), 1.0);
    const std::vector<std::string> names{"apex", "left", "right"};
    ASSERT_EQ(m.triangulation().vertex_count(), 3);
    EXPECT_EQ(through_text(m, names).vertex_names, names);

    json doc = io::surface_to_json(m, {"only", "two"});
    EXPECT_THROW(io::surface_from_json(doc), ValidationError);
}

TEST(SurfaceJson, ExplicitCornerVerticesRoundTrip)
{
    const auto base = fixtures::genus2_with_vertices(2);
    auto table = base.corner_vertices();
    const int n = base.vertex_count();
    for (auto& row : table) {
        for (int& v : row) v = n - 1 - v;
    }
    const auto t = Triangulation::build(base.triangle_count(), base.gluing(), table);
    ASSERT_FALSE(t.has_canonical_vertex_ids());
    const auto m = fixtures::random_metric(t, 5);
    const json doc = io::surface_to_json(m);
    ASSERT_TRUE(doc.contains("corner_vertices"));
    const auto back = io::surface_from_json(doc);
    EXPECT_EQ(back.metric.triangulation().corner_vertices(), table);
    expect_bit_equal(m.lengths(), back.metric.lengths());
}

TEST(SurfaceJson, LineageRoundTrip)
{
    const auto m = flipped_metric();
    const auto& t = m.triangulation();
    ASSERT_FALSE(t.lineage().flips.empty());
    const auto back = through_text(m);
    const auto& bt = back.metric.triangulation();
    EXPECT_EQ(bt, t);
    EXPECT_EQ(bt.lineage().flips, t.lineage().flips);
    EXPECT_EQ(bt.root(), t.root());
}

TEST(SurfaceJson, TamperedLineageRejected)
{
    json doc = io::surface_to_json(flipped_metric());
    ASSERT_TRUE(doc.contains("lineage"));
    doc["lineage"]["flips"] = json::array();
    EXPECT_THROW(io::surface_from_json(doc), ValidationError);
}

TEST(SurfaceJson, MalformedInputNamesTheElement)
{
    auto expect_message = [](const json& doc, const std::string& fragment) {
        try {
            io::surface_from_json(doc);
            ADD_FAILURE() << "accepted " << doc.dump();
        }
        catch (const ValidationError& e) {
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
        }
    };
    json doc = sphere_doc();
    doc.erase("triangles");
    expect_message(doc, "triangles");

    doc = sphere_doc();
    doc["lengths"][1] = "long";
    expect_message(doc, "length 1");

    doc = sphere_doc();
    doc["gluing"][2] = json::array({json::array({0, 2})});
    expect_message(doc, "gluing 2");

    doc = sphere_doc();
    doc["gluing"][0][0] = json::array({0, "a"});
    expect_message(doc, "[triangle, side]");

    expect_message(json::array(), "object");
}

TEST(SurfaceJson, UngluedSideRejected)
{
    json doc = sphere_doc();
    doc["gluing"].erase(doc["gluing"].size() - 1);
    doc["lengths"].erase(doc["lengths"].size() - 1);
    EXPECT_THROW(io::surface_from_json(doc), ValidationError);
}

TEST(SurfaceJson, NonPositiveLengthsRejected)
{
    json doc = sphere_doc();
    doc["lengths"][0] = -1.0;
    EXPECT_ANY_THROW(io::surface_from_json(doc));
    doc["lengths"][0] = 0.0;
    EXPECT_ANY_THROW(io::surface_from_json(doc));
}

TEST(FlipLogJson, RoundTrip)
{
    auto t = fixtures::genus2_with_vertices(2);
    std::vector<FlipMove> log;
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> edge(0, t.edge_count() - 1);
    while (log.size() < 12) {
        const int e = edge(rng);
        if (t.is_folded(e)) continue;
        log.push_back(t.flip(e, log.size() % 3 == 2));
    }
    const auto back = io::flip_log_from_json(json::parse(io::flip_log_to_json(log).dump()));
    EXPECT_EQ(back, log);
    EXPECT_EQ(io::flip_move_from_json(io::flip_move_to_json(log.front())), log.front());
}

TEST(FlipLogJson, RejectsShortBoundary)
{
    json move = {{"edge", 0}, {"boundary", json::array({json::array({0, 0})})}};
    EXPECT_THROW(io::flip_move_from_json(move), ValidationError);
    EXPECT_THROW(io::flip_log_from_json(json::object()), ValidationError);
}

TEST(TargetJson, ZeroAndIdsAndNames)
{
    const auto t = fixtures::genus2_with_vertices(2);
    EXPECT_EQ(io::target_from_json("zero", t), std::vector<double>(3, 0.0));
    const json by_id = {{"0", -1.0}, {"1", 0.5}, {"2", 0.25}};
    EXPECT_EQ(io::target_from_json(by_id, t), (std::vector<double>{-1.0, 0.5, 0.25}));
    const json by_name = {{"b", 0.5}, {"a", -1.0}, {"2", 0.25}};
    EXPECT_EQ(io::target_from_json(by_name, t, {"a", "b", "c"}), (std::vector<double>{-1.0, 0.5, 0.25}));
}

TEST(TargetJson, RejectsBadTargets)
{
    const auto t = fixtures::genus2_with_vertices(2);
    EXPECT_THROW(io::target_from_json("flat", t), InvalidTarget);
    EXPECT_THROW(io::target_from_json(json::array({0, 0, 0}), t), InvalidTarget);
    EXPECT_THROW(io::target_from_json(json({{"0", 0.0}, {"1", 0.0}}), t), InvalidTarget);
    EXPECT_THROW(io::target_from_json(json({{"0", 0.0}, {"1", 0.0}, {"3", 0.0}}), t), InvalidTarget);
    EXPECT_THROW(io::target_from_json(json({{"0", 0.0}, {"1", 0.0}, {"2x", 0.0}}), t), InvalidTarget);
    EXPECT_THROW(io::target_from_json(json({{"0", 0.0}, {"1", 0.0}, {"2", "hot"}}), t), InvalidTarget);
}

TEST(TraceCsv, HeaderAndRows)
{
    FlowTrace trace;
    trace.rows.push_back({0, 0.0, 0.5, 0, 4.0});
    trace.rows.push_back({1, 0.125, 0.25, 2, 4.5});
    EXPECT_EQ(io::trace_to_csv(trace),
              "step,t,residual_inf,flips_this_step,area\n0,0,0.5,0,4\n1,0.125,0.25,2,4.5\n");
    EXPECT_EQ(io::trace_to_csv({}), "step,t,residual_inf,flips_this_step,area\n");
}

TEST(Files, WriteThenLoad)
{
    const auto dir = std::filesystem::temp_directory_path() / "hypconf_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "surface.json";
    const auto m = fixtures::random_metric(fixtures::genus2(), 21);
    io::write_json(path, io::surface_to_json(m, {"v"}));
    const auto loaded = io::load_surface(path);
    expect_bit_equal(loaded.metric.lengths(), m.lengths());
    EXPECT_EQ(loaded.vertex_names, std::vector<std::string>{"v"});

    io::write_text(dir / "broken.json", "{\"triangles\": ");
    EXPECT_THROW(io::load_surface(dir / "broken.json"), ValidationError);
    EXPECT_THROW(io::load_surface(dir / "absent.json"), ValidationError);
    std::filesystem::remove_all(dir);
}
