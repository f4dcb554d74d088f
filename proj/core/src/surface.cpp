#include "hypconf/surface.hpp"

#include <algorithm>
#include <string>

#include "hypconf/errors.hpp"

namespace hypconf {

namespace {

std::string side_name(SideRef s)
{
    return "(" + std::to_string(s.triangle) + ", " + std::to_string(s.side) + ")";
}

int next3(int i, int k = 1) { return (i + k) % 3; }

}  // namespace

Triangulation Triangulation::build(int triangle_count, const std::vector<Gluing>& gluing,
                                   const std::optional<std::vector<std::array<int, 3>>>&
                                       corner_vertices)
{
    if (triangle_count <= 0) throw ValidationError("a surface needs at least one triangle");
    const int sides = 3 * triangle_count;
    if (sides % 2 != 0) {
        throw ValidationError("odd number of sides (" + std::to_string(sides) +
                              "); a closed surface needs an even count");
    }
    if (static_cast<int>(gluing.size()) != sides / 2) {
        throw ValidationError("expected " + std::to_string(sides / 2) + " gluing pairs, got " +
                              std::to_string(gluing.size()));
    }

    Triangulation t;
    t.partner_.assign(sides, -1);
    t.side_edge_.assign(sides, -1);
    t.edge_sides_.reserve(gluing.size());
    for (std::size_t e = 0; e < gluing.size(); ++e) {
        const auto [s0, s1] = gluing[e];
        for (SideRef s : {s0, s1}) {
            if (s.triangle < 0 || s.triangle >= triangle_count || s.side < 0 || s.side > 2) {
                throw ValidationError("gluing " + std::to_string(e) + " names nonexistent side " +
                                      side_name(s));
            }
            if (t.partner_[code(s)] != -1) {
                throw ValidationError("side " + side_name(s) + " is glued twice");
            }
        }
        if (s0 == s1) throw ValidationError("side " + side_name(s0) + " is glued to itself");
        t.partner_[code(s0)] = code(s1);
        t.partner_[code(s1)] = code(s0);
        t.side_edge_[code(s0)] = static_cast<int>(e);
        t.side_edge_[code(s1)] = static_cast<int>(e);
        t.edge_sides_.push_back({s0, s1});
    }
    for (int c = 0; c < sides; ++c) {
        if (t.partner_[c] == -1) throw ValidationError("side " + side_name(decode(c)) + " is unglued");
    }

    // Connectivity over triangle adjacency.
    std::vector<char> seen(triangle_count, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        const int tri = stack.back();
        stack.pop_back();
        for (int i = 0; i < 3; ++i) {
            const int other = t.partner_[3 * tri + i] / 3;
            if (!seen[other]) {
                seen[other] = 1;
                ++reached;
                stack.push_back(other);
            }
        }
    }
    if (reached != triangle_count) {
        const auto missing = std::find(seen.begin(), seen.end(), 0) - seen.begin();
        throw ValidationError("surface is disconnected; triangle " + std::to_string(missing) +
                              " is not reachable from triangle 0");
    }

    // Vertices are orbits of the corner walk.
    std::vector<std::array<int, 3>> derived(triangle_count, {-1, -1, -1});
    int vertices = 0;
    for (int tri = 0; tri < triangle_count; ++tri) {
        for (int k = 0; k < 3; ++k) {
            if (derived[tri][k] != -1) continue;
            Corner c{tri, k};
            while (derived[c.triangle][c.corner] == -1) {
                derived[c.triangle][c.corner] = vertices;
                const SideRef across = decode(t.partner_[3 * c.triangle + c.corner]);
                c = {across.triangle, next3(across.side)};
            }
            ++vertices;
        }
    }
    t.vertex_count_ = vertices;

    if (!corner_vertices) {
        t.corner_vertex_ = std::move(derived);
        return t;
    }
    if (static_cast<int>(corner_vertices->size()) != triangle_count) {
        throw ValidationError("corner_vertices has " + std::to_string(corner_vertices->size()) +
                              " rows for " + std::to_string(triangle_count) + " triangles");
    }
    std::vector<int> orbit_label(vertices, -1);
    std::vector<int> label_orbit(vertices, -1);
    for (int tri = 0; tri < triangle_count; ++tri) {
        for (int k = 0; k < 3; ++k) {
            const int label = (*corner_vertices)[tri][k];
            const int orbit = derived[tri][k];
            const std::string where = "corner (" + std::to_string(tri) + ", " + std::to_string(k) + ")";
            if (label < 0 || label >= vertices) {
                throw ValidationError(where + " has vertex id " + std::to_string(label) +
                                      " outside [0, " + std::to_string(vertices) + ")");
            }
            if (orbit_label[orbit] == -1 && label_orbit[label] == -1) {
                orbit_label[orbit] = label;
                label_orbit[label] = orbit;
            }
            else if (orbit_label[orbit] != label || label_orbit[label] != orbit) {
                throw ValidationError(where + " has vertex id " + std::to_string(label) +
                                      " inconsistent with the gluing");
            }
        }
    }
    t.corner_vertex_ = *corner_vertices;
    return t;
}

std::vector<Gluing> Triangulation::gluing() const
{
    std::vector<Gluing> out;
    out.reserve(edge_sides_.size());
    for (const auto& sides : edge_sides_) out.emplace_back(sides[0], sides[1]);
    return out;
}

bool Triangulation::has_canonical_vertex_ids() const
{
    return build(triangle_count(), gluing()).corner_vertex_ == corner_vertex_;
}

std::array<int, 2> Triangulation::edge_vertices(int e) const
{
    const SideRef s = edge_sides(e)[0];
    return {corner_vertex_[s.triangle][s.side], corner_vertex_[s.triangle][next3(s.side)]};
}

bool Triangulation::is_folded(int e) const
{
    const auto& sides = edge_sides(e);
    return sides[0].triangle == sides[1].triangle;
}

std::vector<Corner> Triangulation::vertex_corners(int v) const
{
    if (v < 0 || v >= vertex_count_) throw UsageError("no vertex " + std::to_string(v));
    Corner start{-1, -1};
    for (int tri = 0; tri < triangle_count() && start.triangle < 0; ++tri) {
        for (int k = 0; k < 3; ++k) {
            if (corner_vertex_[tri][k] == v) {
                start = {tri, k};
                break;
            }
        }
    }
    std::vector<Corner> out;
    Corner c = start;
    do {
        out.push_back(c);
        const SideRef across = partner({c.triangle, c.corner});
        c = {across.triangle, next3(across.side)};
    } while (c != start);
    return out;
}

std::vector<Corner> vertex_corners(const Triangulation& t, int v) { return t.vertex_corners(v); }

std::array<SideRef, 4> Triangulation::quad_boundary(int e) const
{
    const auto [s0, s1] = edge_sides(e);
    return {SideRef{s0.triangle, next3(s0.side)}, SideRef{s0.triangle, next3(s0.side, 2)},
            SideRef{s1.triangle, next3(s1.side)}, SideRef{s1.triangle, next3(s1.side, 2)}};
}

bool Triangulation::operator==(const Triangulation& other) const
{
    return partner_ == other.partner_ && side_edge_ == other.side_edge_ &&
           edge_sides_ == other.edge_sides_ && corner_vertex_ == other.corner_vertex_;
}

Triangulation Triangulation::root() const
{
    if (lineage_.root) return *lineage_.root;
    Triangulation copy = *this;
    copy.lineage_ = {};
    return copy;
}

FlipMove Triangulation::flip(int e, bool clockwise)
{
    if (e < 0 || e >= edge_count()) throw UsageError("no edge " + std::to_string(e));
    if (is_folded(e)) {
        throw UnflippableEdge("edge " + std::to_string(e) + " has both sides in triangle " +
                                  std::to_string(edge_sides(e)[0].triangle),
                              e);
    }
    const auto [s0, s1] = edge_sides(e);
    const auto boundary = quad_boundary(e);
    FlipMove move{e, boundary, e, clockwise};

    if (!lineage_.root) {
        Triangulation copy = *this;
        copy.lineage_ = {};
        lineage_.root = std::make_shared<const Triangulation>(std::move(copy));
    }
    if (!lineage_.flips.empty() && lineage_.flips.back().edge == e &&
        lineage_.flips.back().clockwise != clockwise) {
        lineage_.flips.pop_back();
    }
    else {
        lineage_.flips.push_back(move);
    }

    const int t0 = s0.triangle;
    const int i0 = s0.side;
    const int t1 = s1.triangle;
    const int i1 = s1.side;
    const int p = corner_vertex_[t0][i0];
    const int q = corner_vertex_[t0][next3(i0)];
    const int r = corner_vertex_[t0][next3(i0, 2)];
    const int s = corner_vertex_[t1][next3(i1, 2)];

    // New positions of the boundary sides b0..b3.
    std::array<SideRef, 4> target;
    const SideRef t0a{t0, next3(i0)}, t0b{t0, next3(i0, 2)};
    const SideRef t1a{t1, next3(i1)}, t1b{t1, next3(i1, 2)};
    if (!clockwise) {
        target = {t0b, t1a, t1b, t0a};
        corner_vertex_[t0][i0] = r;
        corner_vertex_[t0][next3(i0)] = s;
        corner_vertex_[t0][next3(i0, 2)] = q;
        corner_vertex_[t1][i1] = s;
        corner_vertex_[t1][next3(i1)] = r;
        corner_vertex_[t1][next3(i1, 2)] = p;
    }
    else {
        target = {t1b, t0a, t0b, t1a};
        corner_vertex_[t0][i0] = s;
        corner_vertex_[t0][next3(i0)] = r;
        corner_vertex_[t0][next3(i0, 2)] = p;
        corner_vertex_[t1][i1] = r;
        corner_vertex_[t1][next3(i1)] = s;
        corner_vertex_[t1][next3(i1, 2)] = q;
    }

    auto moved = [&](int c) {
        for (int k = 0; k < 4; ++k) {
            if (code(boundary[k]) == c) return code(target[k]);
        }
        return c;
    };
    const std::vector<int> old_partner = partner_;
    const std::vector<int> old_edge = side_edge_;
    for (int k = 0; k < 4; ++k) {
        const int from = code(boundary[k]);
        const int to = code(target[k]);
        const int mate = moved(old_partner[from]);
        partner_[to] = mate;
        partner_[mate] = to;
        side_edge_[to] = old_edge[from];
    }
    const std::vector<std::array<SideRef, 2>> old_sides = edge_sides_;
    for (int k = 0; k < 4; ++k) {
        const int edge = old_edge[code(boundary[k])];
        edge_sides_[edge] = {decode(moved(code(old_sides[edge][0]))),
                             decode(moved(code(old_sides[edge][1])))};
    }
    return move;
}

std::pair<Triangulation, FlipMove> flip_combinatorial(const Triangulation& t, int e)
{
    Triangulation out = t;
    FlipMove move = out.flip(e);
    return {std::move(out), move};
}

FlipMove inverted(const Triangulation& after, const FlipMove& move)
{
    return {move.edge, after.quad_boundary(move.edge), move.edge, !move.clockwise};
}

Triangulation inverse_flip(const Triangulation& t, const FlipMove& move)
{
    Triangulation out = t;
    out.flip(move.edge, !move.clockwise);
    return out;
}

Triangulation apply_flip_move(const Triangulation& t, const FlipMove& move)
{
    if (move.edge < 0 || move.edge >= t.edge_count()) {
        throw UsageError("flip move names edge " + std::to_string(move.edge) +
                         " but the surface has " + std::to_string(t.edge_count()) + " edges");
    }
    if (t.quad_boundary(move.edge) != move.boundary) {
        throw UsageError("flip move on edge " + std::to_string(move.edge) +
                         " does not match the current quad");
    }
    Triangulation out = t;
    out.flip(move.edge, move.clockwise);
    return out;
}

}  // namespace hypconf
