#pragma once

// Closed triangulated surfaces given by side gluings. Self-gluings, multiple
// edges between the same vertices and one-vertex triangulations are all fine.
//
// Conventions: side (t, i) runs from corner i to corner (i + 1) % 3 of
// triangle t, so the corner opposite side i is (i + 2) % 3. Gluings always
// reverse side orientation; every accepted surface is therefore orientable.

#include <array>
#include <compare>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace hypconf {

struct SideRef {
    int triangle = 0;
    int side = 0;

    auto operator<=>(const SideRef&) const = default;
};

struct Corner {
    int triangle = 0;
    int corner = 0;

    auto operator<=>(const Corner&) const = default;
};

using Gluing = std::pair<SideRef, SideRef>;

// One diagonal switch. The flipped edge keeps its id, so new_edge == edge;
// the field exists so logs stay self-describing. `boundary` lists the four
// outer sides of the quad before the move, in the order q->r, r->p, p->s, s->q
// where the edge runs p->q in its first side's triangle.
struct FlipMove {
    int edge = -1;
    std::array<SideRef, 4> boundary{};
    int new_edge = -1;
    // A clockwise move is the exact inverse of a counter-clockwise one.
    bool clockwise = false;

    bool operator==(const FlipMove&) const = default;
};

class Triangulation;

// Flip ancestry: replaying `flips` on `root` reproduces the triangulation
// that owns this lineage.
struct Lineage {
    std::shared_ptr<const Triangulation> root;
    std::vector<FlipMove> flips;
};

class Triangulation {
public:
    // Validates the gluing and derives edges and vertices. Edge i is the
    // i-th gluing pair. Vertex ids follow the first corner met in
    // (triangle, corner) order unless `corner_vertices` fixes them.
    static Triangulation build(int triangle_count, const std::vector<Gluing>& gluing,
                               const std::optional<std::vector<std::array<int, 3>>>&
                                   corner_vertices = std::nullopt);

    int triangle_count() const { return static_cast<int>(corner_vertex_.size()); }
    int edge_count() const { return static_cast<int>(edge_sides_.size()); }
    int vertex_count() const { return vertex_count_; }
    int euler_characteristic() const { return vertex_count() - edge_count() + triangle_count(); }
    int genus() const { return (2 - euler_characteristic()) / 2; }

    SideRef partner(SideRef s) const { return decode(partner_[code(s)]); }
    int side_edge(SideRef s) const { return side_edge_[code(s)]; }
    const std::array<SideRef, 2>& edge_sides(int e) const { return edge_sides_.at(e); }
    int corner_vertex(int triangle, int corner) const { return corner_vertex_[triangle][corner]; }
    const std::array<int, 3>& triangle_vertices(int t) const { return corner_vertex_.at(t); }
    // The gluing list in edge order; build(triangle_count(), gluing()) with
    // the same corner vertices reproduces this triangulation.
    std::vector<Gluing> gluing() const;
    const std::vector<std::array<int, 3>>& corner_vertices() const { return corner_vertex_; }
    // Whether the corner vertex table is the one build() would derive.
    bool has_canonical_vertex_ids() const;

    // Endpoints of edge e as seen from its first side: {start, end}.
    std::array<int, 2> edge_vertices(int e) const;
    // Both sides of e lie in one triangle.
    bool is_folded(int e) const;
    // Corners around v in rotation order.
    std::vector<Corner> vertex_corners(int v) const;
    // Outer sides of the quad around e, in FlipMove::boundary order.
    std::array<SideRef, 4> quad_boundary(int e) const;

    // Structural equality; lineage is ignored.
    bool operator==(const Triangulation& other) const;

    const Lineage& lineage() const { return lineage_; }
    // The triangulation this one descends from (itself when it has no recorded
    // ancestry), without lineage.
    Triangulation root() const;
    // Drops the recorded ancestry; the triangulation becomes its own root.
    void reset_lineage() { lineage_ = {}; }
    void set_lineage(Lineage lineage) { lineage_ = std::move(lineage); }

    // Switches the diagonal e in place and records the move in the lineage
    // (an immediate inverse cancels the last recorded move instead).
    FlipMove flip(int e, bool clockwise = false);

private:
    static int code(SideRef s) { return 3 * s.triangle + s.side; }
    static SideRef decode(int c) { return {c / 3, c % 3}; }

    std::vector<int> partner_;
    std::vector<int> side_edge_;
    std::vector<std::array<SideRef, 2>> edge_sides_;
    std::vector<std::array<int, 3>> corner_vertex_;
    int vertex_count_ = 0;
    Lineage lineage_;
};

// Counter-clockwise diagonal switch of edge e.
std::pair<Triangulation, FlipMove> flip_combinatorial(const Triangulation& t, int e);
// Undoes `move`, which must be the last move applied to produce `t`.
Triangulation inverse_flip(const Triangulation& t, const FlipMove& move);
// Applies a recorded move; its boundary must match the current quad.
Triangulation apply_flip_move(const Triangulation& t, const FlipMove& move);
// The inverse of a move, as a move on the post-flip triangulation.
FlipMove inverted(const Triangulation& after, const FlipMove& move);

std::vector<Corner> vertex_corners(const Triangulation& t, int v);

}  // namespace hypconf
