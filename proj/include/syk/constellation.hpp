#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "syk/graph.hpp"

namespace syk {

/// An edge of a constellation joins white vertex `white` to the color-`color`
/// vertex on that white's color-`color` side. Its id is white * q + (color - 1).
struct ConstellationEdge {
    int white;
    int color;
};

struct ColoredVertex {
    int color = 0;
    /// Incident edge ids in counterclockwise order.
    std::vector<int> corners;

    friend bool operator==(const ColoredVertex&, const ColoredVertex&) = default;
};

/// Rooted q-constellation: white vertices 0..n-1 each carrying one edge of every
/// color 1..q (not embedded), colored vertices with a cyclic corner order, and a
/// distinguished root white vertex.
struct Constellation {
    int q = 0;
    int num_white = 0;
    std::vector<ColoredVertex> colored;
    int root = 0;

    int edge_id(int white, int color) const { return white * q + (color - 1); }
    ConstellationEdge edge(int id) const { return {id / q, id % q + 1}; }
    int num_edges() const { return num_white * q; }

    /// Colored-vertex index per edge id.
    std::vector<int> edge_owner() const;

    friend bool operator==(const Constellation&, const Constellation&) = default;
};

struct SignedConstellation {
    Constellation base;
    /// +1 or -1 per edge id.
    std::vector<int> signs;

    friend bool operator==(const SignedConstellation&, const SignedConstellation&) = default;
};

/// Description of the first broken invariant, or nullopt.
std::optional<std::string> validate(const Constellation& s);

/// E - V + 1 over white and colored vertices (equals (q-1)n - #colored + 1).
long excess(const Constellation& s);

bool is_tree(const Constellation& s);

/// Contract color-0 edges, then star-subdivide every color-i cycle. The input is
/// canonicalized first, so white vertex k of the result is the color-0 pair
/// (2k, 2k+1) of canonical_form(g). Throws std::invalid_argument if g is not bipartite.
Constellation psi(const ColoredGraph& g);

/// Inverse of psi without relabeling: white w becomes black 2w and white 2w+1.
ColoredGraph psi_inverse_raw(const Constellation& s);

/// canonical_form(psi_inverse_raw(s)).
ColoredGraph psi_inverse(const Constellation& s);

/// Relabel whites by breadth-first search from the root (successors around each color,
/// then predecessors), order colored vertices by (color, smallest white) and rotate
/// each corner list to start at its smallest white.
Constellation canonical_form(const Constellation& s);

/// Same relabeling applied to a signed constellation; signs travel with their edges.
SignedConstellation canonical_form(const SignedConstellation& s);

/// Orientation choices that, together with a rooted colored graph, determine a signed
/// colored graph: one bit per non-root color-0 edge (indexed by canonical pair 1..n-1)
/// and one bit per color-0i cycle (colors ascending, cycles by smallest pair).
struct OrientationChoice {
    std::vector<bool> edge_flip;   // size n - 1
    std::vector<bool> cycle_flip;  // size F_0
};

/// Forward signed bijection. The graph is canonicalized first; pair k = (2k, 2k+1)
/// has origin 2k unless edge_flip[k-1] is set.
SignedConstellation psi_hat(const ColoredGraph& g, const OrientationChoice& choice);

/// Inverse signed bijection; returns the canonical form of the graph.
ColoredGraph psi_hat_inverse(const SignedConstellation& s);
ColoredGraph psi_hat_inverse_raw(const SignedConstellation& s);

nlohmann::json to_json(const Constellation& s);
Constellation constellation_from_json(const nlohmann::json& j);

}  // namespace syk
