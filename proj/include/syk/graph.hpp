#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>
#include <nlohmann/json_fwd.hpp>

namespace syk {

/// Bit c set means color c participates.
using ColorMask = std::uint32_t;

constexpr ColorMask color_bit(int c) { return ColorMask{1} << c; }

/// Rooted (q+1)-edge-colored graph. Color c is stored as a fixed-point-free
/// involution `matchings[c]` on the vertex indices 0..2n-1; the root is an
/// oriented color-0 edge (origin, end).
///
/// Construction does not validate; call validate() on untrusted input.
class ColoredGraph {
public:
    ColoredGraph() = default;
    ColoredGraph(int q, std::vector<std::vector<int>> matchings, std::pair<int, int> root);

    int q() const { return q_; }
    int num_colors() const { return q_ + 1; }
    int num_vertices() const { return matchings_.empty() ? 0 : static_cast<int>(matchings_[0].size()); }
    int partner(int color, int v) const { return matchings_[color][v]; }
    const std::vector<int>& matching(int color) const { return matchings_[color]; }
    const std::vector<std::vector<int>>& matchings() const { return matchings_; }
    std::pair<int, int> root() const { return root_; }

    ColorMask all_colors() const { return (color_bit(q_ + 1)) - 1; }

    friend bool operator==(const ColoredGraph&, const ColoredGraph&) = default;

private:
    int q_ = 0;
    std::vector<std::vector<int>> matchings_;
    std::pair<int, int> root_{0, 1};
};

/// The smallest graph: two vertices joined by all q+1 colors.
ColoredGraph dipole_graph(int q);

enum class ViolationKind {
    kBadShape,
    kOutOfRange,
    kFixedPoint,
    kNotInvolution,
    kRootNotColorZero,
    kDisconnected,
};

struct Violation {
    ViolationKind kind;
    int color = -1;
    int vertex = -1;
    std::string message;
};

/// First violated invariant, or nullopt when the graph is a valid rooted colored graph.
std::optional<Violation> validate(const ColoredGraph& g);

/// Number of connected components of the subgraph on colors {i, j}.
int cycle_count(const ColoredGraph& g, int i, int j);

/// F_{0i}: number of color-0i cycles.
int bicolored_cycle_count(const ColoredGraph& g, int i);

/// F_0 = sum over i of F_{0i}.
int face_count_zero(const ColoredGraph& g);

/// The order 1 + (q-1)V/2 - F_0.
long order(const ColoredGraph& g);

/// Component label per vertex using only colors in `mask`; returns the count.
int component_labels(const ColoredGraph& g, ColorMask mask, std::vector<int>& labels);

struct ResidueSet {
    int color_removed = 0;
    std::vector<std::vector<int>> components;
};

/// Connected components after deleting the color-c edges.
ResidueSet residues(const ColoredGraph& g, int c);

bool is_syk(const ColoredGraph& g);

/// Black/white side per vertex (true = black) with the root origin black, or
/// nullopt if the graph has an odd cycle.
std::optional<std::vector<bool>> bipartition(const ColoredGraph& g);
bool is_bipartite(const ColoredGraph& g);

/// Whether the endpoints of the color-0 edge {u, v} are joined by a path avoiding color 0.
/// Throws std::invalid_argument if {u, v} is not a color-0 edge.
bool admissible_pair(const ColoredGraph& g, int u, int v);

using Degree = boost::rational<long long>;

/// q + q(q-1)V/4 - sum_{i<j} F_ij. Integral for bipartite graphs.
Degree gurau_degree(const ColoredGraph& g);

/// True iff every connected component of the restriction to `colors` reduces to the
/// two-vertex graph by repeatedly removing pairs joined by |colors|-1 parallel edges.
bool is_melonic(const ColoredGraph& g, ColorMask colors);
inline bool is_melonic(const ColoredGraph& g) { return is_melonic(g, g.all_colors()); }

/// Relabeling new_label[v] produced by breadth-first search from the root edge.
/// Color-0 pairs receive consecutive labels (2k, 2k+1); in bipartite graphs the
/// black end gets the even label, otherwise the end discovered first does.
std::vector<int> canonical_labeling(const ColoredGraph& g);

/// Apply `new_label` to every matching and to the root.
ColoredGraph relabel(const ColoredGraph& g, const std::vector<int>& new_label);

/// Representative of the rooted isomorphism class (isomorphisms preserve colors and
/// the oriented root edge). Two graphs are isomorphic iff their canonical forms are equal.
ColoredGraph canonical_form(const ColoredGraph& g);

nlohmann::json to_json(const ColoredGraph& g);
ColoredGraph graph_from_json(const nlohmann::json& j);
std::string to_dot(const ColoredGraph& g);

}  // namespace syk
