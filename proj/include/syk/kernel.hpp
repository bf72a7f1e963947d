#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "syk/constellation.hpp"
#include "syk/numeric.hpp"

namespace syk {

/// Largest excess handled by the kernel catalog.
inline constexpr int kMaxKernelExcess = 3;

/// A constellation with its non-root leaves pruned. Whites may miss colors
/// (white_colors[w] has bit c set when the color-c edge survived); edge ids keep
/// the white * q + (c - 1) numbering of Constellation.
struct CoreDiagram {
    int q = 0;
    int num_white = 0;
    int root = 0;
    std::vector<ColorMask> white_colors;
    std::vector<ColoredVertex> colored;

    int edge_id(int white, int color) const { return white * q + (color - 1); }
    ConstellationEdge edge(int id) const { return {id / q, id % q + 1}; }
    int white_degree(int w) const;
    /// Total number of tree slots, q per white.
    int slot_count() const { return q * num_white; }
    long excess() const;

    friend bool operator==(const CoreDiagram&, const CoreDiagram&) = default;
};

/// Preorder code of a (possibly empty) sequence of pendant whites hanging in a corner:
/// 1 opens a white whose q children are its pendants for the other colors (ascending)
/// followed by the rest of the sequence; 0 closes an empty slot.
using TreeCode = std::vector<std::uint8_t>;

/// Number of whites encoded by a tree code.
int tree_size(const TreeCode& code);

struct CoreDecomposition {
    CoreDiagram core;
    /// Constellation white behind each core white.
    std::vector<int> white_origin;
    /// One code per slot. Slots are listed as: for each core white in order, its
    /// missing colors ascending; then for each core colored vertex in order, the corner
    /// following each of its core edges.
    std::vector<TreeCode> trees;
};

CoreDecomposition core(const Constellation& s);

/// Inverse of core(): hang trees[k] in slot k. Whites of the core keep their indices.
Constellation assemble(const CoreDiagram& core, const std::vector<TreeCode>& trees);

enum class EndKind { kWhite, kColored };

/// A maximal path of non-root valency-two core vertices. Core vertex references are
/// w for whites and num_white + k for colored vertex k.
struct Chain {
    int from = -1;
    int to = -1;
    EndKind from_kind = EndKind::kWhite;
    EndKind to_kind = EndKind::kWhite;
    int from_color = 0;
    int to_color = 0;
    /// Internal vertices in order from `from` to `to`.
    std::vector<int> internal;
    /// Colors of all colored vertices met from `from` to `to`, endpoints included;
    /// consecutive entries differ and the length is internal whites + 1.
    std::vector<int> walk;
    /// Core edge ids along the chain, in order.
    std::vector<int> edges;

    int internal_whites() const { return static_cast<int>(walk.size()) - 1; }
    bool equal_colors() const { return from_color == to_color; }
};

/// All chains, including the direct edges between kernel vertices (empty `internal`).
std::vector<Chain> chains(const CoreDiagram& c);

/// Multigraph on white (color 0) and colored vertices. Vertex 0 is the root, a white.
/// Half-edges 2e and 2e+1 form edge e. rotation[v] lists v's half-edges: by ascending
/// color at whites, counterclockwise at colored vertices.
struct KernelDiagram {
    int q = 0;
    std::vector<int> vertex_color;
    std::vector<std::vector<int>> rotation;
    std::vector<int> half_vertex;
    std::vector<int> half_color;

    int num_vertices() const { return static_cast<int>(vertex_color.size()); }
    int num_edges() const { return static_cast<int>(half_vertex.size()) / 2; }
    int degree(int v) const { return static_cast<int>(rotation[v].size()); }
    bool is_white(int v) const { return vertex_color[v] == 0; }

    friend bool operator==(const KernelDiagram&, const KernelDiagram&) = default;
};

KernelDiagram root_only_kernel(int q);

std::optional<std::string> validate(const KernelDiagram& k);
long excess(const KernelDiagram& k);

/// Kernel of a core, in canonical form. The root is the only vertex allowed to have
/// valency below 3.
KernelDiagram kernel(const CoreDiagram& c);

/// Kernel plus the walk of each kernel edge (walk e runs from half-edge 2e to 2e+1),
/// both in the canonical labeling.
struct KernelWithWalks {
    KernelDiagram kernel;
    std::vector<std::vector<int>> walks;
};
KernelWithWalks kernel_with_walks(const CoreDiagram& c);

/// Inverse: replace kernel edge e by the chain with colored-vertex colors walks[e].
/// Kernel vertices become the first whites / colored vertices of the result.
CoreDiagram expand_kernel(const KernelDiagram& k, const std::vector<std::vector<int>>& walks);

/// Relabel by a traversal from the root: half-edges of each vertex are scanned in
/// rotation order (from the entry half-edge at colored vertices), each new edge gets the
/// next index with the scanned side first, and new endpoints join the queue.
KernelDiagram canonical_form(const KernelDiagram& k);

/// Independent isomorphism key: minimal serialization over all root-fixing vertex
/// relabelings and rotations of colored vertices. Only for small kernels.
std::string brute_force_key(const KernelDiagram& k);

/// Edge counters. A dot stands for a colored endpoint, a circle for a white one;
/// "equal" means both half-edge colors coincide.
struct EdgeStats {
    int white_vertices = 0;
    int colored_vertices = 0;
    int edges = 0;
    int cc_equal = 0;
    int cc_unequal = 0;
    int cw_equal = 0;
    int cw_unequal = 0;
    int ww_equal = 0;
    int ww_unequal = 0;

    int equal() const { return cc_equal + cw_equal + ww_equal; }
    int unequal() const { return cc_unequal + cw_unequal + ww_unequal; }

    friend bool operator==(const EdgeStats&, const EdgeStats&) = default;
};

EdgeStats edge_stats(const KernelDiagram& k);

/// Data the kernel generating function depends on: a = colored-colored equal edges,
/// m = other equal edges, e = all edges, w = white vertices.
struct KernelSignature {
    int a = 0;
    int m = 0;
    int e = 0;
    int w = 0;

    friend auto operator<=>(const KernelSignature&, const KernelSignature&) = default;
};

KernelSignature signature(const EdgeStats& s);

/// Chain class of kernel edge e: 0 = unequal colors, 1 = equal colors with a white end,
/// 2 = equal colors between colored vertices.
int chain_class(const KernelDiagram& k, int e);

bool is_dominant(const KernelDiagram& k);

struct KernelEnumerationOptions {
    bool dominant_only = false;
};

/// Visit every kernel of excess delta once, in canonical form.
/// Throws std::out_of_range for delta outside [0, kMaxKernelExcess] or q < 2.
void enumerate_kernels(int q, int delta, const std::function<void(const KernelDiagram&)>& visit,
                       const KernelEnumerationOptions& options = {});

std::vector<KernelDiagram> kernel_catalog(int q, int delta, const KernelEnumerationOptions& options = {});

/// Sum over dominant kernels of (q-1)^(-white vertices).
Rational dominant_weighted_sum(int q, int delta);

nlohmann::json to_json(const KernelDiagram& k);
nlohmann::json to_json(const EdgeStats& s);
nlohmann::json to_json(const CoreDiagram& c);

}  // namespace syk
