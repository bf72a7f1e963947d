#include "syk/kernel.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace syk {

int CoreDiagram::white_degree(int w) const { return std::popcount(white_colors[w]); }

long CoreDiagram::excess() const
{
    long edges = 0;
    for (const auto& cv : colored) edges += static_cast<long>(cv.corners.size());
    return edges - num_white - static_cast<long>(colored.size()) + 1;
}

int tree_size(const TreeCode& code) { return static_cast<int>(std::count(code.begin(), code.end(), 1)); }

// ---------------------------------------------------------------------------
// Core extraction and reassembly

namespace {

struct PrunedView {
    const Constellation& s;
    std::vector<int> owner;
    std::vector<int> position;

    explicit PrunedView(const Constellation& c) : s(c), owner(c.edge_owner()), position(c.num_edges(), -1)
    {
        for (const auto& cv : c.colored)
            for (int t = 0; t < static_cast<int>(cv.corners.size()); ++t) position[cv.corners[t]] = t;
    }

    // Corners of the colored vertex of edge e, starting right after e.
    std::vector<int> corners_after(int e) const
    {
        const auto& corners = s.colored[owner[e]].corners;
        const int p = static_cast<int>(corners.size());
        std::vector<int> out;
        for (int t = 1; t < p; ++t) out.push_back(corners[(position[e] + t) % p]);
        return out;
    }

    void encode(const std::vector<int>& sequence, TreeCode& code) const
    {
        for (int e : sequence) {
            code.push_back(1);
            const auto [u, i] = s.edge(e);
            for (int j = 1; j <= s.q; ++j)
                if (j != i) encode(corners_after(s.edge_id(u, j)), code);
        }
        code.push_back(0);
    }
};

}  // namespace

CoreDecomposition core(const Constellation& s)
{
    const int q = s.q;
    const int n = s.num_white;
    const int c_count = static_cast<int>(s.colored.size());
    const PrunedView view(s);

    std::vector<int> white_deg(n, q);
    std::vector<int> colored_deg(c_count);
    for (int c = 0; c < c_count; ++c) colored_deg[c] = static_cast<int>(s.colored[c].corners.size());
    std::vector<char> edge_alive(s.num_edges(), 1);
    std::vector<char> white_alive(n, 1);
    std::vector<char> colored_alive(c_count, 1);

    // Vertex refs: whites w, colored n + c.
    std::vector<int> stack;
    for (int w = 0; w < n; ++w)
        if (w != s.root && white_deg[w] == 1) stack.push_back(w);
    for (int c = 0; c < c_count; ++c)
        if (colored_deg[c] == 1) stack.push_back(n + c);
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        if (x < n) {
            if (!white_alive[x] || white_deg[x] != 1) continue;
            int e = -1;
            for (int i = 1; i <= q; ++i)
                if (edge_alive[s.edge_id(x, i)]) e = s.edge_id(x, i);
            white_alive[x] = 0;
            edge_alive[e] = 0;
            const int c = view.owner[e];
            if (--colored_deg[c] == 1) stack.push_back(n + c);
        } else {
            const int c = x - n;
            if (!colored_alive[c] || colored_deg[c] != 1) continue;
            int e = -1;
            for (int f : s.colored[c].corners)
                if (edge_alive[f]) e = f;
            colored_alive[c] = 0;
            edge_alive[e] = 0;
            const int w = s.edge(e).white;
            if (--white_deg[w] == 1 && w != s.root) stack.push_back(w);
        }
    }

    CoreDecomposition out;
    CoreDiagram& cd = out.core;
    cd.q = q;
    std::vector<int> new_white(n, -1);
    for (int w = 0; w < n; ++w) {
        if (!white_alive[w]) continue;
        new_white[w] = cd.num_white++;
        out.white_origin.push_back(w);
        ColorMask mask = 0;
        for (int i = 1; i <= q; ++i)
            if (edge_alive[s.edge_id(w, i)]) mask |= color_bit(i);
        cd.white_colors.push_back(mask);
    }
    cd.root = new_white[s.root];

    for (int w : out.white_origin)
        for (int i = 1; i <= q; ++i)
            if (!edge_alive[s.edge_id(w, i)]) {
                TreeCode code;
                view.encode(view.corners_after(s.edge_id(w, i)), code);
                out.trees.push_back(std::move(code));
            }

    for (int c = 0; c < c_count; ++c) {
        if (!colored_alive[c]) continue;
        const auto& corners = s.colored[c].corners;
        const int p = static_cast<int>(corners.size());
        ColoredVertex cv;
        cv.color = s.colored[c].color;
        std::vector<int> core_positions;
        for (int t = 0; t < p; ++t)
            if (edge_alive[corners[t]]) {
                core_positions.push_back(t);
                const auto [w, i] = s.edge(corners[t]);
                cv.corners.push_back(cd.edge_id(new_white[w], i));
            }
        const int d = static_cast<int>(core_positions.size());
        for (int k = 0; k < d; ++k) {
            const int begin = core_positions[k];
            const int end = k + 1 < d ? core_positions[k + 1] : core_positions[0] + p;
            std::vector<int> sequence;
            for (int t = begin + 1; t < end; ++t) sequence.push_back(corners[t % p]);
            TreeCode code;
            view.encode(sequence, code);
            out.trees.push_back(std::move(code));
        }
        cd.colored.push_back(std::move(cv));
    }
    return out;
}

namespace {

struct Assembler {
    Constellation& out;
    const TreeCode* code = nullptr;
    std::size_t pos = 0;

    // Expand one slot of color i; returns the edge ids to splice into the corner.
    std::vector<int> expand(int i)
    {
        std::vector<int> edges;
        for (;;) {
            if (pos >= code->size()) throw std::invalid_argument("assemble: truncated tree code");
            if ((*code)[pos++] == 0) break;
            const int u = out.num_white++;
            edges.push_back(u * out.q + (i - 1));
            for (int j = 1; j <= out.q; ++j) {
                if (j == i) continue;
                ColoredVertex pendant;
                pendant.color = j;
                pendant.corners.push_back(u * out.q + (j - 1));
                const auto inner = expand(j);
                pendant.corners.insert(pendant.corners.end(), inner.begin(), inner.end());
                out.colored.push_back(std::move(pendant));
            }
        }
        return edges;
    }

    std::vector<int> expand_slot(const TreeCode& slot, int i)
    {
        code = &slot;
        pos = 0;
        auto edges = expand(i);
        if (pos != slot.size()) throw std::invalid_argument("assemble: trailing data in tree code");
        return edges;
    }
};

}  // namespace

Constellation assemble(const CoreDiagram& cd, const std::vector<TreeCode>& trees)
{
    if (static_cast<int>(trees.size()) != cd.slot_count())
        throw std::invalid_argument("assemble: need exactly q trees per core white");
    const int q = cd.q;
    Constellation out;
    out.q = q;
    out.num_white = cd.num_white;
    out.root = cd.root;
    Assembler asm_state{out};
    std::size_t slot = 0;
    for (int w = 0; w < cd.num_white; ++w)
        for (int i = 1; i <= q; ++i)
            if (!(cd.white_colors[w] & color_bit(i))) {
                ColoredVertex leaf;
                leaf.color = i;
                leaf.corners.push_back(w * q + (i - 1));
                const auto inner = asm_state.expand_slot(trees[slot++], i);
                leaf.corners.insert(leaf.corners.end(), inner.begin(), inner.end());
                out.colored.push_back(std::move(leaf));
            }
    for (const auto& cv : cd.colored) {
        ColoredVertex v;
        v.color = cv.color;
        for (int e : cv.corners) {
            v.corners.push_back(e);
            const auto inner = asm_state.expand_slot(trees[slot++], cv.color);
            v.corners.insert(v.corners.end(), inner.begin(), inner.end());
        }
        out.colored.push_back(std::move(v));
    }
    // edge ids were built with the final q, so they stay valid as whites are appended
    return out;
}

// ---------------------------------------------------------------------------
// Chains

std::vector<Chain> chains(const CoreDiagram& c)
{
    const int q = c.q;
    const int n = c.num_white;
    std::vector<int> owner(n * q, -1);
    for (int k = 0; k < static_cast<int>(c.colored.size()); ++k)
        for (int e : c.colored[k].corners) owner[e] = k;

    auto degree = [&](int ref) {
        return ref < n ? c.white_degree(ref) : static_cast<int>(c.colored[ref - n].corners.size());
    };
    auto is_kernel = [&](int ref) { return ref == c.root || degree(ref) >= 3; };
    auto other_end = [&](int ref, int e) { return ref < n ? n + owner[e] : c.edge(e).white; };
    auto incident = [&](int ref) {
        std::vector<int> edges;
        if (ref < n) {
            for (int i = 1; i <= q; ++i)
                if (c.white_colors[ref] & color_bit(i)) edges.push_back(c.edge_id(ref, i));
        } else {
            edges = c.colored[ref - n].corners;
        }
        return edges;
    };
    auto end_color = [&](int ref, int e) { return ref < n ? c.edge(e).color : c.colored[ref - n].color; };

    std::vector<char> used(n * q, 0);
    std::vector<Chain> out;
    const int total = n + static_cast<int>(c.colored.size());
    for (int x = 0; x < total; ++x) {
        if (!is_kernel(x)) continue;
        for (int e0 : incident(x)) {
            if (used[e0]) continue;
            Chain ch;
            ch.from = x;
            ch.from_kind = x < n ? EndKind::kWhite : EndKind::kColored;
            ch.from_color = end_color(x, e0);
            if (x >= n) ch.walk.push_back(c.colored[x - n].color);
            int cur = x;
            int e = e0;
            for (;;) {
                used[e] = 1;
                ch.edges.push_back(e);
                const int y = other_end(cur, e);
                if (y >= n) ch.walk.push_back(c.colored[y - n].color);
                if (is_kernel(y)) {
                    ch.to = y;
                    ch.to_kind = y < n ? EndKind::kWhite : EndKind::kColored;
                    ch.to_color = end_color(y, e);
                    break;
                }
                ch.internal.push_back(y);
                const auto next = incident(y);
                e = next[0] == e ? next[1] : next[0];
                cur = y;
            }
            out.push_back(std::move(ch));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kernel diagrams

KernelDiagram root_only_kernel(int q)
{
    KernelDiagram k;
    k.q = q;
    k.vertex_color = {0};
    k.rotation = {{}};
    return k;
}

long excess(const KernelDiagram& k) { return static_cast<long>(k.num_edges()) - k.num_vertices() + 1; }

std::optional<std::string> validate(const KernelDiagram& k)
{
    const int v_count = k.num_vertices();
    if (k.q < 2) return "q must be at least 2";
    if (v_count == 0 || k.vertex_color[0] != 0) return "vertex 0 must be the white root";
    if (static_cast<int>(k.rotation.size()) != v_count) return "one rotation per vertex required";
    const int h_count = static_cast<int>(k.half_vertex.size());
    if (h_count % 2 != 0 || static_cast<int>(k.half_color.size()) != h_count) return "bad half-edge arrays";
    std::vector<int> seen(h_count, 0);
    for (int v = 0; v < v_count; ++v) {
        const int color = k.vertex_color[v];
        if (color < 0 || color > k.q) return "vertex color out of range";
        if (v != 0 && k.degree(v) < 3) return "non-root vertex of valency below 3";
        int last = 0;
        for (int h : k.rotation[v]) {
            if (h < 0 || h >= h_count) return "half-edge out of range";
            if (k.half_vertex[h] != v) return "rotation lists a foreign half-edge";
            ++seen[h];
            const int hc = k.half_color[h];
            if (hc < 1 || hc > k.q) return "half-edge color out of range";
            if (color == 0) {
                if (hc <= last) return "white half-edges must have distinct ascending colors";
                last = hc;
            } else if (hc != color) {
                return "half-edge color differs from its colored vertex";
            }
        }
    }
    for (int h = 0; h < h_count; ++h)
        if (seen[h] != 1) return "half-edge missing from rotations";
    std::vector<int> parent(v_count);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int e = 0; e < k.num_edges(); ++e) parent[find(k.half_vertex[2 * e])] = find(k.half_vertex[2 * e + 1]);
    for (int v = 0; v < v_count; ++v)
        if (find(v) != find(0)) return "disconnected";
    return std::nullopt;
}

namespace {

KernelDiagram canonical_form_mapped(const KernelDiagram& k, std::vector<int>* half_map)
{
    const int v_count = k.num_vertices();
    const int h_count = static_cast<int>(k.half_vertex.size());
    std::vector<int> new_index(v_count, -1);
    std::vector<int> entry(v_count, -1);
    std::vector<int> new_half(h_count, -1);
    std::vector<int> queue{0};
    new_index[0] = 0;
    int next_edge = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        const auto& rot = k.rotation[v];
        const int d = static_cast<int>(rot.size());
        int start = 0;
        if (!k.is_white(v)) start = static_cast<int>(std::find(rot.begin(), rot.end(), entry[v]) - rot.begin());
        for (int t = 0; t < d; ++t) {
            const int h = rot[(start + t) % d];
            if (new_half[h] >= 0) continue;
            const int p = h ^ 1;
            new_half[h] = 2 * next_edge;
            new_half[p] = 2 * next_edge + 1;
            ++next_edge;
            const int u = k.half_vertex[p];
            if (new_index[u] < 0) {
                new_index[u] = static_cast<int>(queue.size());
                queue.push_back(u);
                entry[u] = p;
            }
        }
    }
    if (static_cast<int>(queue.size()) != v_count) throw std::invalid_argument("kernel: disconnected diagram");

    KernelDiagram out;
    out.q = k.q;
    out.vertex_color.resize(v_count);
    out.rotation.resize(v_count);
    out.half_vertex.resize(h_count);
    out.half_color.resize(h_count);
    for (int v = 0; v < v_count; ++v) {
        const int nv = new_index[v];
        out.vertex_color[nv] = k.vertex_color[v];
        const auto& rot = k.rotation[v];
        const int d = static_cast<int>(rot.size());
        int start = 0;
        if (!k.is_white(v) && d > 0)
            start = static_cast<int>(std::find(rot.begin(), rot.end(), entry[v]) - rot.begin());
        for (int t = 0; t < d; ++t) out.rotation[nv].push_back(new_half[rot[(start + t) % d]]);
    }
    for (int h = 0; h < h_count; ++h) {
        out.half_vertex[new_half[h]] = new_index[k.half_vertex[h]];
        out.half_color[new_half[h]] = k.half_color[h];
    }
    if (half_map) *half_map = std::move(new_half);
    return out;
}

}  // namespace

KernelDiagram canonical_form(const KernelDiagram& k) { return canonical_form_mapped(k, nullptr); }

KernelWithWalks kernel_with_walks(const CoreDiagram& c)
{
    const int n = c.num_white;
    const auto all = chains(c);
    std::vector<int> refs{c.root};
    for (const auto& ch : all)
        for (int r : {ch.from, ch.to})
            if (std::find(refs.begin(), refs.end(), r) == refs.end()) refs.push_back(r);
    std::sort(refs.begin() + 1, refs.end());
    auto index_of = [&](int r) { return static_cast<int>(std::find(refs.begin(), refs.end(), r) - refs.begin()); };

    KernelDiagram k;
    k.q = c.q;
    for (int r : refs) k.vertex_color.push_back(r < n ? 0 : c.colored[r - n].color);
    k.rotation.resize(refs.size());
    // Core edge at each end of each half-edge, to order colored rotations.
    std::vector<int> core_edge_of_half;
    for (const auto& ch : all) {
        k.half_vertex.push_back(index_of(ch.from));
        k.half_vertex.push_back(index_of(ch.to));
        k.half_color.push_back(ch.from_color);
        k.half_color.push_back(ch.to_color);
        core_edge_of_half.push_back(ch.edges.front());
        core_edge_of_half.push_back(ch.edges.back());
    }
    const int h_count = static_cast<int>(k.half_vertex.size());
    for (int v = 0; v < static_cast<int>(refs.size()); ++v) {
        auto& rot = k.rotation[v];
        for (int h = 0; h < h_count; ++h)
            if (k.half_vertex[h] == v) rot.push_back(h);
        if (k.is_white(v)) {
            std::sort(rot.begin(), rot.end(), [&](int a, int b) { return k.half_color[a] < k.half_color[b]; });
        } else {
            const auto& corners = c.colored[refs[v] - n].corners;
            auto pos = [&](int h) {
                return std::find(corners.begin(), corners.end(), core_edge_of_half[h]) - corners.begin();
            };
            std::sort(rot.begin(), rot.end(), [&](int a, int b) { return pos(a) < pos(b); });
        }
    }

    std::vector<int> half_map;
    KernelWithWalks out;
    out.kernel = canonical_form_mapped(k, &half_map);
    out.walks.resize(all.size());
    for (std::size_t e = 0; e < all.size(); ++e) {
        auto walk = all[e].walk;
        const int h = half_map[2 * e];
        if (h % 2 == 1) std::reverse(walk.begin(), walk.end());
        out.walks[h / 2] = std::move(walk);
    }
    return out;
}

KernelDiagram kernel(const CoreDiagram& c) { return kernel_with_walks(c).kernel; }

CoreDiagram expand_kernel(const KernelDiagram& k, const std::vector<std::vector<int>>& walks)
{
    const int q = k.q;
    if (static_cast<int>(walks.size()) != k.num_edges())
        throw std::invalid_argument("expand_kernel: one walk per kernel edge required");
    CoreDiagram c;
    c.q = q;
    c.root = 0;
    std::vector<int> ref(k.num_vertices());
    for (int v = 0; v < k.num_vertices(); ++v)
        if (k.is_white(v)) ref[v] = c.num_white++;
    for (int v = 0; v < k.num_vertices(); ++v)
        if (!k.is_white(v)) {
            ref[v] = static_cast<int>(c.colored.size());
            c.colored.push_back({k.vertex_color[v], {}});
        }
    c.white_colors.assign(c.num_white, 0);

    std::vector<int> corner_of_half(k.half_vertex.size(), -1);
    auto add_edge = [&](int w, int color) {
        c.white_colors[w] |= color_bit(color);
        return c.edge_id(w, color);
    };
    auto new_white = [&] {
        c.white_colors.push_back(0);
        return c.num_white++;
    };
    // c.edge_id depends on q only, so whites may be appended freely.
    for (int e = 0; e < k.num_edges(); ++e) {
        const auto& x = walks[e];
        const int h0 = 2 * e;
        const int h1 = 2 * e + 1;
        const int u = k.half_vertex[h0];
        const int v = k.half_vertex[h1];
        const int s = static_cast<int>(x.size()) - 1;
        if (s < 0 || x.front() != k.half_color[h0] || x.back() != k.half_color[h1])
            throw std::invalid_argument("expand_kernel: walk does not match half-edge colors");
        for (int t = 0; t < s; ++t)
            if (x[t] == x[t + 1] || x[t] < 1 || x[t] > q)
                throw std::invalid_argument("expand_kernel: consecutive walk colors must differ");
        if (s == 0 && !k.is_white(u) && !k.is_white(v))
            throw std::invalid_argument("expand_kernel: colored endpoints need an internal white");

        int prev_white = k.is_white(u) ? ref[u] : -1;
        for (int t = 0; t <= s; ++t) {
            const bool at_u = t == 0 && !k.is_white(u);
            const bool at_v = t == s && !k.is_white(v);
            const int next_white = t < s ? new_white() : (k.is_white(v) ? ref[v] : -1);
            if (at_u) {
                corner_of_half[h0] = add_edge(next_white, x[t]);
            } else if (at_v) {
                corner_of_half[h1] = add_edge(prev_white, x[t]);
            } else {
                ColoredVertex mid;
                mid.color = x[t];
                mid.corners = {add_edge(prev_white, x[t]), add_edge(next_white, x[t])};
                c.colored.push_back(std::move(mid));
            }
            prev_white = next_white;
        }
    }
    for (int v = 0; v < k.num_vertices(); ++v)
        if (!k.is_white(v))
            for (int h : k.rotation[v]) c.colored[ref[v]].corners.push_back(corner_of_half[h]);
    return c;
}

std::string brute_force_key(const KernelDiagram& k)
{
    const int v_count = k.num_vertices();
    if (v_count > 8) throw std::length_error("brute_force_key: kernel too large");
    std::vector<int> perm(v_count);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> colored;
    for (int v = 0; v < v_count; ++v)
        if (!k.is_white(v)) colored.push_back(v);
    std::vector<int> position(k.half_vertex.size());
    for (int v = 0; v < v_count; ++v)
        for (int t = 0; t < k.degree(v); ++t) position[k.rotation[v][t]] = t;

    std::string best;
    bool have_best = false;
    do {
        std::vector<int> offset(v_count, 0);
        for (;;) {
            // perm[i] is the old vertex placed at new index i.
            std::vector<int> new_of(v_count);
            for (int i = 0; i < v_count; ++i) new_of[perm[i]] = i;
            auto address = [&](int h) {
                const int v = k.half_vertex[h];
                const int slot = k.is_white(v) ? k.half_color[h]
                                               : (position[h] - offset[v] + k.degree(v)) % k.degree(v);
                return std::pair<int, int>{new_of[v], slot};
            };
            std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> edges;
            for (int e = 0; e < k.num_edges(); ++e) {
                auto a = address(2 * e);
                auto b = address(2 * e + 1);
                if (b < a) std::swap(a, b);
                edges.push_back({a, b});
            }
            std::sort(edges.begin(), edges.end());
            std::ostringstream key;
            for (int i = 0; i < v_count; ++i) key << k.vertex_color[perm[i]] << ':' << k.degree(perm[i]) << ';';
            key << '|';
            for (const auto& [a, b] : edges)
                key << a.first << ',' << a.second << '-' << b.first << ',' << b.second << ';';
            std::string s = key.str();
            if (!have_best || s < best) {
                best = std::move(s);
                have_best = true;
            }
            std::size_t idx = 0;
            while (idx < colored.size()) {
                const int v = colored[idx];
                if (++offset[v] < k.degree(v)) break;
                offset[v] = 0;
                ++idx;
            }
            if (idx == colored.size()) break;
        }
    } while (std::next_permutation(perm.begin() + 1, perm.end()));
    return best;
}

EdgeStats edge_stats(const KernelDiagram& k)
{
    EdgeStats s;
    for (int v = 0; v < k.num_vertices(); ++v) (k.is_white(v) ? s.white_vertices : s.colored_vertices)++;
    s.edges = k.num_edges();
    for (int e = 0; e < k.num_edges(); ++e) {
        const int whites = k.is_white(k.half_vertex[2 * e]) + k.is_white(k.half_vertex[2 * e + 1]);
        const bool equal = k.half_color[2 * e] == k.half_color[2 * e + 1];
        switch (whites) {
        case 0: (equal ? s.cc_equal : s.cc_unequal)++; break;
        case 1: (equal ? s.cw_equal : s.cw_unequal)++; break;
        default: (equal ? s.ww_equal : s.ww_unequal)++; break;
        }
    }
    return s;
}

KernelSignature signature(const EdgeStats& s)
{
    return {s.cc_equal, s.cw_equal + s.ww_equal, s.edges, s.white_vertices};
}

int chain_class(const KernelDiagram& k, int e)
{
    if (k.half_color[2 * e] != k.half_color[2 * e + 1]) return 0;
    const bool both_colored = !k.is_white(k.half_vertex[2 * e]) && !k.is_white(k.half_vertex[2 * e + 1]);
    return both_colored ? 2 : 1;
}

bool is_dominant(const KernelDiagram& k)
{
    if (k.num_edges() == 0 || k.degree(0) != 1) return false;
    for (int v = 1; v < k.num_vertices(); ++v)
        if (k.degree(v) != 3) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Orderly enumeration: kernels are built in the order the canonical traversal
// visits them, so every isomorphism class is produced exactly once.

namespace {

class KernelGenerator {
public:
    KernelGenerator(int q, int delta, bool dominant_only, const std::function<void(const KernelDiagram&)>& visit)
        : q_(q), delta_(delta), dominant_only_(dominant_only), visit_(visit)
    {
    }

    void run()
    {
        if (delta_ == 0) {
            visit_(root_only_kernel(q_));
            return;
        }
        const int max_root = std::min(q_, 2 * delta_);
        for (ColorMask set = 1; set < color_bit(q_); ++set) {
            const ColorMask colors = set << 1;
            const int d = std::popcount(colors);
            if (d > max_root) continue;
            if (dominant_only_ && d != 1) continue;
            add_white(colors, -1);
            step(0, 0);
            remove_vertex();
        }
    }

private:
    struct Vertex {
        int color;
        std::vector<int> slot_color;
        std::vector<int> label;
    };

    int twice_excess() const { return degree_sum_ - 2 * static_cast<int>(vertices_.size()) + 2; }

    // Adds a white with the given colors; its slot of color entry_color (if any) is left
    // for the caller to label. Returns the entry slot index.
    int add_white(ColorMask colors, int entry_color)
    {
        Vertex v{0, {}, {}};
        int entry = -1;
        for (int c = 1; c <= q_; ++c)
            if (colors & color_bit(c)) {
                if (c == entry_color) entry = static_cast<int>(v.slot_color.size());
                v.slot_color.push_back(c);
            }
        v.label.assign(v.slot_color.size(), -1);
        degree_sum_ += static_cast<int>(v.slot_color.size());
        vertices_.push_back(std::move(v));
        return entry;
    }

    void add_colored(int color, int degree)
    {
        vertices_.push_back(Vertex{color, std::vector<int>(degree, color), std::vector<int>(degree, -1)});
        degree_sum_ += degree;
    }

    void remove_vertex()
    {
        degree_sum_ -= static_cast<int>(vertices_.back().slot_color.size());
        vertices_.pop_back();
    }

    void emit()
    {
        KernelDiagram k;
        k.q = q_;
        k.half_vertex.assign(2 * edges_, -1);
        k.half_color.assign(2 * edges_, 0);
        for (int v = 0; v < static_cast<int>(vertices_.size()); ++v) {
            const auto& vx = vertices_[v];
            k.vertex_color.push_back(vx.color);
            k.rotation.push_back(vx.label);
            for (std::size_t t = 0; t < vx.label.size(); ++t) {
                k.half_vertex[vx.label[t]] = v;
                k.half_color[vx.label[t]] = vx.slot_color[t];
            }
        }
        visit_(k);
    }

    void step(int vi, int si)
    {
        while (vi < static_cast<int>(vertices_.size())) {
            if (si >= static_cast<int>(vertices_[vi].label.size())) {
                ++vi;
                si = 0;
            } else if (vertices_[vi].label[si] >= 0) {
                ++si;
            } else {
                break;
            }
        }
        if (vi == static_cast<int>(vertices_.size())) {
            if (twice_excess() == 2 * delta_) emit();
            return;
        }
        const int h = 2 * edges_;
        vertices_[vi].label[si] = h;
        ++edges_;

        // Partner among the slots still open.
        for (int vj = vi; vj < static_cast<int>(vertices_.size()); ++vj) {
            auto& target = vertices_[vj];
            for (int sj = (vj == vi ? si + 1 : 0); sj < static_cast<int>(target.label.size()); ++sj) {
                if (target.label[sj] >= 0) continue;
                target.label[sj] = h + 1;
                step(vi, si + 1);
                vertices_[vj].label[sj] = -1;
            }
        }

        // Partner on a new vertex.
        const int budget = 2 * delta_ - twice_excess();
        // a new vertex of degree d raises twice the excess by d - 2
        const int max_degree = budget + 2;
        if (max_degree >= 3) {
            for (ColorMask set = 1; set < color_bit(q_); ++set) {
                const ColorMask colors = set << 1;
                const int d = std::popcount(colors);
                if (d < 3 || d > max_degree) continue;
                if (dominant_only_ && d != 3) continue;
                for (int entry = 1; entry <= q_; ++entry) {
                    if (!(colors & color_bit(entry))) continue;
                    const int slot = add_white(colors, entry);
                    vertices_.back().label[slot] = h + 1;
                    step(vi, si + 1);
                    remove_vertex();
                }
            }
            for (int color = 1; color <= q_; ++color)
                for (int d = 3; d <= max_degree; ++d) {
                    if (dominant_only_ && d != 3) continue;
                    add_colored(color, d);
                    vertices_.back().label[0] = h + 1;
                    step(vi, si + 1);
                    remove_vertex();
                }
        }

        --edges_;
        vertices_[vi].label[si] = -1;
    }

    int q_;
    int delta_;
    bool dominant_only_;
    const std::function<void(const KernelDiagram&)>& visit_;
    std::vector<Vertex> vertices_;
    int degree_sum_ = 0;
    int edges_ = 0;
};

}  // namespace

void enumerate_kernels(int q, int delta, const std::function<void(const KernelDiagram&)>& visit,
                       const KernelEnumerationOptions& options)
{
    if (q < 2) throw std::out_of_range("enumerate_kernels: q must be at least 2");
    if (delta < 0 || delta > kMaxKernelExcess)
        throw std::out_of_range("enumerate_kernels: excess must be in 0.." + std::to_string(kMaxKernelExcess));
    KernelGenerator gen(q, delta, options.dominant_only, visit);
    gen.run();
}

std::vector<KernelDiagram> kernel_catalog(int q, int delta, const KernelEnumerationOptions& options)
{
    std::vector<KernelDiagram> out;
    enumerate_kernels(q, delta, [&](const KernelDiagram& k) { out.push_back(k); }, options);
    return out;
}

Rational dominant_weighted_sum(int q, int delta)
{
    if (delta < 1) throw std::out_of_range("dominant_weighted_sum: excess must be positive");
    std::map<int, Integer> by_whites;
    enumerate_kernels(
        q, delta, [&](const KernelDiagram& k) { by_whites[edge_stats(k).white_vertices] += 1; }, {true});
    Rational total = 0;
    for (const auto& [w, count] : by_whites) {
        Integer denom;
        mpz_ui_pow_ui(denom.get_mpz_t(), q - 1, w);
        total += Rational(count, denom);
    }
    total.canonicalize();
    return total;
}

nlohmann::json to_json(const EdgeStats& s)
{
    return nlohmann::json{{"white_vertices", s.white_vertices},
                          {"colored_vertices", s.colored_vertices},
                          {"edges", s.edges},
                          {"cc_equal", s.cc_equal},
                          {"cc_unequal", s.cc_unequal},
                          {"cw_equal", s.cw_equal},
                          {"cw_unequal", s.cw_unequal},
                          {"ww_equal", s.ww_equal},
                          {"ww_unequal", s.ww_unequal},
                          {"equal", s.equal()},
                          {"unequal", s.unequal()}};
}

nlohmann::json to_json(const KernelDiagram& k)
{
    nlohmann::json vertices = nlohmann::json::array();
    for (int v = 0; v < k.num_vertices(); ++v)
        vertices.push_back({{"id", v},
                            {"kind", k.is_white(v) ? "white" : "colored"},
                            {"color", k.vertex_color[v]},
                            {"half_edges", k.rotation[v]}});
    nlohmann::json edges = nlohmann::json::array();
    for (int e = 0; e < k.num_edges(); ++e) edges.push_back({2 * e, 2 * e + 1});
    return nlohmann::json{{"q", k.q},
                          {"root", 0},
                          {"vertices", vertices},
                          {"edges", edges},
                          {"half_edge_vertex", k.half_vertex},
                          {"half_edge_colors", k.half_color},
                          {"excess", excess(k)},
                          {"dominant", is_dominant(k)},
                          {"stats", to_json(edge_stats(k))}};
}

nlohmann::json to_json(const CoreDiagram& c)
{
    nlohmann::json colored = nlohmann::json::array();
    for (const auto& cv : c.colored) colored.push_back({{"color", cv.color}, {"corners", cv.corners}});
    return nlohmann::json{{"q", c.q},
                          {"white", c.num_white},
                          {"white_colors", c.white_colors},
                          {"colored", colored},
                          {"root", c.root}};
}

}  // namespace syk
