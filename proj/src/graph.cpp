#include "syk/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace syk {

ColoredGraph::ColoredGraph(int q, std::vector<std::vector<int>> matchings, std::pair<int, int> root)
    : q_(q), matchings_(std::move(matchings)), root_(root)
{
}

ColoredGraph dipole_graph(int q)
{
    return ColoredGraph(q, std::vector<std::vector<int>>(q + 1, std::vector<int>{1, 0}), {0, 1});
}

std::optional<Violation> validate(const ColoredGraph& g)
{
    const int q = g.q();
    if (q < 1 || static_cast<int>(g.matchings().size()) != q + 1)
        return Violation{ViolationKind::kBadShape, -1, -1, "expected q >= 1 and q+1 matchings"};
    const int v_count = g.num_vertices();
    if (v_count == 0 || v_count % 2 != 0)
        return Violation{ViolationKind::kBadShape, -1, -1, "vertex count must be even and positive"};
    for (int c = 0; c <= q; ++c) {
        const auto& m = g.matching(c);
        if (static_cast<int>(m.size()) != v_count)
            return Violation{ViolationKind::kBadShape, c, -1, "matching size differs from vertex count"};
        for (int v = 0; v < v_count; ++v) {
            const int w = m[v];
            if (w < 0 || w >= v_count)
                return Violation{ViolationKind::kOutOfRange, c, v, "partner out of range"};
            if (w == v) return Violation{ViolationKind::kFixedPoint, c, v, "fixed point"};
            if (m[w] != v) return Violation{ViolationKind::kNotInvolution, c, v, "not an involution"};
        }
    }
    const auto [origin, end] = g.root();
    if (origin < 0 || origin >= v_count || end < 0 || end >= v_count || g.partner(0, origin) != end)
        return Violation{ViolationKind::kRootNotColorZero, 0, origin, "root is not a color-0 edge"};
    std::vector<int> labels;
    if (component_labels(g, g.all_colors(), labels) != 1) {
        const auto it = std::find(labels.begin(), labels.end(), 1);
        return Violation{ViolationKind::kDisconnected, -1, static_cast<int>(it - labels.begin()), "disconnected"};
    }
    return std::nullopt;
}

int component_labels(const ColoredGraph& g, ColorMask mask, std::vector<int>& labels)
{
    const int v_count = g.num_vertices();
    labels.assign(v_count, -1);
    std::vector<int> stack;
    int count = 0;
    for (int s = 0; s < v_count; ++s) {
        if (labels[s] >= 0) continue;
        labels[s] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int c = 0; c <= g.q(); ++c) {
                if (!(mask & color_bit(c))) continue;
                const int w = g.partner(c, u);
                if (labels[w] < 0) {
                    labels[w] = count;
                    stack.push_back(w);
                }
            }
        }
        ++count;
    }
    return count;
}

int cycle_count(const ColoredGraph& g, int i, int j)
{
    if (i < 0 || j < 0 || i > g.q() || j > g.q() || i == j)
        throw std::out_of_range("cycle_count: colors must be distinct and in 0..q");
    std::vector<int> labels;
    return component_labels(g, color_bit(i) | color_bit(j), labels);
}

int bicolored_cycle_count(const ColoredGraph& g, int i)
{
    if (i < 1 || i > g.q()) throw std::out_of_range("bicolored_cycle_count: color must be in 1..q");
    return cycle_count(g, 0, i);
}

int face_count_zero(const ColoredGraph& g)
{
    int total = 0;
    for (int i = 1; i <= g.q(); ++i) total += bicolored_cycle_count(g, i);
    return total;
}

long order(const ColoredGraph& g)
{
    return 1 + static_cast<long>(g.q() - 1) * (g.num_vertices() / 2) - face_count_zero(g);
}

ResidueSet residues(const ColoredGraph& g, int c)
{
    if (c < 0 || c > g.q()) throw std::out_of_range("residues: color must be in 0..q");
    std::vector<int> labels;
    const int count = component_labels(g, g.all_colors() & ~color_bit(c), labels);
    ResidueSet out;
    out.color_removed = c;
    out.components.resize(count);
    for (int v = 0; v < g.num_vertices(); ++v) out.components[labels[v]].push_back(v);
    return out;
}

bool is_syk(const ColoredGraph& g)
{
    std::vector<int> labels;
    return component_labels(g, g.all_colors() & ~color_bit(0), labels) == 1;
}

std::optional<std::vector<bool>> bipartition(const ColoredGraph& g)
{
    const int v_count = g.num_vertices();
    std::vector<int> side(v_count, -1);
    std::vector<int> stack;
    // Components are all reachable from the root in valid graphs, but stay total anyway.
    auto visit = [&](int s, int s_side) -> bool {
        side[s] = s_side;
        stack.push_back(s);
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int c = 0; c <= g.q(); ++c) {
                const int w = g.partner(c, u);
                if (side[w] < 0) {
                    side[w] = 1 - side[u];
                    stack.push_back(w);
                } else if (side[w] == side[u]) {
                    return false;
                }
            }
        }
        return true;
    };
    if (!visit(g.root().first, 1)) return std::nullopt;
    for (int v = 0; v < v_count; ++v)
        if (side[v] < 0 && !visit(v, 1)) return std::nullopt;
    std::vector<bool> black(v_count);
    for (int v = 0; v < v_count; ++v) black[v] = side[v] == 1;
    return black;
}

bool is_bipartite(const ColoredGraph& g) { return bipartition(g).has_value(); }

bool admissible_pair(const ColoredGraph& g, int u, int v)
{
    if (u < 0 || u >= g.num_vertices() || g.partner(0, u) != v)
        throw std::invalid_argument("admissible_pair: not a color-0 edge");
    std::vector<int> labels;
    component_labels(g, g.all_colors() & ~color_bit(0), labels);
    return labels[u] == labels[v];
}

Degree gurau_degree(const ColoredGraph& g)
{
    const long long q = g.q();
    long long faces = 0;
    for (int i = 0; i <= g.q(); ++i)
        for (int j = i + 1; j <= g.q(); ++j) faces += cycle_count(g, i, j);
    return Degree(q) + Degree(q * (q - 1) * g.num_vertices(), 4) - Degree(faces);
}

bool is_melonic(const ColoredGraph& g, ColorMask colors)
{
    std::vector<int> palette;
    for (int c = 0; c <= g.q(); ++c)
        if (colors & color_bit(c)) palette.push_back(c);
    const int k = static_cast<int>(palette.size());
    if (k == 0) return false;
    const int v_count = g.num_vertices();

    std::vector<std::vector<int>> m;
    m.reserve(k);
    for (int c : palette) m.push_back(g.matching(c));
    std::vector<char> alive(v_count, 1);

    // Returns the missing palette slot if u and its slot-s partner form a (k-1)-dipole,
    // k if they are joined by every color, -1 otherwise.
    auto dipole_with = [&](int u, int w) -> int {
        int shared = 0;
        int missing = -1;
        for (int s = 0; s < k; ++s) {
            if (m[s][u] == w)
                ++shared;
            else
                missing = s;
        }
        if (shared == k) return k;
        if (shared == k - 1) return missing;
        return -1;
    };

    std::vector<int> work(v_count);
    for (int v = 0; v < v_count; ++v) work[v] = v;
    while (!work.empty()) {
        const int u = work.back();
        work.pop_back();
        if (!alive[u]) continue;
        // Any (k-1)-dipole at u uses the slot-0 or the slot-1 partner.
        for (int probe = 0; probe < std::min(k, 2); ++probe) {
            const int w = m[probe][u];
            const int missing = dipole_with(u, w);
            if (missing < 0 || missing == k) continue;
            const int u_out = m[missing][u];
            const int w_out = m[missing][w];
            alive[u] = alive[w] = 0;
            m[missing][u_out] = w_out;
            m[missing][w_out] = u_out;
            work.push_back(u_out);
            work.push_back(w_out);
            break;
        }
    }
    for (int v = 0; v < v_count; ++v)
        if (alive[v] && dipole_with(v, m[0][v]) != k) return false;
    return true;
}

std::vector<int> canonical_labeling(const ColoredGraph& g)
{
    const int v_count = g.num_vertices();
    const auto sides = bipartition(g);
    std::vector<int> label(v_count, -1);
    std::vector<int> order_of;  // inverse of label
    order_of.reserve(v_count);
    auto assign_pair = [&](int discovered) {
        int first = discovered;
        int second = g.partner(0, discovered);
        if (sides && !(*sides)[first]) std::swap(first, second);
        label[first] = static_cast<int>(order_of.size());
        order_of.push_back(first);
        label[second] = static_cast<int>(order_of.size());
        order_of.push_back(second);
    };
    const auto [origin, end] = g.root();
    label[origin] = 0;
    label[end] = 1;
    order_of.push_back(origin);
    order_of.push_back(end);
    for (std::size_t head = 0; head < order_of.size(); ++head) {
        const int u = order_of[head];
        for (int c = 1; c <= g.q(); ++c) {
            const int w = g.partner(c, u);
            if (label[w] < 0) assign_pair(w);
        }
    }
    // Unreachable vertices (invalid input) keep their relative order at the end.
    for (int v = 0; v < v_count; ++v)
        if (label[v] < 0) assign_pair(v);
    return label;
}

ColoredGraph relabel(const ColoredGraph& g, const std::vector<int>& new_label)
{
    std::vector<std::vector<int>> m(g.num_colors(), std::vector<int>(g.num_vertices()));
    for (int c = 0; c <= g.q(); ++c)
        for (int v = 0; v < g.num_vertices(); ++v) m[c][new_label[v]] = new_label[g.partner(c, v)];
    return ColoredGraph(g.q(), std::move(m), {new_label[g.root().first], new_label[g.root().second]});
}

ColoredGraph canonical_form(const ColoredGraph& g) { return relabel(g, canonical_labeling(g)); }

nlohmann::json to_json(const ColoredGraph& g)
{
    return nlohmann::json{{"q", g.q()},
                          {"vertices", g.num_vertices()},
                          {"matchings", g.matchings()},
                          {"root", {g.root().first, g.root().second}}};
}

ColoredGraph graph_from_json(const nlohmann::json& j)
{
    const int q = j.at("q").get<int>();
    auto m = j.at("matchings").get<std::vector<std::vector<int>>>();
    const auto r = j.at("root").get<std::vector<int>>();
    if (r.size() != 2) throw std::invalid_argument("graph json: root must have two entries");
    if (j.contains("vertices")) {
        const int v_count = j.at("vertices").get<int>();
        for (const auto& row : m)
            if (static_cast<int>(row.size()) != v_count)
                throw std::invalid_argument("graph json: matching length differs from vertices");
    }
    return ColoredGraph(q, std::move(m), {r[0], r[1]});
}

std::string to_dot(const ColoredGraph& g)
{
    std::ostringstream out;
    out << "graph G {\n";
    for (int v = 0; v < g.num_vertices(); ++v) out << "  " << v << ";\n";
    for (int c = 0; c <= g.q(); ++c) {
        for (int v = 0; v < g.num_vertices(); ++v) {
            const int w = g.partner(c, v);
            if (v > w) continue;
            out << "  " << v << " -- " << w << " [color=" << c;
            if (c == 0 && ((v == g.root().first && w == g.root().second) ||
                           (w == g.root().first && v == g.root().second)))
                out << ", root=true";
            out << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace syk
