#include "syk/constellation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace syk {

std::vector<int> Constellation::edge_owner() const
{
    std::vector<int> owner(num_edges(), -1);
    for (int c = 0; c < static_cast<int>(colored.size()); ++c)
        for (int e : colored[c].corners) owner[e] = c;
    return owner;
}

std::optional<std::string> validate(const Constellation& s)
{
    if (s.q < 1) return "q must be positive";
    if (s.num_white < 1) return "at least one white vertex required";
    if (s.root < 0 || s.root >= s.num_white) return "root out of range";
    std::vector<int> seen(s.num_edges(), 0);
    for (const auto& cv : s.colored) {
        if (cv.color < 1 || cv.color > s.q) return "colored vertex color out of range";
        if (cv.corners.empty()) return "colored vertex without edges";
        for (int e : cv.corners) {
            if (e < 0 || e >= s.num_edges()) return "edge id out of range";
            if (s.edge(e).color != cv.color) return "edge color differs from its colored vertex";
            ++seen[e];
        }
    }
    for (int e = 0; e < s.num_edges(); ++e)
        if (seen[e] != 1) return "every white vertex needs exactly one edge of each color";

    // Connectivity over whites: two whites meet iff they share a colored vertex.
    std::vector<int> parent(s.num_white);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& cv : s.colored)
        for (int e : cv.corners) parent[find(s.edge(e).white)] = find(s.edge(cv.corners[0]).white);
    for (int w = 0; w < s.num_white; ++w)
        if (find(w) != find(0)) return "disconnected";
    return std::nullopt;
}

long excess(const Constellation& s)
{
    const long edges = s.num_edges();
    const long vertices = s.num_white + static_cast<long>(s.colored.size());
    return edges - vertices + 1;
}

bool is_tree(const Constellation& s) { return excess(s) == 0; }

Constellation psi(const ColoredGraph& input)
{
    if (!is_bipartite(input)) throw std::invalid_argument("psi: graph is not bipartite");
    const ColoredGraph g = canonical_form(input);
    const int q = g.q();
    const int n = g.num_vertices() / 2;
    Constellation s;
    s.q = q;
    s.num_white = n;
    s.root = 0;
    std::vector<char> visited(n);
    for (int i = 1; i <= q; ++i) {
        std::fill(visited.begin(), visited.end(), 0);
        for (int start = 0; start < n; ++start) {
            if (visited[start]) continue;
            ColoredVertex cv;
            cv.color = i;
            int k = start;
            do {
                visited[k] = 1;
                cv.corners.push_back(s.edge_id(k, i));
                k = g.partner(i, 2 * k) / 2;
            } while (k != start);
            s.colored.push_back(std::move(cv));
        }
    }
    return s;
}

ColoredGraph psi_inverse_raw(const Constellation& s)
{
    const int q = s.q;
    const int v_count = 2 * s.num_white;
    std::vector<std::vector<int>> m(q + 1, std::vector<int>(v_count, -1));
    for (int w = 0; w < s.num_white; ++w) {
        m[0][2 * w] = 2 * w + 1;
        m[0][2 * w + 1] = 2 * w;
    }
    for (const auto& cv : s.colored) {
        const int p = static_cast<int>(cv.corners.size());
        for (int t = 0; t < p; ++t) {
            const int from = s.edge(cv.corners[t]).white;
            const int to = s.edge(cv.corners[(t + 1) % p]).white;
            m[cv.color][2 * from] = 2 * to + 1;
            m[cv.color][2 * to + 1] = 2 * from;
        }
    }
    return ColoredGraph(q, std::move(m), {2 * s.root, 2 * s.root + 1});
}

ColoredGraph psi_inverse(const Constellation& s) { return canonical_form(psi_inverse_raw(s)); }

namespace {

struct WhiteRelabeling {
    std::vector<int> new_white;
};

WhiteRelabeling constellation_labeling(const Constellation& s)
{
    const int q = s.q;
    const auto owner = s.edge_owner();
    std::vector<int> position(s.num_edges(), -1);
    for (const auto& cv : s.colored)
        for (int t = 0; t < static_cast<int>(cv.corners.size()); ++t) position[cv.corners[t]] = t;

    WhiteRelabeling out;
    out.new_white.assign(s.num_white, -1);
    std::vector<int> queue{s.root};
    out.new_white[s.root] = 0;
    auto discover = [&](int w) {
        if (out.new_white[w] >= 0) return;
        out.new_white[w] = static_cast<int>(queue.size());
        queue.push_back(w);
    };
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int w = queue[head];
        for (int step : {1, -1}) {
            for (int i = 1; i <= q; ++i) {
                const int e = s.edge_id(w, i);
                const auto& corners = s.colored[owner[e]].corners;
                const int p = static_cast<int>(corners.size());
                const int t = (position[e] + step + p) % p;
                discover(s.edge(corners[t]).white);
            }
        }
    }
    for (int w = 0; w < s.num_white; ++w) discover(w);
    return out;
}

Constellation apply_labeling(const Constellation& s, const WhiteRelabeling& r, std::vector<int>* edge_map)
{
    Constellation out;
    out.q = s.q;
    out.num_white = s.num_white;
    out.root = r.new_white[s.root];
    if (edge_map) edge_map->assign(s.num_edges(), -1);
    for (const auto& cv : s.colored) {
        ColoredVertex nv;
        nv.color = cv.color;
        for (int e : cv.corners) {
            const auto edge = s.edge(e);
            const int ne = out.edge_id(r.new_white[edge.white], edge.color);
            nv.corners.push_back(ne);
            if (edge_map) (*edge_map)[e] = ne;
        }
        const auto min_it = std::min_element(nv.corners.begin(), nv.corners.end());
        std::rotate(nv.corners.begin(), min_it, nv.corners.end());
        out.colored.push_back(std::move(nv));
    }
    std::sort(out.colored.begin(), out.colored.end(), [](const ColoredVertex& a, const ColoredVertex& b) {
        if (a.color != b.color) return a.color < b.color;
        return a.corners.front() < b.corners.front();
    });
    return out;
}

}  // namespace

Constellation canonical_form(const Constellation& s)
{
    return apply_labeling(s, constellation_labeling(s), nullptr);
}

SignedConstellation canonical_form(const SignedConstellation& s)
{
    std::vector<int> edge_map;
    SignedConstellation out;
    out.base = apply_labeling(s.base, constellation_labeling(s.base), &edge_map);
    out.signs.assign(s.signs.size(), 0);
    for (std::size_t e = 0; e < s.signs.size(); ++e) out.signs[edge_map[e]] = s.signs[e];
    return out;
}

SignedConstellation psi_hat(const ColoredGraph& input, const OrientationChoice& choice)
{
    const ColoredGraph g = canonical_form(input);
    const int q = g.q();
    const int n = g.num_vertices() / 2;
    if (static_cast<int>(choice.edge_flip.size()) != n - 1)
        throw std::invalid_argument("psi_hat: need one edge orientation bit per non-root color-0 edge");

    // origin[k] is the color-0 origin ("a" port) of pair k.
    std::vector<int> origin(n);
    for (int k = 0; k < n; ++k) origin[k] = (k > 0 && choice.edge_flip[k - 1]) ? 2 * k + 1 : 2 * k;

    SignedConstellation out;
    out.base.q = q;
    out.base.num_white = n;
    out.base.root = 0;
    out.signs.assign(n * q, 0);
    std::size_t cycle_index = 0;
    std::vector<char> visited(n);
    for (int i = 1; i <= q; ++i) {
        std::fill(visited.begin(), visited.end(), 0);
        for (int start = 0; start < n; ++start) {
            if (visited[start]) continue;
            if (cycle_index >= choice.cycle_flip.size())
                throw std::invalid_argument("psi_hat: too few cycle orientation bits");
            const bool flip = choice.cycle_flip[cycle_index++];
            ColoredVertex cv;
            cv.color = i;
            int w = start;
            int exit_port = flip ? g.partner(0, origin[w]) : origin[w];
            for (;;) {
                visited[w] = 1;
                const int e = out.base.edge_id(w, i);
                cv.corners.push_back(e);
                out.signs[e] = exit_port == origin[w] ? 1 : -1;
                const int entry = g.partner(i, exit_port);
                const int next = entry / 2;
                if (next == start) break;
                w = next;
                exit_port = g.partner(0, entry);
            }
            out.base.colored.push_back(std::move(cv));
        }
    }
    if (cycle_index != choice.cycle_flip.size())
        throw std::invalid_argument("psi_hat: need one orientation bit per color-0i cycle");
    return canonical_form(out);
}

ColoredGraph psi_hat_inverse_raw(const SignedConstellation& s)
{
    const Constellation& c = s.base;
    const int v_count = 2 * c.num_white;
    std::vector<std::vector<int>> m(c.q + 1, std::vector<int>(v_count, -1));
    for (int w = 0; w < c.num_white; ++w) {
        m[0][2 * w] = 2 * w + 1;
        m[0][2 * w + 1] = 2 * w;
    }
    for (const auto& cv : c.colored) {
        const int p = static_cast<int>(cv.corners.size());
        for (int t = 0; t < p; ++t) {
            const int e_from = cv.corners[t];
            const int e_to = cv.corners[(t + 1) % p];
            const int from = c.edge(e_from).white;
            const int to = c.edge(e_to).white;
            const int exit_port = s.signs[e_from] > 0 ? 2 * from : 2 * from + 1;
            const int entry_port = s.signs[e_to] > 0 ? 2 * to + 1 : 2 * to;
            m[cv.color][exit_port] = entry_port;
            m[cv.color][entry_port] = exit_port;
        }
    }
    return ColoredGraph(c.q, std::move(m), {2 * c.root, 2 * c.root + 1});
}

ColoredGraph psi_hat_inverse(const SignedConstellation& s)
{
    if (auto err = validate(s.base)) throw std::invalid_argument("psi_hat_inverse: " + *err);
    if (static_cast<int>(s.signs.size()) != s.base.num_edges())
        throw std::invalid_argument("psi_hat_inverse: one sign per edge required");
    return canonical_form(psi_hat_inverse_raw(s));
}

nlohmann::json to_json(const Constellation& s)
{
    nlohmann::json colored = nlohmann::json::array();
    for (const auto& cv : s.colored) colored.push_back({{"color", cv.color}, {"corners", cv.corners}});
    const auto owner = s.edge_owner();
    nlohmann::json edges = nlohmann::json::array();
    for (int e = 0; e < s.num_edges(); ++e) {
        const auto edge = s.edge(e);
        edges.push_back({{"id", e}, {"white", edge.white}, {"color", edge.color}, {"colored", owner[e]}});
    }
    std::vector<int> whites(s.num_white);
    std::iota(whites.begin(), whites.end(), 0);
    return nlohmann::json{{"q", s.q}, {"white", whites}, {"colored", colored}, {"edges", edges}, {"root", s.root}};
}

Constellation constellation_from_json(const nlohmann::json& j)
{
    Constellation s;
    s.q = j.at("q").get<int>();
    s.num_white = static_cast<int>(j.at("white").size());
    s.root = j.at("root").get<int>();
    for (const auto& cv : j.at("colored"))
        s.colored.push_back({cv.at("color").get<int>(), cv.at("corners").get<std::vector<int>>()});
    return s;
}

}  // namespace syk
