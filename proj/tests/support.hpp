#pragma once

#include <map>
#include <utility>
#include <vector>

#include "syk/constellation.hpp"
#include "syk/graph.hpp"
#include "syk/oracle.hpp"

namespace syk::test {

// Two dipoles joined by the color-0 pairs (0,2) and (1,3).
inline ColoredGraph double_dipole(int q)
{
    std::vector<std::vector<int>> m(q + 1, std::vector<int>{1, 0, 3, 2});
    m[0] = {2, 3, 0, 1};
    return ColoredGraph(q, std::move(m), {0, 2});
}

// Dipole with a color-1 melon inserted.
inline ColoredGraph melon_insertion()
{
    return ColoredGraph(3, {{1, 0, 3, 2}, {2, 3, 0, 1}, {1, 0, 3, 2}, {1, 0, 3, 2}}, {0, 1});
}

// Whites 0..n-1; colored vertices given as (color, whites in ccw order). Missing edges become leaves.
inline Constellation make_constellation(int q, int n, const std::vector<std::pair<int, std::vector<int>>>& colored)
{
    Constellation s;
    s.q = q;
    s.num_white = n;
    std::vector<bool> used(q * n, false);
    for (const auto& [c, whites] : colored) {
        ColoredVertex v;
        v.color = c;
        for (int w : whites) {
            v.corners.push_back(s.edge_id(w, c));
            used[s.edge_id(w, c)] = true;
        }
        s.colored.push_back(v);
    }
    for (int e = 0; e < q * n; ++e)
        if (!used[e]) s.colored.push_back({s.edge(e).color, {e}});
    return s;
}

// Bipartite classes of q=3 for each size up to n_max, computed once.
inline const std::vector<ColoredGraph>& bipartite_classes(int n)
{
    static std::map<int, std::vector<ColoredGraph>> cache;
    auto& v = cache[n];
    if (v.empty()) enumerate_bipartite(3, n, [&](const ColoredGraph& g) { v.push_back(g); });
    return v;
}

}  // namespace syk::test
