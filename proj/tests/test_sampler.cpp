#include <algorithm>
#include <map>

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <nlohmann/json.hpp>

#include "support.hpp"
#include "syk/sampler.hpp"
#include "syk/series.hpp"

using namespace syk;

namespace {

double chi_square_p(const std::map<std::vector<std::uint8_t>, long>& counts, long cells, long draws)
{
    const double expected = static_cast<double>(draws) / cells;
    double stat = 0;
    for (const auto& [k, c] : counts) stat += (c - expected) * (c - expected) / expected;
    stat += (cells - static_cast<long>(counts.size())) * expected;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(cells - 1), stat));
}

}  // namespace

TEST(Sampler, ForestCount)
{
    EXPECT_EQ(forest_count(3, 0, 0), 1);
    EXPECT_EQ(forest_count(3, 0, 2), 0);
    EXPECT_EQ(forest_count(3, 1, 3), 12);  // Fuss-Catalan
    EXPECT_EQ(forest_count(3, 2, 2), 7);
}

TEST(Sampler, ForestIsUniform)
{
    Rng rng(11);
    std::map<std::vector<std::uint8_t>, long> counts;
    const int draws = 70000;
    for (int t = 0; t < draws; ++t) {
        const auto forest = sample_forest(3, 2, 2, rng);
        ASSERT_EQ(forest.size(), 2u);
        std::vector<std::uint8_t> flat;
        int whites = 0;
        for (const auto& tree : forest) {
            whites += tree_size(tree);
            flat.insert(flat.end(), tree.begin(), tree.end());
            flat.push_back(9);
        }
        ASSERT_EQ(whites, 2);
        ++counts[flat];
    }
    EXPECT_EQ(counts.size(), 7u);
    EXPECT_GT(chi_square_p(counts, 7, draws), 1e-3);
}

TEST(Sampler, WalksAreUniform)
{
    Rng rng(5);
    std::map<std::vector<std::uint8_t>, long> counts;
    const int draws = 40000;
    for (int t = 0; t < draws; ++t) {
        const auto w = sample_walk(3, 5, 1, 2, rng);
        ASSERT_EQ(w.size(), 6u);
        ASSERT_EQ(w.front(), 1);
        ASSERT_EQ(w.back(), 2);
        for (int k = 1; k < 6; ++k) ASSERT_NE(w[k], w[k - 1]);
        ++counts[std::vector<std::uint8_t>(w.begin(), w.end())];
    }
    const long cells = walk_count(3, 5, false).get_si();
    EXPECT_EQ(static_cast<long>(counts.size()), cells);
    EXPECT_GT(chi_square_p(counts, cells, draws), 1e-3);
    EXPECT_EQ(sample_walk(3, 0, 2, 2, rng), std::vector<int>{2});
    EXPECT_THROW(sample_walk(3, 1, 2, 2, rng), std::invalid_argument);
}

TEST(Sampler, TablesCountEverything)
{
    for (int delta = 0; delta <= 2; ++delta) {
        const Series g = graphs_series(3, delta, 30);
        for (int n : {1, 2, 5, 12, 30}) {
            const SamplerTables t = build_tables(3, delta, n);
            EXPECT_EQ(Rational(t.total), g.coefficient(n)) << delta << ' ' << n;
            Integer by_kernel = 0;
            for (int gi = 0; gi < static_cast<int>(t.groups.size()); ++gi)
                by_kernel += t.kernel_count(gi) * static_cast<unsigned long>(t.groups[gi].kernels.size());
            EXPECT_EQ(by_kernel, t.total);
        }
    }
    EXPECT_EQ(build_tables(3, 0, 4).groups.size(), 1u);
}

TEST(Sampler, KernelCountsAddUpToOracle)
{
    const SamplerTables t = build_tables(3, 1, 5);
    EXPECT_EQ(t.total, count_table(3, 5, Family::kBipartite).rows.at(1).total);
}

TEST(Sampler, EmptySupportIsRefused)
{
    const SamplerTables t = build_tables(3, 1, 1);
    EXPECT_EQ(t.total, 0);
    Rng rng(1);
    EXPECT_THROW(sample_constellation(t, rng), std::domain_error);
}

TEST(Sampler, SamplesHaveTheRequestedOrder)
{
    for (int delta = 0; delta <= 3; ++delta) {
        const SamplerTables t = build_tables(3, delta, 40);
        Rng rng(derive_seed(99, delta));
        for (int k = 0; k < 200; ++k) {
            const Constellation s = sample_constellation(t, rng);
            ASSERT_FALSE(validate(s).has_value());
            EXPECT_EQ(s.num_white, 40);
            EXPECT_EQ(excess(s), delta);
            const ColoredGraph g = psi_inverse(s);
            EXPECT_TRUE(is_bipartite(g));
            EXPECT_EQ(order(g), delta);
            const ColoredGraph h = sample_graph(t, rng, Family::kGeneral);
            ASSERT_FALSE(validate(h).has_value());
            EXPECT_EQ(order(h), delta);
        }
    }
}

TEST(Sampler, TreesAreSykAndMelonic)
{
    const SamplerTables t = build_tables(3, 0, 30);
    const SampleReport r = survey(t, 300, 4, {Family::kBipartite, true, 1});
    EXPECT_EQ(r.syk, 300);
    EXPECT_EQ(r.gurau_matches, 300);
    EXPECT_EQ(r.handles_complete, 300);
    EXPECT_EQ(r.handle_count_histogram.at(0), 300);
}

TEST(Sampler, SurveyIgnoresThreadCount)
{
    const SamplerTables t = build_tables(3, 2, 60);
    const auto a = to_json(survey(t, 400, 17, {Family::kBipartite, true, 1}));
    const auto b = to_json(survey(t, 400, 17, {Family::kBipartite, true, 3}));
    EXPECT_EQ(a.dump(), b.dump());
    const auto c = to_json(survey(t, 400, 17, {Family::kGeneral, false, 1}));
    const auto d = to_json(survey(t, 400, 17, {Family::kGeneral, false, 4}));
    EXPECT_EQ(c.dump(), d.dump());
    EXPECT_EQ(a["seed"], 17);
}

namespace {

// S restricted to colors i and j is a forest.
bool bicolored_forest(const Constellation& s, int i, int j)
{
    long vertices = s.num_white;
    long edges = 0;
    for (const auto& cv : s.colored)
        if (cv.color == i || cv.color == j) {
            ++vertices;
            edges += static_cast<long>(cv.corners.size());
        }
    std::vector<int> parent(s.num_white + s.colored.size());
    for (std::size_t k = 0; k < parent.size(); ++k) parent[k] = static_cast<int>(k);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x];
        return x;
    };
    long components = vertices;
    for (std::size_t k = 0; k < s.colored.size(); ++k) {
        const auto& cv = s.colored[k];
        if (cv.color != i && cv.color != j) continue;
        for (int e : cv.corners) {
            const int a = find(s.num_white + static_cast<int>(k));
            const int b = find(s.edge(e).white);
            if (a != b) {
                parent[a] = b;
                --components;
            }
        }
    }
    return edges == vertices - components;
}

}  // namespace

TEST(Certificates, HandleVertexAgreesWithForestCriterion)
{
    const SamplerTables t = build_tables(3, 2, 80);
    Rng rng(23);
    long agreed = 0;
    for (int k = 0; k < 300; ++k) {
        const Constellation s = sample_constellation(t, rng);
        const auto d = core(s);
        for (const auto& ch : chains(d.core)) {
            for (int ref : ch.internal) {
                if (ref >= d.core.num_white) continue;
                int colors[2];
                int found = 0;
                for (int c = 1; c <= 3; ++c)
                    if (d.core.white_colors[ref] & color_bit(c)) colors[found++] = c;
                ASSERT_EQ(found, 2);
                const int w = d.white_origin[ref];
                if (bicolored_forest(s, colors[0], colors[1])) {
                    EXPECT_TRUE(is_handle_vertex(s, w, colors[0], colors[1]));
                    ++agreed;
                }
            }
        }
    }
    EXPECT_GT(agreed, 100);
}

TEST(Certificates, DeletingAChainWhiteDropsExcessByOne)
{
    const SamplerTables t = build_tables(3, 2, 50);
    Rng rng(8);
    long checked = 0;
    for (int k = 0; k < 200; ++k) {
        const Constellation s = sample_constellation(t, rng);
        const auto d = core(s);
        const auto cs = chains(d.core);
        for (std::size_t c = 0; c < cs.size(); ++c) {
            // keep chains on a cycle: the ends stay connected through the other chains
            std::vector<int> reach{cs[c].from};
            for (std::size_t grown = 0; grown < reach.size(); ++grown)
                for (std::size_t o = 0; o < cs.size(); ++o) {
                    if (o == c) continue;
                    for (auto [a, b] : {std::pair{cs[o].from, cs[o].to}, std::pair{cs[o].to, cs[o].from}})
                        if (a == reach[grown] && std::find(reach.begin(), reach.end(), b) == reach.end())
                            reach.push_back(b);
                }
            const bool cycle = cs[c].from == cs[c].to ||
                               std::find(reach.begin(), reach.end(), cs[c].to) != reach.end();
            if (!cycle) continue;
            for (int ref : cs[c].internal) {
                if (ref >= d.core.num_white) continue;
                const Constellation cut = delete_white(s, d.white_origin[ref]);
                ASSERT_FALSE(validate(cut).has_value());
                EXPECT_EQ(excess(cut), excess(s) - 1);
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 100);
}

TEST(Certificates, TreeCertifiesTrivially)
{
    const Constellation s = psi(test::melon_insertion());
    const Certificates c = certify(s, 0);
    EXPECT_TRUE(c.chains_covered);
    EXPECT_TRUE(c.forests);
    EXPECT_TRUE(c.residues_melonic);
    EXPECT_EQ(c.handle_steps, 0);
    EXPECT_TRUE(c.all());
}
