#include <gtest/gtest.h>

#include "syk/oracle.hpp"
#include "syk/series.hpp"

using namespace syk;

TEST(Oracle, SmallestSizes)
{
    long classes = 0;
    enumerate_bipartite(3, 1, [&](const ColoredGraph& g) {
        ++classes;
        EXPECT_EQ(g, dipole_graph(3));
    });
    EXPECT_EQ(classes, 1);
    classes = 0;
    enumerate_general(3, 1, [&](const ColoredGraph&) { ++classes; });
    EXPECT_EQ(classes, 1);

    const CountTable t = count_table(3, 1, Family::kBipartite);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows.at(0).total, 1);
    EXPECT_EQ(t.rows.at(0).syk, 1);
    EXPECT_EQ(count_table(3, 2, Family::kBipartite).rows.at(0).total, 3);
}

// Canonical representatives and the orbit count connected / orbit_size agree.
TEST(Oracle, BurnsideRecount)
{
    for (int n = 1; n <= 5; ++n) {
        const auto stats = enumerate_bipartite(3, n, [](const ColoredGraph&) {});
        EXPECT_EQ(stats.classes, stats.burnside_classes()) << n;
        Integer all = 1;
        for (int k = 0; k < 3; ++k) all *= factorial(n);
        EXPECT_EQ(stats.tuples, all);
    }
    for (int n = 1; n <= 3; ++n) {
        const auto stats = enumerate_general(3, n, [](const ColoredGraph&) {});
        EXPECT_EQ(stats.classes, stats.burnside_classes()) << n;
    }
}

TEST(Oracle, GeneralIsTwoToTheOrderTimesBipartite)
{
    for (int n = 1; n <= 3; ++n) {
        const CountTable b = count_table(3, n, Family::kBipartite);
        const CountTable g = count_table(3, n, Family::kGeneral);
        for (const auto& [delta, row] : g.rows) {
            const Integer bip = b.rows.count(delta) ? b.rows.at(delta).total : Integer(0);
            // the bipartite column of the general census is the bipartite census
            EXPECT_EQ(row.bipartite, bip);
            if (delta <= 1) EXPECT_EQ(row.total, bip * (1 << delta)) << n << ' ' << delta;
        }
    }
}

TEST(Oracle, SeriesAgreesUpToFour)
{
    for (int n = 1; n <= 4; ++n) {
        const CountTable t = count_table(3, n, Family::kBipartite);
        for (int delta = 0; delta <= 3; ++delta) {
            const Integer oracle = t.rows.count(delta) ? t.rows.at(delta).total : Integer(0);
            EXPECT_EQ(Rational(oracle), graphs_series(3, delta, n).coefficient(n)) << n << ' ' << delta;
        }
    }
}

TEST(Oracle, SykFractionGrows)
{
    // relative shortfall (g - c) / g does not grow with n at fixed order
    for (int delta = 1; delta <= 2; ++delta) {
        Rational previous = 1;
        for (int n = 2; n <= 5; ++n) {
            const CountTable t = count_table(3, n, Family::kBipartite);
            if (!t.rows.count(delta)) continue;
            const auto& row = t.rows.at(delta);
            EXPECT_LE(row.syk, row.total);
            const Rational gap = Rational(row.total - row.syk) / Rational(row.total);
            EXPECT_LE(gap, previous) << n << ' ' << delta;
            previous = gap;
        }
    }
}

TEST(Oracle, ThreadCountDoesNotMatter)
{
    const CountTable a = count_table(3, 4, Family::kBipartite, 1);
    const CountTable b = count_table(3, 4, Family::kBipartite, 3);
    EXPECT_EQ(a.to_tsv(), b.to_tsv());
    EXPECT_EQ(a.rows, b.rows);
}

TEST(Oracle, Tsv)
{
    const std::string tsv = count_table(3, 2, Family::kBipartite).to_tsv();
    EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "n\tdelta\ttotal\tsyk\tmelonic");
    const std::string general = count_table(3, 2, Family::kGeneral).to_tsv();
    EXPECT_EQ(general.substr(0, general.find('\n')), "n\tdelta\ttotal\tsyk\tmelonic\tbipartite");
}

TEST(Oracle, RefusesHugeSizes)
{
    EXPECT_THROW(enumerate_bipartite(3, 9, [](const ColoredGraph&) {}), std::length_error);
    try {
        enumerate_general(3, 6, [](const ColoredGraph&) {});
        FAIL();
    } catch (const std::length_error& e) {
        EXPECT_NE(std::string(e.what()).find("limit"), std::string::npos);
    }
}
