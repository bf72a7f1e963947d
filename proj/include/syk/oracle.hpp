#pragma once

#include <functional>
#include <map>
#include <string>

#include "syk/graph.hpp"
#include "syk/numeric.hpp"

namespace syk {

enum class Family { kBipartite, kGeneral };

/// Brute-force work above this many tuples is refused.
inline constexpr double kOracleTupleLimit = 2.5e8;

struct EnumerationStats {
    Integer tuples;      // tuples scanned
    Integer connected;   // connected tuples
    Integer classes;     // canonical tuples visited
    Integer orbit_size;  // size of every orbit of connected tuples
    /// connected / orbit_size, the orbit count by the Burnside lemma (all stabilizers trivial).
    Integer burnside_classes() const { return connected / orbit_size; }
};

using GraphVisitor = std::function<void(const ColoredGraph&)>;

/// Every rooted bipartite class with 2n vertices, once, in canonical form. Classes are
/// orbits of connected q-tuples of permutations of {0..n-1} under conjugation fixing 0.
/// Shards run on `threads` workers; the visitor is called sequentially in a fixed order.
/// Throws std::length_error beyond kOracleTupleLimit.
EnumerationStats enumerate_bipartite(int q, int n, const GraphVisitor& visit, int threads = 1);

/// Every rooted class of possibly non-bipartite graphs with 2n vertices. Color 0 is
/// fixed to the pairs (2k, 2k+1); colors 1..q run over all perfect matchings.
EnumerationStats enumerate_general(int q, int n, const GraphVisitor& visit, int threads = 1);

struct CountRow {
    Integer total;
    Integer syk;
    Integer melonic;
    Integer bipartite;

    friend bool operator==(const CountRow&, const CountRow&) = default;
};

struct CountTable {
    int q = 0;
    int n = 0;
    Family family = Family::kBipartite;
    std::map<long, CountRow> rows;  // keyed by order
    EnumerationStats stats;

    Integer total() const;
    std::string to_tsv(bool header = true) const;
};

CountTable count_table(int q, int n, Family family, int threads = 1);

/// Parallelism requested through the environment (SYKENUM_THREADS), else hardware
/// concurrency, at least 1.
int default_threads();

}  // namespace syk
