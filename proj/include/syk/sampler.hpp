#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "syk/constellation.hpp"
#include "syk/kernel.hpp"
#include "syk/numeric.hpp"
#include "syk/oracle.hpp"

namespace syk {

/// Exact counting tables for drawing constellations of excess delta with n whites.
struct SamplerTables {
    struct Group {
        KernelSignature sig;
        std::vector<KernelDiagram> kernels;
        /// Kernel edge classes in the order chain lengths are drawn.
        std::vector<int> classes;
        /// suffix[t][r] = [y^r] prod_{u >= t} chain_white_series(classes[u]); suffix[e] = 1.
        std::vector<std::vector<Integer>> suffix;
        /// coefficient[W] = [y^W] of the kernel series in y (same for every kernel of the group).
        std::vector<Integer> coefficient;
    };

    int q = 0;
    int delta = 0;
    int n = 0;
    std::vector<Group> groups;
    /// chain_counts[class][s]: walks available to a chain with s internal whites.
    std::vector<std::vector<Integer>> chain_counts;
    /// Cumulative weights over (group, W) pairs, flattened.
    std::vector<Integer> cumulative;
    std::vector<std::pair<int, int>> cells;
    Integer total;

    /// N(K, n) for any kernel K of group g.
    Integer kernel_count(int g) const;
};

/// Forests of k q-ary trees with m white (internal) nodes: k/(qm+k) C(qm+k, m).
Integer forest_count(int q, long k, long m);

SamplerTables build_tables(int q, int delta, int n);

/// Exactly uniform constellation (canonical form) of excess delta with n whites.
/// Throws std::domain_error when there is none.
Constellation sample_constellation(const SamplerTables& t, Rng& rng);

/// Uniform forest of k trees with m internal nodes, one preorder code per tree.
std::vector<TreeCode> sample_forest(int q, int k, int m, Rng& rng);

/// Uniform color walk of length s from `from` to `to` on K_q.
std::vector<int> sample_walk(int q, int s, int from, int to, Rng& rng);

ColoredGraph sample_graph(const SamplerTables& t, Rng& rng, Family family);

/// Structural checks run on one bipartite sample.
struct Certificates {
    bool chains_covered = false;   // every chain has an internal white and all colors
    bool forests = false;          // every S without color c is a forest
    bool residues_melonic = false; // every c-residue of the 0-residue is melonic
    int handle_steps = 0;          // handle-vertex removals that succeeded
    bool handles_complete = false; // exactly delta removals, ending at a tree
    bool gurau_matches = false;    // Gurau degree equals q * delta
    long gurau = 0;

    bool all() const { return chains_covered && forests && residues_melonic && handles_complete && gurau_matches; }
};

Certificates certify(const Constellation& s, long delta);

/// Remove white w, its edges and everything cut off from the root.
Constellation delete_white(const Constellation& s, int w);

/// Whether the two graph vertices of white w lie on a common color-{i,j} cycle of
/// psi_inverse_raw(s).
bool is_handle_vertex(const Constellation& s, int w, int i, int j);

struct SurveyOptions {
    Family family = Family::kBipartite;
    bool certificates = false;
    int threads = 1;
};

struct SampleReport {
    int q = 0;
    int delta = 0;
    int n = 0;
    long trials = 0;
    std::uint64_t seed = 0;
    Family family = Family::kBipartite;
    long syk = 0;
    long bipartite = 0;
    long bipartite_and_syk = 0;
    long certified = 0;  // trials with certificates computed
    long chains_covered = 0;
    long forests = 0;
    long residues_melonic = 0;
    long handles_complete = 0;
    long gurau_matches = 0;
    long all_certificates = 0;
    std::map<long, long> handle_count_histogram;
    std::map<long, long> gurau_degree_histogram;
    std::map<long, long> chain_length_histogram;  // internal whites per chain

    double fraction_syk() const { return trials ? static_cast<double>(syk) / trials : 0; }
    double fraction_bipartite_given_syk() const { return syk ? static_cast<double>(bipartite_and_syk) / syk : 0; }
    double fraction(long count) const { return certified ? static_cast<double>(count) / certified : 0; }
};

/// Draw `trials` samples; trial t uses an RNG seeded with derive_seed(seed, t), so the
/// report does not depend on the thread count.
SampleReport survey(const SamplerTables& t, long trials, std::uint64_t seed, const SurveyOptions& options);

nlohmann::json to_json(const SampleReport& r);

}  // namespace syk
