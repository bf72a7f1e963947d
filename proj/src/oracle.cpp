#include "syk/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace syk {

int default_threads()
{
    if (const char* env = std::getenv("SYKENUM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

struct ShardResult {
    std::vector<ColoredGraph> graphs;
    unsigned long long tuples = 0;
    unsigned long long connected = 0;
};

// Runs shard(i) for i in [0, count) on `threads` workers, then visits the results in order.
EnumerationStats run_shards(int count, int threads, const std::function<void(int, ShardResult&)>& shard,
                            const GraphVisitor& visit)
{
    std::vector<ShardResult> results(count);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) shard(i, results[i]);
    };
    const int workers = std::max(1, std::min(threads, count));
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    EnumerationStats stats;
    for (auto& r : results) {
        stats.tuples += Integer(static_cast<unsigned long>(r.tuples));
        stats.connected += Integer(static_cast<unsigned long>(r.connected));
        stats.classes += Integer(static_cast<unsigned long>(r.graphs.size()));
        for (const auto& g : r.graphs) visit(g);
        r.graphs.clear();
        r.graphs.shrink_to_fit();
    }
    return stats;
}

void check_limit(double tuples)
{
    if (tuples > kOracleTupleLimit) {
        std::ostringstream msg;
        msg << "oracle size limit exceeded: " << tuples << " tuples > " << kOracleTupleLimit;
        throw std::length_error(msg.str());
    }
}

}  // namespace

EnumerationStats enumerate_bipartite(int q, int n, const GraphVisitor& visit, int threads)
{
    if (q < 1 || n < 1) throw std::out_of_range("enumerate_bipartite: need q >= 1 and n >= 1");
    check_limit(std::pow(std::tgamma(n + 1.0), q));

    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::vector<std::vector<int>> inverse(perms.size(), std::vector<int>(n));
    for (std::size_t k = 0; k < perms.size(); ++k)
        for (int i = 0; i < n; ++i) inverse[k][perms[k][i]] = i;
    const int count = static_cast<int>(perms.size());

    auto shard = [&](int first, ShardResult& out) {
        std::vector<int> idx(q, 0);
        idx[0] = first;
        std::vector<int> label(n);
        std::vector<int> queue(n);
        for (;;) {
            ++out.tuples;
            // Breadth-first search over elements; element k stands for the pair (2k, 2k+1).
            std::fill(label.begin(), label.end(), -1);
            label[0] = 0;
            queue[0] = 0;
            int size = 1;
            bool canonical = true;
            auto discover = [&](int x) {
                if (label[x] >= 0) return;
                if (x != size) canonical = false;
                label[x] = size;
                queue[size++] = x;
            };
            for (int head = 0; head < size; ++head) {
                const int k = queue[head];
                for (int i = 0; i < q; ++i) discover(perms[idx[i]][k]);
                for (int i = 0; i < q; ++i) discover(inverse[idx[i]][k]);
            }
            if (size == n) {
                ++out.connected;
                if (canonical) {
                    std::vector<std::vector<int>> m(q + 1, std::vector<int>(2 * n));
                    for (int k = 0; k < n; ++k) {
                        m[0][2 * k] = 2 * k + 1;
                        m[0][2 * k + 1] = 2 * k;
                        for (int i = 0; i < q; ++i) {
                            const int t = perms[idx[i]][k];
                            m[i + 1][2 * k] = 2 * t + 1;
                            m[i + 1][2 * t + 1] = 2 * k;
                        }
                    }
                    out.graphs.emplace_back(q, std::move(m), std::pair<int, int>{0, 1});
                }
            }
            int pos = q - 1;
            while (pos >= 1 && ++idx[pos] == count) idx[pos--] = 0;
            if (pos < 1) break;
        }
    };
    EnumerationStats stats = run_shards(count, threads, shard, visit);
    stats.orbit_size = factorial(n - 1);
    return stats;
}

namespace {

void perfect_matchings(int size, std::vector<int>& current, std::vector<std::vector<int>>& out)
{
    const auto it = std::find(current.begin(), current.end(), -1);
    if (it == current.end()) {
        out.push_back(current);
        return;
    }
    const int a = static_cast<int>(it - current.begin());
    for (int b = a + 1; b < size; ++b) {
        if (current[b] >= 0) continue;
        current[a] = b;
        current[b] = a;
        perfect_matchings(size, current, out);
        current[a] = current[b] = -1;
    }
}

}  // namespace

EnumerationStats enumerate_general(int q, int n, const GraphVisitor& visit, int threads)
{
    if (q < 1 || n < 1) throw std::out_of_range("enumerate_general: need q >= 1 and n >= 1");
    double per_color = 1;
    for (int k = 2 * n - 1; k > 1; k -= 2) per_color *= k;
    check_limit(std::pow(per_color, q));

    std::vector<std::vector<int>> matchings;
    std::vector<int> current(2 * n, -1);
    perfect_matchings(2 * n, current, matchings);
    std::vector<int> zero(2 * n);
    for (int k = 0; k < n; ++k) {
        zero[2 * k] = 2 * k + 1;
        zero[2 * k + 1] = 2 * k;
    }
    const int count = static_cast<int>(matchings.size());

    auto shard = [&](int first, ShardResult& out) {
        std::vector<int> idx(q, 0);
        idx[0] = first;
        std::vector<int> labels;
        for (;;) {
            ++out.tuples;
            std::vector<std::vector<int>> m{zero};
            for (int i = 0; i < q; ++i) m.push_back(matchings[idx[i]]);
            ColoredGraph g(q, std::move(m), {0, 1});
            if (component_labels(g, g.all_colors(), labels) == 1) {
                ++out.connected;
                const auto label = canonical_labeling(g);
                bool identity = true;
                for (int v = 0; v < 2 * n && identity; ++v) identity = label[v] == v;
                if (identity) out.graphs.push_back(std::move(g));
            }
            int pos = q - 1;
            while (pos >= 1 && ++idx[pos] == count) idx[pos--] = 0;
            if (pos < 1) break;
        }
    };
    EnumerationStats stats = run_shards(count, threads, shard, visit);
    Integer two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, n - 1);
    stats.orbit_size = factorial(n - 1) * two_pow;
    return stats;
}

Integer CountTable::total() const
{
    Integer t = 0;
    for (const auto& [d, row] : rows) t += row.total;
    return t;
}

std::string CountTable::to_tsv(bool header) const
{
    std::ostringstream out;
    const bool general = family == Family::kGeneral;
    if (header) out << "n\tdelta\ttotal\tsyk\tmelonic" << (general ? "\tbipartite" : "") << '\n';
    for (const auto& [d, row] : rows) {
        out << n << '\t' << d << '\t' << row.total << '\t' << row.syk << '\t' << row.melonic;
        if (general) out << '\t' << row.bipartite;
        out << '\n';
    }
    return out.str();
}

CountTable count_table(int q, int n, Family family, int threads)
{
    CountTable table;
    table.q = q;
    table.n = n;
    table.family = family;
    auto classify = [&](const ColoredGraph& g) {
        CountRow& row = table.rows[order(g)];
        row.total += 1;
        if (is_syk(g)) row.syk += 1;
        if (is_melonic(g)) row.melonic += 1;
        if (is_bipartite(g)) row.bipartite += 1;
    };
    table.stats = family == Family::kBipartite ? enumerate_bipartite(q, n, classify, threads)
                                               : enumerate_general(q, n, classify, threads);
    return table;
}

}  // namespace syk
