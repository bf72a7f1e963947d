#include "syk/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "syk/series.hpp"

namespace syk {

Integer forest_count(int q, long k, long m)
{
    if (k == 0) return m == 0 ? Integer(1) : Integer(0);
    if (m < 0) return 0;
    const unsigned long len = static_cast<unsigned long>(q) * m + k;
    return binomial(len, m) * k / len;
}

Integer SamplerTables::kernel_count(int g) const
{
    const auto& group = groups[g];
    Integer total = 0;
    for (int w = 1; w <= n; ++w)
        if (sgn(group.coefficient[w]) != 0) total += group.coefficient[w] * forest_count(q, static_cast<long>(q) * w, n - w);
    return total;
}

namespace {

std::vector<Integer> convolve(const std::vector<Integer>& a, const std::vector<Integer>& b, int len)
{
    std::vector<Integer> out(len);
    for (int i = 0; i < len && i < static_cast<int>(a.size()); ++i) {
        if (sgn(a[i]) == 0) continue;
        for (int j = 0; i + j < len && j < static_cast<int>(b.size()); ++j)
            mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    return out;
}

}  // namespace

SamplerTables build_tables(int q, int delta, int n)
{
    if (q < 3) throw std::out_of_range("build_tables: the kernel decomposition needs q >= 3");
    if (n < 1) throw std::out_of_range("build_tables: n must be positive");
    SamplerTables t;
    t.q = q;
    t.delta = delta;
    t.n = n;
    t.chain_counts.resize(3);
    for (int c = 0; c < 3; ++c) {
        t.chain_counts[c].resize(n + 1);
        for (int s = 0; s <= n; ++s) {
            Integer v = walk_count(q, s, c != 0);
            if (c == 2 && s == 0) v = 0;  // two colored ends need a white in between
            t.chain_counts[c][s] = v;
        }
    }

    std::map<KernelSignature, int> group_of;
    enumerate_kernels(q, delta, [&](const KernelDiagram& k) {
        const auto sig = signature(edge_stats(k));
        auto [it, fresh] = group_of.try_emplace(sig, static_cast<int>(t.groups.size()));
        if (fresh) t.groups.push_back({sig, {}, {}, {}, {}});
        t.groups[it->second].kernels.push_back(k);
    });

    std::map<std::vector<int>, std::vector<std::vector<Integer>>> suffix_cache;
    for (auto& g : t.groups) {
        const auto& k0 = g.kernels.front();
        for (int e = 0; e < k0.num_edges(); ++e) g.classes.push_back(chain_class(k0, e));
        std::sort(g.classes.begin(), g.classes.end());
        auto& cached = suffix_cache[g.classes];
        if (cached.empty()) {
            const int e_count = static_cast<int>(g.classes.size());
            cached.resize(e_count + 1);
            cached[e_count].assign(n + 1, 0);
            cached[e_count][0] = 1;
            for (int u = e_count - 1; u >= 0; --u) cached[u] = convolve(t.chain_counts[g.classes[u]], cached[u + 1], n + 1);
        }
        g.suffix = cached;
        g.coefficient.assign(n + 1, 0);
        for (int w = g.sig.w; w <= n; ++w) g.coefficient[w] = g.suffix[0][w - g.sig.w];
    }

    Integer running = 0;
    for (int gi = 0; gi < static_cast<int>(t.groups.size()); ++gi) {
        const auto& g = t.groups[gi];
        const Integer size = static_cast<unsigned long>(g.kernels.size());
        for (int w = 1; w <= n; ++w) {
            if (sgn(g.coefficient[w]) == 0) continue;
            const Integer weight = size * g.coefficient[w] * forest_count(q, static_cast<long>(q) * w, n - w);
            if (sgn(weight) == 0) continue;
            running += weight;
            t.cumulative.push_back(running);
            t.cells.emplace_back(gi, w);
        }
    }
    t.total = running;
    return t;
}

std::vector<int> sample_walk(int q, int s, int from, int to, Rng& rng)
{
    if (s == 0) {
        if (from != to) throw std::invalid_argument("sample_walk: empty walk needs equal ends");
        return {from};
    }
    if (s == 1 && from == to) throw std::invalid_argument("sample_walk: no walk of length 1 between equal colors");
    std::vector<int> walk(s + 1);
    std::uniform_int_distribution<int> step(1, q - 1);
    for (;;) {
        walk[0] = from;
        for (int t = 1; t < s; ++t) {
            // uniform color different from the previous one
            const int c = step(rng);
            walk[t] = c >= walk[t - 1] ? c + 1 : c;
        }
        if (walk[s - 1] != to) {
            walk[s] = to;
            return walk;
        }
    }
}

std::vector<TreeCode> sample_forest(int q, int k, int m, Rng& rng)
{
    const int len = q * m + k;
    std::vector<std::uint8_t> seq(len, 0);
    std::fill(seq.begin(), seq.begin() + m, 1);
    std::shuffle(seq.begin(), seq.end(), rng);

    // Good rotations start at the first visits of levels min..min+k-1 of the walk
    // with steps +(q-1) for internal nodes and -1 for leaves.
    long level = 0;
    long low = 0;
    std::vector<int> first_visit{0};
    for (int t = 1; t < len; ++t) {
        level += seq[t - 1] ? q - 1 : -1;
        if (level < low) {
            low = level;
            first_visit.push_back(t);
        }
    }
    // first_visit[j] is the first time the walk reaches level -j; keep the k lowest.
    const int lowest = static_cast<int>(first_visit.size()) - 1;
    const int pick = lowest - static_cast<int>(uniform_index(k, rng));
    const int start = first_visit[pick];

    std::vector<TreeCode> trees;
    trees.reserve(k);
    TreeCode current;
    long need = 1;
    for (int t = 0; t < len; ++t) {
        const std::uint8_t x = seq[(start + t) % len];
        current.push_back(x);
        need += x ? q - 1 : -1;
        if (need == 0) {
            trees.push_back(std::move(current));
            current.clear();
            need = 1;
        }
    }
    if (static_cast<int>(trees.size()) != k) throw std::logic_error("sample_forest: cycle lemma violated");
    return trees;
}

Constellation sample_constellation(const SamplerTables& t, Rng& rng)
{
    if (sgn(t.total) == 0) throw std::domain_error("sampler: no constellation of this size and excess");
    const Integer r = uniform_below(t.total, rng);
    const auto cell_it = std::upper_bound(t.cumulative.begin(), t.cumulative.end(), r);
    const auto [gi, whites] = t.cells[cell_it - t.cumulative.begin()];
    const auto& g = t.groups[gi];
    const KernelDiagram& k = g.kernels[uniform_index(g.kernels.size(), rng)];

    // Internal whites per class slot, drawn with the suffix products.
    const int e_count = static_cast<int>(g.classes.size());
    std::vector<int> lengths(e_count);
    int budget = whites - g.sig.w;
    for (int u = 0; u < e_count; ++u) {
        const auto& counts = t.chain_counts[g.classes[u]];
        Integer x = uniform_below(g.suffix[u][budget], rng);
        int s = 0;
        for (;; ++s) {
            const Integer w = counts[s] * g.suffix[u + 1][budget - s];
            if (x < w) break;
            x -= w;
        }
        lengths[u] = s;
        budget -= s;
    }

    // Hand the drawn lengths to the kernel edges of each class in index order.
    std::vector<std::vector<int>> walks(k.num_edges());
    std::vector<int> cursor(3, 0);
    std::vector<int> class_start(4, 0);
    for (int c : g.classes) ++class_start[c + 1];
    for (int c = 1; c <= 3; ++c) class_start[c] += class_start[c - 1];
    for (int e = 0; e < k.num_edges(); ++e) {
        const int c = chain_class(k, e);
        const int s = lengths[class_start[c] + cursor[c]++];
        walks[e] = sample_walk(t.q, s, k.half_color[2 * e], k.half_color[2 * e + 1], rng);
    }
    const CoreDiagram core_diagram = expand_kernel(k, walks);
    const auto trees = sample_forest(t.q, t.q * whites, t.n - whites, rng);
    return canonical_form(assemble(core_diagram, trees));
}

ColoredGraph sample_graph(const SamplerTables& t, Rng& rng, Family family)
{
    Constellation s = sample_constellation(t, rng);
    if (family == Family::kBipartite) return psi_inverse(s);
    SignedConstellation signed_s{std::move(s), {}};
    signed_s.signs.resize(signed_s.base.num_edges());
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& sign : signed_s.signs) sign = bit(rng) ? 1 : -1;
    return psi_hat_inverse(signed_s);
}

// ---------------------------------------------------------------------------
// Certificates

Constellation delete_white(const Constellation& s, int w)
{
    const int n = s.num_white;
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& cv : s.colored) {
        int anchor = -1;
        for (int e : cv.corners) {
            const int u = s.edge(e).white;
            if (u == w) continue;
            if (anchor < 0)
                anchor = u;
            else
                parent[find(u)] = find(anchor);
        }
    }
    if (w == s.root) throw std::invalid_argument("delete_white: cannot delete the root");
    std::vector<int> new_index(n, -1);
    Constellation out;
    out.q = s.q;
    for (int u = 0; u < n; ++u)
        if (u != w && find(u) == find(s.root)) new_index[u] = out.num_white++;
    out.root = new_index[s.root];
    for (const auto& cv : s.colored) {
        ColoredVertex nv;
        nv.color = cv.color;
        for (int e : cv.corners) {
            const auto [u, c] = s.edge(e);
            if (new_index[u] >= 0) nv.corners.push_back(out.edge_id(new_index[u], c));
        }
        if (!nv.corners.empty()) out.colored.push_back(std::move(nv));
    }
    return out;
}

bool is_handle_vertex(const Constellation& s, int w, int i, int j)
{
    const ColoredGraph g = psi_inverse_raw(s);
    std::vector<int> labels;
    component_labels(g, color_bit(i) | color_bit(j), labels);
    return labels[2 * w] == labels[2 * w + 1];
}

namespace {

bool chain_is_bridge(const std::vector<Chain>& all, std::size_t skip)
{
    const int a = all[skip].from;
    const int b = all[skip].to;
    if (a == b) return false;
    std::vector<int> stack{a};
    std::vector<int> seen{a};
    while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (std::size_t c = 0; c < all.size(); ++c) {
            if (c == skip) continue;
            for (auto [p, r] : {std::pair{all[c].from, all[c].to}, std::pair{all[c].to, all[c].from}}) {
                if (p != x || std::find(seen.begin(), seen.end(), r) != seen.end()) continue;
                if (r == b) return false;
                seen.push_back(r);
                stack.push_back(r);
            }
        }
    }
    return true;
}

bool s_hat_forests(const Constellation& s)
{
    const int n = s.num_white;
    for (int c = 1; c <= s.q; ++c) {
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        // A colored vertex with p corners merges p whites; a cycle shows up as a merge
        // of two whites already joined.
        for (const auto& cv : s.colored) {
            if (cv.color == c) continue;
            const int anchor = s.edge(cv.corners[0]).white;
            for (std::size_t t = 1; t < cv.corners.size(); ++t) {
                const int u = s.edge(cv.corners[t]).white;
                if (find(u) == find(anchor)) return false;
                parent[find(u)] = find(anchor);
            }
        }
    }
    return true;
}

}  // namespace

Certificates certify(const Constellation& s, long delta)
{
    Certificates cert;
    const ColoredGraph g = psi_inverse(s);
    const int q = s.q;

    const auto decomposition = core(s);
    const auto& cd = decomposition.core;
    const auto all_chains = chains(cd);
    cert.chains_covered = true;
    for (const auto& ch : all_chains) {
        ColorMask colors = 0;
        int whites = 0;
        for (int ref : ch.internal) {
            if (ref < cd.num_white)
                ++whites;
            else
                colors |= color_bit(cd.colored[ref - cd.num_white].color);
        }
        if (whites == 0 || colors != (color_bit(q + 1) - 2)) cert.chains_covered = false;
    }

    cert.forests = s_hat_forests(s);

    cert.residues_melonic = true;
    for (int c = 1; c <= q && cert.residues_melonic; ++c)
        cert.residues_melonic = is_melonic(g, g.all_colors() & ~color_bit(0) & ~color_bit(c));

    const Degree gurau = gurau_degree(g);
    cert.gurau = gurau.numerator() / gurau.denominator();
    cert.gurau_matches = gurau == Degree(q * delta);

    Constellation cur = s;
    while (excess(cur) > 0) {
        const auto dec = core(cur);
        const auto ch = chains(dec.core);
        int chosen = -1;
        int colors[2] = {0, 0};
        for (std::size_t c = 0; c < ch.size() && chosen < 0; ++c) {
            if (chain_is_bridge(ch, c)) continue;
            for (int ref : ch[c].internal) {
                if (ref >= dec.core.num_white) continue;
                chosen = ref;
                int found = 0;
                for (int i = 1; i <= q; ++i)
                    if (dec.core.white_colors[ref] & color_bit(i)) colors[found++] = i;
                break;
            }
        }
        if (chosen < 0) break;
        const int w = dec.white_origin[chosen];
        if (!is_handle_vertex(cur, w, colors[0], colors[1])) break;
        Constellation next = delete_white(cur, w);
        if (validate(next) || excess(next) != excess(cur) - 1) break;
        cur = std::move(next);
        ++cert.handle_steps;
    }
    cert.handles_complete = cert.handle_steps == delta && is_tree(cur);
    return cert;
}

// ---------------------------------------------------------------------------

SampleReport survey(const SamplerTables& t, long trials, std::uint64_t seed, const SurveyOptions& options)
{
    SampleReport report;
    report.q = t.q;
    report.delta = t.delta;
    report.n = t.n;
    report.trials = trials;
    report.seed = seed;
    report.family = options.family;
    const bool certificates = options.certificates && options.family == Family::kBipartite;

    const int workers = static_cast<int>(std::max<long>(1, std::min<long>(options.threads, trials)));
    std::vector<SampleReport> partial(workers);
    std::atomic<long> next{0};
    auto worker = [&](int id) {
        SampleReport& r = partial[id];
        for (long trial = next++; trial < trials; trial = next++) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
            ColoredGraph g;
            Constellation s;
            if (options.family == Family::kBipartite) {
                s = sample_constellation(t, rng);
                g = psi_inverse(s);
            } else {
                g = sample_graph(t, rng, Family::kGeneral);
            }
            const bool syk = is_syk(g);
            const bool bip = options.family == Family::kBipartite || is_bipartite(g);
            r.syk += syk;
            r.bipartite += bip;
            r.bipartite_and_syk += syk && bip;
            if (bip) {
                const Degree d = gurau_degree(g);
                if (d.denominator() == 1) r.gurau_degree_histogram[d.numerator()]++;
            }
            if (certificates) {
                const Certificates cert = certify(s, t.delta);
                r.certified++;
                r.chains_covered += cert.chains_covered;
                r.forests += cert.forests;
                r.residues_melonic += cert.residues_melonic;
                r.handles_complete += cert.handles_complete;
                r.gurau_matches += cert.gurau_matches;
                r.all_certificates += cert.all();
                r.handle_count_histogram[cert.handle_steps]++;
                const auto dec = core(s);
                for (const auto& ch : chains(dec.core)) {
                    long whites = 0;
                    for (int ref : ch.internal) whites += ref < dec.core.num_white;
                    r.chain_length_histogram[whites]++;
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (int id = 1; id < workers; ++id) pool.emplace_back(worker, id);
    worker(0);
    for (auto& th : pool) th.join();

    for (const auto& r : partial) {
        report.syk += r.syk;
        report.bipartite += r.bipartite;
        report.bipartite_and_syk += r.bipartite_and_syk;
        report.certified += r.certified;
        report.chains_covered += r.chains_covered;
        report.forests += r.forests;
        report.residues_melonic += r.residues_melonic;
        report.handles_complete += r.handles_complete;
        report.gurau_matches += r.gurau_matches;
        report.all_certificates += r.all_certificates;
        for (const auto& [k, v] : r.handle_count_histogram) report.handle_count_histogram[k] += v;
        for (const auto& [k, v] : r.gurau_degree_histogram) report.gurau_degree_histogram[k] += v;
        for (const auto& [k, v] : r.chain_length_histogram) report.chain_length_histogram[k] += v;
    }
    return report;
}

nlohmann::json to_json(const SampleReport& r)
{
    // Fractions stay exact: "a/b" strings in lowest terms.
    auto ratio = [](long num, long den) {
        if (den == 0) return std::string("0");
        Rational x(num, den);
        x.canonicalize();
        return x.get_str();
    };
    auto histogram = [](const std::map<long, long>& h) {
        nlohmann::json out = nlohmann::json::object();
        for (const auto& [k, v] : h) out[std::to_string(k)] = v;
        return out;
    };
    nlohmann::json j{{"q", r.q},
                     {"delta", r.delta},
                     {"n", r.n},
                     {"trials", r.trials},
                     {"seed", r.seed},
                     {"family", r.family == Family::kBipartite ? "bipartite" : "general"},
                     {"syk", r.syk},
                     {"fraction_syk", ratio(r.syk, r.trials)},
                     {"gurau_degree_histogram", histogram(r.gurau_degree_histogram)}};
    if (r.family == Family::kGeneral) {
        j["bipartite"] = r.bipartite;
        j["bipartite_and_syk"] = r.bipartite_and_syk;
        j["fraction_bipartite_given_syk"] = ratio(r.bipartite_and_syk, r.syk);
    }
    if (r.certified > 0) {
        j["certified"] = r.certified;
        j["fraction_chains_color_covered"] = ratio(r.chains_covered, r.certified);
        j["fraction_forests"] = ratio(r.forests, r.certified);
        j["fraction_residues_melonic"] = ratio(r.residues_melonic, r.certified);
        j["fraction_handles_complete"] = ratio(r.handles_complete, r.certified);
        j["fraction_gurau_q_delta"] = ratio(r.gurau_matches, r.certified);
        j["fraction_all_certificates"] = ratio(r.all_certificates, r.certified);
        j["handle_count_histogram"] = histogram(r.handle_count_histogram);
        j["chain_length_histogram"] = histogram(r.chain_length_histogram);
    }
    return j;
}

}  // namespace syk
