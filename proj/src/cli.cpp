#include "syk/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "syk/constellation.hpp"
#include "syk/graph.hpp"
#include "syk/kernel.hpp"
#include "syk/oracle.hpp"
#include "syk/sampler.hpp"
#include "syk/series.hpp"

namespace syk::cli {

namespace {

struct Config {
    int q = 3;
    int delta = 0;
    int n = 1;
    long trials = 1000;
    std::uint64_t seed = 1;
    bool general = false;
    bool certificates = false;
    bool dominant = false;
    int threads = 1;
    std::string emit;
    std::string input;
    std::string format = "dot";
    std::string output;
};

class BadConfig : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what)
{
    if (!ok) throw BadConfig(what);
}

Family family(const Config& c) { return c.general ? Family::kGeneral : Family::kBipartite; }

void check_series_range(const Config& c)
{
    require(c.q >= 3, "q must be at least 3 for series, kernels with delta > 0 and sampling");
    require(c.delta >= 0 && c.delta <= kMaxKernelExcess,
            "delta must lie in [0, " + std::to_string(kMaxKernelExcess) + "] (kernel catalog limit)");
    require(c.n >= 1, "n must be positive");
}

int do_count(const Config& c, std::ostream& out)
{
    require(c.q >= 2, "q must be at least 2");
    require(c.n >= 1, "n must be positive");
    out << count_table(c.q, c.n, family(c), c.threads).to_tsv();
    return 0;
}

Series series_for(const Config& c, int order)
{
    return c.general ? nonbipartite_series(c.q, c.delta, order) : graphs_series(c.q, c.delta, order);
}

int do_series(const Config& c, std::ostream& out)
{
    check_series_range(c);
    const Series s = series_for(c, c.n);
    for (int n = 1; n <= c.n; ++n) out << n << ' ' << s.coefficient(n) << '\n';
    return 0;
}

int do_kernels(const Config& c, std::ostream& out)
{
    require(c.q >= (c.delta == 0 ? 2 : 3), "q must be at least 3 when delta > 0");
    require(c.delta >= 0 && c.delta <= kMaxKernelExcess,
            "delta must lie in [0, " + std::to_string(kMaxKernelExcess) + "] (kernel catalog limit)");
    nlohmann::json list = nlohmann::json::array();
    KernelEnumerationOptions options;
    options.dominant_only = c.dominant;
    enumerate_kernels(c.q, c.delta, [&](const KernelDiagram& k) {
        nlohmann::json j = to_json(k);
        list.push_back(std::move(j));
    }, options);
    out << list.dump(2) << '\n';
    return 0;
}

int do_sample(const Config& c, std::ostream& out)
{
    check_series_range(c);
    require(c.trials >= 1, "trials must be positive");
    const SamplerTables tables = build_tables(c.q, c.delta, c.n);
    require(sgn(tables.total) > 0, "no graph with these q, delta and n");
    SurveyOptions options;
    options.family = family(c);
    options.certificates = c.certificates;
    options.threads = c.threads;
    const SampleReport report = survey(tables, c.trials, c.seed, options);
    out << to_json(report).dump(2) << '\n';

    if (!c.emit.empty()) {
        std::filesystem::create_directories(c.emit);
        for (long t = 0; t < c.trials; ++t) {
            Rng rng(derive_seed(c.seed, static_cast<std::uint64_t>(t)));
            const ColoredGraph g = sample_graph(tables, rng, family(c));
            const std::string base = c.emit + "/sample_" + std::to_string(t);
            std::ofstream(base + ".json") << to_json(g).dump() << '\n';
            std::ofstream(base + ".dot") << to_dot(g);
        }
    }
    return 0;
}

int do_check(const Config& c, std::ostream& out)
{
    check_series_range(c);
    const CountTable table = count_table(c.q, c.n, family(c), c.threads);
    const Series s = series_for(c, c.n);
    bool ok = true;
    // The oracle gives one table per n, so rerun it for the smaller sizes.
    for (int n = 1; n <= c.n; ++n) {
        const CountTable t = n == c.n ? table : count_table(c.q, n, family(c), c.threads);
        const auto row = t.rows.find(c.delta);
        const Integer oracle = row == t.rows.end() ? Integer(0) : row->second.total;
        const Rational expected = s.coefficient(n);
        const bool match = expected == Rational(oracle);
        ok = ok && match;
        out << n << '\t' << oracle << '\t' << expected << '\t' << (match ? "ok" : "MISMATCH") << '\n';
    }
    return ok ? 0 : 1;
}

int do_asymptotics(const Config& c, std::ostream& out)
{
    check_series_range(c);
    const Series s = graphs_series(c.q, c.delta, c.n);
    const Integer g = s.coefficient(c.n).get_num();
    out << std::setprecision(15);
    out << "estimate " << asymptotic_estimate(c.q, c.delta, c.n) << '\n';
    out << "ratio " << estimate_ratio(g, c.q, c.delta, c.n) << '\n';
    return 0;
}

int do_export(const Config& c, std::ostream& out)
{
    require(!c.input.empty(), "export needs --input");
    std::ifstream in(c.input);
    require(static_cast<bool>(in), "cannot open " + c.input);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw BadConfig(std::string("bad graph json: ") + e.what());
    }
    const ColoredGraph g = graph_from_json(j);
    if (const auto v = validate(g)) throw BadConfig("invalid graph: " + v->message);

    std::ostringstream text;
    if (c.format == "dot") {
        text << to_dot(g);
    } else if (c.format == "json") {
        text << to_json(canonical_form(g)).dump(2) << '\n';
    } else if (c.format == "constellation") {
        require(is_bipartite(g), "constellation export needs a bipartite graph");
        text << to_json(psi(g)).dump(2) << '\n';
    } else if (c.format == "kernel") {
        require(is_bipartite(g), "kernel export needs a bipartite graph");
        require(g.q() >= 3, "kernel export needs q >= 3");
        const auto d = core(psi(g));
        const nlohmann::json k = to_json(kernel(d.core));
        text << k.dump(2) << '\n';
    } else {
        throw BadConfig("unknown format " + c.format);
    }
    if (c.output.empty()) {
        out << text.str();
    } else {
        std::ofstream f(c.output);
        require(static_cast<bool>(f), "cannot write " + c.output);
        f << text.str();
    }
    return 0;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    Config c;
    c.threads = default_threads();

    CLI::App app{"Enumerate, count and sample colored graphs of fixed order"};
    app.set_config("--config", "", "read options from a TOML/INI file");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto common = [&](CLI::App* sub, bool with_delta) {
        sub->add_option("--q", c.q, "colors besides 0")->required();
        if (with_delta) sub->add_option("--delta", c.delta, "order")->required();
        sub->add_option("--threads", c.threads, "worker threads (default SYKENUM_THREADS or cores)")
            ->check(CLI::PositiveNumber);
    };

    auto* count = app.add_subcommand("count", "brute-force class counts by order (TSV)");
    common(count, false);
    count->add_option("--n", c.n, "white vertices")->required();
    count->add_flag("--general", c.general, "allow non-bipartite graphs");

    auto* series = app.add_subcommand("series", "exact counts from the generating function");
    common(series, true);
    series->add_option("--n", c.n, "last coefficient")->required();
    series->add_flag("--general", c.general, "count non-bipartite graphs");

    auto* kernels = app.add_subcommand("kernels", "kernel catalog (JSON)");
    common(kernels, true);
    kernels->add_flag("--dominant", c.dominant, "only dominant kernels");

    auto* sample = app.add_subcommand("sample", "uniform sampling report (JSON)");
    common(sample, true);
    sample->add_option("--n", c.n, "white vertices")->required();
    sample->add_option("--trials", c.trials, "number of samples")->required();
    sample->add_option("--seed", c.seed, "master seed")->required();
    sample->add_flag("--general", c.general, "sample non-bipartite graphs");
    sample->add_flag("--certificates", c.certificates, "structural checks on bipartite samples");
    sample->add_option("--emit", c.emit, "directory for sample_<t>.json and .dot");

    auto* check = app.add_subcommand("check", "compare oracle and series for n' <= n");
    common(check, true);
    check->add_option("--n", c.n, "largest size")->required();
    check->add_flag("--general", c.general, "non-bipartite family");

    auto* asymptotics = app.add_subcommand("asymptotics", "estimate and ratio at n");
    common(asymptotics, true);
    asymptotics->add_option("--n", c.n, "size")->required();

    auto* exporter = app.add_subcommand("export", "convert a graph JSON file");
    exporter->add_option("--input", c.input, "graph JSON")->required();
    exporter->add_option("--format", c.format, "dot, json, constellation or kernel")
        ->check(CLI::IsMember({"dot", "json", "constellation", "kernel"}));
    exporter->add_option("--output", c.output, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return 2;
    }

    try {
        if (*count) return do_count(c, out);
        if (*series) return do_series(c, out);
        if (*kernels) return do_kernels(c, out);
        if (*sample) return do_sample(c, out);
        if (*check) return do_check(c, out);
        if (*asymptotics) return do_asymptotics(c, out);
        if (*exporter) return do_export(c, out);
    } catch (const BadConfig& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

int run(int argc, char** argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace syk::cli
