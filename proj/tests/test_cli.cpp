#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "support.hpp"
#include "syk/cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "sykenum");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = syk::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, SeriesPrintsFussCatalan)
{
    const auto r = run({"series", "--q", "3", "--delta", "0", "--n", "4"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "1 1\n2 3\n3 12\n4 55\n");
}

TEST(Cli, GeneralSeriesDoubles)
{
    const auto r = run({"series", "--q", "3", "--delta", "1", "--n", "3", "--general"});
    EXPECT_EQ(r.out, "1 0\n2 6\n3 60\n");
}

TEST(Cli, CheckPasses)
{
    const auto r = run({"check", "--q", "3", "--n", "4", "--delta", "1"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, KernelsOfOrderZero)
{
    const auto r = run({"kernels", "--q", "3", "--delta", "0"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["vertices"].size(), 1u);
    EXPECT_TRUE(j[0].contains("stats"));
}

TEST(Cli, CountTsv)
{
    const auto r = run({"count", "--q", "3", "--n", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "n\tdelta\ttotal\tsyk\tmelonic");
    EXPECT_NE(r.out.find("2\t0\t3\t3\t3"), std::string::npos);
}

TEST(Cli, BadConfigExitsTwo)
{
    EXPECT_EQ(run({"series", "--q", "3", "--delta", "9", "--n", "4"}).code, 2);
    EXPECT_EQ(run({"series", "--q", "2", "--delta", "1", "--n", "4"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"series", "--q", "x"}).code, 2);
    const auto big = run({"count", "--q", "3", "--n", "9"});
    EXPECT_EQ(big.code, 2);
    EXPECT_NE(big.err.find("limit"), std::string::npos);
}

TEST(Cli, SampleIsReproducible)
{
    const auto a = run({"sample", "--q", "3", "--delta", "1", "--n", "30", "--trials", "50", "--seed", "5", "--threads", "1"});
    const auto b = run({"sample", "--q", "3", "--delta", "1", "--n", "30", "--trials", "50", "--seed", "5", "--threads", "3"});
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["seed"], 5);
    EXPECT_EQ(j["trials"], 50);
}

TEST(Cli, SampleEmitAndExport)
{
    const auto dir = std::filesystem::temp_directory_path() / "sykenum_cli_test";
    std::filesystem::remove_all(dir);
    const auto r = run({"sample", "--q", "3", "--delta", "1", "--n", "12", "--trials", "3", "--seed", "2", "--emit", dir.string()});
    ASSERT_EQ(r.code, 0);
    const auto file = dir / "sample_1.json";
    ASSERT_TRUE(std::filesystem::exists(file));
    ASSERT_TRUE(std::filesystem::exists(dir / "sample_1.dot"));

    const auto dot = run({"export", "--input", file.string(), "--format", "dot"});
    EXPECT_EQ(dot.code, 0);
    EXPECT_NE(dot.out.find("root=true"), std::string::npos);
    const auto con = run({"export", "--input", file.string(), "--format", "constellation"});
    EXPECT_EQ(con.code, 0);
    EXPECT_EQ(nlohmann::json::parse(con.out)["white"].size(), 12u);
    const auto ker = run({"export", "--input", file.string(), "--format", "kernel"});
    EXPECT_EQ(ker.code, 0);
    EXPECT_EQ(nlohmann::json::parse(ker.out)["excess"], 1);
    EXPECT_EQ(run({"export", "--input", (dir / "missing.json").string()}).code, 2);
    std::filesystem::remove_all(dir);
}

TEST(Cli, AsymptoticsPrintsFloats)
{
    const auto r = run({"asymptotics", "--q", "3", "--delta", "1", "--n", "100"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("estimate ", 0), 0u);
    EXPECT_NE(r.out.find("\nratio "), std::string::npos);
}

TEST(Cli, ConfigFile)
{
    const auto path = std::filesystem::temp_directory_path() / "sykenum_cli_test.toml";
    std::ofstream(path) << "[series]\nq = 3\ndelta = 0\nn = 3\n";
    const auto r = run({"--config", path.string(), "series"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "1 1\n2 3\n3 12\n");
    std::filesystem::remove(path);
}
