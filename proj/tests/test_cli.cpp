#include "agewise/cli.hpp"
#include "agewise/error.hpp"
#include "agewise/inference.hpp"
#include "agewise/io.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace agewise;
namespace fs = std::filesystem;

namespace {

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run invoke(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = cli::main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "agewise_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

void write_data(const fs::path& p, const std::vector<double>& xs)
{
    std::ofstream os(p);
    io::write_sample_csv(os, xs);
}

} // namespace

TEST(ParseArgs, ClassifyWithModel)
{
    const auto r = cli::parse_args({"classify", "--model", "weibull:k=0.5,lambda=1"});
    EXPECT_EQ(r.verb, "classify");
    ASSERT_TRUE(r.model.has_value());
    EXPECT_EQ(r.model->family, "weibull");
}

TEST(ParseArgs, TttFromData)
{
    const auto r = cli::parse_args({"ttt", "--data", "sample.csv", "--out", "ttt.csv"});
    EXPECT_EQ(r.verb, "ttt");
    EXPECT_EQ(r.data, "sample.csv");
    EXPECT_EQ(r.out, "ttt.csv");
    EXPECT_FALSE(r.model.has_value());
}

TEST(ParseArgs, TransformsAndInit)
{
    const auto r = cli::parse_args({"classify", "--model", "lomax:alpha=2,beta=1", "--transform", "dus", "--transform",
                                    "gdus:alpha=2"});
    ASSERT_EQ(r.model->transforms.size(), 2u);
    EXPECT_EQ(r.model->transforms[1].alpha, 2.0);
    const auto f = cli::parse_args({"fit", "--family", "weibull", "--data", "d.csv", "--init", "1,2.5"});
    EXPECT_EQ(f.init, (std::vector<double>{1.0, 2.5}));
}

TEST(ParseArgs, UsageErrors)
{
    EXPECT_THROW(cli::parse_args({"classify", "--model", "weibull:k=0.5"}), UsageError);
    EXPECT_THROW(cli::parse_args({"frobnicate"}), UsageError);
    EXPECT_THROW(cli::parse_args({}), UsageError);
    EXPECT_THROW(cli::parse_args({"ttt"}), UsageError);
    EXPECT_THROW(cli::parse_args({"ttt", "--data", "a.csv", "--model", "exponential:theta=1"}), UsageError);
    EXPECT_THROW(cli::parse_args({"sample", "--model", "exponential:theta=1"}), UsageError);
    EXPECT_THROW(cli::parse_args({"fit", "--family", "weibull", "--data", "d.csv", "--init", "1,x"}), UsageError);
    EXPECT_THROW(cli::parse_args({"classify", "--model", "exponential:theta=1", "--grid", "4"}), UsageError);
}

TEST(MainEntry, UnknownVerbListsVerbs)
{
    const auto r = invoke({"frobnicate"});
    EXPECT_EQ(r.code, 2);
    const auto j = io::json::parse(r.err);
    EXPECT_EQ(j.at("error"), "usage");
    EXPECT_NE(j.at("message").get<std::string>().find("classify"), std::string::npos);
}

TEST(MainEntry, MissingParameterIsUsage)
{
    const auto r = invoke({"classify", "--model", "weibull:k=0.5"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("missing parameter 'lambda'"), std::string::npos);
    EXPECT_TRUE(r.out.empty());
}

TEST(MainEntry, DomainFailureExitsOne)
{
    const auto data = scratch("zero.csv");
    write_data(data, {1.0, 0.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    const auto r = invoke({"fit", "--family", "exponential", "--data", data.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(io::json::parse(r.err).at("error"), "domain");
}

TEST(MainEntry, HelpExitsZero)
{
    const auto r = invoke({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("classify"), std::string::npos);
}

TEST(MainEntry, ClassifyDusLomax)
{
    const auto r = invoke({"classify", "--model", "lomax:alpha=2,beta=1", "--transform", "dus"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto label = io::json::parse(r.out).at("label").get<std::string>();
    EXPECT_TRUE(label == "DFR" || label == "UBFR") << label;
}

TEST(MainEntry, SampleIsByteIdentical)
{
    const auto a = scratch("a.csv"), b = scratch("b.csv");
    for (const auto& p : {a, b})
        ASSERT_EQ(invoke({"sample", "--model", "dus-ew:alpha=2,lambda=1", "-n", "2000", "--seed", "9", "--out",
                          p.string()})
                      .code,
                  0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(invoke({"sample", "--model", "dus-ew:alpha=2,lambda=1", "-n", "5", "--seed", "9"}).out,
              invoke({"sample", "--model", "dus-ew:alpha=2,lambda=1", "-n", "5", "--seed", "9"}).out);
}

TEST(MainEntry, EmpiricalTttOfExponentialIsBoundary)
{
    const auto data = scratch("exp.csv"), curve = scratch("exp_ttt.csv");
    write_data(data, sample(make_baseline("exponential", {1.0}), 100000, 42));
    const auto r = invoke({"ttt", "--data", data.string(), "--out", curve.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const auto& t : io::json::parse(r.out).at("tests")) EXPECT_EQ(t.at("verdict"), "boundary") << t.dump();
    EXPECT_EQ(slurp(curve).rfind("# kind=empirical", 0), 0u);
}

TEST(MainEntry, FitRoundTrip)
{
    const auto data = scratch("wb.csv");
    write_data(data, sample(make_baseline("weibull", {2.0, 1.5}), 3000, 5));
    const auto r = invoke({"fit", "--family", "weibull", "--data", data.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = io::json::parse(r.out);
    EXPECT_NEAR(j.at("params").at("lambda").get<double>(), 2.0, 0.2);
    EXPECT_NEAR(j.at("params").at("k").get<double>(), 1.5, 0.15);
}

TEST(MainEntry, HazardAndPreserveWriteCsv)
{
    const auto h = invoke({"hazard", "--model", "exponential:theta=2", "--grid", "16"});
    ASSERT_EQ(h.code, 0) << h.err;
    EXPECT_EQ(h.out.rfind("t,hazard\n", 0), 0u);
    const auto p = invoke({"preserve"});
    ASSERT_EQ(p.code, 0) << p.err;
    EXPECT_EQ(p.out.rfind("class,operation,published,verdict", 0), 0u);
}

TEST(MainEntry, CatalogEntryJson)
{
    const auto r = invoke({"catalog", "--name", "bhati"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(io::json::parse(r.out).at("name"), "bhati");
    EXPECT_EQ(invoke({"catalog", "--name", "nosuch"}).code, 1);
}

TEST(GridPoints, EnvironmentOverride)
{
    ::setenv("AGEWISE_GRID_POINTS", "64", 1);
    EXPECT_EQ(cli::grid_points(0), 64u);
    EXPECT_EQ(cli::grid_points(32), 32u);
    ::setenv("AGEWISE_GRID_POINTS", "8", 1);
    EXPECT_THROW(cli::grid_points(0), UsageError);
    ::setenv("AGEWISE_GRID_POINTS", "lots", 1);
    EXPECT_EQ(invoke({"classify", "--model", "exponential:theta=1"}).code, 2);
    ::unsetenv("AGEWISE_GRID_POINTS");
    EXPECT_EQ(cli::grid_points(0), kDefaultGridPoints);
}
