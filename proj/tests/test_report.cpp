#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "example1.hpp"
#include "tracebound/cli.hpp"
#include "tracebound/error.hpp"
#include "tracebound/report.hpp"

using namespace tracebound;
using test_support::example1;

namespace {

const std::string kData = TRACEBOUND_TEST_DATA;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Numbers within `tol`, everything else exact.
void expect_json_close(const nlohmann::json& actual, const nlohmann::json& expected, double tol,
                       const std::string& where = "$") {
    if (expected.is_number() && actual.is_number()) {
        EXPECT_NEAR(actual.get<double>(), expected.get<double>(), tol) << where;
        return;
    }
    ASSERT_EQ(actual.type(), expected.type()) << where;
    if (expected.is_object()) {
        ASSERT_EQ(actual.size(), expected.size()) << where;
        for (const auto& [key, value] : expected.items()) {
            ASSERT_TRUE(actual.contains(key)) << where << "." << key;
            expect_json_close(actual.at(key), value, tol, where + "." + key);
        }
    } else if (expected.is_array()) {
        ASSERT_EQ(actual.size(), expected.size()) << where;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            expect_json_close(actual.at(i), expected.at(i), tol, where + "[" + std::to_string(i) + "]");
        }
    } else {
        EXPECT_EQ(actual, expected) << where;
    }
}

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tracebound");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

AnalysisConfig example1_config() {
    AnalysisConfig config;
    config.input = "example1.json";
    config.r = {2};
    config.verify = true;
    return config;
}

const ExtremalEntry& extremal(const BoundReport& report, const std::string& id) {
    for (const auto& e : report.extremal) {
        if (e.id == id) return e;
    }
    throw std::runtime_error("no extremal entry " + id);
}

} // namespace

TEST(Analyze, Example1SecondPower) {
    const auto report = analyze(example1(), example1_config());
    const auto& ws = extremal(report, "wolkowicz_styan");
    EXPECT_NEAR(ws.lower_bound_on_max, 7.1583, 5e-4);
    EXPECT_NEAR(ws.upper_bound_on_min, 3.8417, 5e-4);
    const auto& r2 = extremal(report, "trace_moment_r2");
    EXPECT_NEAR(r2.lower_bound_on_max, 7.2586, 5e-4);
    EXPECT_NEAR(r2.upper_bound_on_min, 3.7414, 5e-4);
    ASSERT_TRUE(report.verification.has_value());
    EXPECT_TRUE(report.passed());
    EXPECT_GT(report.verification->checked, 10u);
    for (const auto& region : report.regions) {
        ASSERT_TRUE(region.check.has_value()) << region.id;
        EXPECT_TRUE(region.check->pass) << region.id;
    }
}

TEST(Analyze, GoldenExample1Report) {
    const auto golden = nlohmann::json::parse(read_file(kData + "/example1_report.json"));
    const auto actual = nlohmann::json::parse(report_to_json(analyze(example1(), example1_config())));
    expect_json_close(actual, golden, 5e-4);
}

TEST(Analyze, IdentityHasZeroRadii) {
    AnalysisConfig config;
    config.input = "identity";
    config.verify = true;
    config.known = 1.0;
    const auto report = analyze(ComplexMatrix<double>::Identity(5, 5), config);
    EXPECT_TRUE(report.passed());
    for (const auto& region : report.regions) EXPECT_EQ(region.extent, 0.0) << region.id;
    for (const auto& e : report.extremal) {
        EXPECT_EQ(e.lower_bound_on_max, 1.0);
        EXPECT_EQ(e.upper_bound_on_min, 1.0);
    }
}

TEST(Analyze, GatedBoundsAreSkippedNotFatal) {
    AnalysisConfig config;
    config.ensemble = EnsembleSpec{EnsembleKind::ginibre, 6, 3};
    const auto report = analyze(config);
    std::vector<std::string> skipped;
    for (const auto& s : report.skipped) skipped.push_back(s.id);
    EXPECT_NE(std::find(skipped.begin(), skipped.end(), "outer_circle r=1"), skipped.end());
    EXPECT_NE(std::find(skipped.begin(), skipped.end(), "wolkowicz_styan"), skipped.end());
    EXPECT_NE(std::find(skipped.begin(), skipped.end(), "trace_moment_r2"), skipped.end());
    EXPECT_TRUE(report.extremal.empty());
    EXPECT_EQ(report.stats.abs_variance_source, "upper_bound");
}

TEST(Analyze, RankOverrideSkipsFullDimensionBounds) {
    AnalysisConfig config = example1_config();
    config.rank = 3;
    config.known = 1.0;
    const auto report = analyze(example1(), config);
    EXPECT_EQ(report.stats.effective_dim, 3u);
    EXPECT_TRUE(report.spread.empty());
    EXPECT_FALSE(report.skipped.empty());
}

TEST(Analyze, InvalidConfigurations) {
    AnalysisConfig config = example1_config();
    config.k = {3};
    EXPECT_THROW(analyze(example1(), config), ParameterError);
    config = example1_config();
    config.r = {};
    EXPECT_THROW(analyze(example1(), config), ParameterError);
    config = example1_config();
    config.rank = 5;
    EXPECT_THROW(analyze(example1(), config), ParameterError);
    config = example1_config();
    config.mode = AbsVarianceSource::normal_formula;
    ComplexMatrix<double> jordan(2, 2);
    jordan << 0, 1, 0, 0;
    EXPECT_THROW(analyze(jordan, config), ModeError);
    config = example1_config();
    config.ensemble = EnsembleSpec{};
    EXPECT_THROW(analyze(config), ParameterError);
}

TEST(Report, JsonRoundTripIsLossless) {
    AnalysisConfig config;
    config.ensemble = EnsembleSpec{EnsembleKind::ginibre, 7, 11};
    config.verify = true;
    config.known = std::complex<double>(0.1, -0.2);
    config.r = {1, 2, 3};
    const auto report = analyze(config);
    const std::string text = report_to_json(report);
    const auto back = report_from_json(text);
    EXPECT_EQ(back, report);
    EXPECT_EQ(report_to_json(back), text);
}

TEST(Report, DeterministicBytes) {
    AnalysisConfig config;
    config.ensemble = EnsembleSpec{EnsembleKind::ginibre, 8, 42};
    config.seed = 42;
    config.verify = true;
    EXPECT_EQ(report_to_json(analyze(config)), report_to_json(analyze(config)));
    EXPECT_EQ(report_to_table(analyze(config)), report_to_table(analyze(config)));
}

TEST(Report, RejectsForeignSchema) {
    auto j = nlohmann::json::parse(report_to_json(analyze(example1(), example1_config())));
    j["schema"] = "other/9";
    EXPECT_THROW(report_from_json(j.dump()), ValidationError);
    EXPECT_THROW(report_from_json("{"), ParseError);
    EXPECT_THROW(report_from_json("{}"), ValidationError);
}

TEST(Report, TableAndCsvUseSixDecimals) {
    const auto report = analyze(example1(), example1_config());
    const auto table = report_to_table(report);
    EXPECT_NE(table.find("lambda_max >= 7.258622"), std::string::npos);
    EXPECT_NE(table.find("5.500000+0.000000i"), std::string::npos);
    const auto csv = report_to_csv(report);
    EXPECT_EQ(csv.rfind("section,id,center,value,claim,pass,margin\n", 0), 0u);
    EXPECT_NE(csv.find("extremal,trace_moment_r2 min,,3.741378"), std::string::npos);
    EXPECT_EQ(format_complex({1.5, -0.25}), "1.500000-0.250000i");
}

TEST(Cli, AnalyzeExample1) {
    const auto r = cli({"analyze", "--input", kData + "/example1.json", "--r", "2", "--verify"});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    const auto report = report_from_json(r.out);
    EXPECT_NEAR(extremal(report, "trace_moment_r2").lower_bound_on_max, 7.2586, 5e-4);
}

TEST(Cli, FormatsAndOutputs) {
    EXPECT_EQ(cli({"analyze", "--input", kData + "/example1_upper.mtx", "--out", "table"}).code, kExitOk);
    EXPECT_EQ(cli({"analyze", "--input", kData + "/example1.csv", "--out", "csv", "--k", "1,2"}).code, kExitOk);
    const auto forced = cli({"analyze", "--input", kData + "/example1.json", "--format", "csv"});
    EXPECT_EQ(forced.code, kExitInputError);
    EXPECT_NE(forced.err.find("line 1"), std::string::npos);
}

TEST(Cli, ClaimFailureExitCode) {
    // Square spectrum: the complex count claim of the k = 2 disk fails.
    const auto r = cli({"analyze", "--ensemble", "diagonal", "--values", "1,i,-1,-i", "--verify"});
    EXPECT_EQ(r.code, kExitClaimFailure) << r.err;
}

TEST(Cli, InputErrorExitCodes) {
    EXPECT_EQ(cli({"analyze", "--input", kData + "/nope.json"}).code, kExitInputError);
    EXPECT_EQ(cli({"analyze", "--input", kData + "/example1.json", "--k", "3"}).code, kExitInputError);
    EXPECT_EQ(cli({"analyze", "--input", kData + "/example1.json", "--mode", "bogus"}).code, kExitInputError);
    EXPECT_EQ(cli({"analyze"}).code, kExitInputError);
    EXPECT_EQ(cli({}).code, kExitInputError);
    EXPECT_EQ(cli({"verify", "--ensemble", "wishart", "--n", "4"}).code, kExitInputError);
    EXPECT_EQ(cli({"verify", "--ensemble", "ginibre"}).code, kExitInputError);
    EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, SeedFallsBackToEnvironment) {
    ::setenv("TRACEBOUND_SEED", "77", 1);
    const auto from_env = cli({"analyze", "--ensemble", "ginibre", "--n", "5"});
    ::unsetenv("TRACEBOUND_SEED");
    const auto explicit_seed = cli({"analyze", "--ensemble", "ginibre", "--n", "5", "--seed", "77"});
    EXPECT_EQ(from_env.code, kExitOk);
    EXPECT_EQ(from_env.out, explicit_seed.out);
    const auto report = report_from_json(from_env.out);
    EXPECT_EQ(report.provenance.config.seed, 77u);

    ::setenv("TRACEBOUND_SEED", "x", 1);
    EXPECT_EQ(cli({"analyze", "--ensemble", "ginibre", "--n", "5"}).code, kExitInputError);
    ::unsetenv("TRACEBOUND_SEED");
}

TEST(Cli, VerifyHermitian) {
    const auto r = cli({"verify", "--ensemble", "hermitian", "--n", "8", "--trials", "1000", "--seed", "1"});
    EXPECT_EQ(r.code, kExitOk) << r.out;
    EXPECT_NE(r.out.find("failures 0"), std::string::npos);
}

TEST(Cli, VerifyDiagonalWitness) {
    const auto r = cli({"verify", "--ensemble", "diagonal", "--values", "0,0,0,4", "--out", "json"});
    EXPECT_EQ(r.code, kExitOk) << r.out;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("failure_count"), 0);
    EXPECT_NEAR(j.at("families").at("samuelson").at("min_margin").get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(j.at("families").at("order_statistic").at("min_margin").get<double>(), 0.0, 1e-12);
}

TEST(Cli, VerifyJordanDefective) {
    const auto r = cli({"verify", "--ensemble", "jordan_defective", "--n", "6", "--trials", "200", "--seed", "3"});
    EXPECT_EQ(r.code, kExitOk) << r.out;
}

TEST(Cli, VerifyGinibreReportsClaimFailures) {
    const auto r = cli({"verify", "--ensemble", "ginibre", "--n", "4", "--trials", "50", "--seed", "1"});
    EXPECT_EQ(r.code, kExitClaimFailure);
    EXPECT_NE(r.out.find("FAIL central_disk k=2"), std::string::npos);
}
