#include "eigengrowth/app.hpp"
#include "eigengrowth/config.hpp"
#include "eigengrowth/error.hpp"
#include "eigengrowth/expr.hpp"
#include "eigengrowth/report.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

using namespace eigengrowth;

namespace {

ScenarioConfig scenario(const std::string& text) { return parse_config(text); }

bool starts_with_module(const std::string& msg) {
    const auto close = msg.find(']');
    return !msg.empty() && msg.front() == '[' && close != std::string::npos && close > 1;
}

}  // namespace

TEST(Expression, EvaluatesArithmetic) {
    EXPECT_DOUBLE_EQ(Expression::parse("x*(1-x)")(0.25), 0.1875);
    EXPECT_DOUBLE_EQ(Expression::parse("2^3^2")(0.0), 512.0);
    EXPECT_DOUBLE_EQ(Expression::parse("-x^2")(3.0), -9.0);
    EXPECT_DOUBLE_EQ(Expression::parse("(1+x)/2")(3.0), 2.0);
    EXPECT_NEAR(Expression::parse("sin(pi*x)")(0.5), 1.0, 1e-15);
    EXPECT_NEAR(Expression::parse("exp(log(x))")(2.5), 2.5, 1e-14);
    EXPECT_DOUBLE_EQ(Expression::parse("abs(x) + sqrt(4)")(-1.0), 3.0);
    EXPECT_DOUBLE_EQ(Expression::parse("1e-3*x")(2.0), 2e-3);
}

TEST(Expression, ErrorsNamePosition) {
    for (const char* bad : {"x*", "(x", "foo(x)", "x 1", "1..2", ""}) {
        try {
            Expression::parse(bad);
            FAIL() << bad;
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            EXPECT_EQ(msg.rfind("[cli]", 0), 0u) << msg;
            EXPECT_NE(msg.find("position"), std::string::npos) << msg;
        }
    }
}

TEST(Config, ParsesSectionsAndLists) {
    const ScenarioConfig c = scenario(
        "[scenario]\nkind = growth\n"
        "[model]\nexample = ex-6.1.1\nx0 = 0.4\n"
        "[sim]\nhorizon = 20\ndt = 0.01\nn_paths = 50\nseed = 9\nthreads = 3\n"
        "[growth]\ntolerance = 0.2\n"
        "[arbitrage]\nhorizons = 2, 8\n");
    EXPECT_EQ(c.kind, ScenarioKind::growth);
    EXPECT_EQ(c.example, "ex-6.1.1");
    EXPECT_EQ(c.x0, (Point{0.4}));
    EXPECT_EQ(c.sim.T, 20.0);
    EXPECT_EQ(c.sim.n_paths, 50u);
    EXPECT_EQ(c.sim.seed, 9u);
    EXPECT_EQ(c.sim.threads, 3u);
    EXPECT_TRUE(c.threads_from_file);
    EXPECT_EQ(c.growth_tolerance, 0.2);
    EXPECT_EQ(c.arbitrage_horizons, (std::vector<double>{2.0, 8.0}));
}

TEST(Config, UnknownKeyIsRejected) {
    try {
        scenario("[sim]\nhorizn = 3\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("sim.horizn"), std::string::npos);
    }
    EXPECT_THROW(scenario("[scenario]\nkind = dance\n"), ConfigError);
}

TEST(Config, ValidateNeedsExactlyOneModel) {
    ScenarioConfig c;
    EXPECT_THROW(c.validate(), ConfigError);
    c.example = "ex-6.1.1";
    c.c_expr = "x";
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Scenario, VerifyExamplePasses) {
    ScenarioConfig c;
    c.kind = ScenarioKind::verify_example;
    c.example = "gbm-6.2.1";
    const Report r = run_scenario(c);
    EXPECT_EQ(r.body["status"], "pass");
    EXPECT_LT(r.body["results"]["residual"].get<double>(), 1e-5);
}

TEST(Scenario, EigenFromExpression) {
    ScenarioConfig c;
    c.c_expr = "x*(1-x)";
    c.alpha = 0.0;
    c.beta = 1.0;
    const Report r = run_scenario(c);
    EXPECT_NEAR(r.body["results"]["lambda"].get<double>(), 1.0, 1e-3);
    EXPECT_EQ(r.body["status"], "pass");
    ASSERT_FALSE(r.tables.empty());
}

TEST(Scenario, ClassifyCubicIsZero) {
    ScenarioConfig c;
    c.kind = ScenarioKind::classify;
    c.c_expr = "x^3*(1-x)^3";
    c.alpha = 0.0;
    c.beta = 1.0;
    EXPECT_EQ(run_scenario(c).body["results"]["lambda_sign"], "zero");
}

TEST(Scenario, DefaultAbsorbLevelFitsStartingPoint) {
    ScenarioConfig c;
    c.kind = ScenarioKind::arbitrage;
    c.sim.n_paths = 50;
    c.arbitrage_horizons = {4.0, 16.0};
    const Report r = run_scenario(c);
    // x0 = 1 on (0, 1e6) first lies in E_18
    EXPECT_EQ(r.body["inputs"]["sim"]["absorb_level"], 18);
    EXPECT_EQ(r.body["results"]["rows"].size(), 2u);
}

TEST(Scenario, UnknownExampleExitsWithError) {
    ScenarioConfig c;
    c.kind = ScenarioKind::verify_example;
    c.example = "nope";
    std::ostringstream out, err;
    EXPECT_EQ(run_and_report(c, out, err), kExitError);
    EXPECT_NE(err.str().find("ex-6.1.1"), std::string::npos);
    EXPECT_TRUE(starts_with_module(err.str()));
}

TEST(Scenario, ErrorMessagesNameModule) {
    std::vector<ScenarioConfig> bad(5);
    bad[0].c_expr = "x*(1-x)";
    bad[0].alpha = 1.0;
    bad[0].beta = 0.0;
    bad[1].example = "ex-6.1.1";
    bad[1].sim.dt = -1.0;
    bad[1].kind = ScenarioKind::simulate;
    bad[2].example = "ex-6.1.1";
    bad[2].solver.grid_size = 3;
    bad[3].example = "ex-6.1.1";
    bad[3].x0 = {2.0};
    bad[4].c_expr = "x*(";
    bad[4].alpha = 0.0;
    bad[4].beta = 1.0;
    for (const ScenarioConfig& c : bad) {
        std::ostringstream out, err;
        EXPECT_EQ(run_and_report(c, out, err), kExitError);
        EXPECT_TRUE(starts_with_module(err.str())) << err.str();
    }
}

TEST(ScenarioProperty, ReportDeterministicAcrossWorkers) {
    ScenarioConfig c;
    c.kind = ScenarioKind::growth;
    c.example = "ex-6.1.1";
    c.sim.T = 5.0;
    c.sim.dt = 1e-2;
    c.sim.n_paths = 200;
    c.sim.absorb_level = 2;
    c.growth_tolerance = 10.0;
    std::string reference;
    for (std::size_t threads : {1u, 4u, 8u, 1u}) {
        c.sim.threads = threads;
        const std::string dump = run_scenario(c).deterministic_body().dump();
        if (reference.empty()) reference = dump;
        EXPECT_EQ(dump, reference) << threads;
    }
}

TEST(Report, NonFiniteNumbersAreStrings) {
    EXPECT_EQ(json_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(json_number(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(json_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(0.1), "0.1");
}

TEST(Report, CsvRendersHeaderAndRows) {
    CsvTable t{"t", {"a", "b"}, {}};
    t.add_row({"1", "2"});
    EXPECT_EQ(t.render(), "a,b\n1,2\n");
    EXPECT_THROW(t.add_row({"1"}), PreconditionError);
}

TEST(ListExamples, OneLinePerEntry) {
    const std::string s = list_examples();
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 8);
    EXPECT_NE(s.find("bessel-4.3"), std::string::npos);
}
