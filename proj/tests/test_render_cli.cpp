#include "brt/cli.hpp"
#include "brt/render.hpp"

#include "brt/errors.hpp"
#include "test_util.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace brt;
using testutil::data_path;

namespace {

std::vector<std::string> klein_args(std::initializer_list<std::string> extra = {}) {
    std::vector<std::string> args{
        "--data",        data_path("klein.csv"),
        "--endogenous",  "profits,wagetot",
        "--instruments", "govt,taxnetx,year,wagegovt,capital1,totinc_L1",
        "--partial",     "profits_L1",
        "--lag",         "totinc:1",
        "--lag",         "profits:1",
        "--time",        "yr",
    };
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

}  // namespace

TEST_CASE("parse_cli: defaults mirror the documented option surface") {
    CliInvocation inv = parse_cli(klein_args());
    CHECK_FALSE(inv.rank.has_value());  // resolved to k - 1 after load
    CHECK(inv.numboot == 1000);
    CHECK(inv.beta == 0.005);
    CHECK_FALSE(inv.kappan.has_value());  // auto: n^{-1/4}
    CHECK_FALSE(inv.blocksize.has_value());
    CHECK_FALSE(inv.cluster.has_value());
    CHECK_FALSE(inv.noconstant);
    CHECK_FALSE(inv.cfa);
    CHECK(inv.seed == 12345);
    CHECK(inv.output == OutputMode::text);
    CHECK(inv.endogenous == std::vector<std::string>{"profits", "wagetot"});
    CHECK(inv.instruments.size() == 6);
    CHECK(inv.lags.size() == 2);
}

TEST_CASE("parse_cli: conflicting and malformed flags") {
    CHECK_THROWS_AS(parse_cli(klein_args({"--cluster", "g", "--blocksize", "2"})), UsageError);
    CHECK_THROWS_AS(parse_cli(klein_args({"--rank", "1", "--allrank"})), UsageError);
    CHECK_THROWS_AS(parse_cli(klein_args({"--numboot", "0"})), UsageError);
    CHECK_THROWS_AS(parse_cli(klein_args({"--kappan", "-1"})), UsageError);
    CHECK_THROWS_AS(parse_cli(klein_args({"--kappan", "zzz"})), UsageError);
    CHECK_THROWS_AS(parse_cli(klein_args({"--lag", "badspec"})), UsageError);
    CHECK_THROWS_AS(parse_cli(klein_args({"--output", "yaml"})), UsageError);
    CHECK_THROWS_AS(parse_cli(klein_args({"--output", "both"})), UsageError);  // needs --out
    CHECK_THROWS_AS(parse_cli(klein_args({"--unknown-flag"})), UsageError);
    CHECK_THROWS_AS(parse_cli({"--data", "x.csv"}), UsageError);  // missing required lists
    // --lag without --time
    std::vector<std::string> args{"--data", "d.csv", "--endogenous", "x",
                                  "--instruments", "z", "--lag", "c:1"};
    CHECK_THROWS_AS(parse_cli(args), UsageError);
}

TEST_CASE("parse_cli: help is a clean exit, not an error") {
    CHECK_THROWS_AS(parse_cli({"--help"}), CleanExit);
}

TEST_CASE("run_invocation: klein text output matches the logged shape") {
    CliInvocation inv = parse_cli(klein_args({"--cfa"}));
    std::ostringstream out;
    TestReport rep = run_invocation(inv, out);
    std::string text = out.str();

    CHECK(text.find("Test statistic in the second step of the two-step approach = 8.100531") !=
          std::string::npos);
    CHECK(text.find("The p-value in the second step of the two-step approach = .") !=
          std::string::npos);
    CHECK(text.find("smaller than alpha-.005") != std::string::npos);
    CHECK(text.find("Test statistic for the analytical approach = 8.100531") != std::string::npos);
    CHECK(text.find("The p-value for the analytical approach = .") != std::string::npos);
    CHECK(rep.two_step.reject);
}

TEST_CASE("run_invocation: rank >= k is rejected after load") {
    CliInvocation inv = parse_cli(klein_args({"--rank", "2"}));
    std::ostringstream out;
    CHECK_THROWS_WITH_AS(run_invocation(inv, out), doctest::Contains("0 <= r < 2"),
                         InvalidRankError);
}

TEST_CASE("render_json: klein scalar keys and lossless doubles") {
    CliInvocation inv = parse_cli(klein_args({"--cfa"}));
    inv.numboot = 300;
    std::ostringstream sink;
    TestReport rep = run_invocation(inv, sink);
    std::string payload = render_json(rep);
    auto j = nlohmann::json::parse(payload);

    for (const char* key : {"cfa_Teststat", "cfa_Pvalue", "cfa_Rankestimate", "cft_Teststat",
                            "cft_Pvalue", "cft_Rankestimate"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["command"] == "bootranktest");
    CHECK(j["run"]["scheme"] == "wild");
    CHECK(j["run"]["B"] == 300);
    CHECK(j["run"]["n"] == 21);
    CHECK(j["run"]["n_source"] == 22);

    // bitwise round trip of every numeric field
    CHECK(j["cft_Teststat"].get<double>() == *rep.two_step.statistic);
    CHECK(j["cft_Pvalue"].get<double>() == *rep.two_step.p_value);
    CHECK(j["cft_Critvalue"].get<double>() == *rep.two_step.critical_value);
    CHECK(j["cfa_Teststat"].get<double>() == rep.analytic->statistic);
    CHECK(j["cfa_Pvalue"].get<double>() == rep.analytic->p_value);
    CHECK(j["cfa_Critvalue"].get<double>() == rep.analytic->critical_value);
    CHECK(j["statistic"].get<double>() == rep.statistic);
    CHECK(j["run"]["kappan"].get<double>() == rep.kappa_n);
}

TEST_CASE("render_json: first-step rejection omits the second-step scalars") {
    TestReport rep;
    rep.r = 1;
    rep.statistic = 12.0;
    rep.two_step.rank_estimate = 2;
    rep.two_step.first_step_rejected = true;
    rep.two_step.reject = true;
    rep.scheme_name = "wild";

    auto j = nlohmann::json::parse(render_json(rep));
    CHECK_FALSE(j.contains("cft_Teststat"));
    CHECK_FALSE(j.contains("cft_Pvalue"));
    CHECK(j.contains("cft_Rankestimate"));
    CHECK(j["cft_FirstStepRejected"] == true);

    std::string text = render_text(rep);
    CHECK(text.find("rank estimate exceeds hypothesized rank; H0 rejected in the first step") !=
          std::string::npos);
}

TEST_CASE("render: allrank emits k rows and per-rank text blocks") {
    CliInvocation inv = parse_cli(klein_args({"--cfa", "--allrank"}));
    inv.numboot = 300;
    std::ostringstream out;
    TestReport rep = run_invocation(inv, out);

    auto j = nlohmann::json::parse(render_json(rep));
    REQUIRE(j.contains("cft_rkmatrix"));
    CHECK(j["cft_rkmatrix"].size() == 2);
    CHECK(j["cfa_rkmatrix"].size() == 2);
    CHECK(j["cft_rkmatrix"][0]["r"] == 0);
    CHECK(j["cft_rkmatrix"][1]["r"] == 1);
    CHECK(j["run"]["rank"] == "all");

    std::string text = out.str();
    CHECK(text.find("Results for hypothesized rank r = 0:") != std::string::npos);
    CHECK(text.find("Results for hypothesized rank r = 1:") != std::string::npos);
}

TEST_CASE("render_text: p-value formatting is stata-style") {
    TestReport rep;
    rep.r = 0;
    rep.statistic = 69.488582;
    rep.beta = 0.005;
    rep.two_step.rank_estimate = 0;
    rep.two_step.statistic = 69.488582;
    rep.two_step.p_value = 0.63;
    rep.two_step.critical_value = 100.0;
    rep.scheme_name = "block";

    std::string text = render_text(rep);
    CHECK(text.find("= 69.488582") != std::string::npos);
    CHECK(text.find("= .63\n") != std::string::npos);

    rep.two_step.p_value = 0.0;
    CHECK(render_text(rep).find("= 0\n") != std::string::npos);
    rep.two_step.p_value = 1.0;
    CHECK(render_text(rep).find("= 1\n") != std::string::npos);
    rep.two_step.p_value = 0.031;
    CHECK(render_text(rep).find("= .031\n") != std::string::npos);
}

TEST_CASE("cli_main: exit codes") {
    std::ostringstream out, err;
    CHECK(cli_main(klein_args(), out, err) == 0);
    CHECK(cli_main({"--bogus"}, out, err) == 1);
    CHECK(cli_main({"--data", "missing.csv", "--endogenous", "x", "--instruments", "z"}, out,
                   err) == 2);
    CHECK(cli_main({"--help"}, out, err) == 0);
}

TEST_CASE("run_invocation: json written to --out") {
    std::string path = "brt_cli_out_test.json";
    CliInvocation inv = parse_cli(klein_args({"--output", "json"}));
    inv.numboot = 100;
    inv.out_path = path;
    std::ostringstream out;
    run_invocation(inv, out);
    auto j = nlohmann::json::parse(out.str());
    CHECK(j.contains("cft_Teststat"));
    std::ifstream f(path);
    REQUIRE(f.good());
    nlohmann::json j2;
    f >> j2;
    CHECK(j2 == j);
    std::remove(path.c_str());
}

TEST_CASE("run_invocation: both mode writes text to stdout and json to --out") {
    std::string path = "brt_cli_both_test.json";
    CliInvocation inv = parse_cli(klein_args({"--output", "both", "--out", path}));
    inv.numboot = 100;
    std::ostringstream out;
    run_invocation(inv, out);
    CHECK(out.str().find("two-step approach") != std::string::npos);
    CHECK(out.str().find("cft_Teststat") == std::string::npos);
    std::ifstream f(path);
    REQUIRE(f.good());
    nlohmann::json j;
    f >> j;
    CHECK(j.contains("cft_Teststat"));
    std::remove(path.c_str());
}
