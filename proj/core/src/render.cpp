#include "brt/render.hpp"

#include "brt/version.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace brt {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_stat(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.8g", v);
    return buf;
}

// Stata-style 3-decimal p-value: leading zero dropped, trailing zeros trimmed
// (".031", ".63", "0", "1").
std::string format_pvalue(double p) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.3f", p);
    std::string s(buf);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s.rfind("0.", 0) == 0) s.erase(0, 1);
    if (s.empty()) s = "0";
    return s;
}

void render_block(std::ostream& os, const TwoStepResult& ts,
                  const std::optional<AnalyticResult>& an, double beta) {
    if (ts.first_step_rejected) {
        os << "rank estimate exceeds hypothesized rank; H0 rejected in the first step\n";
    } else {
        os << "Test statistic in the second step of the two-step approach = "
           << format_stat(*ts.statistic) << "\n";
        os << "The p-value in the second step of the two-step approach = "
           << format_pvalue(*ts.p_value) << "\n";
        os << "(Note: the null hypothesis is rejected at alpha level if the p-value is "
              "smaller than alpha-"
           << format_pvalue(beta) << ").\n";
    }
    if (an) {
        os << "Test statistic for the analytical approach = " << format_stat(an->statistic)
           << "\n";
        os << "The p-value for the analytical approach = " << format_pvalue(an->p_value) << "\n";
    }
}

ordered_json two_step_row(int r, const TwoStepResult& ts) {
    ordered_json row;
    row["r"] = r;
    row["rankestimate"] = ts.rank_estimate;
    row["first_step_rejected"] = ts.first_step_rejected;
    if (ts.statistic) row["teststat"] = *ts.statistic;
    if (ts.p_value) row["pvalue"] = *ts.p_value;
    if (ts.critical_value) row["critvalue"] = *ts.critical_value;
    row["reject"] = ts.reject;
    return row;
}

ordered_json analytic_row(int r, const AnalyticResult& an) {
    ordered_json row;
    row["r"] = r;
    row["rankestimate"] = an.rank_estimate;
    row["teststat"] = an.statistic;
    row["pvalue"] = an.p_value;
    row["critvalue"] = an.critical_value;
    row["reject"] = an.reject;
    return row;
}

}  // namespace

std::string render_text(const TestReport& report) {
    std::ostringstream os;
    if (report.allrank_table) {
        bool first = true;
        for (const auto& row : *report.allrank_table) {
            if (!first) os << "\n";
            first = false;
            os << "Results for hypothesized rank r = " << row.r << ":\n";
            render_block(os, row.two_step, row.analytic, report.beta);
        }
    } else {
        render_block(os, report.two_step, report.analytic, report.beta);
    }
    for (const auto& w : report.warnings) os << "warning: " << w << "\n";
    return os.str();
}

std::string render_json(const TestReport& report) {
    ordered_json j;
    j["command"] = "bootranktest";

    j["cft_Rankestimate"] = report.two_step.rank_estimate;
    j["cft_FirstStepRejected"] = report.two_step.first_step_rejected;
    if (report.two_step.statistic) j["cft_Teststat"] = *report.two_step.statistic;
    if (report.two_step.p_value) j["cft_Pvalue"] = *report.two_step.p_value;
    if (report.two_step.critical_value) j["cft_Critvalue"] = *report.two_step.critical_value;
    j["cft_Reject"] = report.two_step.reject;

    if (report.analytic) {
        j["cfa_Rankestimate"] = report.analytic->rank_estimate;
        j["cfa_Teststat"] = report.analytic->statistic;
        j["cfa_Pvalue"] = report.analytic->p_value;
        j["cfa_Critvalue"] = report.analytic->critical_value;
        j["cfa_Reject"] = report.analytic->reject;
    }

    if (report.allrank_table) {
        ordered_json cft = ordered_json::array();
        ordered_json cfa = ordered_json::array();
        for (const auto& row : *report.allrank_table) {
            cft.push_back(two_step_row(row.r, row.two_step));
            if (row.analytic) cfa.push_back(analytic_row(row.r, *row.analytic));
        }
        j["cft_rkmatrix"] = cft;
        if (!cfa.empty()) j["cfa_rkmatrix"] = cfa;
    }

    ordered_json trail = ordered_json::array();
    for (const auto& step : report.kp_trail) {
        ordered_json t;
        t["q"] = step.q;
        t["stat"] = step.stat;
        t["df"] = step.df;
        t["pvalue"] = step.p_value;
        trail.push_back(t);
    }
    j["kp_trail"] = trail;

    ordered_json repro;
    repro["version"] = kVersion;
    repro["seed"] = report.seed;
    repro["B"] = report.B;
    repro["scheme"] = report.scheme_name;
    if (report.scheme_name == "block") repro["block_length"] = report.block_length;
    repro["rank"] = report.allrank_table ? ordered_json("all") : ordered_json(report.r);
    repro["alpha"] = report.alpha;
    repro["beta"] = report.beta;
    repro["kappan"] = report.kappa_n;
    repro["n"] = report.n;
    repro["n_source"] = report.n_source;
    repro["m"] = report.m;
    repro["k"] = report.k;
    j["run"] = repro;

    j["statistic"] = report.statistic;
    if (!report.warnings.empty()) j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

}  // namespace brt
