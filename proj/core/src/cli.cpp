#include "brt/cli.hpp"

#include "brt/dataset.hpp"
#include "brt/errors.hpp"
#include "brt/render.hpp"
#include "brt/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace brt {

namespace {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::pair<std::string, int> parse_lag_spec(const std::string& spec) {
    auto pos = spec.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == spec.size()) {
        throw UsageError("--lag expects column:order, got '" + spec + "'");
    }
    int order = 0;
    try {
        std::size_t used = 0;
        order = std::stoi(spec.substr(pos + 1), &used);
        if (used != spec.size() - pos - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw UsageError("--lag order must be an integer in '" + spec + "'");
    }
    if (order < 1) throw UsageError("--lag order must be positive in '" + spec + "'");
    return {spec.substr(0, pos), order};
}

}  // namespace

CliInvocation parse_cli(const std::vector<std::string>& args) {
    CLI::App app{"Bootstrap test of the rank of the first-stage coefficient matrix"};
    app.name("bootranktest");
    app.set_version_flag("--version", std::string("bootranktest ") + kVersion);

    CliInvocation inv;
    std::string endogenous_csv, instruments_csv, partial_csv;
    std::vector<std::string> lag_specs;
    std::string kappan_str = "auto";
    std::string output_str = "text";
    std::string time_col, cluster_col, out_path;
    int rank_opt = -1;
    int blocksize_opt = 0;

    app.add_option("--data", inv.data_path, "CSV file with a header row")->required();
    app.add_option("--endogenous", endogenous_csv,
                   "comma-separated endogenous variables (the X block)")
        ->required();
    app.add_option("--instruments", instruments_csv,
                   "comma-separated excluded instruments (the Z block)")
        ->required();
    app.add_option("--partial", partial_csv, "comma-separated exogenous controls (the W block)");
    app.add_option("--lag", lag_specs, "construct column:order lagged copies (repeatable)");
    app.add_option("--time", time_col, "integer time column; rows are sorted by it");
    auto* rank_o = app.add_option("--rank", rank_opt, "hypothesized rank r (default k-1)");
    auto* allrank_o = app.add_flag("--allrank", inv.allrank, "report results for every r < k");
    app.add_option("--numboot", inv.numboot, "number of bootstrap samples (default 1000)");
    app.add_option("--beta", inv.beta, "level of the sequential first-step tests (default 0.005)");
    app.add_option("--kappan", kappan_str,
                   "singular value threshold, or 'auto' for n^(-1/4) (default auto)");
    auto* block_o = app.add_option("--blocksize", blocksize_opt,
                                   "block length; selects the block bootstrap");
    app.add_option("--cluster", cluster_col, "cluster column; selects the cluster bootstrap");
    app.add_flag("--noconstant", inv.noconstant, "do not add a constant to the controls");
    app.add_flag("--cfa", inv.cfa, "also report the analytical approach");
    app.add_option("--seed", inv.seed, "RNG seed (default 12345)");
    app.add_option("--output", output_str, "text, json, or both (default text)");
    app.add_option("--out", out_path, "write the JSON report to this path");

    std::vector<std::string> argv_copy(args.rbegin(), args.rend());
    try {
        app.parse(argv_copy);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help / --version: print and signal a clean exit
            std::ostringstream os;
            if (dynamic_cast<const CLI::CallForHelp*>(&e) != nullptr) {
                os << app.help();
            } else {
                os << "bootranktest " << kVersion << "\n";
            }
            throw CleanExit{os.str()};
        }
        throw UsageError(e.what());
    }

    inv.endogenous = split_list(endogenous_csv);
    inv.instruments = split_list(instruments_csv);
    inv.partial = split_list(partial_csv);
    for (const auto& spec : lag_specs) inv.lags.push_back(parse_lag_spec(spec));
    if (!time_col.empty()) inv.time_column = time_col;
    if (rank_o->count() > 0) inv.rank = rank_opt;
    if (block_o->count() > 0) inv.blocksize = blocksize_opt;
    if (!cluster_col.empty()) inv.cluster = cluster_col;
    if (!out_path.empty()) inv.out_path = out_path;

    if (inv.endogenous.empty()) throw UsageError("--endogenous list is empty");
    if (inv.instruments.empty()) throw UsageError("--instruments list is empty");
    if (inv.blocksize && inv.cluster) {
        throw UsageError("--blocksize and --cluster are mutually exclusive");
    }
    if (rank_o->count() > 0 && allrank_o->count() > 0) {
        throw UsageError("--rank and --allrank are mutually exclusive");
    }
    if (inv.rank && *inv.rank < 0) throw UsageError("--rank must be nonnegative");
    if (inv.numboot < 1) throw UsageError("--numboot must be at least 1");
    if (inv.blocksize && *inv.blocksize < 1) throw UsageError("--blocksize must be positive");
    if (!(inv.beta > 0.0 && inv.beta < 1.0)) throw UsageError("--beta must lie in (0, 1)");
    if (!inv.lags.empty() && !inv.time_column) {
        throw UsageError("--lag requires --time to designate the time column");
    }

    if (kappan_str != "auto") {
        try {
            std::size_t used = 0;
            double v = std::stod(kappan_str, &used);
            if (used != kappan_str.size() || !(v > 0.0)) throw std::invalid_argument("");
            inv.kappan = v;
        } catch (const std::exception&) {
            throw UsageError("--kappan must be a positive real or 'auto'");
        }
    }

    if (output_str == "text") {
        inv.output = OutputMode::text;
    } else if (output_str == "json") {
        inv.output = OutputMode::json;
    } else if (output_str == "both") {
        inv.output = OutputMode::both;
        if (!inv.out_path) throw UsageError("--output both requires --out for the JSON file");
    } else {
        throw UsageError("--output must be text, json, or both");
    }
    return inv;
}

TestReport run_invocation(const CliInvocation& inv, std::ostream& out) {
    CsvSchema schema;
    schema.numeric_columns = inv.endogenous;
    schema.numeric_columns.insert(schema.numeric_columns.end(), inv.instruments.begin(),
                                  inv.instruments.end());
    schema.numeric_columns.insert(schema.numeric_columns.end(), inv.partial.begin(),
                                  inv.partial.end());
    // lagged source columns must be loaded even when only the lag is referenced
    for (const auto& [col, order] : inv.lags) {
        if (std::find(schema.numeric_columns.begin(), schema.numeric_columns.end(), col) ==
            schema.numeric_columns.end()) {
            schema.numeric_columns.push_back(col);
        }
    }
    // base (non-lag) referenced columns only; drop names produced by --lag
    for (const auto& [col, order] : inv.lags) {
        std::string lagged = col + "_L" + std::to_string(order);
        std::erase(schema.numeric_columns, lagged);
    }
    schema.cluster_column = inv.cluster;
    schema.time_column = inv.time_column;

    Table table = load_csv(inv.data_path, schema);
    if (inv.time_column) table.sort_by_time();
    for (const auto& [col, order] : inv.lags) lag(table, col, order);

    Dataset d = assemble(table, inv.endogenous, inv.instruments, inv.partial, inv.noconstant,
                         inv.cluster);

    TestConfig cfg;
    cfg.r = inv.rank;
    cfg.allrank = inv.allrank;
    cfg.B = inv.numboot;
    cfg.beta = inv.beta;
    cfg.kappa_n = inv.kappan;
    cfg.seed = inv.seed;
    cfg.run_analytic = inv.cfa;
    if (inv.blocksize) {
        cfg.scheme = BootstrapScheme::block(*inv.blocksize);
    } else if (inv.cluster) {
        cfg.scheme = BootstrapScheme::cluster(d);
    } else {
        cfg.scheme = BootstrapScheme::wild();
    }

    TestReport report = run_test(d, cfg);

    if (inv.output == OutputMode::text || inv.output == OutputMode::both) {
        out << render_text(report);
    }
    std::string json = render_json(report);
    if (inv.out_path) {
        std::ofstream f(*inv.out_path);
        if (!f) throw Error("cannot write to '" + *inv.out_path + "'");
        f << json;
    }
    if (inv.output == OutputMode::json) out << json;
    return report;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        CliInvocation inv = parse_cli(args);
        run_invocation(inv, out);
        return 0;
    } catch (const CleanExit& e) {
        out << e.message;
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace brt
