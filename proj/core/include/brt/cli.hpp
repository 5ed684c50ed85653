#pragma once

#include "brt/test_engine.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace brt {

enum class OutputMode { text, json, both };

/// Thrown for --help / --version: the message should be printed and the
/// process should exit 0 without running anything.
struct CleanExit {
    std::string message;
};

/// Parsed and validated command line.
struct CliInvocation {
    std::string data_path;
    std::vector<std::string> endogenous;
    std::vector<std::string> instruments;
    std::vector<std::string> partial;
    std::vector<std::pair<std::string, int>> lags;  ///< (column, order)
    std::optional<std::string> time_column;
    std::optional<int> rank;
    bool allrank = false;
    int numboot = 1000;
    double beta = 0.005;
    std::optional<double> kappan;  ///< empty means auto (n^{-1/4})
    std::optional<int> blocksize;
    std::optional<std::string> cluster;
    bool noconstant = false;
    bool cfa = false;
    std::uint64_t seed = 12345;
    OutputMode output = OutputMode::text;
    std::optional<std::string> out_path;
};

/// Parses argv (excluding the program name). Throws UsageError with a
/// diagnostic naming the offending flag on any invalid invocation.
CliInvocation parse_cli(const std::vector<std::string>& args);

/// Loads the data, runs the test, and writes the requested renderings.
/// Returns the report for callers that want the numbers.
TestReport run_invocation(const CliInvocation& inv, std::ostream& out);

/// Full entry point: parse, run, render, map errors to exit codes
/// (0 success, 1 usage error, 2 data/numeric error).
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace brt
