#pragma once

#include "brt/test_engine.hpp"

#include <string>

namespace brt {

/// Human-readable report: statistic and p-value lines for the two-step
/// approach (with the alpha - beta rejection note), then the analytic lines
/// when enabled; one block per rank under allrank.
std::string render_text(const TestReport& report);

/// Machine-readable report. Scalar keys cft_Teststat / cft_Pvalue /
/// cft_Rankestimate (two-step; statistic and p-value absent after a
/// first-step rejection) and cfa_* (analytic, when enabled), cft_rkmatrix /
/// cfa_rkmatrix row arrays under allrank, plus a reproducibility block.
/// Doubles round-trip losslessly.
std::string render_json(const TestReport& report);

}  // namespace brt
