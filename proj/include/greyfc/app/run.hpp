#pragma once

#include "greyfc/rolling.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace greyfc::app {

enum class Command { Fit, Roll, Bench, Metrics };

struct RunConfig {
    Command command = Command::Fit;
    std::string model = "gm11"; ///< gm11 | ngbm | ongbm (fit), rongbm (roll)
    std::optional<std::string> dataset;
    std::optional<std::string> input;
    std::optional<double> exponent; ///< --n (fixed-parameter models)
    std::optional<double> weight;   ///< --P
    double step = 0.005;            ///< search lattice step
    std::optional<std::size_t> train;
    std::optional<std::size_t> horizon;
    std::optional<std::size_t> window;
    Feedback feedback = Feedback::Predicted;
    bool correction = true;
    std::optional<std::string> output;
    std::string format = "json"; ///< json | csv (bench: text | json)
    bool timestamp = true;
    std::optional<std::string> expected; ///< bench: expectation overrides
};

struct RunOutput {
    std::string rendered;            ///< exact bytes written to the target
    nlohmann::ordered_json document; ///< structured form of the report
};

/// Build the report for a config without touching the filesystem output.
RunOutput execute(const RunConfig& config);

/// execute() plus writing to --output or stdout. Returns the process exit
/// status: 0, except for a bench run with failed checks, which returns 1
/// after the report is written so the mismatches are still visible.
int run(const RunConfig& config);

} // namespace greyfc::app
