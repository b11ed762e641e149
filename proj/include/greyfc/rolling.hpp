#pragma once

#include "greyfc/model.hpp"
#include "greyfc/optimize.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace greyfc {

/// What gets appended to the window when it slides past a prediction:
/// the model's own output (live forecasting) or the observed value
/// (retrospective validation; needs data covering every window).
enum class Feedback { Predicted, Actual };

struct RollingConfig {
    std::size_t window = 0;  ///< sliding-window length (>= 4)
    std::size_t horizon = 0; ///< number of one-step-ahead predictions
    GridSpec grid{};
    Feedback feedback = Feedback::Predicted;
    bool correction = true;  ///< corrected initial condition per refit
};

/// One slide of the window: the refit parameters and the single-step
/// prediction they produced.
struct RollingStep {
    std::size_t step = 0; ///< 1-based
    std::string window_first;
    std::string window_last;
    std::string label; ///< label of the predicted point
    double weight = 0.0;
    double exponent = 0.0;
    double a = 0.0;
    double b = 0.0;
    double prediction = 0.0;
    double selection_arpe = 0.0;
    bool correction_applied = false;
    bool correction_fallback = false;
};

struct RollingResult {
    /// Base-window fit with the per-step predictions appended; metrics
    /// cover every index that has an observed value.
    FitResult fit;
    std::vector<RollingStep> trace;
};

/// Slide a window of fixed length across the series one step at a time,
/// re-running the full parameter selection from scratch on each window and
/// predicting a single step ahead. Unrounded predictions are fed back.
RollingResult rolling_forecast(const TimeSeries& series, const RollingConfig& config);

} // namespace greyfc
