#include "greyfc/rolling.hpp"

#include "greyfc/errors.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace greyfc {

RollingResult rolling_forecast(const TimeSeries& series, const RollingConfig& config) {
    const std::size_t length = series.size();
    const std::size_t window = config.window;
    if (window < 4) {
        throw ConfigError("rolling window must be at least 4, got " +
                          std::to_string(window));
    }
    if (window > length) {
        throw ConfigError("rolling window " + std::to_string(window) +
                          " exceeds series length " + std::to_string(length));
    }
    if (config.feedback == Feedback::Actual &&
        window + config.horizon > length + 1) {
        throw ConfigError("feedback=actual needs observed data for every window: "
                          "window " + std::to_string(window) + " + horizon " +
                          std::to_string(config.horizon) + " exceeds " +
                          std::to_string(length) + " observations by more than one");
    }

    std::vector<std::string> window_labels(series.labels().begin(),
                                           series.labels().begin() + window);
    std::vector<double> window_values(series.values().begin(),
                                      series.values().begin() + window);

    OngbmOptions options;
    options.grid = config.grid;
    options.horizon = config.horizon == 0 ? 0 : 1;
    options.correction = config.correction;

    OngbmFit current = fit_ongbm(TimeSeries(window_labels, window_values), options);

    const GreyParams base_params = current.fit.params;
    const bool base_correction_applied = current.fit.correction_applied;
    const bool base_correction_fallback = current.fit.correction_fallback;
    std::vector<std::string> labels = current.fit.fitted.labels();
    std::vector<double> fitted = current.fit.fitted.values();

    std::vector<RollingStep> trace;
    trace.reserve(config.horizon);
    for (std::size_t step = 1; step <= config.horizon; ++step) {
        const double prediction = current.fit.fitted.values()[window];
        const std::string prediction_label = current.fit.fitted.labels()[window];

        RollingStep record;
        record.step = step;
        record.window_first = window_labels.front();
        record.window_last = window_labels.back();
        record.label = prediction_label;
        record.weight = current.selection.weight;
        record.exponent = current.selection.exponent;
        record.a = current.fit.params.a;
        record.b = current.fit.params.b;
        record.prediction = prediction;
        record.selection_arpe = current.selection.arpe;
        record.correction_applied = current.fit.correction_applied;
        record.correction_fallback = current.fit.correction_fallback;
        trace.push_back(record);

        if (step > 1) {
            // Step 1's prediction is already the base fit's horizon value.
            labels.push_back(prediction_label);
            fitted.push_back(prediction);
        }
        if (step == config.horizon) {
            break;
        }

        // Slide the window: drop the oldest point, append the next one.
        const std::size_t next_index = window + step; // 1-based global index
        window_labels.erase(window_labels.begin());
        window_values.erase(window_values.begin());
        if (config.feedback == Feedback::Actual && next_index <= length) {
            window_labels.push_back(series.labels()[next_index - 1]);
            window_values.push_back(series.values()[next_index - 1]);
        } else {
            window_labels.push_back(prediction_label);
            window_values.push_back(prediction);
        }
        current = fit_ongbm(TimeSeries(window_labels, window_values), options);
    }

    const std::size_t overlap = std::min(length, fitted.size());
    std::vector<double> actual_overlap(series.values().begin(),
                                       series.values().begin() + overlap);
    std::vector<double> fitted_overlap(fitted.begin(), fitted.begin() + overlap);

    RollingResult result{FitResult{base_params,
                                   TimeSeries(std::move(labels), std::move(fitted)),
                                   {},
                                   {},
                                   base_correction_applied,
                                   base_correction_fallback},
                         std::move(trace)};
    result.fit.metrics = evaluate(actual_overlap, fitted_overlap);
    result.fit.rpe = result.fit.metrics.rpe;
    return result;
}

} // namespace greyfc
