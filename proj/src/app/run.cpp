#include "greyfc/app/run.hpp"

#include "greyfc/app/bench.hpp"
#include "greyfc/app/dataset.hpp"
#include "greyfc/app/io.hpp"
#include "greyfc/errors.hpp"
#include "greyfc/optimize.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

namespace greyfc::app {

namespace {

double round_to(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buffer;
}

struct ReportRow {
    std::string label;
    std::optional<double> actual;
    double fitted = 0.0;
    std::optional<double> rpe;
    double weight = 0.0;
    double exponent = 0.0;
};

struct SourceData {
    TimeSeries series;
    std::string source_kind;  // "dataset" or "input"
    std::string source_name;
    std::size_t default_train;
};

SourceData resolve_source(const RunConfig& config) {
    if (config.dataset && config.input) {
        throw ConfigError("choose either --dataset or --input, not both");
    }
    if (config.dataset) {
        const Dataset& dataset = find_dataset(*config.dataset);
        return {dataset_series(dataset), "dataset", dataset.name,
                dataset.default_train};
    }
    if (config.input) {
        TimeSeries series = load_csv(*config.input);
        std::size_t n = series.size();
        return {std::move(series), "input", *config.input, n};
    }
    throw ConfigError("either --dataset or --input is required");
}

nlohmann::ordered_json params_json(const GreyParams& params, bool correction_applied,
                                   bool correction_fallback) {
    nlohmann::ordered_json node;
    node["a"] = round_to(params.a, 5);
    node["b"] = round_to(params.b, 5);
    node["n"] = params.exponent;
    node["P"] = params.weight;
    node["init"] = round_to(params.init, 5);
    node["anchor"] = params.anchor;
    node["correction_applied"] = correction_applied;
    node["correction_fallback"] = correction_fallback;
    return node;
}

nlohmann::ordered_json metrics_json(const MetricsReport& metrics) {
    nlohmann::ordered_json node;
    node["arpe"] = round_to(metrics.arpe, 2);
    node["rmse"] = round_to(metrics.rmse, 5);
    if (metrics.posterior_ratio) {
        node["posterior_ratio"] = round_to(*metrics.posterior_ratio, 5);
    } else {
        node["posterior_ratio"] = nullptr;
    }
    node["arpe_class"] = std::string(grade_label(metrics.arpe_grade));
    if (metrics.posterior_rank) {
        node["posterior_rank"] = *metrics.posterior_rank;
        node["posterior_label"] =
            std::string(posterior_label(*metrics.posterior_rank));
    } else {
        node["posterior_rank"] = nullptr;
        node["posterior_label"] = nullptr;
    }
    return node;
}

nlohmann::ordered_json points_json(const std::vector<ReportRow>& rows) {
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    for (const ReportRow& row : rows) {
        nlohmann::ordered_json point;
        point["label"] = row.label;
        if (row.actual) {
            point["actual"] = *row.actual;
        } else {
            point["actual"] = nullptr;
        }
        point["fitted"] = round_to(row.fitted, 5);
        if (row.rpe) {
            point["rpe"] = round_to(*row.rpe, 2);
        } else {
            point["rpe"] = nullptr;
        }
        points.push_back(std::move(point));
    }
    return points;
}

std::string rows_csv(const std::vector<ReportRow>& rows,
                     const MetricsReport& metrics) {
    std::ostringstream out;
    out << "label,actual,fitted,rpe,P,n\n";
    for (const ReportRow& row : rows) {
        out << row.label << ',';
        if (row.actual) {
            out << format_roundtrip(*row.actual);
        }
        out << ',' << format_fixed(row.fitted, 5) << ',';
        if (row.rpe) {
            out << format_fixed(*row.rpe, 2);
        }
        out << ',' << format_roundtrip(row.weight) << ','
            << format_roundtrip(row.exponent) << '\n';
    }
    out << "# arpe," << format_fixed(metrics.arpe, 2) << '\n';
    out << "# rmse," << format_fixed(metrics.rmse, 5) << '\n';
    if (metrics.posterior_ratio) {
        out << "# posterior_ratio," << format_fixed(*metrics.posterior_ratio, 5)
            << '\n';
    }
    out << "# arpe_class," << grade_label(metrics.arpe_grade) << '\n';
    if (metrics.posterior_rank) {
        out << "# posterior_rank," << *metrics.posterior_rank << ','
            << posterior_label(*metrics.posterior_rank) << '\n';
    }
    return out.str();
}

std::vector<ReportRow> assemble_rows(const TimeSeries& observed,
                                     const TimeSeries& fitted,
                                     const std::vector<RollingStep>* trace,
                                     std::size_t window, const GreyParams& params) {
    std::vector<ReportRow> rows;
    rows.reserve(fitted.size());
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        ReportRow row;
        row.label = fitted.labels()[i];
        row.fitted = fitted.values()[i];
        if (i < observed.size()) {
            row.actual = observed.values()[i];
            row.rpe = (row.fitted - *row.actual) / *row.actual * 100.0;
        }
        if (trace != nullptr && i >= window) {
            const RollingStep& step = (*trace)[i - window];
            row.weight = step.weight;
            row.exponent = step.exponent;
        } else {
            row.weight = params.weight;
            row.exponent = params.exponent;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

MetricsReport overlap_metrics(const TimeSeries& observed, const TimeSeries& fitted) {
    const std::size_t overlap = std::min(observed.size(), fitted.size());
    std::vector<double> actual(observed.values().begin(),
                               observed.values().begin() + overlap);
    std::vector<double> predicted(fitted.values().begin(),
                                  fitted.values().begin() + overlap);
    return evaluate(actual, predicted);
}

RunOutput render_model_report(const RunConfig& config, const SourceData& source,
                              const TimeSeries& fitted, const GreyParams& params,
                              bool correction_applied, bool correction_fallback,
                              const GridResult* selection,
                              const std::vector<RollingStep>* trace,
                              std::size_t window, std::size_t train,
                              std::size_t horizon) {
    std::vector<ReportRow> rows =
        assemble_rows(source.series, fitted, trace, window, params);
    MetricsReport metrics = overlap_metrics(source.series, fitted);

    nlohmann::ordered_json doc;
    doc["command"] = config.command == Command::Roll ? "roll" : "fit";
    doc["model"] = config.model;
    doc["source"] = {{"kind", source.source_kind}, {"name", source.source_name}};
    if (config.command == Command::Roll) {
        doc["window"] = window;
        doc["feedback"] =
            config.feedback == Feedback::Predicted ? "predicted" : "actual";
    } else {
        doc["train"] = train;
    }
    doc["horizon"] = horizon;
    doc["params"] = params_json(params, correction_applied, correction_fallback);
    if (selection != nullptr) {
        nlohmann::ordered_json node;
        node["arpe"] = round_to(selection->arpe, 2);
        node["step"] = config.step;
        node["feasible"] = selection->feasible;
        doc["selection"] = std::move(node);
    }
    doc["points"] = points_json(rows);
    doc["metrics"] = metrics_json(metrics);
    if (trace != nullptr) {
        nlohmann::ordered_json steps = nlohmann::ordered_json::array();
        for (const RollingStep& step : *trace) {
            nlohmann::ordered_json node;
            node["step"] = step.step;
            node["window"] = step.window_first + ".." + step.window_last;
            node["label"] = step.label;
            node["P"] = step.weight;
            node["n"] = step.exponent;
            node["a"] = round_to(step.a, 5);
            node["b"] = round_to(step.b, 5);
            node["prediction"] = round_to(step.prediction, 5);
            node["correction_applied"] = step.correction_applied;
            node["correction_fallback"] = step.correction_fallback;
            steps.push_back(std::move(node));
        }
        doc["trace"] = std::move(steps);
    }
    if (config.timestamp) {
        doc["generated_at"] = utc_timestamp();
    }

    RunOutput output;
    if (config.format == "csv") {
        output.rendered = rows_csv(rows, metrics);
    } else if (config.format == "json") {
        output.rendered = doc.dump(2) + "\n";
    } else {
        throw ConfigError("unsupported report format \"" + config.format + "\"");
    }
    output.document = std::move(doc);
    return output;
}

RunOutput execute_fit(const RunConfig& config) {
    SourceData source = resolve_source(config);
    const std::size_t size = source.series.size();
    const std::size_t train = config.train.value_or(source.default_train);
    if (train < 4 || train > size) {
        throw ConfigError("--train must lie in [4, " + std::to_string(size) +
                          "], got " + std::to_string(train));
    }
    const std::size_t horizon = config.horizon.value_or(size - train);
    TimeSeries train_series = source.series.head(train);

    if (config.model == "gm11") {
        if (config.exponent || config.weight) {
            throw ConfigError("gm11 has fixed n = 0, P = 0.5; use --model ngbm "
                              "to set them");
        }
        FitResult fit = fit_gm11(train_series, horizon);
        return render_model_report(config, source, fit.fitted, fit.params, false,
                                   false, nullptr, nullptr, 0, train, horizon);
    }
    if (config.model == "ngbm") {
        if (!config.exponent) {
            throw ConfigError("--model ngbm requires --n");
        }
        const double weight = config.weight.value_or(0.5);
        FitResult fit = fit_ngbm(train_series, *config.exponent, weight, horizon,
                                 AnchorMode::First);
        return render_model_report(config, source, fit.fitted, fit.params, false,
                                   false, nullptr, nullptr, 0, train, horizon);
    }
    if (config.model == "ongbm") {
        if (config.exponent || config.weight) {
            throw ConfigError("ongbm selects n and P itself; use --model ngbm "
                              "for fixed parameters");
        }
        OngbmOptions options;
        options.grid.step = config.step;
        options.horizon = horizon;
        options.correction = config.correction;
        OngbmFit result = fit_ongbm(train_series, options);
        return render_model_report(config, source, result.fit.fitted,
                                   result.fit.params, result.fit.correction_applied,
                                   result.fit.correction_fallback, &result.selection,
                                   nullptr, 0, train, horizon);
    }
    if (config.model == "rongbm") {
        throw ConfigError("rongbm is a rolling model; use the roll command");
    }
    throw ConfigError("unknown model \"" + config.model + "\"");
}

RunOutput execute_roll(const RunConfig& config) {
    if (config.model != "rongbm") {
        throw ConfigError("the roll command supports --model rongbm only");
    }
    SourceData source = resolve_source(config);
    if (!config.window) {
        throw ConfigError("--model rongbm requires --window");
    }
    const std::size_t size = source.series.size();
    const std::size_t window = *config.window;
    if (window > size) {
        throw ConfigError("--window " + std::to_string(window) +
                          " exceeds the series length " + std::to_string(size));
    }
    const std::size_t horizon = config.horizon.value_or(size - window);

    RollingConfig rolling;
    rolling.window = window;
    rolling.horizon = horizon;
    rolling.grid.step = config.step;
    rolling.feedback = config.feedback;
    rolling.correction = config.correction;
    RollingResult result = rolling_forecast(source.series, rolling);
    return render_model_report(config, source, result.fit.fitted, result.fit.params,
                               result.fit.correction_applied,
                               result.fit.correction_fallback, nullptr,
                               &result.trace, window, window, horizon);
}

RunOutput execute_metrics(const RunConfig& config) {
    if (!config.input) {
        throw ConfigError("the metrics command requires --input (a "
                          "label,actual,fitted report file)");
    }
    std::vector<EvaluationRow> rows = load_evaluation_csv(*config.input);
    std::vector<double> actual;
    std::vector<double> fitted;
    for (const EvaluationRow& row : rows) {
        if (row.actual) {
            actual.push_back(*row.actual);
            fitted.push_back(row.fitted);
        }
    }
    if (actual.empty()) {
        throw DataError(*config.input + ": no rows with both actual and fitted");
    }
    MetricsReport metrics = evaluate(actual, fitted);

    nlohmann::ordered_json doc;
    doc["command"] = "metrics";
    doc["source"] = {{"kind", "input"}, {"name", *config.input}};
    nlohmann::ordered_json points = nlohmann::ordered_json::array();
    std::size_t used = 0;
    for (const EvaluationRow& row : rows) {
        nlohmann::ordered_json point;
        point["label"] = row.label;
        point["actual"] = row.actual ? nlohmann::ordered_json(*row.actual)
                                     : nlohmann::ordered_json(nullptr);
        point["fitted"] = round_to(row.fitted, 5);
        point["rpe"] = row.actual
                           ? nlohmann::ordered_json(round_to(metrics.rpe[used++], 2))
                           : nlohmann::ordered_json(nullptr);
        points.push_back(std::move(point));
    }
    doc["points"] = std::move(points);
    doc["metrics"] = metrics_json(metrics);
    if (config.timestamp) {
        doc["generated_at"] = utc_timestamp();
    }

    RunOutput output;
    if (config.format == "csv") {
        std::ostringstream out;
        out << "label,actual,fitted,rpe\n";
        std::size_t index = 0;
        for (const EvaluationRow& row : rows) {
            out << row.label << ',';
            if (row.actual) {
                out << format_roundtrip(*row.actual);
            }
            out << ',' << format_fixed(row.fitted, 5) << ',';
            if (row.actual) {
                out << format_fixed(metrics.rpe[index++], 2);
            }
            out << '\n';
        }
        out << "# arpe," << format_fixed(metrics.arpe, 2) << '\n';
        out << "# rmse," << format_fixed(metrics.rmse, 5) << '\n';
        if (metrics.posterior_ratio) {
            out << "# posterior_ratio," << format_fixed(*metrics.posterior_ratio, 5)
                << '\n';
        }
        out << "# arpe_class," << grade_label(metrics.arpe_grade) << '\n';
        if (metrics.posterior_rank) {
            out << "# posterior_rank," << *metrics.posterior_rank << ','
                << posterior_label(*metrics.posterior_rank) << '\n';
        }
        output.rendered = out.str();
    } else if (config.format == "json") {
        output.rendered = doc.dump(2) + "\n";
    } else {
        throw ConfigError("unsupported report format \"" + config.format + "\"");
    }
    output.document = std::move(doc);
    return output;
}

RunOutput execute_bench(const RunConfig& config) {
    BenchReport report = run_bench(config.expected);
    RunOutput output;
    if (config.format == "json") {
        output.document = render_bench_json(report);
        output.rendered = output.document.dump(2) + "\n";
    } else if (config.format == "text") {
        output.rendered = render_bench_text(report);
        output.document = render_bench_json(report);
    } else {
        throw ConfigError("bench emits text or json, not \"" + config.format + "\"");
    }
    return output;
}

} // namespace

RunOutput execute(const RunConfig& config) {
    switch (config.command) {
    case Command::Fit:
        return execute_fit(config);
    case Command::Roll:
        return execute_roll(config);
    case Command::Metrics:
        return execute_metrics(config);
    case Command::Bench:
        return execute_bench(config);
    }
    throw ConfigError("unknown command");
}

int run(const RunConfig& config) {
    RunOutput output = execute(config);
    if (config.output) {
        std::ofstream file(*config.output, std::ios::binary);
        if (!file) {
            throw DataError("cannot open output file: " + *config.output);
        }
        file << output.rendered;
        if (!file) {
            throw DataError("failed writing output file: " + *config.output);
        }
    } else {
        std::cout << output.rendered;
    }
    if (config.command == Command::Bench &&
        output.document["failed"].get<std::size_t>() > 0) {
        return 1;
    }
    return 0;
}

} // namespace greyfc::app
