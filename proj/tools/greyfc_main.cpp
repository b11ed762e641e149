#include "greyfc/app/run.hpp"
#include "greyfc/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

void add_output_options(CLI::App* cmd, greyfc::app::RunConfig& config) {
    cmd->add_option("--output", config.output,
                    "write the report to this file instead of stdout");
    cmd->add_option("--format", config.format,
                    "output format: json or csv (bench: text or json)")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_flag_callback(
        "--no-timestamp", [&config] { config.timestamp = false; },
        "omit the generation timestamp (byte-stable output)");
}

void add_source_options(CLI::App* cmd, greyfc::app::RunConfig& config) {
    CLI::Option* dataset = cmd->add_option(
        "--dataset", config.dataset, "name of a built-in dataset");
    CLI::Option* input = cmd->add_option(
        "--input", config.input, "CSV file with label,value rows");
    dataset->excludes(input);
    input->excludes(dataset);
}

void add_correction_option(CLI::App* cmd, greyfc::app::RunConfig& config) {
    cmd->add_option_function<std::string>(
           "--correction",
           [&config](const std::string& value) {
               if (value == "on") {
                   config.correction = true;
               } else if (value == "off") {
                   config.correction = false;
               } else {
                   throw CLI::ValidationError(
                       "--correction", "must be 'on' or 'off', got '" + value + "'");
               }
           },
           "initial-condition correction: on (default) or off")
        ->type_name("on|off");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"greyfc: grey-system forecasting for small positive time series"};
    app.require_subcommand(1);

    greyfc::app::RunConfig config;

    CLI::App* fit = app.add_subcommand(
        "fit", "fit a grey model to a series and report fitted values");
    add_source_options(fit, config);
    fit->add_option("--model", config.model, "model: gm11, ngbm, or ongbm")
        ->required();
    fit->add_option("--n", config.exponent, "power-term exponent (ngbm only)");
    fit->add_option("--P", config.weight,
                    "background weight in [0,1] (ngbm only; default 0.5)");
    fit->add_option("--step", config.step,
                    "grid resolution for ongbm selection (default 0.005)");
    fit->add_option("--train", config.train,
                    "number of leading points to fit (default: dataset "
                    "convention, or the whole input)");
    fit->add_option("--horizon", config.horizon,
                    "extra steps to forecast past the training window");
    add_correction_option(fit, config);
    add_output_options(fit, config);

    CLI::App* roll = app.add_subcommand(
        "roll", "rolling one-step forecasts with a re-fitted window");
    add_source_options(roll, config);
    roll->add_option("--model", config.model, "model: rongbm")->required();
    roll->add_option("--window", config.window, "rolling window length")
        ->required();
    roll->add_option("--horizon", config.horizon,
                     "number of one-step predictions (default: remaining span)");
    roll->add_option_function<std::string>(
            "--feedback",
            [&config](const std::string& value) {
                if (value == "predicted") {
                    config.feedback = greyfc::Feedback::Predicted;
                } else if (value == "actual") {
                    config.feedback = greyfc::Feedback::Actual;
                } else {
                    throw CLI::ValidationError(
                        "--feedback",
                        "must be 'predicted' or 'actual', got '" + value + "'");
                }
            },
            "window feedback: predicted (default) or actual")
        ->type_name("predicted|actual");
    roll->add_option("--step", config.step,
                     "grid resolution for each window's selection");
    add_correction_option(roll, config);
    add_output_options(roll, config);

    CLI::App* bench = app.add_subcommand(
        "bench", "re-derive the published reference tables and check them");
    bench->add_option("--expected", config.expected,
                      "JSON file overriding expected values by check id");
    add_output_options(bench, config);

    CLI::App* metrics = app.add_subcommand(
        "metrics", "score a label,actual,fitted CSV file");
    metrics->add_option("--input", config.input, "CSV file to score")->required();
    add_output_options(metrics, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (fit->parsed()) {
        config.command = greyfc::app::Command::Fit;
    } else if (roll->parsed()) {
        config.command = greyfc::app::Command::Roll;
    } else if (bench->parsed()) {
        config.command = greyfc::app::Command::Bench;
        if (bench->count("--format") == 0) {
            config.format = "text";
        }
    } else {
        config.command = greyfc::app::Command::Metrics;
    }

    try {
        return greyfc::app::run(config);
    } catch (const greyfc::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const greyfc::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const greyfc::NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
