#pragma once

#include "greyfc/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace greyfc::app {

/// Load a label,value CSV (UTF-8, LF or CRLF, optional header, '#' comment
/// lines skipped). Extra columns beyond the first two are ignored, so a
/// previously emitted report re-ingests through its label/actual columns.
TimeSeries load_csv(const std::string& path);

/// One row of a three-column report file: label, actual, fitted.
struct EvaluationRow {
    std::string label;
    std::optional<double> actual;
    double fitted = 0.0;
};

/// Read label,actual,fitted rows from a report-style CSV (used by the
/// metrics command). Rows without an actual value are kept but excluded
/// from evaluation.
std::vector<EvaluationRow> load_evaluation_csv(const std::string& path);

/// Shortest representation that parses back to exactly the same double.
std::string format_roundtrip(double value);

/// Fixed-point with the given number of decimals.
std::string format_fixed(double value, int decimals);

} // namespace greyfc::app
