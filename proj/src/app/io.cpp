#include "greyfc/app/io.hpp"

#include "greyfc/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace greyfc::app {

namespace {

struct CsvRow {
    std::size_t line_number = 0;
    std::vector<std::string> fields;
};

std::vector<CsvRow> read_rows(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw DataError("cannot open input file: " + path);
    }
    std::vector<CsvRow> rows;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(file, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        CsvRow row;
        row.line_number = line_number;
        std::string field;
        std::istringstream splitter(line);
        while (std::getline(splitter, field, ',')) {
            row.fields.push_back(field);
        }
        if (line.back() == ',') {
            row.fields.emplace_back();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

bool is_blank(const std::string& text) {
    for (char c : text) {
        if (c != ' ' && c != '\t') {
            return false;
        }
    }
    return true;
}

std::optional<double> parse_double(const std::string& text) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) {
        ++begin;
    }
    while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) {
        --end;
    }
    if (begin == end) {
        return std::nullopt;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        return std::nullopt;
    }
    return value;
}

} // namespace

TimeSeries load_csv(const std::string& path) {
    std::vector<CsvRow> rows = read_rows(path);
    std::vector<std::string> labels;
    std::vector<double> values;
    bool first_data_row = true;
    for (const CsvRow& row : rows) {
        if (row.fields.size() < 2) {
            throw DataError(path + ":" + std::to_string(row.line_number) +
                            ": expected label,value columns");
        }
        std::optional<double> value = parse_double(row.fields[1]);
        if (!value) {
            if (is_blank(row.fields[1])) {
                // A label without an observation (e.g. the forecast rows of
                // an emitted report): not data, not an error.
                continue;
            }
            if (first_data_row) {
                first_data_row = false; // header line
                continue;
            }
            throw DataError(path + ":" + std::to_string(row.line_number) +
                            ": non-numeric value \"" + row.fields[1] + "\"");
        }
        first_data_row = false;
        if (!(*value > 0.0)) {
            throw DataError(path + ":" + std::to_string(row.line_number) +
                            ": value must be positive, got " + row.fields[1]);
        }
        labels.push_back(row.fields[0]);
        values.push_back(*value);
    }
    if (values.size() < 4) {
        throw DataError(path + ": need at least 4 data rows, found " +
                        std::to_string(values.size()));
    }
    return TimeSeries(std::move(labels), std::move(values));
}

std::vector<EvaluationRow> load_evaluation_csv(const std::string& path) {
    std::vector<CsvRow> rows = read_rows(path);
    std::vector<EvaluationRow> out;
    bool first_data_row = true;
    for (const CsvRow& row : rows) {
        if (row.fields.size() < 3) {
            throw DataError(path + ":" + std::to_string(row.line_number) +
                            ": expected label,actual,fitted columns");
        }
        std::optional<double> fitted = parse_double(row.fields[2]);
        if (!fitted) {
            if (first_data_row) {
                first_data_row = false; // header line
                continue;
            }
            throw DataError(path + ":" + std::to_string(row.line_number) +
                            ": non-numeric fitted value \"" + row.fields[2] + "\"");
        }
        first_data_row = false;
        EvaluationRow entry;
        entry.label = row.fields[0];
        entry.actual = parse_double(row.fields[1]);
        entry.fitted = *fitted;
        out.push_back(std::move(entry));
    }
    if (out.empty()) {
        throw DataError(path + ": no evaluable rows found");
    }
    return out;
}

std::string format_roundtrip(double value) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) {
        throw NumericError("failed to format double");
    }
    return std::string(buffer, ptr);
}

std::string format_fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return buffer;
}

} // namespace greyfc::app
