#include "greyfc/series.hpp"

#include "greyfc/errors.hpp"

#include <cctype>
#include <cstdio>
#include <utility>

namespace greyfc {

namespace {

bool all_digits(const std::string& text) {
    if (text.empty()) {
        return false;
    }
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return false;
        }
    }
    return true;
}

bool is_iso_date(const std::string& text, int& year, int& month, int& day) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        return false;
    }
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            return false;
        }
    }
    year = std::stoi(text.substr(0, 4));
    month = std::stoi(text.substr(5, 2));
    day = std::stoi(text.substr(8, 2));
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

bool is_leap(int year) {
    return year % 4 == 0 && (year % 100 != 0 || year % 400 == 0);
}

int days_in_month(int year, int month) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) {
        return 29;
    }
    return lengths[month - 1];
}

std::string next_day(int year, int month, int day) {
    ++day;
    if (day > days_in_month(year, month)) {
        day = 1;
        ++month;
        if (month > 12) {
            month = 1;
            ++year;
        }
    }
    char buffer[16];
    std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02d", year, month, day);
    return buffer;
}

} // namespace

TimeSeries::TimeSeries(std::vector<std::string> labels, std::vector<double> values)
    : labels_(std::move(labels)), values_(std::move(values)) {
    if (values_.empty()) {
        throw DataError("time series must not be empty");
    }
    if (labels_.size() != values_.size()) {
        throw DataError("time series has " + std::to_string(labels_.size()) +
                        " labels but " + std::to_string(values_.size()) + " values");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0)) {
            throw DataError("time series value at row " + std::to_string(i + 1) +
                            " (" + labels_[i] + ") must be positive");
        }
    }
}

TimeSeries TimeSeries::head(std::size_t count) const {
    if (count == 0 || count > size()) {
        throw DataError("head count " + std::to_string(count) +
                        " outside series of length " + std::to_string(size()));
    }
    return TimeSeries(std::vector<std::string>(labels_.begin(), labels_.begin() + count),
                      std::vector<double>(values_.begin(), values_.begin() + count));
}

AgoSeries::AgoSeries(std::vector<double> accumulated) : values_(std::move(accumulated)) {
    if (values_.empty()) {
        throw DataError("accumulated series must not be empty");
    }
    for (std::size_t i = 1; i < values_.size(); ++i) {
        if (!(values_[i] > values_[i - 1])) {
            throw NumericError("accumulated series must be strictly increasing at index " +
                               std::to_string(i + 1));
        }
    }
}

BackgroundSeries::BackgroundSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw NumericError("background series must not be empty");
    }
}

AgoSeries ago(const TimeSeries& series) {
    std::vector<double> sums;
    sums.reserve(series.size());
    double running = 0.0;
    for (double value : series.values()) {
        running += value;
        sums.push_back(running);
    }
    return AgoSeries(std::move(sums));
}

std::vector<double> inverse_ago(const std::vector<double>& accumulated) {
    std::vector<double> differences;
    differences.reserve(accumulated.size());
    for (std::size_t i = 0; i < accumulated.size(); ++i) {
        differences.push_back(i == 0 ? accumulated[0] : accumulated[i] - accumulated[i - 1]);
    }
    return differences;
}

std::vector<double> inverse_ago(const AgoSeries& accumulated) {
    return inverse_ago(accumulated.values());
}

BackgroundSeries background(const AgoSeries& accumulated, double weight) {
    if (!(weight >= 0.0 && weight <= 1.0)) {
        throw ConfigError("background weight P must lie in [0, 1], got " +
                          std::to_string(weight));
    }
    const std::vector<double>& x1 = accumulated.values();
    if (x1.size() < 2) {
        throw DataError("background values need at least 2 accumulated points");
    }
    std::vector<double> z;
    z.reserve(x1.size() - 1);
    for (std::size_t k = 1; k < x1.size(); ++k) {
        z.push_back((1.0 - weight) * x1[k - 1] + weight * x1[k]);
    }
    return BackgroundSeries(std::move(z));
}

std::vector<std::string> continue_labels(const std::vector<std::string>& labels,
                                         std::size_t count) {
    std::vector<std::string> extension;
    extension.reserve(count);
    if (labels.empty()) {
        throw DataError("cannot continue an empty label sequence");
    }
    const std::string& last = labels.back();
    int year = 0;
    int month = 0;
    int day = 0;
    if (all_digits(last) && last.size() <= 9) {
        long value = std::stol(last);
        for (std::size_t i = 1; i <= count; ++i) {
            extension.push_back(std::to_string(value + static_cast<long>(i)));
        }
    } else if (is_iso_date(last, year, month, day)) {
        std::string current = last;
        for (std::size_t i = 0; i < count; ++i) {
            current = next_day(year, month, day);
            is_iso_date(current, year, month, day);
            extension.push_back(current);
        }
    } else {
        for (std::size_t i = 1; i <= count; ++i) {
            extension.push_back(last + "+" + std::to_string(i));
        }
    }
    return extension;
}

} // namespace greyfc
