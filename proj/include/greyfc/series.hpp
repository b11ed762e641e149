#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace greyfc {

/// An observed series: parallel label/value arrays in original order.
/// Values must be strictly positive (grey models operate on positive data);
/// labels are opaque strings ("2004", "2020-01-28", ...).
class TimeSeries {
public:
    TimeSeries(std::vector<std::string> labels, std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& values() const { return values_; }

    /// First `count` points (used to restrict a fit to a training span).
    TimeSeries head(std::size_t count) const;

private:
    std::vector<std::string> labels_;
    std::vector<double> values_;
};

/// First-order accumulated generating operation (1-AGO) of a positive
/// series: strictly increasing running sums sharing the source's first value.
class AgoSeries {
public:
    explicit AgoSeries(std::vector<double> accumulated);

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

/// Background values of an accumulated series: the weighted means
/// z(k) = (1-P)*x1(k-1) + P*x1(k) for k = 2..m. Each value lies between
/// its two neighbours; the weight P favours the later point.
class BackgroundSeries {
public:
    explicit BackgroundSeries(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

AgoSeries ago(const TimeSeries& series);

/// Inverse of the accumulation: first differences, keeping the first value.
std::vector<double> inverse_ago(const std::vector<double>& accumulated);
std::vector<double> inverse_ago(const AgoSeries& accumulated);

/// Weighted background means of an accumulated series; weight must lie
/// in [0, 1] and multiplies the later point.
BackgroundSeries background(const AgoSeries& accumulated, double weight);

/// Continue a label sequence past its end: integer labels advance by 1
/// ("2018" -> "2019"), ISO dates by one calendar day ("2020-02-08" ->
/// "2020-02-09"); anything else gets a "+k" suffix on the last label.
std::vector<std::string> continue_labels(const std::vector<std::string>& labels,
                                         std::size_t count);

} // namespace greyfc
