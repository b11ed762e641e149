#include "greyfc/model.hpp"

#include "greyfc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace greyfc {

namespace {

constexpr double kDegenerateA = 1e-12;
constexpr double kSingularRel = 1e-12;

void check_exponent(double exponent) {
    if (exponent == 1.0) {
        throw ConfigError("Bernoulli exponent n must not equal 1");
    }
    if (!std::isfinite(exponent)) {
        throw ConfigError("Bernoulli exponent n must be finite");
    }
}

} // namespace

LinearCoeffs estimate_ab(const TimeSeries& series, double exponent, double weight) {
    check_exponent(exponent);
    const std::size_t m = series.size();
    if (m < 4) {
        throw DataError("least-squares fit needs at least 4 points, got " +
                        std::to_string(m));
    }
    const std::vector<double>& x0 = series.values();
    BackgroundSeries z = background(ago(series), weight);
    const std::vector<double>& zv = z.values();

    // Normal equations for the design matrix [-z(k), z(k)^n] against x0(k).
    double s11 = 0.0; // sum z^2
    double s12 = 0.0; // sum -z * z^n
    double s22 = 0.0; // sum z^(2n)
    double t1 = 0.0;  // sum -z * x0
    double t2 = 0.0;  // sum z^n * x0
    for (std::size_t i = 0; i < zv.size(); ++i) {
        const double zk = zv[i];
        const double zn = std::pow(zk, exponent);
        const double y = x0[i + 1];
        s11 += zk * zk;
        s12 -= zk * zn;
        s22 += zn * zn;
        t1 -= zk * y;
        t2 += zn * y;
    }
    const double det = s11 * s22 - s12 * s12;
    const double scale = std::max({std::fabs(s11), std::fabs(s12), std::fabs(s22)});
    if (!(std::fabs(det) > kSingularRel * scale)) {
        throw NumericError("singular least-squares system for n = " +
                           std::to_string(exponent) + ", P = " + std::to_string(weight));
    }
    LinearCoeffs coeffs;
    coeffs.a = (t1 * s22 - s12 * t2) / det;
    coeffs.b = (s11 * t2 - s12 * t1) / det;
    return coeffs;
}

double ngbm_response(const GreyParams& params, double k) {
    if (k == static_cast<double>(params.anchor)) {
        return params.init;
    }
    const double one_minus_n = 1.0 - params.exponent;
    const double init_power = std::pow(params.init, one_minus_n);
    const double offset = k - static_cast<double>(params.anchor);

    double bracket = 0.0;
    if (std::fabs(params.a) < kDegenerateA) {
        // a -> 0 limit of the Bernoulli equation: x^(1-n) is linear in k.
        bracket = init_power + params.b * one_minus_n * offset;
    } else {
        const double ratio = params.b / params.a;
        const double decay = std::exp(-params.a * one_minus_n * offset);
        bracket = (init_power - ratio) * decay + ratio;
    }
    if (!(bracket > 0.0) || !std::isfinite(bracket)) {
        throw NumericError("non-positive response power bracket at k = " +
                           std::to_string(k) + " (a = " + std::to_string(params.a) +
                           ", n = " + std::to_string(params.exponent) + ")");
    }
    return std::pow(bracket, 1.0 / one_minus_n);
}

FitResult fit_gm11(const TimeSeries& series, std::size_t horizon) {
    return fit_ngbm(series, 0.0, 0.5, horizon, AnchorMode::First);
}

FitResult fit_ngbm(const TimeSeries& series, double exponent, double weight,
                   std::size_t horizon, AnchorMode anchor,
                   std::optional<double> init_correction) {
    check_exponent(exponent);
    if (init_correction && anchor != AnchorMode::Last) {
        throw ConfigError("initial-condition correction applies to anchor-last fits only");
    }
    const std::size_t m = series.size();
    LinearCoeffs coeffs = estimate_ab(series, exponent, weight);

    GreyParams params;
    params.a = coeffs.a;
    params.b = coeffs.b;
    params.exponent = exponent;
    params.weight = weight;
    AgoSeries x1 = ago(series);
    if (anchor == AnchorMode::First) {
        params.anchor = 1;
        params.init = x1.values().front();
    } else {
        params.anchor = m;
        params.init = x1.values().back() + init_correction.value_or(0.0);
        if (!(params.init > 0.0)) {
            throw NumericError("corrected anchor value must stay positive, got " +
                               std::to_string(params.init));
        }
    }

    std::vector<double> accumulated;
    accumulated.reserve(m + horizon);
    for (std::size_t k = 1; k <= m + horizon; ++k) {
        accumulated.push_back(ngbm_response(params, static_cast<double>(k)));
    }
    std::vector<double> fitted0 = inverse_ago(accumulated);
    // The first differenced value is reported as the observation itself,
    // the convention every comparison table follows (its error is zero).
    fitted0.front() = series.values().front();

    std::vector<std::string> labels = series.labels();
    std::vector<std::string> extra = continue_labels(labels, horizon);
    labels.insert(labels.end(), extra.begin(), extra.end());

    std::optional<TimeSeries> fitted_series;
    try {
        fitted_series.emplace(std::move(labels), std::move(fitted0));
    } catch (const DataError& e) {
        throw NumericError(std::string("fitted series left the positive domain: ") +
                           e.what());
    }
    FitResult result{params,
                     std::move(*fitted_series),
                     {},
                     {},
                     init_correction.has_value(),
                     false};
    std::vector<double> window_fit(result.fitted.values().begin(),
                                   result.fitted.values().begin() + m);
    result.metrics = evaluate(series.values(), window_fit);
    result.rpe = result.metrics.rpe;
    return result;
}

} // namespace greyfc
