#include "greyfc/metrics.hpp"

#include "greyfc/errors.hpp"

#include <cmath>
#include <string>

namespace greyfc {

namespace {

void check_sizes(const std::vector<double>& actual, const std::vector<double>& fitted) {
    if (actual.empty()) {
        throw DataError("metrics need at least one point");
    }
    if (actual.size() != fitted.size()) {
        throw DataError("metrics size mismatch: " + std::to_string(actual.size()) +
                        " actual vs " + std::to_string(fitted.size()) + " fitted");
    }
}

} // namespace

std::string_view grade_label(FitGrade grade) {
    switch (grade) {
    case FitGrade::Excellent:
        return "Excellent";
    case FitGrade::Good:
        return "Good";
    case FitGrade::Reasonable:
        return "Reasonable";
    case FitGrade::Unacceptable:
        return "Unacceptable";
    }
    return "Unacceptable";
}

std::string_view posterior_label(int rank) {
    switch (rank) {
    case 1:
        return "Highly accurate";
    case 2:
        return "Qualified";
    case 3:
        return "Marginal";
    case 4:
        return "Disqualified";
    default:
        throw ConfigError("posterior rank must be 1..4, got " + std::to_string(rank));
    }
}

std::vector<double> rpe(const std::vector<double>& actual,
                        const std::vector<double>& fitted) {
    check_sizes(actual, fitted);
    std::vector<double> errors;
    errors.reserve(actual.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (!(actual[i] > 0.0)) {
            throw DataError("relative error undefined for non-positive actual at index " +
                            std::to_string(i + 1));
        }
        errors.push_back((fitted[i] - actual[i]) / actual[i] * 100.0);
    }
    return errors;
}

double arpe(const std::vector<double>& relative_errors) {
    if (relative_errors.empty()) {
        throw DataError("ARPE needs at least one relative error");
    }
    double sum = 0.0;
    for (double e : relative_errors) {
        sum += std::fabs(e);
    }
    return sum / static_cast<double>(relative_errors.size());
}

double rmse(const std::vector<double>& actual, const std::vector<double>& fitted) {
    check_sizes(actual, fitted);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        double diff = actual[i] - fitted[i];
        sum += diff * diff;
    }
    return std::sqrt(sum / static_cast<double>(actual.size()));
}

double posterior_ratio(const std::vector<double>& actual,
                       const std::vector<double>& fitted) {
    std::vector<double> errors = rpe(actual, fitted);
    const double m = static_cast<double>(errors.size());
    const double centre = arpe(errors);

    double error_var = 0.0;
    for (double e : errors) {
        // Signed errors dispersed about the mean ABSOLUTE error: the
        // convention the source tables print, kept verbatim.
        double d = -e - centre; // sign flipped: (actual - fitted) / actual
        error_var += d * d;
    }
    error_var /= m;

    double mean = 0.0;
    for (double a : actual) {
        mean += a;
    }
    mean /= m;
    double data_var = 0.0;
    for (double a : actual) {
        double d = a - mean;
        data_var += d * d;
    }
    data_var /= m;
    if (!(data_var > 0.0)) {
        throw NumericError("posterior ratio undefined: actual series has zero variance");
    }
    return std::sqrt(error_var) / std::sqrt(data_var);
}

FitGrade classify_arpe(double arpe_percent) {
    if (arpe_percent <= 10.0) {
        return FitGrade::Excellent;
    }
    if (arpe_percent <= 20.0) {
        return FitGrade::Good;
    }
    if (arpe_percent <= 50.0) {
        return FitGrade::Reasonable;
    }
    return FitGrade::Unacceptable;
}

int classify_posterior(double ratio) {
    if (ratio <= 0.35) {
        return 1;
    }
    if (ratio <= 0.5) {
        return 2;
    }
    if (ratio <= 0.65) {
        return 3;
    }
    return 4;
}

MetricsReport evaluate(const std::vector<double>& actual,
                       const std::vector<double>& fitted) {
    MetricsReport report;
    report.rpe = rpe(actual, fitted);
    report.arpe = arpe(report.rpe);
    report.rmse = rmse(actual, fitted);
    report.arpe_grade = classify_arpe(report.arpe);
    try {
        report.posterior_ratio = posterior_ratio(actual, fitted);
        report.posterior_rank = classify_posterior(*report.posterior_ratio);
    } catch (const NumericError&) {
        // Constant actual series: the ratio is undefined, not an error
        // for the fit as a whole.
    }
    return report;
}

} // namespace greyfc
