#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace greyfc {

/// Forecast-quality grade derived from the average relative percentage error.
enum class FitGrade { Excellent, Good, Reasonable, Unacceptable };

std::string_view grade_label(FitGrade grade);

/// Rank label for the posterior error ratio (1 = best, 4 = worst).
std::string_view posterior_label(int rank);

/// Signed relative percentage errors, (fitted - actual) / actual * 100,
/// positive when the model overshoots. Sizes must match; actuals positive.
std::vector<double> rpe(const std::vector<double>& actual,
                        const std::vector<double>& fitted);

/// Average of the absolute relative percentage errors (every index counts,
/// including an exact first point contributing zero).
double arpe(const std::vector<double>& relative_errors);

double rmse(const std::vector<double>& actual, const std::vector<double>& fitted);

/// Posterior error ratio: population standard deviation of the signed
/// relative percentage errors about their mean absolute value, divided by
/// the population standard deviation of the actual series. Scales as 1/λ
/// when both inputs are scaled by λ (the numerator is dimensionless, the
/// denominator is not).
double posterior_ratio(const std::vector<double>& actual,
                       const std::vector<double>& fitted);

/// ARPE bands: <=10 Excellent, (10,20] Good, (20,50] Reasonable, >50
/// Unacceptable (boundaries fall to the lower band).
FitGrade classify_arpe(double arpe_percent);

/// Posterior bands: <=0.35 -> 1, (0.35,0.5] -> 2, (0.5,0.65] -> 3, >0.65 -> 4.
int classify_posterior(double ratio);

struct MetricsReport {
    std::vector<double> rpe;
    double arpe = 0.0;
    double rmse = 0.0;
    /// Absent when the actual series has zero variance (ratio undefined).
    std::optional<double> posterior_ratio;
    FitGrade arpe_grade = FitGrade::Excellent;
    std::optional<int> posterior_rank;
};

/// Full evaluation of a fitted series against actuals (equal lengths).
MetricsReport evaluate(const std::vector<double>& actual,
                       const std::vector<double>& fitted);

} // namespace greyfc
