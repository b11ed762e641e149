#pragma once

#include "greyfc/metrics.hpp"
#include "greyfc/series.hpp"

#include <cstddef>
#include <optional>

namespace greyfc {

/// Where the response curve is pinned to the accumulated data: the first
/// point (traditional) or the last point (favours recent observations).
enum class AnchorMode { First, Last };

/// Coefficients and response configuration of a grey Bernoulli model
/// dx/dt + a*x = b*x^n ; n = 0 degenerates to GM(1,1).
struct GreyParams {
    double a = 0.0;        ///< development coefficient
    double b = 0.0;        ///< grey action / driving coefficient
    double exponent = 0.0; ///< Bernoulli power n (never 1)
    double weight = 0.5;   ///< background weight P in [0, 1]
    double init = 0.0;     ///< accumulated-space value the curve passes through
    std::size_t anchor = 1; ///< 1-based index of that value
};

struct FitResult {
    GreyParams params;
    TimeSeries fitted;      ///< window labels plus continued forecast labels
    std::vector<double> rpe; ///< vs window actuals (window length entries)
    MetricsReport metrics;   ///< over the fit window
    bool correction_applied = false;
    bool correction_fallback = false;
};

struct LinearCoeffs {
    double a = 0.0;
    double b = 0.0;
};

/// Least-squares estimate of (a, b) from the discretized equation
/// x0(k) + a*z(k) = b*z(k)^n over k = 2..m, via the 2x2 normal equations.
LinearCoeffs estimate_ab(const TimeSeries& series, double exponent, double weight);

/// Accumulated-space response at continuous index k (1-based). Exact
/// pass-through at k == anchor; uses the a -> 0 limit (power-linear in k)
/// when |a| < 1e-12.
double ngbm_response(const GreyParams& params, double k);

FitResult fit_gm11(const TimeSeries& series, std::size_t horizon = 0);

/// Fixed-parameter NGBM fit. `init_correction` is an additive adjustment c
/// to the accumulated anchor value (anchor-last only), making the curve
/// pass through x1(m) + c instead of x1(m).
FitResult fit_ngbm(const TimeSeries& series, double exponent, double weight,
                   std::size_t horizon = 0, AnchorMode anchor = AnchorMode::First,
                   std::optional<double> init_correction = std::nullopt);

} // namespace greyfc
