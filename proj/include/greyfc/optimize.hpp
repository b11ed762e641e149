#pragma once

#include "greyfc/model.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace greyfc {

/// Exhaustive-search lattice for (P, n). Both axes share one step; the
/// weight range is inclusive at both ends, the exponent range excludes its
/// upper bound (the response is undefined at n = 1). Lattice points are
/// generated as min + i*step and rounded to 10 decimals.
struct GridSpec {
    double step = 0.005;
    double weight_min = 0.0;
    double weight_max = 1.0;
    double exponent_min = -1.0;
    double exponent_max = 1.0;
};

struct GridResult {
    double exponent = 0.0;
    double weight = 0.0;
    double a = 0.0;
    double b = 0.0;
    double arpe = 0.0;          ///< objective value at the winner
    std::size_t feasible = 0;   ///< candidates that produced a valid response
};

/// Ingredients of the closed-form initial-condition correction, anchored at
/// the last point m: decay[k] = e^(-a(1-n)(k-m)) and
/// target[k] = x1(k)^(1-n) - (b/a)(1 - decay[k]) for k = 1..m. The corrected
/// power is the least-squares slope sum(target*decay) / sum(decay^2).
struct CorrectionTerms {
    std::vector<double> decay;
    std::vector<double> target;
    double init_power = 0.0;
};

/// Closed-form background weight from the accumulated-ratio statistic
/// q = (sum x1(k)/x1(k-1))^(1/(m-1)) + (m-1):  P = 1/2 + 1/(2q).
double formula_background(const TimeSeries& series);

/// Closed-form Bernoulli exponent: the mean of the per-index estimates
/// over k = 2..m-1, with background values built from `weight` (defaults
/// to formula_background of the same series).
double formula_exponent(const TimeSeries& series,
                        std::optional<double> weight = std::nullopt);

/// Exhaustive (P, n) search minimising the in-window average absolute
/// relative error of the uncorrected anchor-last fit. Ties break toward
/// smaller ARPE, then smaller P, then smaller n, independent of evaluation
/// order and thread count (GREYFC_THREADS; 0 or unset = all cores).
GridResult grid_search(const TimeSeries& series, const GridSpec& spec = {});

/// Least-squares re-estimate of the response's anchor value (in power
/// space) given fixed (a, b, n); anchored at the last point.
CorrectionTerms correct_initial(const TimeSeries& series, double a, double b,
                                double exponent);

struct OngbmOptions {
    GridSpec grid{};
    std::size_t horizon = 0;
    /// Apply the closed-form initial-condition correction after selection.
    bool correction = true;
};

struct OngbmFit {
    FitResult fit;
    GridResult selection;
};

/// Fully optimised model: grid-selected (P, n), anchor-last response,
/// optional corrected initial condition (falls back to the uncorrected
/// anchor when the correction is infeasible, flagged on the result).
OngbmFit fit_ongbm(const TimeSeries& series, const OngbmOptions& options = {});

} // namespace greyfc
