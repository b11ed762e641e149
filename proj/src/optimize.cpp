#include "greyfc/optimize.hpp"

#include "greyfc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace greyfc {

namespace {

constexpr double kDegenerateA = 1e-12;
constexpr double kSingularRel = 1e-12;
constexpr double kExpGuard = 700.0; // beyond this exp() over/underflows

double round10(double value) {
    return std::round(value * 1e10) / 1e10;
}

std::vector<double> lattice(double lo, double hi, double step, bool inclusive_hi) {
    std::vector<double> points;
    const double slack = step * 1e-6;
    for (long i = 0;; ++i) {
        double value = round10(lo + static_cast<double>(i) * step);
        if (inclusive_hi ? value > hi + slack : value >= hi - slack) {
            break;
        }
        points.push_back(value);
    }
    return points;
}

unsigned resolve_threads() {
    const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("GREYFC_THREADS");
    if (env == nullptr || *env == '\0') {
        return hardware;
    }
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 0) {
        throw ConfigError("GREYFC_THREADS must be a non-negative integer, got \"" +
                          std::string(env) + "\"");
    }
    return value == 0 ? hardware : static_cast<unsigned>(value);
}

struct Candidate {
    bool found = false;
    double arpe = 0.0;
    double weight = 0.0;
    double exponent = 0.0;
    std::size_t feasible = 0;
};

bool better(const Candidate& lhs, const Candidate& rhs) {
    if (!rhs.found) {
        return lhs.found;
    }
    if (!lhs.found) {
        return false;
    }
    if (lhs.arpe != rhs.arpe) {
        return lhs.arpe < rhs.arpe;
    }
    if (lhs.weight != rhs.weight) {
        return lhs.weight < rhs.weight;
    }
    return lhs.exponent < rhs.exponent;
}

/// Evaluate every exponent for one weight row; maintain the row-local best.
void scan_weight_row(const std::vector<double>& x0, const std::vector<double>& x1,
                     double weight, const std::vector<double>& exponents,
                     Candidate& best) {
    const std::size_t m = x0.size();
    std::vector<double> z(m - 1);
    std::vector<double> logz(m - 1);
    double s11 = 0.0;
    double t1 = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        z[i] = (1.0 - weight) * x1[i] + weight * x1[i + 1];
        logz[i] = std::log(z[i]);
        s11 += z[i] * z[i];
        t1 -= z[i] * x0[i + 1];
    }

    for (double n : exponents) {
        if (n == 1.0) {
            continue;
        }
        const double one_minus_n = 1.0 - n;
        double s12 = 0.0;
        double s22 = 0.0;
        double t2 = 0.0;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double zn = std::exp(n * logz[i]);
            s12 -= z[i] * zn;
            s22 += zn * zn;
            t2 += zn * x0[i + 1];
        }
        const double det = s11 * s22 - s12 * s12;
        const double scale = std::max({std::fabs(s11), std::fabs(s12), std::fabs(s22)});
        if (!(std::fabs(det) > kSingularRel * scale)) {
            continue;
        }
        const double a = (t1 * s22 - s12 * t2) / det;
        const double b = (s11 * t2 - s12 * t1) / det;
        if (std::fabs(a) < kDegenerateA) {
            continue;
        }
        const double rate = -a * one_minus_n;
        if (std::fabs(rate) * static_cast<double>(m - 1) > kExpGuard) {
            continue;
        }
        const double ratio = b / a;
        const double init_power = std::pow(x1[m - 1], one_minus_n);

        // Uncorrected anchor-last response, differenced; first point is
        // reported as the observation itself (zero error contribution).
        double error_sum = 0.0;
        double previous = 0.0;
        bool ok = true;
        for (std::size_t k = 1; k <= m; ++k) {
            const double offset = static_cast<double>(k) - static_cast<double>(m);
            const double bracket = (init_power - ratio) * std::exp(rate * offset) + ratio;
            if (!(bracket > 0.0) || !std::isfinite(bracket)) {
                ok = false;
                break;
            }
            const double x1_hat = std::pow(bracket, 1.0 / one_minus_n);
            if (k > 1) {
                const double x0_hat = x1_hat - previous;
                // A fitted value outside the positive domain disqualifies
                // the candidate, matching the fit's own validation.
                if (!(x0_hat > 0.0)) {
                    ok = false;
                    break;
                }
                error_sum += std::fabs((x0_hat - x0[k - 1]) / x0[k - 1]);
            }
            previous = x1_hat;
        }
        if (!ok || !std::isfinite(error_sum)) {
            continue;
        }
        const double objective = error_sum / static_cast<double>(m) * 100.0;
        ++best.feasible;
        Candidate candidate{true, objective, weight, n, 0};
        if (better(candidate, best)) {
            best.arpe = objective;
            best.weight = weight;
            best.exponent = n;
            best.found = true;
        }
    }
}

} // namespace

double formula_background(const TimeSeries& series) {
    const std::vector<double> x1 = ago(series).values();
    const std::size_t m = x1.size();
    if (m < 2) {
        throw DataError("background-weight formula needs at least 2 points");
    }
    double ratio_sum = 0.0;
    for (std::size_t k = 1; k < m; ++k) {
        ratio_sum += x1[k] / x1[k - 1];
    }
    const double q = std::pow(ratio_sum, 1.0 / static_cast<double>(m - 1)) +
                     static_cast<double>(m - 1);
    return 0.5 + 0.5 / q;
}

double formula_exponent(const TimeSeries& series, std::optional<double> weight) {
    const std::size_t m = series.size();
    if (m < 4) {
        throw DataError("exponent formula needs at least 4 points, got " +
                        std::to_string(m));
    }
    const double p = weight ? *weight : formula_background(series);
    const std::vector<double>& x0 = series.values();
    const std::vector<double> zv = background(ago(series), p).values();
    // zv[i] is z(k) for k = i + 2.
    double gamma_sum = 0.0;
    for (std::size_t k = 2; k <= m - 1; ++k) {
        const double zk = zv[k - 2];
        const double zk1 = zv[k - 1];
        const double xk = x0[k - 1];
        const double xk1 = x0[k];
        const double xkm1 = x0[k - 2];
        const double numerator =
            (xk1 - xk) * zk1 * zk * xk - (xk - xkm1) * zk1 * zk * xk1;
        const double denominator = xk1 * xk1 * zk * xk - xk * xk * zk1 * xk1;
        if (!(std::fabs(denominator) > 0.0)) {
            throw NumericError("exponent formula inapplicable: zero denominator at k = " +
                               std::to_string(k));
        }
        gamma_sum += numerator / denominator;
    }
    return gamma_sum / static_cast<double>(m - 2);
}

GridResult grid_search(const TimeSeries& series, const GridSpec& spec) {
    if (!(spec.step >= 0.0005 && spec.step <= 0.05)) {
        throw ConfigError("grid step must lie in [0.0005, 0.05], got " +
                          std::to_string(spec.step));
    }
    if (!(spec.weight_min >= 0.0 && spec.weight_max <= 1.0 &&
          spec.weight_min < spec.weight_max)) {
        throw ConfigError("grid weight range must satisfy 0 <= min < max <= 1");
    }
    if (!(spec.exponent_min < spec.exponent_max)) {
        throw ConfigError("grid exponent range must satisfy min < max");
    }
    if (series.size() < 4) {
        throw DataError("grid search needs at least 4 points, got " +
                        std::to_string(series.size()));
    }

    const std::vector<double> weights =
        lattice(spec.weight_min, spec.weight_max, spec.step, true);
    const std::vector<double> exponents =
        lattice(spec.exponent_min, spec.exponent_max, spec.step, false);
    if (weights.empty() || exponents.empty()) {
        throw ConfigError("grid lattice is empty");
    }

    const std::vector<double>& x0 = series.values();
    const std::vector<double> x1 = ago(series).values();

    const unsigned threads =
        std::min<unsigned>(resolve_threads(), static_cast<unsigned>(weights.size()));
    std::vector<Candidate> bests(threads);
    auto run_chunk = [&](unsigned worker) {
        for (std::size_t i = worker; i < weights.size(); i += threads) {
            scan_weight_row(x0, x1, weights[i], exponents, bests[worker]);
        }
    };
    if (threads <= 1) {
        run_chunk(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads - 1);
        for (unsigned t = 1; t < threads; ++t) {
            pool.emplace_back(run_chunk, t);
        }
        run_chunk(0);
        for (std::thread& worker : pool) {
            worker.join();
        }
    }

    Candidate winner;
    std::size_t feasible = 0;
    for (const Candidate& local : bests) {
        feasible += local.feasible;
        if (better(local, winner)) {
            winner.found = true;
            winner.arpe = local.arpe;
            winner.weight = local.weight;
            winner.exponent = local.exponent;
        }
    }
    if (!winner.found) {
        throw NumericError("grid search found no feasible (P, n) candidate over " +
                           std::to_string(weights.size() * exponents.size()) +
                           " lattice points");
    }

    // Replay the winner through the public estimation path so the reported
    // coefficients and objective are exactly reproducible from (P, n).
    GridResult result;
    result.exponent = winner.exponent;
    result.weight = winner.weight;
    LinearCoeffs coeffs = estimate_ab(series, winner.exponent, winner.weight);
    result.a = coeffs.a;
    result.b = coeffs.b;
    result.arpe =
        fit_ngbm(series, winner.exponent, winner.weight, 0, AnchorMode::Last)
            .metrics.arpe;
    result.feasible = feasible;
    return result;
}

CorrectionTerms correct_initial(const TimeSeries& series, double a, double b,
                                double exponent) {
    if (exponent == 1.0) {
        throw ConfigError("Bernoulli exponent n must not equal 1");
    }
    if (std::fabs(a) < kDegenerateA) {
        throw NumericError("initial-condition correction needs a nonzero development "
                           "coefficient");
    }
    const std::vector<double> x1 = ago(series).values();
    const std::size_t m = x1.size();
    const double one_minus_n = 1.0 - exponent;
    const double ratio = b / a;
    if (std::fabs(a * one_minus_n) * static_cast<double>(m - 1) > kExpGuard) {
        throw NumericError("initial-condition correction overflows for a = " +
                           std::to_string(a));
    }

    CorrectionTerms terms;
    terms.decay.reserve(m);
    terms.target.reserve(m);
    double weighted_sum = 0.0;
    double decay_sq_sum = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
        const double offset = static_cast<double>(k) - static_cast<double>(m);
        const double decay = std::exp(-a * one_minus_n * offset);
        const double target = std::pow(x1[k - 1], one_minus_n) - ratio * (1.0 - decay);
        terms.decay.push_back(decay);
        terms.target.push_back(target);
        weighted_sum += target * decay;
        decay_sq_sum += decay * decay;
    }
    terms.init_power = weighted_sum / decay_sq_sum;
    if (!(terms.init_power > 0.0) || !std::isfinite(terms.init_power)) {
        throw NumericError("initial-condition correction infeasible: corrected power " +
                           std::to_string(terms.init_power) + " is not positive");
    }
    return terms;
}

OngbmFit fit_ongbm(const TimeSeries& series, const OngbmOptions& options) {
    GridResult selection = grid_search(series, options.grid);
    const double x1_last = ago(series).values().back();

    if (options.correction) {
        try {
            CorrectionTerms terms =
                correct_initial(series, selection.a, selection.b, selection.exponent);
            const double corrected_anchor =
                std::pow(terms.init_power, 1.0 / (1.0 - selection.exponent));
            FitResult fit =
                fit_ngbm(series, selection.exponent, selection.weight, options.horizon,
                         AnchorMode::Last, corrected_anchor - x1_last);
            return {std::move(fit), selection};
        } catch (const NumericError&) {
            FitResult fit = fit_ngbm(series, selection.exponent, selection.weight,
                                     options.horizon, AnchorMode::Last);
            fit.correction_fallback = true;
            return {std::move(fit), selection};
        }
    }
    FitResult fit = fit_ngbm(series, selection.exponent, selection.weight,
                             options.horizon, AnchorMode::Last);
    return {std::move(fit), selection};
}

} // namespace greyfc
