// Acceptance suite: end-to-end reproduction of the bundled reference results
// plus the numerical invariants the library guarantees. Each criterion prints
// exactly one PASS/FAIL line; the process exits nonzero if any criterion fails.

#include "greyfc/app/dataset.hpp"
#include "greyfc/errors.hpp"
#include "greyfc/metrics.hpp"
#include "greyfc/model.hpp"
#include "greyfc/optimize.hpp"
#include "greyfc/rolling.hpp"
#include "greyfc/series.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace greyfc;

std::vector<std::string> numbered_labels(std::size_t count) {
    std::vector<std::string> labels;
    labels.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        labels.push_back(std::to_string(i + 1));
    }
    return labels;
}

// --- reference columns (vietnam-gdp, billion USD) ---------------------------

const std::vector<double> kGdpGm = {
    45.42785,  61.43522,  70.01275,  79.78786,  90.92776,
    103.62301, 118.09075, 134.57846, 153.36817, 174.78129,
    199.18408, 226.99396, 258.68664, 294.80421, 335.96448};

const std::vector<double> kGdpNgbm = {
    45.42785,  57.62228,  68.73623,  79.99618,  91.99635,
    105.05247, 119.40416, 135.27036, 152.87099, 172.43780,
    194.22121, 218.49546, 245.56317, 275.75975, 309.45795};

const std::vector<double> kGdpOngbm = {
    45.42785,  57.55257,  68.75453,  80.07765,  92.12421,
    105.21288, 119.58390, 135.45557, 153.04632, 172.58566,
    194.32111, 218.52332, 245.49057, 275.55313, 309.07767};

struct RollingRef {
    const char* label;
    double weight;
    double exponent;
    double prediction;
};

const std::vector<RollingRef> kGdpRolling = {
    {"2014", 0.495, 0.13, 194.32111},  {"2015", 0.525, 0.165, 214.67979},
    {"2016", 0.48, 0.155, 238.67530},  {"2017", 0.495, -0.02, 270.80266},
    {"2018", 0.47, 0.03, 303.5345}};

// --- reference rolling chain (covid-global, cumulative cases) ---------------

const std::vector<RollingRef> kCovidRolling = {
    {"2020-02-09", 0.7, 0.505, 41373},   {"2020-02-10", 0.55, 0.47, 45050},
    {"2020-02-11", 0.505, 0.36, 48461},  {"2020-02-12", 0.5, 0.285, 52176},
    {"2020-02-13", 0.49, 0.22, 56045},   {"2020-02-14", 0.47, 0.14, 60493},
    {"2020-02-15", 0.49, 0.095, 65041},  {"2020-02-16", 0.485, 0.065, 70001},
    {"2020-02-17", 0.49, 0.045, 75238},  {"2020-02-18", 0.49, 0.035, 80848}};

// --- tiny assertion collector ------------------------------------------------

class Check {
public:
    void expect(bool condition, const std::string& what) {
        if (!condition && failures_.size() < 4) {
            failures_.push_back(what);
        }
        if (!condition) {
            ++failure_count_;
        }
    }

    void near(const std::string& what, double expected, double actual,
              double tolerance) {
        if (std::fabs(actual - expected) <= tolerance) {
            expect(true, what);
            return;
        }
        std::ostringstream out;
        out.precision(10);
        out << what << ": expected " << expected << " +/- " << tolerance
            << ", got " << actual;
        expect(false, out.str());
    }

    bool ok() const { return failure_count_ == 0; }

    std::string reason() const {
        std::string text;
        for (const std::string& failure : failures_) {
            if (!text.empty()) {
                text += "; ";
            }
            text += failure;
        }
        if (failure_count_ > failures_.size()) {
            text += "; and " + std::to_string(failure_count_ - failures_.size()) +
                    " more";
        }
        return text;
    }

private:
    std::vector<std::string> failures_;
    std::size_t failure_count_ = 0;
};

double published_train_arpe(const std::vector<double>& window_rpe,
                            std::size_t full_length) {
    double sum = 0.0;
    for (double e : window_rpe) {
        sum += std::fabs(e);
    }
    return sum / static_cast<double>(full_length);
}

double overlap_arpe(const TimeSeries& observed, const TimeSeries& fitted) {
    const std::size_t overlap = std::min(observed.size(), fitted.size());
    std::vector<double> actual(observed.values().begin(),
                               observed.values().begin() + overlap);
    std::vector<double> predicted(fitted.values().begin(),
                                  fitted.values().begin() + overlap);
    return evaluate(actual, predicted).arpe;
}

TimeSeries gdp_full() {
    return app::dataset_series(app::find_dataset("vietnam-gdp"));
}

TimeSeries covid_full() {
    return app::dataset_series(app::find_dataset("covid-global"));
}

// --- criteria ----------------------------------------------------------------

void criterion_gm_reference(Check& check) {
    TimeSeries full = gdp_full();
    TimeSeries train = full.head(10);
    FitResult fit = fit_gm11(train, full.size() - train.size());
    for (std::size_t i = 0; i < kGdpGm.size(); ++i) {
        check.near("cell " + full.labels()[i], kGdpGm[i],
                   fit.fitted.values()[i], 0.001);
    }
    check.near("full-span ARPE", 10.07, overlap_arpe(full, fit.fitted), 0.01);
}

void criterion_ngbm_reference(Check& check) {
    TimeSeries full = gdp_full();
    TimeSeries train = full.head(10);
    FitResult fit =
        fit_ngbm(train, 0.126, 0.5, full.size() - train.size(), AnchorMode::First);
    for (std::size_t i = 0; i < kGdpNgbm.size(); ++i) {
        check.near("cell " + full.labels()[i], kGdpNgbm[i],
                   fit.fitted.values()[i], 0.001);
    }
    check.near("full-span ARPE", 7.15, overlap_arpe(full, fit.fitted), 0.01);
}

void criterion_ongbm_selection(Check& check) {
    TimeSeries full = gdp_full();
    TimeSeries train = full.head(10);
    OngbmOptions options;
    options.horizon = full.size() - train.size();
    OngbmFit result = fit_ongbm(train, options);
    check.near("selected n", 0.13, result.selection.exponent, 1e-12);
    check.near("selected P", 0.495, result.selection.weight, 1e-12);
    check.expect(result.fit.correction_applied,
                 "initial-condition correction should apply");
    for (std::size_t i = 0; i < kGdpOngbm.size(); ++i) {
        check.near("cell " + full.labels()[i], kGdpOngbm[i],
                   result.fit.fitted.values()[i], 0.001);
    }
    check.near("training ARPE (full-span normalisation)", 1.3855,
               published_train_arpe(result.fit.metrics.rpe, full.size()), 0.05);
    check.near("full-span ARPE", 7.13, overlap_arpe(full, result.fit.fitted),
               0.05);
}

void criterion_formula_pair(Check& check) {
    TimeSeries full = gdp_full();
    TimeSeries train = full.head(10);
    const std::size_t holdout = full.size() - train.size();

    const double weight = formula_background(train);
    const double exponent = formula_exponent(train);
    check.near("closed-form P", 0.5484042, weight, 1e-6);
    check.near("closed-form n", -0.1387509, exponent, 1e-6);

    LinearCoeffs coeffs = estimate_ab(train, exponent, weight);
    CorrectionTerms terms = correct_initial(train, coeffs.a, coeffs.b, exponent);
    const double anchor = std::pow(terms.init_power, 1.0 / (1.0 - exponent));
    const std::vector<double> x1 = ago(train).values();
    FitResult fit = fit_ngbm(train, exponent, weight, holdout, AnchorMode::Last,
                             anchor - x1.back());
    const double formula_arpe =
        published_train_arpe(fit.metrics.rpe, full.size());
    check.near("training ARPE (full-span normalisation)", 2.8314, formula_arpe,
               0.05);

    OngbmOptions options;
    options.horizon = holdout;
    OngbmFit grid = fit_ongbm(train, options);
    const double grid_arpe =
        published_train_arpe(grid.fit.metrics.rpe, full.size());
    check.expect(formula_arpe > grid_arpe,
                 "closed-form pair should fit strictly worse than the grid "
                 "selection");
}

void criterion_gdp_rolling(Check& check) {
    TimeSeries full = gdp_full();
    RollingConfig config;
    config.window = 10;
    config.horizon = full.size() - config.window;
    config.feedback = Feedback::Predicted;
    RollingResult result = rolling_forecast(full, config);
    check.expect(result.trace.size() == kGdpRolling.size(),
                 "expected one rolling step per holdout year");
    for (std::size_t i = 0; i < kGdpRolling.size(); ++i) {
        const RollingRef& ref = kGdpRolling[i];
        const RollingStep& step = result.trace[i];
        check.expect(step.label == ref.label,
                     std::string("step label should be ") + ref.label);
        check.near(std::string("P for ") + ref.label, ref.weight, step.weight,
                   1e-12);
        check.near(std::string("n for ") + ref.label, ref.exponent,
                   step.exponent, 1e-12);
        check.near(std::string("prediction for ") + ref.label, ref.prediction,
                   step.prediction, 0.01);
    }
    check.near("full-span ARPE", 6.48, result.fit.metrics.arpe, 0.05);
}

void criterion_covid_fits(Check& check) {
    TimeSeries full = covid_full();
    FitResult gm = fit_gm11(full, 0);
    check.near("GM(1,1) ARPE", 7.08, gm.metrics.arpe, 0.05);

    FitResult ngbm = fit_ngbm(full, 0.41, 0.5, 0, AnchorMode::First);
    check.near("NGBM(0.41) ARPE", 2.55, ngbm.metrics.arpe, 0.05);

    OngbmOptions options;
    options.horizon = 0;
    options.correction = false;
    OngbmFit ongbm = fit_ongbm(full, options);
    check.near("selected n", 0.505, ongbm.selection.exponent, 1e-12);
    check.near("selected P", 0.7, ongbm.selection.weight, 1e-12);
    check.near("ONGBM ARPE", 2.43, ongbm.fit.metrics.arpe, 0.05);
}

void criterion_covid_rolling(Check& check) {
    TimeSeries full = covid_full();

    OngbmOptions options;
    options.horizon = kCovidRolling.size();
    options.correction = false;
    OngbmFit ongbm = fit_ongbm(full, options);

    RollingConfig config;
    config.window = full.size();
    config.horizon = kCovidRolling.size();
    config.feedback = Feedback::Predicted;
    config.correction = false;
    RollingResult rolling = rolling_forecast(full, config);
    check.expect(rolling.trace.size() == kCovidRolling.size(),
                 "expected one rolling step per forecast day");

    check.expect(rolling.trace.front().prediction ==
                     ongbm.fit.fitted.values()[full.size()],
                 "first rolling prediction should equal the one-shot forecast "
                 "exactly");
    for (std::size_t i = 0; i < kCovidRolling.size(); ++i) {
        const RollingRef& ref = kCovidRolling[i];
        const RollingStep& step = rolling.trace[i];
        check.expect(step.label == ref.label,
                     std::string("step label should be ") + ref.label);
        if (i == 0) {
            check.near(std::string("prediction for ") + ref.label,
                       ref.prediction, step.prediction, 1.0);
        } else {
            check.near(std::string("prediction for ") + ref.label,
                       ref.prediction, step.prediction,
                       0.005 * std::fabs(ref.prediction));
        }
    }
}

// Property checks: the structural invariants behind the reproductions.

void property_ago_roundtrip(Check& check) {
    std::mt19937 rng(20260819);
    std::uniform_real_distribution<double> value(0.01, 1000.0);
    std::uniform_int_distribution<int> length(4, 40);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> values(static_cast<std::size_t>(length(rng)));
        for (double& v : values) {
            v = value(rng);
        }
        TimeSeries series(numbered_labels(values.size()), values);
        AgoSeries accumulated = ago(series);
        std::vector<double> back = inverse_ago(accumulated);
        const double scale = std::max(1.0, accumulated.values().back());
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (std::fabs(back[i] - values[i]) > 1e-12 * scale) {
                check.expect(false, "accumulate/difference round trip drifted");
                return;
            }
        }
    }
    check.expect(true, "round trip");
}

void property_gm_degeneration(Check& check) {
    TimeSeries train = gdp_full().head(10);
    FitResult basic = fit_gm11(train, 5);
    FitResult degenerate = fit_ngbm(train, 0.0, 0.5, 5, AnchorMode::First);
    check.near("a", basic.params.a, degenerate.params.a, 1e-9);
    check.near("b", basic.params.b, degenerate.params.b, 1e-9);
    for (std::size_t i = 0; i < basic.fitted.size(); ++i) {
        if (std::fabs(basic.fitted.values()[i] - degenerate.fitted.values()[i]) >
            1e-9) {
            check.expect(false, "n = 0 Bernoulli fit should equal the basic fit");
            return;
        }
    }
}

void property_grid_thread_determinism(Check& check) {
    TimeSeries train = gdp_full().head(10);
    const char* saved = std::getenv("GREYFC_THREADS");
    const std::string restore = saved ? saved : "";

    setenv("GREYFC_THREADS", "1", 1);
    GridResult serial = grid_search(train);
    setenv("GREYFC_THREADS", "4", 1);
    GridResult parallel = grid_search(train);

    if (saved) {
        setenv("GREYFC_THREADS", restore.c_str(), 1);
    } else {
        unsetenv("GREYFC_THREADS");
    }
    check.expect(serial.exponent == parallel.exponent &&
                     serial.weight == parallel.weight &&
                     serial.a == parallel.a && serial.b == parallel.b &&
                     serial.arpe == parallel.arpe &&
                     serial.feasible == parallel.feasible,
                 "grid selection should not depend on the thread count");
}

void property_refinement_monotonic(Check& check) {
    TimeSeries train = gdp_full().head(10);
    double previous = 1e300;
    for (double step : {0.04, 0.02, 0.01, 0.005}) {
        GridSpec spec;
        spec.step = step;
        GridResult result = grid_search(train, spec);
        check.expect(result.arpe <= previous + 1e-12,
                     "finer lattices should never select a worse objective");
        previous = result.arpe;
    }
}

void property_correction_least_squares(Check& check) {
    TimeSeries train = gdp_full().head(10);
    const double exponent = 0.13;
    LinearCoeffs coeffs = estimate_ab(train, exponent, 0.495);
    CorrectionTerms terms = correct_initial(train, coeffs.a, coeffs.b, exponent);

    auto objective = [&terms](double init_power) {
        double sum = 0.0;
        for (std::size_t i = 0; i < terms.decay.size(); ++i) {
            const double residual = terms.target[i] - init_power * terms.decay[i];
            sum += residual * residual;
        }
        return sum;
    };
    const double best = objective(terms.init_power);

    const std::vector<double> x1 = ago(train).values();
    const double chosen_c =
        std::pow(terms.init_power, 1.0 / (1.0 - exponent)) - x1.back();
    const double span = std::max(std::fabs(chosen_c), 1.0) * 0.5;
    for (int i = 0; i <= 400; ++i) {
        const double c = chosen_c - span + i * (2.0 * span / 400.0);
        const double base = x1.back() + c;
        if (!(base > 0.0)) {
            continue;
        }
        const double candidate = objective(std::pow(base, 1.0 - exponent));
        if (candidate < best - 1e-9 * std::max(1.0, best)) {
            check.expect(false,
                         "corrected anchor should minimise the least-squares "
                         "objective");
            return;
        }
    }
    check.expect(true, "correction optimal");
}

void property_metric_scale_laws(Check& check) {
    const std::vector<double> actual = {45.4, 57.6, 66.4, 77.4, 99.1, 106.0};
    const std::vector<double> fitted = {45.4, 56.9, 67.2, 78.8, 97.3, 108.1};
    MetricsReport base = evaluate(actual, fitted);
    for (double lambda : {0.001, 0.5, 3.0, 1000.0}) {
        std::vector<double> actual_scaled(actual);
        std::vector<double> fitted_scaled(fitted);
        for (double& v : actual_scaled) {
            v *= lambda;
        }
        for (double& v : fitted_scaled) {
            v *= lambda;
        }
        MetricsReport scaled = evaluate(actual_scaled, fitted_scaled);
        check.expect(std::fabs(scaled.arpe - base.arpe) <= 1e-12 * base.arpe,
                     "ARPE should be scale invariant");
        check.expect(std::fabs(scaled.rmse - base.rmse * lambda) <=
                         1e-9 * base.rmse * lambda,
                     "RMSE should scale with the data");
    }
}

void property_classification_total(Check& check) {
    check.expect(classify_arpe(10.0) == FitGrade::Excellent &&
                     classify_arpe(10.000001) == FitGrade::Good &&
                     classify_arpe(20.0) == FitGrade::Good &&
                     classify_arpe(20.000001) == FitGrade::Reasonable &&
                     classify_arpe(50.0) == FitGrade::Reasonable &&
                     classify_arpe(50.000001) == FitGrade::Unacceptable,
                 "ARPE grade boundaries should fall to the lower band");
    check.expect(classify_posterior(0.35) == 1 && classify_posterior(0.36) == 2 &&
                     classify_posterior(0.5) == 2 &&
                     classify_posterior(0.51) == 3 &&
                     classify_posterior(0.65) == 3 &&
                     classify_posterior(0.66) == 4,
                 "posterior rank boundaries should fall to the lower band");
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> arpe_value(0.0, 200.0);
    std::uniform_real_distribution<double> ratio_value(0.0, 3.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const FitGrade grade = classify_arpe(arpe_value(rng));
        check.expect(grade == FitGrade::Excellent || grade == FitGrade::Good ||
                         grade == FitGrade::Reasonable ||
                         grade == FitGrade::Unacceptable,
                     "every ARPE should classify");
        const int rank = classify_posterior(ratio_value(rng));
        check.expect(rank >= 1 && rank <= 4, "every ratio should rank");
    }
}

void property_least_squares_oracle(Check& check) {
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> length(4, 10);
    std::uniform_real_distribution<double> value(1.0, 100.0);
    std::uniform_real_distribution<double> exponent_draw(-1.0, 0.95);
    std::uniform_real_distribution<double> weight_draw(0.0, 1.0);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t m = static_cast<std::size_t>(length(rng));
        std::vector<double> values(m);
        for (double& v : values) {
            v = value(rng);
        }
        TimeSeries series(numbered_labels(m), values);
        const double n = exponent_draw(rng);
        const double p = weight_draw(rng);

        // Independent solve of the same normal equations by full Gaussian
        // elimination on the s x 2 design matrix.
        const std::vector<double> x1 = ago(series).values();
        const std::vector<double> z = background(ago(series), p).values();
        double g11 = 0.0, g12 = 0.0, g22 = 0.0, r1 = 0.0, r2 = 0.0;
        for (std::size_t k = 1; k < m; ++k) {
            const double c1 = -z[k - 1];
            const double c2 = std::pow(z[k - 1], n);
            const double y = values[k];
            g11 += c1 * c1;
            g12 += c1 * c2;
            g22 += c2 * c2;
            r1 += c1 * y;
            r2 += c2 * y;
        }
        // Partial pivoting on the 2x2 system.
        double a_ref = 0.0;
        double b_ref = 0.0;
        if (std::fabs(g11) >= std::fabs(g12)) {
            const double factor = g12 / g11;
            const double denom = g22 - factor * g12;
            if (std::fabs(denom) < 1e-12 * std::max(std::fabs(g22), 1.0)) {
                continue;
            }
            b_ref = (r2 - factor * r1) / denom;
            a_ref = (r1 - g12 * b_ref) / g11;
        } else {
            const double factor = g11 / g12;
            const double denom = g12 - factor * g22;
            if (std::fabs(denom) < 1e-12 * std::max(std::fabs(g12), 1.0)) {
                continue;
            }
            b_ref = (r1 - factor * r2) / denom;
            a_ref = (r2 - g22 * b_ref) / g12;
        }

        LinearCoeffs coeffs;
        try {
            coeffs = estimate_ab(series, n, p);
        } catch (const NumericError&) {
            continue;
        }
        const double scale_a = std::max(1.0, std::fabs(a_ref));
        const double scale_b = std::max(1.0, std::fabs(b_ref));
        if (std::fabs(coeffs.a - a_ref) > 1e-9 * scale_a ||
            std::fabs(coeffs.b - b_ref) > 1e-9 * scale_b) {
            check.expect(false, "least-squares estimate diverged from an "
                                "independent elimination");
            return;
        }
        ++checked;
    }
    check.expect(checked >= 90, "oracle comparison should cover most draws");
}

void criterion_properties(Check& check) {
    property_ago_roundtrip(check);
    property_gm_degeneration(check);
    property_grid_thread_determinism(check);
    property_refinement_monotonic(check);
    property_correction_least_squares(check);
    property_metric_scale_laws(check);
    property_classification_total(check);
    property_least_squares_oracle(check);
}

struct Criterion {
    int number;
    std::string description;
    std::function<void(Check&)> body;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1,
         "GM(1,1) reproduces the vietnam-gdp reference column "
         "(15 cells +/- 0.001, full-span ARPE 10.07)",
         criterion_gm_reference},
        {2,
         "NGBM(1,1) with n = 0.126 reproduces its reference column "
         "(15 cells +/- 0.001, full-span ARPE 7.15)",
         criterion_ngbm_reference},
        {3,
         "grid search selects (n = 0.13, P = 0.495) and the corrected fit "
         "reproduces the reference column and error levels",
         criterion_ongbm_selection},
        {4,
         "closed-form (P, n) formulas give 0.5484042 / -0.1387509 and fit "
         "strictly worse than the grid selection",
         criterion_formula_pair},
        {5,
         "rolling re-optimisation over vietnam-gdp reproduces the year-by-year "
         "parameters and predictions (ARPE 6.48)",
         criterion_gdp_rolling},
        {6,
         "covid-global fits reproduce the reference error levels (GM 7.08, "
         "NGBM(0.41) 2.55, ONGBM 2.43 at n = 0.505, P = 0.7)",
         criterion_covid_fits},
        {7,
         "rolling covid-global forecasts chain from the one-shot forecast and "
         "track the reference predictions",
         criterion_covid_rolling},
        {8,
         "numerical invariants hold (round trips, degeneration, determinism, "
         "refinement, correction optimality, metric laws, classification, "
         "least-squares oracle)",
         criterion_properties},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        Check check;
        std::string reason;
        try {
            criterion.body(check);
            if (!check.ok()) {
                reason = check.reason();
            }
        } catch (const std::exception& e) {
            reason = std::string("unexpected error: ") + e.what();
        }
        if (reason.empty()) {
            std::cout << "PASS criterion " << criterion.number << ": "
                      << criterion.description << '\n';
        } else {
            std::cout << "FAIL criterion " << criterion.number << ": "
                      << criterion.description << " -- " << reason << '\n';
            ++failures;
        }
    }
    if (failures == 0) {
        std::cout << "acceptance: all " << criteria.size()
                  << " criteria passed\n";
    } else {
        std::cout << "acceptance: " << failures << " of " << criteria.size()
                  << " criteria failed\n";
    }
    return failures == 0 ? 0 : 1;
}
