#include "greyfc/app/dataset.hpp"
#include "greyfc/errors.hpp"
#include "greyfc/model.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace {

greyfc::TimeSeries make_series(const std::vector<double>& values) {
    std::vector<std::string> labels;
    labels.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        labels.push_back(std::to_string(2000 + i));
    }
    return greyfc::TimeSeries(labels, values);
}

greyfc::TimeSeries gdp_train() {
    return greyfc::app::dataset_series(greyfc::app::find_dataset("vietnam-gdp"))
        .head(10);
}

// Independent check on the coefficient estimate: build the full design
// matrix, form the normal equations, and solve them by Gaussian elimination
// with partial pivoting (a different elimination order than the library's
// closed-form 2x2 solution).
greyfc::LinearCoeffs oracle_estimate(const greyfc::TimeSeries& series,
                                     double exponent, double weight) {
    const std::vector<double>& x0 = series.values();
    std::vector<double> x1;
    double running = 0.0;
    for (double v : x0) {
        running += v;
        x1.push_back(running);
    }
    double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    double r[2] = {0.0, 0.0};
    for (std::size_t k = 1; k < x0.size(); ++k) {
        const double z = (1.0 - weight) * x1[k - 1] + weight * x1[k];
        const double col0 = -z;
        const double col1 = std::pow(z, exponent);
        m[0][0] += col0 * col0;
        m[0][1] += col0 * col1;
        m[1][0] += col1 * col0;
        m[1][1] += col1 * col1;
        r[0] += col0 * x0[k];
        r[1] += col1 * x0[k];
    }
    int pivot = std::fabs(m[0][0]) >= std::fabs(m[1][0]) ? 0 : 1;
    int other = 1 - pivot;
    const double factor = m[other][0] / m[pivot][0];
    const double m11 = m[other][1] - factor * m[pivot][1];
    const double r1 = r[other] - factor * r[pivot];
    greyfc::LinearCoeffs coeffs;
    coeffs.b = r1 / m11;
    coeffs.a = (r[pivot] - m[pivot][1] * coeffs.b) / m[pivot][0];
    return coeffs;
}

} // namespace

TEST_CASE("coefficient estimates agree with an elimination oracle") {
    std::mt19937 rng(101);
    std::uniform_real_distribution<double> magnitude(0.5, 300.0);
    std::uniform_real_distribution<double> exponent_dist(-1.0, 0.95);
    std::uniform_real_distribution<double> weight_dist(0.0, 1.0);
    std::uniform_int_distribution<int> length(4, 10);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> values;
        const int m = length(rng);
        for (int i = 0; i < m; ++i) {
            values.push_back(magnitude(rng));
        }
        const double n = exponent_dist(rng);
        const double p = weight_dist(rng);
        greyfc::TimeSeries series = make_series(values);
        greyfc::LinearCoeffs got;
        try {
            got = greyfc::estimate_ab(series, n, p);
        } catch (const greyfc::NumericError&) {
            continue; // genuinely ill-conditioned draw
        }
        greyfc::LinearCoeffs want = oracle_estimate(series, n, p);
        REQUIRE(got.a == Catch::Approx(want.a).epsilon(1e-9).margin(1e-9));
        REQUIRE(got.b == Catch::Approx(want.b).epsilon(1e-9).margin(1e-9));
        ++checked;
    }
    REQUIRE(checked > 250); // the skip path must stay exceptional
}

TEST_CASE("the basic model is the Bernoulli model at n = 0, P = 0.5") {
    greyfc::TimeSeries train = gdp_train();
    greyfc::FitResult basic = greyfc::fit_gm11(train, 5);
    greyfc::FitResult bernoulli =
        greyfc::fit_ngbm(train, 0.0, 0.5, 5, greyfc::AnchorMode::First);
    REQUIRE(basic.params.a == Catch::Approx(bernoulli.params.a).epsilon(1e-9));
    REQUIRE(basic.params.b == Catch::Approx(bernoulli.params.b).epsilon(1e-9));
    REQUIRE(basic.fitted.values().size() == bernoulli.fitted.values().size());
    for (std::size_t i = 0; i < basic.fitted.values().size(); ++i) {
        REQUIRE(basic.fitted.values()[i] ==
                Catch::Approx(bernoulli.fitted.values()[i]).epsilon(1e-9));
    }
}

TEST_CASE("a constant series degenerates to a zero development coefficient") {
    greyfc::TimeSeries series = make_series({7.5, 7.5, 7.5, 7.5, 7.5});
    greyfc::LinearCoeffs coeffs = greyfc::estimate_ab(series, 0.0, 0.5);
    REQUIRE(std::fabs(coeffs.a) < 1e-9);
    REQUIRE(coeffs.b == Catch::Approx(7.5).epsilon(1e-9));
    greyfc::FitResult fit = greyfc::fit_gm11(series, 3);
    REQUIRE(fit.metrics.arpe < 1e-6);
    for (double value : fit.fitted.values()) {
        REQUIRE(value == Catch::Approx(7.5).epsilon(1e-9));
    }
}

TEST_CASE("the response passes through its anchor exactly") {
    greyfc::TimeSeries train = gdp_train();
    SECTION("anchored at the first point") {
        greyfc::FitResult fit =
            greyfc::fit_ngbm(train, 0.3, 0.4, 0, greyfc::AnchorMode::First);
        REQUIRE(fit.params.anchor == 1);
        REQUIRE(fit.params.init == greyfc::ago(train).values().front());
        REQUIRE(fit.fitted.values().front() == train.values().front());
        REQUIRE(greyfc::ngbm_response(fit.params, 1.0) == fit.params.init);
    }
    SECTION("anchored at the last point") {
        greyfc::FitResult fit =
            greyfc::fit_ngbm(train, 0.3, 0.4, 0, greyfc::AnchorMode::Last);
        REQUIRE(fit.params.anchor == train.size());
        REQUIRE(fit.params.init == greyfc::ago(train).values().back());
        REQUIRE(greyfc::ngbm_response(fit.params,
                                      static_cast<double>(train.size())) ==
                fit.params.init);
        // The first fitted value is still reported as the observation.
        REQUIRE(fit.fitted.values().front() == train.values().front());
    }
}

TEST_CASE("fit validation rejects bad exponents, sizes, and corrections") {
    greyfc::TimeSeries train = gdp_train();
    REQUIRE_THROWS_AS(greyfc::estimate_ab(train, 1.0, 0.5), greyfc::ConfigError);
    REQUIRE_THROWS_AS(greyfc::fit_ngbm(train, 1.0, 0.5), greyfc::ConfigError);
    REQUIRE_THROWS_AS(greyfc::fit_ngbm(train, std::nan(""), 0.5),
                      greyfc::ConfigError);
    REQUIRE_THROWS_AS(greyfc::fit_ngbm(make_series({1.0, 2.0, 3.0}), 0.0, 0.5),
                      greyfc::DataError);
    REQUIRE_THROWS_AS(
        greyfc::fit_ngbm(train, 0.0, 0.5, 0, greyfc::AnchorMode::First, 1.0),
        greyfc::ConfigError);
    // A correction that drags the anchor out of the positive domain.
    REQUIRE_THROWS_AS(
        greyfc::fit_ngbm(train, 0.0, 0.5, 0, greyfc::AnchorMode::Last, -1e9),
        greyfc::NumericError);
}

TEST_CASE("a nearly linear power term makes the system singular") {
    REQUIRE_THROWS_AS(greyfc::estimate_ab(gdp_train(), 1.0 - 1e-14, 0.5),
                      greyfc::NumericError);
}

TEST_CASE("a response crossing zero reports the offending index") {
    greyfc::GreyParams params;
    params.a = 1.0;
    params.b = -1.0;
    params.exponent = 0.0;
    params.weight = 0.5;
    params.init = 0.5;
    params.anchor = 1;
    try {
        greyfc::ngbm_response(params, 2.0);
        FAIL("expected a NumericError");
    } catch (const greyfc::NumericError& e) {
        const std::string message = e.what();
        INFO(message);
        REQUIRE(message.find("k = 2") != std::string::npos);
    }
}

TEST_CASE("a decreasing accumulated response cannot be differenced") {
    // Decaying data fitted anchor-last with the anchor pushed above the
    // response's plateau: the accumulated curve then falls with k, so the
    // differenced series would go negative.
    greyfc::TimeSeries series = make_series({100.0, 50.0, 25.0, 12.5, 6.25});
    REQUIRE_THROWS_AS(
        greyfc::fit_ngbm(series, 0.0, 0.5, 0, greyfc::AnchorMode::Last, 50.0),
        greyfc::NumericError);
}

TEST_CASE("forecast labels continue the window's labelling scheme") {
    greyfc::FitResult fit = greyfc::fit_gm11(gdp_train(), 3);
    REQUIRE(fit.fitted.size() == 13);
    REQUIRE(fit.fitted.labels()[9] == "2013");
    REQUIRE(fit.fitted.labels()[10] == "2014");
    REQUIRE(fit.fitted.labels()[12] == "2016");
}

TEST_CASE("reference fits reproduce published spot values") {
    greyfc::TimeSeries full =
        greyfc::app::dataset_series(greyfc::app::find_dataset("vietnam-gdp"));
    greyfc::TimeSeries train = full.head(10);

    SECTION("basic model") {
        greyfc::FitResult fit = greyfc::fit_gm11(train, 5);
        REQUIRE(fit.fitted.values()[1] == Catch::Approx(61.43522).margin(0.001));
        REQUIRE(fit.fitted.values()[9] ==
                Catch::Approx(174.78129).margin(0.001));
        REQUIRE(fit.fitted.values()[14] ==
                Catch::Approx(335.96448).margin(0.001));
    }
    SECTION("Bernoulli model with a fixed exponent") {
        greyfc::FitResult fit =
            greyfc::fit_ngbm(train, 0.126, 0.5, 5, greyfc::AnchorMode::First);
        REQUIRE(fit.fitted.values()[1] == Catch::Approx(57.62228).margin(0.001));
        REQUIRE(fit.fitted.values()[9] ==
                Catch::Approx(172.43780).margin(0.001));
        REQUIRE(fit.fitted.values()[14] ==
                Catch::Approx(309.45795).margin(0.001));
    }
}
