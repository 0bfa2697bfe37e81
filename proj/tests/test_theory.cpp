#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "oracles.hpp"
#include "rlp/theory.hpp"

using namespace rlp::theory;

namespace {
double rel_err(double got, double want) {
    if (want == 0.0) return std::fabs(got);
    return std::fabs(got - want) / std::fabs(want);
}
const RhsModel kOnes = RhsModel::constant(1.0);
}  // namespace

TEST_CASE("per-constraint term against frozen high-precision values") {
    const struct {
        double u, want;
    } cases[] = {
        {-40.0, 1601.0},
        {-10.0, 101.0},
        {-2.0, 4.9942312732854801},
        {-1.0, 1.9246602166562292},
        {-0.5, 1.0403607399746661},
        {0.0, 0.5},
        {0.5, 0.20963926002533388},
        {1.0, 0.075339783343770753},
        {2.0, 0.0057687267145199321},
        {5.0, 1.9343295187553164e-8},
        {8.0, 1.8075064471458499e-17},
        {10.0, 1.4529276957119803e-25},
        {15.0, 3.1928568019276313e-53},
        {20.0, 1.3599129147073809e-91},
        {30.0, 1.0843724873983491e-200},
    };
    for (const auto& c : cases) {
        CAPTURE(c.u);
        CHECK(rel_err(per_constraint_term(1.0, c.u), c.want) < 1e-11);
    }
    // true value ~4.6e-353 is below the subnormal range
    CHECK(per_constraint_term(1.0, 40.0) <= 1e-300);
    CHECK(per_constraint_term(1.0, 40.0) >= 0.0);
    CHECK(per_constraint_term(1.0, 1e6) == 0.0);
}

TEST_CASE("per-constraint term only depends on the ratio a/x") {
    for (double x : {0.25, 1.0, 3.0}) {
        CAPTURE(x);
        CHECK(rel_err(per_constraint_term(x, 2.0 * x), per_constraint_term(1.0, 2.0)) < 1e-14);
    }
}

TEST_CASE("per-constraint term against the Monte Carlo oracle") {
    // E[max(g - 1, 0)^2] over 1e8 samples, 3 standard errors
    const auto mc = oracle::mc_normal_expectation(
        [](double z) {
            const double h = std::max(z - 1.0, 0.0);
            return h * h;
        },
        100'000'000, 777);
    CHECK(std::fabs(per_constraint_term(1.0, 1.0) - mc.mean) < 3.0 * mc.std_error);
}

TEST_CASE("per-constraint term monotonicity and bounds") {
    // strictly decreasing in a for fixed x
    double prev = per_constraint_term(1.0, -6.0);
    for (int i = 1; i <= 60; ++i) {
        const double a = -6.0 + 12.0 * i / 60.0;
        const double v = per_constraint_term(1.0, a);
        CAPTURE(a);
        CHECK(v < prev);
        prev = v;
    }
    // strictly increasing in x for fixed a > 0
    prev = per_constraint_term(0.1, 1.0);
    for (int i = 1; i <= 40; ++i) {
        const double x = 0.1 + 0.15 * i;
        const double v = per_constraint_term(x, 1.0);
        CAPTURE(x);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(per_constraint_term(1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-13));
    for (double u : {0.2, 1.0, 4.0}) {
        CHECK(per_constraint_term(1.0, u) < 0.5);
        CHECK(per_constraint_term(1.0, -u) > 0.5);
        CHECK(per_constraint_term(1.0, u) <= 1.0 + u * u);
    }
}

TEST_CASE("per-constraint term parameter errors") {
    CHECK_THROWS_AS(per_constraint_term(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(per_constraint_term(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(per_constraint_term(1.0, std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
}

TEST_CASE("RhsModel validation") {
    CHECK_THROWS_AS(RhsModel::constant(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(RhsModel::vector({}, 2), std::invalid_argument);
    CHECK_THROWS_AS(RhsModel::vector({1.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(RhsModel::atoms({1.0, 2.0}, {0.6, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(RhsModel::atoms({1.0}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(RhsModel::gaussian(0.0, -1.0), std::invalid_argument);
    CHECK_NOTHROW(RhsModel::atoms({0.5, 2.0}, {0.25, 0.75}));
}

TEST_CASE("f1 closed cases") {
    // 2 * T(0) = 1
    CHECK(rel_err(f1(1.0, RhsModel::constant(0.0), 2.0), 1.0) < 1e-13);
    // frozen: 0.6 * sqrt(20 * T(1/0.6))
    CHECK(rel_err(f1(0.6, kOnes, 20.0), 0.32584032332965768) < 1e-12);
    // Vector of 40 ones with n = 2 is Constant(1) at alpha = 20
    const auto vec = RhsModel::vector(std::vector<double>(40, 1.0), 2);
    CHECK(rel_err(f1(1.0, vec, 0.0), f1(1.0, kOnes, 20.0)) < 1e-14);
    CHECK(rel_err(f1(0.37, vec, 0.0), f1(0.37, kOnes, 20.0)) < 1e-14);
}

TEST_CASE("f1 homogeneity of degree 1") {
    for (double gamma : {0.5, 2.0, 10.0}) {
        CAPTURE(gamma);
        // Constant: f1(g x; g a) = g f1(x; a)
        CHECK(rel_err(f1(gamma * 0.7, RhsModel::constant(gamma * 1.3), 20.0),
                      gamma * f1(0.7, RhsModel::constant(1.3), 20.0)) < 1e-12);
        // Vector
        std::vector<double> base = {0.5, 1.0, 1.5, 2.0, -0.25, 0.75};
        std::vector<double> scaled = base;
        for (double& v : scaled) v *= gamma;
        CHECK(rel_err(f1(gamma * 0.9, RhsModel::vector(scaled, 3), 0.0),
                      gamma * f1(0.9, RhsModel::vector(base, 3), 0.0)) < 1e-12);
    }
}

TEST_CASE("q closed cases") {
    const auto far = RhsModel::constant(1e6);
    for (double x : {0.5, 1.0, 7.0}) {
        CAPTURE(x);
        CHECK(q(x, far, 20.0) == x * x);  // T underflows to exactly 0
    }
    // q(x)/x^2 -> 1 as x -> 0+
    CHECK(rel_err(q(1e-6, kOnes, 20.0) / 1e-12, 1.0) < 1e-12);
    // frozen: q(0.6) and sqrt(q)
    CHECK(rel_err(q(0.6, kOnes, 20.0), 0.25382808369242414) < 1e-12);
    CHECK(rel_err(std::sqrt(q(0.6, kOnes, 20.0)), 0.50381354060051238) < 1e-12);
    // negative past the boundary
    CHECK(q(2.0, kOnes, 20.0) < 0.0);
}

TEST_CASE("lambda_hat") {
    // f1 = x / sqrt(2) makes lambda_hat = 1: calibrate a so alpha*T(a) = 1/2
    double lo = 1.0, hi = 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (20.0 * per_constraint_term(1.0, mid) > 0.5 ? lo : hi) = mid;
    }
    const double a_star = 0.5 * (lo + hi);
    CHECK(std::fabs(lambda_hat(1.0, RhsModel::constant(a_star), 20.0) - 1.0) < 1e-9);

    // f1 == 0 => lambda_hat == 0
    CHECK(lambda_hat(1.0, RhsModel::constant(1e6), 20.0) == 0.0);

    // diverges when q <= 0
    CHECK_THROWS_AS(lambda_hat(2.0, kOnes, 20.0), std::domain_error);

    // composition at the frozen point
    const double f = f1(0.6, kOnes, 20.0);
    const double qq = q(0.6, kOnes, 20.0);
    CHECK(rel_err(lambda_hat(0.6, kOnes, 20.0), f / std::sqrt(qq)) < 1e-14);
}

TEST_CASE("solve_xi reproduces the five reference ratios") {
    const struct {
        double alpha, xi, rounded;
    } cases[] = {
        {20.0, 0.50402414981431714, 0.50402},
        {40.0, 0.43906542134082, 0.43907},
        {120.0, 0.372637153333269, 0.37264},
        {200.0, 0.350321641583812, 0.35032},
        {400.0, 0.325454940734978, 0.32545},
    };
    for (const auto& c : cases) {
        CAPTURE(c.alpha);
        const TheoryResult r = solve_xi(kOnes, c.alpha);
        CHECK(rel_err(r.xi_opt, c.xi) < 1e-9);
        CHECK(std::fabs(r.xi_opt - c.rounded) < 5e-6);
        // result invariants
        CHECK(r.x_star > 0.0);
        CHECK(r.x_star < r.x_max);
        CHECK(std::fabs(r.xi_opt * r.xi_opt -
                        (r.x_star * r.x_star - std::pow(f1(r.x_star, kOnes, c.alpha), 2))) <
              1e-10);
        const double f = f1(r.x_star, kOnes, c.alpha);
        CHECK(std::fabs(r.lambda_hat - f / std::sqrt(r.x_star * r.x_star - f * f)) < 1e-10);
    }
    // detailed frozen point at alpha=20
    const TheoryResult r20 = solve_xi(kOnes, 20.0);
    CHECK(std::fabs(r20.x_star - 0.60795683191176895) < 1e-6);
    CHECK(std::fabs(r20.lambda_hat - 0.67448671725663182) < 1e-6);
    CHECK(std::fabs(r20.x_max - 0.84722796340001116) < 1e-10);
}

TEST_CASE("solve_xi stationarity at the reference ratios") {
    for (double alpha : {20.0, 40.0, 120.0, 200.0, 400.0}) {
        CAPTURE(alpha);
        const TheoryResult r = solve_xi(kOnes, alpha);
        const double h = 1e-5 * r.x_star;
        const double qp =
            (q(r.x_star + h, kOnes, alpha) - q(r.x_star - h, kOnes, alpha)) / (2.0 * h);
        CHECK(std::fabs(qp) <= 1e-6 * std::max(q(r.x_star, kOnes, alpha), 1.0));
    }
}

TEST_CASE("solve_xi scale law") {
    const double base40 = solve_xi(kOnes, 40.0).xi_opt;
    for (double gamma : {0.5, 2.0, 10.0}) {
        CAPTURE(gamma);
        const TheoryResult r = solve_xi(RhsModel::constant(gamma), 40.0);
        CHECK(rel_err(r.xi_opt, gamma * base40) < 1e-8);
    }
}

TEST_CASE("solve_xi monotone decreasing in alpha") {
    double prev = std::numeric_limits<double>::infinity();
    for (double alpha : {20.0, 40.0, 120.0, 200.0, 400.0}) {
        const double xi = solve_xi(kOnes, alpha).xi_opt;
        CHECK(xi < prev);
        prev = xi;
    }
}

TEST_CASE("solve_xi distribution variants") {
    // point mass at 1 == Constant(1)
    const auto atom = RhsModel::atoms({1.0}, {1.0});
    CHECK(std::fabs(solve_xi(atom, 20.0).xi_opt - solve_xi(kOnes, 20.0).xi_opt) < 1e-10);

    // Gaussian with zero spread == Constant(mean)
    const auto g0 = RhsModel::gaussian(1.0, 0.0);
    CHECK(std::fabs(solve_xi(g0, 20.0).xi_opt - solve_xi(kOnes, 20.0).xi_opt) < 1e-10);

    // frozen value from exact quadrature: alpha=20, a ~ N(1, 0.25^2)
    const auto g = RhsModel::gaussian(1.0, 0.25);
    const TheoryResult r = solve_xi(g, 20.0);
    CHECK(rel_err(r.xi_opt, 0.43765322299286819) < 1e-8);
    CHECK(std::fabs(r.x_star - 0.55417642449692399) < 1e-6);

    // two-atom law sits strictly between its extremes
    const auto mix = RhsModel::atoms({0.5, 1.5}, {0.5, 0.5});
    const double xi_mix = solve_xi(mix, 20.0).xi_opt;
    CHECK(xi_mix > solve_xi(RhsModel::constant(0.5), 20.0).xi_opt);
    CHECK(xi_mix < solve_xi(RhsModel::constant(1.5), 20.0).xi_opt);
}

TEST_CASE("solve_xi vector variant consistency") {
    const auto vec = RhsModel::vector(std::vector<double>(40, 1.0), 2);
    const TheoryResult rv = solve_xi(vec, 999.0 /* ignored */);
    const TheoryResult rc = solve_xi(kOnes, 20.0);
    CHECK(std::fabs(rv.xi_opt - rc.xi_opt) < 1e-12);
    CHECK(rv.alpha == doctest::Approx(20.0));
}

TEST_CASE("solve_xi error surfaces") {
    // a = 0 with alpha > 2: q(x) = x^2 (1 - alpha/2) < 0 everywhere
    CHECK_THROWS_AS(solve_xi(RhsModel::constant(0.0), 20.0), SolveError);
    try {
        solve_xi(RhsModel::constant(0.0), 20.0);
    } catch (const SolveError& e) {
        CHECK(e.kind() == SolveError::Kind::NoFeasibleScale);
    }
    // alpha < 2: q grows without bound, no interior stationary point
    try {
        solve_xi(kOnes, 1.2);
        CHECK(false);
    } catch (const SolveError& e) {
        CHECK(e.kind() == SolveError::Kind::NoStationaryPoint);
    }
    // strongly negative a: x^2 - f1^2 < 0 for every x
    CHECK_THROWS_AS(solve_xi(RhsModel::constant(-1.0), 20.0), SolveError);
    // parameter validation
    CHECK_THROWS_AS(solve_xi(kOnes, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_xi(kOnes, 20.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(solve_xi(kOnes, 20.0, 0.0), std::invalid_argument);
}

TEST_CASE("xi_asymptote") {
    CHECK(rel_err(xi_asymptote(std::exp(1.0)), 0.70710678118654752) < 1e-14);
    CHECK(rel_err(xi_asymptote(std::exp(2.0)), 0.5) < 1e-14);
    CHECK_THROWS_AS(xi_asymptote(1.0), std::invalid_argument);
    CHECK_THROWS_AS(xi_asymptote(0.5), std::invalid_argument);

    // ratio approaches 1 from above, monotonically on the probe grid
    double prev = std::numeric_limits<double>::infinity();
    const double frozen[] = {1.11254161337, 1.06441371738, 1.04667232399};
    int k = 0;
    for (double alpha : {1e3, 1e6, 1e9}) {
        const double ratio = solve_xi(kOnes, alpha).xi_opt / xi_asymptote(alpha);
        CAPTURE(alpha);
        CHECK(ratio > 1.0);
        CHECK(ratio < prev);
        CHECK(rel_err(ratio, frozen[k++]) < 1e-6);
        prev = ratio;
    }
}

TEST_CASE("mean_width") {
    const double xi20 = solve_xi(kOnes, 20.0).xi_opt;
    CHECK(rel_err(mean_width(kOnes, 20.0), 2.0 * xi20) < 1e-14);
    CHECK(std::fabs(mean_width(kOnes, 20.0) - 1.00804) < 1e-5);
    CHECK(std::fabs(mean_width(kOnes, 400.0) - 0.65090) < 1e-5);
    // homogeneity: width(gamma * ones) = gamma * width(ones)
    CHECK(rel_err(mean_width(RhsModel::constant(2.0), 20.0), 2.0 * mean_width(kOnes, 20.0)) <
          1e-8);
}
