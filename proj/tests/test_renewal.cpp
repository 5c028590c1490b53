#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "invsub/errors.hpp"
#include "invsub/renewal.hpp"

using namespace invsub;

TEST_CASE("transform of the renewal function") {
    const auto cp = compound_poisson_exp(1.0, 1.0);
    const LaplaceFunction f = renewal_transform(cp);
    // phi(2) = 2/3, so 1/(2 phi(2)) = 3/4
    CHECK(f.eval({2.0, 0.0}).real() == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(f.eval({2.0, 0.0}).imag() == 0.0);
    CHECK(f.hint == Smoothness::jumpy);
    CHECK(renewal_transform(gamma_model(1.0, 1.0)).hint == Smoothness::smooth);
}

TEST_CASE("pointwise values against closed forms") {
    const auto drift = drift_only(2.0);
    CHECK(renewal_function(drift, 0.3) == 0.3 / 2.0);
    CHECK(renewal_function(drift, 7.0) == 3.5);

    // exponential jumps: U(t) = (1 + theta t)/c
    const auto cp = compound_poisson_exp(1.0, 1.0);
    for (double t : {0.5, 1.0, 5.0, 50.0})
        CHECK(renewal_function(cp, t) == doctest::Approx(1.0 + t).epsilon(1e-6));

    // stable: U(t) = t^alpha / Gamma(1 + alpha)
    const auto st = stable_model(0.5);
    for (double t : {0.5, 1.0, 2.0, 5.0})
        CHECK(renewal_function(st, t) ==
              doctest::Approx(std::sqrt(t) / std::tgamma(1.5)).epsilon(1e-6));

    CHECK_THROWS_AS((void)renewal_function(cp, 0.0), ValidationError);
    CHECK_THROWS_AS((void)renewal_function(cp, -1.0), ValidationError);
}

TEST_CASE("grid construction invariants") {
    SUBCASE("drift-only grids are exact") {
        const RenewalGrid g = build_renewal_grid(drift_only(2.0), 0.1, 1.0);
        REQUIRE(g.values.size() == 11);
        CHECK(g.atom0 == 0.0);
        for (std::size_t k = 0; k < g.values.size(); ++k)
            CHECK(g.values[k] == static_cast<double>(k) * 0.1 / 2.0);
    }

    SUBCASE("finite-activity models carry an atom at zero") {
        const auto cp = compound_poisson_det(2.0, 1.0);
        const RenewalGrid g = build_renewal_grid(cp, 0.25, 6.0);
        CHECK(g.atom0 == 0.5);
        CHECK(g.values[0] == 0.5);
        for (std::size_t k = 0; k + 1 < g.values.size(); ++k)
            CHECK(g.values[k + 1] >= g.values[k]);
    }

    SUBCASE("infinite-activity models have no atom") {
        const RenewalGrid g = build_renewal_grid(gamma_model(1.0, 1.0), 0.05, 2.0);
        CHECK(g.atom0 == 0.0);
        CHECK(g.values[0] == 0.0);
        for (std::size_t k = 0; k + 1 < g.values.size(); ++k)
            CHECK(g.values[k + 1] >= g.values[k]);
    }

    SUBCASE("argument validation") {
        CHECK_THROWS_AS((void)build_renewal_grid(drift_only(1.0), 0.0, 1.0),
                        ValidationError);
        CHECK_THROWS_AS((void)build_renewal_grid(drift_only(1.0), 0.5, 0.1),
                        ValidationError);
    }
}

TEST_CASE("staircase renewal functions resolve to midpoints") {
    // With deterministic unit jumps U is the staircase (floor(t)+1)/c. The
    // summation method cannot reproduce the discontinuities; it converges to
    // the midpoint interpolant (t + 1/2)/c instead. Between jumps the two
    // coincide to ~1e-3 relative at half-integers, and the midpoint value is
    // what comes out where they disagree.
    const auto cp = compound_poisson_det(2.0, 1.0);
    const RenewalGrid g = build_renewal_grid(cp, 0.25, 6.0);

    // at the flat middle of each stair the two interpolants agree
    for (double t : {2.5, 3.5, 4.5, 5.5}) {
        const double stair = (std::floor(t) + 1.0) / 2.0;
        CHECK(std::abs(g.at(t) - stair) <= 1.5e-3 * stair);
    }
    // regression pin of the inverted value itself
    CHECK(g.at(2.5) == doctest::Approx(1.5013810640).epsilon(1e-6));

    // at a quarter point the midpoint interpolant wins over the staircase
    const double v = g.at(3.25);
    CHECK(std::abs(v - (3.25 + 0.5) / 2.0) <= 2.5e-3);
    CHECK(std::abs(v - 2.0) >= 0.1);
}

TEST_CASE("grid interpolation and range handling") {
    const RenewalGrid g = build_renewal_grid(drift_only(2.0), 0.1, 1.0);
    CHECK(g.horizon() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.at(0.0) == 0.0);
    CHECK(g.at(0.05) == doctest::Approx(0.025).epsilon(1e-14));
    CHECK(g.at(1.0) == 0.5);
    CHECK_THROWS_AS((void)g.at(-0.1), ValidationError);
    CHECK_THROWS_AS((void)g.at(1.1), ValidationError);

    CHECK(g.at_clamped(-5.0) == 0.0);
    CHECK(g.at_clamped(0.35) == doctest::Approx(0.175).epsilon(1e-14));
    CHECK(g.at_clamped(2.0) == 0.5);

    const auto cp = compound_poisson_det(2.0, 1.0);
    const RenewalGrid gc = build_renewal_grid(cp, 0.25, 1.0);
    CHECK(gc.at(0.0) == 0.5);
}

TEST_CASE("convolution with the renewal measure") {
    SUBCASE("convolving the constant 1 recovers U itself") {
        const auto cp = compound_poisson_exp(1.0, 1.0);
        const RenewalGrid g = build_renewal_grid(cp, 0.01, 2.0);
        const std::vector<double> out = convolve_with_dU(g, [](double) { return 1.0; });
        REQUIRE(out.size() == g.values.size());
        for (std::size_t k = 0; k < out.size(); ++k)
            CHECK(out[k] == doctest::Approx(g.values[k]).epsilon(1e-10));
    }

    SUBCASE("midpoint rule is exact for linear integrands") {
        const RenewalGrid g = build_renewal_grid(drift_only(2.0), 0.05, 2.0);
        const std::vector<double> lin = convolve_with_dU(g, [](double x) { return x; });
        const std::vector<double> aff =
            convolve_with_dU(g, [](double x) { return 2.0 * x + 3.0; });
        for (std::size_t k = 0; k < lin.size(); ++k) {
            const double t = static_cast<double>(k) * g.h;
            CHECK(lin[k] == doctest::Approx(t * t / 4.0).epsilon(1e-12));
            CHECK(aff[k] == doctest::Approx((t * t + 3.0 * t) / 2.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("long-run linear growth") {
    const auto drift = drift_only(2.0);
    CHECK(renewal_asymptote(drift, 3.0).value() == 1.5);

    const auto st = stable_model(0.5);
    CHECK(renewal_asymptote(st, 4.0).value() ==
          doctest::Approx(2.0 / std::tgamma(1.5)).epsilon(1e-14));

    const auto cp = compound_poisson_exp(1.0, 1.0);
    CHECK(renewal_asymptote(cp, 7.0).value() == doctest::Approx(7.0).epsilon(1e-14));

    // infinite-mean jumps have no linear asymptote
    auto st_drift = stable_model(0.5);
    st_drift.drift = 0.5;
    CHECK(!renewal_asymptote(st_drift, 1.0).has_value());
    CHECK(!renewal_asymptote(mixed_stable_model({{1.0, 0.5}}), 1.0).has_value());
}

TEST_CASE("csv serialization") {
    const RenewalGrid g = build_renewal_grid(drift_only(2.0), 0.25, 1.0);
    CHECK(to_csv(g) == "t,U\n0.25,0.125\n0.5,0.25\n0.75,0.375\n1,0.5\n");
}
