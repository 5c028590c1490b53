#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "invsub/exponent.hpp"
#include "invsub/model.hpp"

using namespace invsub;

TEST_CASE("drift-only exponent is linear") {
    const SubordinatorModel m = drift_only(2.0);
    CHECK(phi(m, 0.0) == 0.0);
    CHECK(phi(m, 3.0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(mean_of_D1(m) == doctest::Approx(2.0));
    CHECK(std::isinf(phi_limit_at_infinity(m)));
    CHECK(smoothness_hint(m) == Smoothness::smooth);
}

TEST_CASE("stable exponent") {
    const SubordinatorModel m = stable_model(0.5);
    CHECK(phi(m, 0.0) == 0.0);
    CHECK(phi(m, 4.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(phi(m, 9.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(std::isinf(mean_of_D1(m)));
    CHECK(smoothness_hint(m) == Smoothness::smooth);

    const SubordinatorModel with_drift = stable_model(0.5, 1.5);
    CHECK(phi(with_drift, 4.0) == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("mixed-stable exponent") {
    const SubordinatorModel m = mixed_stable_model({{0.5, 0.3}, {0.5, 0.7}});
    CHECK(phi(m, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(phi(m, 4.0) ==
          doctest::Approx(0.5 * std::pow(4.0, 0.3) + 0.5 * std::pow(4.0, 0.7))
              .epsilon(1e-15));
    CHECK(std::isinf(mean_of_D1(m)));
}

TEST_CASE("compound-poisson exponent variants") {
    const SubordinatorModel exp_jumps = compound_poisson_exp(3.0, 2.0);
    CHECK(phi(exp_jumps, 2.0) == doctest::Approx(3.0 * 2.0 / 4.0).epsilon(1e-15));
    CHECK(mean_of_D1(exp_jumps) == doctest::Approx(1.5));
    CHECK(phi_limit_at_infinity(exp_jumps) == doctest::Approx(3.0));
    CHECK(smoothness_hint(exp_jumps) == Smoothness::jumpy);

    const SubordinatorModel det = compound_poisson_det(2.0, 1.0);
    CHECK(phi(det, 1000.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(phi(det, 1.0) == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))).epsilon(1e-15));
    CHECK(mean_of_D1(det) == doctest::Approx(2.0));

    const SubordinatorModel disc =
        compound_poisson_discrete(2.0, {{1.0, 0.25}, {2.0, 0.75}});
    CHECK(mean_of_D1(disc) == doctest::Approx(2.0 * 1.75));
    CHECK(phi(disc, 1.0) ==
          doctest::Approx(2.0 * (0.25 * (1 - std::exp(-1.0)) + 0.75 * (1 - std::exp(-2.0))))
              .epsilon(1e-15));

    // drift turns the limit infinite and the hint smooth
    const SubordinatorModel with_drift = compound_poisson_exp(3.0, 2.0, 0.5);
    CHECK(std::isinf(phi_limit_at_infinity(with_drift)));
    CHECK(smoothness_hint(with_drift) == Smoothness::smooth);
}

TEST_CASE("gamma and inverse-gaussian exponents") {
    const SubordinatorModel g = gamma_model(1.0, 1.0);
    CHECK(phi(g, 1.0) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
    CHECK(mean_of_D1(g) == doctest::Approx(1.0));
    CHECK(smoothness_hint(g) == Smoothness::smooth);

    const SubordinatorModel ig = inverse_gaussian_model(1.0, 1.0);
    CHECK(phi(ig, 4.0) == doctest::Approx(2.0).epsilon(1e-15));  // sqrt(9)-1
    CHECK(mean_of_D1(ig) == doctest::Approx(1.0));

    // the quotient form stays accurate where sqrt(2l+g^2)-g cancels
    const double tiny = 1e-12;
    CHECK(phi(ig, tiny) == doctest::Approx(tiny).epsilon(1e-11));
    CHECK(phi(ig, tiny) > 0.0);
}

TEST_CASE("composite exponent adds parts and drift") {
    const SubordinatorModel m =
        composite_model({compound_poisson_exp(1.0, 1.0), gamma_model(1.0, 1.0)}, 0.5);
    CHECK(phi(m, 1.0) ==
          doctest::Approx(0.5 + 0.5 + std::log(2.0)).epsilon(1e-15));
    CHECK(mean_of_D1(m) == doctest::Approx(0.5 + 1.0 + 1.0));
    CHECK(std::isinf(phi_limit_at_infinity(m)));

    const SubordinatorModel two_cp =
        composite_model({compound_poisson_exp(1.0, 1.0), compound_poisson_det(2.0, 1.0)});
    CHECK(phi_limit_at_infinity(two_cp) == doctest::Approx(3.0));
    CHECK(smoothness_hint(two_cp) == Smoothness::jumpy);
}

TEST_CASE("complex exponent agrees with the real one on the positive axis") {
    for (const SubordinatorModel& m :
         {stable_model(0.7), gamma_model(2.0, 3.0), inverse_gaussian_model(1.0, 2.0),
          compound_poisson_exp(1.0, 1.0), compound_poisson_det(2.0, 0.5)}) {
        for (double lambda : {0.25, 1.0, 7.5}) {
            const std::complex<double> z = phi(m, std::complex<double>(lambda, 0.0));
            CHECK(z.imag() == 0.0);
            CHECK(z.real() == doctest::Approx(phi(m, lambda)).epsilon(1e-15));
        }
    }
}

TEST_CASE("complex exponent maps the upper half-plane into itself") {
    for (const SubordinatorModel& m :
         {stable_model(0.3), stable_model(0.8), gamma_model(1.0, 1.0),
          inverse_gaussian_model(1.0, 1.0), compound_poisson_exp(1.0, 1.0),
          mixed_stable_model({{0.5, 0.3}, {0.5, 0.7}})}) {
        for (double re : {-3.0, -0.5, 0.5, 3.0}) {
            for (double im : {0.25, 1.0, 5.0}) {
                const std::complex<double> w = phi(m, {re, im});
                CHECK(w.imag() > 0.0);
                // conjugate symmetry
                const std::complex<double> wc = phi(m, {re, -im});
                CHECK(wc.real() == doctest::Approx(w.real()).epsilon(1e-14));
                CHECK(wc.imag() == doctest::Approx(-w.imag()).epsilon(1e-14));
            }
        }
    }
}
