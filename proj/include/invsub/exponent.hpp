#pragma once

#include <complex>

#include "invsub/model.hpp"

namespace invsub {

// Laplace exponent phi(lambda) = mu*lambda + integral (1 - e^{-lambda x}) Pi(dx),
// evaluated in closed form per family. Real overload requires lambda >= 0.
double phi(const SubordinatorModel& m, double lambda);

// Same formulas continued to complex lambda with principal branches; used by
// contour inversion. Safe on the upper half-plane (no branch-cut crossings).
std::complex<double> phi(const SubordinatorModel& m, std::complex<double> lambda);

// E D(1) = phi'(0+); +infinity for families without a finite mean.
double mean_of_D1(const SubordinatorModel& m);

// lim_{lambda->inf} phi(lambda); finite exactly for drift-free compound
// Poisson (the total jump rate), +infinity otherwise.
double phi_limit_at_infinity(const SubordinatorModel& m);

enum class Smoothness { smooth, jumpy };

// Renewal-type originals of this model: jumpy when the renewal measure has an
// atom at 0 (drift-free finite activity), i.e. Poisson-family renewal
// functions; smooth otherwise.
Smoothness smoothness_hint(const SubordinatorModel& m);

}  // namespace invsub
