#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "invsub/exponent.hpp"

namespace invsub {

// A transform f~(lambda) evaluable for Re lambda > 0, with a hint about the
// smoothness of the original f used to pick the default inversion method.
struct LaplaceFunction {
    std::function<std::complex<double>(std::complex<double>)> eval;
    Smoothness hint = Smoothness::smooth;
};

enum class InversionMethod { talbot, gaver_stehfest };

struct InversionConfig {
    // When unset, chosen from the transform's smoothness hint:
    // smooth -> talbot, jumpy -> gaver-stehfest.
    std::optional<InversionMethod> method;
    int terms = 16;           // Gaver-Stehfest order; even, 8..24
    int contour_points = 32;  // Talbot M
    bool high_precision = true;  // compensated long-double Stehfest accumulation
};

// Stehfest weights V_1..V_terms (V_k at index k-1), computed in long double
// with compensated summation. Exposed for direct testing.
std::vector<long double> stehfest_weights(int terms);

// Approximate the original function at t > 0.
double invert(const LaplaceFunction& f, double t, const InversionConfig& cfg = {});

// Pointwise inversion over a strictly increasing positive grid; points are
// independent and evaluated in parallel when `parallel` is set.
std::vector<double> invert_grid(const LaplaceFunction& f, const std::vector<double>& grid,
                                const InversionConfig& cfg = {}, bool parallel = true);

}  // namespace invsub
