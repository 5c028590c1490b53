#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "invsub/laplace.hpp"
#include "invsub/model.hpp"

namespace invsub {

// U(t) = E E(t) sampled on a uniform grid, plus the renewal-measure atom at 0.
// values[j] = U(jh) with values[0] = U(0+) = atom0.
struct RenewalGrid {
    SubordinatorModel model;
    double h = 0.0;
    std::vector<double> values;
    double atom0 = 0.0;

    double horizon() const { return h * static_cast<double>(values.size() - 1); }
    // Linear interpolation on [0, horizon]; throws ValidationError outside.
    double at(double t) const;
    // Interpolation with the argument clamped into [0, horizon].
    double at_clamped(double t) const;
};

// The transform 1/(lambda * phi(lambda)) of U, with the model's smoothness hint.
LaplaceFunction renewal_transform(const SubordinatorModel& m);

// U(t) by inversion; drift-only models bypass inversion (U = t/mu exactly).
double renewal_function(const SubordinatorModel& m, double t, const InversionConfig& cfg = {});

RenewalGrid build_renewal_grid(const SubordinatorModel& m, double h, double T,
                               const InversionConfig& cfg = {}, bool parallel = true);

// g(t) = atom0*f(t) + integral_0^t f(t - tau) dU(tau) at every grid node,
// the integral discretized over grid increments dU_j with f taken at cell
// midpoints.
std::vector<double> convolve_with_dU(const RenewalGrid& grid,
                                     const std::function<double(double)>& f,
                                     bool parallel = true);

// t / E D(1) for finite-mean models; nullopt when the mean is infinite.
std::optional<double> renewal_asymptote(const SubordinatorModel& m, double t);

// CSV serialization, columns t,U over all grid nodes.
std::string to_csv(const RenewalGrid& grid);

}  // namespace invsub
