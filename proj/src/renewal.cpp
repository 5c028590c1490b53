#include "invsub/renewal.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "invsub/errors.hpp"
#include "invsub/exponent.hpp"

namespace invsub {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

double RenewalGrid::at(double t) const {
    if (!(t >= 0.0) || t > horizon() * (1.0 + 1e-12))
        throw ValidationError("time outside renewal grid: t=" + format_double(t));
    return at_clamped(t);
}

double RenewalGrid::at_clamped(double t) const {
    if (t <= 0.0) return values.front();
    const double x = t / h;
    const auto k = static_cast<std::size_t>(x);
    if (k + 1 >= values.size()) return values.back();
    const double frac = x - static_cast<double>(k);
    return values[k] + frac * (values[k + 1] - values[k]);
}

LaplaceFunction renewal_transform(const SubordinatorModel& m) {
    LaplaceFunction f;
    f.hint = smoothness_hint(m);
    f.eval = [m](std::complex<double> z) { return 1.0 / (z * phi(m, z)); };
    return f;
}

double renewal_function(const SubordinatorModel& m, double t, const InversionConfig& cfg) {
    if (!(t > 0.0)) throw ValidationError("renewal time must be positive");
    if (m.family == Family::drift_only) return t / m.drift;
    return invert(renewal_transform(m), t, cfg);
}

RenewalGrid build_renewal_grid(const SubordinatorModel& m, double h, double T,
                               const InversionConfig& cfg, bool parallel) {
    if (!(h > 0.0)) throw ValidationError("grid step must be positive");
    if (!(T >= h)) throw ValidationError("grid horizon must be at least one step");

    const auto steps = static_cast<std::size_t>(std::ceil(T / h - 1e-9));
    RenewalGrid grid;
    grid.model = m;
    grid.h = h;
    grid.values.resize(steps + 1);

    const double limit = phi_limit_at_infinity(m);
    grid.atom0 = std::isinf(limit) ? 0.0 : 1.0 / limit;
    grid.values[0] = grid.atom0;

    if (m.family == Family::drift_only) {
        for (std::size_t k = 1; k <= steps; ++k)
            grid.values[k] = static_cast<double>(k) * h / m.drift;
        return grid;
    }

    std::vector<double> times(steps);
    for (std::size_t k = 0; k < steps; ++k) times[k] = static_cast<double>(k + 1) * h;
    std::vector<double> vals = invert_grid(renewal_transform(m), times, cfg, parallel);

    // Enforce monotonicity. Jumpy transforms: the inverse overshoots and rings near
    // jumps of U, so clamp to the running max. Smooth transforms should come out
    // clean; anything beyond rounding-level dips signals an inversion failure.
    const bool jumpy = smoothness_hint(m) == Smoothness::jumpy;
    for (std::size_t k = 0; k < steps; ++k) {
        double prev = grid.values[k];
        double v = vals[k];
        if (v < prev) {
            if (!jumpy && prev - v > 1e-6 * std::max(1.0, std::abs(prev))) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "renewal grid not monotone at t=" << times[k] << " (" << v
                    << " after " << prev << ")";
                throw NumericError(msg.str());
            }
            v = prev;
        }
        grid.values[k + 1] = v;
    }
    return grid;
}

std::vector<double> convolve_with_dU(const RenewalGrid& grid,
                                     const std::function<double(double)>& f,
                                     bool parallel) {
    const std::size_t n = grid.values.size();
    const double h = grid.h;

    // midpoint values f((j+1/2)h) and node values f(kh), shared by all output nodes
    std::vector<double> f_mid(n > 0 ? n - 1 : 0);
    std::vector<double> f_node(n);
    for (std::size_t j = 0; j + 1 < n; ++j)
        f_mid[j] = f((static_cast<double>(j) + 0.5) * h);
    for (std::size_t k = 0; k < n; ++k) f_node[k] = f(static_cast<double>(k) * h);

    std::vector<double> out(n);
    const auto count = static_cast<std::int64_t>(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
#endif
    for (std::int64_t k = 0; k < count; ++k) {
        double acc = grid.atom0 * f_node[k];
        for (std::int64_t j = 1; j <= k; ++j) {
            const double dU = grid.values[j] - grid.values[j - 1];
            acc += dU * f_mid[k - j];
        }
        out[k] = acc;
    }
    (void)parallel;
    return out;
}

std::optional<double> renewal_asymptote(const SubordinatorModel& m, double t) {
    if (m.family == Family::drift_only) return t / m.drift;
    if (m.family == Family::stable && m.drift == 0.0)
        return std::pow(t, m.alpha) / std::tgamma(1.0 + m.alpha);
    const double mean = mean_of_D1(m);
    if (std::isfinite(mean)) return t / mean;
    return std::nullopt;
}

std::string to_csv(const RenewalGrid& grid) {
    std::string out = "t,U\n";
    for (std::size_t k = 1; k < grid.values.size(); ++k) {
        out += format_double(static_cast<double>(k) * grid.h);
        out += ',';
        out += format_double(grid.values[k]);
        out += '\n';
    }
    return out;
}

}  // namespace invsub
