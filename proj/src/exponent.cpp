#include "invsub/exponent.hpp"

#include <cmath>
#include <limits>

namespace invsub {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double phi_jump_part(const SubordinatorModel& m, double lambda) {
    switch (m.family) {
        case Family::drift_only:
            return 0.0;
        case Family::stable:
            return std::pow(lambda, m.alpha);
        case Family::mixed_stable: {
            double s = 0.0;
            for (const auto& t : m.terms) s += t.weight * std::pow(lambda, t.beta);
            return s;
        }
        case Family::compound_poisson:
            switch (m.jumps.kind) {
                case JumpKind::exponential:
                    return m.rate * lambda / (m.jumps.rate + lambda);
                case JumpKind::deterministic:
                    return m.rate * (-std::expm1(-lambda * m.jumps.size));
                case JumpKind::discrete: {
                    double s = 0.0;
                    for (const auto& [x, p] : m.jumps.atoms)
                        s += p * (-std::expm1(-lambda * x));
                    return m.rate * s;
                }
            }
            return 0.0;
        case Family::gamma:
            return m.shape * std::log1p(lambda / m.gamma_rate);
        case Family::inverse_gaussian:
            // delta*(sqrt(2l+g^2)-g) written without cancellation at small l
            return m.ig_delta * 2.0 * lambda /
                   (std::sqrt(2.0 * lambda + m.ig_gamma * m.ig_gamma) + m.ig_gamma);
        case Family::composite: {
            double s = 0.0;
            for (const auto& part : m.parts) s += phi(part, lambda);
            return s;
        }
    }
    return 0.0;
}

std::complex<double> phi_jump_part(const SubordinatorModel& m, std::complex<double> z) {
    using C = std::complex<double>;
    switch (m.family) {
        case Family::drift_only:
            return C(0.0);
        case Family::stable:
            return std::pow(z, m.alpha);
        case Family::mixed_stable: {
            C s(0.0);
            for (const auto& t : m.terms) s += t.weight * std::pow(z, t.beta);
            return s;
        }
        case Family::compound_poisson:
            switch (m.jumps.kind) {
                case JumpKind::exponential:
                    return m.rate * z / (m.jumps.rate + z);
                case JumpKind::deterministic:
                    return m.rate * (1.0 - std::exp(-z * m.jumps.size));
                case JumpKind::discrete: {
                    C s(0.0);
                    for (const auto& [x, p] : m.jumps.atoms)
                        s += p * (1.0 - std::exp(-z * x));
                    return m.rate * s;
                }
            }
            return C(0.0);
        case Family::gamma:
            return m.shape * std::log(1.0 + z / m.gamma_rate);
        case Family::inverse_gaussian:
            return m.ig_delta * 2.0 * z /
                   (std::sqrt(2.0 * z + m.ig_gamma * m.ig_gamma) + m.ig_gamma);
        case Family::composite: {
            C s(0.0);
            for (const auto& part : m.parts) s += phi(part, z);
            return s;
        }
    }
    return C(0.0);
}

}  // namespace

double phi(const SubordinatorModel& m, double lambda) {
    return m.drift * lambda + phi_jump_part(m, lambda);
}

std::complex<double> phi(const SubordinatorModel& m, std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() >= 0.0)
        return std::complex<double>(phi(m, z.real()), 0.0);
    return m.drift * z + phi_jump_part(m, z);
}

double mean_of_D1(const SubordinatorModel& m) {
    switch (m.family) {
        case Family::drift_only:
            return m.drift;
        case Family::stable:
        case Family::mixed_stable:
            return kInf;
        case Family::compound_poisson:
            return m.drift + m.rate * m.jumps.mean();
        case Family::gamma:
            return m.drift + m.shape / m.gamma_rate;
        case Family::inverse_gaussian:
            return m.drift + m.ig_delta / m.ig_gamma;
        case Family::composite: {
            double s = m.drift;
            for (const auto& part : m.parts) {
                double pm = mean_of_D1(part);
                if (std::isinf(pm)) return kInf;
                s += pm;
            }
            return s;
        }
    }
    return kInf;
}

double phi_limit_at_infinity(const SubordinatorModel& m) {
    if (m.drift > 0.0) return kInf;
    switch (m.family) {
        case Family::drift_only:
            return kInf;
        case Family::stable:
        case Family::mixed_stable:
        case Family::gamma:
        case Family::inverse_gaussian:
            return kInf;
        case Family::compound_poisson:
            return m.rate;
        case Family::composite: {
            double s = 0.0;
            for (const auto& part : m.parts) {
                double pl = phi_limit_at_infinity(part);
                if (std::isinf(pl)) return kInf;
                s += pl;
            }
            return s;
        }
    }
    return kInf;
}

Smoothness smoothness_hint(const SubordinatorModel& m) {
    return std::isinf(phi_limit_at_infinity(m)) ? Smoothness::smooth : Smoothness::jumpy;
}

}  // namespace invsub
