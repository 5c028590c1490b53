#include "invsub/laplace.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "invsub/errors.hpp"

namespace invsub {

namespace {

template <typename T>
struct KahanSum {
    T sum{0}, carry{0};
    void add(T x) {
        T y = x - carry;
        T t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

void check_terms(int n) {
    if (n < 8 || n > 24 || n % 2 != 0)
        throw ValidationError("stehfest terms must be even and between 8 and 24");
}

std::complex<double> eval_checked(const LaplaceFunction& f, std::complex<double> z) {
    std::complex<double> v = f.eval(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "transform evaluation returned a non-finite value at lambda=" << z.real();
        if (z.imag() != 0.0) msg << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
        throw NumericError(msg.str());
    }
    return v;
}

double invert_stehfest(const LaplaceFunction& f, double t, const InversionConfig& cfg) {
    const int n = cfg.terms;
    check_terms(n);
    const std::vector<long double> w = stehfest_weights(n);
    const long double ln2_t = std::log(2.0L) / static_cast<long double>(t);
    if (cfg.high_precision) {
        KahanSum<long double> acc;
        for (int k = 1; k <= n; ++k) {
            double lam = static_cast<double>(ln2_t * k);
            acc.add(w[k - 1] * static_cast<long double>(
                                   eval_checked(f, {lam, 0.0}).real()));
        }
        return static_cast<double>(acc.sum * ln2_t);
    }
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) {
        double lam = static_cast<double>(ln2_t * k);
        acc += static_cast<double>(w[k - 1]) * eval_checked(f, {lam, 0.0}).real();
    }
    return acc * static_cast<double>(ln2_t);
}

double invert_talbot(const LaplaceFunction& f, double t, const InversionConfig& cfg) {
    const int m = cfg.contour_points;
    if (m < 4) throw ValidationError("talbot contour requires at least 4 points");
    const double r = 2.0 * m / (5.0 * t);
    const double pi = std::acos(-1.0);

    KahanSum<long double> acc;
    acc.add(0.5L * static_cast<long double>(
                       std::exp(r * t) * eval_checked(f, {r, 0.0}).real()));
    for (int k = 1; k < m; ++k) {
        const double theta = k * pi / m;
        const double cot = std::cos(theta) / std::sin(theta);
        const std::complex<double> s(r * theta * cot, r * theta);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        const std::complex<double> term =
            std::exp(t * s) * eval_checked(f, s) * std::complex<double>(1.0, sigma);
        acc.add(static_cast<long double>(term.real()));
    }
    double out = static_cast<double>(acc.sum) * r / m;
    if (!std::isfinite(out)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "talbot inversion produced a non-finite value at t=" << t;
        throw NumericError(msg.str());
    }
    return out;
}

}  // namespace

std::vector<long double> stehfest_weights(int n) {
    check_terms(n);
    // factorials up to (2*half)! = n!
    std::vector<long double> fact(n + 1, 1.0L);
    for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;

    const int half = n / 2;
    std::vector<long double> w(n);
    for (int k = 1; k <= n; ++k) {
        KahanSum<long double> acc;
        const int j_lo = (k + 1) / 2;
        const int j_hi = std::min(k, half);
        for (int j = j_lo; j <= j_hi; ++j) {
            long double term = std::pow(static_cast<long double>(j), half) * fact[2 * j] /
                               (fact[half - j] * fact[j] * fact[j - 1] * fact[k - j] *
                                fact[2 * j - k]);
            acc.add(term);
        }
        w[k - 1] = ((k + half) % 2 == 0 ? 1.0L : -1.0L) * acc.sum;
    }
    return w;
}

double invert(const LaplaceFunction& f, double t, const InversionConfig& cfg) {
    if (!(t > 0.0)) throw ValidationError("inversion time must be positive");
    InversionMethod method = cfg.method.value_or(
        f.hint == Smoothness::jumpy ? InversionMethod::gaver_stehfest
                                    : InversionMethod::talbot);
    return method == InversionMethod::gaver_stehfest ? invert_stehfest(f, t, cfg)
                                                     : invert_talbot(f, t, cfg);
}

std::vector<double> invert_grid(const LaplaceFunction& f, const std::vector<double>& grid,
                                const InversionConfig& cfg, bool parallel) {
    std::vector<double> out(grid.size());
    std::vector<std::string> errors(grid.size());
    std::vector<char> failed(grid.size(), 0);

    const std::int64_t count = static_cast<std::int64_t>(grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
#endif
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            out[i] = invert(f, grid[i], cfg);
        } catch (const std::exception& e) {
            failed[i] = 1;
            errors[i] = e.what();
        }
    }
    (void)parallel;

    for (std::int64_t i = 0; i < count; ++i) {
        if (failed[i]) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "inversion failed at node " << i << " (t=" << grid[i]
                << "): " << errors[i];
            throw NumericError(msg.str());
        }
    }
    return out;
}

}  // namespace invsub
