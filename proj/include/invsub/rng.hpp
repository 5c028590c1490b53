#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace invsub {

// Philox4x32-10 counter-based generator. A block is a pure function of
// (key, counter), so streams keyed by (seed, path index) are reproducible
// independently of evaluation order.
struct Philox4x32 {
    static constexpr std::uint32_t M0 = 0xD2511F53u;
    static constexpr std::uint32_t M1 = 0xCD9E8D57u;
    static constexpr std::uint32_t W0 = 0x9E3779B9u;
    static constexpr std::uint32_t W1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
            key[0] += W0;
            key[1] += W1;
        }
        return ctr;
    }
};

// Sequential view of the Philox stream for one path: counter = (block index,
// path index), key = seed. Each block yields two 64-bit words.
class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint64_t path_index)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_(path_index) {}

    std::uint64_t next_u64() {
        if (have_ == 0) {
            buf_ = Philox4x32::block(
                {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                 static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)},
                key_);
            ++block_;
            have_ = 4;
        }
        have_ -= 2;
        return (static_cast<std::uint64_t>(buf_[have_ + 1]) << 32) | buf_[have_];
    }

    // Uniform on the open interval (0,1).
    double u01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(u01()) / rate; }

    double normal() {
        if (has_normal_) {
            has_normal_ = false;
            return cached_normal_;
        }
        const double r = std::sqrt(-2.0 * std::log(u01()));
        const double a = 6.283185307179586476925286766559 * u01();
        cached_normal_ = r * std::sin(a);
        has_normal_ = true;
        return r * std::cos(a);
    }

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t path_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int have_ = 0;
    double cached_normal_ = 0.0;
    bool has_normal_ = false;
};

// Positive alpha-stable with E e^{-lambda S} = exp(-lambda^alpha), by the
// Kanter form of the Chambers-Mallows-Stuck transformation.
inline double sample_positive_stable(PathRng& rng, double alpha) {
    const double theta = 3.141592653589793238462643383280 * rng.u01();
    const double w = rng.exponential(1.0);
    const double a = std::sin(alpha * theta) / std::pow(std::sin(theta), 1.0 / alpha);
    return a * std::pow(std::sin((1.0 - alpha) * theta) / w, (1.0 - alpha) / alpha);
}

// Gamma(shape, rate 1) by Marsaglia-Tsang, with the u^{1/shape} boost below
// shape 1.
inline double sample_gamma(PathRng& rng, double shape) {
    if (shape < 1.0) {
        const double u = rng.u01();
        return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.u01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// Inverse Gaussian(mean, shape) by the Michael-Schucany-Haas method.
inline double sample_inverse_gaussian(PathRng& rng, double mean, double shape) {
    const double n = rng.normal();
    const double y = n * n;
    const double x = mean + mean * mean * y / (2.0 * shape) -
                     mean / (2.0 * shape) *
                         std::sqrt(4.0 * mean * shape * y + mean * mean * y * y);
    if (rng.u01() <= mean / (mean + x)) return x;
    return mean * mean / x;
}

// Poisson(mean) by inversion of uniform products; intended for small means
// (per-step event counts on increment grids).
inline int sample_poisson(PathRng& rng, double mean) {
    const double limit = std::exp(-mean);
    int k = 0;
    double prod = rng.u01();
    while (prod > limit) {
        ++k;
        prod *= rng.u01();
    }
    return k;
}

}  // namespace invsub
