#include "invsub/moments.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "invsub/errors.hpp"
#include "invsub/exponent.hpp"
#include "invsub/laplace.hpp"

namespace invsub {

namespace {

constexpr int kMaxCoords = 3;
constexpr int kMaxTotalOrder = 6;

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

double lerp_clamped(const std::vector<double>& v, double h, double x) {
    if (x <= 0.0) return v.front();
    const double u = x / h;
    const auto k = static_cast<std::size_t>(u);
    if (k + 1 >= v.size()) return v.back();
    const double frac = u - static_cast<double>(k);
    return v[k] + frac * (v[k + 1] - v[k]);
}

// Tables of E[prod over alive coordinates of E(x + offset_i)^{order_i}] as a
// function of the base time x on the grid, memoized per (mask, orders) state.
struct MomentTables {
    const RenewalGrid& grid;
    std::array<double, kMaxCoords> times{};  // ascending
    int n = 0;
    std::unordered_map<std::uint32_t, std::vector<double>> memo;

    static std::uint32_t key(unsigned mask, const std::array<int, kMaxCoords>& orders) {
        std::uint32_t k = mask;
        for (int i = 0; i < kMaxCoords; ++i)
            k |= static_cast<std::uint32_t>(orders[i]) << (3 + 3 * i);
        return k;
    }

    const std::vector<double>& table(unsigned mask,
                                     const std::array<int, kMaxCoords>& orders) {
        const std::uint32_t k = key(mask, orders);
        if (auto it = memo.find(k); it != memo.end()) return it->second;

        double t_min = 0.0;
        bool first = true;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                t_min = first ? times[i] : std::min(t_min, times[i]);
                first = false;
            }

        // Per-coordinate child lookup: same-mask lower order evaluated in place,
        // or the coordinate dropped and the child rebased to its own minimum.
        struct Term {
            double weight;
            double shift;
            const std::vector<double>* child;  // nullptr: empty product == 1
        };
        std::vector<Term> terms;
        for (int i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            Term term;
            term.weight = static_cast<double>(orders[i]);
            if (orders[i] > 1) {
                auto child_orders = orders;
                --child_orders[i];
                term.shift = 0.0;
                term.child = &table(mask, child_orders);
            } else {
                const unsigned child_mask = mask & ~(1u << i);
                if (child_mask == 0) {
                    term.shift = 0.0;
                    term.child = nullptr;
                } else {
                    double child_min = 0.0;
                    bool cfirst = true;
                    for (int j = 0; j < n; ++j)
                        if (child_mask & (1u << j)) {
                            child_min = cfirst ? times[j] : std::min(child_min, times[j]);
                            cfirst = false;
                        }
                    auto child_orders = orders;
                    child_orders[i] = 0;
                    term.shift = child_min - t_min;
                    term.child = &table(child_mask, child_orders);
                }
            }
            terms.push_back(term);
        }

        const double h = grid.h;
        auto integrand = [&](double y) {
            double s = 0.0;
            for (const auto& term : terms)
                s += term.weight *
                     (term.child ? lerp_clamped(*term.child, h, y + term.shift) : 1.0);
            return s;
        };
        auto [it, inserted] = memo.emplace(k, convolve_with_dU(grid, integrand));
        (void)inserted;
        return it->second;
    }
};

}  // namespace

double joint_moment(const RenewalGrid& grid, const MomentSpec& spec) {
    const std::size_t n = spec.times.size();
    if (n == 0 || n > kMaxCoords)
        throw ValidationError("joint moment supports 1 to 3 time coordinates");
    if (spec.orders.size() != n)
        throw ValidationError("joint moment needs one order per time coordinate");
    int total = 0;
    for (int m : spec.orders) {
        if (m < 1) throw ValidationError("moment orders must be positive integers");
        total += m;
    }
    if (total > kMaxTotalOrder)
        throw ValidationError("total moment order must not exceed 6");
    for (double t : spec.times) {
        if (!(t > 0.0)) throw ValidationError("moment times must be positive");
        if (t > grid.horizon() * (1.0 + 1e-12))
            throw ValidationError("moment time beyond renewal grid horizon: t=" +
                                  format_double(t));
    }

    // sort (t, m) pairs by time; the moment is invariant under this permutation
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return spec.times[a] < spec.times[b]; });

    MomentTables tables{grid, {}, static_cast<int>(n), {}};
    std::array<int, kMaxCoords> orders{};
    for (std::size_t i = 0; i < n; ++i) {
        tables.times[i] = spec.times[idx[i]];
        orders[i] = spec.orders[idx[i]];
    }
    const unsigned full_mask = (1u << n) - 1u;
    const std::vector<double>& top = tables.table(full_mask, orders);
    return lerp_clamped(top, grid.h, tables.times[0]);
}

double fractional_moment(const SubordinatorModel& m, double t, double gamma,
                         const InversionConfig& cfg) {
    if (!(t > 0.0)) throw ValidationError("moment times must be positive");
    if (!(gamma > 0.0)) throw ValidationError("fractional order must be positive");
    if (m.family == Family::drift_only) return std::pow(t / m.drift, gamma);
    const double scale = std::tgamma(1.0 + gamma);
    LaplaceFunction f;
    f.hint = smoothness_hint(m);
    f.eval = [m, gamma, scale](std::complex<double> z) {
        return scale / (z * std::pow(phi(m, z), gamma));
    };
    return invert(f, t, cfg);
}

double covariance(const RenewalGrid& grid, double s, double t) {
    if (!(s > 0.0) || !(t > 0.0)) throw ValidationError("covariance times must be positive");
    const double hi = std::max(s, t);
    if (hi > grid.horizon() * (1.0 + 1e-12))
        throw ValidationError("covariance time beyond renewal grid horizon: t=" +
                              format_double(hi));
    const double lo = std::min(s, t);
    const double gap = hi - lo;
    auto f = [&](double x) { return grid.at_clamped(x) + grid.at_clamped(x + gap); };
    const std::vector<double> cross = convolve_with_dU(grid, f);
    return lerp_clamped(cross, grid.h, lo) - grid.at(s) * grid.at(t);
}

std::string to_csv(const MomentTable& table) {
    const std::size_t n = table.orders.size();
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        out += 't';
        out += std::to_string(i + 1);
        out += ',';
    }
    out += "value,method\n";
    const char* method = table.method == MomentMethod::recursion    ? "recursion"
                         : table.method == MomentMethod::analytic   ? "analytic"
                                                                    : "monte-carlo";
    for (std::size_t r = 0; r < table.values.size(); ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            out += format_double(table.time_tuples[r][i]);
            out += ',';
        }
        out += format_double(table.values[r]);
        out += ',';
        out += method;
        out += '\n';
    }
    return out;
}

}  // namespace invsub
