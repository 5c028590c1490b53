#include "invsub/jointlaw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "invsub/errors.hpp"
#include "invsub/exponent.hpp"

namespace invsub {

namespace {

void check_point(const JointPoint& p) {
    if (p.s.empty()) throw ValidationError("joint transform needs at least one coordinate");
    if (p.s.size() != p.lambdas.size())
        throw ValidationError("joint transform needs one lambda per time coordinate");
    for (double s : p.s)
        if (!(s >= 0.0)) throw ValidationError("joint transform times must be nonnegative");
    for (double l : p.lambdas)
        if (!(l > 0.0)) throw ValidationError("transform arguments must be positive");
}

}  // namespace

double htilde(const SubordinatorModel& m, const JointPoint& p) {
    check_point(p);
    const std::size_t n = p.s.size();

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return p.s[a] < p.s[b]; });

    // suffix sums of lambda in the sorted order
    std::vector<double> suffix(n);
    double acc = 0.0;
    for (std::size_t pos = n; pos-- > 0;) {
        acc += p.lambdas[idx[pos]];
        suffix[pos] = acc;
    }

    double log_h = 0.0;
    for (double l : p.lambdas) log_h -= std::log(l);
    double prev = 0.0;
    for (std::size_t pos = 0; pos < n; ++pos) {
        const double s = p.s[idx[pos]];
        log_h -= phi(m, suffix[pos]) * (s - prev);
        prev = s;
    }
    if (log_h < -700.0) return 0.0;
    return std::exp(log_h);
}

double pde_residual(const SubordinatorModel& m, const JointPoint& p, double fd_step) {
    check_point(p);
    if (!(fd_step > 0.0)) throw ValidationError("finite-difference step must be positive");

    std::vector<double> sorted = p.s;
    std::sort(sorted.begin(), sorted.end());
    if (!(sorted.front() > fd_step))
        throw ValidationError("every time must exceed the finite-difference step");
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (!(sorted[i] - sorted[i - 1] > 2.0 * fd_step))
            throw ValidationError(
                "times must be distinct with gaps above twice the finite-difference step");

    const double h0 = htilde(m, p);
    if (h0 == 0.0) return 0.0;

    double sum_partials = 0.0;
    for (std::size_t i = 0; i < p.s.size(); ++i) {
        JointPoint up = p, down = p;
        up.s[i] += fd_step;
        down.s[i] -= fd_step;
        sum_partials += (htilde(m, up) - htilde(m, down)) / (2.0 * fd_step);
    }
    const double total_lambda = std::accumulate(p.lambdas.begin(), p.lambdas.end(), 0.0);
    return std::abs(sum_partials + phi(m, total_lambda) * h0) / h0;
}

std::pair<double, double> boundary_check(const SubordinatorModel& m, const JointPoint& p,
                                         int i) {
    check_point(p);
    if (i < 0 || static_cast<std::size_t>(i) >= p.s.size())
        throw ValidationError("boundary coordinate index out of range");

    JointPoint at_zero = p;
    at_zero.s[i] = 0.0;
    const double lhs = htilde(m, at_zero);

    JointPoint reduced;
    for (std::size_t j = 0; j < p.s.size(); ++j) {
        if (j == static_cast<std::size_t>(i)) continue;
        reduced.s.push_back(p.s[j]);
        reduced.lambdas.push_back(p.lambdas[j]);
    }
    const double rhs =
        (reduced.s.empty() ? 1.0 : htilde(m, reduced)) / p.lambdas[i];
    return {lhs, rhs};
}

}  // namespace invsub
