#include "invsub/verify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "invsub/exponent.hpp"
#include "invsub/jointlaw.hpp"
#include "invsub/laplace.hpp"
#include "invsub/mc.hpp"
#include "invsub/moments.hpp"
#include "invsub/renewal.hpp"

namespace invsub {

namespace {

void add(std::vector<CheckResult>& out, const char* check, const char* module,
         double observed, double tolerance) {
    out.push_back({check, module, observed <= tolerance, observed, tolerance});
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

bool has_lattice_jumps(const SubordinatorModel& m) {
    if (m.family == Family::compound_poisson) return m.jumps.kind != JumpKind::exponential;
    if (m.family == Family::composite)
        return std::any_of(m.parts.begin(), m.parts.end(), has_lattice_jumps);
    return false;
}

void check_exponent(const SubordinatorModel& m, std::vector<CheckResult>& out) {
    add(out, "phi-at-zero", "exponent", std::abs(phi(m, 0.0)), 1e-15);

    std::vector<double> ladder;
    for (double l = 0.5; l <= 8.0 + 1e-9; l += 0.5) ladder.push_back(l);
    double worst_decrease = 0.0, worst_convexity = 0.0, worst_additivity = 0.0;
    const SubordinatorModel doubled = composite_model({m, m});
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        const double v = phi(m, ladder[i]);
        if (i > 0) worst_decrease = std::max(worst_decrease, phi(m, ladder[i - 1]) - v);
        if (i > 0 && i + 1 < ladder.size()) {
            const double d2 = phi(m, ladder[i + 1]) - 2.0 * v + phi(m, ladder[i - 1]);
            worst_convexity = std::max(worst_convexity, d2);
        }
        worst_additivity =
            std::max(worst_additivity, std::abs(phi(doubled, ladder[i]) - 2.0 * v) /
                                           std::max(1.0, std::abs(v)));
    }
    add(out, "phi-monotone", "exponent", worst_decrease, 1e-12);
    add(out, "phi-concave", "exponent", worst_convexity, 1e-9);
    add(out, "phi-additive", "exponent", worst_additivity, 1e-12);

    const double mean = mean_of_D1(m);
    if (std::isfinite(mean)) {
        const double h = 1e-8;
        add(out, "mean-derivative", "exponent",
            std::abs(phi(m, h) / h - mean) / std::max(1.0, mean), 1e-5);
    }
}

void check_laplace(std::vector<CheckResult>& out) {
    const std::vector<long double> w = stehfest_weights(16);
    long double sum = 0.0L, sum_over_k = 0.0L;
    for (std::size_t k = 0; k < w.size(); ++k) {
        sum += w[k];
        sum_over_k += w[k] / static_cast<long double>(k + 1);
    }
    add(out, "stehfest-weight-sums", "laplace",
        std::max(std::abs(static_cast<double>(sum)),
                 std::abs(static_cast<double>(sum_over_k) - 1.0)),
        1e-8);

    // completely monotone reference transforms with known inverses
    struct Ref {
        std::function<std::complex<double>(std::complex<double>)> eval;
        double (*truth)(double);
    };
    const std::vector<Ref> refs = {
        {[](std::complex<double> z) { return 1.0 / (z * z); },
         [](double t) { return t; }},
        {[](std::complex<double> z) { return std::pow(z, -1.5); },
         [](double t) { return 2.0 * std::sqrt(t / 3.141592653589793); }},
        {[](std::complex<double> z) { return 1.0 / (z * (z + 1.0)); },
         [](double t) { return -std::expm1(-t); }},
    };
    double worst = 0.0;
    for (const auto& ref : refs) {
        LaplaceFunction f{ref.eval, Smoothness::smooth};
        InversionConfig talbot, stehfest;
        talbot.method = InversionMethod::talbot;
        stehfest.method = InversionMethod::gaver_stehfest;
        for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 8.0}) {
            const double truth = ref.truth(t);
            const double a = invert(f, t, talbot);
            const double b = invert(f, t, stehfest);
            worst = std::max(worst, std::abs(a - b) / std::abs(truth));
            worst = std::max(worst, std::abs(a - truth) / std::abs(truth));
        }
    }
    add(out, "method-agreement", "laplace", worst, 1e-4);
}

void check_renewal(const SubordinatorModel& m, std::vector<CheckResult>& out) {
    const RenewalGrid grid = build_renewal_grid(m, 0.01, 20.0);

    double worst_decrease = 0.0;
    for (std::size_t k = 1; k < grid.values.size(); ++k)
        worst_decrease = std::max(worst_decrease, grid.values[k - 1] - grid.values[k]);
    add(out, "grid-monotone", "renewal", worst_decrease, 1e-9);

    const double limit = phi_limit_at_infinity(m);
    const double atom = std::isinf(limit) ? 0.0 : 1.0 / limit;
    add(out, "grid-atom", "renewal", std::abs(grid.values[0] - atom), 0.0);

    // lambda * integral e^{-lambda t} U(t) dt == 1 / phi(lambda), with a
    // linear-tail correction beyond the grid horizon
    double worst_identity = 0.0;
    const std::size_t n = grid.values.size();
    const double T = grid.horizon();
    const double slope =
        (grid.values[n - 1] - grid.values[n - 2]) / grid.h;
    for (double lambda : {0.5, 1.0, 2.0, 5.0}) {
        double integral = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double t0 = static_cast<double>(k) * grid.h;
            const double t1 = t0 + grid.h;
            integral += 0.5 * grid.h *
                        (lambda * std::exp(-lambda * t0) * grid.values[k] +
                         lambda * std::exp(-lambda * t1) * grid.values[k + 1]);
        }
        integral += std::exp(-lambda * T) * (grid.values[n - 1] + slope / lambda);
        const double target = 1.0 / phi(m, lambda);
        worst_identity = std::max(worst_identity, std::abs(integral - target) / target);
    }
    add(out, "forward-identity", "renewal", worst_identity, 2e-2);

    const double mean = mean_of_D1(m);
    const bool stable_form = m.family == Family::stable && m.drift == 0.0;
    if (stable_form || std::isfinite(mean)) {
        const double t = stable_form ? 10.0 : 50.0 * mean;
        const double a = *renewal_asymptote(m, t);
        const double u = renewal_function(m, t);
        add(out, "asymptote-agreement", "renewal", std::abs(u / a - 1.0),
            stable_form ? 1e-4 : 5e-2);
    }
}

void check_moments(const SubordinatorModel& m, std::vector<CheckResult>& out) {
    const double h = 1.0 / 400.0;
    const RenewalGrid grid = build_renewal_grid(m, h, 1.0 + 8.0 * h);

    {
        const double a = joint_moment(grid, {{0.5, 1.0}, {1, 2}});
        const double b = joint_moment(grid, {{1.0, 0.5}, {2, 1}});
        add(out, "moment-permutation", "moments", std::abs(a - b), 1e-12);
    }
    {
        const double a = joint_moment(grid, {{0.5}, {1}});
        const double b = grid.at(0.5);
        add(out, "moment-base-consistency", "moments",
            std::abs(a - b) / std::max(1e-300, std::abs(b)), 1e-9);
    }
    {
        double prev = 0.0, worst = 0.0, worst_var = 0.0;
        for (double t : {0.25, 0.5, 0.75, 1.0}) {
            const double m2 = joint_moment(grid, {{t}, {2}});
            const double m1 = joint_moment(grid, {{t}, {1}});
            worst = std::max(worst, prev - m2);
            worst_var = std::max(worst_var, m1 * m1 - m2);
            prev = m2;
        }
        add(out, "moment-monotone", "moments", worst, 1e-9);
        add(out, "variance-nonnegative", "moments", worst_var, 1e-6);
    }
    {
        const double m11 = joint_moment(grid, {{0.5, 1.0}, {1, 1}});
        const double m2s = joint_moment(grid, {{0.5}, {2}});
        const double m2t = joint_moment(grid, {{1.0}, {2}});
        add(out, "cauchy-schwarz", "moments",
            std::max(0.0, m11 * m11 / (m2s * m2t) - 1.0), 1e-6);
    }
    if (m.family == Family::drift_only)
        add(out, "covariance-drift-zero", "moments",
            std::abs(covariance(grid, 0.5, 1.0)), 1e-6);

    if (smoothness_hint(m) == Smoothness::smooth && m.family != Family::drift_only) {
        const double t = 1.0;
        const double hf = t / 4000.0;
        const RenewalGrid fine = build_renewal_grid(m, hf, t + 8.0 * hf);
        const double g1 = fractional_moment(m, t, 1.0);
        const double g2 = fractional_moment(m, t, 2.0);
        const double r1 = std::abs(g1 - fine.at(t)) / fine.at(t);
        const double m2 = joint_moment(fine, {{t}, {2}});
        const double r2 = std::abs(g2 - m2) / m2;
        add(out, "fractional-integer-agreement", "moments", std::max(r1, r2), 1e-4);
    }
}

void check_jointlaw(const SubordinatorModel& m, std::vector<CheckResult>& out) {
    const std::vector<JointPoint> points = {
        {{1.0}, {1.5}},
        {{0.6, 1.4}, {1.0, 2.0}},
        {{0.5, 1.0, 1.5}, {0.5, 1.0, 2.0}},
    };

    double worst_bound = 0.0, worst_monotone = 0.0, worst_pde = 0.0;
    for (const auto& p : points) {
        const double v = htilde(m, p);
        if (!(v > 0.0)) worst_bound = std::max(worst_bound, 1.0);
        double prod = 1.0;
        for (double l : p.lambdas) prod *= l;
        worst_bound = std::max(worst_bound, v * prod - 1.0);

        for (std::size_t i = 0; i < p.s.size(); ++i) {
            JointPoint later = p;
            later.s[i] += 0.25;
            worst_monotone = std::max(worst_monotone, htilde(m, later) - v);
        }
        worst_pde = std::max(worst_pde, pde_residual(m, p, 1e-4));
    }
    add(out, "transform-bounds", "jointlaw", worst_bound, 1e-12);
    add(out, "transform-monotone", "jointlaw", worst_monotone, 1e-12);
    add(out, "pde-residual", "jointlaw", worst_pde, 1e-5);

    double worst_boundary = 0.0;
    for (const auto& p : {points[1], points[2]}) {
        for (std::size_t i = 0; i < p.s.size(); ++i) {
            const auto [lhs, rhs] = boundary_check(m, p, static_cast<int>(i));
            worst_boundary = std::max(worst_boundary, std::abs(lhs - rhs) / rhs);
        }
    }
    add(out, "boundary-identity", "jointlaw", worst_boundary, 1e-13);

    // integral over s of H~(s; lambda) equals 1 / (lambda phi(lambda))
    double worst_integral = 0.0;
    for (double lambda : {1.0, 2.0}) {
        const double rate = phi(m, lambda);
        const double s_max = 40.0 / rate;
        const int intervals = 2000;  // Simpson pairs
        const double hs = s_max / (2 * intervals);
        double integral = htilde(m, {{0.0}, {lambda}});
        for (int j = 1; j < 2 * intervals; ++j)
            integral += htilde(m, {{j * hs}, {lambda}}) * (j % 2 == 1 ? 4.0 : 2.0);
        integral += htilde(m, {{s_max}, {lambda}});
        integral *= hs / 3.0;
        const double target = 1.0 / (lambda * rate);
        worst_integral = std::max(worst_integral, std::abs(integral - target) / target);
    }
    add(out, "transform-time-integral", "jointlaw", worst_integral, 1e-6);
}

void check_mc(const SubordinatorModel& m, const VerifyOptions& opt,
              std::vector<CheckResult>& out) {
    McConfig mc;
    mc.n_paths = opt.mc_paths;
    mc.seed = opt.seed;
    mc.delta = opt.delta;
    mc.parallel = opt.parallel;

    {
        double worst = 0.0;
        for (std::uint64_t i = 0; i < 8; ++i) {
            const PathSkeleton p = simulate_path(m, 2.0, opt.seed, i, opt.delta);
            for (std::size_t j = 1; j < p.values.size(); ++j)
                worst = std::max(worst, p.values[j - 1] - p.values[j]);
            if (!p.values.empty()) worst = std::max(worst, -p.values.front());
        }
        add(out, "path-monotone", "mc", worst, 0.0);
    }

    for (double lambda : {0.5, 1.0, 2.0}) {
        const EstimatorResult r = transform_at_one(m, lambda, mc);
        const double target = std::exp(-phi(m, lambda));
        const char* name = lambda == 0.5   ? "transform-check-lambda-0.5"
                           : lambda == 1.0 ? "transform-check-lambda-1"
                                           : "transform-check-lambda-2";
        add(out, name, "mc", std::abs(r.estimate - target), 3.0 * r.std_error + 1e-9);
    }

    {
        McConfig small = mc;
        small.n_paths = std::min<long>(mc.n_paths, 5000);
        const EstimatorResult a = estimate_joint_moment(m, {{1.0}, {1}}, small);
        const EstimatorResult b = estimate_joint_moment(m, {{1.0}, {1}}, small);
        add(out, "estimator-determinism", "mc", std::abs(a.estimate - b.estimate), 0.0);
    }

    if (!has_lattice_jumps(m)) {
        const EstimatorResult r = estimate_joint_moment(m, {{1.0}, {1}}, mc);
        double reference;
        if (m.family == Family::drift_only) {
            reference = 1.0 / m.drift;
        } else {
            const double h = 1.0 / 400.0;
            reference = build_renewal_grid(m, h, 1.0).at(1.0);
        }
        const bool grid_repr = smoothness_hint(m) == Smoothness::smooth &&
                               m.family != Family::drift_only;
        const double allowance = grid_repr ? 2.0 * mc.delta : 0.0;
        add(out, "moment-agreement", "mc", std::abs(r.estimate - reference),
            3.0 * r.std_error + allowance + 1e-9);
    }

    {
        const double mean = mean_of_D1(m);
        const double level = std::isfinite(mean) ? mean : 1.0;
        const auto [p_d, p_e] = event_equality_check(m, 1.0, level, mc);
        const double pbar = 0.5 * (p_d + p_e);
        const double se =
            std::sqrt(std::max(pbar * (1.0 - pbar), 1e-12) / static_cast<double>(mc.n_paths));
        add(out, "event-equality", "mc", std::abs(p_d - p_e), 3.0 * se + 1e-9);
    }
}

}  // namespace

std::vector<CheckResult> run_verify(const SubordinatorModel& m, const VerifyOptions& opt) {
    validate(m);
    std::vector<CheckResult> out;
    check_exponent(m, out);
    check_laplace(out);
    check_renewal(m, out);
    check_moments(m, out);
    check_jointlaw(m, out);
    check_mc(m, opt, out);
    return out;
}

std::string verify_report_json(const std::vector<CheckResult>& results) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : results)
        rows.push_back({{"check", r.check},
                        {"module", r.module},
                        {"status", r.pass ? "pass" : "fail"},
                        {"observed", r.observed},
                        {"tolerance", r.tolerance}});
    return rows.dump(2);
}

std::string verify_report_csv(const std::vector<CheckResult>& results) {
    std::string out = "check,module,status,observed,tolerance\n";
    for (const auto& r : results) {
        out += r.check;
        out += ',';
        out += r.module;
        out += ',';
        out += r.pass ? "pass" : "fail";
        out += ',';
        out += format_double(r.observed);
        out += ',';
        out += format_double(r.tolerance);
        out += '\n';
    }
    return out;
}

}  // namespace invsub
