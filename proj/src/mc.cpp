#include "invsub/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "invsub/errors.hpp"
#include "invsub/exponent.hpp"
#include "invsub/rng.hpp"

namespace invsub {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHorizonCapFactor = 1048576.0;  // 2^20

// Jump structure of the model, flattened across composite nesting: total
// drift plus the list of non-drift leaves. Pure compound-poisson structures
// admit exact event-list simulation via a single merged Poisson clock.
struct JumpStructure {
    double drift = 0.0;
    bool all_cp = true;
    std::vector<const SubordinatorModel*> leaves;
    double total_rate = 0.0;
    std::vector<double> cum_fraction;  // per compound-poisson leaf
};

void flatten_into(const SubordinatorModel& m, JumpStructure& out) {
    out.drift += m.drift;
    switch (m.family) {
        case Family::drift_only:
            return;
        case Family::composite:
            for (const auto& part : m.parts) flatten_into(part, out);
            return;
        default:
            out.leaves.push_back(&m);
            if (m.family == Family::compound_poisson)
                out.total_rate += m.rate;
            else
                out.all_cp = false;
            return;
    }
}

JumpStructure flatten(const SubordinatorModel& m) {
    JumpStructure out;
    flatten_into(m, out);
    if (out.all_cp && !out.leaves.empty()) {
        double acc = 0.0;
        out.cum_fraction.reserve(out.leaves.size());
        for (const auto* leaf : out.leaves) {
            acc += leaf->rate / out.total_rate;
            out.cum_fraction.push_back(acc);
        }
        out.cum_fraction.back() = 1.0;
    }
    return out;
}

double draw_jump(PathRng& rng, const JumpDistribution& j) {
    switch (j.kind) {
        case JumpKind::exponential:
            return rng.exponential(j.rate);
        case JumpKind::deterministic:
            return j.size;
        case JumpKind::discrete: {
            const double u = rng.u01();
            double acc = 0.0;
            for (const auto& [x, p] : j.atoms) {
                acc += p;
                if (u <= acc) return x;
            }
            return j.atoms.back().first;
        }
    }
    return 0.0;
}

double draw_merged_cp_jump(PathRng& rng, const JumpStructure& js) {
    std::size_t pick = 0;
    if (js.leaves.size() > 1) {
        const double u = rng.u01();
        while (u > js.cum_fraction[pick]) ++pick;
    }
    return draw_jump(rng, js.leaves[pick]->jumps);
}

// Exact-in-distribution increment of one leaf over a time step dt.
double draw_increment(PathRng& rng, const SubordinatorModel& leaf, double dt) {
    switch (leaf.family) {
        case Family::stable:
            return std::pow(dt, 1.0 / leaf.alpha) * sample_positive_stable(rng, leaf.alpha);
        case Family::mixed_stable: {
            double s = 0.0;
            for (const auto& term : leaf.terms)
                s += std::pow(dt * term.weight, 1.0 / term.beta) *
                     sample_positive_stable(rng, term.beta);
            return s;
        }
        case Family::gamma:
            return sample_gamma(rng, leaf.shape * dt) / leaf.gamma_rate;
        case Family::inverse_gaussian: {
            const double mean = leaf.ig_delta * dt / leaf.ig_gamma;
            const double shape = (leaf.ig_delta * dt) * (leaf.ig_delta * dt);
            return sample_inverse_gaussian(rng, mean, shape);
        }
        case Family::compound_poisson: {
            const int k = sample_poisson(rng, leaf.rate * dt);
            double s = 0.0;
            for (int i = 0; i < k; ++i) s += draw_jump(rng, leaf.jumps);
            return s;
        }
        default:
            return 0.0;
    }
}

[[noreturn]] void throw_horizon_cap(double cap, double level) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "simulation passed the horizon cap s=" << cap
        << " without the path crossing t=" << level;
    throw HorizonError(msg.str());
}

// First-passage times of one path across each level in `levels` (ascending),
// generating the path lazily until the largest level is crossed. Consumes the
// stream in simulation order, so a longer run of the same (seed, path) pair
// extends this one.
void fused_passages(const JumpStructure& js, const std::vector<double>& levels,
                    std::uint64_t seed, std::uint64_t path_index, double delta, double cap,
                    std::vector<double>& passage) {
    PathRng rng(seed, path_index);
    const std::size_t n_levels = levels.size();
    passage.assign(n_levels, 0.0);
    std::size_t next = 0;

    if (js.leaves.empty()) {  // deterministic drift line
        for (; next < n_levels; ++next) passage[next] = levels[next] / js.drift;
        return;
    }

    if (js.all_cp) {
        double cur = 0.0, jump_total = 0.0;
        while (next < n_levels) {
            const double ev = cur + rng.exponential(js.total_rate);
            if (js.drift > 0.0) {
                while (next < n_levels) {
                    const double s = (levels[next] - jump_total) / js.drift;
                    if (s < ev) passage[next++] = s;
                    else break;
                }
                if (next >= n_levels) break;
            }
            if (ev > cap) throw_horizon_cap(cap, levels[next]);
            jump_total += draw_merged_cp_jump(rng, js);
            while (next < n_levels && jump_total + js.drift * ev > levels[next])
                passage[next++] = ev;
            cur = ev;
        }
        return;
    }

    double jump_total = 0.0;
    for (long j = 1; next < n_levels; ++j) {
        const double s = static_cast<double>(j) * delta;
        if (s > cap) throw_horizon_cap(cap, levels[next]);
        for (const auto* leaf : js.leaves) jump_total += draw_increment(rng, *leaf, delta);
        while (next < n_levels && js.drift * s + jump_total > levels[next])
            passage[next++] = s;
    }
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

EstimatorResult summarize(const std::vector<double>& vals, std::uint64_t seed) {
    const auto n = static_cast<long>(vals.size());
    const double sum = pairwise_sum(vals.data(), vals.size());
    const double mean = sum / static_cast<double>(n);
    std::vector<double> sq(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) sq[i] = vals[i] * vals[i];
    const double sumsq = pairwise_sum(sq.data(), sq.size());
    double var = 0.0;
    if (n > 1)
        var = std::max(0.0, (sumsq - static_cast<double>(n) * mean * mean) /
                                static_cast<double>(n - 1));
    return {mean, std::sqrt(var / static_cast<double>(n)), n, seed};
}

void check_mc_config(const McConfig& mc) {
    if (mc.n_paths < 1) throw ValidationError("path count must be positive");
    if (!(mc.delta > 0.0)) throw ValidationError("simulation step must be positive");
}

// Run fn(i) over paths, capturing the first worker exception.
template <typename Fn>
void parallel_paths(long n, bool parallel, Fn&& fn) {
    bool failed = false;
    std::string msg;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (long i = 0; i < n; ++i) {
        if (failed) continue;
        try {
            fn(i);
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (!failed) {
                    failed = true;
                    msg = e.what();
                }
            }
        }
    }
    (void)parallel;
    if (failed) throw HorizonError(msg);
}

}  // namespace

double PathSkeleton::value_at(double s) const {
    const double base = drift * s;
    if (repr == PathRepr::event_list) {
        const auto it = std::upper_bound(times.begin(), times.end(), s);
        if (it == times.begin()) return base;
        return base + values[static_cast<std::size_t>(it - times.begin()) - 1];
    }
    if (values.empty()) return base;
    auto j = static_cast<std::size_t>(s / delta + 1e-9);
    j = std::min(j, values.size() - 1);
    return base + values[j];
}

PathSkeleton simulate_path(const SubordinatorModel& m, double horizon_s, std::uint64_t seed,
                           std::uint64_t path_index, double grid_step) {
    if (!(horizon_s > 0.0)) throw ValidationError("simulation horizon must be positive");
    if (!(grid_step > 0.0)) throw ValidationError("simulation step must be positive");
    const JumpStructure js = flatten(m);
    PathRng rng(seed, path_index);

    PathSkeleton p;
    p.drift = js.drift;
    p.horizon = horizon_s;
    if (js.leaves.empty()) return p;  // drift only: no jump events

    if (js.all_cp) {
        double t = 0.0, total = 0.0;
        for (;;) {
            t += rng.exponential(js.total_rate);
            if (t > horizon_s) break;
            total += draw_merged_cp_jump(rng, js);
            p.times.push_back(t);
            p.values.push_back(total);
        }
        return p;
    }

    p.repr = PathRepr::increment_grid;
    p.delta = grid_step;
    const auto n = static_cast<std::size_t>(std::ceil(horizon_s / grid_step - 1e-9));
    p.values.resize(n + 1);
    p.values[0] = 0.0;
    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        for (const auto* leaf : js.leaves) total += draw_increment(rng, *leaf, grid_step);
        p.values[j] = total;
    }
    return p;
}

double first_passage(const PathSkeleton& p, double t) {
    if (!(t >= 0.0)) throw ValidationError("first-passage level must be nonnegative");

    if (p.repr == PathRepr::event_list) {
        double jump_total = 0.0;
        for (std::size_t i = 0; i < p.times.size(); ++i) {
            if (p.drift > 0.0) {
                const double s = (t - jump_total) / p.drift;
                if (s < p.times[i]) return s;
            }
            if (p.values[i] + p.drift * p.times[i] > t) return p.times[i];
            jump_total = p.values[i];
        }
        if (p.drift > 0.0) {
            const double s = (t - jump_total) / p.drift;
            if (s <= p.horizon) return s;
        }
        return kInf;
    }

    // first grid node with D above t; upward bias at most one step
    std::size_t lo = 0, hi = p.values.size();
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const double d = p.drift * (static_cast<double>(mid) * p.delta) + p.values[mid];
        if (d > t) hi = mid;
        else lo = mid + 1;
    }
    if (lo == p.values.size()) return kInf;
    return static_cast<double>(lo) * p.delta;
}

EstimatorResult estimate_joint_moment(const SubordinatorModel& m, const MomentSpec& spec,
                                      const McConfig& mc) {
    check_mc_config(mc);
    const std::size_t k = spec.times.size();
    if (k == 0 || k > 3)
        throw ValidationError("joint moment supports 1 to 3 time coordinates");
    if (spec.orders.size() != k)
        throw ValidationError("joint moment needs one order per time coordinate");
    int total_order = 0;
    for (int o : spec.orders) {
        if (o < 1) throw ValidationError("moment orders must be positive integers");
        total_order += o;
    }
    if (total_order > 6) throw ValidationError("total moment order must not exceed 6");
    for (double t : spec.times)
        if (!(t > 0.0)) throw ValidationError("moment times must be positive");

    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return spec.times[a] < spec.times[b]; });
    std::vector<double> levels(k);
    std::vector<int> orders(k);
    for (std::size_t i = 0; i < k; ++i) {
        levels[i] = spec.times[idx[i]];
        orders[i] = spec.orders[idx[i]];
    }

    const double t_max = levels.back();
    const double base_horizon = 4.0 / phi(m, 1.0 / (t_max + 1.0));
    const double cap = base_horizon * kHorizonCapFactor;
    const JumpStructure js = flatten(m);

    std::vector<double> vals(static_cast<std::size_t>(mc.n_paths));
    parallel_paths(mc.n_paths, mc.parallel, [&](long i) {
        std::vector<double> passage;
        fused_passages(js, levels, mc.seed, static_cast<std::uint64_t>(i), mc.delta, cap,
                       passage);
        double prod = 1.0;
        for (std::size_t c = 0; c < k; ++c)
            for (int o = 0; o < orders[c]; ++o) prod *= passage[c];
        vals[static_cast<std::size_t>(i)] = prod;
    });
    return summarize(vals, mc.seed);
}

std::pair<double, double> event_equality_check(const SubordinatorModel& m, double s, double t,
                                               const McConfig& mc) {
    check_mc_config(mc);
    if (!(s > 0.0) || !(t > 0.0))
        throw ValidationError("event-equality arguments must be positive");

    const auto n = static_cast<std::size_t>(mc.n_paths);
    std::vector<unsigned char> d_below(n), e_above(n);
    parallel_paths(mc.n_paths, mc.parallel, [&](long i) {
        const PathSkeleton path =
            simulate_path(m, s, mc.seed, static_cast<std::uint64_t>(i), mc.delta);
        d_below[static_cast<std::size_t>(i)] = path.value_at(s) < t ? 1 : 0;
        e_above[static_cast<std::size_t>(i)] = first_passage(path, t) > s ? 1 : 0;
    });
    double c1 = 0.0, c2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        c1 += d_below[i];
        c2 += e_above[i];
    }
    return {c1 / static_cast<double>(n), c2 / static_cast<double>(n)};
}

EstimatorResult transform_at_one(const SubordinatorModel& m, double lambda,
                                 const McConfig& mc) {
    check_mc_config(mc);
    if (!(lambda > 0.0)) throw ValidationError("transform arguments must be positive");

    std::vector<double> vals(static_cast<std::size_t>(mc.n_paths));
    parallel_paths(mc.n_paths, mc.parallel, [&](long i) {
        const PathSkeleton path =
            simulate_path(m, 1.0, mc.seed, static_cast<std::uint64_t>(i), mc.delta);
        vals[static_cast<std::size_t>(i)] = std::exp(-lambda * path.value_at(1.0));
    });
    return summarize(vals, mc.seed);
}

}  // namespace invsub
