#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "invsub/model.hpp"
#include "invsub/moments.hpp"

namespace invsub {

enum class PathRepr { event_list, increment_grid };

// One simulated trajectory of the jump part of D; drift is carried separately
// so D(s) = drift*s + jump part. Event lists store (jump time, cumulative
// value after the jump); increment grids store cumulative values at nodes
// j*delta with values[0] = 0.
struct PathSkeleton {
    PathRepr repr = PathRepr::event_list;
    double drift = 0.0;
    double horizon = 0.0;
    double delta = 0.0;             // increment_grid step
    std::vector<double> times;      // event_list jump times
    std::vector<double> values;

    // D(s) including drift (right-continuous).
    double value_at(double s) const;
};

struct EstimatorResult {
    double estimate = 0.0;
    double std_error = 0.0;
    long n_paths = 0;
    std::uint64_t seed = 0;
};

struct McConfig {
    long n_paths = 100000;
    std::uint64_t seed = 1;
    double delta = 1e-3;  // increment-grid step for infinite-activity families
    bool parallel = true;
};

// Simulate the jump part of D on [0, horizon_s]. Compound Poisson (and
// composites of compound Poisson parts) use exact event lists; families with
// infinite activity use increment grids of step grid_step.
PathSkeleton simulate_path(const SubordinatorModel& m, double horizon_s, std::uint64_t seed,
                           std::uint64_t path_index = 0, double grid_step = 1e-3);

// E(t) = inf{s : D(s) > t} read off the skeleton. Event lists are exact (the
// drift segment between events is solved in closed form); increment grids
// return the first node with D > t (upward bias at most one step).
double first_passage(const PathSkeleton& path, double t);

// Mean of prod_i E(t_i)^{m_i} over independent paths; one path serves all
// t_i. Horizon auto-extension doubles until D exceeds max(t), capped at a
// factor 2^20. Deterministic given (model, spec, n_paths, seed), independent
// of parallel schedule.
EstimatorResult estimate_joint_moment(const SubordinatorModel& m, const MomentSpec& spec,
                                      const McConfig& mc);

// Empirical frequencies (P[D(s) < t], P[E(t) > s]) on common paths.
std::pair<double, double> event_equality_check(const SubordinatorModel& m, double s, double t,
                                               const McConfig& mc);

// Empirical mean of e^{-lambda D(1)} with standard error.
EstimatorResult transform_at_one(const SubordinatorModel& m, double lambda, const McConfig& mc);

}  // namespace invsub
