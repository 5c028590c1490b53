#pragma once

#include <utility>
#include <vector>

#include "invsub/model.hpp"

namespace invsub {

// Arguments of the joint transform H~(s_1..s_n; lambda_1..lambda_n):
// s_i in operational time of E, lambda_i dual to the observation times t_i.
struct JointPoint {
    std::vector<double> s;
    std::vector<double> lambdas;
};

// Closed form: with s sorted ascending as 0 = s_(0) <= s_(1) <= ... <= s_(n),
//   H~ = (prod_i lambda_i)^{-1} exp(-sum_i phi(sum_{k>=i} lambda_(k)) (s_(i)-s_(i-1))).
// Evaluated in log space; underflows to 0 beyond e^{-700}.
double htilde(const SubordinatorModel& m, const JointPoint& p);

// Relative residual |sum_i dH~/ds_i + phi(sum lambda_i) H~| / H~ with central
// differences. Requires s_i > fd_step and fd_step < half the minimum gap
// between distinct sorted s_i (the closed form has kinks at ties).
double pde_residual(const SubordinatorModel& m, const JointPoint& p, double fd_step);

// Returns (H~ with s_i := 0, (1/lambda_i) * H~ of the point with coordinate i
// removed); the two must agree.
std::pair<double, double> boundary_check(const SubordinatorModel& m, const JointPoint& p,
                                         int i);

}  // namespace invsub
