#pragma once

#include <string>
#include <vector>

#include "invsub/renewal.hpp"

namespace invsub {

// One joint moment E[ E(t_1)^{m_1} ... E(t_n)^{m_n} ], 1 <= n <= 3, total
// order sum(m_i) <= 6.
struct MomentSpec {
    std::vector<double> times;
    std::vector<int> orders;
};

enum class MomentMethod { recursion, analytic, monte_carlo };

// A batch of evaluated moments sharing one grid; CSV columns t1..tn,value,method.
struct MomentTable {
    std::vector<std::vector<double>> time_tuples;
    std::vector<int> orders;
    std::vector<double> values;
    MomentMethod method = MomentMethod::recursion;
};

// Joint integer moment via the lower-order recursion realized as iterated
// renewal convolutions on the grid. Symmetric under joint permutation of
// (t_i, m_i) pairs.
double joint_moment(const RenewalGrid& grid, const MomentSpec& spec);

// E E(t)^gamma by inverting Gamma(1+gamma) / (lambda * phi(lambda)^gamma).
double fractional_moment(const SubordinatorModel& m, double t, double gamma,
                         const InversionConfig& cfg = {});

// Cov(E(s), E(t)) = integral_0^{s^t} (U(s-tau)+U(t-tau)) dU(tau) - U(s)U(t).
double covariance(const RenewalGrid& grid, double s, double t);

std::string to_csv(const MomentTable& table);

}  // namespace invsub
