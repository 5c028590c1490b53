#pragma once

#include <string>
#include <utility>
#include <vector>

namespace invsub {

enum class Family {
    drift_only,
    stable,
    mixed_stable,
    compound_poisson,
    gamma,
    inverse_gaussian,
    composite,
};

enum class JumpKind { exponential, deterministic, discrete };

struct JumpDistribution {
    JumpKind kind = JumpKind::exponential;
    double rate = 1.0;                             // exponential
    double size = 1.0;                             // deterministic
    std::vector<std::pair<double, double>> atoms;  // discrete: (size, prob)

    double mean() const;
};

struct MixedTerm {
    double weight = 1.0;
    double beta = 0.5;
};

// One subordinator: drift plus a jump part selected by `family`. Only the
// fields of the active family are meaningful; composite models sum their
// parts (each part carries its own drift).
struct SubordinatorModel {
    Family family = Family::drift_only;
    double drift = 0.0;

    double alpha = 0.5;                  // stable
    std::vector<MixedTerm> terms;        // mixed-stable
    double rate = 1.0;                   // compound-poisson jump intensity
    JumpDistribution jumps;              // compound-poisson
    double shape = 1.0;                  // gamma
    double gamma_rate = 1.0;             // gamma
    double ig_delta = 1.0;               // inverse-gaussian
    double ig_gamma = 1.0;               // inverse-gaussian
    std::vector<SubordinatorModel> parts;  // composite
};

// Throws ValidationError on violated parameter constraints.
void validate(const SubordinatorModel& m);

SubordinatorModel model_from_json(const std::string& text);
SubordinatorModel model_from_json_file(const std::string& path);
std::string model_to_json(const SubordinatorModel& m);

SubordinatorModel drift_only(double mu);
SubordinatorModel stable_model(double alpha, double drift = 0.0);
SubordinatorModel mixed_stable_model(std::vector<MixedTerm> terms, double drift = 0.0);
SubordinatorModel compound_poisson_exp(double rate, double jump_rate, double drift = 0.0);
SubordinatorModel compound_poisson_det(double rate, double jump_size, double drift = 0.0);
SubordinatorModel compound_poisson_discrete(double rate,
                                            std::vector<std::pair<double, double>> atoms,
                                            double drift = 0.0);
SubordinatorModel gamma_model(double shape, double rate, double drift = 0.0);
SubordinatorModel inverse_gaussian_model(double delta, double gamma, double drift = 0.0);
SubordinatorModel composite_model(std::vector<SubordinatorModel> parts, double drift = 0.0);

}  // namespace invsub
