#include "invsub/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "invsub/errors.hpp"

namespace invsub {

using nlohmann::json;

double JumpDistribution::mean() const {
    switch (kind) {
        case JumpKind::exponential: return 1.0 / rate;
        case JumpKind::deterministic: return size;
        case JumpKind::discrete: {
            double m = 0.0;
            for (const auto& [x, p] : atoms) m += x * p;
            return m;
        }
    }
    return 0.0;
}

namespace {

void validate_jumps(const JumpDistribution& j) {
    switch (j.kind) {
        case JumpKind::exponential:
            if (!(j.rate > 0.0)) throw ValidationError("exponential jump rate must be positive");
            break;
        case JumpKind::deterministic:
            if (!(j.size > 0.0)) throw ValidationError("jump sizes must be positive");
            break;
        case JumpKind::discrete: {
            if (j.atoms.empty())
                throw ValidationError("discrete jump distribution requires at least one atom");
            double total = 0.0;
            for (const auto& [x, p] : j.atoms) {
                if (!(x > 0.0)) throw ValidationError("jump sizes must be positive");
                if (!(p > 0.0)) throw ValidationError("jump probabilities must be positive");
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-12)
                throw ValidationError("jump probabilities must sum to 1");
            break;
        }
    }
}

}  // namespace

void validate(const SubordinatorModel& m) {
    if (!(m.drift >= 0.0)) throw ValidationError("drift must be nonnegative");
    switch (m.family) {
        case Family::drift_only:
            if (!(m.drift > 0.0))
                throw ValidationError("drift-only model requires positive drift");
            break;
        case Family::stable:
            if (!(m.alpha > 0.0 && m.alpha < 1.0))
                throw ValidationError("stable exponent must lie in (0,1)");
            break;
        case Family::mixed_stable: {
            if (m.terms.empty())
                throw ValidationError("mixed-stable model requires at least one term");
            double total = 0.0;
            for (const auto& term : m.terms) {
                if (!(term.beta > 0.0 && term.beta < 1.0))
                    throw ValidationError("mixed-stable exponent must lie in (0,1)");
                if (!(term.weight > 0.0))
                    throw ValidationError("mixed-stable weights must be positive");
                total += term.weight;
            }
            if (std::abs(total - 1.0) > 1e-12)
                throw ValidationError("mixed-stable weights must sum to 1");
            break;
        }
        case Family::compound_poisson:
            if (!(m.rate > 0.0)) throw ValidationError("compound-poisson rate must be positive");
            validate_jumps(m.jumps);
            break;
        case Family::gamma:
            if (!(m.shape > 0.0 && m.gamma_rate > 0.0))
                throw ValidationError("gamma shape and rate must be positive");
            break;
        case Family::inverse_gaussian:
            if (!(m.ig_delta > 0.0 && m.ig_gamma > 0.0))
                throw ValidationError("inverse-gaussian parameters must be positive");
            break;
        case Family::composite:
            if (m.parts.empty())
                throw ValidationError("composite model requires at least one part");
            for (const auto& part : m.parts) validate(part);
            break;
    }
}

namespace {

const char* family_name(Family f) {
    switch (f) {
        case Family::drift_only: return "drift-only";
        case Family::stable: return "stable";
        case Family::mixed_stable: return "mixed-stable";
        case Family::compound_poisson: return "compound-poisson";
        case Family::gamma: return "gamma";
        case Family::inverse_gaussian: return "inverse-gaussian";
        case Family::composite: return "composite";
    }
    return "?";
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ValidationError("unknown field '" + key + "' in " + where);
    }
}

double require_number(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        throw ValidationError(std::string("missing field '") + key + "' in " + where);
    if (!obj[key].is_number())
        throw ValidationError(std::string("field '") + key + "' in " + where +
                              " must be a number");
    return obj[key].get<double>();
}

JumpDistribution jumps_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("'jumps' must be an object");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ValidationError("'jumps' requires a string field 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    JumpDistribution out;
    if (kind == "exponential") {
        reject_unknown(j, {"kind", "rate"}, "jumps");
        out.kind = JumpKind::exponential;
        out.rate = require_number(j, "rate", "jumps");
    } else if (kind == "deterministic") {
        reject_unknown(j, {"kind", "size"}, "jumps");
        out.kind = JumpKind::deterministic;
        out.size = require_number(j, "size", "jumps");
    } else if (kind == "discrete") {
        reject_unknown(j, {"kind", "atoms"}, "jumps");
        out.kind = JumpKind::discrete;
        if (!j.contains("atoms") || !j["atoms"].is_array())
            throw ValidationError("discrete jumps require an array field 'atoms'");
        for (const auto& a : j["atoms"]) {
            if (!a.is_object()) throw ValidationError("each atom must be an object");
            reject_unknown(a, {"size", "prob"}, "atom");
            out.atoms.emplace_back(require_number(a, "size", "atom"),
                                   require_number(a, "prob", "atom"));
        }
    } else {
        throw ValidationError("unknown jump kind '" + kind + "'");
    }
    return out;
}

SubordinatorModel model_from_json_value(const json& j) {
    if (!j.is_object()) throw ValidationError("model must be a JSON object");
    if (!j.contains("family") || !j["family"].is_string())
        throw ValidationError("model field 'family' is required");
    const std::string fam = j["family"].get<std::string>();

    SubordinatorModel m;
    if (j.contains("drift")) {
        if (!j["drift"].is_number()) throw ValidationError("'drift' must be a number");
        m.drift = j["drift"].get<double>();
    }

    auto params = [&](std::initializer_list<const char*> allowed) -> json {
        if (!j.contains("params"))
            throw ValidationError("family '" + fam + "' requires a 'params' object");
        if (!j["params"].is_object()) throw ValidationError("'params' must be an object");
        reject_unknown(j["params"], allowed, "params for family '" + fam + "'");
        return j["params"];
    };

    if (fam == "drift-only") {
        reject_unknown(j, {"family", "drift", "params"}, "model object");
        if (j.contains("params")) {
            if (!j["params"].is_object()) throw ValidationError("'params' must be an object");
            reject_unknown(j["params"], {}, "params for family 'drift-only'");
        }
        m.family = Family::drift_only;
    } else if (fam == "stable") {
        reject_unknown(j, {"family", "drift", "params"}, "model object");
        m.family = Family::stable;
        m.alpha = require_number(params({"alpha"}), "alpha", "params");
    } else if (fam == "mixed-stable") {
        reject_unknown(j, {"family", "drift", "params"}, "model object");
        m.family = Family::mixed_stable;
        const json p = params({"terms"});
        if (!p.contains("terms") || !p["terms"].is_array())
            throw ValidationError("mixed-stable params require an array field 'terms'");
        for (const auto& term : p["terms"]) {
            if (!term.is_object()) throw ValidationError("each mixed-stable term must be an object");
            reject_unknown(term, {"weight", "beta"}, "mixed-stable term");
            m.terms.push_back({require_number(term, "weight", "term"),
                               require_number(term, "beta", "term")});
        }
    } else if (fam == "compound-poisson") {
        reject_unknown(j, {"family", "drift", "params"}, "model object");
        m.family = Family::compound_poisson;
        const json p = params({"rate", "jumps"});
        m.rate = require_number(p, "rate", "params");
        if (!p.contains("jumps"))
            throw ValidationError("compound-poisson params require a 'jumps' object");
        m.jumps = jumps_from_json(p["jumps"]);
    } else if (fam == "gamma") {
        reject_unknown(j, {"family", "drift", "params"}, "model object");
        m.family = Family::gamma;
        const json p = params({"shape", "rate"});
        m.shape = require_number(p, "shape", "params");
        m.gamma_rate = require_number(p, "rate", "params");
    } else if (fam == "inverse-gaussian") {
        reject_unknown(j, {"family", "drift", "params"}, "model object");
        m.family = Family::inverse_gaussian;
        const json p = params({"delta", "gamma"});
        m.ig_delta = require_number(p, "delta", "params");
        m.ig_gamma = require_number(p, "gamma", "params");
    } else if (fam == "composite") {
        reject_unknown(j, {"family", "drift", "parts"}, "model object");
        m.family = Family::composite;
        if (!j.contains("parts") || !j["parts"].is_array())
            throw ValidationError("composite model requires an array field 'parts'");
        for (const auto& part : j["parts"]) m.parts.push_back(model_from_json_value(part));
    } else {
        throw ValidationError("unknown family '" + fam + "'");
    }
    return m;
}

json model_to_json_value(const SubordinatorModel& m) {
    json j;
    j["family"] = family_name(m.family);
    j["drift"] = m.drift;
    switch (m.family) {
        case Family::drift_only:
            j["params"] = json::object();
            break;
        case Family::stable:
            j["params"] = {{"alpha", m.alpha}};
            break;
        case Family::mixed_stable: {
            json terms = json::array();
            for (const auto& t : m.terms)
                terms.push_back({{"weight", t.weight}, {"beta", t.beta}});
            j["params"] = {{"terms", terms}};
            break;
        }
        case Family::compound_poisson: {
            json jumps;
            switch (m.jumps.kind) {
                case JumpKind::exponential:
                    jumps = {{"kind", "exponential"}, {"rate", m.jumps.rate}};
                    break;
                case JumpKind::deterministic:
                    jumps = {{"kind", "deterministic"}, {"size", m.jumps.size}};
                    break;
                case JumpKind::discrete: {
                    json atoms = json::array();
                    for (const auto& [x, p] : m.jumps.atoms)
                        atoms.push_back({{"size", x}, {"prob", p}});
                    jumps = {{"kind", "discrete"}, {"atoms", atoms}};
                    break;
                }
            }
            j["params"] = {{"rate", m.rate}, {"jumps", jumps}};
            break;
        }
        case Family::gamma:
            j["params"] = {{"shape", m.shape}, {"rate", m.gamma_rate}};
            break;
        case Family::inverse_gaussian:
            j["params"] = {{"delta", m.ig_delta}, {"gamma", m.ig_gamma}};
            break;
        case Family::composite: {
            json parts = json::array();
            for (const auto& part : m.parts) parts.push_back(model_to_json_value(part));
            j["parts"] = parts;
            break;
        }
    }
    return j;
}

}  // namespace

SubordinatorModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("model JSON parse error: ") + e.what());
    }
    SubordinatorModel m = model_from_json_value(j);
    validate(m);
    return m;
}

SubordinatorModel model_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

std::string model_to_json(const SubordinatorModel& m) {
    return model_to_json_value(m).dump(2);
}

SubordinatorModel drift_only(double mu) {
    SubordinatorModel m;
    m.family = Family::drift_only;
    m.drift = mu;
    return m;
}

SubordinatorModel stable_model(double alpha, double drift) {
    SubordinatorModel m;
    m.family = Family::stable;
    m.alpha = alpha;
    m.drift = drift;
    return m;
}

SubordinatorModel mixed_stable_model(std::vector<MixedTerm> terms, double drift) {
    SubordinatorModel m;
    m.family = Family::mixed_stable;
    m.terms = std::move(terms);
    m.drift = drift;
    return m;
}

SubordinatorModel compound_poisson_exp(double rate, double jump_rate, double drift) {
    SubordinatorModel m;
    m.family = Family::compound_poisson;
    m.rate = rate;
    m.jumps.kind = JumpKind::exponential;
    m.jumps.rate = jump_rate;
    m.drift = drift;
    return m;
}

SubordinatorModel compound_poisson_det(double rate, double jump_size, double drift) {
    SubordinatorModel m;
    m.family = Family::compound_poisson;
    m.rate = rate;
    m.jumps.kind = JumpKind::deterministic;
    m.jumps.size = jump_size;
    m.drift = drift;
    return m;
}

SubordinatorModel compound_poisson_discrete(double rate,
                                            std::vector<std::pair<double, double>> atoms,
                                            double drift) {
    SubordinatorModel m;
    m.family = Family::compound_poisson;
    m.rate = rate;
    m.jumps.kind = JumpKind::discrete;
    m.jumps.atoms = std::move(atoms);
    m.drift = drift;
    return m;
}

SubordinatorModel gamma_model(double shape, double rate, double drift) {
    SubordinatorModel m;
    m.family = Family::gamma;
    m.shape = shape;
    m.gamma_rate = rate;
    m.drift = drift;
    return m;
}

SubordinatorModel inverse_gaussian_model(double delta, double gamma, double drift) {
    SubordinatorModel m;
    m.family = Family::inverse_gaussian;
    m.ig_delta = delta;
    m.ig_gamma = gamma;
    m.drift = drift;
    return m;
}

SubordinatorModel composite_model(std::vector<SubordinatorModel> parts, double drift) {
    SubordinatorModel m;
    m.family = Family::composite;
    m.parts = std::move(parts);
    m.drift = drift;
    return m;
}

}  // namespace invsub
