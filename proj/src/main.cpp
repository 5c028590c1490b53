#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "invsub/errors.hpp"
#include "invsub/exponent.hpp"
#include "invsub/jointlaw.hpp"
#include "invsub/laplace.hpp"
#include "invsub/mc.hpp"
#include "invsub/moments.hpp"
#include "invsub/renewal.hpp"
#include "invsub/verify.hpp"

namespace {

using invsub::InversionConfig;
using invsub::InversionMethod;
using invsub::SubordinatorModel;
using invsub::ValidationError;
using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw ValidationError("cannot open output file: " + out_path);
    f << content;
}

struct CommonFlags {
    std::string model_path;
    std::string out_path;
    std::string format = "csv";
    std::string method;
    int terms = 16;

    InversionConfig inversion() const {
        InversionConfig cfg;
        if (method == "talbot") cfg.method = InversionMethod::talbot;
        if (method == "stehfest") cfg.method = InversionMethod::gaver_stehfest;
        cfg.terms = terms;
        return cfg;
    }
};

int cmd_renewal(const CommonFlags& flags, double T, double h) {
    const SubordinatorModel model = invsub::model_from_json_file(flags.model_path);
    if (!(T > 0.0)) throw ValidationError("horizon --T must be positive");
    if (h == 0.0) h = T / 400.0;
    const invsub::RenewalGrid grid = invsub::build_renewal_grid(model, h, T, flags.inversion());

    if (flags.format == "json") {
        json rows = json::array();
        for (std::size_t k = 1; k < grid.values.size(); ++k)
            rows.push_back({{"t", static_cast<double>(k) * grid.h}, {"U", grid.values[k]}});
        write_output(flags.out_path, json(rows).dump(2) + "\n");
    } else {
        write_output(flags.out_path, invsub::to_csv(grid));
    }
    return 0;
}

int cmd_moment(const CommonFlags& flags, std::vector<double> times, std::vector<int> orders,
               double gamma, double h, long paths, std::uint64_t seed, double delta) {
    const SubordinatorModel model = invsub::model_from_json_file(flags.model_path);
    if (times.empty()) throw ValidationError("at least one --t is required");

    invsub::MomentTable table;
    if (gamma > 0.0) {
        if (times.size() != 1)
            throw ValidationError("fractional moments take a single --t");
        if (!orders.empty())
            throw ValidationError("use either --gamma or --m, not both");
        table.method = invsub::MomentMethod::analytic;
        table.orders = {1};
        table.time_tuples = {times};
        table.values = {invsub::fractional_moment(model, times[0], gamma, flags.inversion())};
    } else {
        if (orders.empty()) orders.assign(times.size(), 1);
        if (orders.size() != times.size())
            throw ValidationError("need one --m per --t");
        const invsub::MomentSpec spec{times, orders};
        table.orders = orders;
        table.time_tuples = {times};
        if (paths > 0) {
            invsub::McConfig mc;
            mc.n_paths = paths;
            mc.seed = seed;
            mc.delta = delta;
            table.method = invsub::MomentMethod::monte_carlo;
            table.values = {invsub::estimate_joint_moment(model, spec, mc).estimate};
        } else {
            const double t_max = *std::max_element(times.begin(), times.end());
            if (h == 0.0) h = t_max / 400.0;
            const double T = times.size() > 1 ? t_max + 8.0 * h : t_max;
            const invsub::RenewalGrid grid =
                invsub::build_renewal_grid(model, h, T, flags.inversion());
            table.method = invsub::MomentMethod::recursion;
            table.values = {invsub::joint_moment(grid, spec)};
        }
    }

    if (flags.format == "json") {
        const char* method = table.method == invsub::MomentMethod::recursion ? "recursion"
                             : table.method == invsub::MomentMethod::analytic
                                 ? "analytic"
                                 : "monte-carlo";
        json rows = json::array();
        for (std::size_t r = 0; r < table.values.size(); ++r) {
            json row;
            for (std::size_t i = 0; i < table.time_tuples[r].size(); ++i)
                row["t" + std::to_string(i + 1)] = table.time_tuples[r][i];
            row["value"] = table.values[r];
            row["method"] = method;
            rows.push_back(row);
        }
        write_output(flags.out_path, json(rows).dump(2) + "\n");
    } else {
        write_output(flags.out_path, invsub::to_csv(table));
    }
    return 0;
}

int cmd_covariance(const CommonFlags& flags, std::vector<double> times, double h) {
    const SubordinatorModel model = invsub::model_from_json_file(flags.model_path);
    if (times.empty()) throw ValidationError("at least one --t is required");
    const double t_max = *std::max_element(times.begin(), times.end());
    if (h == 0.0) h = t_max / 400.0;
    const invsub::RenewalGrid grid =
        invsub::build_renewal_grid(model, h, t_max + 2.0 * h, flags.inversion());

    const std::size_t n = times.size();
    std::vector<std::vector<double>> cov(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            cov[i][j] = cov[j][i] = invsub::covariance(grid, times[i], times[j]);

    if (flags.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                rows.push_back({{"s", times[i]}, {"t", times[j]}, {"cov", cov[i][j]}});
        write_output(flags.out_path, json(rows).dump(2) + "\n");
    } else {
        std::string out = "s,t,cov\n";
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                out += format_double(times[i]);
                out += ',';
                out += format_double(times[j]);
                out += ',';
                out += format_double(cov[i][j]);
                out += '\n';
            }
        write_output(flags.out_path, out);
    }
    return 0;
}

int cmd_htilde(const CommonFlags& flags, const std::vector<double>& s,
               const std::vector<double>& lambdas, double fd_step) {
    const SubordinatorModel model = invsub::model_from_json_file(flags.model_path);
    const invsub::JointPoint point{s, lambdas};
    const double value = invsub::htilde(model, point);
    const bool with_residual = fd_step > 0.0;
    const double residual = with_residual ? invsub::pde_residual(model, point, fd_step) : 0.0;

    if (flags.format == "json") {
        json row;
        row["s"] = s;
        row["lambda"] = lambdas;
        row["value"] = value;
        if (with_residual) row["pde_residual"] = residual;
        write_output(flags.out_path, row.dump(2) + "\n");
    } else {
        std::string header, values;
        for (std::size_t i = 0; i < s.size(); ++i) {
            header += "s" + std::to_string(i + 1) + ",";
            values += format_double(s[i]) + ",";
        }
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            header += "lambda" + std::to_string(i + 1) + ",";
            values += format_double(lambdas[i]) + ",";
        }
        header += "value";
        values += format_double(value);
        if (with_residual) {
            header += ",pde_residual";
            values += "," + format_double(residual);
        }
        write_output(flags.out_path, header + "\n" + values + "\n");
    }
    return 0;
}

int cmd_simulate(const CommonFlags& flags, double T, long paths, std::uint64_t seed,
                 double delta) {
    const SubordinatorModel model = invsub::model_from_json_file(flags.model_path);
    if (!(T > 0.0)) throw ValidationError("horizon --T must be positive");
    if (paths < 1) throw ValidationError("path count must be positive");

    auto node_times = [](const invsub::PathSkeleton& p) {
        std::vector<double> s{0.0};
        if (p.repr == invsub::PathRepr::event_list) {
            s.insert(s.end(), p.times.begin(), p.times.end());
        } else {
            for (std::size_t j = 1; j < p.values.size(); ++j)
                s.push_back(static_cast<double>(j) * p.delta);
        }
        return s;
    };

    if (flags.format == "json") {
        json out = json::array();
        for (long i = 0; i < paths; ++i) {
            const invsub::PathSkeleton p =
                invsub::simulate_path(model, T, seed, static_cast<std::uint64_t>(i), delta);
            json row;
            row["path"] = i;
            row["repr"] =
                p.repr == invsub::PathRepr::event_list ? "event-list" : "increment-grid";
            row["drift"] = p.drift;
            json ss = json::array(), dd = json::array();
            for (double t : node_times(p)) {
                ss.push_back(t);
                dd.push_back(p.value_at(t));
            }
            row["s"] = ss;
            row["D"] = dd;
            out.push_back(row);
        }
        write_output(flags.out_path, out.dump(2) + "\n");
    } else {
        std::string out = "path,s,D\n";
        for (long i = 0; i < paths; ++i) {
            const invsub::PathSkeleton p =
                invsub::simulate_path(model, T, seed, static_cast<std::uint64_t>(i), delta);
            for (double t : node_times(p)) {
                out += std::to_string(i);
                out += ',';
                out += format_double(t);
                out += ',';
                out += format_double(p.value_at(t));
                out += '\n';
            }
        }
        write_output(flags.out_path, out);
    }
    return 0;
}

int cmd_verify(const CommonFlags& flags, long paths, std::uint64_t seed, double delta) {
    const SubordinatorModel model = invsub::model_from_json_file(flags.model_path);
    invsub::VerifyOptions opt;
    if (paths > 0) opt.mc_paths = paths;
    opt.seed = seed;
    opt.delta = delta;
    const std::vector<invsub::CheckResult> results = invsub::run_verify(model, opt);

    if (flags.format == "csv")
        write_output(flags.out_path, invsub::verify_report_csv(results));
    else
        write_output(flags.out_path, invsub::verify_report_json(results) + "\n");

    for (const auto& r : results)
        if (!r.pass) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Statistics of inverse subordinators: renewal function, moments, "
                 "covariance, joint transform, and Monte Carlo simulation"};
    app.require_subcommand(1);

    CommonFlags flags;
    double T = 0.0, h = 0.0, gamma = 0.0, delta = 1e-3, fd_step = 0.0;
    long paths = 0;
    std::uint64_t seed = 1;
    std::vector<double> times, s_args, lambda_args;
    std::vector<int> orders;

    auto add_common = [&](CLI::App* sub) {
        // long-only help so the short -h cannot shadow the --h grid-step option
        sub->set_help_flag("--help", "print help and exit");
        sub->add_option("--model", flags.model_path, "model description JSON file")
            ->required();
        sub->add_option("--out", flags.out_path, "output file (default stdout)");
        return sub->add_option("--format", flags.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto add_inversion = [&](CLI::App* sub) {
        sub->add_option("--method", flags.method, "Laplace inversion method")
            ->check(CLI::IsMember({"talbot", "stehfest"}));
        sub->add_option("--terms", flags.terms, "Gaver-Stehfest term count (even, 8-24)");
    };

    CLI::App* renewal = app.add_subcommand("renewal", "renewal function U on a grid");
    add_common(renewal);
    add_inversion(renewal);
    renewal->add_option("--T", T, "grid horizon")->required();
    renewal->add_option("--h", h, "grid step (default T/400)");

    CLI::App* moment = app.add_subcommand(
        "moment", "joint or fractional moment of the inverse process");
    add_common(moment);
    add_inversion(moment);
    moment->add_option("--t", times, "time coordinates (1 to 3)")->required();
    moment->add_option("--m", orders, "integer order per time coordinate (default 1)");
    moment->add_option("--gamma", gamma, "fractional order (single --t, no --m)");
    moment->add_option("--h", h, "grid step (default max(t)/400)");
    moment->add_option("--paths", paths, "Monte Carlo path count (switches estimator)");
    moment->add_option("--seed", seed, "Monte Carlo seed");
    moment->add_option("--delta", delta, "Monte Carlo increment-grid step");

    CLI::App* cov = app.add_subcommand("covariance", "covariance matrix of E over --t list");
    add_common(cov);
    add_inversion(cov);
    cov->add_option("--t", times, "time coordinates")->required();
    cov->add_option("--h", h, "grid step (default max(t)/400)");

    CLI::App* ht = app.add_subcommand("htilde", "joint transform of the inverse law");
    add_common(ht);
    ht->add_option("--s", s_args, "time coordinates")->required();
    ht->add_option("--lambda", lambda_args, "transform argument per coordinate")->required();
    ht->add_option("--fd-step", fd_step, "also report the PDE residual at this step");

    CLI::App* sim = app.add_subcommand("simulate", "sample paths of the subordinator D");
    add_common(sim);
    sim->add_option("--T", T, "simulation horizon")->required();
    CLI::Option* sim_paths = sim->add_option("--paths", paths, "number of paths");
    sim->add_option("--seed", seed, "stream seed");
    sim->add_option("--delta", delta, "increment-grid step");

    CLI::App* verify = app.add_subcommand("verify", "run the invariant check suite");
    CLI::Option* verify_format = add_common(verify);
    verify->add_option("--paths", paths, "Monte Carlo path count");
    verify->add_option("--seed", seed, "Monte Carlo seed");
    verify->add_option("--delta", delta, "Monte Carlo increment-grid step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(renewal)) return cmd_renewal(flags, T, h);
        if (app.got_subcommand(moment))
            return cmd_moment(flags, times, orders, gamma, h, paths, seed, delta);
        if (app.got_subcommand(cov)) return cmd_covariance(flags, times, h);
        if (app.got_subcommand(ht)) return cmd_htilde(flags, s_args, lambda_args, fd_step);
        if (app.got_subcommand(sim)) {
            if (sim_paths->count() == 0) paths = 1;
            return cmd_simulate(flags, T, paths, seed, delta);
        }
        if (app.got_subcommand(verify)) {
            if (verify_format->count() == 0) flags.format = "json";
            return cmd_verify(flags, paths, seed, delta);
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const invsub::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
