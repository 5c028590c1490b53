#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "invsub-cli-tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = std::string("\"") + INVSUB_CLI + "\" " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out);
    r.err = read_file(err);
    return r;
}

std::string write_model(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / name;
    std::ofstream f(p);
    f << text;
    return p.string();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

// value of the named column in the given CSV data row
std::string csv_field(const std::string& header, const std::string& row,
                      const std::string& name) {
    const auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::istringstream ss(s);
        std::string piece;
        while (std::getline(ss, piece, ',')) out.push_back(piece);
        return out;
    };
    const std::vector<std::string> names = split(header);
    const std::vector<std::string> fields = split(row);
    for (std::size_t i = 0; i < names.size() && i < fields.size(); ++i)
        if (names[i] == name) return fields[i];
    return {};
}

const std::string kDrift = write_model("drift2.json", R"({"family": "drift-only", "drift": 2.0})");
const std::string kCpExp = write_model(
    "cpexp.json", R"({"family": "compound-poisson", "params": {"rate": 1.0, "jumps": {"kind": "exponential", "rate": 1.0}}})");
const std::string kStable =
    write_model("stable.json", R"({"family": "stable", "params": {"alpha": 0.5}})");
const std::string kGamma =
    write_model("gamma.json", R"({"family": "gamma", "params": {"shape": 1.0, "rate": 1.0}})");

}  // namespace

TEST_CASE("renewal grid to stdout") {
    const RunResult r = run("renewal --model " + kDrift + " --T 1");
    CHECK(r.exit_code == 0);
    CHECK(r.err.empty());
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 401);
    CHECK(lines[0] == "t,U");
    CHECK(lines[1] == "0.0025,0.00125");
    CHECK(lines[400] == "1,0.5");

    const RunResult again = run("renewal --model " + kDrift + " --T 1");
    CHECK(again.out == r.out);
}

TEST_CASE("renewal grid as json") {
    const RunResult r = run("renewal --model " + kDrift + " --T 1 --format json");
    CHECK(r.exit_code == 0);
    const nlohmann::json rows = nlohmann::json::parse(r.out);
    REQUIRE(rows.is_array());
    REQUIRE(rows.size() == 400);
    CHECK(rows[0]["t"].get<double>() == 0.0025);
    CHECK(rows[0]["U"].get<double>() == 0.00125);
    CHECK(rows[399]["U"].get<double>() == 0.5);
}

TEST_CASE("output redirection") {
    const fs::path out = work_dir() / "grid.csv";
    fs::remove(out);
    const RunResult r =
        run("renewal --model " + kDrift + " --T 1 --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(lines_of(read_file(out)).size() == 401);
}

TEST_CASE("error reporting and exit codes") {
    const RunResult missing = run("renewal --model /nonexistent.json --T 1");
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("cannot open model file") != std::string::npos);

    const std::string bad =
        write_model("bad_alpha.json", R"({"family": "stable", "params": {"alpha": 1.5}})");
    const RunResult invalid = run("renewal --model " + bad + " --T 1");
    CHECK(invalid.exit_code == 2);
    CHECK(invalid.err.find("stable exponent must lie in (0,1)") != std::string::npos);

    const std::string neg_rate = write_model(
        "neg_rate.json",
        R"({"family": "compound-poisson", "params": {"rate": -1.0, "jumps": {"kind": "exponential", "rate": 1.0}}})");
    const RunResult neg = run("renewal --model " + neg_rate + " --T 1");
    CHECK(neg.exit_code == 2);
    CHECK(neg.err.find("compound-poisson rate must be positive") != std::string::npos);

    CHECK(run("renewal --model " + kDrift + " --T 1 --bogus").exit_code == 2);
    CHECK(run("").exit_code == 2);
    CHECK(run("--help").exit_code == 0);
    CHECK(run("--help").out.find("renewal") != std::string::npos);
}

TEST_CASE("moment subcommand") {
    SUBCASE("grid recursion") {
        const RunResult r = run("moment --model " + kCpExp + " --t 1 --m 2");
        CHECK(r.exit_code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 2);
        CHECK(lines[0] == "t1,value,method");
        CHECK(csv_field(lines[0], lines[1], "method") == "recursion");
        const double v = std::stod(csv_field(lines[0], lines[1], "value"));
        CHECK(v == doctest::Approx(7.0).epsilon(1e-5));
    }

    SUBCASE("two time coordinates") {
        const RunResult r = run("moment --model " + kCpExp + " --t 0.5 --t 1");
        CHECK(r.exit_code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 2);
        CHECK(lines[0] == "t1,t2,value,method");
        const double v = std::stod(csv_field(lines[0], lines[1], "value"));
        CHECK(v == doctest::Approx(5.0).epsilon(1e-5));
    }

    SUBCASE("fractional order") {
        const RunResult r = run("moment --model " + kStable + " --t 1 --gamma 1");
        CHECK(r.exit_code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 2);
        CHECK(csv_field(lines[0], lines[1], "method") == "analytic");
        const double v = std::stod(csv_field(lines[0], lines[1], "value"));
        CHECK(v == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-6));

        CHECK(run("moment --model " + kStable + " --t 1 --gamma 1 --m 2").exit_code == 2);
        CHECK(run("moment --model " + kStable + " --t 1 --t 2 --gamma 1").exit_code == 2);
    }

    SUBCASE("sampling estimator is reproducible") {
        const std::string args =
            "moment --model " + kCpExp + " --t 1 --m 2 --paths 2000 --seed 4";
        const RunResult a = run(args);
        const RunResult b = run(args);
        CHECK(a.exit_code == 0);
        CHECK(a.out == b.out);
        const auto lines = lines_of(a.out);
        CHECK(csv_field(lines[0], lines[1], "method") == "monte-carlo");
        const double v = std::stod(csv_field(lines[0], lines[1], "value"));
        CHECK(v == doctest::Approx(7.0).epsilon(0.25));
    }

    SUBCASE("mismatched orders") {
        CHECK(run("moment --model " + kCpExp + " --t 0.5 --t 1 --m 2").exit_code == 2);
    }
}

TEST_CASE("covariance subcommand") {
    const RunResult r = run("covariance --model " + kDrift + " --t 0.5 --t 1");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 5);
    CHECK(lines[0] == "s,t,cov");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const double v = std::stod(csv_field(lines[0], lines[i], "cov"));
        CHECK(std::abs(v) <= 1e-9);
    }
}

TEST_CASE("htilde subcommand") {
    const RunResult r = run("htilde --model " + kGamma + " --s 1 --lambda 1");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "s1,lambda1,value");
    CHECK(std::stod(csv_field(lines[0], lines[1], "value")) ==
          doctest::Approx(0.5).epsilon(1e-12));

    const RunResult with_residual =
        run("htilde --model " + kGamma + " --s 1 --lambda 1 --fd-step 1e-4");
    const auto rl = lines_of(with_residual.out);
    REQUIRE(rl.size() == 2);
    CHECK(rl[0] == "s1,lambda1,value,pde_residual");
    CHECK(std::stod(csv_field(rl[0], rl[1], "pde_residual")) <= 1e-5);

    const RunResult two =
        run("htilde --model " + kGamma + " --s 0.5 --s 1 --lambda 1 --lambda 2");
    CHECK(lines_of(two.out)[0] == "s1,s2,lambda1,lambda2,value");
}

TEST_CASE("simulate subcommand") {
    const RunResult r = run("simulate --model " + kCpExp + " --T 2 --paths 2 --seed 3");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() >= 3);
    CHECK(lines[0] == "path,s,D");
    CHECK(lines[1].substr(0, 4) == "0,0,");

    const RunResult j =
        run("simulate --model " + kStable + " --T 0.01 --seed 3 --format json");
    const nlohmann::json rows = nlohmann::json::parse(j.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0]["repr"] == "increment-grid");
    CHECK(rows[0]["s"].size() == rows[0]["D"].size());
}

TEST_CASE("verify subcommand") {
    const RunResult r = run("verify --model " + kDrift + " --paths 4000");
    CHECK(r.exit_code == 0);
    const nlohmann::json rows = nlohmann::json::parse(r.out);
    REQUIRE(rows.is_array());
    CHECK(rows.size() >= 10);
    for (const auto& row : rows) {
        CHECK(row.size() == 5);
        CHECK(row.contains("check"));
        CHECK(row.contains("module"));
        CHECK(row["status"] == "pass");
        CHECK(row.contains("observed"));
        CHECK(row.contains("tolerance"));
    }

    const RunResult csv = run("verify --model " + kDrift + " --paths 4000 --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(lines_of(csv.out)[0] == "check,module,status,observed,tolerance");
}
