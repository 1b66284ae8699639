// test_cli.cpp: Command-line runs, output formats and exit codes

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbm/cli.hpp"
#include "qbm/errors.hpp"

using namespace qbm;
using namespace qbm::cli;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_args(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"qbm"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) {
        argv.push_back(s.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_config(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / ("qbm_test_" + name + ".json");
    std::ofstream(path) << body;
    return path.string();
}

const char* beryllium_json =
    R"({"mass_kg": 1.494e-26, "zeta": 8.964e-23, "tau_s": 0, "sigma_m": 1e-10, "d_m": 1e-2, "temperature_K": 0)";

std::string config(const std::string& extra) { return std::string(beryllium_json) + extra + "}"; }

const char* srt_json =
    R"({"mass_kg": 1.0, "zeta": 1.0, "tau_s": 0.01, "sigma_m": 1.0, "d_m": 20.0, "temperature_K": 0)";

std::string srt_config(const std::string& extra) { return std::string(srt_json) + extra + "}"; }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        rows.push_back(cells);
    }
    return rows;
}

double to_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    REQUIRE(ec == std::errc());
    REQUIRE(ptr == s.data() + s.size());
    return v;
}

} // namespace

TEST_CASE("command names") {
    for (auto c : {Command::msd, Command::commutator, Command::width, Command::attenuation, Command::profile,
                   Command::tau_d, Command::sweep, Command::vfun}) {
        CHECK(parse_command(to_string(c)) == c);
    }
    CHECK_THROWS_AS(parse_command("decohere"), ValidationError);
}

TEST_CASE("grid parsing") {
    const auto g = GridSpec::parse("1e-3,1e3,7,log");
    const auto pts = g.points();
    REQUIRE(pts.size() == 7);
    CHECK(pts.front() == 1e-3);
    CHECK(pts.back() == 1e3);
    CHECK(pts[3] == doctest::Approx(1.0).epsilon(1e-14));
    const auto lin = GridSpec::parse("0,1,2,lin").points();
    CHECK(lin == std::vector<double>{0.0, 1.0});
    CHECK_THROWS_AS(GridSpec::parse("0,1,1,lin"), ValidationError);
    CHECK_THROWS_AS(GridSpec::parse("0,1,5,log"), ValidationError);
    CHECK_THROWS_AS(GridSpec::parse("1,0,5,lin"), ValidationError);
    CHECK_THROWS_AS(GridSpec::parse("0,1,2.5,lin"), ValidationError);
    CHECK_THROWS_AS(GridSpec::parse("0,1,5"), ValidationError);
    CHECK_THROWS_AS(GridSpec::parse("0,x,5,lin"), ValidationError);
    CHECK_THROWS_AS(GridSpec::parse("0,1,5,cubic"), ValidationError);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 6.02214076e23, 1e-300, -2.5e-17, 5e-324}) {
        CHECK(to_double(format_number(v)) == v);
    }
    CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("vfun over a log grid") {
    const auto r = run_args({"--command", "vfun", "--grid", "1e-3,1e3,7,log"});
    CHECK(r.code == exit_ok);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0] == std::vector<std::string>{"x", "V", "method", "est_error"});
    CHECK(to_double(rows[4][0]) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(to_double(rows[4][1]) == doctest::Approx(0.526802).epsilon(1e-6));
}

TEST_CASE("msd with two grid points starts at zero") {
    const auto path = write_config("msd", srt_config(R"(, "command": "msd", "grid": "0,1,2,lin")"));
    const auto r = run_args({"--config", path});
    CHECK(r.code == exit_ok);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"t_s", "t_reduced", "s_m2", "s_reduced", "method", "status"});
    CHECK(rows[1][2] == "0");
    CHECK(rows[1][3] == "0");
    CHECK(to_double(rows[2][3]) > 0.0);
    CHECK(rows[2][4] == "closed_form");
}

TEST_CASE("finite temperature msd uses quadrature") {
    const auto path =
        write_config("msd_hot", R"({"mass_kg": 1.0, "zeta": 1.0, "tau_s": 0.01, "sigma_m": 1.0, "d_m": 20.0,
                                    "temperature_K": 1e-11, "command": "msd", "grid": "0.1,1,3,lin"})");
    const auto r = run_args({"--config", path});
    CHECK(r.code == exit_ok);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[1][4] == "quadrature");
    CHECK(rows[1][5] == "ok");
}

TEST_CASE("tau-d for the beryllium example") {
    const auto path = write_config("be", config(R"(, "command": "tau-d", "output": "json")"));
    const auto r = run_args({"--config", path});
    CHECK(r.code == exit_ok);
    const auto doc = nlohmann::json::parse(r.out);
    const auto& row = doc.at("rows").at(0);
    CHECK(row.at("tau0_s").get<double>() == doctest::Approx(7.7e-16).epsilon(0.01));
    CHECK(row.at("tau_d_s").get<double>() < row.at("tau0_s").get<double>());
    CHECK(row.at("tau_d_approx_s").is_null());
    CHECK(row.at("ordering_holds").get<bool>());
    CHECK(doc.at("status") == "ok");
}

TEST_CASE("other commands produce their documented columns") {
    struct Case {
        const char* command;
        const char* extra;
        std::vector<std::string> header;
    };
    const std::vector<Case> cases{
        {"commutator", "", {"t_s", "t_reduced", "C_m2", "C_reduced"}},
        {"width", "", {"t_s", "t_reduced", "w2_m2", "w2_reduced", "status"}},
        {"attenuation", "", {"t_s", "t_reduced", "a", "a_short", "a_intermediate", "status"}},
        {"profile", R"(, "time_s": 0.5)", {"x_m", "x_reduced", "P_per_m", "P_reduced"}},
    };
    for (const auto& c : cases) {
        const auto path = write_config(c.command, srt_config(std::string(R"(, "command": ")") + c.command
                                                             + R"(", "grid": "0.001,1,4,log")" + c.extra));
        const auto r = run_args({"--config", path});
        CHECK(r.code == exit_ok);
        const auto rows = parse_csv(r.out);
        REQUIRE(rows.size() == 5);
        CHECK(rows[0] == c.header);
    }
}

TEST_CASE("attenuation row leaves out-of-window formulas empty") {
    const auto path = write_config("att", srt_config(R"(, "command": "attenuation", "grid": "0,4,2,lin")"));
    const auto r = run_args({"--config", path});
    CHECK(r.code == exit_ok);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][2] == "1");
    CHECK(rows[2][4].empty());
}

TEST_CASE("command-line flags override the config") {
    const auto path = write_config("override", srt_config(R"(, "command": "msd", "grid": "0,1,2,lin")"));
    const auto r = run_args({"--config", path, "--command", "commutator", "--grid", "0,2,3,lin", "--output", "json"});
    CHECK(r.code == exit_ok);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("command") == "commutator");
    CHECK(doc.at("rows").size() == 3);
}

TEST_CASE("validation failures exit with 2") {
    const auto under = write_config(
        "under", R"({"mass_kg": 1, "zeta": 1, "tau_s": 0.3, "sigma_m": 1, "d_m": 10, "temperature_K": 0,
                     "command": "msd", "grid": "0,1,2,lin"})");
    auto r = run_args({"--config", under});
    CHECK(r.code == exit_validation);
    CHECK(r.err.find("4*zeta*tau/m < 1") != std::string::npos);
    CHECK(r.out.empty());

    r = run_args({"--config", write_config("bad", "{\"mass_kg\": ")});
    CHECK(r.code == exit_validation);
    CHECK(r.err.find("malformed JSON") != std::string::npos);

    r = run_args({"--config", write_config("unknown", srt_config(R"(, "command": "msd", "colour": 1)"))});
    CHECK(r.code == exit_validation);
    CHECK(r.err.find("colour") != std::string::npos);

    r = run_args({"--config", write_config("zeta", R"({"mass_kg": 1, "zeta": -1, "tau_s": 0, "sigma_m": 1,
                                                       "d_m": 10, "temperature_K": 0, "command": "tau-d"})")});
    CHECK(r.code == exit_validation);
    CHECK(r.err.find("zeta") != std::string::npos);

    r = run_args({"--config", write_config("nogrid", srt_config(R"(, "command": "msd")"))});
    CHECK(r.code == exit_validation);
    CHECK(r.err.find("grid") != std::string::npos);

    r = run_args({"--command", "msd", "--grid", "0,1,2,lin"});
    CHECK(r.code == exit_validation);

    r = run_args({"--command", "vfun"});
    CHECK(r.code == exit_validation);

    r = run_args({"--command", "vfun", "--grid", "0,1,2,lin", "--bogus"});
    CHECK(r.code == exit_validation);

    r = run_args({"--config", "/nonexistent/qbm.json"});
    CHECK(r.code == exit_validation);

    r = run_args({"--command", "vfun", "--grid", "0,1,2,lin", "--rel-tol", "-1"});
    CHECK(r.code == exit_validation);
}

TEST_CASE("separation below three widths warns") {
    const auto path = write_config(
        "close", R"({"mass_kg": 1, "zeta": 1, "tau_s": 0.01, "sigma_m": 1, "d_m": 2, "temperature_K": 0,
                     "command": "commutator", "grid": "0,1,2,lin"})");
    const auto r = run_args({"--config", path});
    CHECK(r.code == exit_ok);
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("quadrature failure exits with 3 and flags rows") {
    const auto path =
        write_config("fail", R"({"mass_kg": 1.0, "zeta": 1.0, "tau_s": 1e-6, "sigma_m": 1.0, "d_m": 20.0,
                                 "temperature_K": 1e-10, "command": "msd", "grid": "1,100,2,lin",
                                 "rel_tol": 1e-15, "abs_tol": 1e-300})");
    const auto r = run_args({"--config", path});
    CHECK(r.code == exit_numerical);
    CHECK(r.out.find("failed") != std::string::npos);
    CHECK(r.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("tau-d without a crossing exits with 3") {
    const auto path = write_config(
        "nocross", R"({"mass_kg": 1, "zeta": 1, "tau_s": 0.1, "sigma_m": 1, "d_m": 0.01, "temperature_K": 0,
                       "command": "tau-d"})");
    const auto r = run_args({"--config", path});
    CHECK(r.code == exit_numerical);
}

TEST_CASE("sweeps") {
    SUBCASE("separation doubling halves tau0") {
        const auto path = write_config(
            "sweep_d", config(R"(, "command": "sweep", "sweep_command": "tau-d", "sweep": {"d_m": [1e-2, 2e-2]})"));
        const auto r = run_args({"--config", path});
        CHECK(r.code == exit_ok);
        const auto rows = parse_csv(r.out);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0][0] == "parameter");
        CHECK(rows[0][1] == "parameter_value");
        CHECK(rows[0][2] == "tau0_s");
        CHECK(rows[1][0] == "d_m");
        CHECK(to_double(rows[2][2]) == doctest::Approx(0.5 * to_double(rows[1][2])).epsilon(1e-14));
    }
    SUBCASE("tau_d grows towards tau0 with the relaxation time") {
        const auto path = write_config(
            "sweep_tau", R"({"mass_kg": 1.054571817e-34, "zeta": 1.054571817e-34, "sigma_m": 2, "d_m": 2e5,
                             "temperature_K": 0, "tau_s": 1e-4, "command": "sweep", "sweep_command": "tau-d",
                             "sweep": {"tau_s": [1e-4, 1e-3, 1e-2]}})");
        const auto r = run_args({"--config", path});
        CHECK(r.code == exit_ok);
        const auto rows = parse_csv(r.out);
        REQUIRE(rows.size() == 4);
        double prev = 0.0;
        for (int i = 1; i <= 3; ++i) {
            const double tau_d = to_double(rows[i][4]);
            CHECK(tau_d > prev);
            CHECK(tau_d < to_double(rows[i][2]));
            prev = tau_d;
        }
    }
    SUBCASE("zero-temperature sweep matches the plain command") {
        const auto base = srt_config(R"(, "grid": "0.01,1,5,log")");
        const auto swept = write_config(
            "sweep_T", srt_config(R"(, "grid": "0.01,1,5,log", "command": "sweep", "sweep_command": "msd",
                                    "sweep": {"temperature_K": [0]})"));
        const auto plain = write_config("plain_T", srt_config(R"(, "grid": "0.01,1,5,log", "command": "msd")"));
        const auto a = parse_csv(run_args({"--config", swept}).out);
        const auto b = parse_csv(run_args({"--config", plain}).out);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 1; i < a.size(); ++i) {
            CHECK(std::vector<std::string>(a[i].begin() + 2, a[i].end()) == b[i]);
        }
    }
    SUBCASE("more than one ranged parameter is rejected") {
        const auto path = write_config(
            "sweep_two", config(R"(, "command": "sweep", "sweep": {"d_m": [1e-2], "zeta": [1e-22]})"));
        CHECK(run_args({"--config", path}).code == exit_validation);
    }
    SUBCASE("non-sweepable parameter is rejected") {
        const auto path = write_config("sweep_mass", config(R"(, "command": "sweep", "sweep": {"mass_kg": [1]})"));
        CHECK(run_args({"--config", path}).code == exit_validation);
    }
}

TEST_CASE("runs are deterministic and numbers round-trip") {
    const auto path = write_config("det", srt_config(R"(, "command": "attenuation", "grid": "1e-4,10,25,log")"));
    const auto a = run_args({"--config", path});
    const auto b = run_args({"--config", path});
    CHECK(a.code == exit_ok);
    CHECK(a.out == b.out);
    const auto rows = parse_csv(a.out);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            if (!rows[i][j].empty()) {
                const double v = to_double(rows[i][j]);
                CHECK(format_number(v) == rows[i][j]);
            }
        }
    }
}

TEST_CASE("installed binary follows the same exit-code contract") {
    const std::string binary = QBM_CLI_PATH;
    const auto out = (std::filesystem::temp_directory_path() / "qbm_test_binary_out.csv").string();
    const std::string ok = binary + " --command vfun --grid 0.5,2,3,lin > " + out + " 2>&1";
    CHECK(std::system(ok.c_str()) == 0);
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,V,method,est_error");
    const std::string bad = binary + " --command nonsense > " + out + " 2>&1";
    const int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == exit_validation);
}
