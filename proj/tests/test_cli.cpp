#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#ifndef GAUGEME_CLI_PATH
#error "GAUGEME_CLI_PATH must point at the built binary"
#endif

namespace {

struct run_result {
    int exit_code = -1;
    std::string output;
};

run_result run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(GAUGEME_CLI_PATH) + " " + args + " 2>&1";
    run_result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
        r.output.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

int column_index(const std::vector<std::string>& header, const std::string& prefix) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i].rfind(prefix, 0) == 0)
            return static_cast<int>(i);
    return -1;
}

} // namespace

TEST_CASE("rates subcommand reports the exact rotating-wave null result") {
    const auto r = run_cli("rates --scenario lab_ion --gauge rotating_wave --format csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 2);
    const int ap = column_index(rows[0], "a_plus");
    const int babs = column_index(rows[0], "b_abs");
    const int am = column_index(rows[0], "a_minus");
    REQUIRE(ap >= 0);
    REQUIRE(babs >= 0);
    REQUIRE(am >= 0);
    CHECK(std::stod(rows[1][ap]) == 0.0);
    CHECK(std::stod(rows[1][babs]) == 0.0);
    CHECK(std::stod(rows[1][am]) > 0.0);
}

TEST_CASE("reruns are byte-identical") {
    const std::string cmd = "rates --scenario lab_ion --gauge minimal_coupling --format csv";
    const auto a = run_cli(cmd);
    const auto b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
}

TEST_CASE("usage and validation errors use distinct exit codes") {
    CHECK(run_cli("frobnicate").exit_code == 2);          // unknown subcommand
    CHECK(run_cli("rates").exit_code == 2);               // missing --scenario
    CHECK(run_cli("rates --scenario lab_ion --gauge coulomb").exit_code == 2);
    CHECK(run_cli("rates --scenario no_such_preset").exit_code == 3);
    CHECK(run_cli("trajectories --scenario lab_ion --gauge rotating_wave --n-traj 0")
              .exit_code == 2);

    // omega0 * delta_t below the coarse-graining bound: validation failure
    const std::string path = "cli_bad_scenario.scn";
    {
        std::ofstream out(path);
        out << "name = too_fast\ngauge = minimal_coupling\nomega0 = 2e15\n"
            << "gamma = 1e9\ndelta_t_s = 1e-14\n";
    }
    CHECK(run_cli("rates --scenario " + path).exit_code == 3);
    std::remove(path.c_str());
}

TEST_CASE("steady subcommand matches the stationary formulas") {
    const auto r = run_cli("steady --scenario lab_ion --gauge minimal_coupling --format csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 2);
    const int tot = column_index(rows[0], "emission_total");
    const int nb = column_index(rows[0], "emission_narrowband");
    const int r22 = column_index(rows[0], "rho22");
    REQUIRE(tot >= 0);
    REQUIRE(nb >= 0);
    REQUIRE(r22 >= 0);
    const double total = std::stod(rows[1][tot]);
    CHECK(total > 1.0);
    CHECK(total < 2.0);
    CHECK(std::stod(rows[1][nb]) == doctest::Approx(0.5 * total).epsilon(1e-12));
    CHECK(std::stod(rows[1][r22]) == doctest::Approx(7.06e-8).epsilon(0.05));
}

TEST_CASE("evolve subcommand emits a trace-preserving grid") {
    const auto r = run_cli("evolve --scenario lab_ion --gauge rotating_wave "
                           "--t-final 3e-7 --points 11 --format csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 12);
    const int r11 = column_index(rows[0], "rho11");
    const int r22 = column_index(rows[0], "rho22");
    REQUIRE(r11 >= 0);
    REQUIRE(r22 >= 0);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][r11]) + std::stod(rows[i][r22]) ==
              doctest::Approx(1.0).epsilon(1e-12));
    // excited-state default decays toward the rotating-wave ground state
    CHECK(std::stod(rows[1][r22]) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::stod(rows[11][r22]) < 0.1);
}

TEST_CASE("spectral subcommand records per-point singularities without aborting") {
    const auto r = run_cli("spectral --gauge minimal_coupling --omega0 2e15 "
                           "--from 1e15 --to 3e15 --points 3 --format csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 4); // header + 3 points, midpoint is exactly omega0
    const int err = column_index(rows[0], "error");
    REQUIRE(err >= 0);
    CHECK(rows[1][err].empty());
    CHECK_FALSE(rows[2][err].empty()); // singular point flagged
    CHECK(rows[3][err].empty());
}

TEST_CASE("sweep subcommand scans a parameter without stopping at bad points") {
    const auto r = run_cli("sweep --scenario lab_ion --gauge minimal_coupling "
                           "--variable omega_max --from 3.7e16 --to 3.7e19 --points 4 --log "
                           "--format csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 5);
    const int iss = column_index(rows[0], "emission_total");
    REQUIRE(iss >= 0);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][iss]) > 0.0);
}

TEST_CASE("lindblad-check subcommand evaluates the positivity condition") {
    const auto r = run_cli("lindblad-check --scenario lab_ion --gauge multipolar --format csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.output);
    REQUIRE(rows.size() == 2);
    const int holds = column_index(rows[0], "positivity_holds");
    const int l1 = column_index(rows[0], "lambda1");
    REQUIRE(holds >= 0);
    REQUIRE(l1 >= 0);
    CHECK(rows[1][holds] == "1");
    CHECK(std::stod(rows[1][l1]) > 0.0);
}

TEST_CASE("trajectories are reproducible and honour the thread override") {
    const std::string cmd = "trajectories --scenario lab_ion --gauge rotating_wave "
                            "--n-traj 64 --t-final 3e-7 --seed 12345 --points 5 --format csv";
    const auto one = run_cli(cmd, "GAUGE_ME_THREADS=1");
    const auto two = run_cli(cmd, "GAUGE_ME_THREADS=2");
    REQUIRE(one.exit_code == 0);
    CHECK(one.output == two.output);

    const auto other = run_cli("trajectories --scenario lab_ion --gauge rotating_wave "
                               "--n-traj 64 --t-final 3e-7 --seed 54321 --points 5 "
                               "--format csv");
    CHECK(other.output != one.output);
}

TEST_CASE("preset-dump emits a loadable scenario file") {
    const auto r = run_cli("preset-dump --scenario quantum_dot");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("name = quantum_dot") != std::string::npos);
    CHECK(r.output.find("omega0 = 2e+15") != std::string::npos);
    CHECK(r.output.find("delta_t_s = 3e-10") != std::string::npos);
}

TEST_CASE("json output is available for scalar reports") {
    const auto r = run_cli("rates --scenario lab_ion --gauge rotating_wave --format json");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("\"a_plus\"") != std::string::npos);
    CHECK(r.output.find("\"a_minus\"") != std::string::npos);
    CHECK(r.output.find("\"scenario\"") != std::string::npos);
}

TEST_CASE("output lands in --out when requested") {
    const std::string path = "cli_out_test.csv";
    const auto r = run_cli("rates --scenario lab_ion --gauge rotating_wave --format csv --out " +
                           path);
    REQUIRE(r.exit_code == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("a_plus") != std::string::npos);
    in.close();
    std::remove(path.c_str());
}
