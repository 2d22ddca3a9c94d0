// Command-line front end. Subcommands cover the library surface: emission
// rates, steady states, master-equation evolution, band sweeps, spectral
// weights, positivity diagnostics, and quantum-jump trajectories.
//
// Exit codes: 0 success, 2 usage error, 3 invalid input, 4 numerical failure.

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gaugeme/dynamics.hpp"
#include "gaugeme/errors.hpp"
#include "gaugeme/gauge.hpp"
#include "gaugeme/lindblad.hpp"
#include "gaugeme/rates.hpp"
#include "gaugeme/scenarios.hpp"

namespace {

using namespace gaugeme;
using nlohmann::json;

// Shortest round-trip decimal form, so repeated runs are byte-identical.
std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Error messages land in CSV cells; keep them one-cell wide.
std::string cell(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

struct output_options {
    std::string format = "csv";
    std::string path; // empty = stdout
};

void emit(const output_options& out, const std::string& text) {
    if (out.path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw validation_error("cannot open output file '" + out.path + "'");
    f << text;
}

// --scenario accepts either a file path or a preset name; files win.
scenario resolve_scenario(const std::string& spec) {
    {
        std::ifstream probe(spec);
        if (probe.good()) return load_scenario(spec);
    }
    try {
        return preset(spec);
    } catch (const lookup_error&) {
        std::string msg = "no scenario file or preset named '" + spec + "'; presets:";
        for (const auto& n : preset_names()) msg += " " + n;
        throw validation_error(msg);
    }
}

struct gauge_override {
    std::string gauge;  // empty = keep the scenario's gauge
    std::string family; // custom alpha family tag
};

gauge_representation gauge_by_name(const std::string& name, const std::string& family) {
    switch (gauge_kind_from_string(name)) {
    case gauge_kind::minimal_coupling: return gauge_representation::minimal_coupling();
    case gauge_kind::multipolar: return gauge_representation::multipolar();
    case gauge_kind::rotating_wave: return gauge_representation::rotating_wave();
    case gauge_kind::custom: break;
    }
    if (family.empty())
        throw validation_error("--gauge custom requires --alpha-family");
    return gauge_representation::custom_from_family(family);
}

void apply_gauge(scenario& sc, const gauge_override& ov) {
    if (ov.gauge.empty()) {
        if (!ov.family.empty())
            throw validation_error("--alpha-family requires --gauge custom");
        return;
    }
    if (ov.gauge == "custom" && ov.family.empty()) {
        if (sc.gauge.kind == gauge_kind::custom) return; // keep the scenario's family
        throw validation_error("--gauge custom requires --alpha-family");
    }
    sc.gauge = gauge_by_name(ov.gauge, ov.family);
}

struct common_opts {
    std::string scenario_spec;
    gauge_override gauge;
    output_options out;
    double rel_tol = 1e-6;
};

void add_common(CLI::App* cmd, common_opts& c, bool with_scenario = true) {
    if (with_scenario)
        cmd->add_option("--scenario", c.scenario_spec, "preset name or scenario file path")
            ->required();
    cmd->add_option("--gauge", c.gauge.gauge, "override the scenario's gauge")
        ->check(CLI::IsMember({"minimal_coupling", "multipolar", "rotating_wave", "custom"}));
    cmd->add_option("--alpha-family", c.gauge.family,
                    "custom gauge family: 'rotating_wave' or 'constant:<c>'");
    cmd->add_option("--format", c.out.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", c.out.path, "write the report to this file instead of stdout");
    cmd->add_option("--rel-tol", c.rel_tol, "quadrature relative tolerance (default 1e-6)");
}

rate_options make_rate_options(const common_opts& c) {
    rate_options ro;
    ro.rel_tol = c.rel_tol;
    return ro;
}

// Scenario + gauge override + rate set, with warnings on stderr as comments.
std::pair<scenario, rate_set> resolve_and_rates(const common_opts& c) {
    scenario sc = resolve_scenario(c.scenario_spec);
    apply_gauge(sc, c.gauge);
    for (const auto& w : sc.params.warnings()) std::cerr << "# warning: " << w << "\n";
    rate_set rs = compute_rate_set(sc.params, sc.gauge, make_rate_options(c));
    return {std::move(sc), rs};
}

density_matrix initial_state(const std::string& name) {
    return name == "ground" ? density_matrix::ground() : density_matrix::excited();
}

double grid_point(double from, double to, int i, int n, bool log_spaced) {
    if (n <= 1) return from;
    const double s = static_cast<double>(i) / (n - 1);
    return log_spaced ? from * std::pow(to / from, s) : from + (to - from) * s;
}

// ---------------------------------------------------------------- rates ---

void run_rates(const common_opts& c) {
    auto [sc, rs] = resolve_and_rates(c);
    if (c.out.format == "json") {
        json j;
        j["scenario"] = sc.name;
        j["gauge"] = to_string(sc.gauge.kind);
        if (sc.gauge.kind == gauge_kind::custom) j["alpha_family"] = sc.gauge.family;
        j["a_minus"] = rs.a_minus;
        j["a_plus"] = rs.a_plus;
        j["b_re"] = rs.b.real();
        j["b_im"] = rs.b.imag();
        j["b_abs"] = std::abs(rs.b);
        j["omega0_tilde"] = rs.omega0_tilde;
        emit(c.out, j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "scenario,gauge,a_minus_per_s,a_plus_per_s,b_abs_per_s,b_arg_rad,"
          "omega0_tilde_rad_per_s\n";
    os << sc.name << ',' << to_string(sc.gauge.kind) << ',' << fmt(rs.a_minus) << ','
       << fmt(rs.a_plus) << ',' << fmt(std::abs(rs.b)) << ',' << fmt(std::arg(rs.b)) << ','
       << fmt(rs.omega0_tilde) << '\n';
    emit(c.out, os.str());
}

// --------------------------------------------------------------- steady ---

void run_steady(const common_opts& c) {
    auto [sc, rs] = resolve_and_rates(c);
    const density_matrix ss = steady_state(rs);
    const steady_emission em = steady_emission_rate(rs);
    if (c.out.format == "json") {
        json j;
        j["scenario"] = sc.name;
        j["gauge"] = to_string(sc.gauge.kind);
        j["rho11"] = ss.rho11;
        j["rho22"] = ss.rho22;
        j["emission_total"] = em.total;
        j["emission_narrowband"] = em.narrowband;
        emit(c.out, j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "scenario,gauge,rho11,rho22,emission_total_per_s,emission_narrowband_per_s\n";
    os << sc.name << ',' << to_string(sc.gauge.kind) << ',' << fmt(ss.rho11) << ','
       << fmt(ss.rho22) << ',' << fmt(em.total) << ',' << fmt(em.narrowband) << '\n';
    emit(c.out, os.str());
}

// --------------------------------------------------------------- evolve ---

void run_evolve(const common_opts& c, double t_final, int points, const std::string& initial) {
    auto [sc, rs] = resolve_and_rates(c);
    const evolve_result res = evolve(initial_state(initial), rs, t_final, points);
    if (c.out.format == "json") {
        json j;
        j["scenario"] = sc.name;
        j["gauge"] = to_string(sc.gauge.kind);
        j["frame"] = res.rotating_frame ? "rotating" : "lab";
        j["dropped_b_bound"] = res.dropped_b_bound;
        j["times"] = res.times;
        json r11 = json::array(), r22 = json::array(), re12 = json::array(),
             im12 = json::array();
        for (const auto& st : res.states) {
            r11.push_back(st.rho11);
            r22.push_back(st.rho22);
            re12.push_back(st.rho12.real());
            im12.push_back(st.rho12.imag());
        }
        j["rho11"] = std::move(r11);
        j["rho22"] = std::move(r22);
        j["re_rho12"] = std::move(re12);
        j["im_rho12"] = std::move(im12);
        emit(c.out, j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "# scenario = " << sc.name << ", gauge = " << to_string(sc.gauge.kind) << "\n";
    os << "# frame = " << (res.rotating_frame ? "rotating" : "lab")
       << ", dropped_b_bound = " << fmt(res.dropped_b_bound) << "\n";
    os << "time_s,rho11,rho22,re_rho12,im_rho12\n";
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        const auto& st = res.states[i];
        os << fmt(res.times[i]) << ',' << fmt(st.rho11) << ',' << fmt(st.rho22) << ','
           << fmt(st.rho12.real()) << ',' << fmt(st.rho12.imag()) << '\n';
    }
    emit(c.out, os.str());
}

// ---------------------------------------------------------------- sweep ---

std::string sweep_column(const std::string& variable) {
    if (variable == "omega_max") return "omega_max_rad_per_s";
    if (variable == "omega_min") return "omega_min_rad_per_s";
    if (variable == "delta_t") return "delta_t_s";
    return "gamma_per_s";
}

void run_sweep(const common_opts& c, const std::string& variable, double from, double to,
               int points, bool log_spaced) {
    if (log_spaced && (from <= 0.0 || to <= 0.0))
        throw validation_error("--log requires strictly positive --from and --to");
    scenario sc = resolve_scenario(c.scenario_spec);
    apply_gauge(sc, c.gauge);
    const rate_options ro = make_rate_options(c);

    json rows_json = json::array();
    std::ostringstream os;
    os << sweep_column(variable)
       << ",error,a_minus_per_s,a_plus_per_s,b_abs_per_s,rho22,emission_total_per_s,"
          "emission_narrowband_per_s\n";
    for (int i = 0; i < points; ++i) {
        const double v = grid_point(from, to, i, points, log_spaced);
        physical_params p = sc.params;
        if (variable == "omega_max") p.omega_max = v;
        else if (variable == "omega_min") p.omega_min = v;
        else if (variable == "delta_t") p.delta_t = v;
        else p.gamma = v;
        try {
            const rate_set rs = compute_rate_set(p, sc.gauge, ro);
            const density_matrix ss = steady_state(rs);
            const steady_emission em = steady_emission_rate(rs);
            os << fmt(v) << ",," << fmt(rs.a_minus) << ',' << fmt(rs.a_plus) << ','
               << fmt(std::abs(rs.b)) << ',' << fmt(ss.rho22) << ',' << fmt(em.total) << ','
               << fmt(em.narrowband) << '\n';
            json row;
            row[sweep_column(variable)] = v;
            row["a_minus"] = rs.a_minus;
            row["a_plus"] = rs.a_plus;
            row["b_abs"] = std::abs(rs.b);
            row["rho22"] = ss.rho22;
            row["emission_total"] = em.total;
            row["emission_narrowband"] = em.narrowband;
            rows_json.push_back(std::move(row));
        } catch (const validation_error& e) {
            os << fmt(v) << ',' << cell(e.what()) << ",,,,,,\n";
            rows_json.push_back({{sweep_column(variable), v}, {"error", e.what()}});
        } catch (const numerical_error& e) {
            os << fmt(v) << ',' << cell(e.what()) << ",,,,,,\n";
            rows_json.push_back({{sweep_column(variable), v}, {"error", e.what()}});
        }
    }
    if (c.out.format == "json") {
        json j;
        j["scenario"] = sc.name;
        j["gauge"] = to_string(sc.gauge.kind);
        j["rows"] = std::move(rows_json);
        emit(c.out, j.dump(2) + "\n");
    } else {
        emit(c.out, os.str());
    }
}

// ------------------------------------------------------------- spectral ---

void run_spectral(const output_options& out, const std::string& gauge_name,
                  const std::string& family, double omega0, double from, double to, int points) {
    const gauge_representation g = gauge_by_name(gauge_name, family);
    json rows_json = json::array();
    std::ostringstream os;
    os << "omega_rad_per_s,error,f_minus,f_plus\n";
    for (int i = 0; i < points; ++i) {
        const double w = grid_point(from, to, i, points, false);
        try {
            const double fm = spectral_weight(g, omega0, w, -1);
            const double fp = spectral_weight(g, omega0, w, +1);
            os << fmt(w) << ",," << fmt(fm) << ',' << fmt(fp) << '\n';
            rows_json.push_back({{"omega", w}, {"f_minus", fm}, {"f_plus", fp}});
        } catch (const validation_error& e) {
            os << fmt(w) << ',' << cell(e.what()) << ",,\n";
            rows_json.push_back({{"omega", w}, {"error", e.what()}});
        }
    }
    if (out.format == "json") {
        json j;
        j["gauge"] = gauge_name;
        j["omega0"] = omega0;
        j["rows"] = std::move(rows_json);
        emit(out, j.dump(2) + "\n");
    } else {
        emit(out, os.str());
    }
}

// -------------------------------------------------------- lindblad-check ---

void run_lindblad_check(const common_opts& c) {
    auto [sc, rs] = resolve_and_rates(c);
    const dissipator_matrix dis = build_dissipator(rs);
    const positivity_report rep = positivity_check(dis);
    const lindblad_decomposition dec = diagonalize(dis);
    if (c.out.format == "json") {
        json j;
        j["scenario"] = sc.name;
        j["gauge"] = to_string(sc.gauge.kind);
        j["a_minus"] = rs.a_minus;
        j["a_plus"] = rs.a_plus;
        j["b_abs"] = std::abs(rs.b);
        j["det"] = rep.det;
        j["ratio"] = rep.ratio;
        j["positivity_holds"] = rep.holds;
        j["lambda"] = {dec.lambda[0], dec.lambda[1]};
        emit(c.out, j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "scenario,gauge,a_minus_per_s,a_plus_per_s,b_abs_per_s,det,ratio,positivity_holds,"
          "lambda1_per_s,lambda2_per_s\n";
    os << sc.name << ',' << to_string(sc.gauge.kind) << ',' << fmt(rs.a_minus) << ','
       << fmt(rs.a_plus) << ',' << fmt(std::abs(rs.b)) << ',' << fmt(rep.det) << ','
       << fmt(rep.ratio) << ',' << (rep.holds ? '1' : '0') << ',' << fmt(dec.lambda[0]) << ','
       << fmt(dec.lambda[1]) << '\n';
    emit(c.out, os.str());
}

// --------------------------------------------------------- trajectories ---

void run_trajectories(const common_opts& c, int n_traj, double t_final, std::uint64_t seed,
                      int points, const std::string& initial) {
    auto [sc, rs] = resolve_and_rates(c);
    const dissipator_matrix dis = build_dissipator(rs);
    const positivity_report rep = positivity_check(dis);
    if (!rep.holds)
        throw validation_error("dissipator is not completely positive (det = " + fmt(rep.det) +
                               "); no quantum-jump unravelling exists");
    const lindblad_decomposition dec = diagonalize(dis);
    trajectory_options topt;
    topt.omega0_tilde = 0.0; // coherences reported in the rotating frame
    topt.n_grid = points;
    const trajectory_result res =
        simulate_trajectories(initial_state(initial), dec, t_final, n_traj, seed, topt);

    if (c.out.format == "json") {
        json j;
        j["scenario"] = sc.name;
        j["gauge"] = to_string(sc.gauge.kind);
        j["n_trajectories"] = n_traj;
        j["seed"] = seed;
        j["times"] = res.times;
        json m11 = json::array(), m22 = json::array(), se = json::array(),
             re12 = json::array(), im12 = json::array();
        for (std::size_t i = 0; i < res.times.size(); ++i) {
            m11.push_back(res.mean[i].rho11);
            m22.push_back(res.mean[i].rho22);
            se.push_back(res.stderr_rho22[i]);
            re12.push_back(res.mean[i].rho12.real());
            im12.push_back(res.mean[i].rho12.imag());
        }
        j["mean_rho11"] = std::move(m11);
        j["mean_rho22"] = std::move(m22);
        j["stderr_rho22"] = std::move(se);
        j["mean_re_rho12"] = std::move(re12);
        j["mean_im_rho12"] = std::move(im12);
        json em = json::array();
        for (const auto& traj : res.emissions) {
            json t = json::array();
            for (const auto& r : traj) t.push_back({{"time", r.time}, {"channel", r.channel}});
            em.push_back(std::move(t));
        }
        j["emissions"] = std::move(em);
        emit(c.out, j.dump(2) + "\n");
        return;
    }
    std::ostringstream os;
    os << "# scenario = " << sc.name << ", gauge = " << to_string(sc.gauge.kind)
       << ", n_traj = " << n_traj << ", seed = " << seed << ", frame = rotating\n";
    os << "time_s,mean_rho11,mean_rho22,stderr_rho22,mean_re_rho12,mean_im_rho12\n";
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        os << fmt(res.times[i]) << ',' << fmt(res.mean[i].rho11) << ',' << fmt(res.mean[i].rho22)
           << ',' << fmt(res.stderr_rho22[i]) << ',' << fmt(res.mean[i].rho12.real()) << ','
           << fmt(res.mean[i].rho12.imag()) << '\n';
    }
    os << "# emissions\n";
    os << "trajectory,time_s,channel\n";
    for (std::size_t t = 0; t < res.emissions.size(); ++t)
        for (const auto& r : res.emissions[t])
            os << t << ',' << fmt(r.time) << ',' << r.channel << '\n';
    emit(c.out, os.str());
}

// ---------------------------------------------------------- preset-dump ---

void run_preset_dump(const common_opts& c) {
    scenario sc = resolve_scenario(c.scenario_spec);
    apply_gauge(sc, c.gauge);
    emit(c.out, serialize_scenario(sc));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gauge-dependent spontaneous emission: rates, dynamics, positivity"};
    app.require_subcommand(1);

    common_opts rates_c;
    CLI::App* cmd_rates = app.add_subcommand("rates", "A-, A+, B for a scenario");
    add_common(cmd_rates, rates_c);

    common_opts steady_c;
    CLI::App* cmd_steady =
        app.add_subcommand("steady", "steady state and stationary emission rate");
    add_common(cmd_steady, steady_c);

    common_opts evolve_c;
    double evolve_t_final = 0.0;
    int evolve_points = 64;
    std::string evolve_initial = "excited";
    CLI::App* cmd_evolve = app.add_subcommand("evolve", "integrate the master equation");
    add_common(cmd_evolve, evolve_c);
    cmd_evolve->add_option("--t-final", evolve_t_final, "end time, seconds")->required();
    cmd_evolve->add_option("--points", evolve_points, "output grid points (default 64)")
        ->check(CLI::PositiveNumber);
    cmd_evolve->add_option("--initial", evolve_initial, "initial state (default excited)")
        ->check(CLI::IsMember({"excited", "ground"}));

    common_opts sweep_c;
    std::string sweep_variable;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_points = 25;
    bool sweep_log = false;
    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "rates and stationary emission across a parameter range");
    add_common(cmd_sweep, sweep_c);
    cmd_sweep->add_option("--variable", sweep_variable, "parameter to sweep")
        ->required()
        ->check(CLI::IsMember({"omega_max", "omega_min", "delta_t", "gamma"}));
    cmd_sweep->add_option("--from", sweep_from, "first value")->required();
    cmd_sweep->add_option("--to", sweep_to, "last value")->required();
    cmd_sweep->add_option("--points", sweep_points, "grid points (default 25)")
        ->check(CLI::PositiveNumber);
    cmd_sweep->add_flag("--log", sweep_log, "logarithmic spacing");

    output_options spectral_out;
    std::string spectral_gauge, spectral_family;
    double spectral_omega0 = 0.0, spectral_from = 0.0, spectral_to = 0.0;
    int spectral_points = 101;
    CLI::App* cmd_spectral =
        app.add_subcommand("spectral", "spectral weights f-(w), f+(w) on a frequency grid");
    cmd_spectral->add_option("--gauge", spectral_gauge, "gauge for the weights")
        ->required()
        ->check(CLI::IsMember({"minimal_coupling", "multipolar", "rotating_wave", "custom"}));
    cmd_spectral->add_option("--alpha-family", spectral_family,
                             "custom gauge family: 'rotating_wave' or 'constant:<c>'");
    cmd_spectral->add_option("--omega0", spectral_omega0, "transition frequency, rad/s")
        ->required();
    cmd_spectral->add_option("--from", spectral_from, "first frequency, rad/s")->required();
    cmd_spectral->add_option("--to", spectral_to, "last frequency, rad/s")->required();
    cmd_spectral->add_option("--points", spectral_points, "grid points (default 101)")
        ->check(CLI::PositiveNumber);
    cmd_spectral->add_option("--format", spectral_out.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_spectral->add_option("--out", spectral_out.path,
                             "write the report to this file instead of stdout");

    common_opts lc_c;
    CLI::App* cmd_lc = app.add_subcommand(
        "lindblad-check", "positivity of the dissipator and its jump channels");
    add_common(cmd_lc, lc_c);

    common_opts traj_c;
    int traj_n = 0;
    double traj_t_final = 0.0;
    std::uint64_t traj_seed = 0;
    int traj_points = 64;
    std::string traj_initial = "excited";
    CLI::App* cmd_traj =
        app.add_subcommand("trajectories", "quantum-jump unravelling of the master equation");
    add_common(cmd_traj, traj_c);
    cmd_traj->add_option("--n-traj", traj_n, "number of trajectories")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_traj->add_option("--t-final", traj_t_final, "end time, seconds")->required();
    cmd_traj->add_option("--seed", traj_seed, "RNG seed (default 0)");
    cmd_traj->add_option("--points", traj_points, "output grid points (default 64)")
        ->check(CLI::PositiveNumber);
    cmd_traj->add_option("--initial", traj_initial, "initial state (default excited)")
        ->check(CLI::IsMember({"excited", "ground"}));

    common_opts dump_c;
    CLI::App* cmd_dump =
        app.add_subcommand("preset-dump", "print a scenario in the scenario-file format");
    add_common(cmd_dump, dump_c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*cmd_rates) run_rates(rates_c);
        else if (*cmd_steady) run_steady(steady_c);
        else if (*cmd_evolve) run_evolve(evolve_c, evolve_t_final, evolve_points, evolve_initial);
        else if (*cmd_sweep)
            run_sweep(sweep_c, sweep_variable, sweep_from, sweep_to, sweep_points, sweep_log);
        else if (*cmd_spectral)
            run_spectral(spectral_out, spectral_gauge, spectral_family, spectral_omega0,
                         spectral_from, spectral_to, spectral_points);
        else if (*cmd_lc) run_lindblad_check(lc_c);
        else if (*cmd_traj)
            run_trajectories(traj_c, traj_n, traj_t_final, traj_seed, traj_points, traj_initial);
        else if (*cmd_dump) run_preset_dump(dump_c);
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
