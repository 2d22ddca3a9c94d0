#include "gaugeme/scenarios.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "gaugeme/constants.hpp"
#include "gaugeme/errors.hpp"

namespace gaugeme {

namespace {

scenario make_preset(const std::string& name, double omega0, double gamma, double delta_t,
                     const std::string& provenance) {
    scenario sc;
    sc.name = name;
    sc.params.omega0 = omega0;
    sc.params.gamma = gamma;
    sc.params.delta_t = delta_t;
    sc.params.omega_min = 0.0;
    sc.params.omega_max = 3.7e19;
    sc.gauge = gauge_representation::minimal_coupling();
    sc.provenance = provenance;
    return sc;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

} // namespace

std::vector<std::string> preset_names() {
    return {"lab_ion", "lab_ion_close", "quantum_dot", "colour_centre"};
}

scenario preset(const std::string& name) {
    if (name == "lab_ion")
        return make_preset(
            "lab_ion", 3.7e15, 1e7, 1e-8,
            "optical ion-trap transition, omega0 = 3.7e15 rad/s, Gamma = 1e7 /s; "
            "detector wall ~3 m from the emitter gives the coarse-graining time "
            "delta_t = 1e-8 s; field band cut at 3.7e19 rad/s (inverse Bohr radius)");
    if (name == "lab_ion_close")
        return make_preset(
            "lab_ion_close", 3.7e15, 1e7, 3e-10,
            "the lab_ion emitter with the boundary a few centimetres away: "
            "delta_t = 3e-10 s, same transition and band cutoff");
    if (name == "quantum_dot")
        return make_preset(
            "quantum_dot", 2e15, 1e9, 3e-10,
            "InGaAs quantum dot resonance fluorescence near 950 nm with T1 ~ 760 ps, "
            "rounded to omega0 = 2e15 rad/s and Gamma = 1e9 /s; detection path a few "
            "centimetres: delta_t = 3e-10 s");
    if (name == "colour_centre")
        return make_preset(
            "colour_centre", 2.6e15, 1e9, 3e-10,
            "silicon-vacancy colour centre near 710 nm with ~1 ns excited-state "
            "lifetime, rounded to omega0 = 2.6e15 rad/s and Gamma = 1e9 /s; "
            "delta_t = 3e-10 s");
    std::string msg = "unknown preset '" + name + "'; available:";
    for (const auto& n : preset_names())
        msg += " " + n;
    throw lookup_error(msg);
}

scenario parse_scenario(const std::string& text, const std::string& source_name) {
    scenario sc;
    sc.gauge = gauge_representation::minimal_coupling();
    physical_params& p = sc.params;
    p.omega_min = 0.0;
    p.omega_max = 3.7e19;

    auto fail = [&](int lineno, const std::string& what) -> void {
        std::ostringstream os;
        os << source_name << ":" << lineno << ": " << what << " (line " << lineno << ")";
        throw parse_error(os.str());
    };
    auto number = [&](const std::string& value, int lineno) {
        const char* c = value.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(c, &end);
        if (end == c || *end != '\0' || !std::isfinite(v))
            fail(lineno, "expected a number, got '" + value + "'");
        return v;
    };

    std::map<std::string, int> seen;
    std::string gauge_name, family;
    int gauge_line = 0, family_line = 0;
    bool have_omega0 = false, have_wavelength = false;
    bool have_gamma = false, have_lifetime = false, have_delta_t = false;
    double wavelength_nm = 0.0, lifetime_s = 0.0;
    double dipole_re = 1.0, dipole_im = 0.0;

    std::istringstream is(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail(lineno, "expected 'key = value'");
        if (seen.count(key))
            fail(lineno, "duplicate key '" + key + "'");
        seen[key] = lineno;

        if (key == "name") {
            sc.name = value;
        } else if (key == "gauge") {
            gauge_name = value;
            gauge_line = lineno;
        } else if (key == "alpha_family") {
            family = value;
            family_line = lineno;
        } else if (key == "omega0") {
            if (have_wavelength)
                fail(lineno, "omega0 conflicts with wavelength_nm");
            have_omega0 = true;
            p.omega0 = number(value, lineno);
        } else if (key == "wavelength_nm") {
            if (have_omega0)
                fail(lineno, "wavelength_nm conflicts with omega0");
            have_wavelength = true;
            wavelength_nm = number(value, lineno);
        } else if (key == "gamma") {
            if (have_lifetime)
                fail(lineno, "gamma conflicts with lifetime_s");
            have_gamma = true;
            p.gamma = number(value, lineno);
        } else if (key == "lifetime_s") {
            if (have_gamma)
                fail(lineno, "lifetime_s conflicts with gamma");
            have_lifetime = true;
            lifetime_s = number(value, lineno);
        } else if (key == "delta_t_s") {
            have_delta_t = true;
            p.delta_t = number(value, lineno);
        } else if (key == "omega_min") {
            p.omega_min = number(value, lineno);
        } else if (key == "omega_max") {
            p.omega_max = number(value, lineno);
        } else if (key == "dipole_factor_re") {
            dipole_re = number(value, lineno);
        } else if (key == "dipole_factor_im") {
            dipole_im = number(value, lineno);
        } else {
            fail(lineno, "unknown key '" + key + "'");
        }
    }

    if (!have_omega0 && !have_wavelength)
        throw parse_error(source_name + ": one of omega0 or wavelength_nm is required");
    if (!have_gamma && !have_lifetime)
        throw parse_error(source_name + ": one of gamma or lifetime_s is required");
    if (!have_delta_t)
        throw parse_error(source_name + ": the key delta_t_s is required");

    if (have_wavelength)
        p.omega0 = 2.0 * constants::pi * constants::speed_of_light / (wavelength_nm * 1e-9);
    if (have_lifetime)
        p.gamma = 1.0 / lifetime_s;
    p.dipole_factor = std::complex<double>(dipole_re, dipole_im);

    if (!gauge_name.empty()) {
        gauge_kind kind;
        try {
            kind = gauge_kind_from_string(gauge_name);
        } catch (const lookup_error& e) {
            fail(gauge_line, e.what());
            throw; // unreachable; fail always throws
        }
        switch (kind) {
        case gauge_kind::minimal_coupling:
            sc.gauge = gauge_representation::minimal_coupling();
            break;
        case gauge_kind::multipolar:
            sc.gauge = gauge_representation::multipolar();
            break;
        case gauge_kind::rotating_wave:
            sc.gauge = gauge_representation::rotating_wave();
            break;
        case gauge_kind::custom:
            if (family.empty())
                throw validation_error(source_name +
                                       ": gauge 'custom' requires an alpha_family key");
            sc.gauge = gauge_representation::custom_from_family(family);
            break;
        }
    }
    if (!family.empty() && sc.gauge.kind != gauge_kind::custom)
        fail(family_line, "alpha_family is only meaningful with gauge = custom");

    p.validate();
    return sc;
}

scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw validation_error("cannot open scenario file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

std::string serialize_scenario(const scenario& s) {
    std::ostringstream os;
    os << "name = " << s.name << "\n";
    os << "gauge = " << to_string(s.gauge.kind) << "\n";
    if (s.gauge.kind == gauge_kind::custom)
        os << "alpha_family = " << s.gauge.family << "\n";
    os << "omega0 = " << fmt_double(s.params.omega0) << "\n";
    os << "gamma = " << fmt_double(s.params.gamma) << "\n";
    os << "delta_t_s = " << fmt_double(s.params.delta_t) << "\n";
    os << "omega_min = " << fmt_double(s.params.omega_min) << "\n";
    os << "omega_max = " << fmt_double(s.params.omega_max) << "\n";
    os << "dipole_factor_re = " << fmt_double(s.params.dipole_factor.real()) << "\n";
    os << "dipole_factor_im = " << fmt_double(s.params.dipole_factor.imag()) << "\n";
    return os.str();
}

} // namespace gaugeme
