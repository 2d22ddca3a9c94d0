#pragma once

#include <string>
#include <vector>

#include "gaugeme/gauge.hpp"
#include "gaugeme/rates.hpp"

namespace gaugeme {

// A named parameter set: physical inputs plus the gauge they are quoted in.
struct scenario {
    std::string name;
    physical_params params;
    gauge_representation gauge;
    std::string provenance; // where the numbers come from
};

// Built-in parameter sets. All use omega_min = 0, omega_max = 3.7e19 rad/s
// (wavevector cutoff at the inverse Bohr radius).
//   lab_ion        optical ion transition, detector walls ~3 m away
//   lab_ion_close  same emitter, walls ~10 cm away
//   quantum_dot    InGaAs dot resonance fluorescence (T1 = 760 ps, 950 nm)
//   colour_centre  SiV colour centre (lifetime 1 ns, 710 nm)
scenario preset(const std::string& name); // throws lookup_error listing names
std::vector<std::string> preset_names();

// Scenario file: flat "key = value" lines, '#' comments. Keys:
//   name, gauge, alpha_family (custom gauge only),
//   omega0 | wavelength_nm, gamma | lifetime_s, delta_t_s,
//   omega_min, omega_max, dipole_factor_re, dipole_factor_im.
// Unknown keys, duplicate keys, and both members of an either/or pair are
// parse errors carrying file:line.
scenario parse_scenario(const std::string& text, const std::string& source_name);
scenario load_scenario(const std::string& path);

// Emits the same key-value format; parse(serialize(s)) round-trips exactly.
std::string serialize_scenario(const scenario& s);

} // namespace gaugeme
