#pragma once

#include <complex>
#include <functional>
#include <string>

#include "gaugeme/errors.hpp"

namespace gaugeme {

using complexd = std::complex<double>;

// Which atom--field coupling Hamiltonian the rates are derived in. The
// family is parametrised by the mixing function alpha(omega_k): alpha = 0
// is the minimal-coupling (p.A) form, alpha = 1 the multipolar (r.E) form,
// and alpha = omega0/(omega0 + omega_k) the representation whose coupling
// has no counter-rotating part.
enum class gauge_kind {
    minimal_coupling,
    multipolar,
    rotating_wave,
    custom,
};

const char* to_string(gauge_kind kind);
gauge_kind gauge_kind_from_string(const std::string& name); // throws lookup_error

struct gauge_representation {
    gauge_kind kind = gauge_kind::minimal_coupling;

    // Only consulted for gauge_kind::custom. Receives (omega0, omega_k),
    // returns the dimensionless mixing alpha.
    std::function<double(double, double)> custom_alpha;

    // Human-readable family tag, e.g. "constant:0.25"; kept for scenario
    // round-tripping and report headers.
    std::string family;

    static gauge_representation minimal_coupling();
    static gauge_representation multipolar();
    static gauge_representation rotating_wave();
    static gauge_representation custom(std::function<double(double, double)> alpha,
                                       std::string family_tag);

    // Parses a family tag: "constant:<c>" or "rotating_wave".
    static gauge_representation custom_from_family(const std::string& family_tag);
};

struct coupling_pair {
    double u_minus = 0.0; // co-rotating coefficient
    double u_plus = 0.0;  // counter-rotating coefficient
};

// Mixing function alpha(omega_k) for the given representation.
// pre: omega0 > 0, omega_k > 0, both finite.
double alpha_of(const gauge_representation& gauge, double omega0, double omega_k);

// u+- = (1 - alpha) sqrt(omega0/omega_k) -+ alpha sqrt(omega_k/omega0).
// Gauge-independent identity regardless of alpha:
//   (u- + u+) sqrt(omega_k/omega0) + (u- - u+) sqrt(omega0/omega_k) = 2.
coupling_pair coupling_coefficients(const gauge_representation& gauge, double omega0,
                                    double omega_k);

// Spectral weight f+-(omega_k) = (u+- omega_k)^2 / (omega0 +- omega_k)^2.
// sign = -1 selects f- (resonant denominator, singular at omega_k == omega0,
// where a singular_point_error is thrown); sign = +1 selects f+.
double spectral_weight(const gauge_representation& gauge, double omega0, double omega_k,
                       int sign);

} // namespace gaugeme
