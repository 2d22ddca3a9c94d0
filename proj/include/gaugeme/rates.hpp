#pragma once

#include <complex>
#include <string>
#include <vector>

#include "gaugeme/gauge.hpp"

namespace gaugeme {

// Inputs for the emission-rate integrals. Angular frequencies in rad/s,
// times in seconds. gamma is the free-space decay rate Gamma; delta_t the
// coarse-graining time (photon time of flight to the detector/walls).
struct physical_params {
    double omega0 = 0.0;       // transition frequency
    double omega0_tilde = 0.0; // renormalised frequency; 0 means "use omega0"
    double gamma = 0.0;        // free-space decay rate, 1/s
    double delta_t = 0.0;      // coarse-graining time, s
    double omega_min = 0.0;    // lower edge of the field-mode band
    double omega_max = 0.0;    // upper edge of the field-mode band
    std::complex<double> dipole_factor = 1.0; // d1^2 + d2^2 + d3^2, |.| <= 1

    double effective_omega0_tilde() const { return omega0_tilde > 0.0 ? omega0_tilde : omega0; }

    // Throws validation_error listing every violated invariant.
    void validate() const;

    // Non-fatal diagnostics, currently the perturbative-regime check
    // gamma * delta_t < 0.1.
    std::vector<std::string> warnings() const;
};

struct rate_result {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
};

// A-, A+, B of the coarse-grained two-level master equation.
struct rate_set {
    double a_minus = 0.0;
    double a_plus = 0.0;
    std::complex<double> b = 0.0;
    double omega0_tilde = 0.0;
};

struct rate_options {
    double rel_tol = 1e-6;          // per quadrature segment
    int window_half_periods = 1000; // resonant window half-width, units of pi/delta_t
};

// Gamma = e^2 omega0^3 |d|^2 / (3 pi eps0 hbar c^3); dipole_abs = |<2|r|1>|
// in metres. Mutually inverse with dipole_from_gamma.
double gamma_from_dipole(double omega0, double dipole_abs);
double dipole_from_gamma(double omega0, double gamma);

// A+- = (2 Gamma / (pi omega0^2 delta_t)) *
//         int_{omega_min}^{omega_max} f+-(w) sin^2((omega0 +- w) delta_t / 2) dw.
// sign = -1 gives the decay rate A-, sign = +1 the excitation rate A+.
// A-'s resonant window (omega0 +- N pi / delta_t) is integrated in the
// singularity-free sinc^2 form; outside it sin^2 is replaced by its mean 1/2
// and the dropped oscillatory remainder is bounded into abs_error.
// pre: omega0 * delta_t >= 100. RotatingWave with sign=+1 returns exactly 0.
// Empty band (omega_min == omega_max) returns 0.
rate_result transition_rate_detailed(const physical_params& params,
                                     const gauge_representation& gauge, int sign,
                                     const rate_options& options = {});
double transition_rate(const physical_params& params, const gauge_representation& gauge,
                       int sign, const rate_options& options = {});

// Closed forms of A+ with sin^2 -> 1/2, x = omega/omega0 + 1:
//   minimal coupling: Gamma/(pi omega0 delta_t) * [1/x + ln x]
//   multipolar:       Gamma/(pi omega0 delta_t) * [1/x - 3x + x^2/2 + 3 ln x]
// evaluated between the band edges. Other gauges: validation_error.
double a_plus_closed_form(const physical_params& params, const gauge_representation& gauge);

// Cross coefficient B coupling rho12' to rho21 (exact sin.sin form):
//   B = -(2 Gamma / (pi omega0^2 delta_t)) e^{-i omega0 delta_t} dipole_factor
//       * int w^2 u+ u- / (omega0^2 - w^2)
//           * sin((omega0+w) dt/2) sin((omega0-w) dt/2) dw.
// Resonant window in sinc form; tails via the identity
// sin sin = (cos(w dt) - cos(omega0 dt))/2, the cos(w dt) part by Filon.
std::complex<double> cross_coefficient(const physical_params& params,
                                       const gauge_representation& gauge,
                                       const rate_options& options = {});

// Stationary-phase approximation of B:
//   B ~ (Gamma / (pi omega0^2 delta_t)) e^{-i omega0 dt} cos(omega0 dt)
//       * dipole_factor * PV int w^2 u+ u- / (omega0^2 - w^2) dw.
std::complex<double> cross_coefficient_approx(const physical_params& params,
                                              const gauge_representation& gauge,
                                              const rate_options& options = {});

// |B| with the oscillatory prefactors at their maxima (|cos| = 1,
// |dipole_factor| = 1): the bound used by the positivity scan.
double cross_coefficient_bound(const physical_params& params,
                               const gauge_representation& gauge,
                               const rate_options& options = {});

// {A-, A+, B, omega0_tilde} in one call.
rate_set compute_rate_set(const physical_params& params, const gauge_representation& gauge,
                          const rate_options& options = {});

} // namespace gaugeme
