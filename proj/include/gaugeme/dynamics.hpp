#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "gaugeme/lindblad.hpp"
#include "gaugeme/rates.hpp"

namespace gaugeme {

// Two-level density matrix, basis {|1> ground, |2> excited}. rho21 is not
// stored: Hermiticity holds by representation.
struct density_matrix {
    double rho11 = 1.0;
    double rho22 = 0.0;
    complexd rho12 = 0.0;

    static density_matrix ground() { return {1.0, 0.0, 0.0}; }
    static density_matrix excited() { return {0.0, 1.0, 0.0}; }

    double trace() const { return rho11 + rho22; }
    // Smaller eigenvalue of the Hermitian 2x2 matrix; >= 0 for a state.
    double min_eigenvalue() const;

    // Throws validation_error unless trace == 1 (within tol) and the matrix
    // is positive semidefinite (within tol).
    void validate(double tol = 1e-9) const;
};

// Time derivative; d22 = -d11 exactly, so the tangent is traceless.
struct dm_tangent {
    double d11 = 0.0;
    double d22 = 0.0;
    complexd d12 = 0.0;
};

// Right-hand side of the coarse-grained master equation,
//   rho11' = -A+ rho11 + A- rho22
//   rho12' = (i w0~ - (A- + A+)/2) rho12 + conj(B) conj(rho12).
dm_tangent me_rhs(const density_matrix& rho, const rate_set& rates);

enum class frame_policy {
    automatic, // rotating frame when omega0_tilde * t_final > 1e6
    lab,
    rotating,
};

struct evolve_options {
    frame_policy frame = frame_policy::automatic;
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
};

struct evolve_result {
    std::vector<double> times;
    std::vector<density_matrix> states;
    // True when the coherence was integrated in the frame rotating at
    // omega0_tilde; rho12 in states is then the rotating-frame coherence
    // (populations are frame-independent) and the e^{+-2i w0~ t} B coupling
    // was dropped with relative weight dropped_b_bound = |B| / (2 w0~).
    bool rotating_frame = false;
    double dropped_b_bound = 0.0;
};

// Integrates the master equation from rho0 over [0, t_final], reporting the
// state on a uniform grid of n_points (n_points >= 1; t_final == 0 returns
// rho0). Embedded adaptive Runge-Kutta on (rho11, Re rho12, Im rho12);
// rho22 = 1 - rho11 by representation, so the trace is conserved exactly.
evolve_result evolve(const density_matrix& rho0, const rate_set& rates, double t_final,
                     int n_points, const evolve_options& options = {});

// Unique steady state rho22 = A+/(A- + A+), rho12 = 0.
// pre: A- + A+ > 0, else validation_error (no relaxation).
density_matrix steady_state(const rate_set& rates);

// Photon emission rate I(t) = A- rho22 + A+ rho11.
double emission_rate(const density_matrix& rho, const rate_set& rates);

struct steady_emission {
    double total = 0.0;      // 2 A- A+ / (A- + A+)
    double narrowband = 0.0; // total / 2, the detector-band share
};

steady_emission steady_emission_rate(const rate_set& rates);

// One detected quantum jump.
struct emission_record {
    double time = 0.0;
    int channel = 0; // index into the decomposition's ops
};

struct trajectory_options {
    double omega0_tilde = 0.0; // coherent part; 0 = pure dissipative frame
    int n_grid = 64;           // output grid points over [0, t_final]
    int n_threads = 0;         // 0 = GAUGE_ME_THREADS or hardware
    double max_jump_prob = 1e-2;
    int min_steps = 2000;
};

struct trajectory_result {
    std::vector<double> times;
    std::vector<density_matrix> mean;       // ensemble average per grid point
    std::vector<double> stderr_rho22;       // standard error of mean rho22
    std::vector<std::vector<emission_record>> emissions; // per trajectory
};

// First-order quantum-jump unravelling of the diagonalised master equation.
// Channel operators sqrt(lambda_i) L_i; L_i^dag L_i is diagonal for
// sigma+/sigma- combinations, so the no-jump propagator is exact at any
// omega0_tilde. Jump times are recorded at the end of the step in which the
// jump fires. Deterministic in (seed, trajectory index) independent of the
// thread count. pre: lambda_i >= 0 (negative beyond rounding: refused).
trajectory_result simulate_trajectories(const density_matrix& rho0,
                                        const lindblad_decomposition& decomposition,
                                        double t_final, int n_trajectories, std::uint64_t seed,
                                        const trajectory_options& options = {});

} // namespace gaugeme
