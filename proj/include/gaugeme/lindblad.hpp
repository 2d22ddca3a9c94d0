#pragma once

#include <array>
#include <complex>
#include <vector>

#include "gaugeme/rates.hpp"

namespace gaugeme {

// 2x2 complex matrix, row-major, basis {|1> ground, |2> excited}.
struct matrix2c {
    std::array<complexd, 4> m{};

    complexd& operator()(int row, int col) { return m[2 * row + col]; }
    const complexd& operator()(int row, int col) const { return m[2 * row + col]; }
};

// Coefficient matrix M of the dissipator in the operator basis
// (sigma_1 = sigma+, sigma_2 = sigma-):
//   sum_nm M_nm [ sigma_n rho sigma_m^dag - {sigma_m^dag sigma_n, rho}/2 ],
//   M = [[A+, B], [B*, A-]].
// Hermitian by construction.
struct dissipator_matrix {
    double a_plus = 0.0;
    complexd b = 0.0;
    double a_minus = 0.0;
};

dissipator_matrix build_dissipator(const rate_set& rates);

// The master equation is completely positive iff det M = A+ A- - |B|^2 >= 0.
struct positivity_report {
    bool holds = false;
    double det = 0.0;
    double ratio = 0.0; // A+ A- / |B|^2, +inf when B == 0
};

positivity_report positivity_check(const dissipator_matrix& m);

// One jump channel: L = c_plus sigma+ + c_minus sigma-.
struct lindblad_operator {
    complexd c_plus = 0.0;
    complexd c_minus = 0.0;

    matrix2c matrix() const; // traceless by construction
};

// Diagonalised dissipator: sum_i lambda_i (L_i rho L_i^dag - ...), channels
// orthonormal in the (sigma+, sigma-) basis, eigenvalues descending.
struct lindblad_decomposition {
    std::array<double, 2> lambda{};
    std::array<lindblad_operator, 2> ops{};
};

// Closed-form 2x2 eigendecomposition. Eigenvalues in descending order; a
// relative gap below 1e-12 is treated as degenerate and the canonical
// channels (sigma+, sigma-) are returned. Eigenvector phase is fixed by
// making the larger-modulus coefficient real and positive.
lindblad_decomposition diagonalize(const dissipator_matrix& m);

// One row of the positivity-margin scan across band edges.
struct positivity_scan_row {
    double omega_max = 0.0;
    double a_plus = 0.0;
    double a_minus = 0.0;
    double b_bound = 0.0; // |B| with oscillatory prefactors maximised
    double ratio = 0.0;   // A+ A- / b_bound^2
};

// Evaluates A+, A-, and the B bound on each omega_max in the grid
// (ascending), parallelised across grid points. n_threads = 0 resolves to
// GAUGE_ME_THREADS or hardware concurrency.
std::vector<positivity_scan_row> positivity_bound_scan(const physical_params& params,
                                                       const gauge_representation& gauge,
                                                       const std::vector<double>& omega_max_grid,
                                                       const rate_options& options = {},
                                                       int n_threads = 0);

} // namespace gaugeme
