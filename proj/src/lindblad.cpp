#include "gaugeme/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "gaugeme/errors.hpp"
#include "thread_count.hpp"

namespace gaugeme {

dissipator_matrix build_dissipator(const rate_set& rates) {
    return {rates.a_plus, rates.b, rates.a_minus};
}

positivity_report positivity_check(const dissipator_matrix& m) {
    positivity_report out;
    const double b2 = std::norm(m.b);
    out.det = m.a_plus * m.a_minus - b2;
    out.holds = m.a_plus >= 0.0 && m.a_minus >= 0.0 && out.det >= 0.0;
    out.ratio = b2 == 0.0 ? std::numeric_limits<double>::infinity()
                          : m.a_plus * m.a_minus / b2;
    return out;
}

matrix2c lindblad_operator::matrix() const {
    matrix2c out;
    out(1, 0) = c_plus;  // sigma+ = |2><1|
    out(0, 1) = c_minus; // sigma- = |1><2|
    return out;
}

namespace {

// Rotates the global phase so the larger-modulus coefficient is real >= 0.
void fix_phase(lindblad_operator& op) {
    const complexd& lead =
        std::abs(op.c_plus) >= std::abs(op.c_minus) ? op.c_plus : op.c_minus;
    const double mag = std::abs(lead);
    if (mag == 0.0)
        return;
    const complexd rot = std::conj(lead) / mag;
    op.c_plus *= rot;
    op.c_minus *= rot;
}

} // namespace

lindblad_decomposition diagonalize(const dissipator_matrix& m) {
    lindblad_decomposition out;
    const double mid = 0.5 * (m.a_plus + m.a_minus);
    const double q = 0.5 * (m.a_plus - m.a_minus);
    const double disc = std::hypot(q, std::abs(m.b));
    out.lambda[0] = mid + disc;
    out.lambda[1] = mid - disc;

    if (2.0 * disc <= 1e-12 * (std::abs(out.lambda[0]) + std::abs(out.lambda[1]))) {
        // both channels equivalent up to rounding: keep the canonical pair
        out.ops[0] = {1.0, 0.0}; // sigma+
        out.ops[1] = {0.0, 1.0}; // sigma-
        return out;
    }

    // (M - lambda1) v = 0 has two algebraically equivalent solutions; take
    // the one whose norm is bounded below by disc.
    const double r_plus = out.lambda[0] - m.a_plus;   // disc - q >= 0
    const double r_minus = out.lambda[0] - m.a_minus; // disc + q >= 0
    lindblad_operator v1;
    if (r_plus >= r_minus)
        v1 = {m.b, complexd(r_plus)};
    else
        v1 = {complexd(r_minus), std::conj(m.b)};
    const double n1 = std::hypot(std::abs(v1.c_plus), std::abs(v1.c_minus));
    v1.c_plus /= n1;
    v1.c_minus /= n1;

    // exact orthogonal complement: <v1, v2> cancels term by term
    lindblad_operator v2{-std::conj(v1.c_minus), std::conj(v1.c_plus)};

    fix_phase(v1);
    fix_phase(v2);
    out.ops[0] = v1;
    out.ops[1] = v2;
    return out;
}

std::vector<positivity_scan_row> positivity_bound_scan(const physical_params& params,
                                                       const gauge_representation& gauge,
                                                       const std::vector<double>& omega_max_grid,
                                                       const rate_options& options,
                                                       int n_threads) {
    std::vector<positivity_scan_row> rows(omega_max_grid.size());
    if (rows.empty())
        return rows;

    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            try {
                physical_params p = params;
                p.omega_max = omega_max_grid[i];
                positivity_scan_row row;
                row.omega_max = p.omega_max;
                row.a_plus = transition_rate(p, gauge, 1, options);
                row.a_minus = transition_rate(p, gauge, -1, options);
                row.b_bound = cross_coefficient_bound(p, gauge, options);
                row.ratio = row.b_bound == 0.0
                                ? std::numeric_limits<double>::infinity()
                                : row.a_plus * row.a_minus / (row.b_bound * row.b_bound);
                rows[i] = row;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };

    const std::size_t n = rows.size();
    const std::size_t nt = std::min<std::size_t>(detail::resolve_thread_count(n_threads), n);
    if (nt <= 1) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        const std::size_t chunk = (n + nt - 1) / nt;
        for (std::size_t t = 0; t < nt; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            if (lo < hi)
                pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool)
            th.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);
    return rows;
}

} // namespace gaugeme
