#include "gaugeme/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "gaugeme/errors.hpp"
#include "thread_count.hpp"

namespace gaugeme {

double density_matrix::min_eigenvalue() const {
    const double mid = 0.5 * (rho11 + rho22);
    const double q = 0.5 * (rho11 - rho22);
    return mid - std::hypot(q, std::abs(rho12));
}

void density_matrix::validate(double tol) const {
    if (!std::isfinite(rho11) || !std::isfinite(rho22) || !std::isfinite(rho12.real()) ||
        !std::isfinite(rho12.imag()))
        throw validation_error("density_matrix has non-finite entries");
    if (std::abs(trace() - 1.0) > tol) {
        std::ostringstream os;
        os << "density_matrix trace " << trace() << " deviates from 1 beyond " << tol;
        throw validation_error(os.str());
    }
    if (min_eigenvalue() < -tol) {
        std::ostringstream os;
        os << "density_matrix is not positive semidefinite: min eigenvalue "
           << min_eigenvalue();
        throw validation_error(os.str());
    }
}

dm_tangent me_rhs(const density_matrix& rho, const rate_set& rates) {
    dm_tangent d;
    d.d11 = -rates.a_plus * rho.rho11 + rates.a_minus * rho.rho22;
    d.d22 = -d.d11;
    const double s = 0.5 * (rates.a_minus + rates.a_plus);
    d.d12 = complexd(-s, rates.omega0_tilde) * rho.rho12 +
            std::conj(rates.b) * std::conj(rho.rho12);
    return d;
}

namespace {

void check_rates(const rate_set& rates) {
    if (!std::isfinite(rates.a_minus) || !std::isfinite(rates.a_plus) ||
        !std::isfinite(rates.b.real()) || !std::isfinite(rates.b.imag()) ||
        !std::isfinite(rates.omega0_tilde))
        throw validation_error("rate_set has non-finite entries");
    if (rates.a_minus < 0.0 || rates.a_plus < 0.0)
        throw validation_error("rate_set needs A- >= 0 and A+ >= 0");
}

// Master equation on (rho11, Re rho12, Im rho12); rho22 lives implicitly as
// 1 - rho11. In the rotating frame the B coupling is dropped and the
// coherence sees only the decay envelope.
struct me_reduced_rhs {
    double ap, am, s, br, bi, w;
    bool rotating;

    void operator()(const double* y, double* dy) const {
        dy[0] = -ap * y[0] + am * (1.0 - y[0]);
        if (rotating) {
            dy[1] = -s * y[1];
            dy[2] = -s * y[2];
        } else {
            dy[1] = -w * y[2] - s * y[1] + br * y[1] - bi * y[2];
            dy[2] = w * y[1] - s * y[2] - br * y[2] - bi * y[1];
        }
    }
};

// Dormand-Prince 5(4) with FSAL, autonomous right-hand side, 3 components.
template <class RHS>
void rk_advance(const RHS& f, double* y, double* k1, double t0, double t1, double rel,
                double abs_tol, double& h) {
    if (!(t1 > t0))
        return;
    constexpr double a21 = 1.0 / 5.0;
    constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                     a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                     a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                     b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                     e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    double t = t0;
    double k2[3], k3[3], k4[3], k5[3], k6[3], k7[3], yt[3], ynew[3];
    while (t < t1) {
        bool last = false;
        if (h >= t1 - t) {
            h = t1 - t;
            last = true;
        }
        const double hmin =
            16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), std::abs(t1));
        if (!last && h < hmin)
            throw numerical_error("evolve: step size underflow", h);

        for (int i = 0; i < 3; ++i)
            yt[i] = y[i] + h * a21 * k1[i];
        f(yt, k2);
        for (int i = 0; i < 3; ++i)
            yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(yt, k3);
        for (int i = 0; i < 3; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(yt, k4);
        for (int i = 0; i < 3; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(yt, k5);
        for (int i = 0; i < 3; ++i)
            yt[i] = y[i] +
                    h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(yt, k6);
        for (int i = 0; i < 3; ++i)
            ynew[i] = y[i] +
                      h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(ynew, k7);

        double norm2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double sc = abs_tol + rel * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = err / sc;
            norm2 += r * r;
        }
        const double norm = std::sqrt(norm2 / 3.0);
        if (norm <= 1.0) {
            t = last ? t1 : t + h;
            for (int i = 0; i < 3; ++i) {
                y[i] = ynew[i];
                k1[i] = k7[i]; // FSAL
            }
            const double fac =
                norm == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(norm, -0.2)));
            h *= fac;
        } else {
            h *= std::max(0.2, std::min(1.0, 0.9 * std::pow(norm, -0.2)));
        }
    }
}

} // namespace

evolve_result evolve(const density_matrix& rho0, const rate_set& rates, double t_final,
                     int n_points, const evolve_options& options) {
    rho0.validate(1e-6);
    check_rates(rates);
    if (!std::isfinite(t_final) || t_final < 0.0)
        throw validation_error("evolve: t_final must be >= 0 and finite");
    if (n_points < 1)
        throw validation_error("evolve: n_points must be >= 1");
    if (!(options.rel_tol > 0.0) || !(options.abs_tol >= 0.0))
        throw validation_error("evolve: tolerances must be positive");

    evolve_result out;
    const double w = rates.omega0_tilde;
    switch (options.frame) {
    case frame_policy::automatic:
        out.rotating_frame = w * t_final > 1e6;
        break;
    case frame_policy::lab:
        out.rotating_frame = false;
        break;
    case frame_policy::rotating:
        out.rotating_frame = true;
        break;
    }
    if (out.rotating_frame) {
        const double babs = std::abs(rates.b);
        out.dropped_b_bound = babs == 0.0 ? 0.0 : babs / (2.0 * w);
    }

    out.times.resize(n_points);
    if (n_points == 1)
        out.times[0] = t_final;
    else
        for (int i = 0; i < n_points; ++i)
            out.times[i] = t_final * (static_cast<double>(i) / (n_points - 1));

    me_reduced_rhs f{rates.a_plus,
                     rates.a_minus,
                     0.5 * (rates.a_minus + rates.a_plus),
                     rates.b.real(),
                     rates.b.imag(),
                     w,
                     out.rotating_frame};

    double y[3] = {rho0.rho11, rho0.rho12.real(), rho0.rho12.imag()};
    double k1[3];
    f(y, k1);
    const double rate_scale =
        rates.a_plus + rates.a_minus + 2.0 * std::abs(rates.b) + (out.rotating_frame ? 0.0 : w);
    double h = t_final;
    if (rate_scale > 0.0)
        h = std::min(h, 0.5 / rate_scale);
    if (!(h > 0.0))
        h = t_final > 0.0 ? t_final : 1.0;

    out.states.reserve(n_points);
    double t_prev = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double t_next = out.times[i];
        if (t_next == 0.0) {
            out.states.push_back(rho0); // exact initial state, bit for bit
            continue;
        }
        rk_advance(f, y, k1, t_prev, t_next, options.rel_tol, options.abs_tol, h);
        t_prev = t_next;
        density_matrix rho;
        rho.rho11 = y[0];
        rho.rho22 = 1.0 - y[0];
        rho.rho12 = complexd(y[1], y[2]);
        out.states.push_back(rho);
    }
    return out;
}

density_matrix steady_state(const rate_set& rates) {
    check_rates(rates);
    const double total = rates.a_minus + rates.a_plus;
    if (!(total > 0.0))
        throw validation_error("steady_state: A- + A+ must be positive (no relaxation)");
    density_matrix rho;
    rho.rho11 = rates.a_minus / total;
    rho.rho22 = rates.a_plus / total;
    rho.rho12 = 0.0;
    return rho;
}

double emission_rate(const density_matrix& rho, const rate_set& rates) {
    return rates.a_minus * rho.rho22 + rates.a_plus * rho.rho11;
}

steady_emission steady_emission_rate(const rate_set& rates) {
    check_rates(rates);
    const double total_rate = rates.a_minus + rates.a_plus;
    if (!(total_rate > 0.0))
        throw validation_error("steady_emission_rate: A- + A+ must be positive");
    steady_emission e;
    e.total = 2.0 * rates.a_minus * rates.a_plus / total_rate;
    e.narrowband = 0.5 * e.total;
    return e;
}

namespace {

// splitmix64 finaliser: decorrelates consecutive (seed, index) pairs.
std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// Draws a pure state from the eigendecomposition of rho using one uniform
// variate. Degenerate rho (maximally mixed) falls back to the basis states.
void sample_initial_state(const density_matrix& rho, double u, complexd& c1, complexd& c2) {
    const double q = 0.5 * (rho.rho11 - rho.rho22);
    const double disc = std::hypot(q, std::abs(rho.rho12));
    if (disc <= 1e-15) {
        if (u < rho.rho11) {
            c1 = 1.0;
            c2 = 0.0;
        } else {
            c1 = 0.0;
            c2 = 1.0;
        }
        return;
    }
    const double mid = 0.5 * (rho.rho11 + rho.rho22);
    const double p_hi = std::min(1.0, std::max(0.0, mid + disc));
    const double r_g = disc - q; // p_hi - rho11
    const double r_e = disc + q; // p_hi - rho22
    complexd v1, v2;
    if (r_g >= r_e) {
        v1 = rho.rho12;
        v2 = r_g;
    } else {
        v1 = r_e;
        v2 = std::conj(rho.rho12);
    }
    const double n = std::hypot(std::abs(v1), std::abs(v2));
    v1 /= n;
    v2 /= n;
    if (u < p_hi) {
        c1 = v1;
        c2 = v2;
    } else {
        c1 = -std::conj(v2);
        c2 = std::conj(v1);
    }
}

} // namespace

trajectory_result simulate_trajectories(const density_matrix& rho0,
                                        const lindblad_decomposition& decomposition,
                                        double t_final, int n_trajectories, std::uint64_t seed,
                                        const trajectory_options& options) {
    rho0.validate(1e-6);
    if (!std::isfinite(t_final) || t_final < 0.0)
        throw validation_error("simulate_trajectories: t_final must be >= 0 and finite");
    if (n_trajectories <= 0)
        throw validation_error("simulate_trajectories: n_trajectories must be positive");
    if (options.n_grid < 1)
        throw validation_error("simulate_trajectories: n_grid must be >= 1");
    if (!(options.max_jump_prob > 0.0) || options.max_jump_prob > 1.0)
        throw validation_error("simulate_trajectories: max_jump_prob must lie in (0, 1]");
    if (options.min_steps < 1)
        throw validation_error("simulate_trajectories: min_steps must be >= 1");
    if (!std::isfinite(options.omega0_tilde) || options.omega0_tilde < 0.0)
        throw validation_error("simulate_trajectories: omega0_tilde must be >= 0 and finite");

    const double lambda_scale =
        std::abs(decomposition.lambda[0]) + std::abs(decomposition.lambda[1]);
    for (double l : decomposition.lambda) {
        if (l < -1e-12 * lambda_scale)
            throw validation_error(
                "simulate_trajectories: dissipator eigenvalue is negative beyond rounding; "
                "the generator is not completely positive");
    }
    const double l0 = std::max(decomposition.lambda[0], 0.0);
    const double l1 = std::max(decomposition.lambda[1], 0.0);
    const double lmax = std::max(l0, l1);

    const int n_grid = options.n_grid;
    const long long cells_out = std::max(n_grid - 1, 1);
    double wanted = lmax * t_final / options.max_jump_prob;
    if (!(wanted >= 0.0))
        wanted = 0.0;
    long long base = std::max<long long>(options.min_steps, cells_out);
    if (wanted > static_cast<double>(base)) {
        if (wanted > 2e9)
            throw validation_error("simulate_trajectories: required step count exceeds 2e9; "
                                   "raise max_jump_prob or shorten t_final");
        base = static_cast<long long>(std::ceil(wanted));
    }
    const long long per_cell = (base + cells_out - 1) / cells_out;
    const long long n_steps = per_cell * cells_out;
    const double dt = t_final / static_cast<double>(n_steps);
    const double w = options.omega0_tilde;

    // exact no-jump propagator: sum_i lambda_i L_i^dag L_i is diagonal
    const auto& op0 = decomposition.ops[0];
    const auto& op1 = decomposition.ops[1];
    const double r1 = l0 * std::norm(op0.c_plus) + l1 * std::norm(op1.c_plus);
    const double r2 = l0 * std::norm(op0.c_minus) + l1 * std::norm(op1.c_minus);
    const complexd prop1 = std::exp(complexd(-0.5 * r1 * dt, 0.5 * w * dt));
    const complexd prop2 = std::exp(complexd(-0.5 * r2 * dt, -0.5 * w * dt));
    const double j0p = l0 * std::norm(op0.c_plus) * dt;
    const double j0m = l0 * std::norm(op0.c_minus) * dt;
    const double j1p = l1 * std::norm(op1.c_plus) * dt;
    const double j1m = l1 * std::norm(op1.c_minus) * dt;

    const std::size_t n = static_cast<std::size_t>(n_trajectories);
    std::vector<double> s22(n * n_grid);
    std::vector<complexd> s12(n * n_grid);
    trajectory_result out;
    out.emissions.resize(n);

    auto run_one = [&](std::size_t idx) {
        std::mt19937_64 eng(trajectory_seed(seed, idx));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        complexd c1, c2;
        sample_initial_state(rho0, unif(eng), c1, c2);

        double* row22 = &s22[idx * n_grid];
        complexd* row12 = &s12[idx * n_grid];
        auto record = [&](long long slot) {
            row22[slot] = std::norm(c2);
            row12[slot] = c1 * std::conj(c2);
        };
        if (n_grid > 1)
            record(0);
        auto& ems = out.emissions[idx];
        for (long long k = 0; k < n_steps; ++k) {
            const double n1 = std::norm(c1), n2 = std::norm(c2);
            const double p0 = j0p * n1 + j0m * n2;
            const double p1 = j1p * n1 + j1m * n2;
            const double u = unif(eng);
            if (u < p0 + p1) {
                const int ch = u < p0 ? 0 : 1;
                const auto& op = ch == 0 ? op0 : op1;
                const complexd nc1 = op.c_minus * c2; // sigma- lowers
                const complexd nc2 = op.c_plus * c1;  // sigma+ raises
                const double nn = std::hypot(std::abs(nc1), std::abs(nc2));
                c1 = nc1 / nn;
                c2 = nc2 / nn;
                ems.push_back({dt * static_cast<double>(k + 1), ch});
            } else {
                c1 *= prop1;
                c2 *= prop2;
                const double nn = std::hypot(std::abs(c1), std::abs(c2));
                c1 /= nn;
                c2 /= nn;
            }
            const long long done = k + 1;
            if (n_grid > 1) {
                if (done % per_cell == 0)
                    record(done / per_cell);
            } else if (done == n_steps) {
                record(0);
            }
        }
    };

    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run_range = [&](std::size_t lo, std::size_t hi) {
        try {
            for (std::size_t i = lo; i < hi; ++i)
                run_one(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error)
                first_error = std::current_exception();
        }
    };
    const std::size_t nt =
        std::min<std::size_t>(detail::resolve_thread_count(options.n_threads), n);
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

    out.times.resize(n_grid);
    if (n_grid == 1)
        out.times[0] = t_final;
    else
        for (int g = 0; g < n_grid; ++g)
            out.times[g] = t_final * (static_cast<double>(g) / (n_grid - 1));

    // reduction in ascending trajectory order: bitwise independent of the
    // thread partition above
    out.mean.resize(n_grid);
    out.stderr_rho22.resize(n_grid);
    const double dn = static_cast<double>(n);
    for (int g = 0; g < n_grid; ++g) {
        double sum = 0.0, sumsq = 0.0;
        complexd sum12 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = s22[i * n_grid + g];
            sum += v;
            sumsq += v * v;
            sum12 += s12[i * n_grid + g];
        }
        const double mean22 = sum / dn;
        out.mean[g].rho22 = mean22;
        out.mean[g].rho11 = 1.0 - mean22;
        out.mean[g].rho12 = sum12 / dn;
        double var = 0.0;
        if (n > 1)
            var = std::max(0.0, (sumsq - sum * sum / dn) / (dn - 1.0));
        out.stderr_rho22[g] = std::sqrt(var / dn);
    }
    return out;
}

} // namespace gaugeme
