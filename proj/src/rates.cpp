#include "gaugeme/rates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "gaugeme/constants.hpp"
#include "gaugeme/errors.hpp"
#include "gaugeme/quadrature.hpp"

namespace gaugeme {

namespace {

using constants::pi;

// sin(x)/x, stable through x == 0.
double sinc(double x) {
    if (std::abs(x) < 1e-4)
        return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

void check_rate_preconditions(const physical_params& params, const rate_options& options) {
    params.validate();
    if (!(options.rel_tol > 0.0) || !(options.rel_tol < 1.0))
        throw validation_error("rate_options.rel_tol must lie in (0, 1)");
    if (options.window_half_periods < 1)
        throw validation_error("rate_options.window_half_periods must be >= 1");
    const double phase = params.omega0 * params.delta_t;
    if (phase < 100.0) {
        std::ostringstream os;
        os << "omega0 * delta_t = " << phase
           << " is below the coarse-graining regime (need >= 100)";
        throw validation_error(os.str());
    }
}

// u+(w) u-(w) as a difference of squares; avoids forming the individually
// huge sqrt factors near w == 0.
double counter_co_product(const gauge_representation& gauge, double omega0, double w) {
    const double al = alpha_of(gauge, omega0, w);
    const double om = 1.0 - al;
    return om * om * (omega0 / w) - al * al * (w / omega0);
}

// Breakpoints across the resonant window, anchored on omega0 so every
// segment spans at most one oscillation period 2 pi / delta_t.
std::vector<double> window_breakpoints(double lo, double hi, double omega0, double delta_t) {
    const double period = 2.0 * pi / delta_t;
    std::vector<double> pts;
    pts.push_back(lo);
    const double j0 = std::ceil((lo - omega0) / period);
    const double j1 = std::floor((hi - omega0) / period);
    for (double j = j0; j <= j1; j += 1.0) {
        const double w = omega0 + j * period;
        if (w > pts.back() && w < hi)
            pts.push_back(w);
    }
    pts.push_back(hi);
    return pts;
}

// Seed breakpoints for a smooth tail [a, b] that excludes omega0: a
// geometric ladder in the distance to the resonance (the weights vary
// fastest there) plus a decade ladder across wide ultraviolet spans.
std::vector<double> tail_breakpoints(double a, double b, double omega0) {
    std::vector<double> cand;
    const double da = std::abs(omega0 - a);
    const double db = std::abs(omega0 - b);
    double dlo = std::min(da, db);
    double dhi = std::max(da, db);
    if (dlo <= 0.0)
        dlo = dhi * 1e-12;
    if (dhi > dlo * (1.0 + 1e-12)) {
        constexpr int n = 24;
        const bool below = b <= omega0;
        for (int i = 1; i < n; ++i) {
            const double d = dlo * std::pow(dhi / dlo, static_cast<double>(i) / n);
            cand.push_back(below ? omega0 - d : omega0 + d);
        }
    }
    for (double w = std::max(a, b * 1e-12); w < b; w *= 10.0)
        cand.push_back(w);
    std::vector<double> pts{a};
    std::sort(cand.begin(), cand.end());
    for (double w : cand) {
        if (w > a && w < b && w > pts.back() * (1.0 + 1e-13))
            pts.push_back(w);
    }
    pts.push_back(b);
    return pts;
}

quad::quad_options quad_opts(const rate_options& options, std::size_t max_intervals = 10000) {
    quad::quad_options qo;
    qo.rel_tol = options.rel_tol;
    qo.max_intervals = max_intervals;
    return qo;
}

void require_converged(const quad::quad_result& r, const char* which) {
    if (!r.converged) {
        std::ostringstream os;
        os << which << " quadrature did not reach the requested tolerance";
        throw numerical_error(os.str(), r.abs_error);
    }
}

struct accumulator {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t evaluations = 0;
};

// int_a^b f_s(w)/2 dw with the dropped oscillatory remainder
// int f_s/2 cos((omega0 + s w) delta_t) dw bounded by parts into abs_error:
// |bound| <= (|f(a)| + |f(b)| + TV(f)) / (2 delta_t).
void add_mean_tail(accumulator& acc, const physical_params& params,
                   const gauge_representation& gauge, int sign, double a, double b,
                   const rate_options& options) {
    auto f = [&](double w) { return spectral_weight(gauge, params.omega0, w, sign); };
    const auto pts = tail_breakpoints(a, b, params.omega0);
    auto r = quad::integrate_segmented([&](double w) { return 0.5 * f(w); }, pts,
                                       quad_opts(options, 20000));
    require_converged(r, "spectral tail");
    double tv = 0.0;
    double prev = 0.0;
    bool have_prev = false;
    double f_first = 0.0, f_last = 0.0;
    for (double w : pts) {
        const double fw = w > 0.0 ? f(w) : 0.0; // f -> 0 as w -> 0
        if (!have_prev) {
            f_first = fw;
            have_prev = true;
        } else {
            tv += std::abs(fw - prev);
        }
        prev = fw;
        f_last = fw;
    }
    acc.value += r.value;
    acc.abs_error += r.abs_error +
                     (std::abs(f_first) + std::abs(f_last) + tv) / (2.0 * params.delta_t);
    acc.evaluations += r.evaluations + pts.size();
}

} // namespace

void physical_params::validate() const {
    std::vector<std::string> bad;
    auto fin = [](double x) { return std::isfinite(x); };
    if (!(omega0 > 0.0) || !fin(omega0))
        bad.push_back("omega0 must be positive and finite");
    if (omega0_tilde < 0.0 || !fin(omega0_tilde))
        bad.push_back("omega0_tilde must be >= 0 (0 means unset) and finite");
    if (!(gamma > 0.0) || !fin(gamma))
        bad.push_back("gamma must be positive and finite");
    if (!(delta_t > 0.0) || !fin(delta_t))
        bad.push_back("delta_t must be positive and finite");
    if (omega_min < 0.0 || !fin(omega_min))
        bad.push_back("omega_min must be >= 0 and finite");
    if (!(omega_max >= omega_min) || !fin(omega_max))
        bad.push_back("omega_max must be finite and >= omega_min");
    if (!fin(dipole_factor.real()) || !fin(dipole_factor.imag()) ||
        std::abs(dipole_factor) > 1.0 + 1e-12)
        bad.push_back("dipole_factor must be finite with |dipole_factor| <= 1");
    if (!bad.empty()) {
        std::string msg = "invalid physical_params: ";
        for (std::size_t i = 0; i < bad.size(); ++i) {
            if (i)
                msg += "; ";
            msg += bad[i];
        }
        throw validation_error(msg);
    }
}

std::vector<std::string> physical_params::warnings() const {
    std::vector<std::string> out;
    const double gdt = gamma * delta_t;
    if (gdt > 0.1) {
        std::ostringstream os;
        os << "gamma * delta_t = " << gdt
           << " exceeds 0.1; the second-order (one-photon) rates lose accuracy";
        out.push_back(os.str());
    }
    return out;
}

double gamma_from_dipole(double omega0, double dipole_abs) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw validation_error("gamma_from_dipole: omega0 must be positive and finite");
    if (!(dipole_abs > 0.0) || !std::isfinite(dipole_abs))
        throw validation_error("gamma_from_dipole: dipole_abs must be positive and finite");
    const double e2 = constants::elementary_charge * constants::elementary_charge;
    const double c3 = constants::speed_of_light * constants::speed_of_light *
                      constants::speed_of_light;
    return e2 * omega0 * omega0 * omega0 * dipole_abs * dipole_abs /
           (3.0 * pi * constants::epsilon0 * constants::hbar * c3);
}

double dipole_from_gamma(double omega0, double gamma) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw validation_error("dipole_from_gamma: omega0 must be positive and finite");
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw validation_error("dipole_from_gamma: gamma must be positive and finite");
    const double e2 = constants::elementary_charge * constants::elementary_charge;
    const double c3 = constants::speed_of_light * constants::speed_of_light *
                      constants::speed_of_light;
    return std::sqrt(3.0 * pi * constants::epsilon0 * constants::hbar * c3 * gamma /
                     (e2 * omega0 * omega0 * omega0));
}

rate_result transition_rate_detailed(const physical_params& params,
                                     const gauge_representation& gauge, int sign,
                                     const rate_options& options) {
    if (sign != -1 && sign != 1)
        throw validation_error("transition_rate: sign must be -1 or +1");
    check_rate_preconditions(params, options);
    if (params.omega_min == params.omega_max)
        return {};
    if (sign == 1 && gauge.kind == gauge_kind::rotating_wave)
        return {}; // u+ vanishes identically: no excitation channel

    const double w0 = params.omega0;
    const double dt = params.delta_t;
    const double pref = 2.0 * params.gamma / (pi * w0 * w0 * dt);

    accumulator acc;
    if (sign == -1) {
        const double half_width = options.window_half_periods * pi / dt;
        const double wlo = std::max(params.omega_min, w0 - half_width);
        const double whi = std::min(params.omega_max, w0 + half_width);
        if (wlo < whi) {
            // resonant window in the singularity-free sinc^2 form:
            // f-(w) sin^2((w0-w) dt/2) = (u-(w) w (dt/2) sinc((w0-w) dt/2))^2
            auto win = [&](double w) {
                const auto u = coupling_coefficients(gauge, w0, w);
                const double amp = u.u_minus * w * 0.5 * dt * sinc(0.5 * dt * (w0 - w));
                return amp * amp;
            };
            const auto pts = window_breakpoints(wlo, whi, w0, dt);
            auto r = quad::integrate_segmented(win, pts,
                                               quad_opts(options, pts.size() + 10000));
            require_converged(r, "resonant window");
            acc.value += r.value;
            acc.abs_error += r.abs_error;
            acc.evaluations += r.evaluations;
            if (params.omega_min < wlo)
                add_mean_tail(acc, params, gauge, sign, params.omega_min, wlo, options);
            if (whi < params.omega_max)
                add_mean_tail(acc, params, gauge, sign, whi, params.omega_max, options);
        } else {
            // band misses the resonant window entirely; f- is regular on it
            add_mean_tail(acc, params, gauge, sign, params.omega_min, params.omega_max,
                          options);
        }
    } else {
        // off-resonant denominator: sin^2 -> 1/2 across the whole band
        add_mean_tail(acc, params, gauge, sign, params.omega_min, params.omega_max, options);
    }
    return {pref * acc.value, pref * acc.abs_error, acc.evaluations};
}

double transition_rate(const physical_params& params, const gauge_representation& gauge,
                       int sign, const rate_options& options) {
    return transition_rate_detailed(params, gauge, sign, options).value;
}

double a_plus_closed_form(const physical_params& params, const gauge_representation& gauge) {
    check_rate_preconditions(params, rate_options{});
    if (params.omega_min == params.omega_max)
        return 0.0;
    const double x1 = params.omega_min / params.omega0 + 1.0;
    const double x2 = params.omega_max / params.omega0 + 1.0;
    double bracket = 0.0;
    switch (gauge.kind) {
    case gauge_kind::minimal_coupling:
        bracket = (1.0 / x2 + std::log(x2)) - (1.0 / x1 + std::log(x1));
        break;
    case gauge_kind::multipolar: {
        auto F = [](double x) {
            return 1.0 / x - 3.0 * x + 0.5 * x * x + 3.0 * std::log(x);
        };
        bracket = F(x2) - F(x1);
        break;
    }
    default:
        throw validation_error(
            "a_plus_closed_form is only available for minimal_coupling and multipolar");
    }
    return params.gamma / (pi * params.omega0 * params.delta_t) * bracket;
}

std::complex<double> cross_coefficient(const physical_params& params,
                                       const gauge_representation& gauge,
                                       const rate_options& options) {
    check_rate_preconditions(params, options);
    if (params.omega_min == params.omega_max)
        return {0.0, 0.0};
    if (gauge.kind == gauge_kind::rotating_wave)
        return {0.0, 0.0}; // u+ u- vanishes identically

    const double w0 = params.omega0;
    const double dt = params.delta_t;
    const double pref = 2.0 * params.gamma / (pi * w0 * w0 * dt);
    const double cos_w0dt = std::cos(w0 * dt);

    // h(w) = w^2 u+ u- / (w0^2 - w^2); regular limit 0 at w == 0.
    auto h = [&](double w) {
        if (w <= 0.0)
            return 0.0;
        return counter_co_product(gauge, w0, w) * w * w / ((w0 - w) * (w0 + w));
    };

    accumulator acc;
    const double half_width = options.window_half_periods * pi / dt;
    const double wlo = std::max(params.omega_min, w0 - half_width);
    const double whi = std::min(params.omega_max, w0 + half_width);

    if (wlo < whi) {
        // window integrand with the w0 - w pole folded into a sinc
        auto win = [&](double w) {
            const double envelope = counter_co_product(gauge, w0, w) * w * w / (w0 + w);
            return envelope * std::sin(0.5 * dt * (w0 + w)) * 0.5 * dt *
                   sinc(0.5 * dt * (w0 - w));
        };
        const auto pts = window_breakpoints(wlo, whi, w0, dt);
        auto r = quad::integrate_segmented(win, pts, quad_opts(options, pts.size() + 10000));
        require_converged(r, "cross-coefficient window");
        acc.value += r.value;
        acc.abs_error += r.abs_error;
        acc.evaluations += r.evaluations;
    }

    // tails via sin sin = (cos(w dt) - cos(w0 dt)) / 2: a smooth part done
    // adaptively and an oscillatory part done by Filon quadrature
    auto add_tail = [&](double a, double b) {
        if (!(a < b))
            return;
        const auto pts = tail_breakpoints(a, b, w0);
        auto smooth = quad::integrate_segmented(h, pts, quad_opts(options, 20000));
        require_converged(smooth, "cross-coefficient tail");
        acc.value += -0.5 * cos_w0dt * smooth.value;
        acc.abs_error += 0.5 * smooth.abs_error;
        acc.evaluations += smooth.evaluations;

        auto fopts = quad_opts(options);
        fopts.abs_tol = options.rel_tol *
                            (std::abs(acc.value) + 0.5 * std::abs(smooth.value)) +
                        1e-300;
        auto osc = quad::filon_cos(h, a, b, dt, fopts);
        acc.value += 0.5 * osc.value;
        acc.abs_error += 0.5 * osc.abs_error;
        acc.evaluations += osc.evaluations;
    };
    if (wlo < whi) {
        add_tail(params.omega_min, wlo);
        add_tail(whi, params.omega_max);
    } else {
        add_tail(params.omega_min, params.omega_max);
    }

    return -pref * std::exp(std::complex<double>(0.0, -w0 * dt)) * params.dipole_factor *
           acc.value;
}

namespace {

// PV (or plain, when the band misses the resonance) integral of
// w^2 u+ u- / (w0^2 - w^2) over the band. Shared by the stationary-phase
// cross coefficient and its magnitude bound.
double resonance_weighted_integral(const physical_params& params,
                                   const gauge_representation& gauge,
                                   const rate_options& options) {
    const double w0 = params.omega0;
    auto p = [&](double w) {
        if (w <= 0.0)
            return 0.0;
        return counter_co_product(gauge, w0, w) * w * w / (w0 + w);
    };
    if (params.omega_min < w0 && w0 < params.omega_max) {
        auto r = quad::principal_value(p, w0, params.omega_min, params.omega_max,
                                       quad_opts(options, 20000));
        require_converged(r, "principal-value");
        return r.value;
    }
    if (params.omega_min == w0 || params.omega_max == w0)
        throw validation_error("cross_coefficient_approx: band edge sits exactly on the "
                               "resonance; the principal value does not exist");
    auto h = [&](double w) { return p(w) / (w0 - w); };
    auto r = quad::integrate_segmented(
        h, tail_breakpoints(params.omega_min, params.omega_max, w0),
        quad_opts(options, 20000));
    require_converged(r, "off-resonant cross integral");
    return r.value;
}

} // namespace

std::complex<double> cross_coefficient_approx(const physical_params& params,
                                              const gauge_representation& gauge,
                                              const rate_options& options) {
    check_rate_preconditions(params, options);
    if (params.omega_min == params.omega_max)
        return {0.0, 0.0};
    if (gauge.kind == gauge_kind::rotating_wave)
        return {0.0, 0.0};
    const double w0dt = params.omega0 * params.delta_t;
    const double pref = params.gamma /
                        (pi * params.omega0 * params.omega0 * params.delta_t);
    const double pv = resonance_weighted_integral(params, gauge, options);
    return pref * std::exp(std::complex<double>(0.0, -w0dt)) * std::cos(w0dt) *
           params.dipole_factor * pv;
}

double cross_coefficient_bound(const physical_params& params,
                               const gauge_representation& gauge,
                               const rate_options& options) {
    check_rate_preconditions(params, options);
    if (params.omega_min == params.omega_max)
        return 0.0;
    if (gauge.kind == gauge_kind::rotating_wave)
        return 0.0;
    const double pref = params.gamma /
                        (pi * params.omega0 * params.omega0 * params.delta_t);
    return pref * std::abs(resonance_weighted_integral(params, gauge, options));
}

rate_set compute_rate_set(const physical_params& params, const gauge_representation& gauge,
                          const rate_options& options) {
    rate_set out;
    out.a_minus = transition_rate(params, gauge, -1, options);
    out.a_plus = transition_rate(params, gauge, 1, options);
    out.b = cross_coefficient(params, gauge, options);
    out.omega0_tilde = params.effective_omega0_tilde();
    return out;
}

} // namespace gaugeme
