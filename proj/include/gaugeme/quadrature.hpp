#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "gaugeme/errors.hpp"

// Adaptive quadrature building blocks used by the rate integrals:
//   - integrate / integrate_segmented: globally adaptive Gauss-Kronrod 7/15
//     (QUADPACK-style error estimator, worst-interval-first refinement).
//   - filon_cos: adaptive Filon rule for int g(x) cos(k x) dx with k so large
//     that resolving every oscillation would be hopeless. Quadratic fit of g
//     per panel, cosine moments integrated exactly.
//   - principal_value: Cauchy PV of int p(x)/(s - x) dx by analytic
//     subtraction of the pole.

namespace gaugeme::quad {

struct quad_options {
    double rel_tol = 1e-6;
    double abs_tol = 0.0;
    std::size_t max_intervals = 10000;
};

struct quad_result {
    double value = 0.0;
    double abs_error = 0.0; // estimated, not guaranteed
    std::size_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// Kronrod abscissae (positive half) and weights; odd entries are the
// embedded 7-point Gauss nodes.
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct panel {
    double lo, hi;
    double value;
    double error;
    bool operator<(const panel& other) const { return error < other.error; }
};

// 15-point Kronrod rule with embedded 7-point Gauss rule on [lo, hi].
template <class F>
panel gk15(F&& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    double fv[15]; // fv[2j] at -xgk[j], fv[2j+1] at +xgk[j], fv[14] center
    for (int j = 0; j < 7; ++j) {
        fv[2 * j] = f(center - half * xgk[j]);
        fv[2 * j + 1] = f(center + half * xgk[j]);
    }
    fv[14] = f(center);

    double resk = wgk[7] * fv[14];
    double resabs = wgk[7] * std::abs(fv[14]);
    for (int j = 0; j < 7; ++j) {
        resk += wgk[j] * (fv[2 * j] + fv[2 * j + 1]);
        resabs += wgk[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
    }
    double resg = wg[3] * fv[14];
    for (int j = 0; j < 3; ++j)
        resg += wg[j] * (fv[2 * (2 * j + 1)] + fv[2 * (2 * j + 1) + 1]);

    // QUADPACK scaled error estimate: robust against the G and K rules
    // agreeing by accident on oscillatory integrands.
    const double mean = 0.5 * resk;
    double resasc = wgk[7] * std::abs(fv[14] - mean);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
    resasc *= half;

    double err = std::abs(resk - resg) * half;
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round = 50.0 * std::numeric_limits<double>::epsilon() * resabs * half;
    err = std::max(err, round);

    return panel{lo, hi, resk * half, err};
}

} // namespace detail

// Globally adaptive GK15 seeded with the given breakpoints (ascending,
// size >= 2). Refines the worst panel first until the summed error estimate
// meets max(abs_tol, rel_tol * |integral|) or the panel budget runs out.
template <class F>
quad_result integrate_segmented(F&& f, const std::vector<double>& breakpoints,
                                quad_options opts = {}) {
    quad_result out;
    if (breakpoints.size() < 2)
        return out;

    std::priority_queue<detail::panel> heap;
    double total = 0.0, total_err = 0.0, stuck_err = 0.0;
    std::size_t n_panels = 0;

    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1]))
            continue;
        auto p = detail::gk15(f, breakpoints[i], breakpoints[i + 1]);
        out.evaluations += 15;
        total += p.value;
        total_err += p.error;
        heap.push(p);
        ++n_panels;
    }

    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };

    while (!heap.empty() && total_err > tolerance() && n_panels < opts.max_intervals) {
        detail::panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const double width_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                                   std::max(std::abs(worst.lo), std::abs(worst.hi));
        if (mid <= worst.lo || mid >= worst.hi || (worst.hi - worst.lo) < width_floor) {
            // cannot subdivide further in double precision
            stuck_err += worst.error;
            total_err -= worst.error;
            continue;
        }
        auto left = detail::gk15(f, worst.lo, mid);
        auto right = detail::gk15(f, mid, worst.hi);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n_panels;
    }

    out.value = total;
    out.abs_error = total_err + stuck_err;
    out.converged = out.abs_error <= tolerance();
    return out;
}

template <class F>
quad_result integrate(F&& f, double a, double b, quad_options opts = {}) {
    return integrate_segmented(std::forward<F>(f), std::vector<double>{a, b}, opts);
}

namespace detail {

// One Filon panel [x1 - h, x1 + h]: fit g by the quadratic through the three
// panel points, integrate quadratic * cos(k x) exactly. For small phase
// k*h the moment formulas cancel badly, so fall back to Simpson on g cos.
inline double filon_panel(double x1, double h, double k, double g0, double g1, double g2) {
    const double theta = k * h;
    if (std::abs(theta) < 0.5) {
        auto f = [&](double x, double gv) { return gv * std::cos(k * x); };
        return (h / 3.0) * (f(x1 - h, g0) + 4.0 * f(x1, g1) + f(x1 + h, g2));
    }
    const double c0 = g1;
    const double c1 = (g2 - g0) / (2.0 * h);
    const double c2 = (g0 - 2.0 * g1 + g2) / (2.0 * h * h);
    const double s = std::sin(theta), c = std::cos(theta);
    const double i0 = s / k;                                               // int cos(kt), 0..h
    const double i2 = (h * h / k) * s + (2.0 * h / (k * k)) * c - 2.0 * s / (k * k * k);
    const double i1s = s / (k * k) - h * c / k;                            // int t sin(kt), 0..h
    return std::cos(k * x1) * 2.0 * (c0 * i0 + c2 * i2) - std::sin(k * x1) * 2.0 * c1 * i1s;
}

template <class F>
void filon_adaptive(F&& g, double lo, double hi, double k, double glo, double gmid,
                    double ghi, double whole, double tol, int depth, quad_result& out) {
    const double mid = 0.5 * (lo + hi);
    const double h4 = 0.25 * (hi - lo);
    const double gl = g(mid - h4);
    const double gr = g(mid + h4);
    out.evaluations += 2;
    const double left = filon_panel(lo + h4, h4, k, glo, gl, gmid);
    const double right = filon_panel(mid + h4, h4, k, gmid, gr, ghi);
    const double diff = std::abs(whole - (left + right));
    if ((diff <= tol && depth > 2) || depth >= 48) {
        // Richardson step: the panel rule is 4th order, so the refinement
        // difference overestimates the remaining error ~15x.
        out.value += left + right + (left + right - whole) / 15.0;
        out.abs_error += diff / 15.0;
        return;
    }
    filon_adaptive(g, lo, mid, k, glo, gl, gmid, left, 0.5 * tol, depth + 1, out);
    filon_adaptive(g, mid, hi, k, gmid, gr, ghi, right, 0.5 * tol, depth + 1, out);
}

} // namespace detail

// int_a^b g(x) cos(k x) dx for smooth g and arbitrary k. abs_tol == 0 uses
// rel_tol against a crude first-pass magnitude.
template <class F>
quad_result filon_cos(F&& g, double a, double b, double k, quad_options opts = {}) {
    quad_result out;
    if (!(a < b))
        return out;
    const double mid = 0.5 * (a + b);
    const double ga = g(a), gm = g(mid), gb = g(b);
    out.evaluations += 3;
    const double whole = detail::filon_panel(mid, 0.5 * (b - a), k, ga, gm, gb);
    double tol = opts.abs_tol;
    if (tol <= 0.0) {
        // scale from a coarse magnitude estimate of int |g| / oscillation count
        const double scale = (std::abs(ga) + 2.0 * std::abs(gm) + std::abs(gb)) * (b - a) * 0.25;
        tol = opts.rel_tol * std::max(scale / std::max(1.0, std::abs(k) * (b - a) / 6.283),
                                      std::abs(whole));
    }
    detail::filon_adaptive(g, a, b, k, ga, gm, gb, whole, tol, 0, out);
    out.converged = true;
    return out;
}

// Cauchy principal value of int_a^b p(x) / (s - x) dx with a < s < b:
// subtract the pole analytically,
//   PV = int (p(x) - p(s)) / (s - x) dx + p(s) ln|(s - a)/(b - s)|.
// The difference quotient is smooth for smooth p; very close to s it is
// replaced by the symmetric-difference derivative to dodge cancellation.
template <class F>
quad_result principal_value(F&& p, double s, double a, double b, quad_options opts = {}) {
    if (!(a < s && s < b))
        throw validation_error("principal_value: pole must lie strictly inside (a, b)");
    const double ps = p(s);
    const double guard = 1e-7 * (b - a);
    auto reg = [&](double x) {
        if (std::abs(x - s) < guard)
            return -(p(s + guard) - p(s - guard)) / (2.0 * guard);
        return (p(x) - ps) / (s - x);
    };
    auto out = integrate_segmented(reg, std::vector<double>{a, s, b}, opts);
    out.value += ps * std::log((s - a) / (b - s));
    return out;
}

} // namespace gaugeme::quad
