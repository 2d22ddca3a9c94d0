#include "gaugeme/gauge.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace gaugeme {

const char* to_string(gauge_kind kind) {
    switch (kind) {
    case gauge_kind::minimal_coupling: return "minimal_coupling";
    case gauge_kind::multipolar: return "multipolar";
    case gauge_kind::rotating_wave: return "rotating_wave";
    case gauge_kind::custom: return "custom";
    }
    return "unknown";
}

gauge_kind gauge_kind_from_string(const std::string& name) {
    if (name == "minimal_coupling")
        return gauge_kind::minimal_coupling;
    if (name == "multipolar")
        return gauge_kind::multipolar;
    if (name == "rotating_wave")
        return gauge_kind::rotating_wave;
    if (name == "custom")
        return gauge_kind::custom;
    throw lookup_error("unknown gauge '" + name +
                       "'; expected minimal_coupling, multipolar, rotating_wave, or custom");
}

gauge_representation gauge_representation::minimal_coupling() {
    gauge_representation g;
    g.kind = gauge_kind::minimal_coupling;
    return g;
}

gauge_representation gauge_representation::multipolar() {
    gauge_representation g;
    g.kind = gauge_kind::multipolar;
    return g;
}

gauge_representation gauge_representation::rotating_wave() {
    gauge_representation g;
    g.kind = gauge_kind::rotating_wave;
    return g;
}

gauge_representation gauge_representation::custom(std::function<double(double, double)> alpha,
                                                  std::string family_tag) {
    gauge_representation g;
    g.kind = gauge_kind::custom;
    g.custom_alpha = std::move(alpha);
    g.family = std::move(family_tag);
    return g;
}

gauge_representation gauge_representation::custom_from_family(const std::string& family_tag) {
    if (family_tag == "rotating_wave")
        return custom([](double omega0, double omega_k) { return omega0 / (omega0 + omega_k); },
                      family_tag);
    if (family_tag.rfind("constant:", 0) == 0) {
        const std::string value = family_tag.substr(9);
        char* end = nullptr;
        const double c = std::strtod(value.c_str(), &end);
        if (value.empty() || end == nullptr || *end != '\0' || !std::isfinite(c))
            throw parse_error("bad alpha family '" + family_tag +
                              "': constant:<c> needs a finite number");
        return custom([c](double, double) { return c; }, family_tag);
    }
    throw parse_error("unknown alpha family '" + family_tag +
                      "'; expected constant:<c> or rotating_wave");
}

namespace {

void check_frequencies(double omega0, double omega_k) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0))
        throw validation_error("omega0 must be positive and finite");
    if (!(omega_k > 0.0) || !std::isfinite(omega_k))
        throw validation_error("omega_k must be positive and finite");
}

} // namespace

double alpha_of(const gauge_representation& gauge, double omega0, double omega_k) {
    check_frequencies(omega0, omega_k);
    switch (gauge.kind) {
    case gauge_kind::minimal_coupling: return 0.0;
    case gauge_kind::multipolar: return 1.0;
    case gauge_kind::rotating_wave: return omega0 / (omega0 + omega_k);
    case gauge_kind::custom:
        if (!gauge.custom_alpha)
            throw validation_error("custom gauge has no alpha function");
        return gauge.custom_alpha(omega0, omega_k);
    }
    throw validation_error("invalid gauge kind");
}

coupling_pair coupling_coefficients(const gauge_representation& gauge, double omega0,
                                    double omega_k) {
    const double alpha = alpha_of(gauge, omega0, omega_k);
    // one generic formula for every kind, so equal alphas give bitwise-equal
    // coefficients no matter how the gauge was constructed
    const double down = std::sqrt(omega0 / omega_k);
    const double up = std::sqrt(omega_k / omega0);
    coupling_pair out;
    out.u_minus = (1.0 - alpha) * down + alpha * up;
    out.u_plus = (1.0 - alpha) * down - alpha * up;
    return out;
}

double spectral_weight(const gauge_representation& gauge, double omega0, double omega_k,
                       int sign) {
    if (sign != -1 && sign != 1)
        throw validation_error("sign must be -1 (resonant) or +1 (counter-rotating)");
    check_frequencies(omega0, omega_k);
    if (sign == 1 && gauge.kind == gauge_kind::rotating_wave)
        return 0.0; // u+ vanishes identically, keep the zero exact
    if (sign == -1 && omega_k == omega0)
        throw singular_point_error("f- is singular at omega_k == omega0");
    const auto u = coupling_coefficients(gauge, omega0, omega_k);
    const double numer = (sign == -1 ? u.u_minus : u.u_plus) * omega_k;
    const double denom = omega0 + sign * omega_k;
    return (numer / denom) * (numer / denom);
}

} // namespace gaugeme
