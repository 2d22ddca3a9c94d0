#include <cmath>
#include <random>

#include "doctest.h"
#include "gaugeme/gauge.hpp"

using namespace gaugeme;

namespace {

// Independent closed forms for the three named representations, written out
// separately from the library's generic (1 - alpha) formula.
double oracle_u_minus(gauge_kind kind, double w0, double w) {
    switch (kind) {
    case gauge_kind::minimal_coupling: return std::sqrt(w0 / w);
    case gauge_kind::multipolar: return std::sqrt(w / w0);
    case gauge_kind::rotating_wave: return 2.0 * std::sqrt(w0 * w) / (w0 + w);
    default: return 0.0;
    }
}

double oracle_u_plus(gauge_kind kind, double w0, double w) {
    switch (kind) {
    case gauge_kind::minimal_coupling: return std::sqrt(w0 / w);
    case gauge_kind::multipolar: return -std::sqrt(w / w0);
    case gauge_kind::rotating_wave: return 0.0;
    default: return 0.0;
    }
}

double oracle_f(gauge_kind kind, double w0, double w, int sign) {
    const double dm = w0 - w, dp = w0 + w;
    switch (kind) {
    case gauge_kind::minimal_coupling:
        return sign < 0 ? w0 * w / (dm * dm) : w0 * w / (dp * dp);
    case gauge_kind::multipolar:
        return sign < 0 ? w * w * w / (w0 * dm * dm) : w * w * w / (w0 * dp * dp);
    case gauge_kind::rotating_wave:
        return sign < 0 ? 4.0 * w0 * w * w * w / ((dm * dp) * (dm * dp)) : 0.0;
    default: return 0.0;
    }
}

} // namespace

TEST_CASE("alpha for the named representations") {
    const double w0 = 3.7e15;
    CHECK(alpha_of(gauge_representation::minimal_coupling(), w0, 1e14) == 0.0);
    CHECK(alpha_of(gauge_representation::multipolar(), w0, 1e14) == 1.0);
    // at resonance the rotating-wave mixing is exactly 1/2
    CHECK(alpha_of(gauge_representation::rotating_wave(), w0, w0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(alpha_of(gauge_representation::rotating_wave(), w0, 3.0 * w0) ==
          doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("alpha rejects non-physical frequencies") {
    const auto g = gauge_representation::rotating_wave();
    CHECK_THROWS_AS((void)alpha_of(g, -1.0, 1e14), validation_error);
    CHECK_THROWS_AS((void)alpha_of(g, 3.7e15, 0.0), validation_error);
    CHECK_THROWS_AS((void)alpha_of(g, 3.7e15, std::nan("")), validation_error);
    CHECK_THROWS_AS((void)coupling_coefficients(g, 3.7e15, -2.0), validation_error);
    CHECK_THROWS_AS((void)spectral_weight(g, 0.0, 1e14, -1), validation_error);
}

TEST_CASE("coupling coefficients at reference points") {
    const double w0 = 2.0e15;
    auto min = coupling_coefficients(gauge_representation::minimal_coupling(), w0, w0);
    CHECK(min.u_minus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(min.u_plus == doctest::Approx(1.0).epsilon(1e-15));

    auto rw = coupling_coefficients(gauge_representation::rotating_wave(), w0, w0);
    CHECK(rw.u_minus == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rw.u_plus == 0.0);

    auto mult = coupling_coefficients(gauge_representation::multipolar(), w0, 4.0 * w0);
    CHECK(mult.u_minus == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(mult.u_plus == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("gauge-independent identity of the coupling coefficients") {
    // (u- + u+) sqrt(w/w0) + (u- - u+) sqrt(w0/w) = 2 for every alpha
    const double w0 = 3.7e15;
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> log_ratio(-6.0, 6.0);
    const gauge_representation gauges[] = {
        gauge_representation::minimal_coupling(),
        gauge_representation::multipolar(),
        gauge_representation::rotating_wave(),
        gauge_representation::custom_from_family("constant:0.3"),
        gauge_representation::custom_from_family("constant:-1.7"),
    };
    for (const auto& g : gauges) {
        for (int i = 0; i < 2000; ++i) {
            const double w = w0 * std::pow(10.0, log_ratio(rng));
            const auto u = coupling_coefficients(g, w0, w);
            const double lhs = (u.u_minus + u.u_plus) * std::sqrt(w / w0) +
                               (u.u_minus - u.u_plus) * std::sqrt(w0 / w);
            // u-+ round to ~eps*|u|, and the +- recombination amplifies that
            // by sqrt(w/w0): at the 1e6 ratio edge of this grid the identity
            // can only hold to ~eps * 1e6 ~ 1e-10, not to machine precision.
            CHECK(lhs == doctest::Approx(2.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("named representations match their closed forms") {
    const double w0 = 3.7e15;
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> log_ratio(-4.0, 4.0);
    const gauge_kind kinds[] = {gauge_kind::minimal_coupling, gauge_kind::multipolar,
                                gauge_kind::rotating_wave};
    for (auto kind : kinds) {
        gauge_representation g;
        g.kind = kind;
        for (int i = 0; i < 3000; ++i) {
            double w = w0 * std::pow(10.0, log_ratio(rng));
            if (std::abs(w - w0) < 1e-6 * w0)
                w = 1.5 * w0; // keep clear of the f- pole
            const auto u = coupling_coefficients(g, w0, w);
            CHECK(u.u_minus == doctest::Approx(oracle_u_minus(kind, w0, w)).epsilon(1e-12));
            CHECK(u.u_plus == doctest::Approx(oracle_u_plus(kind, w0, w)).epsilon(1e-12));
            for (int sign : {-1, +1}) {
                const double f = spectral_weight(g, w0, w, sign);
                CHECK(f == doctest::Approx(oracle_f(kind, w0, w, sign)).epsilon(1e-12));
                CHECK(f >= 0.0);
            }
        }
    }
}

TEST_CASE("spectral weight reference values") {
    const double w0 = 3.7e15;
    // rotating wave: f-(2 w0) = 4 w0 (2w0)^3 / (w0^2 - 4w0^2)^2 = 32/9
    CHECK(spectral_weight(gauge_representation::rotating_wave(), w0, 2.0 * w0, -1) ==
          doctest::Approx(32.0 / 9.0).epsilon(1e-14));
    // minimal coupling: f+(w0) = w0^2 / (2 w0)^2 = 1/4
    CHECK(spectral_weight(gauge_representation::minimal_coupling(), w0, w0, +1) ==
          doctest::Approx(0.25).epsilon(1e-14));
    // rotating wave has no counter-rotating weight anywhere
    CHECK(spectral_weight(gauge_representation::rotating_wave(), w0, 0.37 * w0, +1) == 0.0);
    CHECK(spectral_weight(gauge_representation::rotating_wave(), w0, 5.0 * w0, +1) == 0.0);
}

TEST_CASE("spectral weight is singular only at the exact resonance") {
    const double w0 = 3.7e15;
    const auto g = gauge_representation::minimal_coupling();
    CHECK_THROWS_AS((void)spectral_weight(g, w0, w0, -1), singular_point_error);
    // adjacent representable frequencies are fine (huge but finite)
    const double next = std::nextafter(w0, 1e300);
    CHECK(std::isfinite(spectral_weight(g, w0, next, -1)));
    // f+ has no pole in the band
    CHECK(std::isfinite(spectral_weight(g, w0, w0, +1)));
}

TEST_CASE("custom rotating-wave family reproduces the built-in gauge bit for bit") {
    const double w0 = 2.6e15;
    const auto builtin = gauge_representation::rotating_wave();
    const auto custom = gauge_representation::custom_from_family("rotating_wave");
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> log_ratio(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double w = w0 * std::pow(10.0, log_ratio(rng));
        CHECK(alpha_of(custom, w0, w) == alpha_of(builtin, w0, w));
        const auto ub = coupling_coefficients(builtin, w0, w);
        const auto uc = coupling_coefficients(custom, w0, w);
        CHECK(ub.u_minus == uc.u_minus);
        CHECK(ub.u_plus == uc.u_plus);
    }
}

TEST_CASE("gauge kind names round-trip") {
    for (const char* name : {"minimal_coupling", "multipolar", "rotating_wave", "custom"}) {
        CHECK(to_string(gauge_kind_from_string(name)) == std::string(name));
    }
    CHECK_THROWS_AS((void)gauge_kind_from_string("coulomb"), lookup_error);
}
