#include <cmath>
#include <vector>

#include "doctest.h"
#include "gaugeme/quadrature.hpp"

using namespace gaugeme;
using gaugeme::quad::quad_options;

TEST_CASE("adaptive GK15 reproduces analytic integrals") {
    auto r1 = quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(r1.converged);
    CHECK(r1.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(r1.value - 2.0) <= 10.0 * r1.abs_error + 1e-14);

    // sharp Lorentzian peak, half-width 1e-3 of the interval
    const double a = 1e-3;
    auto r2 = quad::integrate([&](double x) { return 1.0 / (x * x + a * a); }, -1.0, 1.0);
    const double exact2 = 2.0 * std::atan(1.0 / a) / a;
    CHECK(r2.converged);
    CHECK(r2.value == doctest::Approx(exact2).epsilon(1e-9));

    // integrable endpoint behaviour sqrt(x)
    auto r3 = quad::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    CHECK(r3.value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("segment seeding resolves a long oscillatory window") {
    // int_0^{500 * 2pi} sin^2 = 250 * 2pi / 2
    const double b = 1000.0 * M_PI;
    std::vector<double> seeds;
    for (int i = 0; i <= 500; ++i)
        seeds.push_back(b * i / 500.0);
    auto r = quad::integrate_segmented([](double x) { return std::sin(x) * std::sin(x); },
                                       seeds, quad_options{1e-10, 0.0, 20000});
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(b / 2.0).epsilon(1e-10));
}

TEST_CASE("unresolvable request reports non-convergence instead of lying") {
    quad_options tight;
    tight.rel_tol = 1e-14;
    tight.max_intervals = 12; // deliberately starved
    auto r = quad::integrate([](double x) { return 1.0 / (x * x + 1e-8); }, -1.0, 1.0, tight);
    CHECK_FALSE(r.converged);
    CHECK(r.abs_error > 0.0);
}

TEST_CASE("Filon rule is exact for quadratics at any oscillation count") {
    // int_0^1 x^2 cos(kx) dx = sin k / k + 2 cos k / k^2 - 2 sin k / k^3
    for (double k : {0.05, 3.0, 1e3, 1e5, 1e8}) {
        const double exact = std::sin(k) / k + 2.0 * std::cos(k) / (k * k)
                             - 2.0 * std::sin(k) / (k * k * k);
        auto r = quad::filon_cos([](double x) { return x * x; }, 0.0, 1.0, k,
                                 quad_options{1e-10, 0.0, 0});
        CHECK(r.value == doctest::Approx(exact).epsilon(1e-7));
    }
}

TEST_CASE("Filon handles a smooth non-polynomial envelope") {
    // int e^x cos(kx) dx = e^x (cos kx + k sin kx) / (1 + k^2)
    const double k = 1e4;
    auto anti = [&](double x) {
        return std::exp(x) * (std::cos(k * x) + k * std::sin(k * x)) / (1.0 + k * k);
    };
    auto r = quad::filon_cos([](double x) { return std::exp(x); }, 0.0, 2.0, k,
                             quad_options{1e-9, 0.0, 0});
    CHECK(r.value == doctest::Approx(anti(2.0) - anti(0.0)).epsilon(1e-6));
}

TEST_CASE("Filon agrees with direct quadrature when k is small") {
    const double k = 0.37;
    auto g = [](double x) { return 1.0 / (1.0 + x * x); };
    auto direct = quad::integrate([&](double x) { return g(x) * std::cos(k * x); }, 0.0, 5.0);
    auto filon = quad::filon_cos(g, 0.0, 5.0, k);
    CHECK(filon.value == doctest::Approx(direct.value).epsilon(1e-8));
}

TEST_CASE("principal value with analytic pole subtraction") {
    // PV int_0^2 dx/(1-x) = 0 by symmetry
    auto r1 = quad::principal_value([](double) { return 1.0; }, 1.0, 0.0, 2.0);
    CHECK(r1.value == doctest::Approx(0.0).epsilon(1e-12));

    // PV int_0^3 x/(1-x) dx = -3 - ln 2
    auto r2 = quad::principal_value([](double x) { return x; }, 1.0, 0.0, 3.0);
    CHECK(r2.value == doctest::Approx(-3.0 - std::log(2.0)).epsilon(1e-10));

    // minimal-coupling cross-term kernel, w0 = 1, band [0, 2]:
    // PV int w/((1+w)(1-w)) * ... == -(1/2) ln|1-r^2|, r = 2
    auto r3 = quad::principal_value([](double w) { return w / (1.0 + w); }, 1.0, 0.0, 2.0);
    CHECK(r3.value == doctest::Approx(-0.5 * std::log(3.0)).epsilon(1e-10));

    CHECK_THROWS_AS((void)quad::principal_value([](double) { return 1.0; }, 5.0, 0.0, 2.0),
                    validation_error);
}
