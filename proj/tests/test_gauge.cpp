#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "renorm/error.hpp"
#include "renorm/gauge.hpp"

#include <cmath>
#include <numbers>

using namespace renorm;
constexpr double pi = std::numbers::pi;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InvalidArgument;
}

std::vector<double> sample_point(int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n - 1; ++i) x[i] = 0.4 + 0.3 * i;
    x[n - 1] = 1.1;
    return x;
}

}  // namespace

TEST_CASE("hyperbolic normal form solves the Einstein equation") {
    for (int n = 1; n <= 5; ++n) {
        const NormalForm nf = NormalForm::hyperbolic(n);
        const auto x = sample_point(n);
        for (double r : {0.05, 0.3, 0.7, 0.95}) CHECK(einstein_residual(nf, x, r) < 1e-10);
    }
}

TEST_CASE("hyperbolic normal form has constant sectional curvature -1") {
    for (int n = 2; n <= 4; ++n) {
        const NormalForm nf = NormalForm::hyperbolic(n);
        const auto x = sample_point(n);
        for (double r : {0.01, 0.5}) {
            const auto k = sectional_curvatures(nf, x, r);
            CHECK(k.size() == static_cast<std::size_t>(n * (n + 1) / 2));
            for (double v : k) CHECK(std::abs(v + 1.0) < 1e-9);
        }
    }
}

TEST_CASE("ball model change of variables") {
    for (double rho : {0.0, 0.2, 0.55, 0.9}) {
        const double r = NormalForm::r_from_ball(rho);
        CHECK(std::abs(NormalForm::ball_from_r(r) - rho) < 1e-15);
        // radial: 4 drho^2/(1-rho^2)^2 = dr^2/r^2 ; angular: 4 rho^2/(1-rho^2)^2 = (1-r^2)^2/(4 r^2)
        if (rho > 0.0) {
            const double drho_dr = -2.0 / ((1 + r) * (1 + r));
            const double lhs_rad = 4.0 * drho_dr * drho_dr / std::pow(1 - rho * rho, 2);
            CHECK(std::abs(lhs_rad - 1.0 / (r * r)) < 1e-10 * lhs_rad);
            const double lhs_ang = 4.0 * rho * rho / std::pow(1 - rho * rho, 2);
            CHECK(std::abs(lhs_ang - std::pow(1 - r * r, 2) / (4 * r * r)) < 1e-10 * lhs_ang);
        }
    }
}

TEST_CASE("density series of the hyperbolic form") {
    const NormalForm nf = NormalForm::hyperbolic(4);
    const auto loc = nf.at(sample_point(4));
    const Series s = loc.density_series(10);
    for (double r : {0.1, 0.6}) CHECK(std::abs(s.evaluate(r) - loc.density(r)) < 1e-14);
    CHECK(s[2] == doctest::Approx(-4.0));
    CHECK(s[4] == doctest::Approx(6.0));
}

TEST_CASE("series normal form of a flat torus is constant in r") {
    const auto T = MetricFamily::flat_torus({1.0, 2.0, 3.0});
    const NormalForm nf = NormalForm::series(T, 3);
    const std::vector<double> x{0.1, 0.2, 0.3};
    const auto loc = nf.at(x);
    CHECK(std::abs(loc.density(0.7) - 1.0) < 1e-15);
    CHECK((loc.metric(0.4) - loc.g0()).norm() < 1e-15);
}

TEST_CASE("constant and zero Upsilon") {
    const NormalForm nf = NormalForm::hyperbolic(3);
    const QuadratureGrid grid = nf.boundary().quadrature_grid(16);
    GaugeOptions opt;
    opt.r_max = 0.2;
    for (double tau : {0.0, 0.3, -0.2}) {
        const OmegaField w = solve_special_defining(nf, ConformalFactor::constant(tau), grid, opt);
        for (std::size_t p = 0; p < grid.size(); ++p) {
            CHECK(w.node(p, 0) == doctest::Approx(tau));
            CHECK(std::abs(w.value(p, 0.137) - tau) < 1e-14);
            CHECK(std::abs(w.value(p, -0.05) - tau) < 1e-14);
            const double eh = epsilon_hat(w, p, 0.01);
            CHECK(std::abs(eh - 0.01 * std::exp(-tau)) < 1e-16);
        }
        CHECK(w.residual < 1e-12);
    }
}

TEST_CASE("nonconstant Upsilon: eikonal solve on the hyperbolic form") {
    for (int n = 2; n <= 4; ++n) {
        CAPTURE(n);
        const NormalForm nf = NormalForm::hyperbolic(n);
        const QuadratureGrid grid = nf.boundary().quadrature_grid(32);
        const auto ups = ConformalFactor::parse("0.1*X1");
        const OmegaField w = solve_special_defining(nf, ups, grid, {});
        CHECK(w.residual < 1e-9);
        for (std::size_t p = 0; p < grid.size(); ++p) {
            const double th = grid.point(p)[0];
            CHECK(std::abs(w.node(p, 0) - 0.1 * std::cos(th)) < 1e-15);
            // omega = Upsilon - r^2 |dUpsilon|^2_{g0} / 4 + O(r^4), with g0^{theta theta} = 4
            const double a0 = 4.0 * std::pow(0.1 * std::sin(th), 2);
            CHECK(std::abs(w.value(p, 0.01) - (0.1 * std::cos(th) - 1e-4 * a0 / 4.0)) < 1e-8);
            for (double d : odd_r_derivatives(w, p, n + 1)) CHECK(std::abs(d) < 1e-6);
            for (double eps : {1e-4, 0.01, 0.08}) {
                const double eh = epsilon_hat(w, p, eps);
                CHECK(std::abs(r_hat(w, p, eh) - eps) < 1e-12 * eps);
            }
        }
        const auto x = grid.point(3);
        CHECK(std::abs(epsilon_hat_at(w, x, 0.05) - epsilon_hat(w, 3, 0.05)) < 1e-12);
        const std::vector<double> off{0.77, pi / 2, 0.0};
        const std::vector<double> xo(off.begin(), off.begin() + n);
        CHECK(std::abs(w.value_at(xo, 0.0) - 0.1 * std::cos(0.77)) < 1e-12);
    }
}

TEST_CASE("gauge errors") {
    const NormalForm nf = NormalForm::hyperbolic(2);
    const QuadratureGrid grid = nf.boundary().quadrature_grid(24);
    GaugeOptions opt;
    opt.r_max = 0.1;
    const OmegaField w = solve_special_defining(nf, ConformalFactor::parse("0.1*X1"), grid, opt);
    CHECK(code_of([&] { (void)w.value(0, 0.2); }) == ErrorCode::Domain);
    CHECK(code_of([&] { (void)epsilon_hat(w, 0, 0.5); }) == ErrorCode::Domain);
    CHECK(code_of([&] { (void)epsilon_hat(w, 0, -1.0); }) == ErrorCode::Domain);

    opt.r_max = 0.95;
    CHECK(code_of([&] { (void)solve_special_defining(nf, ConformalFactor::parse("3*X1"), grid, opt); }) ==
          ErrorCode::GaugeBreakdown);
    CHECK(code_of([&] { (void)solve_special_defining(nf, ConformalFactor::parse("0.1*X2"), grid, {}); }) ==
          ErrorCode::Symmetry);
    opt.r_max = 2.0;
    CHECK(code_of([&] { (void)solve_special_defining(nf, ConformalFactor::constant(0.0), grid, opt); }) ==
          ErrorCode::Domain);
}
