#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "renorm/error.hpp"
#include "renorm/manifold.hpp"

#include <cmath>
#include <numbers>

using namespace renorm;
constexpr double pi = std::numbers::pi;

TEST_CASE("volume of the radius one-half two-sphere") {
    const auto s2 = MetricFamily::round_sphere(2, 0.5);
    CHECK(volume(s2, s2.quadrature_grid(32)) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(volume(s2, s2.quadrature_grid(24, false)) == doctest::Approx(pi).epsilon(1e-12));
}

TEST_CASE("sphere volumes in several dimensions") {
    for (int n = 1; n <= 6; ++n) {
        const auto s = MetricFamily::round_sphere(n, 1.0);
        CHECK(volume(s, s.quadrature_grid(24)) == doctest::Approx(unit_sphere_area(n)).epsilon(1e-12));
    }
    const auto s3 = MetricFamily::round_sphere(3, 1.0);
    CHECK(volume(s3, s3.quadrature_grid(12, false)) == doctest::Approx(2 * pi * pi).epsilon(1e-12));
}

TEST_CASE("torus integrals") {
    const auto t2 = MetricFamily::flat_torus({2 * pi, 2 * pi});
    const auto grid = t2.quadrature_grid(16, false);
    CHECK(volume(t2, grid) == doctest::Approx(4 * pi * pi));
    const auto f = sample(grid, [](const std::vector<double>& x) { return std::sin(x[0]) * std::sin(x[0]); });
    CHECK(integrate_scalar(f, t2, grid) == doctest::Approx(2 * pi * pi).epsilon(1e-13));
    const auto reduced = t2.quadrature_grid(16);
    CHECK(reduced.size() == 1);
    CHECK(volume(t2, reduced) == doctest::Approx(4 * pi * pi));
}

TEST_CASE("rescaled sphere against direct integration") {
    // exp(2*0.1*X1) on the round S^2: area = 2 pi * int exp(0.2 cos t) sin t dt = 2 pi (e^0.2 - e^-0.2)/0.2.
    const auto s2 = MetricFamily::round_sphere(2, 1.0);
    const auto g = MetricFamily::rescaled(s2, ConformalFactor::parse("0.1*X1"));
    CHECK(g.zonal());
    const double exact = 2 * pi * (std::exp(0.2) - std::exp(-0.2)) / 0.2;
    CHECK(volume(g, g.quadrature_grid(24)) == doctest::Approx(exact).epsilon(1e-13));
    const auto h = MetricFamily::rescaled(s2, ConformalFactor::parse("0.1*X2"));
    CHECK_FALSE(h.zonal());
    CHECK(volume(h, h.quadrature_grid(24)) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("metric jets against finite differences") {
    const auto s3 = MetricFamily::round_sphere(3, 1.3);
    const auto g = MetricFamily::rescaled(s3, ConformalFactor::parse("0.2*X2 + 0.1*X1^2"));
    const std::vector<double> x{0.7, 1.1, 0.4};
    const auto d = g.metric_first_partials(x);
    const double h = 1e-5;
    for (int k = 0; k < 3; ++k) {
        auto xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const Eigen::MatrixXd fd = (g.metric_value(xp) - g.metric_value(xm)) / (2 * h);
        CHECK((d[k] - fd).norm() < 1e-8);
    }
    auto xp = x, xm = x;
    xp[1] += h;
    xm[1] -= h;
    Eigen::MatrixXd fd2 = (g.metric_first_partials(xp)[0] - g.metric_first_partials(xm)[0]) / (2 * h);
    CHECK((g.metric_second_partial(x, 0, 1) - fd2).norm() < 1e-8);
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(MetricFamily::round_sphere(0, 1.0), Error);
    CHECK_THROWS_AS(MetricFamily::flat_torus({1.0, -1.0}), Error);
    const auto t2 = MetricFamily::flat_torus({1.0, 1.0});
    CHECK_THROWS_AS(MetricFamily::rescaled(t2, ConformalFactor::parse("X1")), Error);
    CHECK_THROWS_AS(ConformalFactor::parse("0.1*cosx1)"), Error);
    const auto grid = t2.quadrature_grid(4, false);
    ScalarField wrong{{3}, {1.0, 1.0, 1.0}};
    CHECK_THROWS_AS(integrate_scalar(wrong, t2, grid), Error);
}

TEST_CASE("topology and curvature flags") {
    CHECK(MetricFamily::round_sphere(4, 1.0).euler_characteristic() == 2);
    CHECK(MetricFamily::round_sphere(3, 1.0).euler_characteristic() == 0);
    const auto s = MetricFamily::round_sphere(2, 0.5);
    CHECK(*s.constant_curvature() == doctest::Approx(4.0));
    const auto sc = MetricFamily::rescaled(s, ConformalFactor::constant(std::log(2.0)));
    CHECK(*sc.constant_curvature() == doctest::Approx(1.0));
}
