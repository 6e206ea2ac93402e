#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "renorm/error.hpp"
#include "renorm/jet.hpp"
#include "renorm/quadrature.hpp"
#include "renorm/series.hpp"

#include <cmath>
#include <numbers>

using namespace renorm;

namespace {

// f(x, y) = exp(x) sin(x y) / (2 + cos y), compared against central differences.
double f_ref(double x, double y) { return std::exp(x) * std::sin(x * y) / (2.0 + std::cos(y)); }

Jet f_jet(const Jet& x, const Jet& y) { return exp(x) * sin(x * y) / (cos(y) + 2.0); }

}  // namespace

TEST_CASE("jet partials agree with finite differences") {
    const auto& sp = JetSpace::get(2, 4);
    const double x0 = 0.3, y0 = -0.7;
    const Jet f = f_jet(Jet::variable(sp, 4, 0, x0), Jet::variable(sp, 4, 1, y0));
    const double h = 1e-4;
    CHECK(f.value() == doctest::Approx(f_ref(x0, y0)).epsilon(1e-14));
    const double fx = (f_ref(x0 + h, y0) - f_ref(x0 - h, y0)) / (2 * h);
    const double fy = (f_ref(x0, y0 + h) - f_ref(x0, y0 - h)) / (2 * h);
    CHECK(f.partial(0) == doctest::Approx(fx).epsilon(1e-7));
    CHECK(f.partial(1) == doctest::Approx(fy).epsilon(1e-7));
    const double g = 1e-3;
    const double fxx = (f_ref(x0 + g, y0) - 2 * f_ref(x0, y0) + f_ref(x0 - g, y0)) / (g * g);
    const double fxy = (f_ref(x0 + g, y0 + g) - f_ref(x0 + g, y0 - g) - f_ref(x0 - g, y0 + g) +
                        f_ref(x0 - g, y0 - g)) / (4 * g * g);
    CHECK(f.partial(0, 0) == doctest::Approx(fxx).epsilon(1e-5));
    CHECK(f.partial(0, 1) == doctest::Approx(fxy).epsilon(1e-5));
    // Third derivative via d() of the jet against a difference of second partials.
    const Jet fx_jet = f.d(0);
    const auto fxx_at = [&](double y) {
        const Jet t = f_jet(Jet::variable(sp, 2, 0, x0), Jet::variable(sp, 2, 1, y));
        return t.partial(0, 0);
    };
    CHECK(fx_jet.partial(0, 1) == doctest::Approx((fxx_at(y0 + h) - fxx_at(y0 - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("jet elementary functions") {
    const auto& sp = JetSpace::get(1, 6);
    const Jet x = Jet::variable(sp, 6, 0, 0.4);
    const Jet one = sin(x) * sin(x) + cos(x) * cos(x);
    CHECK(one.value() == doctest::Approx(1.0));
    for (std::size_t m = 1; m < one.coeffs().size(); ++m) CHECK(std::abs(one.coeffs()[m]) < 1e-13);
    const Jet back = log(exp(x));
    for (std::size_t m = 0; m < back.coeffs().size(); ++m) CHECK(back.coeffs()[m] == doctest::Approx(x.coeffs()[m]));
    const Jet s = sqrt(x) * sqrt(x);
    for (std::size_t m = 0; m < s.coeffs().size(); ++m) CHECK(s.coeffs()[m] == doctest::Approx(x.coeffs()[m]));
    const Jet c = cos(acos(x));
    for (std::size_t m = 0; m < c.coeffs().size(); ++m)
        CHECK(c.coeffs()[m] == doctest::Approx(x.coeffs()[m]).epsilon(1e-12));
    const Jet y = Jet::variable(sp, 6, 0, -0.9);
    const Jet a = atan2(sin(y), cos(y));
    CHECK(a.value() == doctest::Approx(-0.9));
    CHECK(a.partial(0) == doctest::Approx(1.0));
    for (std::size_t m = 2; m < a.coeffs().size(); ++m) CHECK(std::abs(a.coeffs()[m]) < 1e-12);
    CHECK_THROWS_AS(log(x - 1.0), Error);
}

TEST_CASE("series algebra") {
    Series a(std::vector<double>{1.0, 0.5, -0.25, 0.1, 0.0, 0.3});
    const Series one = a * reciprocal(a);
    CHECK(one[0] == doctest::Approx(1.0));
    for (int j = 1; j <= one.degree(); ++j) CHECK(std::abs(one[j]) < 1e-14);
    const Series e = exp(log(a));
    for (int j = 0; j <= a.degree(); ++j) CHECK(e[j] == doctest::Approx(a[j]));
    const Series s = sqrt(a);
    const Series ss = s * s;
    for (int j = 0; j <= a.degree(); ++j) CHECK(ss[j] == doctest::Approx(a[j]));
    CHECK(a.evaluate(0.3) == doctest::Approx(1.0 + 0.15 - 0.0225 + 0.0027 + 0.3 * std::pow(0.3, 5)));
}

TEST_CASE("sqrt_det_ratio against direct determinants") {
    const int n = 3, deg = 6;
    MatrixSeries g(n, deg);
    Eigen::MatrixXd g0(3, 3);
    g0 << 2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 1.5;
    Eigen::MatrixXd g2(3, 3);
    g2 << 0.4, 0.1, -0.2, 0.1, -0.3, 0.0, -0.2, 0.0, 0.2;
    Eigen::MatrixXd g4 = 0.5 * g2 * g2;
    g[0] = g0;
    g[2] = g2;
    g[4] = g4;
    const Series v = sqrt_det_ratio(g);
    for (double r : {0.05, 0.1, 0.2}) {
        const Eigen::MatrixXd gr = g0 + r * r * g2 + std::pow(r, 4) * g4;
        const double direct = std::sqrt(gr.determinant() / g0.determinant());
        CHECK(v.evaluate(r) == doctest::Approx(direct).epsilon(50 * std::pow(r, 7)));
    }
}

TEST_CASE("gauss-legendre exactness and periodic spectral differentiation") {
    const Rule rule = gauss_legendre(8, -1.0, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 15);
    CHECK(s == doctest::Approx((std::pow(2.0, 16) - 1.0) / 16.0).epsilon(1e-13));

    const Axis ax = Axis::periodic(16, 2.0 * std::numbers::pi);
    const Eigen::MatrixXd D = ax.differentiation();
    for (int i = 0; i < ax.size(); ++i) {
        double d = 0.0;
        for (int j = 0; j < ax.size(); ++j) d += D(i, j) * std::sin(3 * ax.nodes[j]);
        CHECK(d == doctest::Approx(3 * std::cos(3 * ax.nodes[i])).epsilon(1e-12).scale(1.0));
    }
    const Axis lg = Axis::legendre(12, 0.0, std::numbers::pi);
    const Eigen::MatrixXd L = lg.differentiation();
    for (int i = 0; i < lg.size(); ++i) {
        double d = 0.0;
        for (int j = 0; j < lg.size(); ++j) d += L(i, j) * std::pow(lg.nodes[j], 5);
        CHECK(d == doctest::Approx(5 * std::pow(lg.nodes[i], 4)).epsilon(1e-9));
    }
    const auto row = lg.interpolation_row(1.234);
    double v = 0.0;
    for (int j = 0; j < lg.size(); ++j) v += row[j] * std::pow(lg.nodes[j], 7);
    CHECK(v == doctest::Approx(std::pow(1.234, 7)).epsilon(1e-12));
}

TEST_CASE("pairwise sum is exact on representable data") {
    std::vector<double> v(1000, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-15));
}
