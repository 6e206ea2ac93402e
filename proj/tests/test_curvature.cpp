#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "renorm/curvature.hpp"
#include "renorm/error.hpp"

#include <cmath>
#include <numbers>

using namespace renorm;
constexpr double pi = std::numbers::pi;

namespace {

// ---------------------------------------------------------------------------
// Finite-difference oracle, built only from metric_value.

using Mat = Eigen::MatrixXd;

Mat shifted(const MetricFamily& f, std::vector<double> x, int a, double ha, int b = -1, double hb = 0.0) {
    x[a] += ha;
    if (b >= 0) x[b] += hb;
    return f.metric_value(x);
}

// Fourth-order central differences.
Mat fd_first(const MetricFamily& f, const std::vector<double>& x, int a, double h) {
    return (-shifted(f, x, a, 2 * h) + 8 * shifted(f, x, a, h) - 8 * shifted(f, x, a, -h) + shifted(f, x, a, -2 * h)) /
           (12 * h);
}

Mat fd_second(const MetricFamily& f, const std::vector<double>& x, int a, int b, double h) {
    if (a == b)
        return (-shifted(f, x, a, 2 * h) + 16 * shifted(f, x, a, h) - 30 * f.metric_value(x) +
                16 * shifted(f, x, a, -h) - shifted(f, x, a, -2 * h)) /
               (12 * h * h);
    auto mixed = [&](double s) -> Mat {
        return (shifted(f, x, a, s, b, s) - shifted(f, x, a, s, b, -s) - shifted(f, x, a, -s, b, s) +
                shifted(f, x, a, -s, b, -s)) /
               (4 * s * s);
    };
    return (4 * mixed(h) - mixed(2 * h)) / 3.0;
}

struct FdGeometry {
    int n;
    Mat g, gi;
    std::vector<Mat> dg;                   // dg[c](a,b)
    std::vector<std::vector<Mat>> d2g;     // d2g[c][e](a,b)
    std::vector<double> gamma1, gamma2;    // (m,k,l)
    std::vector<double> riemann;           // (i,k,l,m)
};

FdGeometry fd_geometry(const MetricFamily& f, const std::vector<double>& x) {
    FdGeometry o;
    const int n = f.dim();
    o.n = n;
    o.g = f.metric_value(x);
    o.gi = o.g.inverse();
    for (int c = 0; c < n; ++c) o.dg.push_back(fd_first(f, x, c, 1e-3));
    o.d2g.assign(n, std::vector<Mat>(n));
    for (int c = 0; c < n; ++c)
        for (int e = 0; e < n; ++e) o.d2g[c][e] = fd_second(f, x, c, e, 1e-2);
    auto id3 = [n](int a, int b, int c) { return (a * n + b) * n + c; };
    o.gamma1.assign(n * n * n, 0.0);
    o.gamma2.assign(n * n * n, 0.0);
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                o.gamma1[id3(m, k, l)] = 0.5 * (o.dg[l](m, k) + o.dg[k](m, l) - o.dg[m](k, l));
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int p = 0; p < n; ++p) o.gamma2[id3(m, k, l)] += o.gi(m, p) * o.gamma1[id3(p, k, l)];
    o.riemann.assign(n * n * n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    double v = 0.5 * (o.d2g[k][l](i, m) + o.d2g[i][m](k, l) - o.d2g[k][m](i, l) - o.d2g[i][l](k, m));
                    for (int p = 0; p < n; ++p)
                        v += o.gamma1[id3(p, k, l)] * o.gamma2[id3(p, i, m)] -
                             o.gamma1[id3(p, k, m)] * o.gamma2[id3(p, i, l)];
                    o.riemann[((i * n + k) * n + l) * n + m] = v;
                }
    return o;
}

double max_abs(const Tensor& t) {
    double m = 0.0;
    for (double v : t.data()) m = std::max(m, std::abs(v));
    return m;
}

MetricFamily generic_torus(int n) {
    std::vector<TorusPerturbation> terms;
    for (int i = 0; i < n; ++i) {
        terms.push_back({i, i, 0.12, (i + 1) % n, 1, false});
        terms.push_back({i, (i + 1) % n, 0.05, (i + 2) % n, 1, true});
    }
    terms.push_back({0, 0, 0.04, 0, 2, true});
    return MetricFamily::perturbed_torus(std::vector<double>(n, 2 * pi), terms);
}

}  // namespace

TEST_CASE("flat torus has vanishing curvature") {
    const auto t4 = MetricFamily::flat_torus({1.0, 2.0, 3.0, 4.0});
    const auto c = curvature_pack(t4, std::vector<double>{0.1, 0.2, 0.3, 0.4});
    CHECK(max_abs(*c.riemann) == 0.0);
    CHECK(max_abs(c.P()) == 0.0);
    CHECK(max_abs(c.B()) == 0.0);
    CHECK(*c.scalar == 0.0);
}

TEST_CASE("round spheres have P = (c/2) g and R = n(n-1)c") {
    for (int n = 2; n <= 6; ++n) {
        const double a = 0.5;
        const double cc = 1.0 / (a * a);
        const auto s = MetricFamily::round_sphere(n, a);
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = 0.4 + 0.3 * i;
        const auto c = curvature_pack(s, x);
        CHECK(*c.scalar == doctest::Approx(n * (n - 1) * cc).epsilon(1e-12));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        const double e = cc * (c.g(i, k) * c.g(j, l) - c.g(i, l) * c.g(j, k));
                        CHECK((*c.riemann)(i, j, k, l) == doctest::Approx(e).scale(cc));
                    }
        if (n >= 3) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) CHECK(c.P()(i, j) == doctest::Approx(0.5 * cc * c.g(i, j)).scale(cc));
            CHECK(max_abs(c.W()) < 1e-11);
            CHECK(max_abs(c.C()) < 1e-11);
        }
        if (n >= 4) CHECK(max_abs(c.B()) < 1e-10);
        if (n == 2) CHECK_THROWS_AS((void)c.P(), Error);
    }
}

TEST_CASE("rescaled flat torus against the finite-difference oracle") {
    const auto t2 = MetricFamily::flat_torus({2 * pi, 2 * pi});
    const auto g = MetricFamily::rescaled(t2, ConformalFactor::parse("0.1*sin(x1)"));
    for (const auto& x : {std::vector<double>{0.3, 1.7}, std::vector<double>{2.9, 4.1}}) {
        const auto c = curvature_pack(g, x);
        const auto o = fd_geometry(g, x);
        for (std::size_t f = 0; f < o.riemann.size(); ++f) CHECK(std::abs((*c.riemann)[f] - o.riemann[f]) < 1e-6);
        // Scalar curvature of exp(2u) flat in two dimensions is -2 exp(-2u) Laplacian(u).
        const double u = 0.1 * std::sin(x[0]);
        CHECK(*c.scalar == doctest::Approx(-2 * std::exp(-2 * u) * (-u)).epsilon(1e-12));
    }
}

TEST_CASE("generic metric: symmetries, trace-freeness and the oracle") {
    const auto g = MetricFamily::rescaled(generic_torus(4), ConformalFactor::parse("0.1*cos(x2)*sin(x3)"));
    const std::vector<double> x{0.7, 2.2, 4.0, 5.5};
    const auto c = curvature_pack(g, x);
    const auto o = fd_geometry(g, x);
    const int n = 4;
    const Tensor& R = *c.riemann;
    double bianchi = 0, sym = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    sym = std::max(sym, std::abs(R(i, j, k, l) + R(j, i, k, l)));
                    sym = std::max(sym, std::abs(R(i, j, k, l) + R(i, j, l, k)));
                    sym = std::max(sym, std::abs(R(i, j, k, l) - R(k, l, i, j)));
                    bianchi = std::max(bianchi, std::abs(R(i, j, k, l) + R(i, k, l, j) + R(i, l, j, k)));
                    CHECK(std::abs(R(i, j, k, l) - o.riemann[((i * n + j) * n + k) * n + l]) < 1e-6);
                }
    CHECK(sym < 1e-12);
    CHECK(bianchi < 1e-12);
    double trace = 0;
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            double t = 0;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) t += c.ginv(i, k) * c.W()(i, j, k, l);
            trace = std::max(trace, std::abs(t));
        }
    CHECK(trace < 1e-8);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            CHECK((n - 2) * c.P()(i, j) ==
                  doctest::Approx((*c.ricci)(i, j) - *c.scalar * c.g(i, j) / (2.0 * (n - 1))).scale(1.0));
            for (int k = 0; k < n; ++k) CHECK(c.C()(i, j, k) == doctest::Approx(-c.C()(i, k, j)).scale(1.0));
        }
    CHECK(max_abs(c.W()) > 1e-3);
    CHECK(max_abs(c.C()) > 1e-3);
}

TEST_CASE("constant rescaling scales Riemann and preserves W with one index raised") {
    const auto base = generic_torus(3);
    const double tau = 0.3;
    const auto scaled = MetricFamily::rescaled(base, ConformalFactor::constant(tau));
    const std::vector<double> x{1.0, 2.0, 3.0};
    const auto a = curvature_pack(base, x);
    const auto b = curvature_pack(scaled, x);
    for (std::size_t f = 0; f < a.riemann->size(); ++f)
        CHECK((*b.riemann)[f] == doctest::Approx(std::exp(2 * tau) * (*a.riemann)[f]).scale(1.0));
    const Tensor wa = raise_index(a.W(), a.ginv, 0);
    const Tensor wb = raise_index(b.W(), b.ginv, 0);
    for (std::size_t f = 0; f < wa.size(); ++f) CHECK(wb[f] == doctest::Approx(wa[f]).scale(1.0));
}

TEST_CASE("conformally flat metrics have vanishing Weyl, Cotton (n=3) and Bach (n=4)") {
    const auto s3 = MetricFamily::rescaled(MetricFamily::round_sphere(3, 1.0), ConformalFactor::parse("0.2*X2 + 0.1*X1"));
    const auto c3 = curvature_pack(s3, std::vector<double>{0.8, 1.3, 0.4});
    CHECK(max_abs(c3.W()) < 1e-10);
    CHECK(max_abs(c3.C()) < 1e-10);
    const auto s4 = MetricFamily::rescaled(MetricFamily::round_sphere(4, 1.0), ConformalFactor::parse("0.2*X3 - 0.1*X1^2"));
    const auto c4 = curvature_pack(s4, std::vector<double>{0.8, 1.3, 2.0, 0.4});
    CHECK(max_abs(c4.W()) < 1e-10);
    CHECK(max_abs(c4.B()) < 1e-9);
}

TEST_CASE("Bach tensor against a finite-difference oracle") {
    // P from the pack at neighbouring points, differentiated numerically.
    const auto g = generic_torus(4);
    const std::vector<double> x{0.5, 1.5, 2.5, 3.5};
    const int n = 4;
    const double h = 1e-3;
    const auto c = curvature_pack(g, x);
    const auto o = fd_geometry(g, x);
    auto id3 = [n](int a, int b, int cc) { return (a * n + b) * n + cc; };
    // Covariant derivative of P at neighbouring points, then its derivative.
    auto nablaP = [&](const std::vector<double>& y) {
        const auto cy = curvature_pack(g, y);
        const auto oy = fd_geometry(g, y);
        std::vector<double> dP(n * n * n, 0.0);
        for (int k = 0; k < n; ++k) {
            auto yp = y, ym = y, yp2 = y, ym2 = y;
            yp[k] += h;
            ym[k] -= h;
            yp2[k] += 2 * h;
            ym2[k] -= 2 * h;
            const auto Pp = curvature_pack(g, yp).P(), Pm = curvature_pack(g, ym).P();
            const auto Pp2 = curvature_pack(g, yp2).P(), Pm2 = curvature_pack(g, ym2).P();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double v = (-Pp2(i, j) + 8 * Pp(i, j) - 8 * Pm(i, j) + Pm2(i, j)) / (12 * h);
                    for (int m = 0; m < n; ++m)
                        v -= oy.gamma2[id3(m, k, i)] * cy.P()(m, j) + oy.gamma2[id3(m, k, j)] * cy.P()(i, m);
                    dP[id3(i, j, k)] = v;
                }
        }
        return dP;
    };
    const double H = 1e-2;
    std::vector<std::vector<double>> ddP(n);  // ddP[l] = d/dx^l of nablaP
    const auto dP0 = nablaP(x);
    for (int l = 0; l < n; ++l) {
        auto xp = x, xm = x;
        xp[l] += H;
        xm[l] -= H;
        const auto a = nablaP(xp), b = nablaP(xm);
        ddP[l].resize(a.size());
        for (std::size_t f = 0; f < a.size(); ++f) ddP[l][f] = (a[f] - b[f]) / (2 * H);
    }
    auto nabla2 = [&](int i, int j, int k, int l) {
        double v = ddP[l][id3(i, j, k)];
        for (int m = 0; m < n; ++m)
            v -= o.gamma2[id3(m, l, i)] * dP0[id3(m, j, k)] + o.gamma2[id3(m, l, j)] * dP0[id3(i, m, k)] +
                 o.gamma2[id3(m, l, k)] * dP0[id3(i, j, m)];
        return v;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double b = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    b += o.gi(k, l) * (nabla2(i, j, k, l) - nabla2(i, k, j, l));
                    double pkl = 0;
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q) pkl += o.gi(k, p) * o.gi(l, q) * c.P()(p, q);
                    b -= pkl * c.W()(k, i, j, l);
                }
            CHECK(c.B()(i, j) == doctest::Approx(b).scale(1.0).epsilon(1e-4));
        }
}

TEST_CASE("n = 6 invariants: naive contraction oracle") {
    const auto g = generic_torus(6);
    const std::vector<double> x{0.3, 1.1, 1.9, 2.7, 3.5, 4.3};
    const int n = 6;
    const auto inv = conformal_invariants_6d(g, x);
    const auto c = curvature_pack(g, x);
    const auto o = fd_geometry(g, x);
    const double h = 1e-3;
    auto id3 = [n](int a, int b, int cc) { return (a * n + b) * n + cc; };
    auto id4 = [n](int a, int b, int cc, int d) { return ((a * n + b) * n + cc) * n + d; };
    auto id5 = [n](int a, int b, int cc, int d, int e) { return (((a * n + b) * n + cc) * n + d) * n + e; };
    // Numerical derivatives of W and C.
    std::vector<double> dW(n * n * n * n * n), dC(n * n * n * n);
    for (int m = 0; m < n; ++m) {
        auto xp = x, xm = x, xp2 = x, xm2 = x;
        xp[m] += h;
        xm[m] -= h;
        xp2[m] += 2 * h;
        xm2[m] -= 2 * h;
        const auto a = curvature_pack(g, xp), b = curvature_pack(g, xm);
        const auto a2 = curvature_pack(g, xp2), b2 = curvature_pack(g, xm2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double v = (-a2.C()(i, j, k) + 8 * a.C()(i, j, k) - 8 * b.C()(i, j, k) + b2.C()(i, j, k)) / (12 * h);
                    for (int p = 0; p < n; ++p)
                        v -= o.gamma2[id3(p, m, i)] * c.C()(p, j, k) + o.gamma2[id3(p, m, j)] * c.C()(i, p, k) +
                             o.gamma2[id3(p, m, k)] * c.C()(i, j, p);
                    dC[id4(i, j, k, m)] = v;
                    for (int l = 0; l < n; ++l) {
                        double w = (-a2.W()(i, j, k, l) + 8 * a.W()(i, j, k, l) - 8 * b.W()(i, j, k, l) +
                                    b2.W()(i, j, k, l)) / (12 * h);
                        for (int p = 0; p < n; ++p)
                            w -= o.gamma2[id3(p, m, i)] * c.W()(p, j, k, l) + o.gamma2[id3(p, m, j)] * c.W()(i, p, k, l) +
                                 o.gamma2[id3(p, m, k)] * c.W()(i, j, p, l) + o.gamma2[id3(p, m, l)] * c.W()(i, j, k, p);
                        dW[id5(i, j, k, l, m)] = w;
                    }
                }
    }
    const Mat& gi = o.gi;
    const Mat& gg = o.g;
    const Tensor& W = c.W();
    const Tensor& C = c.C();
    const Tensor& P = c.P();
    std::vector<double> V(n * n * n * n * n), U(n * n * n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    for (int m = 0; m < n; ++m)
                        V[id5(i, j, k, l, m)] = dW[id5(i, j, k, l, m)] + gg(i, m) * C(j, k, l) - gg(j, m) * C(i, k, l) +
                                                gg(k, m) * C(l, i, j) - gg(l, m) * C(k, i, j);
                    double u = dC[id4(j, k, l, i)];
                    for (int m = 0; m < n; ++m)
                        for (int q = 0; q < n; ++q) u -= P(i, q) * gi(q, m) * W(m, j, k, l);
                    U[id4(i, j, k, l)] = u;
                }
    // Fully raised copies by explicit loops.
    auto raise4 = [&](const std::vector<double>& t) {
        std::vector<double> a(t.size(), 0.0), b(t.size(), 0.0);
        for (int s = 0; s < 4; ++s) {
            const std::vector<double>& src = (s == 0) ? t : a;
            std::fill(b.begin(), b.end(), 0.0);
            for (int p0 = 0; p0 < n; ++p0)
                for (int p1 = 0; p1 < n; ++p1)
                    for (int p2 = 0; p2 < n; ++p2)
                        for (int p3 = 0; p3 < n; ++p3) {
                            int idx[4] = {p0, p1, p2, p3};
                            double v = 0;
                            for (int q = 0; q < n; ++q) {
                                int jdx[4] = {p0, p1, p2, p3};
                                jdx[s] = q;
                                v += gi(idx[s], q) * src[id4(jdx[0], jdx[1], jdx[2], jdx[3])];
                            }
                            b[id4(p0, p1, p2, p3)] = v;
                        }
            a = b;
        }
        return a;
    };
    std::vector<double> Wv(W.data().begin(), W.data().end());
    const auto Wup = raise4(Wv);
    const auto Uup = raise4(U);
    double VV = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m) {
                        // Raise V on the fly: V^{ijklm} = g^.. V_....
                        double up = 0;
                        for (int a = 0; a < n; ++a)
                            up += gi(m, a) * [&] {
                                double s = 0;
                                for (int b2 = 0; b2 < n; ++b2)
                                    for (int b3 = 0; b3 < n; ++b3)
                                        for (int b4 = 0; b4 < n; ++b4)
                                            for (int b5 = 0; b5 < n; ++b5)
                                                s += gi(i, b2) * gi(j, b3) * gi(k, b4) * gi(l, b5) *
                                                     V[id5(b2, b3, b4, b5, a)];
                                return s;
                            }();
                        VV += V[id5(i, j, k, l, m)] * up;
                    }
    double WU = 0, CC = 0, t1 = 0, t2 = 0;
    for (std::size_t f = 0; f < Wv.size(); ++f) WU += Wv[f] * Uup[f];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int d = 0; d < n; ++d) CC += C(i, j, k) * gi(i, a) * gi(j, b) * gi(k, d) * C(a, b, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q) {
                            // W^{ij}_{pq} = g_pa g_qb W^{ijab}; W^j_p^l_q = g_pa g_qb W^{jalb}
                            double wijpq = 0, wjplq = 0;
                            for (int a = 0; a < n; ++a)
                                for (int b = 0; b < n; ++b) {
                                    wijpq += gg(p, a) * gg(q, b) * Wup[id4(i, j, a, b)];
                                    wjplq += gg(p, a) * gg(q, b) * Wup[id4(j, a, l, b)];
                                }
                            t1 += W(i, j, k, l) * wijpq * Wup[id4(k, l, p, q)];
                            t2 += W(i, j, k, l) * Wup[id4(i, p, k, q)] * wjplq;
                        }
    const double I = VV - 16 * WU + 16 * CC;
    const double J = -3 * I + 7 * t1 + 4 * t2;
    CHECK(std::abs(I) > 1e-3);
    CHECK(inv.I == doctest::Approx(I).epsilon(1e-6));
    CHECK(inv.J == doctest::Approx(J).epsilon(1e-6));
}

TEST_CASE("n = 6 invariants vanish on conformally flat examples") {
    const auto s6 = MetricFamily::round_sphere(6, 0.5);
    const auto a = conformal_invariants_6d(s6, std::vector<double>{0.5, 0.9, 1.3, 1.7, 2.1, 2.5});
    CHECK(std::abs(a.I) < 1e-8);
    CHECK(std::abs(a.J) < 1e-8);
    const auto t6 = MetricFamily::rescaled(MetricFamily::flat_torus(std::vector<double>(6, 2 * pi)),
                                           ConformalFactor::parse("0.1*cos(x1)*sin(x2) + 0.05*sin(x4)"));
    const auto b = conformal_invariants_6d(t6, std::vector<double>{0.5, 0.9, 1.3, 1.7, 2.1, 2.5});
    CHECK(std::abs(b.I) < 1e-8);
    CHECK(std::abs(b.J) < 1e-8);
    CHECK_THROWS_AS(conformal_invariants_6d(MetricFamily::round_sphere(2, 1.0), std::vector<double>{1.0, 1.0}), Error);
}

TEST_CASE("Gauss-Bonnet in four dimensions") {
    const auto s4 = MetricFamily::round_sphere(4, 1.0);
    const auto gb = gauss_bonnet_sides(s4, 24);
    CHECK(gb.lhs == doctest::Approx(64 * pi * pi));
    CHECK(gb.rhs == doctest::Approx(64 * pi * pi).epsilon(1e-10));
    const auto t4 = gauss_bonnet_sides(MetricFamily::flat_torus(std::vector<double>(4, 2 * pi)), 8);
    CHECK(t4.lhs == 0.0);
    CHECK(std::abs(t4.rhs) < 1e-8);
    const auto r = gauss_bonnet_sides(MetricFamily::rescaled(s4, ConformalFactor::parse("0.1*X1")), 32);
    CHECK(r.rhs == doctest::Approx(gb.rhs).epsilon(1e-8));
    CHECK_THROWS_AS(gauss_bonnet_sides(MetricFamily::round_sphere(3, 1.0)), Error);
}
