#include "renorm/curvature.hpp"

#include "renorm/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>

namespace renorm {

namespace {

int jet_order(const JetTensor& t) { return t[0].order(); }

JetTensor truncated(const JetTensor& t, int order) {
    JetTensor out = t;
    for (auto& c : out.data()) c = c.truncated(order);
    return out;
}

// Digits of a flat index, most significant first.
void unflatten(std::size_t flat, int n, int rank, std::vector<int>& idx) {
    idx.resize(static_cast<std::size_t>(rank));
    for (int s = rank - 1; s >= 0; --s) {
        idx[s] = static_cast<int>(flat % static_cast<std::size_t>(n));
        flat /= static_cast<std::size_t>(n);
    }
}

std::size_t stride(int n, int rank, int a) {
    std::size_t s = 1;
    for (int r = a + 1; r < rank; ++r) s *= static_cast<std::size_t>(n);
    return s;
}

}  // namespace

JetTensor jet_inverse(const JetTensor& g) {
    const int n = g.dim();
    const int order = jet_order(g);
    const JetSpace& sp = g[0].space();
    Eigen::MatrixXd g0(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g0(i, j) = g(i, j).value();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g0);
    require(lu.isInvertible(), ErrorCode::SingularMetric, "metric is not invertible at the sampled point");
    const Eigen::MatrixXd a0 = lu.inverse();

    // g^{-1} = sum_k (-A0 N)^k A0 with N = g - g0 nilpotent, evaluated by Horner.
    JetTensor m(n, 2, Jet(sp, order, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet& dst = m(i, j);
            for (int k = 0; k < n; ++k) {
                Jet nk = g(k, j);
                nk.coeffs()[0] = 0.0;
                dst += nk * a0(i, k);
            }
        }
    JetTensor x(n, 2, Jet(sp, order, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x(i, j) += a0(i, j);
    for (int it = 0; it < order; ++it) {
        JetTensor next(n, 2, Jet(sp, order, 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Jet& dst = next(i, j);
                dst += a0(i, j);
                for (int k = 0; k < n; ++k) dst.add_product(m(i, k), x(k, j), -1.0);
            }
        x = std::move(next);
    }
    return x;
}

JetConnection christoffel(const JetTensor& g, const JetTensor& ginv) {
    const int n = g.dim();
    const int order = jet_order(g) - 1;
    require(order >= 0, ErrorCode::InsufficientOrder, "christoffel: metric jets need order >= 1");
    const JetSpace& sp = g[0].space();
    std::vector<JetTensor> dg;
    dg.reserve(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        JetTensor t(n, 2, Jet(sp, order, 0.0));
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                t(a, b) = g(a, b).d(c);
                if (b != a) t(b, a) = t(a, b);
            }
        dg.push_back(std::move(t));
    }
    JetConnection out{JetTensor(n, 3, Jet(sp, order, 0.0)), JetTensor(n, 3, Jet(sp, order, 0.0))};
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int l = k; l < n; ++l) {
                Jet v = dg[l](m, k) + dg[k](m, l) - dg[m](k, l);
                v *= 0.5;
                out.first(m, k, l) = v;
                if (l != k) out.first(m, l, k) = v;
            }
    const JetTensor gi = truncated(ginv, order);
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            for (int l = k; l < n; ++l) {
                Jet& dst = out.second(m, k, l);
                for (int p = 0; p < n; ++p) dst.add_product(gi(m, p), out.first(p, k, l));
                if (l != k) out.second(m, l, k) = dst;
            }
    return out;
}

JetTensor riemann_lowered(const JetTensor& g, const JetConnection& gamma) {
    const int n = g.dim();
    const int order = jet_order(g) - 2;
    require(order >= 0, ErrorCode::InsufficientOrder, "riemann: metric jets need order >= 2");
    const JetSpace& sp = g[0].space();
    // d2(a, b, c, e) = d^2 g_ab / dx^c dx^e
    JetTensor d2(n, 4, Jet(sp, order, 0.0));
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const Jet first = g(a, b).d(c);
                for (int e = c; e < n; ++e) {
                    const Jet v = first.d(e);
                    d2(a, b, c, e) = v;
                    d2(b, a, c, e) = v;
                    d2(a, b, e, c) = v;
                    d2(b, a, e, c) = v;
                }
            }
    const JetTensor g1 = truncated(gamma.first, order);
    const JetTensor g2 = truncated(gamma.second, order);
    JetTensor r(n, 4, Jet(sp, order, 0.0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int m = 0; m < n; ++m) {
                    Jet v = d2(i, m, k, l) + d2(k, l, i, m) - d2(i, l, k, m) - d2(k, m, i, l);
                    v *= 0.5;
                    for (int p = 0; p < n; ++p) {
                        v.add_product(g1(p, k, l), g2(p, i, m));
                        v.add_product(g1(p, k, m), g2(p, i, l), -1.0);
                    }
                    r(i, k, l, m) = std::move(v);
                }
    return r;
}

JetTensor ricci_from_connection(const JetConnection& gamma) {
    const JetTensor& G = gamma.second;
    const int n = G.dim();
    const int order = jet_order(G) - 1;
    require(order >= 0, ErrorCode::InsufficientOrder, "ricci: connection jets need order >= 1");
    const JetSpace& sp = G[0].space();
    std::vector<Jet> trace(static_cast<std::size_t>(n), Jet(sp, order + 1, 0.0));
    for (int p = 0; p < n; ++p)
        for (int l = 0; l < n; ++l) trace[p] += G(l, l, p);
    JetTensor low = truncated(G, order);
    std::vector<Jet> tl(trace.size());
    for (int p = 0; p < n; ++p) tl[p] = trace[p].truncated(order);
    JetTensor ric(n, 2, Jet(sp, order, 0.0));
    for (int i = 0; i < n; ++i)
        for (int k = i; k < n; ++k) {
            Jet v = trace[i].d(k);
            v *= -1.0;
            for (int l = 0; l < n; ++l) v += G(l, i, k).d(l);
            for (int p = 0; p < n; ++p) {
                v.add_product(tl[p], low(p, i, k));
                for (int l = 0; l < n; ++l) v.add_product(low(l, k, p), low(p, i, l), -1.0);
            }
            ric(i, k) = v;
            if (k != i) ric(k, i) = std::move(v);
        }
    return ric;
}

JetTensor covariant_derivative(const JetTensor& t, const JetTensor& gamma2) {
    const int n = t.dim();
    const int rank = t.rank();
    const int order = std::min(jet_order(t) - 1, jet_order(gamma2));
    require(order >= 0, ErrorCode::InsufficientOrder, "covariant derivative: tensor jets need order >= 1");
    const JetSpace& sp = t[0].space();
    const JetTensor G = truncated(gamma2, order);
    JetTensor out(n, rank + 1, Jet(sp, order, 0.0));
    std::vector<int> idx;
    for (std::size_t f = 0; f < t.size(); ++f) {
        unflatten(f, n, rank, idx);
        for (int k = 0; k < n; ++k) {
            Jet v = t[f].d(k).truncated(order);
            for (int s = 0; s < rank; ++s) {
                const std::size_t st = stride(n, rank, s);
                const std::size_t base = f - static_cast<std::size_t>(idx[s]) * st;
                for (int m = 0; m < n; ++m) v.add_product(G(m, k, idx[s]), t[base + m * st], -1.0);
            }
            out[f * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] = std::move(v);
        }
    }
    return out;
}

Tensor raise_index(const Tensor& t, const Tensor& ginv, int a) {
    const int n = t.dim();
    const int rank = t.rank();
    const std::size_t st = stride(n, rank, a);
    Tensor out(n, rank, 0.0);
    std::vector<int> idx;
    for (std::size_t f = 0; f < t.size(); ++f) {
        unflatten(f, n, rank, idx);
        const std::size_t base = f - static_cast<std::size_t>(idx[a]) * st;
        double v = 0.0;
        for (int m = 0; m < n; ++m) v += ginv(idx[a], m) * t[base + m * st];
        out[f] = v;
    }
    return out;
}

double norm_squared(const Tensor& t, const Tensor& ginv) {
    Tensor up = t;
    for (int a = 0; a < t.rank(); ++a) up = raise_index(up, ginv, a);
    double s = 0.0;
    for (std::size_t f = 0; f < t.size(); ++f) s += t[f] * up[f];
    return s;
}

namespace {

struct CurvatureJets {
    int n = 0;
    JetTensor g;      // order 4
    JetTensor ginv;   // order 3
    JetConnection conn;
    JetTensor riemann;  // order 2
    JetTensor ricci;    // order 2
    Jet scalar;         // order 2
    JetTensor schouten;  // order 2 (n >= 3)
    JetTensor weyl;      // order 2 (n >= 3)
    JetTensor dP;        // order 1: dP(i,j,k) = P_ij,k
    JetTensor cotton;    // order 1
};

CurvatureJets curvature_jets(const MetricFamily& family, std::span<const double> x) {
    const int n = family.dim();
    require(n >= 2, ErrorCode::DimensionUnsupported, "curvature requires dimension >= 2");
    const JetSpace& sp = JetSpace::get(n, 4);
    CurvatureJets cj;
    cj.n = n;
    cj.g = family.metric(x, sp, 4);
    cj.ginv = jet_inverse(truncated(cj.g, 3));
    cj.conn = christoffel(cj.g, cj.ginv);
    cj.riemann = riemann_lowered(cj.g, cj.conn);
    const JetTensor gi = truncated(cj.ginv, 2);
    const JetTensor g2 = truncated(cj.g, 2);
    cj.ricci = JetTensor(n, 2, Jet(sp, 2, 0.0));
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) cj.ricci(j, l).add_product(gi(i, k), cj.riemann(i, j, k, l));
    cj.scalar = Jet(sp, 2, 0.0);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) cj.scalar.add_product(gi(j, l), cj.ricci(j, l));
    if (n < 3) return cj;

    cj.schouten = JetTensor(n, 2, Jet(sp, 2, 0.0));
    const double rscale = 1.0 / (2.0 * (n - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet v = cj.ricci(i, j);
            v.add_product(cj.scalar, g2(i, j), -rscale);
            v *= 1.0 / (n - 2);
            cj.schouten(i, j) = std::move(v);
        }
    const JetTensor& P = cj.schouten;
    cj.weyl = cj.riemann;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Jet& w = cj.weyl(i, j, k, l);
                    w.add_product(P(i, k), g2(j, l), -1.0);
                    w.add_product(P(j, l), g2(i, k), -1.0);
                    w.add_product(P(i, l), g2(j, k));
                    w.add_product(P(j, k), g2(i, l));
                }
    cj.dP = covariant_derivative(P, cj.conn.second);
    cj.cotton = JetTensor(n, 3, Jet(sp, 1, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) cj.cotton(i, j, k) = cj.dP(i, j, k) - cj.dP(i, k, j);
    return cj;
}

Tensor bach_values(const CurvatureJets& cj, const Tensor& ginv, const Tensor& P, const Tensor& W) {
    const int n = cj.n;
    const JetTensor ddP = covariant_derivative(cj.dP, cj.conn.second);  // (i,j,k,l) = P_ij,kl
    const Tensor Pup = raise_index(raise_index(P, ginv, 0), ginv, 1);
    Tensor B(n, 2, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = 0.0;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    v += ginv(k, l) * (ddP(i, j, k, l).value() - ddP(i, k, j, l).value());
                    v -= Pup(k, l) * W(k, i, j, l);
                }
            B(i, j) = v;
        }
    return B;
}

}  // namespace

const Tensor& CurvaturePack::P() const {
    require(schouten.has_value(), ErrorCode::DimensionUnsupported, "Schouten tensor requires dimension >= 3");
    return *schouten;
}
const Tensor& CurvaturePack::W() const {
    require(weyl.has_value(), ErrorCode::DimensionUnsupported, "Weyl tensor requires dimension >= 3");
    return *weyl;
}
const Tensor& CurvaturePack::C() const {
    require(cotton.has_value(), ErrorCode::DimensionUnsupported, "Cotton tensor requires dimension >= 3");
    return *cotton;
}
const Tensor& CurvaturePack::B() const {
    require(bach.has_value(), ErrorCode::DimensionUnsupported, "Bach tensor requires dimension >= 4");
    return *bach;
}

CurvaturePack curvature_pack(const MetricFamily& family, std::span<const double> x) {
    CurvaturePack pack;
    pack.n = family.dim();
    if (pack.n < 2) {
        const Eigen::MatrixXd g = family.metric_value(x);
        require(g(0, 0) > 0.0, ErrorCode::SingularMetric, "metric is not positive definite");
        pack.g = Tensor(1, 2, g(0, 0));
        pack.ginv = Tensor(1, 2, 1.0 / g(0, 0));
        return pack;
    }
    const CurvatureJets cj = curvature_jets(family, x);
    pack.g = values(cj.g);
    pack.ginv = values(cj.ginv);
    pack.riemann = values(cj.riemann);
    pack.ricci = values(cj.ricci);
    pack.scalar = cj.scalar.value();
    if (pack.n >= 3) {
        pack.schouten = values(cj.schouten);
        pack.weyl = values(cj.weyl);
        pack.cotton = values(cj.cotton);
    }
    if (pack.n >= 4) pack.bach = bach_values(cj, pack.ginv, *pack.schouten, *pack.weyl);
    return pack;
}

ConformalInvariants6 conformal_invariants_6d(const MetricFamily& family, std::span<const double> x) {
    const int n = family.dim();
    require(n >= 3, ErrorCode::DimensionUnsupported, "conformal invariants I and J require dimension >= 3");
    const CurvatureJets cj = curvature_jets(family, x);
    const Tensor g = values(cj.g);
    const Tensor ginv = values(cj.ginv);
    const Tensor P = values(cj.schouten);
    const Tensor W = values(cj.weyl);
    ConformalInvariants6 out;
    out.C = values(cj.cotton);
    const Tensor& C = out.C;
    const Tensor dW = values(covariant_derivative(cj.weyl, cj.conn.second));   // W_ijkl,m
    const Tensor dC = values(covariant_derivative(cj.cotton, cj.conn.second));  // C_jkl,i stored (j,k,l,i)

    out.V = Tensor(n, 5, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    for (int m = 0; m < n; ++m)
                        out.V(i, j, k, l, m) = dW(i, j, k, l, m) + g(i, m) * C(j, k, l) - g(j, m) * C(i, k, l) +
                                               g(k, m) * C(l, i, j) - g(l, m) * C(k, i, j);

    const Tensor Pmixed = raise_index(P, ginv, 1);  // P_i^m
    out.U = Tensor(n, 4, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    double v = dC(j, k, l, i);
                    for (int m = 0; m < n; ++m) v -= Pmixed(i, m) * W(m, j, k, l);
                    out.U(i, j, k, l) = v;
                }

    Tensor Uup = out.U;
    for (int a = 0; a < 4; ++a) Uup = raise_index(Uup, ginv, a);
    double wu = 0.0;
    for (std::size_t f = 0; f < W.size(); ++f) wu += W[f] * Uup[f];
    out.I = norm_squared(out.V, ginv) - 16.0 * wu + 16.0 * norm_squared(C, ginv);

    Tensor Wup = W;
    for (int a = 0; a < 4; ++a) Wup = raise_index(Wup, ginv, a);
    const Tensor W12 = raise_index(raise_index(W, ginv, 0), ginv, 1);  // W^{ij}_{pq}
    const Tensor W13 = raise_index(raise_index(W, ginv, 0), ginv, 2);  // W^j_p^l_q
    double t1 = 0.0, t2 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double w = W(i, j, k, l);
                    if (w == 0.0) continue;
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q) {
                            t1 += w * W12(i, j, p, q) * Wup(k, l, p, q);
                            t2 += w * Wup(i, p, k, q) * W13(j, p, l, q);
                        }
                }
    out.J = -3.0 * out.I + 7.0 * t1 + 4.0 * t2;
    return out;
}

GaussBonnetSides gauss_bonnet_sides(const MetricFamily& family, int nodes) {
    require(family.dim() == 4, ErrorCode::DimensionUnsupported, "Gauss-Bonnet identity is implemented for n = 4");
    const QuadratureGrid grid = family.quadrature_grid(nodes);
    const ScalarField f = sample(grid, [&](const std::vector<double>& x) {
        const CurvaturePack c = curvature_pack(family, x);
        const double trP = [&] {
            double s = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) s += c.ginv(i, j) * c.P()(i, j);
            return s;
        }();
        return norm_squared(c.W(), c.ginv) - 8.0 * norm_squared(c.P(), c.ginv) + 8.0 * trP * trP;
    });
    const double pi = std::numbers::pi;
    return {32.0 * pi * pi * family.euler_characteristic(), integrate_scalar(f, family, grid)};
}

}  // namespace renorm
