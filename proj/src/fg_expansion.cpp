#include "renorm/fg_expansion.hpp"

#include "renorm/error.hpp"

#include <algorithm>
#include <cmath>

namespace renorm {

const char* determinacy_name(Determinacy d) noexcept {
    switch (d) {
        case Determinacy::Determined: return "determined";
        case Determinacy::Free: return "free";
        case Determinacy::TraceDeterminedOnly: return "trace-determined-only";
        case Determinacy::ConditionallyDetermined: return "conditionally-determined";
    }
    return "unknown";
}

namespace {

// Coefficient of r^p in f, as a jet of the given order with no r dependence.
Jet r_slice(const Jet& f, int rvar, int p, int order) {
    const JetSpace& sp = f.space();
    Jet out(sp, order, 0.0);
    const auto src = f.coeffs();
    auto dst = out.coeffs();
    for (std::size_t m = 0; m < dst.size(); ++m) {
        if (sp.exponents(m)[rvar] != 0) continue;
        std::size_t k = m;
        for (int s = 0; s < p && k != JetSpace::npos; ++s) k = sp.raised(rvar, k);
        if (k != JetSpace::npos && k < src.size()) dst[m] = src[k];
    }
    return out;
}

// f * r^p truncated at the given order.
Jet r_lift(const Jet& f, int rvar, int p, int order) {
    const JetSpace& sp = f.space();
    Jet out(sp, order, 0.0);
    const auto src = f.coeffs();
    auto dst = out.coeffs();
    for (std::size_t m = 0; m < src.size(); ++m) {
        if (sp.degree(m) + p > order) continue;
        std::size_t k = m;
        for (int s = 0; s < p; ++s) k = sp.raised(rvar, k);
        dst[k] += src[m];
    }
    return out;
}

JetTensor truncated(const JetTensor& t, int order) {
    JetTensor out = t;
    for (auto& c : out.data()) c = c.truncated(order);
    return out;
}

Jet trace(const JetTensor& ginv, const JetTensor& t) {
    const int n = t.dim();
    const int order = std::min(ginv[0].order(), t[0].order());
    Jet s(t[0].space(), order, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.add_product(ginv(i, j), t(i, j));
    return s;
}

}  // namespace

JetTensor einstein_residual_jets(const JetTensor& g) {
    const int n = g.dim();
    const int K = g[0].order();
    const JetSpace& sp = g[0].space();
    require(sp.nvars() == n + 1, ErrorCode::ShapeMismatch, "residual: jets must be in (x_1..x_n, r)");
    require(K >= 2, ErrorCode::InsufficientOrder, "residual: jets need order >= 2");
    const int rv = n;

    JetTensor gp(n, 2, Jet(sp, K - 1, 0.0)), gpp(n, 2, Jet(sp, K - 2, 0.0));
    for (std::size_t f = 0; f < g.size(); ++f) {
        gp[f] = g[f].d(rv);
        gpp[f] = gp[f].d(rv);
    }
    const JetTensor gi = jet_inverse(truncated(g, K - 1));
    const Jet T = trace(gi, gp);
    JetTensor M(n, 2, Jet(sp, K - 1, 0.0));  // g^-1 g'
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) M(k, j).add_product(gi(k, l), gp(l, j));
    const JetConnection conn = christoffel(g, gi);
    const JetTensor ric = ricci_from_connection(conn);
    const JetTensor gK1 = truncated(g, K - 1);

    JetTensor F(n, 2, Jet(sp, K, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Jet lin1 = gp(i, j) * (1.0 - n);
            lin1.add_product(T, gK1(i, j), -1.0);
            Jet lin2 = gpp(i, j) - 2.0 * ric(i, j);
            Jet quad(sp, K - 1, 0.0);
            for (int k = 0; k < n; ++k) quad.add_product(gp(i, k), M(k, j), -1.0);
            quad.add_product(T, gp(i, j), 0.5);
            Jet v = r_lift(lin1, rv, 1, K);
            v += r_lift(lin2, rv, 2, K);
            v += r_lift(quad, rv, 2, K);
            F(i, j) = v;
            if (j != i) F(j, i) = std::move(v);
        }
    return F;
}

PowerSeriesMetric fg_expand(const MetricFamily& family, std::span<const double> x, int order,
                            const FgOptions& options) {
    const int n = family.dim();
    require(order >= 0, ErrorCode::InvalidArgument, "fg_expand: order must be non-negative");
    if (order > n) {
        require(n % 2 == 1, ErrorCode::Indeterminacy,
                "fg_expand: for even n the expansion past order n needs log terms; order must be <= n");
        require(options.allow_free_data, ErrorCode::Indeterminacy,
                "fg_expand: for odd n the trace-free part of g(n) is undetermined; order must be <= n "
                "(or enable free-data continuation)");
    }
    const int K = std::max(order, 2);
    const int rv = n;
    const JetSpace& sp = JetSpace::get(n + 1, K);
    JetTensor g = family.metric(x, sp, K);
    const JetTensor g0 = g;
    const JetTensor g0inv = jet_inverse(g0);

    PowerSeriesMetric ps;
    ps.n = n;
    ps.order = order;
    ps.g.push_back(values(g0));
    ps.flags.push_back(Determinacy::Determined);
    std::optional<JetTensor> hjet;

    for (int nu = 1; nu <= order; ++nu) {
        const JetTensor F = einstein_residual_jets(g);
        const int xo = K - nu;
        JetTensor Y(n, 2, Jet(sp, xo, 0.0));
        for (std::size_t f = 0; f < F.size(); ++f) {
            Y[f] = r_slice(F[f], rv, nu, xo);
            Y[f] *= -1.0 / nu;
        }
        const Jet trY = trace(g0inv, Y);
        JetTensor X(n, 2, Jet(sp, xo, 0.0));
        Determinacy flag = Determinacy::Determined;
        if (nu != n) {
            const Jet trX = trY * (1.0 / (nu - 2 * n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Jet v = Y(i, j);
                    v.add_product(trX, g0(i, j));
                    v *= 1.0 / (nu - n);
                    X(i, j) = std::move(v);
                }
            if (nu > n) flag = Determinacy::ConditionallyDetermined;
        } else {
            const Jet trX = trY * (-1.0 / n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    X(i, j) = Jet(sp, xo, 0.0);
                    X(i, j).add_product(trX, g0(i, j), 1.0 / n);
                }
            JetTensor tf = Y;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) tf(i, j).add_product(trY, g0(i, j), -1.0 / n);
            if (n % 2 == 0) {
                flag = Determinacy::TraceDeterminedOnly;
                hjet = tf;
                ps.h = values(tf);
            } else {
                flag = Determinacy::Free;
                ps.odd_trace_defect = std::abs(trX.value());
            }
        }
        for (std::size_t f = 0; f < g.size(); ++f) g[f] += r_lift(X[f], rv, nu, K);
        ps.g.push_back(values(X));
        ps.flags.push_back(flag);
    }

    if (order >= 1) {
        JetTensor F = einstein_residual_jets(g);
        if (hjet) {
            // r * (r L'' + (1-n) L') = n h r^n for L = h r^n log r; the trace term drops since tr h = 0.
            for (std::size_t f = 0; f < F.size(); ++f) {
                Jet add = r_lift((*hjet)[f], rv, n, K);
                add *= static_cast<double>(n);
                F[f] += add;
            }
        }
        double res = 0.0;
        for (int j = 1; j <= order; ++j)
            for (const auto& c : F.data()) res = std::max(res, std::abs(r_slice(c, rv, j, 0).value()));
        ps.residual = res;
    }
    return ps;
}

MatrixSeries PowerSeriesMetric::matrix_series() const {
    std::vector<Eigen::MatrixXd> c;
    for (const auto& t : g) {
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = t(i, j);
        c.push_back(std::move(m));
    }
    return MatrixSeries(std::move(c));
}

Eigen::MatrixXd PowerSeriesMetric::evaluate(double r) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    double rp = 1.0;
    for (const auto& t : g) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) += rp * t(i, j);
        rp *= r;
    }
    if (h && r > 0.0) {
        const double w = std::pow(r, n) * std::log(r);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) += w * (*h)(i, j);
    }
    return m;
}

PowerSeriesField fg_expand(const MetricFamily& g0, const QuadratureGrid& grid, int order, const FgOptions& options) {
    require(grid.dim() == g0.dim(), ErrorCode::ShapeMismatch, "fg_expand: grid dimension mismatch");
    PowerSeriesField out;
    out.grid = grid;
    out.n = g0.dim();
    out.order = order;
    out.points.reserve(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) out.points.push_back(fg_expand(g0, grid.point(p), order, options));
    return out;
}

double PowerSeriesField::max_residual() const {
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, p.residual);
    return m;
}

double PowerSeriesField::max_coefficient(int j) const {
    double m = 0.0;
    for (const auto& p : points)
        for (double v : p.g.at(static_cast<std::size_t>(j)).data()) m = std::max(m, std::abs(v));
    return m;
}

double VolumeSeries::coefficient(int j) const {
    require(j >= 0 && j <= order, ErrorCode::InsufficientOrder,
            "volume coefficient v(" + std::to_string(j) + ") needs an expansion of order >= " + std::to_string(j));
    return v[j];
}

VolumeSeries volume_series(const PowerSeriesMetric& ps) {
    VolumeSeries vs;
    vs.n = ps.n;
    vs.order = ps.order;
    const Series s = sqrt_det_ratio(ps.matrix_series());
    vs.v = s.coeffs();
    vs.closed.assign(vs.v.size(), std::nullopt);
    return vs;
}

std::vector<std::optional<double>> volume_coefficients_closed(const CurvaturePack& pack, int order) {
    const int n = pack.n;
    std::vector<std::optional<double>> out(static_cast<std::size_t>(std::max(order, 0)) + 1, std::nullopt);
    if (n < 2) return out;
    if (order >= 2) out[2] = -*pack.scalar / (4.0 * (n - 1));
    if (n < 4) return out;
    const Tensor& gi = pack.ginv;
    const Tensor& P = pack.P();
    const Eigen::Map<const Eigen::MatrixXd> Gi(gi.data().data(), n, n);
    const Eigen::Map<const Eigen::MatrixXd> Pm(P.data().data(), n, n);
    const Eigen::MatrixXd A = Gi * Pm;  // P^i_j
    const double trP = A.trace();
    const double P2 = (A * A).trace();
    if (order >= 4) out[4] = (trP * trP - P2) / 8.0;
    if (n == 6 && order >= 6) {
        const Eigen::Map<const Eigen::MatrixXd> Bm(pack.B().data().data(), n, n);
        const double PB = (A * Gi * Bm).trace();  // P^ij B_ij
        const double P3 = (A * A * A).trace();
        out[6] = (-PB + 3.0 * trP * P2 - 2.0 * P3 - trP * trP * trP) / 48.0;
    }
    return out;
}

VolumeSeries volume_series(const PowerSeriesMetric& ps, const CurvaturePack& pack) {
    require(pack.n == ps.n, ErrorCode::ShapeMismatch, "volume_series: curvature pack dimension mismatch");
    VolumeSeries vs = volume_series(ps);
    vs.closed = volume_coefficients_closed(pack, ps.order);
    vs.closed.resize(vs.v.size());
    for (std::size_t j = 0; j < vs.v.size(); ++j)
        if (vs.closed[j]) vs.discrepancy = std::max(vs.discrepancy, std::abs(vs.v[j] - *vs.closed[j]));
    return vs;
}

}  // namespace renorm
