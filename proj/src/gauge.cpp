#include "renorm/gauge.hpp"

#include "renorm/curvature.hpp"
#include "renorm/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace renorm {

// ---- normal forms ----

LocalNormalForm::LocalNormalForm(int n, Eigen::MatrixXd g0, std::optional<PowerSeriesMetric> series)
    : n_(n), g0_(std::move(g0)), series_(std::move(series)) {}

Eigen::MatrixXd LocalNormalForm::metric(double r) const {
    if (series_) return series_->evaluate(r);
    const double s = 1.0 - r * r;
    return s * s * g0_;
}

Eigen::MatrixXd LocalNormalForm::inverse_metric(double r) const {
    if (!series_) {
        const double s = 1.0 - r * r;
        require(s != 0.0, ErrorCode::SingularMetric, "normal form: g_r degenerates at r = 1");
        return g0_.inverse() / (s * s);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(metric(r));
    require(llt.info() == Eigen::Success, ErrorCode::SingularMetric, "normal form: g_r is not positive definite");
    return llt.solve(Eigen::MatrixXd::Identity(n_, n_));
}

double LocalNormalForm::density(double r) const {
    if (!series_) return std::pow(1.0 - r * r, n_);
    Eigen::LLT<Eigen::MatrixXd> llt(metric(r));
    require(llt.info() == Eigen::Success, ErrorCode::SingularMetric, "normal form: g_r is not positive definite");
    Eigen::LLT<Eigen::MatrixXd> llt0(g0_);
    double ratio = 1.0;
    for (int i = 0; i < n_; ++i) ratio *= llt.matrixL()(i, i) / llt0.matrixL()(i, i);
    return ratio;
}

Series LocalNormalForm::density_series(int degree) const {
    require(degree >= 0, ErrorCode::InvalidArgument, "density_series: negative degree");
    if (!series_) {
        Series s(degree, 0.0);
        double binom = 1.0;
        for (int k = 0; 2 * k <= degree && k <= n_; ++k) {
            s[2 * k] = (k % 2 == 0 ? 1.0 : -1.0) * binom;
            binom = binom * (n_ - k) / (k + 1);
        }
        return s;
    }
    MatrixSeries ms(n_, degree);
    const MatrixSeries src = series_->matrix_series();
    for (int j = 0; j <= std::min(degree, src.degree()); ++j) ms[j] = src[j];
    return sqrt_det_ratio(ms);
}

NormalForm NormalForm::hyperbolic(int n) {
    require(n >= 1, ErrorCode::InvalidArgument, "hyperbolic normal form: n must be >= 1");
    NormalForm nf;
    nf.kind_ = Kind::Hyperbolic;
    nf.boundary_ = std::make_shared<const MetricFamily>(MetricFamily::round_sphere(n, 0.5));
    nf.r_max_ = 1.0;
    nf.order_ = -1;
    return nf;
}

NormalForm NormalForm::series(const MetricFamily& g0, int order, double r_max, const FgOptions& options) {
    require(order >= 0, ErrorCode::InvalidArgument, "series normal form: order must be non-negative");
    require(r_max > 0.0 && std::isfinite(r_max), ErrorCode::InvalidArgument, "series normal form: r_max must be positive");
    NormalForm nf;
    nf.kind_ = Kind::Series;
    nf.boundary_ = std::make_shared<const MetricFamily>(g0);
    nf.r_max_ = r_max;
    nf.order_ = order;
    nf.options_ = options;
    return nf;
}

LocalNormalForm NormalForm::at(std::span<const double> x) const {
    require(static_cast<int>(x.size()) == dim(), ErrorCode::ShapeMismatch, "normal form: point has wrong dimension");
    Eigen::MatrixXd g0 = boundary_->metric_value(x);
    if (kind_ == Kind::Hyperbolic) return LocalNormalForm(dim(), std::move(g0), std::nullopt);
    return LocalNormalForm(dim(), std::move(g0), fg_expand(*boundary_, x, order_, options_));
}

namespace {

// g_r(x) of a closed-form normal form as jets in (x, r) about (x0, r0).
JetTensor hyperbolic_jets(const NormalForm& nf, std::span<const double> x, double r0, int order) {
    require(nf.closed_form(), ErrorCode::InvalidArgument, "closed-form normal form required");
    const int n = nf.dim();
    const JetSpace& sp = JetSpace::get(n + 1, order);
    JetTensor g = nf.boundary().metric(x, sp, order);
    const Jet r = Jet::variable(sp, order, n, r0);
    const Jet s = 1.0 - r * r;
    const Jet s2 = s * s;
    for (auto& c : g.data()) c = c * s2;
    return g;
}

}  // namespace

double einstein_residual(const NormalForm& nf, std::span<const double> x, double r) {
    const int n = nf.dim();
    const JetTensor g = hyperbolic_jets(nf, x, r, 2);
    const JetSpace& sp = g[0].space();
    JetTensor gp(n, 2, Jet(sp, 1, 0.0));
    Tensor gv(n, 2, 0.0), gpv(n, 2, 0.0), gppv(n, 2, 0.0);
    for (std::size_t f = 0; f < g.size(); ++f) {
        gp[f] = g[f].d(n);
        gv[f] = g[f].value();
        gpv[f] = gp[f].value();
        gppv[f] = gp[f].d(n).value();
    }
    JetTensor g1 = g;
    for (auto& c : g1.data()) c = c.truncated(1);
    const JetTensor gi = jet_inverse(g1);
    const Tensor ric = values(ricci_from_connection(christoffel(g, gi)));

    Eigen::Map<const Eigen::MatrixXd> G(gv.data().data(), n, n), Gp(gpv.data().data(), n, n),
        Gpp(gppv.data().data(), n, n), Ric(ric.data().data(), n, n);
    const Eigen::MatrixXd Gi = G.inverse();
    const double T = (Gi * Gp).trace();
    const Eigen::MatrixXd E = r * Gpp + (1.0 - n) * Gp - T * G - r * Gp * Gi * Gp + 0.5 * r * T * Gp - 2.0 * r * Ric;
    return E.cwiseAbs().maxCoeff();
}

std::vector<double> sectional_curvatures(const NormalForm& nf, std::span<const double> x, double r) {
    require(r > 0.0, ErrorCode::Domain, "sectional_curvatures: r must be positive");
    const int n = nf.dim();
    const int N = n + 1;
    const JetTensor g = hyperbolic_jets(nf, x, r, 2);
    const JetSpace& sp = g[0].space();
    const Jet rj = Jet::variable(sp, 2, n, r);
    const Jet inv_r2 = reciprocal(rj * rj);
    JetTensor G(N, 2, Jet(sp, 2, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = g(i, j) * inv_r2;
    G(n, n) = inv_r2;
    JetTensor G1 = G;
    for (auto& c : G1.data()) c = c.truncated(1);
    const Tensor R = values(riemann_lowered(G, christoffel(G, jet_inverse(G1))));
    const Tensor Gv = values(G);
    std::vector<double> out;
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b) {
            const double area = Gv(a, a) * Gv(b, b) - Gv(a, b) * Gv(a, b);
            out.push_back(R(a, b, a, b) / area);
        }
    return out;
}

// ---- special defining function ----

OmegaField::OmegaField(QuadratureGrid grid, ConformalFactor upsilon, double step, int steps, bool negative,
                       std::vector<double> values, std::vector<double> slopes)
    : grid_(std::move(grid)),
      upsilon_(std::move(upsilon)),
      step_(step),
      steps_(steps),
      negative_(negative),
      values_(std::move(values)),
      slopes_(std::move(slopes)) {
    const std::size_t rows = static_cast<std::size_t>(negative_ ? 2 * steps_ + 1 : steps_ + 1);
    require(values_.size() == rows * grid_.size() && slopes_.size() == values_.size(), ErrorCode::ShapeMismatch,
            "OmegaField: sample count does not match grid and radial nodes");
    monotone_.assign(grid_.size(), r_max());
    for (std::size_t p = 0; p < grid_.size(); ++p)
        for (int i = 0; i <= steps_; ++i)
            if (1.0 + i * step_ * node_slope(p, i) <= 0.0) {
                monotone_[p] = std::max(0, i - 1) * step_;
                break;
            }
}

std::size_t OmegaField::slot(std::size_t p, int i) const {
    require(p < grid_.size(), ErrorCode::ShapeMismatch, "OmegaField: grid index out of range");
    require(i <= steps_ && i >= (negative_ ? -steps_ : 0), ErrorCode::Domain, "OmegaField: radial node out of range");
    const int row = negative_ ? i + steps_ : i;
    return static_cast<std::size_t>(row) * grid_.size() + p;
}

double OmegaField::node(std::size_t p, int i) const { return values_[slot(p, i)]; }
double OmegaField::node_slope(std::size_t p, int i) const { return slopes_[slot(p, i)]; }

namespace {

struct Hermite {
    int i;     // left node
    double t;  // in [0, 1]
};

Hermite locate(double r, double h, int steps, bool negative) {
    const double lo = negative ? -steps * h : 0.0;
    const double hi = steps * h;
    const double tol = 1e-12 * h;
    if (r < lo - tol || r > hi + tol) {
        std::ostringstream os;
        os << "gauge function requested at r = " << r << " outside the solved range [" << lo << ", " << hi << "]";
        fail(ErrorCode::Domain, os.str());
    }
    r = std::clamp(r, lo, hi);
    int i = static_cast<int>(std::floor(r / h));
    i = std::clamp(i, negative ? -steps : 0, steps - 1);
    return {i, (r - i * h) / h};
}

double hermite_value(double y0, double y1, double d0, double d1, double h, double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

double hermite_slope(double y0, double y1, double d0, double d1, double h, double t) {
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (-6 * t2 + 6 * t) * y1) / h + (3 * t2 - 4 * t + 1) * d0 + (3 * t2 - 2 * t) * d1;
}

}  // namespace

double OmegaField::value(std::size_t p, double r) const {
    const Hermite c = locate(r, step_, steps_, negative_);
    return hermite_value(node(p, c.i), node(p, c.i + 1), node_slope(p, c.i), node_slope(p, c.i + 1), step_, c.t);
}

double OmegaField::slope(std::size_t p, double r) const {
    const Hermite c = locate(r, step_, steps_, negative_);
    return hermite_slope(node(p, c.i), node(p, c.i + 1), node_slope(p, c.i), node_slope(p, c.i + 1), step_, c.t);
}

double OmegaField::value_at(std::span<const double> x, double r) const {
    const Hermite c = locate(r, step_, steps_, negative_);
    const std::size_t P = grid_.size();
    auto row = [&](const std::vector<double>& v, int i) {
        return grid_.interpolate(std::span<const double>(v.data() + slot(0, i), P), x);
    };
    return hermite_value(row(values_, c.i), row(values_, c.i + 1), row(slopes_, c.i), row(slopes_, c.i + 1), step_,
                         c.t);
}

double OmegaField::slope_at(std::span<const double> x, double r) const {
    const Hermite c = locate(r, step_, steps_, negative_);
    const std::size_t P = grid_.size();
    auto row = [&](const std::vector<double>& v, int i) {
        return grid_.interpolate(std::span<const double>(v.data() + slot(0, i), P), x);
    };
    return hermite_slope(row(values_, c.i), row(values_, c.i + 1), row(slopes_, c.i), row(slopes_, c.i + 1), step_,
                         c.t);
}

namespace {

void check_symmetry(const MetricFamily& family, const ConformalFactor& upsilon, const QuadratureGrid& grid) {
    if (!grid.reduced()) return;
    bool ok = true;
    if (family.is_sphere()) {
        ok = family.zonal() && upsilon.zonal();
    } else {
        for (int a = 0; a < grid.dim(); ++a)
            if (grid.axes()[a].kind == Axis::Kind::Fixed && upsilon.depends_on_chart(a)) ok = false;
    }
    require(ok, ErrorCode::Symmetry,
            "gauge solve: the grid is reduced along directions on which Upsilon or the metric depends");
}

// Right-hand side w_r = -r a / (1 + sqrt(1 - r^2 a)), a = g_r^{ij} w_i w_j.
class EikonalRhs {
public:
    EikonalRhs(const NormalForm& nf, const QuadratureGrid& grid) : grid_(grid), n_(nf.dim()) {
        for (int a = 0; a < grid.dim(); ++a)
            if (grid.axes()[a].kind != Axis::Kind::Fixed && grid.axes()[a].size() > 1) active_.push_back(a);
        hyperbolic_ = nf.closed_form();
        for (std::size_t p = 0; p < grid.size(); ++p) local_.push_back(nf.at(grid.point(p)));
    }

    double gradient_norm(std::size_t p, double r, const std::vector<std::vector<double>>& d) const {
        Eigen::MatrixXd gi;
        if (hyperbolic_) {
            if (g0inv_.size() <= p) g0inv_.resize(grid_.size());
            if (g0inv_[p].size() == 0) g0inv_[p] = local_[p].g0().inverse();
            const double s = 1.0 - r * r;
            gi = g0inv_[p] / (s * s);
        } else {
            gi = local_[p].inverse_metric(r);
        }
        double a = 0.0;
        for (std::size_t u = 0; u < active_.size(); ++u)
            for (std::size_t v = 0; v < active_.size(); ++v) a += gi(active_[u], active_[v]) * d[u][p] * d[v][p];
        return a;
    }

    std::vector<std::vector<double>> derivatives(const std::vector<double>& w) const {
        std::vector<std::vector<double>> d;
        for (int a : active_) d.push_back(grid_.differentiate(w, a));
        return d;
    }

    std::vector<double> operator()(double r, const std::vector<double>& w) const {
        const auto d = derivatives(w);
        std::vector<double> out(w.size());
        for (std::size_t p = 0; p < w.size(); ++p) {
            const double a = gradient_norm(p, r, d);
            const double disc = 1.0 - r * r * a;
            if (disc <= 0.0) {
                std::ostringstream os;
                os << "gauge solve: 1 - r^2 |d omega|^2 <= 0 at r = " << r << " (grid node " << p << ")";
                fail(ErrorCode::GaugeBreakdown, os.str());
            }
            out[p] = -r * a / (1.0 + std::sqrt(disc));
        }
        return out;
    }

private:
    const QuadratureGrid& grid_;
    int n_;
    bool hyperbolic_ = false;
    std::vector<int> active_;
    std::vector<LocalNormalForm> local_;
    mutable std::vector<Eigen::MatrixXd> g0inv_;
};

void axpy(std::vector<double>& out, const std::vector<double>& x, double s, const std::vector<double>& y) {
    out.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + s * y[i];
}

}  // namespace

OmegaField solve_special_defining(const NormalForm& nf, const ConformalFactor& upsilon, const QuadratureGrid& grid,
                                  const GaugeOptions& options) {
    const MetricFamily& family = nf.boundary();
    require(grid.dim() == family.dim(), ErrorCode::ShapeMismatch, "gauge solve: grid dimension differs from n");
    require(options.step > 0.0 && options.r_max > 0.0, ErrorCode::InvalidArgument,
            "gauge solve: step and r_max must be positive");
    require(options.r_max <= nf.r_max(), ErrorCode::Domain, "gauge solve: r_max exceeds the normal-form domain");
    check_symmetry(family, upsilon, grid);

    const int steps = static_cast<int>(std::ceil(options.r_max / options.step - 1e-9));
    const double h = options.r_max / steps;
    const std::size_t P = grid.size();
    const bool neg = options.both_directions;
    const std::size_t rows = static_cast<std::size_t>(neg ? 2 * steps + 1 : steps + 1);
    std::vector<double> values(rows * P), slopes(rows * P);

    std::vector<double> w0(P);
    const JetSpace& sp = JetSpace::get(family.dim(), 1);
    for (std::size_t p = 0; p < P; ++p) w0[p] = family.evaluate_function(upsilon, grid.point(p), sp, 0).value();

    const EikonalRhs rhs(nf, grid);
    auto store = [&](int i, const std::vector<double>& w, const std::vector<double>& f) {
        const std::size_t row = static_cast<std::size_t>(neg ? i + steps : i);
        std::copy(w.begin(), w.end(), values.begin() + static_cast<std::ptrdiff_t>(row * P));
        std::copy(f.begin(), f.end(), slopes.begin() + static_cast<std::ptrdiff_t>(row * P));
    };

    for (int dir : {1, -1}) {
        if (dir < 0 && !neg) break;
        const double s = dir * h;
        std::vector<double> w = w0, tmp;
        std::vector<double> f = rhs(0.0, w);
        if (dir > 0) store(0, w, f);
        for (int i = 0; i < steps; ++i) {
            const double r = i * s;
            axpy(tmp, w, 0.5 * s, f);
            const auto k2 = rhs(r + 0.5 * s, tmp);
            axpy(tmp, w, 0.5 * s, k2);
            const auto k3 = rhs(r + 0.5 * s, tmp);
            axpy(tmp, w, s, k3);
            const auto k4 = rhs(r + s, tmp);
            for (std::size_t p = 0; p < P; ++p) w[p] += s / 6.0 * (f[p] + 2.0 * k2[p] + 2.0 * k3[p] + k4[p]);
            f = rhs(r + s, w);
            store(dir * (i + 1), w, f);
        }
    }

    OmegaField field(grid, upsilon, h, steps, neg, std::move(values), std::move(slopes));

    // Residual with w_r from fourth-order central differences of the stored values.
    double res = 0.0;
    const int lo = neg ? -steps + 2 : 2;
    std::vector<double> w(P);
    for (int i = lo; i <= steps - 2; ++i) {
        for (std::size_t p = 0; p < P; ++p) w[p] = field.node(p, i);
        const auto d = rhs.derivatives(w);
        const double r = i * h;
        for (std::size_t p = 0; p < P; ++p) {
            const double wr = (-field.node(p, i + 2) + 8.0 * field.node(p, i + 1) - 8.0 * field.node(p, i - 1) +
                               field.node(p, i - 2)) /
                              (12.0 * h);
            const double a = rhs.gradient_norm(p, r, d);
            res = std::max(res, std::abs(2.0 * wr + r * (wr * wr + a)));
        }
    }
    field.residual = res;
    return field;
}

double r_hat(const OmegaField& omega, std::size_t p, double r) { return r * std::exp(omega.value(p, r)); }

namespace {

template <typename V, typename S>
double invert(double eps, double guess, double limit, V&& value, S&& slope) {
    require(eps > 0.0, ErrorCode::Domain, "epsilon_hat: eps must be positive");
    if (limit * std::exp(value(limit)) < eps) {
        std::ostringstream os;
        os << "epsilon_hat: eps = " << eps << " lies outside the range where r exp(omega) is solved and increasing";
        fail(ErrorCode::Domain, os.str());
    }
    double r = std::clamp(guess, 0.0, limit);
    for (int it = 0; it < 60; ++it) {
        const double e = std::exp(value(r));
        const double phi = r * e - eps;
        const double dphi = e * (1.0 + r * slope(r));
        require(dphi > 0.0, ErrorCode::Inversion, "epsilon_hat: r exp(omega) is not increasing");
        if (std::abs(phi) <= 1e-15 * eps) return r;
        double next = r - phi / dphi;
        if (next <= 0.0) next = 0.5 * r;
        if (next > limit) next = 0.5 * (r + limit);
        if (std::abs(next - r) <= 1e-16 * r) return next;
        r = next;
    }
    const double resid = std::abs(r * std::exp(value(r)) - eps);
    require(resid <= 1e-12 * eps, ErrorCode::Inversion, "epsilon_hat: Newton iteration did not converge");
    return r;
}

}  // namespace

double epsilon_hat(const OmegaField& omega, std::size_t p, double eps) {
    const double guess = eps * std::exp(-omega.node(p, 0));
    return invert(
        eps, guess, omega.monotone_limit(p), [&](double r) { return omega.value(p, r); },
        [&](double r) { return omega.slope(p, r); });
}

double epsilon_hat_at(const OmegaField& omega, std::span<const double> x, double eps) {
    const double guess = eps * std::exp(-omega.value_at(x, 0.0));
    double limit = omega.r_max();
    for (std::size_t p = 0; p < omega.grid().size(); ++p) limit = std::min(limit, omega.monotone_limit(p));
    return invert(
        eps, guess, limit, [&](double r) { return omega.value_at(x, r); },
        [&](double r) { return omega.slope_at(x, r); });
}

}  // namespace renorm

namespace renorm {

std::vector<double> odd_r_derivatives(const OmegaField& omega, std::size_t p, int max_order, double spacing) {
    require(omega.has_negative(), ErrorCode::InvalidArgument, "odd_r_derivatives: omega must be marched both ways");
    require(max_order >= 1, ErrorCode::InvalidArgument, "odd_r_derivatives: max_order must be >= 1");
    const int m = (max_order + 1) / 2 + 1;
    const int stride = std::max(1, static_cast<int>(std::lround(spacing / omega.step())));
    require(m * stride <= omega.steps(), ErrorCode::Domain, "odd_r_derivatives: not enough radial nodes");
    const double H = stride * omega.step();
    Eigen::MatrixXd A(m, m);
    Eigen::VectorXd b(m);
    for (int j = 1; j <= m; ++j) {
        const double r = j * H;
        for (int c = 0; c < m; ++c) A(j - 1, c) = std::pow(r, 2 * c + 1);
        b(j - 1) = 0.5 * (omega.node(p, j * stride) - omega.node(p, -j * stride));
    }
    const Eigen::VectorXd coef = A.fullPivLu().solve(b);
    std::vector<double> out;
    double fact = 1.0;
    for (int k = 1; k <= max_order; k += 2) {
        fact *= (k == 1) ? 1.0 : static_cast<double>(k) * (k - 1);
        out.push_back(fact * coef((k - 1) / 2));
    }
    return out;
}

}  // namespace renorm
