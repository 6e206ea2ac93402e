#include "renorm/volume.hpp"

#include "renorm/curvature.hpp"
#include "renorm/error.hpp"
#include "renorm/fg_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace renorm {

namespace {
constexpr double pi = std::numbers::pi;
}

// ---- radial integration ----

VolumeModel::VolumeModel(const NormalForm& nf, const QuadratureGrid& grid, const VolumeOptions& options)
    : nf_(nf), grid_(grid), opt_(options), n_(nf.dim()) {
    require(grid.dim() == n_, ErrorCode::ShapeMismatch, "volume: grid dimension differs from n");
    require(opt_.r0 > 0.0 && opt_.r0 < nf.r_max(), ErrorCode::InvalidArgument,
            "volume: r0 must lie inside the normal-form domain");
    require(opt_.series_radius > 0.0 && opt_.series_radius <= opt_.r0, ErrorCode::InvalidArgument,
            "volume: series radius must lie in (0, r0]");
    require(opt_.gl_nodes >= 2 && opt_.max_panels >= 1, ErrorCode::InvalidArgument, "volume: bad radial rule");
    unit_rule_ = gauss_legendre(opt_.gl_nodes, 0.0, 1.0);
    const std::size_t P = grid.size();
    local_.reserve(P);
    inner_.resize(P);
    panels_.resize(P);
    series_.reserve(P);
    for (std::size_t p = 0; p < P; ++p) {
        local_.push_back(nf.at(grid.point(p)));
        double in = 0.0;
        const double h = (nf.r_max() - opt_.r0) / 4.0;
        for (int s = 0; s < 4; ++s) in += gl(p, opt_.r0 + s * h, opt_.r0 + (s + 1) * h);
        inner_[p] = in;
        panels_[p].resize(opt_.max_panels);
        double b = opt_.r0;
        for (int k = 0; k < opt_.max_panels; ++k, b *= 0.5) panels_[p][k] = gl(p, 0.5 * b, b);
        series_.push_back(local_[p].density_series(n_ + opt_.series_terms));
    }
}

double VolumeModel::gl(std::size_t p, double a, double b) const {
    if (b <= a) return 0.0;
    const double len = b - a;
    double s = 0.0;
    for (std::size_t i = 0; i < unit_rule_.nodes.size(); ++i) {
        const double r = a + len * unit_rule_.nodes[i];
        s += unit_rule_.weights[i] * std::pow(r, -n_ - 1) * local_[p].density(r);
    }
    return s * len;
}

double VolumeModel::resolution() const { return std::ldexp(opt_.r0, -opt_.max_panels); }

double VolumeModel::radial(std::size_t p, double a) const {
    if (!(a >= resolution())) {
        std::ostringstream os;
        os << "volume: eps = " << a << " is below the radial quadrature resolution " << resolution();
        fail(ErrorCode::Resolution, os.str());
    }
    const double rmax = nf_.r_max();
    require(a <= rmax, ErrorCode::Domain, "volume: eps exceeds the normal-form domain");
    if (a >= opt_.r0) {
        const double h = (rmax - a) / 4.0;
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += gl(p, a + i * h, a + (i + 1) * h);
        return s;
    }
    double total = inner_[p];
    double b = opt_.r0;
    int k = 0;
    while (0.5 * b >= a) {
        total += panels_[p][k++];
        b *= 0.5;
    }
    return total + gl(p, a, b);
}

double VolumeModel::integrate_nodes(std::span<const double> values) const {
    require(values.size() == grid_.size(), ErrorCode::ShapeMismatch, "volume: node values do not match grid");
    const ScalarField f{grid_.shape(), std::vector<double>(values.begin(), values.end())};
    return integrate_scalar(f, nf_.boundary(), grid_);
}

double VolumeModel::integrate(std::span<const double> lower) const {
    require(lower.size() == grid_.size(), ErrorCode::ShapeMismatch, "volume: lower limits do not match grid");
    std::vector<double> v(grid_.size());
    for (std::size_t p = 0; p < v.size(); ++p) v[p] = radial(p, lower[p]);
    return integrate_nodes(v);
}

double VolumeModel::finite_part(std::size_t p) const {
    const double rs = opt_.series_radius;
    const Series& s = series_[p];
    double out = radial(p, rs);
    for (int j = 0; j <= s.degree(); ++j) {
        if (j == n_)
            out += s[j] * std::log(rs);
        else
            out += s[j] * std::pow(rs, j - n_) / (j - n_);
    }
    return out;
}

VolumeProfile volume_profile(const VolumeModel& model, std::span<const double> eps, const OmegaField* gauge) {
    const QuadratureGrid& grid = model.grid();
    if (gauge)
        require(gauge->grid().size() == grid.size(), ErrorCode::ShapeMismatch,
                "volume_profile: gauge grid differs from the volume grid");
    VolumeProfile out;
    out.eps.assign(eps.begin(), eps.end());
    std::vector<double> in(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) in[p] = model.inner(p);
    out.inner = model.integrate_nodes(in);
    std::vector<double> lower(grid.size());
    for (double e : eps) {
        require(e > 0.0, ErrorCode::Domain, "volume_profile: eps must be positive");
        for (std::size_t p = 0; p < grid.size(); ++p) lower[p] = gauge ? epsilon_hat(*gauge, p, e) : e;
        out.samples.push_back(model.integrate(lower));
    }
    return out;
}

// ---- extraction ----

double EpsilonFit::coefficient(double power) const {
    for (std::size_t j = 0; j < basis.powers.size(); ++j)
        if (basis.powers[j] == power) return fit.coeffs[j];
    std::ostringstream os;
    os << "fit has no eps^" << power << " term";
    fail(ErrorCode::InvalidArgument, os.str());
}

EpsilonFit fit_volume(int n, std::span<const double> eps, std::span<const double> samples, int tail,
                      double max_condition) {
    require(n >= 0, ErrorCode::InvalidArgument, "fit_volume: the leading power must be >= 0");
    auto fit_with = [&](int t) {
        EpsilonFit f;
        f.n = n;
        f.eps.assign(eps.begin(), eps.end());
        f.samples.assign(samples.begin(), samples.end());
        f.basis = FitBasis::divergent(n, n % 2 == 0, t, 2);
        if (eps.size() < 2 * static_cast<std::size_t>(f.basis.columns())) {
            std::ostringstream os;
            os << "fit_volume: " << eps.size() << " samples for " << f.basis.columns()
               << " basis functions; at least twice as many samples are required (widen the eps range or add points)";
            fail(ErrorCode::FitDegeneracy, os.str());
        }
        f.fit = fit_expansion(eps, samples, f.basis, max_condition);
        return f;
    };
    if (tail >= 0) return fit_with(tail);

    // Automatic tail length: the one whose reduced refits move the extracted
    // quantity (V for odd n, L for even n) the least.
    std::optional<EpsilonFit> best;
    double best_unc = 0.0;
    std::string last_error;
    for (int t = 0; t <= 8; ++t) {
        try {
            EpsilonFit f = fit_with(t);
            const double unc = n % 2 == 0 ? f.fit.log_uncertainty : f.fit.constant_uncertainty;
            if (!best || unc < best_unc) {
                best_unc = unc;
                best = std::move(f);
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::FitDegeneracy) throw;
            last_error = e.what();
            break;
        }
    }
    if (!best) fail(ErrorCode::FitDegeneracy, last_error);
    return *best;
}

VolumeResult renormalized_volume(const NormalForm& nf, const VolumeOptions& options) {
    const int n = nf.dim();
    const QuadratureGrid grid = nf.boundary().quadrature_grid(options.nodes);
    const VolumeModel model(nf, grid, options);
    const auto eps = options.eps();
    const VolumeProfile prof = volume_profile(model, eps);

    VolumeResult r;
    r.n = n;
    r.fit = fit_volume(n, eps, prof.samples, options.tail, options.max_condition);
    std::vector<double> v(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) v[p] = model.finite_part(p);
    r.V_subtraction = model.integrate_nodes(v);
    if (n % 2 == 0) {
        for (std::size_t p = 0; p < grid.size(); ++p) v[p] = model.density_series(p)[n];
        r.L_direct = model.integrate_nodes(v);
    }
    std::fill(v.begin(), v.end(), 1.0);
    r.boundary_volume = model.integrate_nodes(v);
    r.c0_expected = r.boundary_volume / n;
    return r;
}

double hyperbolic_reference(int n) {
    require(n >= 1, ErrorCode::InvalidArgument, "hyperbolic_reference: n must be >= 1");
    if (n % 2 == 1) {
        const double sign = ((n + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        return sign * std::pow(pi, 0.5 * (n + 2)) / std::tgamma(0.5 * (n + 2));
    }
    const int m = n / 2;
    return (m % 2 == 0 ? 2.0 : -2.0) * std::pow(pi, m) / std::tgamma(m + 1.0);
}

GaugeComparison gauge_comparison(const NormalForm& nf, const ConformalFactor& upsilon, const VolumeOptions& options) {
    const int n = nf.dim();
    // the grid may only collapse directions along which both the metric and Upsilon are invariant
    const QuadratureGrid grid = MetricFamily::rescaled(nf.boundary(), upsilon).quadrature_grid(options.nodes);
    const VolumeModel model(nf, grid, options);
    const OmegaField omega = solve_special_defining(nf, upsilon, grid, options.gauge);
    const auto eps = options.eps();
    const VolumeProfile base = volume_profile(model, eps);
    const VolumeProfile gauged = volume_profile(model, eps, &omega);
    std::vector<double> diff(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) diff[i] = gauged.samples[i] - base.samples[i];

    GaugeComparison c;
    c.n = n;
    c.upsilon = upsilon.to_string();
    c.base = fit_volume(n, eps, base.samples, options.tail, options.max_condition);
    c.gauged = fit_volume(n, eps, gauged.samples, options.tail, options.max_condition);
    c.difference = fit_volume(n, eps, diff, options.tail, options.max_condition);
    c.omega_residual = omega.residual;
    return c;
}

// ---- anomaly and log-coefficient identities ----

double anomaly_density(const MetricFamily& g, const ConformalFactor& upsilon, int n, std::span<const double> x) {
    require(n == 2 || n == 4, ErrorCode::DimensionUnsupported, "volume anomaly: only n = 2 and n = 4 are available");
    require(g.dim() == n, ErrorCode::ShapeMismatch, "volume anomaly: family dimension differs from n");
    const JetSpace& sp = JetSpace::get(n, 2);
    const Jet u = g.evaluate_function(upsilon, x, sp, 2);
    const CurvaturePack pack = curvature_pack(g, x);
    Eigen::VectorXd du(n);
    for (int i = 0; i < n; ++i) du(i) = u.partial(i);
    Eigen::Map<const Eigen::MatrixXd> Gi(pack.ginv.data().data(), n, n);
    const Eigen::VectorXd up = Gi * du;
    const double grad2 = du.dot(up);
    if (n == 2) return -0.25 * (*pack.scalar * u.value() + grad2);

    JetTensor gj = g.metric(x, sp, 2);
    JetTensor g1 = gj;
    for (auto& c : g1.data()) c = c.truncated(1);
    const JetConnection conn = christoffel(gj, jet_inverse(g1));
    Eigen::MatrixXd hess(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double h = u.partial(i, j);
            for (int k = 0; k < n; ++k) h -= conn.second(k, i, j).value() * du(k);
            hess(i, j) = h;
        }
    Eigen::Map<const Eigen::MatrixXd> P(pack.P().data().data(), n, n);
    const double trP = (Gi * P).trace();
    const double P2 = (Gi * P * Gi * P).trace();
    const double v4 = 0.125 * (trP * trP - P2);
    // the nonlinear terms carry the same 1/8 as v(4); without it the quadratic part
    // disagrees with the second variation of V along exp(2 t Upsilon) g
    const double nonlinear = up.dot(hess * up) - up.dot(P * up) - 0.25 * grad2 * grad2 + trP * grad2;
    return v4 * u.value() + 0.125 * nonlinear;
}

AnomalyReport volume_anomaly(const MetricFamily& g, const ConformalFactor& upsilon, int n,
                             const VolumeOptions& options) {
    require(n == 2 || n == 4, ErrorCode::DimensionUnsupported, "volume anomaly: only n = 2 and n = 4 are available");
    require(g.dim() == n, ErrorCode::ShapeMismatch, "volume anomaly: family dimension differs from n");
    const QuadratureGrid grid = MetricFamily::rescaled(g, upsilon).quadrature_grid(options.nodes);
    AnomalyReport rep;
    rep.n = n;
    rep.upsilon = upsilon.to_string();
    const ScalarField dens = sample(grid, [&](const std::vector<double>& x) {
        return anomaly_density(g, upsilon, n, x);
    });
    rep.anomaly_integral = integrate_scalar(dens, g, grid);

    const bool hyperbolic_boundary =
        g.kind() == MetricFamily::Kind::RoundSphere && std::abs(g.radius() - 0.5) < 1e-15;
    if (hyperbolic_boundary) {
        const NormalForm nf = NormalForm::hyperbolic(n);
        const VolumeModel model(nf, grid, options);
        std::vector<double> v(grid.size());
        for (std::size_t p = 0; p < grid.size(); ++p) v[p] = model.finite_part(p);
        rep.V_g = model.integrate_nodes(v);
        const GaugeComparison cmp = gauge_comparison(nf, upsilon, options);
        rep.V_ghat = *rep.V_g + cmp.delta_V();
        rep.discrepancy = std::abs(cmp.delta_V() - rep.anomaly_integral);
    }
    return rep;
}

LIdentitySides L_identity_sides(const MetricFamily& g, int n, int nodes) {
    require(n == 2 || n == 4 || n == 6, ErrorCode::DimensionUnsupported,
            "L identity: only n = 2, 4 and 6 are available");
    require(g.dim() == n, ErrorCode::ShapeMismatch, "L identity: family dimension differs from n");
    const QuadratureGrid grid = g.quadrature_grid(nodes);
    LIdentitySides out;
    out.chi = g.euler_characteristic();
    const ScalarField vn = sample(grid, [&](const std::vector<double>& x) {
        return volume_series(fg_expand(g, x, n)).coefficient(n);
    });
    out.L_direct = integrate_scalar(vn, g, grid);
    if (n == 2) {
        out.L_identity = -pi * out.chi;
    } else if (n == 4) {
        const ScalarField w2 = sample(grid, [&](const std::vector<double>& x) {
            const CurvaturePack pack = curvature_pack(g, x);
            return norm_squared(pack.W(), pack.ginv);
        });
        out.invariant_integral = integrate_scalar(w2, g, grid);
        out.L_identity = 0.5 * pi * pi * out.chi - out.invariant_integral / 64.0;
    } else {
        const ScalarField J = sample(grid, [&](const std::vector<double>& x) {
            return conformal_invariants_6d(g, x).J;
        });
        out.invariant_integral = integrate_scalar(J, g, grid);
        out.L_identity = -std::pow(pi, 3) / 6.0 * out.chi + out.invariant_integral / 2304.0;
    }
    return out;
}

}  // namespace renorm
