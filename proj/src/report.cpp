#include "renorm/report.hpp"

#include "renorm/area.hpp"
#include "renorm/curvature.hpp"
#include "renorm/error.hpp"
#include "renorm/fg_expansion.hpp"
#include "renorm/gauge.hpp"
#include "renorm/volume.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace renorm {

namespace {

constexpr double pi = std::numbers::pi;

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    T v{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        fail(ErrorCode::Parse, "config: cannot read '" + std::string(text) + "' as a value for " + std::string(key));
    if constexpr (std::is_floating_point_v<T>)
        require(std::isfinite(v), ErrorCode::Parse, "config: " + std::string(key) + " must be finite");
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool listed(const std::vector<std::string>& names, std::string_view s) {
    return std::find(names.begin(), names.end(), s) != names.end();
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> k{"command", "model",  "n",         "k",    "upsilon", "radius",
                                            "angle",   "periods", "grid",     "eps-lo", "eps-hi",  "eps-count",
                                            "step",    "order",  "format",    "out",  "tol"};
    return k;
}

const std::vector<std::string>& RunConfig::commands() {
    static const std::vector<std::string> c{"fg-expand", "renorm-volume", "renorm-area", "anomaly", "identities"};
    return c;
}

const std::vector<std::string>& RunConfig::model_names() {
    static const std::vector<std::string> m{"hyperbolic",       "sphere-radius", "torus",    "perturbed-torus",
                                            "totally-geodesic", "geodesic",      "latitude", "coaxial-torus"};
    return m;
}

void RunConfig::set(std::string_view key, std::string_view raw) {
    const std::string_view value = trim(raw);
    const std::string v(value);
    if (key == "command") {
        require(listed(commands(), value), ErrorCode::InvalidArgument, "config: unknown command '" + v + "'");
        command = v;
    } else if (key == "model") {
        require(listed(model_names(), value), ErrorCode::InvalidArgument, "config: unknown model '" + v + "'");
        model = v;
    } else if (key == "n") {
        n = parse_number<int>(key, value);
    } else if (key == "k") {
        k = parse_number<int>(key, value);
    } else if (key == "upsilon") {
        (void)ConformalFactor::parse(value);  // reject malformed expressions early
        upsilon = v;
    } else if (key == "radius") {
        radius = parse_number<double>(key, value);
    } else if (key == "angle") {
        angle = parse_number<double>(key, value);
    } else if (key == "periods") {
        periods.clear();
        std::string_view rest = value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            periods.push_back(parse_number<double>(key, trim(rest.substr(0, comma))));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    } else if (key == "grid") {
        grid = parse_number<int>(key, value);
    } else if (key == "eps-lo") {
        eps_lo = parse_number<double>(key, value);
    } else if (key == "eps-hi") {
        eps_hi = parse_number<double>(key, value);
    } else if (key == "eps-count") {
        eps_count = parse_number<int>(key, value);
    } else if (key == "step") {
        step = parse_number<double>(key, value);
    } else if (key == "order") {
        order = parse_number<int>(key, value);
    } else if (key == "format") {
        require(value == "table" || value == "csv", ErrorCode::InvalidArgument,
                "config: format must be table or csv, got '" + v + "'");
        format = v;
    } else if (key == "out") {
        out = v;
    } else if (key == "tol") {
        tol = parse_number<double>(key, value);
    } else {
        fail(ErrorCode::InvalidArgument, "config: unknown key '" + std::string(key) + "'");
    }
}

void RunConfig::validate() const {
    require(listed(commands(), command), ErrorCode::InvalidArgument, "config: no command given");
    require(n >= 1 && n <= 6, ErrorCode::DimensionUnsupported, "config: n must lie in 1..6");
    require(!k || (*k >= 0 && *k < n), ErrorCode::DimensionUnsupported, "config: k must lie in 0..n-1");
    require(radius > 0.0, ErrorCode::InvalidArgument, "config: radius must be positive");
    for (double p : periods) require(p > 0.0, ErrorCode::InvalidArgument, "config: periods must be positive");
    require(!grid || *grid >= 2, ErrorCode::InvalidArgument, "config: grid must be at least 2");
    require(!eps_lo || *eps_lo > 0.0, ErrorCode::InvalidArgument, "config: eps-lo must be positive");
    require(!eps_hi || *eps_hi > 0.0, ErrorCode::InvalidArgument, "config: eps-hi must be positive");
    require(!eps_count || *eps_count >= 2, ErrorCode::InvalidArgument, "config: eps-count must be at least 2");
    require(step > 0.0, ErrorCode::InvalidArgument, "config: step must be positive");
    require(order >= 0 && order <= 12, ErrorCode::InvalidArgument, "config: order must lie in 0..12");
    require(!tol || *tol >= 0.0, ErrorCode::InvalidArgument, "config: tol must be non-negative");
}

double ReportRow::abs_err() const {
    return crosscheck ? std::abs(value - *crosscheck) : std::numeric_limits<double>::quiet_NaN();
}

double ReportRow::rel_err() const {
    if (!crosscheck) return std::numeric_limits<double>::quiet_NaN();
    const double a = abs_err();
    return *crosscheck == 0.0 ? (a == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()) : a / std::abs(*crosscheck);
}

bool ReportRow::pass() const {
    if (!crosscheck) return true;
    const double a = abs_err();
    if (!std::isfinite(value)) return false;
    return relative ? a <= tol * std::abs(*crosscheck) : a <= tol;
}

bool Report::passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass(); });
}

namespace {

class Rows {
public:
    Rows(Report& r, const RunConfig& c) : r_(r), c_(c) {}

    void check(std::string q, double value, double crosscheck, double tol, bool relative) {
        r_.rows.push_back({std::move(q), value, crosscheck, c_.tol.value_or(tol), relative});
    }
    void info(std::string q, double value) { r_.rows.push_back({std::move(q), value, std::nullopt, 0.0, false}); }
    void note(std::string s) { r_.notes.push_back(std::move(s)); }

private:
    Report& r_;
    const RunConfig& c_;
};

ConformalFactor upsilon_of(const RunConfig& c, bool sphere) {
    if (!c.upsilon.empty()) return ConformalFactor::parse(c.upsilon);
    return ConformalFactor::parse(sphere ? "0.1*X1" : "0.1*cos(x1)");
}

std::vector<double> periods_of(const RunConfig& c) {
    if (c.periods.empty()) return std::vector<double>(c.n, 2 * pi);
    require(static_cast<int>(c.periods.size()) == c.n, ErrorCode::ShapeMismatch, "config: periods needs n entries");
    return c.periods;
}

MetricFamily boundary_metric(const RunConfig& c) {
    if (c.model == "hyperbolic") return MetricFamily::round_sphere(c.n, 0.5);
    if (c.model == "sphere-radius") return MetricFamily::round_sphere(c.n, c.radius);
    if (c.model == "torus") return MetricFamily::flat_torus(periods_of(c));
    if (c.model == "perturbed-torus") {
        require(c.n >= 2, ErrorCode::DimensionUnsupported, "config: perturbed-torus needs n >= 2");
        std::vector<TorusPerturbation> terms{{0, 0, 0.15, 1, 1, false}, {1, 1, 0.1, 0, 1, true}};
        if (c.n >= 3) terms.push_back({0, 2, 0.06, 1, 2, true});
        return MetricFamily::perturbed_torus(periods_of(c), terms);
    }
    fail(ErrorCode::InvalidArgument, "config: model '" + c.model + "' has no boundary metric for this command");
}

// A chart point away from coordinate singularities.
std::vector<double> sample_point(const MetricFamily& g, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = g.is_sphere() ? (i + 1 < n ? 0.9 + 0.2 * i : 0.7) : 0.3 + 0.45 * i;
    return x;
}

std::string fmt_index(const char* name, int j, int a, int b) {
    std::ostringstream os;
    os << name << "(" << j << ")_" << a << b;
    return os.str();
}

void fg_expand_rows(const RunConfig& c, Rows& out) {
    const MetricFamily g0 = boundary_metric(c);
    const auto x = sample_point(g0, c.n);
    FgOptions opt;
    opt.allow_free_data = c.n % 2 == 1 && c.order > c.n;
    const PowerSeriesMetric ps = fg_expand(g0, x, c.order, opt);
    // Einstein boundary metrics with P = lambda g0 give g_r = (1 - lambda r^2 / 2)^2 g0.
    std::optional<double> lambda;
    if (g0.is_sphere()) lambda = 1.0 / (2.0 * c.radius * c.radius);
    if (c.model == "hyperbolic") lambda = 2.0;
    if (c.model == "torus") lambda = 0.0;
    std::optional<Tensor> P;
    if (c.n >= 3) P = curvature_pack(g0, x).P();
    if (opt.allow_free_data) out.note("orders past n use zero free data");
    for (int j = 1; j <= c.order; ++j) {
        for (int a = 0; a < c.n; ++a)
            for (int b = a; b < c.n; ++b) {
                const double v = ps.g[j](a, b);
                const double g = ps.g[0](a, b);
                std::optional<double> expect;
                double tol = 1e-8;
                if (lambda) {
                    expect = j == 2 ? -*lambda * g : j == 4 ? 0.25 * *lambda * *lambda * g : 0.0;
                } else if (j % 2 == 1 && j < c.n) {
                    expect = 0.0;
                } else if (j == 2 && P) {
                    expect = -(*P)(a, b);
                }
                if (j % 2 == 1 && j < c.n) tol = 1e-9;
                if (expect)
                    out.check(fmt_index("g", j, a, b), v, *expect, tol, false);
                else
                    out.info(fmt_index("g", j, a, b), v);
            }
    }
    if (ps.h) {
        for (int a = 0; a < c.n; ++a)
            for (int b = a; b < c.n; ++b) {
                if (lambda)
                    out.check(fmt_index("h", c.n, a, b), (*ps.h)(a, b), 0.0, 1e-8, false);
                else
                    out.info(fmt_index("h", c.n, a, b), (*ps.h)(a, b));
            }
    }
    out.check("einstein_residual", ps.residual, 0.0, 1e-8, false);
}

VolumeOptions volume_options(const RunConfig& c) {
    VolumeOptions o;
    if (c.grid) o.nodes = *c.grid;
    if (c.eps_hi) o.eps_hi = *c.eps_hi;
    if (c.eps_lo) o.eps_lo = *c.eps_lo;
    if (c.eps_count) o.eps_count = *c.eps_count;
    o.gauge.step = c.step;
    return o;
}

void fit_rows(const EpsilonFit& f, Rows& out) {
    out.info("fit_residual", f.fit.residual);
    out.info("fit_condition", f.fit.condition);
    out.info("V_uncertainty", f.fit.constant_uncertainty);
    if (f.L()) out.info("L_uncertainty", f.fit.log_uncertainty);
}

void renorm_volume_rows(const RunConfig& c, Rows& out) {
    const VolumeOptions opt = volume_options(c);
    const int n = c.n;
    if (c.model == "hyperbolic") {
        const VolumeResult r = renormalized_volume(NormalForm::hyperbolic(n), opt);
        const double ref = hyperbolic_reference(n);
        out.check("c0", r.fit.coefficient(-n), r.c0_expected, 1e-6, true);
        if (n % 2 == 1) {
            out.check("V_subtraction", r.V_subtraction, ref, 1e-6, true);
            out.check("V_fit", r.fit.V(), r.V_subtraction, 1e-6 * std::max(1.0, std::abs(ref)), false);
        } else {
            out.check("L_fit", *r.fit.L(), ref, 1e-5, true);
            out.check("L_direct", *r.L_direct, ref, 1e-5, true);
            // V is close to 0 here, so the scale is set by L
            out.check("V_fit", r.fit.V(), r.V_subtraction, 1e-6 * std::max(1.0, std::abs(ref)), false);
        }
        fit_rows(r.fit, out);
    } else if (c.model == "sphere-radius") {
        // R^2 round = exp(2 tau) (round / 4) with tau = log(2R): a constant change of representative
        const double tau = std::log(2.0 * c.radius);
        const NormalForm nf = NormalForm::hyperbolic(n);
        const GaugeComparison g = gauge_comparison(nf, ConformalFactor::constant(tau), opt);
        const double ref = hyperbolic_reference(n);
        out.note("sphere of radius R reached from the hyperbolic representative by the constant factor log(2R)");
        if (n % 2 == 1) {
            out.check("V", g.gauged.V(), ref, 1e-6, true);
            out.check("delta_V", g.delta_V(), 0.0, 5e-5 * (1 + std::abs(ref)), false);
        } else {
            out.check("L", *g.gauged.L(), ref, 1e-5, true);
            out.check("delta_V", g.delta_V(), ref * tau, 1e-6 * std::max(1.0, std::abs(ref * tau)), false);
        }
        fit_rows(g.gauged, out);
    } else if (c.model == "torus") {
        const MetricFamily T = boundary_metric(c);
        const NormalForm nf = NormalForm::series(T, n);
        const VolumeResult r = renormalized_volume(nf, opt);
        // g_r = g0 exactly, so Vol({eps < r < 1}) = Vol(T) (eps^-n - 1) / n
        out.note("region eps < r < 1 of the flat product metric");
        out.check("c0", r.fit.coefficient(-n), r.c0_expected, 1e-6, true);
        out.check("V_subtraction", r.V_subtraction, -r.boundary_volume / n, 1e-10, true);
        out.check("V_fit", r.fit.V(), -r.boundary_volume / n, 1e-6, true);
        if (r.fit.L()) out.check("L_fit", *r.fit.L(), 0.0, 1e-6, false);
        fit_rows(r.fit, out);
    } else {
        fail(ErrorCode::InvalidArgument, "renorm-volume: model must be hyperbolic, sphere-radius or torus");
    }
}

AreaOptions area_options(const RunConfig& c) {
    AreaOptions o;
    if (c.eps_hi) o.eps_hi = *c.eps_hi;
    if (c.eps_lo) o.eps_lo = *c.eps_lo;
    if (c.eps_count) o.eps_count = *c.eps_count;
    if (c.grid) o.gauge_nodes = *c.grid;
    o.gauge.step = c.step;
    return o;
}

bool is_area_model(const std::string& m) {
    return m == "totally-geodesic" || m == "geodesic" || m == "latitude" || m == "coaxial-torus";
}

MinimalGraph minimal_graph(const RunConfig& c) {
    if (c.model == "totally-geodesic" || c.model == "hyperbolic") {
        require(c.k.has_value(), ErrorCode::InvalidArgument, "config: totally-geodesic needs k");
        return totally_geodesic(*c.k, c.n, c.grid.value_or(24));
    }
    if (c.model == "geodesic") {
        // endpoints in the X1 X2 plane, `angle` apart
        const double half = 0.5 * c.angle.value_or(pi);
        std::vector<double> P(c.n + 1, 0.0), Q(c.n + 1, 0.0);
        P[0] = std::sin(half);
        P[1] = std::cos(half);
        Q[0] = -std::sin(half);
        Q[1] = std::cos(half);
        return geodesic_between(c.n, sphere_chart(P), sphere_chart(Q));
    }
    if (c.model == "latitude") return equivariant_minimal_graph(Embedding::latitude(c.angle.value_or(pi / 3)), c.n);
    if (c.model == "coaxial-torus")
        return equivariant_minimal_graph(Embedding::coaxial_torus(c.angle.value_or(pi / 4)), c.n);
    fail(ErrorCode::InvalidArgument, "config: model '" + c.model + "' does not describe a minimal submanifold");
}

void renorm_area_rows(const RunConfig& c, Rows& out) {
    const MinimalGraph Y = minimal_graph(c);
    const AreaOptions opt = area_options(c);
    const AreaFit f = renormalized_area(Y, opt);
    const int k = Y.k();
    out.note(Y.describe());
    if (k >= 1) out.check("b0", f.b0(), f.boundary_measure / k, 1e-8, true);
    if (Y.construction() == MinimalGraph::Construction::TotallyGeodesic) {
        // the filling is H^{k+1} in its ball normal form
        if (k == 0) {
            out.check("K", *f.K(), 2.0, 1e-8, false);
            out.check("A", f.A(), 0.0, 1e-8, false);
        } else if (k % 2 == 1) {
            out.check("A", f.A(), hyperbolic_reference(k), 1e-6, true);
        } else {
            out.check("K_fit", *f.K(), hyperbolic_reference(k), 1e-5, true);
            out.check("K_form", *f.K_form, hyperbolic_reference(k), 1e-5, true);
            out.info("A", f.A());
        }
    } else if (Y.construction() == MinimalGraph::Construction::GeodesicArc) {
        // {r > eps} is a hyperbolic ball; the chord at distance d has cosh d = 1 / sin(angle / 2)
        const double half = 0.5 * c.angle.value_or(pi);
        out.check("K", *f.K(), 2.0, 1e-8, false);
        out.check("A", f.A(), 2.0 * std::log(std::sin(half)), 1e-8, false);
    } else {
        out.check("profile_residual", Y.residual(), 0.0, 1e-8, false);
        const auto u = Y.u_taylor(0);
        out.check("u1", u[1], 0.0, 1e-8, false);
        if (k == 1) {
            const double t0 = Y.boundary()->angle;
            out.check("axis_parameter", *Y.shooting_parameter(), (1 - std::sin(t0)) / std::cos(t0), 1e-6, false);
            std::vector<double> r;
            for (int j = 1; j <= 200; ++j) r.push_back(Y.r_split() * j / 200);
            const auto uu = Y.u(0, r);
            double sup = 0.0;
            for (std::size_t j = 0; j < r.size(); ++j) {
                const double x = r[j];
                sup = std::max(sup, std::abs(uu[j] - 0.5 * (std::acos(std::cos(t0) * (1 + x * x) / (1 - x * x)) - t0)));
            }
            out.check("u_sup_error", sup, 0.0, 1e-6, false);
            out.check("A", f.A(), -2 * pi, 1e-6, true);
        } else {
            out.info("w", u.back());
        }
    }
    if (k == 2 && Y.boundary()) {
        const SubmanifoldPatch N = submanifold_geometry(*Y.boundary(), MetricFamily::round_sphere(c.n, 0.5),
                                                        c.grid.value_or(24));
        const double K = k2_log_coefficient(N);
        if (Y.construction() == MinimalGraph::Construction::Equivariant) {
            out.check("K_fit", *f.K(), K, 1e-3, true);
            out.check("K_form", *f.K_form, K, 1e-2, true);
            out.info("A", f.A());
        } else {
            out.check("K_curvature", K, *f.K(), 1e-5, true);
        }
    }
    fit_rows(f.fit, out);
}

void area_anomaly_rows(const RunConfig& c, Rows& out) {
    const MinimalGraph Y = minimal_graph(c);
    const ConformalFactor ups = upsilon_of(c, true);
    const AreaAnomalyReport a = area_anomaly(Y, ups, area_options(c));
    out.note(Y.describe());
    const double tol = a.k == 0 ? 1e-5 : 1e-6 * std::max(1.0, std::abs(a.anomaly));
    if (a.gauge_change) {
        out.check("anomaly", a.anomaly, *a.gauge_change, tol, false);
        out.check("delta_K", *a.log_change, 0.0, a.k == 0 ? 1e-6 : 1e-5, false);
    } else {
        out.note("gauge route unavailable for this filling and factor");
        out.info("anomaly", a.anomaly);
    }
    if (a.k == 2 && ups.is_constant() && Y.boundary()) {
        double tau = 0.0;
        for (const auto& t : ups.terms()) tau += t.coeff;
        const SubmanifoldPatch N = submanifold_geometry(*Y.boundary(), MetricFamily::round_sphere(c.n, 0.5),
                                                        c.grid.value_or(24));
        out.check("anomaly_K_tau", a.anomaly, k2_log_coefficient(N) * tau, 1e-6, true);
    }
}

void volume_anomaly_rows(const RunConfig& c, Rows& out) {
    require(c.model == "hyperbolic", ErrorCode::InvalidArgument,
            "anomaly: volume anomalies run on the hyperbolic model; pass --k for area anomalies");
    const int n = c.n;
    const ConformalFactor ups = upsilon_of(c, true);
    const NormalForm nf = NormalForm::hyperbolic(n);
    const VolumeOptions opt = volume_options(c);
    const GaugeComparison g = gauge_comparison(nf, ups, opt);
    out.check("omega_residual", g.omega_residual, 0.0, 1e-9, false);
    if (n % 2 == 1) {
        out.check("delta_V", g.delta_V(), 0.0, 5e-5 * (1 + std::abs(g.base.V())), false);
    } else {
        out.check("delta_L", g.delta_L(), 0.0, 5e-5 * (1 + std::abs(*g.base.L())), false);
        out.info("delta_V", g.delta_V());
    }
    // odd r-derivatives of omega at r = 0 through order n + 1
    const QuadratureGrid grid = nf.boundary().quadrature_grid(c.grid.value_or(32));
    GaugeOptions go = opt.gauge;
    const OmegaField w = solve_special_defining(nf, ups, grid, go);
    double odd = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p)
        for (double d : odd_r_derivatives(w, p, n + 1)) odd = std::max(odd, std::abs(d));
    out.check("omega_odd_derivatives", odd, 0.0, 1e-6, false);
    if (n == 2 || n == 4) {
        const AnomalyReport a = volume_anomaly(nf.boundary(), ups, n, opt);
        if (a.V_g && a.V_ghat)
            out.check("V_ghat_minus_V_g", *a.V_ghat - *a.V_g, a.anomaly_integral,
                      n == 2 ? 1e-4 : 1e-6 * std::max(1.0, std::abs(a.anomaly_integral)), false);
        else
            out.info("anomaly_integral", a.anomaly_integral);
    }
}

void identities_rows(const RunConfig& c, Rows& out) {
    const MetricFamily g = boundary_metric(c);
    const int n = c.n;
    require(n == 2 || n == 4 || n == 6, ErrorCode::DimensionUnsupported, "identities: n must be 2, 4 or 6");
    const int nodes = c.grid.value_or(g.is_sphere() ? 24 : 16);
    const LIdentitySides s = L_identity_sides(g, n, nodes);
    const bool flat = c.model == "torus";
    const auto versus = [&](const char* q, double v, double ref) {
        if (flat || ref == 0.0)
            out.check(q, v, ref, 1e-8, false);
        else
            out.check(q, v, ref, 1e-5, true);
    };
    out.info("chi", s.chi);
    out.info("invariant_integral", s.invariant_integral);
    versus("L_identity", s.L_identity, s.L_direct);
    if (g.is_sphere()) versus("L_direct", s.L_direct, hyperbolic_reference(n));
    if (n == 4) {
        const GaussBonnetSides gb = gauss_bonnet_sides(g, nodes);
        const ConformalFactor ups = upsilon_of(c, g.is_sphere());
        const GaussBonnetSides gr = gauss_bonnet_sides(MetricFamily::rescaled(g, ups), nodes);
        if (gb.lhs == 0.0) {
            // chi = 0: both sides vanish exactly
            out.check("gauss_bonnet_rhs", gb.rhs, 0.0, 1e-8, false);
            out.check("gauss_bonnet_rhs_rescaled", gr.rhs, 0.0, 1e-8, false);
        } else {
            out.check("gauss_bonnet_rhs", gb.rhs, gb.lhs, 1e-5, true);
            out.check("gauss_bonnet_rhs_rescaled", gr.rhs, gb.rhs, 1e-5, true);
        }
    }
}

}  // namespace

Report run_pipeline(const RunConfig& config) {
    config.validate();
    Report report;
    report.title = config.command + " (model " + config.model + ", n = " + std::to_string(config.n) +
                   (config.k ? ", k = " + std::to_string(*config.k) : std::string()) + ")";
    Rows out(report, config);
    if (config.command == "fg-expand") {
        fg_expand_rows(config, out);
    } else if (config.command == "renorm-volume") {
        renorm_volume_rows(config, out);
    } else if (config.command == "renorm-area") {
        require(is_area_model(config.model) || config.model == "hyperbolic", ErrorCode::InvalidArgument,
                "renorm-area: model must be totally-geodesic, geodesic, latitude or coaxial-torus");
        renorm_area_rows(config, out);
    } else if (config.command == "anomaly") {
        if (config.k || is_area_model(config.model))
            area_anomaly_rows(config, out);
        else
            volume_anomaly_rows(config, out);
    } else {
        identities_rows(config, out);
    }
    return report;
}

}  // namespace renorm
