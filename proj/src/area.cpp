#include "renorm/area.hpp"

#include "renorm/curvature.hpp"
#include "renorm/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace renorm {

namespace {
constexpr double pi = std::numbers::pi;
}

// ---- embeddings ----

Embedding Embedding::equatorial(int k, int n) {
    require(n >= 2 && k >= 1 && k <= n - 1, ErrorCode::InvalidArgument, "equatorial: need 1 <= k <= n - 1");
    Embedding e;
    e.kind = Kind::EquatorialSphere;
    e.k = k;
    e.n = n;
    return e;
}

Embedding Embedding::latitude(double theta0) {
    require(theta0 > 0.0 && theta0 < pi, ErrorCode::InvalidArgument, "latitude: polar angle must lie in (0, pi)");
    Embedding e;
    e.kind = Kind::Latitude;
    e.k = 1;
    e.n = 2;
    e.angle = theta0;
    return e;
}

Embedding Embedding::coaxial_torus(double a) {
    require(a > 0.0 && a < 0.5 * pi, ErrorCode::InvalidArgument, "coaxial torus: angle must lie in (0, pi/2)");
    Embedding e;
    e.kind = Kind::CoaxialTorus;
    e.k = 2;
    e.n = 3;
    e.angle = a;
    return e;
}

Embedding Embedding::flat_subtorus(std::vector<double> periods, int k, std::vector<double> offsets, double amplitude) {
    const int n = static_cast<int>(periods.size());
    require(k >= 1 && k <= n - 1, ErrorCode::InvalidArgument, "flat subtorus: need 1 <= k <= n - 1");
    if (offsets.empty()) offsets.assign(n - k, 0.0);
    require(static_cast<int>(offsets.size()) == n - k, ErrorCode::ShapeMismatch, "flat subtorus: need n - k offsets");
    require(amplitude == 0.0 || k == n - 1, ErrorCode::InvalidArgument,
            "flat subtorus: a height amplitude needs codimension one");
    Embedding e;
    e.kind = Kind::FlatSubtorus;
    e.k = k;
    e.n = n;
    e.periods = std::move(periods);
    e.offsets = std::move(offsets);
    e.amplitude = amplitude;
    return e;
}

std::vector<Jet> Embedding::chart(std::span<const Jet> s) const {
    require(static_cast<int>(s.size()) == k, ErrorCode::ShapeMismatch, "embedding: wrong parameter count");
    const JetSpace& sp = s[0].space();
    const int ord = s[0].order();
    std::vector<Jet> x;
    switch (kind) {
        case Kind::EquatorialSphere:
            for (int j = 0; j < n - k; ++j) x.emplace_back(sp, ord, 0.5 * pi);
            for (int j = 0; j < k; ++j) x.push_back(s[j]);
            break;
        case Kind::Latitude:
            x.emplace_back(sp, ord, angle);
            x.push_back(s[0]);
            break;
        case Kind::CoaxialTorus: {
            const double c = std::cos(angle), sn = std::sin(angle);
            x.push_back(acos(c * cos(s[0])));
            x.push_back(atan2(Jet(sp, ord, sn), c * sin(s[0])));
            x.push_back(s[1]);
            break;
        }
        case Kind::FlatSubtorus:
            for (int j = 0; j < k; ++j) x.push_back(s[j]);
            for (int j = 0; j < n - k; ++j) x.emplace_back(sp, ord, offsets[j]);
            if (amplitude != 0.0) x.back() += amplitude * sin(s[0] * (2.0 * pi / periods[0]));
            break;
    }
    return x;
}

std::vector<double> Embedding::chart_point(std::span<const double> s) const {
    const JetSpace& sp = JetSpace::get(k, 0);
    std::vector<Jet> js;
    for (int j = 0; j < k; ++j) js.emplace_back(sp, 0, s[j]);
    std::vector<double> x;
    for (const Jet& c : chart(js)) x.push_back(c.value());
    return x;
}

QuadratureGrid Embedding::parameter_grid(int nodes) const {
    require(nodes >= 2, ErrorCode::InvalidArgument, "parameter grid: need at least two nodes");
    std::vector<Axis> axes;
    switch (kind) {
        case Kind::EquatorialSphere:
            if (k == 1) return QuadratureGrid({Axis::periodic(nodes, 2.0 * pi)});
            return MetricFamily::round_sphere(k, 1.0).quadrature_grid(nodes, false);
        case Kind::Latitude: return QuadratureGrid({Axis::periodic(nodes, 2.0 * pi)});
        case Kind::CoaxialTorus:
            return QuadratureGrid({Axis::periodic(nodes, 2.0 * pi), Axis::periodic(nodes, 2.0 * pi)});
        case Kind::FlatSubtorus:
            for (int j = 0; j < k; ++j) axes.push_back(Axis::periodic(nodes, periods[j]));
            return QuadratureGrid(std::move(axes));
    }
    return {};
}

std::string Embedding::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::EquatorialSphere: os << "equatorial S^" << k << " in S^" << n; break;
        case Kind::Latitude: os << "latitude circle theta = " << angle << " in S^2"; break;
        case Kind::CoaxialTorus: os << "coaxial torus a = " << angle << " in S^3"; break;
        case Kind::FlatSubtorus:
            os << "T^" << k << " in T^" << n;
            if (amplitude != 0.0) os << " with height amplitude " << amplitude;
            break;
    }
    return os.str();
}

// ---- extrinsic geometry ----

double SubmanifoldPatch::area() const {
    double a = 0.0;
    for (const auto& p : points) a += p.weight;
    return a;
}

namespace {

SubmanifoldPoint point_geometry(const Embedding& N, const MetricFamily& g, std::span<const double> s) {
    const int k = N.k, n = N.n;
    const JetSpace& sp = JetSpace::get(k, 2);
    std::vector<Jet> sj;
    for (int j = 0; j < k; ++j) sj.push_back(Jet::variable(sp, 2, j, s[j]));
    const std::vector<Jet> xj = N.chart(sj);

    SubmanifoldPoint pt;
    pt.s.assign(s.begin(), s.end());
    for (const Jet& c : xj) pt.x.push_back(c.value());
    pt.tangent.resize(n, k);
    for (int i = 0; i < n; ++i)
        for (int a = 0; a < k; ++a) pt.tangent(i, a) = xj[i].partial(a);

    const Eigen::MatrixXd G = g.metric_value(pt.x);
    const Eigen::MatrixXd Ginv = G.inverse();
    const std::vector<Eigen::MatrixXd> dG = g.metric_first_partials(pt.x);

    pt.induced = pt.tangent.transpose() * G * pt.tangent;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pt.induced);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * std::max(hi, 1e-300))) {
        std::ostringstream os;
        os << "submanifold: induced metric degenerates at s = (";
        for (int j = 0; j < k; ++j) os << (j ? ", " : "") << s[j];
        os << ") for " << N.describe();
        fail(ErrorCode::Immersion, os.str());
    }

    // Gram-Schmidt on (tangent frame, coordinate vectors); the survivors after
    // the tangent block span the normal bundle.
    std::vector<Eigen::VectorXd> basis;
    auto ip = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) { return u.dot(G * v); };
    auto orthogonalize = [&](Eigen::VectorXd v) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) v -= ip(b, v) * b;
        return v;
    };
    for (int a = 0; a < k; ++a) {
        Eigen::VectorXd v = orthogonalize(pt.tangent.col(a));
        basis.push_back(v / std::sqrt(ip(v, v)));
    }
    pt.normal.resize(n, n - k);
    int found = 0;
    for (int i = 0; i < n && found < n - k; ++i) {
        Eigen::VectorXd v = orthogonalize(Eigen::VectorXd::Unit(n, i));
        const double len = std::sqrt(ip(v, v));
        if (len < 1e-8) continue;
        v /= len;
        basis.push_back(v);
        pt.normal.col(found++) = v;
    }
    pt.normal_metric = pt.normal.transpose() * G * pt.normal;

    // nabla_{e_a} e_b = d^2 x / ds^a ds^b + Gamma(e_a, e_b)
    const Eigen::MatrixXd hinv = pt.induced.inverse();
    pt.B.assign(n - k, Eigen::MatrixXd::Zero(k, k));
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
            const Eigen::VectorXd ea = pt.tangent.col(a), eb = pt.tangent.col(b);
            Eigen::VectorXd lower(n);  // Gamma_{m, ij} e_a^i e_b^j
            for (int m = 0; m < n; ++m) {
                double s2 = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        s2 += 0.5 * (dG[j](m, i) + dG[i](m, j) - dG[m](i, j)) * ea(i) * eb(j);
                lower(m) = s2;
            }
            Eigen::VectorXd nab = Ginv * lower;
            for (int i = 0; i < n; ++i) nab(i) += xj[i].partial(a, b);
            for (int c = 0; c < n - k; ++c) {
                pt.B[c](a, b) = ip(pt.normal.col(c), nab);
                pt.B[c](b, a) = pt.B[c](a, b);
            }
        }
    pt.H.resize(n - k);
    for (int c = 0; c < n - k; ++c) pt.H(c) = (hinv.cwiseProduct(pt.B[c])).sum();
    pt.H2 = pt.H.dot(pt.normal_metric * pt.H);

    if (n >= 3) {
        const CurvaturePack cp = curvature_pack(g, pt.x);
        const Tensor& P = cp.P();
        Eigen::MatrixXd Pm(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Pm(i, j) = P(i, j);
        pt.P = pt.tangent.transpose() * Pm * pt.tangent;
        pt.trP = (hinv.cwiseProduct(*pt.P)).sum();
    }
    return pt;
}

}  // namespace

SubmanifoldPatch submanifold_geometry(const Embedding& N, const MetricFamily& g, int nodes) {
    require(g.dim() == N.n, ErrorCode::ShapeMismatch, "submanifold: embedding and metric dimensions differ");
    if (N.kind == Embedding::Kind::FlatSubtorus)
        require(!g.is_sphere(), ErrorCode::InvalidArgument,
                "submanifold: a flat subtorus needs a torus metric");
    else
        require(g.is_sphere(), ErrorCode::InvalidArgument, "submanifold: this embedding lives in a sphere chart");
    SubmanifoldPatch patch{N, g, {}};
    const QuadratureGrid grid = N.parameter_grid(nodes);
    patch.points.reserve(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
        SubmanifoldPoint pt = point_geometry(N, g, grid.point(p));
        pt.weight = grid.weight(p) * std::sqrt(pt.induced.determinant());
        patch.points.push_back(std::move(pt));
    }
    return patch;
}

double k2_log_coefficient(const SubmanifoldPatch& patch) {
    require(patch.k() == 2, ErrorCode::DimensionUnsupported, "K formula: the integrand is printed for k = 2 only");
    double s = 0.0;
    for (const auto& p : patch.points) {
        require(p.trP.has_value(), ErrorCode::DimensionUnsupported, "K formula: the Schouten tensor needs n >= 3");
        s += p.weight * (p.H2 + 4.0 * *p.trP);
    }
    return -s / 8.0;
}

double k2_anomaly(const SubmanifoldPatch& patch, const ConformalFactor& upsilon) {
    require(patch.k() == 2, ErrorCode::DimensionUnsupported, "area anomaly: Q_N is printed for k = 0 and k = 2 only");
    const int n = patch.N.n;
    const JetSpace& sp = JetSpace::get(n, 1);
    double s = 0.0;
    for (const auto& p : patch.points) {
        require(p.trP.has_value(), ErrorCode::DimensionUnsupported, "area anomaly: the Schouten tensor needs n >= 3");
        const Jet u = patch.metric.evaluate_function(upsilon, p.x, sp, 1);
        Eigen::VectorXd du(n);
        for (int i = 0; i < n; ++i) du(i) = u.partial(i);
        // Upsilon_{gamma'} in the normal frame; Upsilon_i Upsilon^i with the full metric of M
        const Eigen::VectorXd un = p.normal.transpose() * du;
        const double grad2 = du.dot(patch.metric.metric_value(p.x).ldlt().solve(du));
        const double q = -(p.H2 + 4.0 * *p.trP) * u.value() / 8.0 + 0.25 * (p.H.dot(un) - grad2);
        s += p.weight * q;
    }
    return s;
}


std::vector<double> sphere_chart(std::span<const double> X) {
    const int n = static_cast<int>(X.size()) - 1;
    require(n >= 1, ErrorCode::ShapeMismatch, "sphere_chart: need a vector of R^{n+1}, n >= 1");
    std::vector<double> x(n);
    for (int j = 0; j < n - 1; ++j) {
        double tail = 0.0;
        for (int i = j + 1; i <= n; ++i) tail += X[i] * X[i];
        x[j] = std::atan2(std::sqrt(tail), X[j]);
    }
    x[n - 1] = std::atan2(X[n], X[n - 1]);
    return x;
}

// ---- minimal graphs ----

namespace detail {

class GraphModel {
public:
    virtual ~GraphModel() = default;

    MinimalGraph::Construction construction = MinimalGraph::Construction::TotallyGeodesic;
    int k = 0;
    int n = 0;
    std::string description;
    std::optional<Embedding> boundary;
    std::vector<double> weights;
    double r_split = 0.5;
    double inner = 0.0;
    double residual = 0.0;
    std::optional<double> parameter;

    virtual void density(int f, std::span<const double> r, std::span<double> out) const = 0;
    [[nodiscard]] virtual std::vector<double> foot(int f, double r) const = 0;
    virtual void u(int f, std::span<const double> r, std::span<double> out) const = 0;
};

}  // namespace detail

namespace {

std::vector<double> ambient_point(int n, std::span<const double> x) {
    const JetSpace& sp = JetSpace::get(n, 0);
    std::vector<Jet> xj;
    for (int i = 0; i < n; ++i) xj.emplace_back(sp, 0, x[i]);
    std::vector<double> X;
    for (const Jet& c : MetricFamily::round_sphere(n, 1.0).ambient(xj)) X.push_back(c.value());
    return X;
}

class TotallyGeodesicModel final : public detail::GraphModel {
public:
    TotallyGeodesicModel(int k_, int n_, int nodes) {
        require(n_ >= 1 && k_ >= 0 && k_ <= n_ - 1, ErrorCode::InvalidArgument,
                "totally_geodesic: need 0 <= k <= n - 1");
        construction = MinimalGraph::Construction::TotallyGeodesic;
        k = k_;
        n = n_;
        std::ostringstream os;
        os << "totally geodesic H^" << k + 1 << " in H^" << n + 1;
        description = os.str();
        if (k == 0) {
            std::vector<double> x(n, 0.5 * pi);
            for (double sgn : {1.0, -1.0}) {
                x.back() = sgn * 0.5 * pi;
                if (n == 1) x.back() = sgn > 0 ? 0.0 : pi;
                feet_.push_back(x);
                weights.push_back(1.0);
            }
        } else {
            boundary = Embedding::equatorial(k, n);
            const QuadratureGrid grid = boundary->parameter_grid(nodes);
            const auto half = MetricFamily::round_sphere(k, 0.5);
            for (std::size_t p = 0; p < grid.size(); ++p) {
                const auto s = grid.point(p);
                feet_.push_back(boundary->chart_point(s));
                weights.push_back(grid.weight(p) * (k == 1 ? 0.5 : half.sqrt_det(s)));
            }
        }
        r_split = 0.5;
        const Rule rule = gauss_legendre(16, r_split, 1.0);
        double in = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) in += rule.weights[i] * value(rule.nodes[i]);
        double w = 0.0;
        for (double x : weights) w += x;
        inner = in * w;
    }

    void density(int, std::span<const double> r, std::span<double> out) const override {
        for (std::size_t i = 0; i < r.size(); ++i) out[i] = value(r[i]);
    }
    [[nodiscard]] std::vector<double> foot(int f, double) const override { return feet_[f]; }
    void u(int, std::span<const double>, std::span<double> out) const override {
        std::fill(out.begin(), out.end(), 0.0);
    }

private:
    std::vector<std::vector<double>> feet_;

    [[nodiscard]] double value(double r) const { return std::pow(r, -k - 1) * std::pow(1.0 - r * r, k); }
};

// Ball-model geodesic: with beta half the angle between the endpoints, the
// boundary direction at height r makes angle phi(r) with the bisector,
// cos phi = cos beta (1 + r^2)/(1 - r^2).
class GeodesicModel final : public detail::GraphModel {
public:
    GeodesicModel(int n_, std::span<const double> p, std::span<const double> q) {
        require(n_ >= 1, ErrorCode::InvalidArgument, "geodesic: need n >= 1");
        require(static_cast<int>(p.size()) == n_ && static_cast<int>(q.size()) == n_, ErrorCode::ShapeMismatch,
                "geodesic: endpoints need n chart coordinates");
        construction = MinimalGraph::Construction::GeodesicArc;
        k = 0;
        n = n_;
        const auto P = ambient_point(n, p), Q = ambient_point(n, q);
        Eigen::VectorXd vp = Eigen::Map<const Eigen::VectorXd>(P.data(), n + 1);
        Eigen::VectorXd vq = Eigen::Map<const Eigen::VectorXd>(Q.data(), n + 1);
        const double dminus = (vp - vq).norm(), dplus = (vp + vq).norm();
        if (dminus < 1e-12) fail(ErrorCode::DegenerateEndpoints, "geodesic: the endpoints coincide");
        beta_ = std::atan2(dminus, dplus);
        cb_ = std::cos(beta_);
        t_ = (vp - vq) / dminus;
        m_ = dplus > 1e-14 ? Eigen::VectorXd((vp + vq) / dplus) : Eigen::VectorXd::Zero(n + 1);
        if (dplus <= 1e-14) cb_ = 0.0;
        std::ostringstream os;
        os << "geodesic with endpoint angle " << 2.0 * beta_;
        description = os.str();
        weights = {1.0, 1.0};
        r_split = std::min(0.5, 0.5 * std::tan(0.5 * beta_));
        // inner segment: hyperbolic distance between the two split points
        const double rho = NormalForm::ball_from_r(r_split);
        const Eigen::VectorXd a = rho * direction(0, r_split), b = rho * direction(1, r_split);
        inner = std::acosh(1.0 + 2.0 * (a - b).squaredNorm() / std::pow(1.0 - rho * rho, 2));
    }

    void density(int, std::span<const double> r, std::span<double> out) const override {
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double x = r[i], sphi = std::sin(phi(x));
            const double c = 2.0 * x * cb_ / ((1.0 - x * x) * sphi);
            out[i] = std::sqrt(1.0 + c * c) / x;
        }
    }
    [[nodiscard]] std::vector<double> foot(int f, double r) const override {
        const Eigen::VectorXd d = direction(f, r);
        return sphere_chart(std::span<const double>(d.data(), d.size()));
    }
    void u(int, std::span<const double> r, std::span<double> out) const override {
        for (std::size_t i = 0; i < r.size(); ++i) out[i] = 0.5 * (beta_ - phi(r[i]));
    }

private:
    double beta_ = 0.0, cb_ = 0.0;
    Eigen::VectorXd t_, m_;

    [[nodiscard]] double phi(double r) const {
        return std::acos(std::min(1.0, cb_ * (1.0 + r * r) / (1.0 - r * r)));
    }
    [[nodiscard]] Eigen::VectorXd direction(int f, double r) const {
        const double ph = phi(r);
        return std::cos(ph) * m_ + (f == 0 ? 1.0 : -1.0) * std::sin(ph) * t_;
    }
};

}  // namespace

MinimalGraph::MinimalGraph(std::shared_ptr<const detail::GraphModel> model) : m_(std::move(model)) {}

MinimalGraph::Construction MinimalGraph::construction() const { return m_->construction; }
int MinimalGraph::k() const { return m_->k; }
int MinimalGraph::n() const { return m_->n; }
std::string MinimalGraph::describe() const { return m_->description; }
const std::optional<Embedding>& MinimalGraph::boundary() const { return m_->boundary; }
int MinimalGraph::fibers() const { return static_cast<int>(m_->weights.size()); }
double MinimalGraph::weight(int f) const { return m_->weights.at(f); }
double MinimalGraph::r_split() const { return m_->r_split; }
double MinimalGraph::inner() const { return m_->inner; }
double MinimalGraph::residual() const { return m_->residual; }
std::optional<double> MinimalGraph::shooting_parameter() const { return m_->parameter; }

std::vector<double> MinimalGraph::density(int f, std::span<const double> r) const {
    require(f >= 0 && f < fibers(), ErrorCode::InvalidArgument, "minimal graph: fiber index out of range");
    for (double x : r)
        require(x > 0.0 && x <= m_->r_split, ErrorCode::Domain, "minimal graph: radius outside the graph region");
    std::vector<double> out(r.size());
    m_->density(f, r, out);
    return out;
}

std::vector<double> MinimalGraph::foot(int f, double r) const {
    require(f >= 0 && f < fibers(), ErrorCode::InvalidArgument, "minimal graph: fiber index out of range");
    require(r >= 0.0 && r <= m_->r_split, ErrorCode::Domain, "minimal graph: radius outside the graph region");
    return m_->foot(f, r);
}

std::vector<double> MinimalGraph::u(int f, std::span<const double> r) const {
    require(f >= 0 && f < fibers(), ErrorCode::InvalidArgument, "minimal graph: fiber index out of range");
    for (double x : r)
        require(x >= 0.0 && x <= m_->r_split, ErrorCode::Domain, "minimal graph: radius outside the graph region");
    std::vector<double> out(r.size());
    m_->u(f, r, out);
    return out;
}

std::vector<double> MinimalGraph::u_taylor(int f, int degree) const {
    require(degree >= 2, ErrorCode::InvalidArgument, "u_taylor: degree must be at least 2");
    const double h = std::min(0.05, m_->r_split);
    const int logs = k() % 2 == 0 ? 2 : 0;  // r^{k+2} log r and r^{k+4} log r
    const int cols = degree + logs;
    const int m = 6 * cols;
    std::vector<double> r(m);
    for (int j = 0; j < m; ++j) r[j] = h * (j + 1) / m;
    const std::vector<double> v = u(f, r);
    // u(0) = 0 is imposed; columns t^1..t^degree with t = r/h, then the log columns
    Eigen::MatrixXd A(m, cols);
    Eigen::VectorXd b(m);
    for (int j = 0; j < m; ++j) {
        const double t = r[j] / h;
        for (int c = 1; c <= degree; ++c) A(j, c - 1) = std::pow(t, c);
        for (int l = 0; l < logs; ++l) A(j, degree + l) = std::pow(t, k() + 2 + 2 * l) * std::log(t);
        b(j) = v[j];
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    std::vector<double> out(degree + 2, 0.0);
    for (int j = 1; j <= degree; ++j) out[j] = c(j - 1) / std::pow(h, j);
    for (int l = 0; l < logs; ++l) {
        // t^p log t = (r/h)^p (log r - log h)
        const int p = k() + 2 + 2 * l;
        const double w = c(degree + l) / std::pow(h, p);
        if (l == 0) out[degree + 1] = w;
        if (p <= degree) out[p] -= w * std::log(h);
    }
    return out;
}

MinimalGraph geodesic_between(int n, std::span<const double> p, std::span<const double> q) {
    return MinimalGraph(std::make_shared<GeodesicModel>(n, p, q));
}

MinimalGraph totally_geodesic(int k, int n, int nodes) {
    return MinimalGraph(std::make_shared<TotallyGeodesicModel>(k, n, nodes));
}

// ---- equivariant shooting ----
//
// The symmetric filling is swept out by rotating a profile curve in a
// quarter (torus) or half (latitude) plane z = rho (cos t, sin t). Its area is
// C * int e^sigma |dz| with sigma = m log(2/(1 - rho^2)) + log z2 + c1 log z1,
// so the profile is a geodesic of e^{2 sigma} |dz|^2: the Euclidean curvature
// equals the normal derivative of sigma. The curve leaves the axis z2 = 0
// perpendicularly; near M it is the graph t(r).

namespace {

struct ProfileSpec {
    int m = 2;           // power of the conformal factor (k + 1)
    double c1 = 0.0;     // 1 when the z1-circle also rotates
    double C = 2 * pi;   // product of the rotation circumferences
    double target = 0.0; // boundary angle
    double measure = 0.0; // Area_{g0}(N)
    double lo = -1.0, hi = 1.0;  // admissible axis parameter
};

using StateA = std::array<double, 4>;  // z1, z2, psi, area
using StateB = std::array<double, 2>;  // t, dt/drho, as functions of q = -r

struct Shot {
    bool reached = false;
    double miss = 0.0;
    double r_switch = 0.0;
    StateB at_switch{};
    double area = 0.0;
};

class ProfileOde {
public:
    ProfileOde(ProfileSpec spec, const ShootingOptions& opt) : s_(spec), opt_(opt) {}

    [[nodiscard]] const ProfileSpec& spec() const { return s_; }

    void rhs_a(const StateA& y, StateA& dy) const {
        const double z1 = y[0], z2 = y[1], psi = y[2];
        const double one = 1.0 - z1 * z1 - z2 * z2;
        const double s1 = 2.0 * s_.m * z1 / one + (s_.c1 > 0.0 ? s_.c1 / z1 : 0.0);
        const double s2 = 2.0 * s_.m * z2 / one + 1.0 / z2;
        dy[0] = std::cos(psi);
        dy[1] = std::sin(psi);
        dy[2] = -s1 * std::sin(psi) + s2 * std::cos(psi);
        dy[3] = s_.C * std::pow(2.0 / one, s_.m) * z2 * std::pow(z1, s_.c1);
    }

    // rho t'' = w^2 (sigma_t / rho - rho t' sigma_rho) - 2 t' - rho^2 t'^3, primes in rho
    [[nodiscard]] double second(double r, double t, double tp) const {
        const double rho = (1.0 - r) / (1.0 + r);
        const double one = 4.0 * r / ((1.0 + r) * (1.0 + r));  // 1 - rho^2
        const double sr = 2.0 * s_.m * rho / one + (1.0 + s_.c1) / rho;
        const double st = std::cos(t) / std::sin(t) - s_.c1 * std::tan(t);
        const double w2 = 1.0 + rho * rho * tp * tp;
        return (w2 * (st / rho - rho * tp * sr) - 2.0 * tp - rho * rho * tp * tp * tp) / rho;
    }

    void rhs_b(const StateB& y, StateB& dy, double q) const {
        const double r = -q;
        const double drho = 2.0 / ((1.0 + r) * (1.0 + r));  // d rho / dq
        dy[0] = y[1] * drho;
        dy[1] = second(r, y[0], y[1]) * drho;
    }

    /// Area density per unit boundary measure at height r.
    [[nodiscard]] double density(double r, double t, double tp) const {
        const double rho = (1.0 - r) / (1.0 + r);
        const double lam = (1.0 + r) * (1.0 + r) / (2.0 * r);
        const double e = std::pow(lam, s_.m) * rho * std::sin(t) * std::pow(rho * std::cos(t), s_.c1);
        return s_.C * e * std::sqrt(1.0 + rho * rho * tp * tp) * 2.0 / ((1.0 + r) * (1.0 + r)) / s_.measure;
    }

    Shot shoot(double a0) const {
        namespace ode = boost::numeric::odeint;
        Shot out;
        const double d = opt_.axis_offset;
        const double one0 = 1.0 - a0 * a0;
        const double kappa = -0.5 * (2.0 * s_.m * a0 / one0 + (s_.c1 > 0.0 ? s_.c1 / a0 : 0.0));
        StateA y{a0 - 0.5 * kappa * d * d, d, 0.5 * pi + kappa * d,
                 0.5 * s_.C * std::pow(2.0 / one0, s_.m) * std::pow(a0, s_.c1) * d * d};
        auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<StateA>>(opt_.ode_tolerance, opt_.ode_tolerance);
        auto sys = [this](const StateA& x, StateA& dx, double) { rhs_a(x, dx); };
        double s = 0.0, ds = 1e-3;
        const double rho_switch = 1.0 / 3.0;
        for (int it = 0; it < 200000; ++it) {
            const double rho = std::hypot(y[0], y[1]);
            const double t = std::atan2(y[1], y[0]);
            const double radial = std::cos(y[2] - t);
            if (rho >= rho_switch && radial >= 0.5) {
                out.r_switch = NormalForm::r_from_ball(rho);
                out.at_switch = {t, std::sin(y[2] - t) / (rho * radial)};
                out.area = y[3];
                break;
            }
            if (!(y[1] > 0.0) || (s_.c1 > 0.0 && !(y[0] > 0.0)) || !(rho < 1.0) || s > 20.0 ||
                !std::isfinite(y[2]))
                return out;
            ds = std::min(ds, 0.01);
            if (stepper.try_step(sys, y, s, ds) == ode::fail) continue;
        }
        if (out.r_switch == 0.0) return out;
        StateB b = out.at_switch;
        if (!run_b(b, out.r_switch, 1e-9)) return out;
        out.reached = true;
        out.miss = b[0] - s_.target;
        return out;
    }

    /// Integrates the graph stage from r_from down to r_to.
    bool run_b(StateB& y, double r_from, double r_to) const {
        namespace ode = boost::numeric::odeint;
        auto sys = [this](const StateB& x, StateB& dx, double q) { rhs_b(x, dx, q); };
        auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<StateB>>(opt_.ode_tolerance, opt_.ode_tolerance);
        ode::integrate_adaptive(stepper, sys, y, -r_from, -r_to, 1e-4);
        return std::isfinite(y[0]) && std::isfinite(y[1]);
    }

    /// States at the given heights (any order, all <= r_from).
    std::vector<StateB> sample(const StateB& start, double r_from, std::span<const double> r) const {
        namespace ode = boost::numeric::odeint;
        std::vector<std::size_t> order(r.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r[a] > r[b]; });
        std::vector<double> times{-r_from};
        for (std::size_t i : order) times.push_back(-r[i]);
        std::vector<StateB> at(times.size());
        std::size_t next = 0;
        StateB y = start;
        auto sys = [this](const StateB& x, StateB& dx, double q) { rhs_b(x, dx, q); };
        auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<StateB>>(opt_.ode_tolerance, opt_.ode_tolerance);
        ode::integrate_times(stepper, sys, y, times.begin(), times.end(), 1e-4,
                             [&](const StateB& x, double) { at[next++] = x; });
        std::vector<StateB> out(r.size());
        for (std::size_t i = 0; i < order.size(); ++i) out[order[i]] = at[i + 1];
        return out;
    }

private:
    ProfileSpec s_;
    ShootingOptions opt_;
};

class EquivariantModel final : public detail::GraphModel {
public:
    EquivariantModel(const Embedding& N, int n_, const ShootingOptions& opt) : ode_(spec_for(N, n_), opt) {
        construction = MinimalGraph::Construction::Equivariant;
        k = N.k;
        n = n_;
        boundary = N;
        description = "equivariant filling of " + N.describe();
        weights = {ode_.spec().measure};

        // Coarse scan for a sign change of the boundary miss, then bisection.
        const ProfileSpec& sp = ode_.spec();
        const int scan = 40;
        std::vector<std::pair<double, Shot>> shots;
        for (int i = 1; i < scan; ++i) {
            const double a = sp.lo + (sp.hi - sp.lo) * i / scan;
            shots.emplace_back(a, ode_.shoot(a));
        }
        int bracket = -1;
        for (int i = 0; i + 1 < static_cast<int>(shots.size()); ++i)
            if (shots[i].second.reached && shots[i + 1].second.reached &&
                (shots[i].second.miss <= 0.0) != (shots[i + 1].second.miss <= 0.0)) {
                bracket = i;
                break;
            }
        if (bracket < 0) {
            std::ostringstream os;
            os << "equivariant shooting: no sign change of the boundary miss over the axis parameter range ["
               << sp.lo << ", " << sp.hi << "]; misses:";
            for (const auto& [a, s] : shots) {
                os << " " << a << ":";
                if (s.reached)
                    os << s.miss;
                else
                    os << "none";
            }
            fail(ErrorCode::NoConvergence, os.str());
        }
        double a = shots[bracket].first, b = shots[bracket + 1].first;
        Shot sa = shots[bracket].second;
        Shot best = sa;
        double best_a = a;
        int it = 0;
        for (; it < opt.max_iterations && b - a > opt.tolerance; ++it) {
            const double mid = 0.5 * (a + b);
            const Shot sm = ode_.shoot(mid);
            if (!sm.reached) {
                std::ostringstream os;
                os << "equivariant shooting: the profile from axis parameter " << mid
                   << " does not reach the boundary inside the bracket [" << a << ", " << b << "]";
                fail(ErrorCode::NoConvergence, os.str());
            }
            if ((sm.miss <= 0.0) == (sa.miss <= 0.0)) {
                a = mid;
                sa = sm;
            } else {
                b = mid;
            }
            if (std::abs(sm.miss) < std::abs(best.miss) || it == 0) {
                best = sm;
                best_a = mid;
            }
        }
        if (b - a > opt.tolerance) {
            std::ostringstream os;
            os << "equivariant shooting: bracket [" << a << ", " << b << "] wider than " << opt.tolerance << " after "
               << it << " bisections";
            fail(ErrorCode::NoConvergence, os.str());
        }
        parameter = best_a;
        shot_ = best;
        r_split = best.r_switch;
        inner = best.area;
        base_ = sp.target + best.miss;
        residual = interior_residual();
    }

    void density(int, std::span<const double> r, std::span<double> out) const override {
        const auto st = ode_.sample(shot_.at_switch, r_split, r);
        for (std::size_t i = 0; i < r.size(); ++i) out[i] = ode_.density(r[i], st[i][0], st[i][1]);
    }
    [[nodiscard]] std::vector<double> foot(int, double r) const override {
        double t = base_;
        if (r > 0.0) {
            const std::vector<double> rr{r};
            t = ode_.sample(shot_.at_switch, r_split, rr)[0][0];
        }
        if (n == 2) return {t, 0.0};
        const std::vector<double> X{std::cos(t), 0.0, std::sin(t), 0.0};
        return sphere_chart(X);
    }
    void u(int, std::span<const double> r, std::span<double> out) const override {
        std::vector<double> rr(r.begin(), r.end());
        for (double& x : rr) x = std::max(x, 1e-9);
        const auto st = ode_.sample(shot_.at_switch, r_split, rr);
        for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] == 0.0 ? 0.0 : 0.5 * (st[i][0] - base_);
    }

private:
    ProfileOde ode_;
    Shot shot_;
    double base_ = 0.0;

    static ProfileSpec spec_for(const Embedding& N, int n) {
        require(N.n == n, ErrorCode::ShapeMismatch, "equivariant filling: boundary lives in a different dimension");
        ProfileSpec s;
        if (N.kind == Embedding::Kind::Latitude) {
            s.m = 2;
            s.c1 = 0.0;
            s.C = 2.0 * pi;
            s.target = N.angle;
            s.measure = pi * std::sin(N.angle);
            s.lo = -1.0;
            s.hi = 1.0;
        } else if (N.kind == Embedding::Kind::CoaxialTorus) {
            s.m = 3;
            s.c1 = 1.0;
            s.C = 4.0 * pi * pi;
            s.target = N.angle;
            s.measure = pi * pi * std::sin(N.angle) * std::cos(N.angle);
            s.lo = 0.0;
            s.hi = 1.0;
        } else {
            fail(ErrorCode::Symmetry, "equivariant filling: " + N.describe() +
                                          " is not invariant under a supported rotation group");
        }
        return s;
    }

    // Max over a uniform r grid of |rho (d t'/d rho - rhs)| and |d t/d rho - t'|,
    // with d/dr by sixth-order differences of the sampled states.
    [[nodiscard]] double interior_residual() const {
        const double h = 0.0005;
        const double lo = 0.02, hi = 0.95 * r_split;
        const int m = static_cast<int>((hi - lo) / h);
        if (m < 8) return 0.0;
        std::vector<double> r(m + 1);
        for (int j = 0; j <= m; ++j) r[j] = lo + h * j;
        const auto st = ode_.sample(shot_.at_switch, r_split, r);
        static const double d1[] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
        double worst = 0.0;
        for (int j = 3; j + 3 <= m; ++j) {
            double tr = 0.0, pr = 0.0;
            for (int o = -3; o <= 3; ++o) {
                tr += d1[o + 3] * st[j + o][0];
                pr += d1[o + 3] * st[j + o][1];
            }
            const double x = r[j];
            const double drho = -2.0 / ((1.0 + x) * (1.0 + x)) * h;
            const double rho = (1.0 - x) / (1.0 + x);
            worst = std::max(worst, std::abs(rho * (pr / drho - ode_.second(x, st[j][0], st[j][1]))));
            worst = std::max(worst, std::abs(tr / drho - st[j][1]));
        }
        return worst;
    }
};

}  // namespace

MinimalGraph equivariant_minimal_graph(const Embedding& N, int n, const ShootingOptions& options) {
    return MinimalGraph(std::make_shared<EquivariantModel>(N, n, options));
}

// ---- area expansion ----

std::vector<double> area_profile(const MinimalGraph& Y, std::span<const double> eps, const AreaOptions& options,
                                 const std::vector<std::vector<double>>* lower) {
    const int F = Y.fibers();
    if (lower)
        require(static_cast<int>(lower->size()) == F, ErrorCode::ShapeMismatch,
                "area_profile: need one row of lower limits per fiber");
    require(options.gl_nodes >= 2 && options.max_panels >= 1, ErrorCode::InvalidArgument, "area_profile: bad radial rule");
    const double rs = Y.r_split();
    const double resolution = std::ldexp(rs, -options.max_panels);
    const Rule unit = gauss_legendre(options.gl_nodes, 0.0, 1.0);
    const std::size_t G = unit.nodes.size();

    std::vector<double> out(eps.size(), Y.inner());
    for (int f = 0; f < F; ++f) {
        std::vector<double> L(eps.begin(), eps.end());
        if (lower) {
            require((*lower)[f].size() == eps.size(), ErrorCode::ShapeMismatch, "area_profile: lower limits differ in length");
            L = (*lower)[f];
        }
        std::vector<int> full(L.size());
        int panels = 0;
        for (std::size_t i = 0; i < L.size(); ++i) {
            if (!(L[i] >= resolution)) {
                std::ostringstream os;
                os << "area_profile: eps = " << L[i] << " is below the radial quadrature resolution " << resolution;
                fail(ErrorCode::Resolution, os.str());
            }
            require(L[i] <= rs, ErrorCode::Domain, "area_profile: eps exceeds the graph region of Y");
            int j = 0;
            while (std::ldexp(rs, -j - 1) >= L[i]) ++j;
            full[i] = j;
            panels = std::max(panels, j);
        }
        // one density evaluation for every node: full panels, then each partial panel
        std::vector<double> r;
        for (int j = 0; j < panels; ++j) {
            const double a = std::ldexp(rs, -j - 1), b = std::ldexp(rs, -j);
            for (std::size_t g = 0; g < G; ++g) r.push_back(a + (b - a) * unit.nodes[g]);
        }
        for (std::size_t i = 0; i < L.size(); ++i) {
            const double a = L[i], b = std::ldexp(rs, -full[i]);
            for (std::size_t g = 0; g < G; ++g) r.push_back(a + (b - a) * unit.nodes[g]);
        }
        const std::vector<double> d = Y.density(f, r);
        std::vector<double> cum(panels + 1, 0.0);
        for (int j = 0; j < panels; ++j) {
            const double len = std::ldexp(rs, -j - 1);
            double s = 0.0;
            for (std::size_t g = 0; g < G; ++g) s += unit.weights[g] * d[j * G + g];
            cum[j + 1] = cum[j] + s * len;
        }
        const double w = Y.weight(f);
        for (std::size_t i = 0; i < L.size(); ++i) {
            const std::size_t base = (panels + i) * G;
            const double len = std::ldexp(rs, -full[i]) - L[i];
            double s = 0.0;
            for (std::size_t g = 0; g < G; ++g) s += unit.weights[g] * d[base + g];
            out[i] += w * (cum[full[i]] + s * len);
        }
    }
    return out;
}

std::vector<double> area_coefficients(const MinimalGraph& Y, int f, const AreaOptions& options) {
    const int k = Y.k(), deg = k + 2;
    const double lo = options.coeff_lo, hi = options.coeff_hi;
    require(lo > 0.0 && hi > lo && hi <= Y.r_split(), ErrorCode::Domain,
            "area coefficients: radial window must lie inside the graph region");
    const int m = 4 * (deg + 1);
    std::vector<double> r(m);
    for (int j = 0; j < m; ++j) r[j] = 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(pi * (j + 0.5) / m);
    const std::vector<double> d = Y.density(f, r);
    Eigen::MatrixXd A(m, deg + 1);
    Eigen::VectorXd b(m);
    for (int j = 0; j < m; ++j) {
        for (int c = 0; c <= deg; ++c) A(j, c) = std::pow(r[j] / hi, c);
        b(j) = std::pow(r[j], k + 1) * d[j];
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    std::vector<double> out(deg + 1);
    for (int j = 0; j <= deg; ++j) out[j] = c(j) / std::pow(hi, j);
    return out;
}

AreaFit renormalized_area(const MinimalGraph& Y, const AreaOptions& options) {
    const auto eps = options.eps();
    const auto samples = area_profile(Y, eps, options);
    AreaFit out;
    out.k = Y.k();
    out.fit = fit_volume(Y.k(), eps, samples, options.tail, options.max_condition);
    out.fit.n = Y.k();
    for (int f = 0; f < Y.fibers(); ++f) out.boundary_measure += Y.weight(f);
    if (Y.k() % 2 == 0) {
        double K = 0.0;
        for (int f = 0; f < Y.fibers(); ++f) K += Y.weight(f) * area_coefficients(Y, f, options)[Y.k()];
        out.K_form = K;
    }
    return out;
}

AreaAnomalyReport area_anomaly(const MinimalGraph& Y, const ConformalFactor& upsilon, const AreaOptions& options,
                               bool gauge_route) {
    const int k = Y.k(), n = Y.n();
    AreaAnomalyReport rep;
    rep.k = k;
    rep.upsilon = upsilon.to_string();
    const NormalForm nf = NormalForm::hyperbolic(n);
    const MetricFamily& g = nf.boundary();
    if (k == 0) {
        const JetSpace& sp = JetSpace::get(n, 0);
        for (int f = 0; f < Y.fibers(); ++f) rep.anomaly += g.evaluate_function(upsilon, Y.foot(f, 0.0), sp, 0).value();
    } else if (k == 2) {
        require(Y.boundary().has_value(), ErrorCode::InvalidArgument, "area anomaly: Y has no boundary embedding");
        rep.anomaly = k2_anomaly(submanifold_geometry(*Y.boundary(), g), upsilon);
    } else {
        fail(ErrorCode::DimensionUnsupported, "area anomaly: Q_N is printed for k = 0 and k = 2 only");
    }
    if (!gauge_route) return rep;
    if (Y.construction() == MinimalGraph::Construction::Equivariant && !upsilon.is_constant()) return rep;

    const QuadratureGrid grid = MetricFamily::rescaled(g, upsilon).quadrature_grid(options.gauge_nodes);
    const OmegaField omega = solve_special_defining(nf, upsilon, grid, options.gauge);
    const auto eps = options.eps();
    std::vector<std::vector<double>> lower(Y.fibers(), std::vector<double>(eps.size()));
    const bool fixed_foot = Y.construction() != MinimalGraph::Construction::GeodesicArc;
    for (int f = 0; f < Y.fibers(); ++f) {
        const std::vector<double> x0 = Y.foot(f, 0.0);
        for (std::size_t i = 0; i < eps.size(); ++i) {
            // r exp(omega(foot(r), r)) = eps by fixed-point iteration
            double r = eps[i] * std::exp(-omega.value_at(x0, 0.0));
            int it = 0;
            for (; it < 200; ++it) {
                const double w = fixed_foot ? omega.value_at(x0, r) : omega.value_at(Y.foot(f, r), r);
                const double next = eps[i] * std::exp(-w);
                const bool done = std::abs(next - r) <= 1e-15 * r;
                r = next;
                if (done) break;
            }
            require(it < 200, ErrorCode::Inversion, "area anomaly: cutoff inversion along a fiber did not converge");
            lower[f][i] = r;
        }
    }
    const auto base = area_profile(Y, eps, options);
    const auto gauged = area_profile(Y, eps, options, &lower);
    std::vector<double> diff(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) diff[i] = gauged[i] - base[i];
    const EpsilonFit d = fit_volume(k, eps, diff, options.tail, options.max_condition);
    rep.gauge_change = d.V();
    rep.log_change = d.L();
    rep.discrepancy = std::abs(*rep.gauge_change - rep.anomaly);
    return rep;
}

}  // namespace renorm
