#include "renorm/manifold.hpp"

#include "renorm/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace renorm {

namespace {

std::vector<Jet> chart_jets(std::span<const double> x, const JetSpace& space, int order) {
    std::vector<Jet> out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out.push_back(Jet::variable(space, order, static_cast<int>(i), x[i]));
    return out;
}

const MetricFamily& root_of(const MetricFamily& f) {
    const MetricFamily* cur = &f;
    while (cur->base() != nullptr) cur = cur->base();
    return *cur;
}

}  // namespace

MetricFamily MetricFamily::round_sphere(int n, double radius) {
    require(n >= 1, ErrorCode::InvalidArgument, "round_sphere: dimension must be >= 1");
    require(radius > 0.0, ErrorCode::InvalidArgument, "round_sphere: radius must be positive");
    MetricFamily f;
    f.kind_ = Kind::RoundSphere;
    f.n_ = n;
    f.radius_ = radius;
    f.periods_.assign(static_cast<std::size_t>(n), 2.0 * std::numbers::pi);
    return f;
}

MetricFamily MetricFamily::flat_torus(std::vector<double> periods) {
    require(!periods.empty(), ErrorCode::InvalidArgument, "flat_torus: need at least one period");
    for (double p : periods) require(p > 0.0, ErrorCode::InvalidArgument, "flat_torus: periods must be positive");
    MetricFamily f;
    f.kind_ = Kind::FlatTorus;
    f.n_ = static_cast<int>(periods.size());
    f.periods_ = std::move(periods);
    return f;
}

MetricFamily MetricFamily::perturbed_torus(std::vector<double> periods, std::vector<TorusPerturbation> terms) {
    MetricFamily f = flat_torus(std::move(periods));
    for (const auto& t : terms)
        require(t.i >= 0 && t.j >= 0 && t.axis >= 0 && t.i < f.n_ && t.j < f.n_ && t.axis < f.n_,
                ErrorCode::InvalidArgument, "perturbed_torus: index out of range");
    f.kind_ = Kind::PerturbedTorus;
    f.perturbations_ = std::move(terms);
    return f;
}

MetricFamily MetricFamily::rescaled(const MetricFamily& base, ConformalFactor upsilon) {
    if (upsilon.uses_ambient())
        require(base.is_sphere(), ErrorCode::InvalidArgument, "rescaled: ambient coordinates Xj exist only on spheres");
    MetricFamily f;
    f.kind_ = Kind::ConformalRescaling;
    f.n_ = base.n_;
    f.radius_ = base.radius_;
    f.periods_ = base.periods_;
    f.upsilon_ = std::move(upsilon);
    f.base_ = std::make_shared<const MetricFamily>(base);
    return f;
}

bool MetricFamily::is_sphere() const { return root_of(*this).kind_ == Kind::RoundSphere; }

std::string MetricFamily::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::RoundSphere: os << "round S^" << n_ << " (radius " << radius_ << ")"; break;
        case Kind::FlatTorus: os << "flat T^" << n_; break;
        case Kind::PerturbedTorus: os << "perturbed T^" << n_; break;
        case Kind::ConformalRescaling:
            os << "exp(2*(" << upsilon_.to_string() << "))*[" << base_->describe() << "]";
            break;
    }
    return os.str();
}

std::vector<Jet> MetricFamily::ambient(std::span<const Jet> chart) const {
    require(is_sphere(), ErrorCode::InvalidArgument, "ambient coordinates exist only on sphere families");
    const int n = n_;
    std::vector<Jet> X;
    if (n == 1) {
        X.push_back(cos(chart[0]));
        X.push_back(sin(chart[0]));
        return X;
    }
    Jet prod(chart[0].space(), chart[0].order(), 1.0);
    for (int j = 0; j < n - 1; ++j) {
        X.push_back(prod * cos(chart[j]));
        prod = prod * sin(chart[j]);
    }
    X.push_back(prod * cos(chart[n - 1]));
    X.push_back(prod * sin(chart[n - 1]));
    return X;
}

Jet MetricFamily::evaluate_function(const ConformalFactor& f, std::span<const double> x, const JetSpace& space,
                                    int order) const {
    const auto chart = chart_jets(x, space, order);
    std::vector<Jet> amb;
    if (f.uses_ambient()) amb = ambient(chart);
    return f.evaluate(chart, amb, periods_);
}

JetTensor MetricFamily::metric(std::span<const double> x, const JetSpace& space, int order) const {
    require(static_cast<int>(x.size()) == n_, ErrorCode::ShapeMismatch, "metric: point has wrong dimension");
    JetTensor g(n_, 2, Jet(space, order, 0.0));
    switch (kind_) {
        case Kind::RoundSphere: {
            const auto chart = chart_jets(x, space, order);
            Jet prod(space, order, radius_ * radius_);
            for (int k = 0; k < n_; ++k) {
                g(k, k) = prod;
                if (k < n_ - 1) {
                    const Jet s = sin(chart[k]);
                    prod = prod * (s * s);
                }
            }
            break;
        }
        case Kind::FlatTorus:
            for (int k = 0; k < n_; ++k) g(k, k) = Jet(space, order, 1.0);
            break;
        case Kind::PerturbedTorus: {
            const auto chart = chart_jets(x, space, order);
            for (int k = 0; k < n_; ++k) g(k, k) = Jet(space, order, 1.0);
            for (const auto& t : perturbations_) {
                const Jet arg = chart[t.axis] * (t.wave * 2.0 * std::numbers::pi / periods_[t.axis]);
                const Jet term = (t.sine ? sin(arg) : cos(arg)) * t.amplitude;
                g(t.i, t.j) += term;
                if (t.i != t.j) g(t.j, t.i) += term;
            }
            break;
        }
        case Kind::ConformalRescaling: {
            g = base_->metric(x, space, order);
            const Jet factor = exp(evaluate_function(upsilon_, x, space, order) * 2.0);
            for (auto& c : g.data()) c = c * factor;
            break;
        }
    }
    return g;
}

Eigen::MatrixXd MetricFamily::metric_value(std::span<const double> x) const {
    const auto g = metric(x, JetSpace::get(n_, 0), 0);
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) = g(i, j).value();
    return m;
}

std::vector<Eigen::MatrixXd> MetricFamily::metric_first_partials(std::span<const double> x) const {
    const auto g = metric(x, JetSpace::get(n_, 1), 1);
    std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(n_), Eigen::MatrixXd(n_, n_));
    for (int k = 0; k < n_; ++k)
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) out[k](i, j) = g(i, j).partial(k);
    return out;
}

Eigen::MatrixXd MetricFamily::metric_second_partial(std::span<const double> x, int k, int l) const {
    const auto g = metric(x, JetSpace::get(n_, 2), 2);
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) = g(i, j).partial(k, l);
    return m;
}

double MetricFamily::sqrt_det(std::span<const double> x) const {
    const double det = metric_value(x).determinant();
    require(det > 0.0, ErrorCode::SingularMetric, "metric is not positive definite at the sampled point");
    return std::sqrt(det);
}

bool MetricFamily::zonal() const {
    switch (kind_) {
        case Kind::RoundSphere: return n_ >= 2;
        case Kind::ConformalRescaling: return base_->zonal() && upsilon_.zonal();
        default: return false;
    }
}

bool MetricFamily::depends_on(int i) const {
    switch (kind_) {
        case Kind::RoundSphere: return true;
        case Kind::FlatTorus: return false;
        case Kind::PerturbedTorus:
            for (const auto& t : perturbations_)
                if (t.axis == i) return true;
            return false;
        case Kind::ConformalRescaling: return base_->depends_on(i) || upsilon_.depends_on_chart(i);
    }
    return true;
}

int MetricFamily::euler_characteristic() const {
    if (is_sphere()) return (n_ % 2 == 0) ? 2 : 0;
    return 0;
}

std::optional<double> MetricFamily::constant_curvature() const {
    switch (kind_) {
        case Kind::RoundSphere: return 1.0 / (radius_ * radius_);
        case Kind::FlatTorus: return 0.0;
        case Kind::PerturbedTorus: return std::nullopt;
        case Kind::ConformalRescaling: {
            if (!upsilon_.is_constant()) return std::nullopt;
            auto c = base_->constant_curvature();
            if (!c) return std::nullopt;
            double tau = 0.0;
            for (const auto& t : upsilon_.terms()) tau += t.coeff;
            return *c * std::exp(-2.0 * tau);
        }
    }
    return std::nullopt;
}

QuadratureGrid MetricFamily::quadrature_grid(int nodes, bool reduce) const {
    require(nodes >= 1, ErrorCode::InvalidArgument, "quadrature_grid: node count must be positive");
    std::vector<Axis> axes;
    if (is_sphere()) {
        if (n_ == 1) {
            axes.push_back(Axis::periodic(nodes, 2.0 * std::numbers::pi));
        } else if (reduce && zonal()) {
            axes.push_back(Axis::legendre(nodes, 0.0, std::numbers::pi));
            for (int j = 1; j < n_ - 1; ++j) axes.push_back(Axis::fixed(0.5 * std::numbers::pi, 1.0));
            axes.push_back(Axis::fixed(0.0, unit_sphere_area(n_ - 1)));
        } else {
            for (int j = 0; j < n_ - 1; ++j) axes.push_back(Axis::legendre(nodes, 0.0, std::numbers::pi));
            axes.push_back(Axis::periodic(nodes, 2.0 * std::numbers::pi));
        }
        return QuadratureGrid(std::move(axes));
    }
    for (int i = 0; i < n_; ++i) {
        if (reduce && !depends_on(i))
            axes.push_back(Axis::fixed(0.0, periods_[i]));
        else
            axes.push_back(Axis::periodic(nodes, periods_[i]));
    }
    return QuadratureGrid(std::move(axes));
}

double integrate_scalar(const ScalarField& f, const MetricFamily& family, const QuadratureGrid& grid) {
    require(f.shape == grid.shape() && f.values.size() == grid.size(), ErrorCode::ShapeMismatch,
            "integrate_scalar: field shape does not match the quadrature grid");
    require(grid.dim() == family.dim(), ErrorCode::ShapeMismatch, "integrate_scalar: grid dimension mismatch");
    std::vector<double> terms(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const auto x = grid.point(p);
        terms[p] = grid.weight(p) * f.values[p] * family.sqrt_det(x);
    }
    return pairwise_sum(terms);
}

double volume(const MetricFamily& family, const QuadratureGrid& grid) {
    ScalarField one{grid.shape(), std::vector<double>(grid.size(), 1.0)};
    return integrate_scalar(one, family, grid);
}

double unit_sphere_area(int k) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

}  // namespace renorm
