#include "renorm/quadrature.hpp"

#include "renorm/error.hpp"

#include <cmath>
#include <numbers>

namespace renorm {

Rule gauss_legendre(int count, double a, double b) {
    require(count >= 1, ErrorCode::InvalidArgument, "gauss_legendre: need at least one node");
    Rule rule;
    rule.nodes.resize(count);
    rule.weights.resize(count);
    const double mid = 0.5 * (b + a);
    const double half = 0.5 * (b - a);
    const int m = (count + 1) / 2;
    for (int i = 1; i <= m; ++i) {
        double z = std::cos(std::numbers::pi * (i - 0.25) / (count + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= count; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = count * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) {
                // one more pass for the derivative at the converged node
                p1 = 1.0;
                p2 = 0.0;
                for (int j = 1; j <= count; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
                }
                pp = count * (z * p1 - p2) / (z * z - 1.0);
                break;
            }
        }
        rule.nodes[i - 1] = mid - half * z;
        rule.nodes[count - i] = mid + half * z;
        rule.weights[i - 1] = 2.0 * half / ((1.0 - z * z) * pp * pp);
        rule.weights[count - i] = rule.weights[i - 1];
    }
    return rule;
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Axis Axis::legendre(int count, double lo, double hi) {
    Rule r = gauss_legendre(count, lo, hi);
    return Axis{Kind::Legendre, lo, hi, std::move(r.nodes), std::move(r.weights)};
}

Axis Axis::periodic(int count, double period) {
    require(count >= 1, ErrorCode::InvalidArgument, "periodic axis: need at least one node");
    Axis ax{Kind::Periodic, 0.0, period, {}, {}};
    for (int j = 0; j < count; ++j) {
        ax.nodes.push_back(period * j / count);
        ax.weights.push_back(period / count);
    }
    return ax;
}

Axis Axis::fixed(double node, double weight) { return Axis{Kind::Fixed, node, node, {node}, {weight}}; }

Eigen::MatrixXd Axis::differentiation() const {
    const int n = size();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    if (kind == Kind::Fixed || n == 1) return d;
    if (kind == Kind::Periodic) {
        const double scale = 2.0 * std::numbers::pi / (hi - lo);
        const double h = 2.0 * std::numbers::pi / n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const double t = 0.5 * (i - j) * h;
                const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
                d(i, j) = scale * 0.5 * sign * ((n % 2 == 0) ? 1.0 / std::tan(t) : 1.0 / std::sin(t));
            }
        return d;
    }
    // Barycentric polynomial differentiation through the Legendre nodes.
    const double c = 4.0 / (hi - lo);
    std::vector<double> w(n, 1.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (k != j) w[j] /= c * (nodes[j] - nodes[k]);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            d(i, j) = (w[j] / w[i]) / (nodes[i] - nodes[j]);
            diag -= d(i, j);
        }
        d(i, i) = diag;
    }
    return d;
}

std::vector<double> Axis::interpolation_row(double x) const {
    const int n = size();
    std::vector<double> row(n, 0.0);
    if (kind == Kind::Fixed || n == 1) {
        row[0] = 1.0;
        return row;
    }
    if (kind == Kind::Periodic) {
        const double scale = 2.0 * std::numbers::pi / (hi - lo);
        for (int j = 0; j < n; ++j) {
            const double t = scale * (x - nodes[j]);
            const double s = std::sin(0.5 * t);
            if (std::abs(s) < 1e-14) {
                row.assign(n, 0.0);
                row[j] = 1.0;
                return row;
            }
            row[j] = (n % 2 == 0) ? std::sin(0.5 * n * t) / (n * std::tan(0.5 * t))
                                  : std::sin(0.5 * n * t) / (n * s);
        }
        return row;
    }
    const double c = 4.0 / (hi - lo);
    std::vector<double> w(n, 1.0);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if (k != j) w[j] /= c * (nodes[j] - nodes[k]);
    double denom = 0.0;
    for (int j = 0; j < n; ++j) {
        const double diff = x - nodes[j];
        if (std::abs(diff) < 1e-15) {
            row.assign(n, 0.0);
            row[j] = 1.0;
            return row;
        }
        row[j] = w[j] / diff;
        denom += row[j];
    }
    for (auto& v : row) v /= denom;
    return row;
}

QuadratureGrid::QuadratureGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    size_ = 1;
    strides_.assign(axes_.size(), 1);
    for (int a = static_cast<int>(axes_.size()) - 1; a >= 0; --a) {
        strides_[a] = size_;
        size_ *= static_cast<std::size_t>(axes_[a].size());
    }
    for (const auto& ax : axes_) diff_.push_back(ax.differentiation());
}

std::vector<int> QuadratureGrid::shape() const {
    std::vector<int> s;
    for (const auto& ax : axes_) s.push_back(ax.size());
    return s;
}

std::vector<int> QuadratureGrid::multi_index(std::size_t p) const {
    std::vector<int> idx(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        idx[a] = static_cast<int>(p / strides_[a]);
        p %= strides_[a];
    }
    return idx;
}

std::vector<double> QuadratureGrid::point(std::size_t p) const {
    const auto idx = multi_index(p);
    std::vector<double> x(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) x[a] = axes_[a].nodes[idx[a]];
    return x;
}

double QuadratureGrid::weight(std::size_t p) const {
    const auto idx = multi_index(p);
    double w = 1.0;
    for (std::size_t a = 0; a < axes_.size(); ++a) w *= axes_[a].weights[idx[a]];
    return w;
}

bool QuadratureGrid::reduced() const {
    for (const auto& ax : axes_)
        if (ax.kind == Axis::Kind::Fixed) return true;
    return false;
}

std::vector<double> QuadratureGrid::differentiate(std::span<const double> field, int axis) const {
    require(field.size() == size_, ErrorCode::ShapeMismatch, "differentiate: field does not match grid");
    std::vector<double> out(size_, 0.0);
    const auto& d = diff_[axis];
    const std::size_t stride = strides_[axis];
    const int n = axes_[axis].size();
    for (std::size_t p = 0; p < size_; ++p) {
        const int i = static_cast<int>((p / stride) % static_cast<std::size_t>(n));
        const std::size_t base = p - static_cast<std::size_t>(i) * stride;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += d(i, j) * field[base + static_cast<std::size_t>(j) * stride];
        out[p] = acc;
    }
    return out;
}

double QuadratureGrid::interpolate(std::span<const double> field, std::span<const double> x) const {
    require(field.size() == size_, ErrorCode::ShapeMismatch, "interpolate: field does not match grid");
    // Contract one axis at a time, last axis first.
    std::vector<double> cur(field.begin(), field.end());
    for (int a = dim() - 1; a >= 0; --a) {
        const auto row = axes_[a].interpolation_row(x[a]);
        const std::size_t n = row.size();
        std::vector<double> next(cur.size() / n, 0.0);
        for (std::size_t q = 0; q < next.size(); ++q) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * cur[q * n + j];
            next[q] = acc;
        }
        cur = std::move(next);
    }
    return cur[0];
}

}  // namespace renorm
