#pragma once

// Closed-form boundary metrics on compact M and integration over M.

#include "renorm/conformal_factor.hpp"
#include "renorm/quadrature.hpp"
#include "renorm/tensor.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace renorm {

/// g_ij += amplitude * trig(2 pi wave x_axis / L_axis) (and g_ji for i != j).
struct TorusPerturbation {
    int i = 0;
    int j = 0;
    double amplitude = 0.0;
    int axis = 0;
    int wave = 1;
    bool sine = false;
};

class MetricFamily {
public:
    enum class Kind { RoundSphere, FlatTorus, PerturbedTorus, ConformalRescaling };

    /// Sphere of the given radius in the polar chart (theta_1..theta_{n-1}, phi).
    static MetricFamily round_sphere(int n, double radius);
    static MetricFamily flat_torus(std::vector<double> periods);
    static MetricFamily perturbed_torus(std::vector<double> periods, std::vector<TorusPerturbation> terms);
    /// exp(2 Upsilon) * base.
    static MetricFamily rescaled(const MetricFamily& base, ConformalFactor upsilon);

    [[nodiscard]] int dim() const { return n_; }
    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool is_sphere() const;
    [[nodiscard]] std::string describe() const;

    [[nodiscard]] double radius() const { return radius_; }
    [[nodiscard]] const std::vector<double>& periods() const { return periods_; }
    [[nodiscard]] const ConformalFactor& upsilon() const { return upsilon_; }
    [[nodiscard]] const MetricFamily* base() const { return base_.get(); }

    /// Metric components as jets about x. The chart variables are the first
    /// dim() variables of `space`; the jets have the given order.
    [[nodiscard]] JetTensor metric(std::span<const double> x, const JetSpace& space, int order) const;

    [[nodiscard]] Eigen::MatrixXd metric_value(std::span<const double> x) const;
    /// d g_ij / dx^k as matrices indexed by k.
    [[nodiscard]] std::vector<Eigen::MatrixXd> metric_first_partials(std::span<const double> x) const;
    [[nodiscard]] Eigen::MatrixXd metric_second_partial(std::span<const double> x, int k, int l) const;
    [[nodiscard]] double sqrt_det(std::span<const double> x) const;

    /// Ambient unit-sphere coordinates X_1..X_{n+1} as jets (sphere families only).
    [[nodiscard]] std::vector<Jet> ambient(std::span<const Jet> chart) const;

    /// Upsilon evaluated as a jet about x (any expression in the family's function class).
    [[nodiscard]] Jet evaluate_function(const ConformalFactor& f, std::span<const double> x, const JetSpace& space,
                                        int order) const;

    /// Rotation invariance about the X1 axis (sphere families whose rescalings are zonal).
    [[nodiscard]] bool zonal() const;
    /// Whether the metric depends on chart coordinate i (torus families).
    [[nodiscard]] bool depends_on(int i) const;

    [[nodiscard]] int euler_characteristic() const;
    [[nodiscard]] std::optional<double> constant_curvature() const;

    /// Tensor-product quadrature grid. With `reduce`, directions along which
    /// the family is invariant collapse to one representative node.
    [[nodiscard]] QuadratureGrid quadrature_grid(int nodes, bool reduce = true) const;

private:
    Kind kind_ = Kind::FlatTorus;
    int n_ = 0;
    double radius_ = 1.0;
    std::vector<double> periods_;
    std::vector<TorusPerturbation> perturbations_;
    ConformalFactor upsilon_;
    std::shared_ptr<const MetricFamily> base_;
};

/// Samples of a scalar on a quadrature grid.
struct ScalarField {
    std::vector<int> shape;
    std::vector<double> values;
};

/// Samples f(x) at every node of the grid.
template <typename F>
ScalarField sample(const QuadratureGrid& grid, F&& f) {
    ScalarField out{grid.shape(), std::vector<double>(grid.size())};
    for (std::size_t p = 0; p < grid.size(); ++p) out.values[p] = f(grid.point(p));
    return out;
}

/// Integral of f dv_g with the fixed quadrature rule and pairwise reduction.
double integrate_scalar(const ScalarField& f, const MetricFamily& family, const QuadratureGrid& grid);

/// Volume of (M, g).
double volume(const MetricFamily& family, const QuadratureGrid& grid);

/// Area of the unit k-sphere.
double unit_sphere_area(int k);

}  // namespace renorm
