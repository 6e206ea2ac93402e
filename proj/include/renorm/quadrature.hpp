#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace renorm {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with `count` nodes on [a, b].
Rule gauss_legendre(int count, double a, double b);

/// Pairwise (tree) summation. The reduction order depends only on the length.
double pairwise_sum(std::span<const double> values);

/// One axis of a tensor-product grid in chart coordinates.
struct Axis {
    enum class Kind { Legendre, Periodic, Fixed };

    Kind kind = Kind::Fixed;
    double lo = 0.0;
    double hi = 0.0;  // period end for Periodic
    std::vector<double> nodes;
    std::vector<double> weights;

    static Axis legendre(int count, double lo, double hi);
    static Axis periodic(int count, double period);
    /// A single representative node whose weight is the measure of the
    /// collapsed directions.
    static Axis fixed(double node, double weight);

    [[nodiscard]] int size() const { return static_cast<int>(nodes.size()); }

    /// Spectral differentiation matrix (polynomial for Legendre, trigonometric for Periodic).
    [[nodiscard]] Eigen::MatrixXd differentiation() const;

    /// Row of interpolation weights at x: f(x) ~ sum_j row[j] f(nodes[j]).
    [[nodiscard]] std::vector<double> interpolation_row(double x) const;
};

class QuadratureGrid {
public:
    QuadratureGrid() = default;
    explicit QuadratureGrid(std::vector<Axis> axes);

    [[nodiscard]] int dim() const { return static_cast<int>(axes_.size()); }
    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] const std::vector<Axis>& axes() const { return axes_; }
    [[nodiscard]] std::vector<int> shape() const;

    /// Chart coordinates of point p (row-major, last axis fastest).
    [[nodiscard]] std::vector<double> point(std::size_t p) const;
    /// Product of the axis weights (coordinate measure, without sqrt det g).
    [[nodiscard]] double weight(std::size_t p) const;
    [[nodiscard]] std::vector<int> multi_index(std::size_t p) const;

    /// True when some axis is collapsed to a representative node; such grids
    /// integrate only fields invariant along the collapsed directions.
    [[nodiscard]] bool reduced() const;

    /// d/dx_axis of a field sampled on the grid.
    [[nodiscard]] std::vector<double> differentiate(std::span<const double> field, int axis) const;

    /// Spectral interpolation of a grid field at an arbitrary chart point.
    [[nodiscard]] double interpolate(std::span<const double> field, std::span<const double> x) const;

private:
    std::vector<Axis> axes_;
    std::vector<std::size_t> strides_;
    std::size_t size_ = 0;
    std::vector<Eigen::MatrixXd> diff_;
};

}  // namespace renorm
