#pragma once

// Normal forms g_+ = r^{-2}(g_r + dr^2) and the change of special defining
// function r -> r_hat = r exp(omega) induced by a boundary rescaling exp(2 Upsilon).

#include "renorm/fg_expansion.hpp"
#include "renorm/manifold.hpp"
#include "renorm/series.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace renorm {

/// g_r at one boundary point.
class LocalNormalForm {
public:
    LocalNormalForm(int n, Eigen::MatrixXd g0, std::optional<PowerSeriesMetric> series);

    [[nodiscard]] int dim() const { return n_; }
    [[nodiscard]] const Eigen::MatrixXd& g0() const { return g0_; }
    [[nodiscard]] Eigen::MatrixXd metric(double r) const;
    [[nodiscard]] Eigen::MatrixXd inverse_metric(double r) const;
    /// (det g_r / det g0)^{1/2}
    [[nodiscard]] double density(double r) const;
    /// Taylor coefficients of the density in r through `degree`.
    [[nodiscard]] Series density_series(int degree) const;

private:
    int n_;
    Eigen::MatrixXd g0_;
    std::optional<PowerSeriesMetric> series_;  // empty: hyperbolic (1 - r^2)^2 g0
};

class NormalForm {
public:
    enum class Kind { Hyperbolic, Series };

    /// g_r = (1 - r^2)^2 g0 with g0 the round metric of radius 1/2 on S^n; domain (0, 1].
    static NormalForm hyperbolic(int n);
    /// Truncated formal expansion of the Einstein normal form with boundary metric g0.
    static NormalForm series(const MetricFamily& g0, int order, double r_max = 1.0, const FgOptions& options = {});

    [[nodiscard]] int dim() const { return boundary_->dim(); }
    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool closed_form() const { return kind_ == Kind::Hyperbolic; }
    [[nodiscard]] double r_max() const { return r_max_; }
    [[nodiscard]] int order() const { return order_; }
    [[nodiscard]] const MetricFamily& boundary() const { return *boundary_; }

    [[nodiscard]] LocalNormalForm at(std::span<const double> x) const;
    [[nodiscard]] Eigen::MatrixXd metric(std::span<const double> x, double r) const { return at(x).metric(r); }

    /// Ball model: r = (1 - |x|)/(1 + |x|) and its inverse.
    static double r_from_ball(double rho) { return (1.0 - rho) / (1.0 + rho); }
    static double ball_from_r(double r) { return (1.0 - r) / (1.0 + r); }

private:
    Kind kind_ = Kind::Hyperbolic;
    std::shared_ptr<const MetricFamily> boundary_;
    double r_max_ = 1.0;
    int order_ = 0;
    FgOptions options_;
};

/// Max |E_ij| of the tangential Einstein operator of a closed-form normal form at (x, r).
double einstein_residual(const NormalForm& nf, std::span<const double> x, double r);

/// Sectional curvatures of g_+ on all coordinate 2-planes at (x, r) (closed-form normal forms).
std::vector<double> sectional_curvatures(const NormalForm& nf, std::span<const double> x, double r);

struct GaugeOptions {
    double step = 1e-3;
    double r_max = 0.3;
    /// Also march towards negative r (used for symmetric differences at r = 0).
    bool both_directions = true;
};

/// omega(x, r) on boundary grid nodes x radial nodes r_i = i * step.
class OmegaField {
public:
    OmegaField(QuadratureGrid grid, ConformalFactor upsilon, double step, int steps, bool negative,
               std::vector<double> values, std::vector<double> slopes);

    [[nodiscard]] const QuadratureGrid& grid() const { return grid_; }
    [[nodiscard]] const ConformalFactor& upsilon() const { return upsilon_; }
    [[nodiscard]] double step() const { return step_; }
    [[nodiscard]] int steps() const { return steps_; }
    [[nodiscard]] double r_max() const { return step_ * steps_; }
    [[nodiscard]] bool has_negative() const { return negative_; }

    /// omega at grid node p and radial node i (i may be negative when marched both ways).
    [[nodiscard]] double node(std::size_t p, int i) const;
    [[nodiscard]] double node_slope(std::size_t p, int i) const;
    /// Cubic Hermite interpolation in r.
    [[nodiscard]] double value(std::size_t p, double r) const;
    [[nodiscard]] double slope(std::size_t p, double r) const;
    /// Spectral interpolation in x combined with Hermite interpolation in r.
    [[nodiscard]] double value_at(std::span<const double> x, double r) const;
    [[nodiscard]] double slope_at(std::span<const double> x, double r) const;
    /// Largest r (on the radial nodes) up to which r exp(omega(x_p, r)) is increasing.
    [[nodiscard]] double monotone_limit(std::size_t p) const { return monotone_[p]; }

    /// Max residual of 2 w_r + r (w_r^2 + |d_M w|^2) = 0 over interior nodes, with
    /// w_r from fourth-order differences of the stored values.
    double residual = 0.0;

private:
    [[nodiscard]] std::size_t slot(std::size_t p, int i) const;

    QuadratureGrid grid_;
    ConformalFactor upsilon_;
    double step_;
    int steps_;
    bool negative_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    std::vector<double> monotone_;
};

OmegaField solve_special_defining(const NormalForm& nf, const ConformalFactor& upsilon, const QuadratureGrid& grid,
                                  const GaugeOptions& options = {});

/// Odd r-derivatives of omega at r = 0 (orders 1, 3, ... <= max_order) at grid node p,
/// from the odd part (omega(r) - omega(-r))/2 sampled at multiples of `spacing`.
std::vector<double> odd_r_derivatives(const OmegaField& omega, std::size_t p, int max_order, double spacing = 0.02);

/// r_hat = r exp(omega(x_p, r)).
double r_hat(const OmegaField& omega, std::size_t p, double r);
/// eps_hat(x_p, eps): the r with r exp(omega(x_p, r)) = eps, so {r_hat > eps} = {r > eps_hat}.
double epsilon_hat(const OmegaField& omega, std::size_t p, double eps);
/// Same at an arbitrary boundary point.
double epsilon_hat_at(const OmegaField& omega, std::span<const double> x, double eps);

}  // namespace renorm
