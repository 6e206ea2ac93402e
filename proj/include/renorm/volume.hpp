#pragma once

// Vol({r > eps}) for normal forms, extraction of V and L, gauge invariance
// and the conformal anomaly of V.

#include "renorm/fit.hpp"
#include "renorm/gauge.hpp"
#include "renorm/manifold.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace renorm {

struct VolumeOptions {
    int nodes = 48;         // boundary quadrature nodes per axis
    double r0 = 0.5;        // inner region r > r0 is integrated once
    int gl_nodes = 16;      // per radial panel
    int max_panels = 40;    // dyadic panels below r0; sets the smallest admissible eps
    double eps_hi = 0.1;
    double eps_lo = 0.1 * std::pow(0.75, 23);
    int eps_count = 24;
    int tail = -1;          // positive powers in the fit basis; negative selects automatically
    double max_condition = 1e10;
    double series_radius = 0.1;  // subtraction route: density series below this radius
    int series_terms = 40;       // Taylor degree beyond n used there
    GaugeOptions gauge;

    [[nodiscard]] std::vector<double> eps() const { return epsilon_grid(eps_hi, eps_lo, eps_count); }
};

/// Per-node radial data of a normal form over a boundary grid.
class VolumeModel {
public:
    VolumeModel(const NormalForm& nf, const QuadratureGrid& grid, const VolumeOptions& options = {});

    [[nodiscard]] int dim() const { return n_; }
    [[nodiscard]] const NormalForm& normal_form() const { return nf_; }
    [[nodiscard]] const QuadratureGrid& grid() const { return grid_; }
    [[nodiscard]] const LocalNormalForm& local(std::size_t p) const { return local_[p]; }

    /// Smallest admissible lower limit.
    [[nodiscard]] double resolution() const;
    /// int_a^{r_max} r^{-n-1} rho_p(r) dr.
    [[nodiscard]] double radial(std::size_t p, double a) const;
    /// The cached inner constant int_{r0}^{r_max} at node p.
    [[nodiscard]] double inner(std::size_t p) const { return inner_[p]; }
    /// Integral over M of radial(p, lower[p]) dv_g.
    [[nodiscard]] double integrate(std::span<const double> lower) const;
    /// Integral over M of a per-node quantity.
    [[nodiscard]] double integrate_nodes(std::span<const double> values) const;

    /// Taylor coefficients v(j) of the density at node p (degree n + series_terms).
    [[nodiscard]] const Series& density_series(std::size_t p) const { return series_[p]; }
    /// Finite part of int_eps^{r_max} r^{-n-1} rho_p dr as eps -> 0.
    [[nodiscard]] double finite_part(std::size_t p) const;

private:
    NormalForm nf_;
    QuadratureGrid grid_;
    VolumeOptions opt_;
    int n_;
    std::vector<LocalNormalForm> local_;
    std::vector<double> inner_;
    std::vector<std::vector<double>> panels_;  // panels_[p][k] = int over [r0 2^{-k-1}, r0 2^{-k}]
    std::vector<Series> series_;
    Rule unit_rule_;

    [[nodiscard]] double gl(std::size_t p, double a, double b) const;
};

struct VolumeProfile {
    std::vector<double> eps;
    std::vector<double> samples;  // Vol({r > eps}) or Vol({r_hat > eps})
    double inner = 0.0;           // integral over r > r0
};

/// With a gauge, the region is {r_hat > eps} = {r > eps_hat(x, eps)}.
VolumeProfile volume_profile(const VolumeModel& model, std::span<const double> eps,
                             const OmegaField* gauge = nullptr);

struct EpsilonFit {
    int n = 0;
    std::vector<double> eps;
    std::vector<double> samples;
    FitBasis basis;
    FitResult fit;

    [[nodiscard]] double V() const { return fit.constant; }
    [[nodiscard]] std::optional<double> L() const { return fit.log_coefficient; }
    /// Coefficient of eps^power.
    [[nodiscard]] double coefficient(double power) const;
};

/// Fits Vol = sum_j c_j eps^{-n+2j} (+ L log(1/eps) for n even) + V + tail.
/// A negative `tail` picks the tail length with the smallest refit uncertainty.
EpsilonFit fit_volume(int n, std::span<const double> eps, std::span<const double> samples, int tail,
                      double max_condition = 1e10);

struct VolumeResult {
    int n = 0;
    EpsilonFit fit;
    double V_subtraction = 0.0;
    std::optional<double> L_direct;  // int v(n) dv_g
    double boundary_volume = 0.0;    // Vol_g(M)
    double c0_expected = 0.0;        // Vol_g(M) / n
};

VolumeResult renormalized_volume(const NormalForm& nf, const VolumeOptions& options = {});

/// V (n odd) or L (n even) of hyperbolic space in closed form.
double hyperbolic_reference(int n);

struct GaugeComparison {
    int n = 0;
    std::string upsilon;
    EpsilonFit base;        // Vol({r > eps})
    EpsilonFit gauged;      // Vol({r_hat > eps})
    EpsilonFit difference;  // Vol({r_hat > eps}) - Vol({r > eps})
    double omega_residual = 0.0;
    /// Change of the finite part and of the log coefficient read off the difference.
    [[nodiscard]] double delta_V() const { return difference.V(); }
    [[nodiscard]] double delta_L() const { return difference.L().value_or(0.0); }
};

GaugeComparison gauge_comparison(const NormalForm& nf, const ConformalFactor& upsilon,
                                 const VolumeOptions& options = {});

struct AnomalyReport {
    int n = 0;
    std::string upsilon;
    double anomaly_integral = 0.0;  // int P_g(Upsilon) dv_g
    std::optional<double> V_g;
    std::optional<double> V_ghat;
    std::optional<double> discrepancy;  // |(V_ghat - V_g) - anomaly_integral|
};

/// Anomaly integrand P_g(Upsilon) at a point, n = 2 or 4.
double anomaly_density(const MetricFamily& g, const ConformalFactor& upsilon, int n, std::span<const double> x);

/// When g is the boundary of the hyperbolic normal form, V_ghat - V_g is also computed through the gauge change.
AnomalyReport volume_anomaly(const MetricFamily& g, const ConformalFactor& upsilon, int n,
                             const VolumeOptions& options = {});

struct LIdentitySides {
    double L_direct = 0.0;    // int v(n) dv_g
    double L_identity = 0.0;  // Euler characteristic plus local conformal invariant
    int chi = 0;
    double invariant_integral = 0.0;  // int |W|^2 (n = 4), int J (n = 6), 0 (n = 2)
};

LIdentitySides L_identity_sides(const MetricFamily& g, int n, int nodes = 48);

}  // namespace renorm
