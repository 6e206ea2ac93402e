#pragma once

// Formal expansion g_r = g0 + g(1) r + g(2) r^2 + ... (+ h r^n log r for n even)
// of the boundary family of an Einstein metric r^{-2}(g_r + dr^2), determined
// order by order from the tangential Einstein equations.

#include "renorm/curvature.hpp"
#include "renorm/manifold.hpp"
#include "renorm/series.hpp"
#include "renorm/tensor.hpp"

#include <optional>
#include <span>
#include <vector>

namespace renorm {

enum class Determinacy { Determined, Free, TraceDeterminedOnly, ConditionallyDetermined };

const char* determinacy_name(Determinacy d) noexcept;

struct FgOptions {
    /// For odd n, continue past order n with the free trace-free part of
    /// g(n) set to zero. Later coefficients are flagged ConditionallyDetermined.
    bool allow_free_data = false;
};

struct PowerSeriesMetric {
    int n = 0;
    int order = 0;
    std::vector<Tensor> g;  // g[j] = g(j), j = 0..order
    std::vector<Determinacy> flags;
    std::optional<Tensor> h;  // r^n log r coefficient (n even, order >= n)
    /// Max |coefficient| of the tangential Einstein residual through r^(order-1).
    double residual = 0.0;
    /// n odd, order >= n: size of the trace part that had to vanish at order n.
    double odd_trace_defect = 0.0;

    [[nodiscard]] MatrixSeries matrix_series() const;
    /// g_r at radius r (including the log term when present).
    [[nodiscard]] Eigen::MatrixXd evaluate(double r) const;
};

PowerSeriesMetric fg_expand(const MetricFamily& g0, std::span<const double> x, int order,
                            const FgOptions& options = {});

/// Expansion at every node of a grid.
struct PowerSeriesField {
    QuadratureGrid grid;
    int n = 0;
    int order = 0;
    std::vector<PowerSeriesMetric> points;

    [[nodiscard]] double max_residual() const;
    /// Max over nodes and components of |g(j)|.
    [[nodiscard]] double max_coefficient(int j) const;
};

PowerSeriesField fg_expand(const MetricFamily& g0, const QuadratureGrid& grid, int order,
                           const FgOptions& options = {});

/// Tangential Einstein residual of an arbitrary r-family given as jets in
/// (x_1..x_n, r): r * [r g'' + (1-n) g' - tr(g^-1 g') g - r g' g^-1 g'
/// + (r/2) tr(g^-1 g') g' - 2 r Ric(g_r)], same jet order as g.
JetTensor einstein_residual_jets(const JetTensor& g);

struct VolumeSeries {
    int n = 0;
    int order = 0;
    std::vector<double> v;                      // v[j], coefficient of r^j in (det g_r / det g0)^{1/2}
    std::vector<std::optional<double>> closed;  // closed-form values where printed (j = 2, 4, 6)
    double discrepancy = 0.0;                   // max |v[j] - closed[j]| over available j

    /// v(j); raises InsufficientOrder when j exceeds the truncation order.
    [[nodiscard]] double coefficient(int j) const;
};

/// Determinant route only.
VolumeSeries volume_series(const PowerSeriesMetric& ps);
/// Both routes; `pack` is the curvature of g0 at the same point.
VolumeSeries volume_series(const PowerSeriesMetric& ps, const CurvaturePack& pack);

/// Closed forms v(2), v(4), v(6) where they apply for this n.
std::vector<std::optional<double>> volume_coefficients_closed(const CurvaturePack& pack, int order);

}  // namespace renorm
