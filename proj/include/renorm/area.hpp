#pragma once

// Boundary submanifolds N of M, minimal fillings Y of the hyperbolic normal
// form, and the expansion of Area(Y ∩ {r > eps}).

#include "renorm/gauge.hpp"
#include "renorm/manifold.hpp"
#include "renorm/volume.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace renorm {

/// A parametrized k-dimensional submanifold in the chart of M.
struct Embedding {
    enum class Kind { EquatorialSphere, Latitude, CoaxialTorus, FlatSubtorus };

    Kind kind = Kind::EquatorialSphere;
    int k = 0;
    int n = 0;
    double angle = 0.0;            // latitude polar angle, or the torus angle a
    std::vector<double> periods;   // flat subtorus: periods of the ambient torus
    std::vector<double> offsets;   // flat subtorus: values of the normal coordinates
    double amplitude = 0.0;        // flat subtorus, k = n - 1: height amplitude * sin(2 pi s_0 / L_0)

    /// {X_1 = ... = X_{n-k} = 0} in S^n, 1 <= k <= n - 1.
    static Embedding equatorial(int k, int n);
    /// {theta = theta0} in S^2.
    static Embedding latitude(double theta0);
    /// {X1^2 + X2^2 = cos^2 a, X3^2 + X4^2 = sin^2 a} in S^3.
    static Embedding coaxial_torus(double a);
    /// The first k torus coordinates, the rest fixed at `offsets`; for k = n - 1
    /// the last coordinate may oscillate with `amplitude`.
    static Embedding flat_subtorus(std::vector<double> periods, int k, std::vector<double> offsets = {},
                                  double amplitude = 0.0);

    /// Chart coordinates of M as functions of the k parameters (jets in those parameters).
    [[nodiscard]] std::vector<Jet> chart(std::span<const Jet> s) const;
    [[nodiscard]] std::vector<double> chart_point(std::span<const double> s) const;
    /// Tensor-product grid on the parameter domain (coordinate measure).
    [[nodiscard]] QuadratureGrid parameter_grid(int nodes) const;
    [[nodiscard]] std::string describe() const;
};

struct SubmanifoldPoint {
    std::vector<double> s;          // parameters
    std::vector<double> x;          // chart point of M
    Eigen::MatrixXd tangent;        // n x k, columns d x / d s^alpha
    Eigen::MatrixXd normal;         // n x (n - k), Gram-Schmidt completion of the tangent frame
    Eigen::MatrixXd induced;        // g_{alpha beta}
    Eigen::MatrixXd normal_metric;  // g_{alpha' beta'} in the normal frame
    std::vector<Eigen::MatrixXd> B;  // B[gamma'](alpha, beta)
    Eigen::VectorXd H;              // H^{gamma'}
    double H2 = 0.0;                // |H|^2
    std::optional<Eigen::MatrixXd> P;  // tangential block of the Schouten tensor (n >= 3)
    std::optional<double> trP;         // g^{alpha beta} P_{alpha beta}
    double weight = 0.0;            // parameter weight times sqrt det g_{alpha beta}
};

struct SubmanifoldPatch {
    Embedding N;
    MetricFamily metric;
    std::vector<SubmanifoldPoint> points;

    [[nodiscard]] int k() const { return N.k; }
    [[nodiscard]] double area() const;
};

/// Raises Immersion when the induced metric degenerates at a node.
SubmanifoldPatch submanifold_geometry(const Embedding& N, const MetricFamily& g, int nodes = 24);

/// -1/8 int_N (|H|^2 + 4 g^{ab} P_ab) da_N; k = 2 only.
double k2_log_coefficient(const SubmanifoldPatch& patch);

/// int_N Q_N(Upsilon) da_N for k = 2.
double k2_anomaly(const SubmanifoldPatch& patch, const ConformalFactor& upsilon);

namespace detail {
class GraphModel;
}

/// A minimal k-submanifold Y of the hyperbolic normal form, stored as radial
/// fibers over boundary points: near M, Y is the graph u(x, r) and each fiber
/// carries the area density of Y per unit boundary measure.
class MinimalGraph {
public:
    enum class Construction { TotallyGeodesic, GeodesicArc, Equivariant };

    explicit MinimalGraph(std::shared_ptr<const detail::GraphModel> model);

    [[nodiscard]] Construction construction() const;
    [[nodiscard]] int k() const;
    [[nodiscard]] int n() const;
    [[nodiscard]] std::string describe() const;
    /// N for k >= 1.
    [[nodiscard]] const std::optional<Embedding>& boundary() const;

    [[nodiscard]] int fibers() const;
    /// Boundary measure carried by fiber f (1 per endpoint when k = 0).
    [[nodiscard]] double weight(int f) const;
    /// Fibers are graphs over r in (0, r_split()].
    [[nodiscard]] double r_split() const;
    /// Area of Y ∩ {r > r_split}.
    [[nodiscard]] double inner() const;
    /// Area density in r of fiber f at the given radii.
    [[nodiscard]] std::vector<double> density(int f, std::span<const double> r) const;
    /// Chart point of M below the fiber point at height r.
    [[nodiscard]] std::vector<double> foot(int f, double r) const;
    /// Signed distance, in g0, of foot(f, r) from foot(f, 0).
    [[nodiscard]] std::vector<double> u(int f, std::span<const double> r) const;

    /// Expansion of u at r = 0 from a least-squares fit on r in (0, 0.05] with
    /// u(0) = 0: entry j < degree + 1 is the coefficient of r^j; for even k the
    /// last entry is the coefficient w of r^{k+2} log r.
    [[nodiscard]] std::vector<double> u_taylor(int f, int degree = 8) const;
    /// Interior residual of the reduced minimal-surface equation (0 for closed forms).
    [[nodiscard]] double residual() const;
    /// Shooting parameter and iteration count (equivariant constructions).
    [[nodiscard]] std::optional<double> shooting_parameter() const;

private:
    std::shared_ptr<const detail::GraphModel> m_;
};

/// Geodesic of the ball model joining boundary points p, q of S^n (chart coordinates).
MinimalGraph geodesic_between(int n, std::span<const double> p, std::span<const double> q);

/// H^{k+1} over the equatorial S^k of S^n (k = 0: the diameter through X_{n+1} = ±1).
MinimalGraph totally_geodesic(int k, int n, int nodes = 24);

struct ShootingOptions {
    double tolerance = 1e-10;  // bisection width on the axis parameter
    double ode_tolerance = 1e-13;
    double axis_offset = 1e-5;
    int max_iterations = 200;
};

/// Rotationally invariant minimal filling of a latitude circle (n = 2) or
/// coaxial torus (n = 3), by shooting from the symmetry axis.
MinimalGraph equivariant_minimal_graph(const Embedding& N, int n, const ShootingOptions& options = {});

struct AreaOptions {
    double eps_hi = 0.1;
    double eps_lo = 0.1 * std::pow(0.75, 23);
    int eps_count = 24;
    int tail = -1;
    double max_condition = 1e10;
    int gl_nodes = 16;
    int max_panels = 40;
    double coeff_lo = 0.01;  // radial window for a^(k)
    double coeff_hi = 0.1;
    int gauge_nodes = 16;    // boundary grid of the eikonal solve
    GaugeOptions gauge;

    [[nodiscard]] std::vector<double> eps() const { return epsilon_grid(eps_hi, eps_lo, eps_count); }
};

/// Area(Y ∩ {r > eps}); with lower limits per fiber when `lower` is given
/// (lower[f][i] replaces eps[i] for fiber f).
std::vector<double> area_profile(const MinimalGraph& Y, std::span<const double> eps, const AreaOptions& options = {},
                                 const std::vector<std::vector<double>>* lower = nullptr);

struct AreaFit {
    int k = 0;
    EpsilonFit fit;
    double boundary_measure = 0.0;  // Area_g(N) (number of endpoints for k = 0)
    std::optional<double> K_form;   // sum over fibers of a^(k) da_N (k even)

    [[nodiscard]] double A() const { return fit.V(); }
    [[nodiscard]] std::optional<double> K() const { return fit.L(); }
    [[nodiscard]] double b0() const { return fit.coefficient(-k); }
};

AreaFit renormalized_area(const MinimalGraph& Y, const AreaOptions& options = {});

/// Coefficients of r^{k+1} * density on [coeff_lo, coeff_hi] by a degree k + 2 fit; entry j is a^(j).
std::vector<double> area_coefficients(const MinimalGraph& Y, int f, const AreaOptions& options = {});

struct AreaAnomalyReport {
    int k = 0;
    std::string upsilon;
    double anomaly = 0.0;                // sum Upsilon(p) (k = 0) or int Q_N (k = 2)
    std::optional<double> gauge_change;  // A_ghat - A_g from the region {r_hat > eps}
    std::optional<double> log_change;    // change of K along the same route
    std::optional<double> discrepancy;
};

/// Gauge route: eps_hat along each fiber from the eikonal solve; available for
/// geodesics and totally geodesic fillings (and constant Upsilon in general).
AreaAnomalyReport area_anomaly(const MinimalGraph& Y, const ConformalFactor& upsilon, const AreaOptions& options = {},
                               bool gauge_route = true);

/// Chart coordinates of a unit vector of R^{n+1} on the polar chart of S^n.
std::vector<double> sphere_chart(std::span<const double> X);

}  // namespace renorm
