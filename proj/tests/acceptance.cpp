// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance <path to renorm_cli>

#include "renorm/area.hpp"
#include "renorm/curvature.hpp"
#include "renorm/error.hpp"
#include "renorm/fg_expansion.hpp"
#include "renorm/gauge.hpp"
#include "renorm/volume.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace renorm;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!ok || detail.tellp() < 240) detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [fail]");
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

void c1_volumes(Outcome& o) {
    for (int n : {1, 3, 5}) {
        const auto t0 = std::chrono::steady_clock::now();
        const VolumeResult r = renormalized_volume(NormalForm::hyperbolic(n));
        const double t = seconds_since(t0);
        const double e = rel(r.V_subtraction, hyperbolic_reference(n));
        o.require(e < 1e-6 && t < 10.0, "n=" + std::to_string(n) + " rel " + sci(e) + " in " + sci(t) + " s");
    }
}

void c2_log_coefficients(Outcome& o) {
    for (int n : {2, 4, 6}) {
        const VolumeResult r = renormalized_volume(NormalForm::hyperbolic(n));
        const double e = rel(*r.fit.L(), hyperbolic_reference(n));
        o.require(e < 1e-5, "n=" + std::to_string(n) + " rel " + sci(e));
    }
}

void c3_identities(Outcome& o) {
    const double expect[] = {-2 * pi, pi * pi, -std::pow(pi, 3) / 3};
    int i = 0;
    for (int n : {2, 4, 6}) {
        const LIdentitySides s = L_identity_sides(MetricFamily::round_sphere(n, 1.0), n, 24);
        const double e = rel(s.L_identity, s.L_direct);
        const double c = rel(s.L_direct, expect[i++]);
        o.require(e < 1e-5 && c < 1e-5, "n=" + std::to_string(n) + " routes " + sci(e) + ", closed form " + sci(c));
    }
}

void c4_gauss_bonnet(Outcome& o) {
    const auto s4 = MetricFamily::round_sphere(4, 1.0);
    const GaussBonnetSides gb = gauss_bonnet_sides(s4, 24);
    o.require(rel(gb.rhs, gb.lhs) < 1e-5, "S4 rel " + sci(rel(gb.rhs, gb.lhs)));
    const GaussBonnetSides t4 = gauss_bonnet_sides(MetricFamily::flat_torus(std::vector<double>(4, 2 * pi)), 8);
    o.require(t4.lhs == 0.0 && std::abs(t4.rhs) < 1e-8, "T4 |rhs| " + sci(std::abs(t4.rhs)));
    const auto ups = ConformalFactor::parse("0.1*cos(x1) + 0.05*cos(2*x1)");
    const GaussBonnetSides r = gauss_bonnet_sides(MetricFamily::rescaled(s4, ups), 32);
    o.require(rel(r.rhs, gb.rhs) < 1e-5, "rescaled rel " + sci(rel(r.rhs, gb.rhs)));
}

void c5_fg(Outcome& o) {
    // (1/4) round S^3: g_r = (1 - r^2)^2 g0
    const auto S3 = MetricFamily::round_sphere(3, 0.5);
    const QuadratureGrid grid = S3.quadrature_grid(6);
    FgOptions opt;
    opt.allow_free_data = true;
    double worst = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const PowerSeriesMetric ps = fg_expand(S3, grid.point(p), 4, opt);
        const double factor[] = {1.0, 0.0, -2.0, 0.0, 1.0};
        for (int j = 0; j <= 4; ++j)
            for (std::size_t c = 0; c < ps.g[j].size(); ++c)
                worst = std::max(worst, std::abs(ps.g[j][c] - factor[j] * ps.g[0][c]));
    }
    o.require(worst < 1e-8, "S3 through order 4: " + sci(worst));
    double odd = 0.0, schouten = 0.0;
    for (int n = 3; n <= 6; ++n) {
        std::vector<TorusPerturbation> terms{{0, 0, 0.15, 1, 1, false}, {1, 1, 0.1, 0, 1, true},
                                             {0, 2, 0.06, 1, 2, true}};
        const auto T = MetricFamily::perturbed_torus(std::vector<double>(n, 2 * pi), terms);
        const std::vector<double> x(n, 0.7);
        const PowerSeriesMetric ps = fg_expand(T, x, n - 1);
        const CurvaturePack pack = curvature_pack(T, x);
        for (std::size_t c = 0; c < pack.P().size(); ++c)
            schouten = std::max(schouten, std::abs(ps.g[2][c] + pack.P()[c]));
        for (int j = 1; j < n; j += 2)
            for (double v : ps.g[j].data()) odd = std::max(odd, std::abs(v));
    }
    o.require(odd < 1e-9, "odd orders below n: " + sci(odd));
    o.require(schouten < 1e-8, "g(2) + P, n = 3..6: " + sci(schouten));
}

void c6_gauge_invariance(Outcome& o) {
    const auto ups = ConformalFactor::parse("0.1*X1");
    for (int n : {2, 3, 4}) {
        const GaugeComparison c = gauge_comparison(NormalForm::hyperbolic(n), ups);
        const double d = n % 2 == 1 ? c.delta_V() : c.delta_L();
        o.require(std::abs(d) < 5e-5, std::string(n % 2 ? "dV" : "dL") + " n=" + std::to_string(n) + " " + sci(d));
    }
}

void c7_volume_anomaly(Outcome& o) {
    const auto S2 = MetricFamily::round_sphere(2, 0.5);
    for (const char* u : {"0.1*X1", "0.05*X1^2 - 0.02*X1", "0.05*X1*X2 + 0.03*X3"}) {
        const AnomalyReport a = volume_anomaly(S2, ConformalFactor::parse(u), 2);
        const double d = a.discrepancy.value_or(INFINITY);
        o.require(d < 1e-4, std::string(u) + " " + sci(d));
    }
}

void c8_evenness(Outcome& o) {
    const auto ups = ConformalFactor::parse("0.1*X1 + 0.04*X2^2");
    for (int n : {2, 3, 4}) {
        const NormalForm nf = NormalForm::hyperbolic(n);
        const QuadratureGrid grid = nf.boundary().quadrature_grid(n == 4 ? 8 : 16, false);
        const OmegaField w = solve_special_defining(nf, ups, grid);
        double worst = 0.0;
        for (std::size_t p = 0; p < grid.size(); ++p)
            for (double d : odd_r_derivatives(w, p, n + 1)) worst = std::max(worst, std::abs(d));
        o.require(worst < 1e-6, "n=" + std::to_string(n) + " " + sci(worst));
    }
}

void c9_areas(Outcome& o) {
    const AreaFit d = renormalized_area(totally_geodesic(0, 2));
    o.require(std::abs(*d.K() - 2.0) < 1e-8 && std::abs(d.A()) < 1e-8,
              "diameter K-2 " + sci(*d.K() - 2.0) + ", A " + sci(d.A()));
    const AreaFit p = renormalized_area(totally_geodesic(1, 2));
    o.require(std::abs(p.A() + 2 * pi) < 1e-6, "H2 A+2pi " + sci(p.A() + 2 * pi));
    const AreaFit h = renormalized_area(totally_geodesic(2, 3));
    const double ef = rel(*h.K(), -2 * pi), eq = rel(*h.K_form, -2 * pi), ea = rel(*h.K(), *h.K_form);
    o.require(ef < 1e-5 && eq < 1e-5 && ea < 1e-5, "H3 K fit " + sci(ef) + ", quadrature " + sci(eq));
}

void c10_area_anomaly(Outcome& o) {
    const std::vector<double> a{0.3, 0.2}, b{1.5, 2.0};
    const MinimalGraph g = geodesic_between(2, a, b);
    const AreaAnomalyReport r = area_anomaly(g, ConformalFactor::parse("0.1*X1"));
    const double sum = 0.1 * (std::cos(a[0]) + std::cos(b[0]));
    const double d = std::abs(r.gauge_change.value_or(INFINITY) - sum);
    o.require(d < 1e-5, "k=0 gauge route vs sum " + sci(d));
    AreaOptions opt;
    opt.gauge_nodes = 12;
    const MinimalGraph Y = totally_geodesic(2, 3, 16);
    const double tau = 0.1;
    const AreaAnomalyReport c = area_anomaly(Y, ConformalFactor::constant(tau), opt);
    const double K = k2_log_coefficient(submanifold_geometry(*Y.boundary(), MetricFamily::round_sphere(3, 0.5)));
    const double e = std::abs(c.gauge_change.value_or(INFINITY) - K * tau);
    o.require(e < 1e-6, "k=2 constant: gauge route vs K tau " + sci(e));
}

void c11_shooting(Outcome& o) {
    for (double t0 : {pi / 3, 2.2}) {
        const MinimalGraph Y = equivariant_minimal_graph(Embedding::latitude(t0), 2);
        std::vector<double> r;
        for (int j = 1; j <= 400; ++j) r.push_back(Y.r_split() * j / 400);
        const auto u = Y.u(0, r);
        double sup = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) {
            const double x = r[j];
            sup = std::max(sup, std::abs(u[j] - 0.5 * (std::acos(std::cos(t0) * (1 + x * x) / (1 - x * x)) - t0)));
        }
        o.require(sup < 1e-6 && Y.residual() < 1e-8,
                  "theta0=" + sci(t0) + " sup " + sci(sup) + ", residual " + sci(Y.residual()));
    }
}

std::string capture(const std::string& cmd, int& status) {
    std::string out;
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) {
        status = -1;
        return out;
    }
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, got);
    status = pclose(f);
    return out;
}

void c12_determinism(Outcome& o, const std::string& cli) {
    const char* commands[] = {"fg-expand --n 3", "renorm-volume --n 3", "renorm-area --model latitude --n 2 --k 1",
                              "anomaly --n 2", "identities --n 4"};
    for (const char* c : commands) {
        const std::string cmd = "'" + cli + "' " + c + " --format csv 2>/dev/null";
        int s1 = 0, s2 = 0;
        const std::string a = capture(cmd, s1), b = capture(cmd, s2);
        const bool ok = s1 == 0 && s2 == 0 && a == b && a.rfind("quantity,value,crosscheck", 0) == 0;
        o.require(ok, std::string(c) + (a == b ? " identical" : " differs"));
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path to renorm_cli>\n");
        return 2;
    }
    const std::string cli = argv[1];
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
        {"hyperbolic renormalized volumes", c1_volumes},
        {"hyperbolic log coefficients", c2_log_coefficients},
        {"L identities on round spheres", c3_identities},
        {"Gauss-Bonnet in dimension 4", c4_gauss_bonnet},
        {"FG recursion", c5_fg},
        {"gauge invariance of V and L", c6_gauge_invariance},
        {"volume anomaly n = 2", c7_volume_anomaly},
        {"evenness of omega", c8_evenness},
        {"renormalized areas", c9_areas},
        {"area anomaly k = 0, 2", c10_area_anomaly},
        {"equivariant shooting", c11_shooting},
        {"CLI determinism", [&](Outcome& o) { c12_determinism(o, cli); }},
    };
    int failed = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("error: ") + e.what());
        }
        failed += !o.pass;
        std::printf("%s %2d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", ++index, name, seconds_since(t0),
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
