#include "renorm/fit.hpp"

#include "renorm/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace renorm {

std::vector<double> epsilon_grid(double hi, double lo, int count) {
    require(count >= 2, ErrorCode::InvalidArgument, "epsilon grid: need at least two points");
    require(lo > 0.0 && hi > lo && std::isfinite(hi), ErrorCode::InvalidArgument,
            "epsilon grid: need 0 < eps_lo < eps_hi");
    std::vector<double> eps(count);
    const double ratio = std::pow(lo / hi, 1.0 / (count - 1));
    for (int i = 0; i < count; ++i) eps[i] = hi * std::pow(ratio, i);
    eps.back() = lo;
    return eps;
}

FitBasis FitBasis::divergent(int d, bool log_term, int tail, int step) {
    require(step >= 1 && tail >= 0, ErrorCode::InvalidArgument, "fit basis: bad step or tail");
    FitBasis b;
    int p = -d;
    for (; p < 0; p += step) b.powers.push_back(p);
    b.powers.push_back(0.0);
    if (p == 0) p += step;
    for (int t = 0; t < tail; ++t, p += step) b.powers.push_back(p);
    b.log_term = log_term;
    b.weight_power = std::max(d, 0);
    return b;
}

std::string FitBasis::describe() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < powers.size(); ++i) os << (i ? ", " : "") << "eps^" << powers[i];
    if (log_term) os << ", log(1/eps)";
    os << "} weighted by eps^" << weight_power;
    return os.str();
}

namespace {

struct Solve {
    Eigen::VectorXd x;
    double condition = 0.0;
    double residual = 0.0;
};

Solve solve(std::span<const double> eps, std::span<const double> samples, const FitBasis& basis,
            const std::vector<int>& rows) {
    const int m = static_cast<int>(rows.size());
    const int c = basis.columns();
    if (m < c) {
        std::ostringstream os;
        os << "fit: " << m << " samples cannot determine " << c << " coefficients";
        fail(ErrorCode::FitDegeneracy, os.str());
    }
    Eigen::MatrixXd A(m, c);
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
        const double e = eps[rows[i]];
        const double w = std::pow(e, basis.weight_power);
        for (std::size_t j = 0; j < basis.powers.size(); ++j) A(i, j) = w * std::pow(e, basis.powers[j]);
        if (basis.log_term) A(i, c - 1) = w * std::log(1.0 / e);
        b(i) = w * samples[rows[i]];
    }
    Eigen::VectorXd scale(c);
    for (int j = 0; j < c; ++j) {
        scale(j) = A.col(j).norm();
        if (scale(j) == 0.0) fail(ErrorCode::FitDegeneracy, "fit: a basis column vanishes on the samples");
        A.col(j) /= scale(j);
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    Solve out;
    out.condition = s(0) / s(c - 1);
    const Eigen::VectorXd y = svd.solve(b);
    out.residual = (A * y - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
    out.x = y.cwiseQuotient(scale);
    return out;
}

}  // namespace

FitResult fit_expansion(std::span<const double> eps, std::span<const double> samples, const FitBasis& basis,
                        double max_condition) {
    require(eps.size() == samples.size(), ErrorCode::ShapeMismatch, "fit: eps and samples differ in length");
    for (double e : eps) require(e > 0.0, ErrorCode::InvalidArgument, "fit: cutoffs must be positive");
    for (double v : samples) require(std::isfinite(v), ErrorCode::InvalidArgument, "fit: non-finite sample");
    const auto zero = std::find(basis.powers.begin(), basis.powers.end(), 0.0);
    require(zero != basis.powers.end(), ErrorCode::InvalidArgument, "fit: basis has no constant term");
    const int ic = static_cast<int>(zero - basis.powers.begin());

    std::vector<int> all(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) all[i] = static_cast<int>(i);
    const Solve full = solve(eps, samples, basis, all);
    if (!(full.condition <= max_condition)) {
        std::ostringstream os;
        os << "fit: design matrix condition number " << full.condition << " exceeds " << max_condition
           << " for basis " << basis.describe();
        fail(ErrorCode::FitDegeneracy, os.str());
    }

    FitResult r;
    r.coeffs.assign(full.x.data(), full.x.data() + full.x.size());
    r.constant = full.x(ic);
    if (basis.log_term) r.log_coefficient = full.x(full.x.size() - 1);
    r.condition = full.condition;
    r.residual = full.residual;

    // Reduced refits: every other sample, and one tail term fewer.
    auto compare = [&](const Solve& s, const FitBasis& b) {
        const auto z = std::find(b.powers.begin(), b.powers.end(), 0.0) - b.powers.begin();
        r.constant_uncertainty = std::max(r.constant_uncertainty, std::abs(s.x(z) - r.constant));
        if (b.log_term)
            r.log_uncertainty = std::max(r.log_uncertainty, std::abs(s.x(s.x.size() - 1) - *r.log_coefficient));
    };
    std::vector<int> half;
    for (std::size_t i = 0; i < eps.size(); i += 2) half.push_back(static_cast<int>(i));
    if (static_cast<int>(half.size()) >= basis.columns()) compare(solve(eps, samples, basis, half), basis);
    if (basis.powers.back() > 0.0) {
        FitBasis fewer = basis;
        fewer.powers.pop_back();
        compare(solve(eps, samples, fewer, all), fewer);
    }
    r.constant_uncertainty *= 2.0;
    r.log_uncertainty *= 2.0;
    return r;
}

}  // namespace renorm
