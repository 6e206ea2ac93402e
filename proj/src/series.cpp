#include "renorm/series.hpp"

#include "renorm/error.hpp"

#include <algorithm>
#include <cmath>

namespace renorm {

Series::Series(int degree, double constant) : c_(static_cast<std::size_t>(degree) + 1, 0.0) {
    c_[0] = constant;
}

Series::Series(std::vector<double> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(0.0);
}

Series Series::truncated(int degree) const {
    std::vector<double> c(c_.begin(), c_.begin() + std::min<std::size_t>(c_.size(), degree + 1));
    c.resize(static_cast<std::size_t>(degree) + 1, 0.0);
    return Series(std::move(c));
}

double Series::evaluate(double r) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + *it;
    return acc;
}

Series Series::derivative() const {
    if (c_.size() == 1) return Series(0);
    std::vector<double> d(c_.size() - 1);
    for (std::size_t j = 1; j < c_.size(); ++j) d[j - 1] = static_cast<double>(j) * c_[j];
    return Series(std::move(d));
}

Series Series::integral() const {
    std::vector<double> s(c_.size() + 1, 0.0);
    for (std::size_t j = 0; j < c_.size(); ++j) s[j + 1] = c_[j] / static_cast<double>(j + 1);
    return Series(std::move(s));
}

Series& Series::operator+=(const Series& o) {
    const auto m = std::min(c_.size(), o.c_.size());
    c_.resize(m);
    for (std::size_t j = 0; j < m; ++j) c_[j] += o.c_[j];
    return *this;
}

Series& Series::operator-=(const Series& o) {
    const auto m = std::min(c_.size(), o.c_.size());
    c_.resize(m);
    for (std::size_t j = 0; j < m; ++j) c_[j] -= o.c_[j];
    return *this;
}

Series& Series::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

Series operator*(const Series& a, const Series& b) {
    const int m = std::min(a.degree(), b.degree());
    Series out(m);
    for (int k = 0; k <= m; ++k) {
        double acc = 0.0;
        for (int i = 0; i <= k; ++i) acc += a[i] * b[k - i];
        out[k] = acc;
    }
    return out;
}

Series reciprocal(const Series& a) {
    require(a[0] != 0.0, ErrorCode::InvalidArgument, "series reciprocal: zero constant term");
    const int m = a.degree();
    Series b(m);
    b[0] = 1.0 / a[0];
    for (int k = 1; k <= m; ++k) {
        double acc = 0.0;
        for (int i = 1; i <= k; ++i) acc += a[i] * b[k - i];
        b[k] = -acc * b[0];
    }
    return b;
}

Series operator/(const Series& a, const Series& b) { return a * reciprocal(b); }

Series exp(const Series& a) {
    const int m = a.degree();
    Series e(m);
    e[0] = std::exp(a[0]);
    for (int k = 1; k <= m; ++k) {
        double acc = 0.0;
        for (int i = 1; i <= k; ++i) acc += i * a[i] * e[k - i];
        e[k] = acc / k;
    }
    return e;
}

Series log(const Series& a) {
    require(a[0] > 0.0, ErrorCode::Domain, "series log: non-positive constant term");
    if (a.degree() == 0) return Series(0, std::log(a[0]));
    Series l = (a.derivative() / a.truncated(a.degree() - 1)).integral();
    l[0] = std::log(a[0]);
    return l;
}

Series pow(const Series& a, double p) { return exp(log(a) * p); }

Series sqrt(const Series& a) { return pow(a, 0.5); }

std::vector<double> atan_taylor(double x0, int degree) {
    if (degree == 0) return {std::atan(x0)};
    std::vector<double> s(static_cast<std::size_t>(degree), 0.0);
    s[0] = x0;
    if (degree > 1) s[1] = 1.0;
    Series x(std::move(s));
    Series q = (reciprocal(x * x + Series(degree - 1, 1.0))).integral();
    q[0] = std::atan(x0);
    return q.coeffs();
}

std::vector<double> acos_taylor(double x0, int degree) {
    require(std::abs(x0) < 1.0, ErrorCode::Domain, "acos: argument outside (-1, 1)");
    if (degree == 0) return {std::acos(x0)};
    std::vector<double> s(static_cast<std::size_t>(degree), 0.0);
    s[0] = x0;
    if (degree > 1) s[1] = 1.0;
    Series x(std::move(s));
    Series q = (pow(Series(degree - 1, 1.0) - x * x, -0.5) * -1.0).integral();
    q[0] = std::acos(x0);
    return q.coeffs();
}

MatrixSeries::MatrixSeries(int dim, int degree)
    : c_(static_cast<std::size_t>(degree) + 1, Eigen::MatrixXd::Zero(dim, dim)) {}

MatrixSeries::MatrixSeries(std::vector<Eigen::MatrixXd> coeffs) : c_(std::move(coeffs)) {}

MatrixSeries MatrixSeries::identity(int dim, int degree) {
    MatrixSeries s(dim, degree);
    s.c_[0].setIdentity();
    return s;
}

MatrixSeries MatrixSeries::truncated(int degree) const {
    MatrixSeries s(dim(), degree);
    for (int j = 0; j <= std::min(degree, this->degree()); ++j) s.c_[j] = c_[j];
    return s;
}

Series MatrixSeries::trace() const {
    Series t(degree());
    for (int j = 0; j <= degree(); ++j) t[j] = c_[j].trace();
    return t;
}

MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b) {
    const int m = std::min(a.degree(), b.degree());
    MatrixSeries out(a.dim(), m);
    for (int k = 0; k <= m; ++k)
        for (int i = 0; i <= k; ++i) out[k].noalias() += a[i] * b[k - i];
    return out;
}

MatrixSeries operator-(const MatrixSeries& a, const MatrixSeries& b) {
    const int m = std::min(a.degree(), b.degree());
    MatrixSeries out(a.dim(), m);
    for (int k = 0; k <= m; ++k) out[k] = a[k] - b[k];
    return out;
}

MatrixSeries MatrixSeries::inverse() const {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(c_[0]);
    require(lu.isInvertible(), ErrorCode::SingularMetric, "matrix series: singular constant term");
    const Eigen::MatrixXd a0inv = lu.inverse();
    MatrixSeries b(dim(), degree());
    b[0] = a0inv;
    for (int k = 1; k <= degree(); ++k) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim(), dim());
        for (int i = 1; i <= k; ++i) acc.noalias() += c_[i] * b[k - i];
        b[k] = -a0inv * acc;
    }
    return b;
}

Series sqrt_det_ratio(const MatrixSeries& g_r) {
    const int m = g_r.degree();
    const int n = g_r.dim();
    const Eigen::MatrixXd g0inv = g_r[0].inverse();
    // A = g0^{-1} g_r = I + N with N = O(r); log det A = tr log(I + N).
    MatrixSeries nil(n, m);
    for (int j = 1; j <= m; ++j) nil[j] = g0inv * g_r[j];
    Series logdet(m);
    MatrixSeries power = nil;
    for (int p = 1; p <= m; ++p) {
        const Series t = power.trace();
        const double sign = (p % 2 == 1) ? 1.0 : -1.0;
        for (int j = 0; j <= m; ++j) logdet[j] += sign * t[j] / p;
        power = power * nil;
    }
    return exp(logdet * 0.5);
}

}  // namespace renorm
