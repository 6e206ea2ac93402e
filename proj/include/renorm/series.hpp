#pragma once

// Univariate truncated power series in r, scalar and matrix valued.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace renorm {

/// Coefficients c[0..m] of c0 + c1 r + ... + cm r^m (exact-degree bookkeeping:
/// results of binary operations are truncated at the smaller degree).
class Series {
public:
    Series() = default;
    explicit Series(int degree, double constant = 0.0);
    explicit Series(std::vector<double> coeffs);

    [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] double operator[](std::size_t j) const { return c_[j]; }
    double& operator[](std::size_t j) { return c_[j]; }
    [[nodiscard]] const std::vector<double>& coeffs() const { return c_; }

    [[nodiscard]] Series truncated(int degree) const;
    [[nodiscard]] double evaluate(double r) const;
    [[nodiscard]] Series derivative() const;
    /// Antiderivative with zero constant term; degree grows by one.
    [[nodiscard]] Series integral() const;

    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    Series& operator*=(double s);

    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(Series a, double s) { return a *= s; }
    friend Series operator*(double s, Series a) { return a *= s; }
    friend Series operator*(const Series& a, const Series& b);

private:
    std::vector<double> c_;
};

Series reciprocal(const Series& a);
Series operator/(const Series& a, const Series& b);
Series exp(const Series& a);
Series log(const Series& a);
Series sqrt(const Series& a);
Series pow(const Series& a, double p);

/// Taylor coefficients of atan(x0 + t) and acos(x0 + t) through t^degree.
std::vector<double> atan_taylor(double x0, int degree);
std::vector<double> acos_taylor(double x0, int degree);

class MatrixSeries {
public:
    MatrixSeries() = default;
    MatrixSeries(int dim, int degree);
    explicit MatrixSeries(std::vector<Eigen::MatrixXd> coeffs);

    [[nodiscard]] int dim() const { return static_cast<int>(c_.front().rows()); }
    [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] const Eigen::MatrixXd& operator[](std::size_t j) const { return c_[j]; }
    Eigen::MatrixXd& operator[](std::size_t j) { return c_[j]; }

    [[nodiscard]] MatrixSeries truncated(int degree) const;
    [[nodiscard]] Series trace() const;
    /// Inverse through the same degree; requires an invertible constant term.
    [[nodiscard]] MatrixSeries inverse() const;

    static MatrixSeries identity(int dim, int degree);

    friend MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b);
    friend MatrixSeries operator-(const MatrixSeries& a, const MatrixSeries& b);

private:
    std::vector<Eigen::MatrixXd> c_;
};

/// Series of (det(g0^{-1} g_r))^{1/2} given the Taylor coefficients of g_r.
Series sqrt_det_ratio(const MatrixSeries& g_r);

}  // namespace renorm
