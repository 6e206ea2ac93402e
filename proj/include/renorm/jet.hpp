#pragma once

// Truncated multivariate Taylor polynomials ("jets").
//
// A Jet of order k in V variables stores the Taylor coefficients of a smooth
// function about a base point for all monomials of total degree <= k.
// Arithmetic truncates to the smaller order of the operands, and
// differentiation lowers the order by one. Monomials are stored in graded
// order, so a jet of order k is a prefix of the order-K layout.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace renorm {

class JetSpace {
public:
    struct Term {
        std::uint32_t a, b, c;
    };

    JetSpace(int nvars, int max_order);

    /// Shared, cached instance. Instances live for the program lifetime.
    static const JetSpace& get(int nvars, int max_order);

    [[nodiscard]] int nvars() const noexcept { return nvars_; }
    [[nodiscard]] int max_order() const noexcept { return max_order_; }

    /// Number of monomials of total degree <= order.
    [[nodiscard]] std::size_t size(int order) const { return offsets_[order + 1]; }

    [[nodiscard]] std::span<const int> exponents(std::size_t m) const {
        return {exps_.data() + m * nvars_, static_cast<std::size_t>(nvars_)};
    }
    [[nodiscard]] int degree(std::size_t m) const { return degree_[m]; }

    /// Index of the monomial with the given exponents (must have degree <= max_order).
    [[nodiscard]] std::size_t index(std::span<const int> exps) const;
    [[nodiscard]] std::size_t unit(int var) const { return 1 + static_cast<std::size_t>(var); }

    /// Index of m * x_var, or npos when that exceeds max_order.
    [[nodiscard]] std::size_t raised(int var, std::size_t m) const {
        return raise_[static_cast<std::size_t>(var) * offsets_.back() + m];
    }

    /// All (a, b, c) with monomial_a * monomial_b = monomial_c and deg(c) <= order.
    [[nodiscard]] std::span<const Term> product_terms(int order) const {
        return {terms_.data(), term_offsets_[order + 1]};
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    int nvars_;
    int max_order_;
    std::vector<int> exps_;
    std::vector<int> degree_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> raise_;
    std::vector<Term> terms_;
    std::vector<std::size_t> term_offsets_;
};

class Jet {
public:
    Jet() = default;
    Jet(const JetSpace& space, int order, double value = 0.0);

    static Jet variable(const JetSpace& space, int order, int var, double value);

    [[nodiscard]] const JetSpace& space() const { return *space_; }
    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] double value() const { return c_[0]; }
    [[nodiscard]] std::span<const double> coeffs() const { return c_; }
    [[nodiscard]] std::span<double> coeffs() { return c_; }
    [[nodiscard]] double coeff(std::span<const int> exps) const;

    /// Partial derivative values at the base point.
    [[nodiscard]] double partial(int i) const;
    [[nodiscard]] double partial(int i, int j) const;

    [[nodiscard]] Jet truncated(int order) const;
    [[nodiscard]] Jet d(int var) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);
    Jet& operator+=(double s) {
        c_[0] += s;
        return *this;
    }

    /// this += a * b, truncated to this->order().
    void add_product(const Jet& a, const Jet& b, double scale = 1.0);

    /// f(u) given the Taylor coefficients of f at u.value(): f(u0 + t) = sum taylor[m] t^m.
    [[nodiscard]] Jet compose(std::span<const double> taylor) const;

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator+(double s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, double s) { return a += -s; }
    friend Jet operator-(double s, const Jet& a) { return (a * -1.0) + s; }
    friend Jet operator-(Jet a) { return a *= -1.0; }

private:
    const JetSpace* space_ = nullptr;
    int order_ = 0;
    std::vector<double> c_;
};

Jet operator/(const Jet& a, const Jet& b);

Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet sqrt(const Jet& u);
Jet pow(const Jet& u, double p);
Jet reciprocal(const Jet& u);
Jet acos(const Jet& u);
Jet atan2(const Jet& y, const Jet& x);

}  // namespace renorm
