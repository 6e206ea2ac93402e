#include "renorm/jet.hpp"

#include "renorm/error.hpp"
#include "renorm/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

namespace renorm {

namespace {

std::uint64_t encode(std::span<const int> exps, int base) {
    std::uint64_t key = 0;
    for (int e : exps) key = key * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(e);
    return key;
}

// All exponent vectors of the given degree, appended in reverse-lex order.
void enumerate(int nvars, int degree, std::vector<int>& cur, int var, std::vector<int>& out) {
    if (var == nvars - 1) {
        cur[var] = degree;
        out.insert(out.end(), cur.begin(), cur.end());
        return;
    }
    for (int e = degree; e >= 0; --e) {
        cur[var] = e;
        enumerate(nvars, degree - e, cur, var + 1, out);
    }
}

}  // namespace

JetSpace::JetSpace(int nvars, int max_order) : nvars_(nvars), max_order_(max_order) {
    require(nvars >= 1 && nvars <= 12 && max_order >= 0 && max_order <= 12,
            ErrorCode::InvalidArgument, "jet space: unsupported size");
    offsets_.push_back(0);
    std::vector<int> cur(static_cast<std::size_t>(nvars), 0);
    for (int d = 0; d <= max_order; ++d) {
        enumerate(nvars, d, cur, 0, exps_);
        offsets_.push_back(exps_.size() / static_cast<std::size_t>(nvars));
    }
    const std::size_t count = offsets_.back();
    degree_.resize(count);
    for (int d = 0; d <= max_order; ++d)
        for (std::size_t m = offsets_[d]; m < offsets_[d + 1]; ++m) degree_[m] = d;

    const int base = max_order + 1;
    std::unordered_map<std::uint64_t, std::size_t> lookup;
    lookup.reserve(count);
    for (std::size_t m = 0; m < count; ++m) lookup.emplace(encode(exponents(m), base), m);

    raise_.assign(static_cast<std::size_t>(nvars) * count, npos);
    std::vector<int> e(static_cast<std::size_t>(nvars));
    for (int v = 0; v < nvars; ++v) {
        for (std::size_t m = 0; m < count; ++m) {
            if (degree_[m] >= max_order) continue;
            auto ex = exponents(m);
            std::copy(ex.begin(), ex.end(), e.begin());
            ++e[v];
            raise_[static_cast<std::size_t>(v) * count + m] = lookup.at(encode(e, base));
        }
    }

    std::vector<std::vector<Term>> by_degree(static_cast<std::size_t>(max_order) + 1);
    for (std::size_t a = 0; a < count; ++a) {
        for (std::size_t b = 0; b < offsets_[max_order - degree_[a] + 1]; ++b) {
            auto ea = exponents(a);
            auto eb = exponents(b);
            for (int v = 0; v < nvars; ++v) e[v] = ea[v] + eb[v];
            const std::size_t c = lookup.at(encode(e, base));
            by_degree[degree_[c]].push_back(
                {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(c)});
        }
    }
    term_offsets_.push_back(0);
    for (auto& level : by_degree) {
        terms_.insert(terms_.end(), level.begin(), level.end());
        term_offsets_.push_back(terms_.size());
    }
}

const JetSpace& JetSpace::get(int nvars, int max_order) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[{nvars, max_order}];
    if (!slot) slot = std::make_unique<JetSpace>(nvars, max_order);
    return *slot;
}

std::size_t JetSpace::index(std::span<const int> exps) const {
    int deg = 0;
    for (int e : exps) deg += e;
    require(deg <= max_order_, ErrorCode::InvalidArgument, "jet: monomial degree exceeds space order");
    for (std::size_t m = offsets_[deg]; m < offsets_[deg + 1]; ++m) {
        auto ex = exponents(m);
        if (std::equal(ex.begin(), ex.end(), exps.begin())) return m;
    }
    return npos;
}

Jet::Jet(const JetSpace& space, int order, double value)
    : space_(&space), order_(order), c_(space.size(order), 0.0) {
    require(order <= space.max_order(), ErrorCode::InvalidArgument, "jet: order exceeds space");
    c_[0] = value;
}

Jet Jet::variable(const JetSpace& space, int order, int var, double value) {
    Jet j(space, order, value);
    if (order >= 1) j.c_[space.unit(var)] = 1.0;
    return j;
}

double Jet::coeff(std::span<const int> exps) const {
    const std::size_t m = space_->index(exps);
    return m < c_.size() ? c_[m] : 0.0;
}

double Jet::partial(int i) const {
    if (order_ < 1) fail(ErrorCode::InsufficientOrder, "jet: first derivative needs order >= 1");
    return c_[space_->unit(i)];
}

double Jet::partial(int i, int j) const {
    if (order_ < 2) fail(ErrorCode::InsufficientOrder, "jet: second derivative needs order >= 2");
    const std::size_t m = space_->raised(j, space_->unit(i));
    return (i == j ? 2.0 : 1.0) * c_[m];
}

Jet Jet::truncated(int order) const {
    if (order >= order_) return *this;
    Jet out = *this;
    out.order_ = order;
    out.c_.resize(space_->size(order));
    return out;
}

Jet Jet::d(int var) const {
    require(order_ >= 1, ErrorCode::InsufficientOrder, "jet: cannot differentiate an order-0 jet");
    Jet out(*space_, order_ - 1);
    const std::size_t n = out.c_.size();
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t up = space_->raised(var, m);
        out.c_[m] = static_cast<double>(space_->exponents(m)[var] + 1) * c_[up];
    }
    return out;
}

Jet& Jet::operator+=(const Jet& o) {
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t m = 0; m < c_.size(); ++m) c_[m] += o.c_[m];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t m = 0; m < c_.size(); ++m) c_[m] -= o.c_[m];
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

void Jet::add_product(const Jet& a, const Jet& b, double scale) {
    const int k = std::min({order_, a.order_, b.order_});
    if (k < order_) *this = truncated(k);
    const double* pa = a.c_.data();
    const double* pb = b.c_.data();
    double* pc = c_.data();
    if (scale == 1.0) {
        for (const auto& t : space_->product_terms(k)) pc[t.c] += pa[t.a] * pb[t.b];
    } else {
        for (const auto& t : space_->product_terms(k)) pc[t.c] += scale * pa[t.a] * pb[t.b];
    }
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet out(a.space(), std::min(a.order(), b.order()));
    out.add_product(a, b);
    return out;
}

Jet Jet::compose(std::span<const double> taylor) const {
    const int top = std::min<int>(order_, static_cast<int>(taylor.size()) - 1);
    Jet delta = *this;
    delta.c_[0] = 0.0;
    Jet acc(*space_, order_, taylor[top]);
    for (int m = top - 1; m >= 0; --m) {
        acc = acc * delta;
        acc.c_[0] += taylor[m];
    }
    return acc;
}

namespace {

std::vector<double> factorial_scaled(int k, auto&& deriv) {
    std::vector<double> t(static_cast<std::size_t>(k) + 1);
    double fact = 1.0;
    for (int m = 0; m <= k; ++m) {
        if (m > 0) fact *= m;
        t[m] = deriv(m) / fact;
    }
    return t;
}

}  // namespace

Jet exp(const Jet& u) {
    const double e = std::exp(u.value());
    return u.compose(factorial_scaled(u.order(), [e](int) { return e; }));
}

Jet sin(const Jet& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    const double cyc[4] = {s, c, -s, -c};
    return u.compose(factorial_scaled(u.order(), [&](int m) { return cyc[m % 4]; }));
}

Jet cos(const Jet& u) {
    const double s = std::sin(u.value()), c = std::cos(u.value());
    const double cyc[4] = {c, -s, -c, s};
    return u.compose(factorial_scaled(u.order(), [&](int m) { return cyc[m % 4]; }));
}

Jet log(const Jet& u) {
    const double x = u.value();
    require(x > 0.0, ErrorCode::Domain, "jet log: non-positive argument");
    std::vector<double> t(static_cast<std::size_t>(u.order()) + 1);
    t[0] = std::log(x);
    for (int m = 1; m <= u.order(); ++m) t[m] = ((m % 2 == 1) ? 1.0 : -1.0) / (m * std::pow(x, m));
    return u.compose(t);
}

Jet pow(const Jet& u, double p) {
    const double x = u.value();
    std::vector<double> t(static_cast<std::size_t>(u.order()) + 1);
    double binom = 1.0;
    for (int m = 0; m <= u.order(); ++m) {
        t[m] = binom * std::pow(x, p - m);
        binom *= (p - m) / (m + 1);
    }
    return u.compose(t);
}

Jet sqrt(const Jet& u) {
    require(u.value() > 0.0, ErrorCode::Domain, "jet sqrt: non-positive argument");
    return pow(u, 0.5);
}

Jet reciprocal(const Jet& u) {
    require(u.value() != 0.0, ErrorCode::Domain, "jet reciprocal: zero argument");
    return pow(u, -1.0);
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet acos(const Jet& u) { return u.compose(acos_taylor(u.value(), u.order())); }

Jet atan2(const Jet& y, const Jet& x) {
    const double y0 = y.value(), x0 = x.value();
    const double base = std::atan2(y0, x0);
    if (std::abs(x0) >= std::abs(y0)) {
        Jet q = y / x;
        Jet a = q.compose(atan_taylor(q.value(), q.order()));
        return a + (base - a.value());
    }
    Jet q = x / y;
    Jet a = q.compose(atan_taylor(q.value(), q.order()));
    return (base + a.value()) - a;
}

}  // namespace renorm
