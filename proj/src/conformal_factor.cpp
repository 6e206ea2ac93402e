#include "renorm/conformal_factor.hpp"

#include "renorm/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace renorm {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    std::vector<ConformalFactor::Term> parse() {
        std::vector<ConformalFactor::Term> terms;
        skip();
        double sign = 1.0;
        if (peek() == '+' || peek() == '-') sign = (take() == '-') ? -1.0 : 1.0;
        terms.push_back(term(sign));
        while (true) {
            skip();
            if (at_end()) break;
            const char c = take();
            if (c != '+' && c != '-') error("expected '+' or '-'");
            terms.push_back(term(c == '-' ? -1.0 : 1.0));
        }
        return terms;
    }

private:
    ConformalFactor::Term term(double sign) {
        ConformalFactor::Term t{sign, {}};
        factor(t);
        while (true) {
            skip();
            if (peek() != '*') break;
            take();
            factor(t);
        }
        return t;
    }

    void factor(ConformalFactor::Term& t) {
        skip();
        if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
            t.coeff *= number();
            return;
        }
        if (match("cos(") || match("sin(")) {
            const bool is_cos = s_.substr(pos_ - 4, 3) == "cos";
            skip();
            int wave = 1;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                wave = integer();
                skip();
                expect('*');
                skip();
            }
            const int idx = chart_variable();
            skip();
            expect(')');
            t.factors.push_back({is_cos ? ConformalFactor::Factor::Kind::Cos : ConformalFactor::Factor::Kind::Sin,
                                 idx, wave});
            return;
        }
        if (peek() == 'X') {
            take();
            const int j = integer();
            if (j < 1) error("ambient index starts at 1");
            int power = 1;
            skip();
            if (peek() == '^') {
                take();
                skip();
                power = integer();
            }
            t.factors.push_back({ConformalFactor::Factor::Kind::Ambient, j - 1, power});
            return;
        }
        error("expected a number, cos(...), sin(...) or Xj");
    }

    int chart_variable() {
        if (match("theta")) return 0;
        if (peek() != 'x') error("expected chart variable xN or theta");
        take();
        const int i = integer();
        if (i < 1) error("chart index starts at 1");
        return i - 1;
    }

    double number() {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (ec != std::errc()) error("malformed number");
        pos_ = static_cast<std::size_t>(ptr - s_.data());
        return v;
    }

    int integer() {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
        if (ec != std::errc()) error("expected an integer");
        pos_ = static_cast<std::size_t>(ptr - s_.data());
        return v;
    }

    bool match(std::string_view lit) {
        if (s_.substr(pos_, lit.size()) == lit) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (take() != c) error(std::string("expected '") + c + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[nodiscard]] bool at_end() const { return pos_ >= s_.size(); }
    [[nodiscard]] char peek() const { return at_end() ? '\0' : s_[pos_]; }
    char take() { return at_end() ? '\0' : s_[pos_++]; }

    [[noreturn]] void error(const std::string& what) const {
        fail(ErrorCode::Parse, "upsilon '" + std::string(s_) + "' at column " + std::to_string(pos_) + ": " + what);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

ConformalFactor::ConformalFactor(std::vector<Term> terms) : terms_(std::move(terms)) {}

ConformalFactor ConformalFactor::parse(std::string_view text) { return ConformalFactor(Parser(text).parse()); }

ConformalFactor ConformalFactor::constant(double tau) { return ConformalFactor({Term{tau, {}}}); }

std::string ConformalFactor::to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        const auto& term = terms_[t];
        if (t > 0) os << (term.coeff < 0 ? " - " : " + ");
        os << (t > 0 ? std::abs(term.coeff) : term.coeff);
        for (const auto& f : term.factors) {
            switch (f.kind) {
                case Factor::Kind::Cos: os << "*cos(" << f.wave << "*x" << f.index + 1 << ")"; break;
                case Factor::Kind::Sin: os << "*sin(" << f.wave << "*x" << f.index + 1 << ")"; break;
                case Factor::Kind::Ambient:
                    os << "*X" << f.index + 1;
                    if (f.wave != 1) os << "^" << f.wave;
                    break;
            }
        }
    }
    return os.str();
}

bool ConformalFactor::is_constant() const {
    for (const auto& t : terms_)
        if (!t.factors.empty() && t.coeff != 0.0) return false;
    return true;
}

bool ConformalFactor::uses_ambient() const {
    for (const auto& t : terms_)
        for (const auto& f : t.factors)
            if (f.kind == Factor::Kind::Ambient) return true;
    return false;
}

bool ConformalFactor::depends_on_chart(int i) const {
    for (const auto& t : terms_)
        for (const auto& f : t.factors)
            if (f.kind != Factor::Kind::Ambient && f.index == i) return true;
    return false;
}

bool ConformalFactor::zonal() const {
    for (const auto& t : terms_)
        for (const auto& f : t.factors)
            if (f.index != 0) return false;
    return true;
}

Jet ConformalFactor::evaluate(std::span<const Jet> chart, std::span<const Jet> ambient,
                              std::span<const double> periods) const {
    const Jet& proto = chart.front();
    Jet sum(proto.space(), proto.order(), 0.0);
    for (const auto& t : terms_) {
        Jet prod(proto.space(), proto.order(), t.coeff);
        for (const auto& f : t.factors) {
            if (f.kind == Factor::Kind::Ambient) {
                require(f.index < static_cast<int>(ambient.size()), ErrorCode::InvalidArgument,
                        "upsilon: ambient coordinate X" + std::to_string(f.index + 1) + " unavailable for this family");
                for (int p = 0; p < f.wave; ++p) prod = prod * ambient[f.index];
                continue;
            }
            require(f.index < static_cast<int>(chart.size()), ErrorCode::InvalidArgument,
                    "upsilon: chart coordinate x" + std::to_string(f.index + 1) + " exceeds the dimension");
            const double scale = f.wave * 2.0 * std::numbers::pi / periods[f.index];
            const Jet arg = chart[f.index] * scale;
            prod = prod * (f.kind == Factor::Kind::Cos ? cos(arg) : sin(arg));
        }
        sum += prod;
    }
    return sum;
}

}  // namespace renorm
