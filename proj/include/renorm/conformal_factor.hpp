#pragma once

// Conformal factors Upsilon for rescalings g -> exp(2 Upsilon) g.
//
// An Upsilon is a finite sum of products of elementary factors:
//   cos(m*xi), sin(m*xi)  trigonometric in chart coordinate i (scaled by the
//                         period on a torus),
//   Xj, Xj^p              ambient coordinate j of the embedded unit sphere,
//   numeric constants.
// Text form, e.g. "0.1*X1", "0.05*cos(2*x1)*sin(x2) - 0.02", is what the
// command line accepts.

#include "renorm/jet.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace renorm {

class ConformalFactor {
public:
    struct Factor {
        enum class Kind { Cos, Sin, Ambient };
        Kind kind;
        int index;  // 0-based chart or ambient index
        int wave;   // wave number (trig) or power (ambient)
    };
    struct Term {
        double coeff = 0.0;
        std::vector<Factor> factors;
    };

    ConformalFactor() = default;
    explicit ConformalFactor(std::vector<Term> terms);

    static ConformalFactor parse(std::string_view text);
    static ConformalFactor constant(double tau);

    [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] bool is_constant() const;
    [[nodiscard]] bool uses_ambient() const;
    /// True when the expression involves chart coordinate i through a trig factor.
    [[nodiscard]] bool depends_on_chart(int i) const;
    /// True when only X1 and chart coordinate 0 appear (zonal on the sphere).
    [[nodiscard]] bool zonal() const;

    /// Evaluate with chart coordinates and (optionally empty) ambient
    /// coordinates given as jets. `periods[i]` rescales the trig argument to
    /// 2*pi*m*x/periods[i].
    [[nodiscard]] Jet evaluate(std::span<const Jet> chart, std::span<const Jet> ambient,
                               std::span<const double> periods) const;

private:
    std::vector<Term> terms_;
};

}  // namespace renorm
