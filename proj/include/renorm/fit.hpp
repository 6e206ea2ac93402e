#pragma once

// Weighted least-squares extraction of the finite part (and log coefficient)
// from samples of a divergent quantity at a sequence of cutoffs eps.

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace renorm {

/// Geometric sequence from hi down to lo with `count` points.
std::vector<double> epsilon_grid(double hi, double lo, int count);

struct FitBasis {
    std::vector<double> powers;  // exponents of eps; 0 is the constant term
    bool log_term = false;       // column log(1/eps)
    double weight_power = 0.0;   // rows are scaled by eps^weight_power

    /// eps^{-d}, eps^{-d+step}, ... (negative powers), log(1/eps) when `log_term`,
    /// the constant, then `tail` positive powers continuing with the same step.
    static FitBasis divergent(int d, bool log_term, int tail, int step = 2);

    [[nodiscard]] int columns() const { return static_cast<int>(powers.size()) + (log_term ? 1 : 0); }
    [[nodiscard]] std::string describe() const;
};

struct FitResult {
    std::vector<double> coeffs;  // one per power, then the log coefficient when present
    double constant = 0.0;
    std::optional<double> log_coefficient;
    double condition = 0.0;               // of the column-scaled weighted design matrix
    double residual = 0.0;                // max weighted residual relative to the largest weighted sample
    // Twice the largest change under the reduced refits (every other sample;
    // one tail power fewer).
    double constant_uncertainty = 0.0;
    double log_uncertainty = 0.0;
};

/// Raises FitDegeneracy when the scaled design matrix has condition number
/// above `max_condition` or when there are fewer samples than columns.
FitResult fit_expansion(std::span<const double> eps, std::span<const double> samples, const FitBasis& basis,
                        double max_condition = 1e10);

}  // namespace renorm
