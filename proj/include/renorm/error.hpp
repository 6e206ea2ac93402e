#pragma once

#include <stdexcept>
#include <string>

namespace renorm {

enum class ErrorCode {
    InvalidArgument = 1,
    SingularMetric,
    DimensionUnsupported,
    ShapeMismatch,
    Indeterminacy,
    InsufficientOrder,
    GaugeBreakdown,
    Domain,
    Inversion,
    Resolution,
    FitDegeneracy,
    DegenerateEndpoints,
    NoConvergence,
    Symmetry,
    Immersion,
    Parse,
};

const char* error_code_name(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// C layer can map it to a status value without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) throw Error(code, what);
}

}  // namespace renorm
