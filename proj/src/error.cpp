#include "renorm/error.hpp"

namespace renorm {

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SingularMetric: return "SingularMetric";
        case ErrorCode::DimensionUnsupported: return "DimensionUnsupported";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::Indeterminacy: return "Indeterminacy";
        case ErrorCode::InsufficientOrder: return "InsufficientOrder";
        case ErrorCode::GaugeBreakdown: return "GaugeBreakdown";
        case ErrorCode::Domain: return "Domain";
        case ErrorCode::Inversion: return "Inversion";
        case ErrorCode::Resolution: return "Resolution";
        case ErrorCode::FitDegeneracy: return "FitDegeneracy";
        case ErrorCode::DegenerateEndpoints: return "DegenerateEndpoints";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::Symmetry: return "Symmetry";
        case ErrorCode::Immersion: return "Immersion";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

}  // namespace renorm
