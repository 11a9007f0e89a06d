#include "mss/error.hpp"

namespace mss {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
        case ErrorCode::OutOfBounds: return "OutOfBounds";
        case ErrorCode::EmptySelection: return "EmptySelection";
        case ErrorCode::DegenerateCloud: return "DegenerateCloud";
        case ErrorCode::NearHorizontal: return "NearHorizontal";
        case ErrorCode::GimbalProximity: return "GimbalProximity";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::UnknownObject: return "UnknownObject";
        case ErrorCode::InsufficientScene: return "InsufficientScene";
        case ErrorCode::EmptyCloud: return "EmptyCloud";
        case ErrorCode::ProviderFailure: return "ProviderFailure";
        case ErrorCode::GroundEstimationFailure: return "GroundEstimationFailure";
        case ErrorCode::DetectionFailure: return "DetectionFailure";
        case ErrorCode::CoincidentProjection: return "CoincidentProjection";
        case ErrorCode::AnchorBehindCamera: return "AnchorBehindCamera";
        case ErrorCode::AnchorOutOfView: return "AnchorOutOfView";
        case ErrorCode::DegenerateAxis: return "DegenerateAxis";
        case ErrorCode::SelectionOutOfRange: return "SelectionOutOfRange";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UseBeforeAssign: return "UseBeforeAssign";
        case ErrorCode::UnknownTool: return "UnknownTool";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::TypeMismatch: return "TypeMismatch";
        case ErrorCode::CorruptSnapshot: return "CorruptSnapshot";
        case ErrorCode::ToolError: return "ToolError";
        case ErrorCode::PaExhaustedRetries: return "PaExhaustedRetries";
        case ErrorCode::MalformedDecision: return "MalformedDecision";
        case ErrorCode::InsufficientEpisodes: return "InsufficientEpisodes";
        case ErrorCode::Timeout: return "Timeout";
        case ErrorCode::ProtocolError: return "ProtocolError";
        case ErrorCode::RuleMiss: return "RuleMiss";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::EmptyAfterFilter: return "EmptyAfterFilter";
    }
    return "UnknownError";
}

} // namespace mss
