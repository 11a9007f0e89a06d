#pragma once

#include <stdexcept>
#include <string>

namespace mss {

enum class ErrorCode {
    // geometry
    NonPositiveDepth,
    OutOfBounds,
    EmptySelection,
    DegenerateCloud,
    NearHorizontal,
    GimbalProximity,
    ZeroVector,
    // scene_sim
    InvalidSpec,
    UnknownObject,
    InsufficientScene,
    EmptyCloud,
    // perception
    ProviderFailure,
    GroundEstimationFailure,
    DetectionFailure,
    CoincidentProjection,
    AnchorBehindCamera,
    AnchorOutOfView,
    DegenerateAxis,
    SelectionOutOfRange,
    // dsl
    SyntaxError,
    UseBeforeAssign,
    UnknownTool,
    ArityMismatch,
    TypeMismatch,
    CorruptSnapshot,
    ToolError,
    // agents
    PaExhaustedRetries,
    MalformedDecision,
    InsufficientEpisodes,
    // backends
    Timeout,
    ProtocolError,
    RuleMiss,
    NotFound,
    // harness
    SchemaError,
    IoError,
    EmptyAfterFilter,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace mss
