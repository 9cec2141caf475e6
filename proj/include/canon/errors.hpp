#pragma once

#include <stdexcept>
#include <string>

namespace canon {

enum class Errc {
    ZeroSlopePair,
    SlopeTooShort,
    ParityError,
    CoreSlopeExcluded,
    GluingMismatch,
    InvalidTriangulation,
    NoConvergence,
    DegenerateShape,
    HexagonExtractionFailed,
    AsymmetricHexagon,
    SingularSystem,
    NoCrossing,
    DegenerateHexagon,
    MissingMetadata,
    InconsistentOracles,
    Precondition,
    ParseError,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace canon
