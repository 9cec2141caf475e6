#include "canon/errors.hpp"

namespace canon {

const char* errc_name(Errc e) {
    switch (e) {
        case Errc::ZeroSlopePair: return "ZeroSlopePair";
        case Errc::SlopeTooShort: return "SlopeTooShort";
        case Errc::ParityError: return "ParityError";
        case Errc::CoreSlopeExcluded: return "CoreSlopeExcluded";
        case Errc::GluingMismatch: return "GluingMismatch";
        case Errc::InvalidTriangulation: return "InvalidTriangulation";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::DegenerateShape: return "DegenerateShape";
        case Errc::HexagonExtractionFailed: return "HexagonExtractionFailed";
        case Errc::AsymmetricHexagon: return "AsymmetricHexagon";
        case Errc::SingularSystem: return "SingularSystem";
        case Errc::NoCrossing: return "NoCrossing";
        case Errc::DegenerateHexagon: return "DegenerateHexagon";
        case Errc::MissingMetadata: return "MissingMetadata";
        case Errc::InconsistentOracles: return "InconsistentOracles";
        case Errc::Precondition: return "Precondition";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace canon
