#include "warpgate/error.hpp"

namespace warpgate {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NoFeasiblePath: return "NoFeasiblePath";
    case ErrorKind::EnumerationLimit: return "EnumerationLimit";
    case ErrorKind::EmptyImage: return "EmptyImage";
    case ErrorKind::DegenerateRegion: return "DegenerateRegion";
    case ErrorKind::DegenerateTangent: return "DegenerateTangent";
    case ErrorKind::DegenerateClasses: return "DegenerateClasses";
    case ErrorKind::DegenerateTrainingSet: return "DegenerateTrainingSet";
    case ErrorKind::ProtocolPrecondition: return "ProtocolPrecondition";
    case ErrorKind::InvalidHandParams: return "InvalidHandParams";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Schema: return "Schema";
  }
  return "Unknown";
}

}  // namespace warpgate
