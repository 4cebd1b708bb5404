#include "socrhythm/errors.hpp"

namespace socrhythm {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::NonPositiveDwell: return "NonPositiveDwell";
    case Errc::BeforeOrigin: return "BeforeOrigin";
    case Errc::WrongLength: return "WrongLength";
    case Errc::NotBandlimited: return "NotBandlimited";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::Infeasible: return "Infeasible";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::MissingRhythm: return "MissingRhythm";
    case Errc::NonAdjacentWeeks: return "NonAdjacentWeeks";
    case Errc::UserMismatch: return "UserMismatch";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace socrhythm
