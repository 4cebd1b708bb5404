#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace socrhythm {

enum class Errc {
  MalformedRecord,
  NonPositiveDwell,
  BeforeOrigin,
  WrongLength,
  NotBandlimited,
  ZeroVector,
  NonPositiveWeight,
  Infeasible,
  TooFewSamples,
  ZeroVariance,
  MissingRhythm,
  NonAdjacentWeeks,
  UserMismatch,
  UnknownNode,
  InvalidConfig,
  Io,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace socrhythm
