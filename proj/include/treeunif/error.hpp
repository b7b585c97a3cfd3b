#pragma once

#include <stdexcept>
#include <string>

namespace treeunif {

enum class Errc {
  InvalidInput,
  CycleDetected,
  Disconnected,
  NonPositiveLength,
  EpsilonOutOfRange,
  MissingTableEntry,
  PointNotOnGrid,
  GridTooCoarse,
  HypothesisViolated,
  GammaTooLarge,
  PostVerificationFailed,
  LevelOutOfRange,
  MixedLevels,
  IndependenceViolated,
  ChainTooShort,
  Eps0OutOfRange,
  AlphaOutOfRange,
  Internal,
};

const char* to_string(Errc code) noexcept;

/// Exception carrying a machine-readable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace treeunif
