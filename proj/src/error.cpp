#include "treeunif/error.hpp"

#include <stdexcept>

#include "treeunif/rational.hpp"

namespace treeunif {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidInput: return "invalid_input";
    case Errc::CycleDetected: return "cycle_detected";
    case Errc::Disconnected: return "disconnected";
    case Errc::NonPositiveLength: return "non_positive_length";
    case Errc::EpsilonOutOfRange: return "epsilon_out_of_range";
    case Errc::MissingTableEntry: return "missing_table_entry";
    case Errc::PointNotOnGrid: return "point_not_on_grid";
    case Errc::GridTooCoarse: return "grid_too_coarse";
    case Errc::HypothesisViolated: return "hypothesis_violated";
    case Errc::GammaTooLarge: return "gamma_too_large";
    case Errc::PostVerificationFailed: return "post_verification_failed";
    case Errc::LevelOutOfRange: return "level_out_of_range";
    case Errc::MixedLevels: return "mixed_levels";
    case Errc::IndependenceViolated: return "independence_violated";
    case Errc::ChainTooShort: return "chain_too_short";
    case Errc::Eps0OutOfRange: return "eps0_out_of_range";
    case Errc::AlphaOutOfRange: return "alpha_out_of_range";
    case Errc::Internal: return "internal";
  }
  return "unknown";
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  for (char c : text)
    if (!(c == '/' || c == '-' || c == '+' || (c >= '0' && c <= '9')))
      throw std::invalid_argument("bad rational: " + text);
  Rational q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("bad rational: " + text);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
  q.canonicalize();
  return q;
}

Rational inverse_power_of_three(int n) {
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), 3, static_cast<unsigned long>(n));
  return Rational(mpz_class(1), d);
}

}  // namespace treeunif
