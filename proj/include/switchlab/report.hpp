#pragma once

#include <string>
#include <vector>

#include "switchlab/scalar.hpp"

namespace switchlab {

/// Outcome of one identity check: the compared values, the residual, and the
/// verdict. tolerance is 0 in exact mode by construction.
template <class S>
struct IdentityReport {
  std::string identity;
  std::string fixture;
  std::string kernel_flavor;
  std::string horizon;
  std::vector<S> lhs;
  std::vector<S> rhs;
  S residual{};
  S tolerance{};
  bool pass = false;
  std::vector<std::string> notes;

  /// Recomputes residual = max |lhs_i - rhs_i| and the verdict. Call after
  /// filling lhs/rhs pairwise.
  void finalize() {
    residual = S(0);
    for (std::size_t i = 0; i < lhs.size() && i < rhs.size(); ++i) {
      S dev = scalar_traits<S>::abs(lhs[i] - rhs[i]);
      if (residual < dev) residual = dev;
    }
    pass = !(tolerance < residual);
  }

  /// For one-sided (inequality / monotonicity) checks: residual is supplied
  /// directly as the worst violation, 0 if none.
  void finalize_with_residual(S worst_violation) {
    residual = worst_violation;
    pass = !(tolerance < residual);
  }
};

}  // namespace switchlab
