#pragma once

#include <algorithm>
#include <cmath>

#include "tukey/errors.hpp"

namespace tukey {

/// Relative tolerance used for every sign classification of a dot product.
/// A value v is classified against a scale (the product of the norms of the
/// vectors whose dot product produced v): v > eps*scale is positive,
/// v < -eps*scale is negative, everything in between is zero.
struct Tolerance {
  double eps = 1e-9;

  Tolerance() = default;
  explicit Tolerance(double e) : eps(e) {
    if (!(e >= 0.0)) throw input_error("tolerance eps must be nonnegative");
  }

  /// Three-way sign of v at the given scale: -1, 0 or +1.
  int sign(double v, double scale) const {
    const double band = eps * scale;
    if (v > band) return 1;
    if (v < -band) return -1;
    return 0;
  }

  bool is_zero(double v, double scale) const { return sign(v, scale) == 0; }

  /// Threshold for declaring two directions identical (tie grouping in the
  /// sweep, hyperplane contamination in the oracle). Constructed
  /// degeneracies cancel to machine precision, a few orders below 1e-12,
  /// while random data stays well above it, so this separates the two
  /// regimes where the coarser sign band cannot.
  double collinearity_eps() const { return std::min(eps, 1e-12); }
};

}  // namespace tukey
