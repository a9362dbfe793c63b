#pragma once

#include "mhardy/space.hpp"

#include <limits>
#include <string>
#include <vector>

namespace mhardy {

/// Exponent vector p = (p_1, ..., p_d) with entries in (0, inf].
class MixedExponent {
 public:
  static constexpr double inf = std::numeric_limits<double>::infinity();

  explicit MixedExponent(std::vector<double> entries);
  static MixedExponent uniform(int dims, double p);

  int dims() const { return static_cast<int>(entries_.size()); }
  double operator[](int i) const { return entries_.at(i); }
  const std::vector<double>& entries() const { return entries_; }

  double min_entry() const;
  bool all_finite() const;
  bool all_at_least(double bound) const;
  /// Strict upper bound on the finite entries; infinite entries fail.
  bool all_below(double bound) const;

  /// Entrywise conjugate: 1/p + 1/p' = 1, with 1' = inf and inf' = 1.
  /// Defined only when every entry is >= 1.
  MixedExponent conjugate() const;
  MixedExponent divided_by(double alpha) const;

  std::string str() const;  // e.g. "2;3" (used in CSV columns)

 private:
  std::vector<double> entries_;
};

/// Iterated mixed norm: the L_{p_1} norm in coordinate x_1 first (innermost),
/// the L_{p_d} norm last. Entries < 1 give the quasi-norm with the same power
/// formula; an infinite entry takes the plain maximum over that coordinate
/// (all weights are positive, so ess-sup = max).
double mixed_norm(const RandomVariable& f, const MixedExponent& p);

/// E[f g].
double pairing(const RandomVariable& f, const RandomVariable& g);

/// A norming function for f: g with |g|_{p'} <= 1 and pairing(f, g) = |f|_p,
/// built coordinate-by-coordinate (sign(f)|f|^{p-1} renormalized through the
/// nesting for finite entries, mass on the maximizing slice for infinite
/// ones, ties resolved to the lowest index). Needs 1 <= p <= inf; f == 0
/// yields g == 0.
RandomVariable dual_extremal(const RandomVariable& f, const MixedExponent& p);

/// Strictly positive random variable used as a weight.
struct Weight {
  explicit Weight(RandomVariable w);
  RandomVariable value;
};

/// ( Integral of |f|^r w dP )^{1/r} for finite r > 0.
double weighted_norm(const RandomVariable& f, double r, const Weight& w);

}  // namespace mhardy
