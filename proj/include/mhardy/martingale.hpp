#pragma once

#include "mhardy/space.hpp"

#include <optional>
#include <vector>

namespace mhardy {

/// Conditional expectation with respect to F_level: averages over each
/// product atom. Level N is the identity (singleton atoms).
RandomVariable cond_exp(const RandomVariable& g, int level);

/// Conditional expectation with respect to the partial sigma-algebra that is
/// level-m coarse in coordinate k and fully resolved elsewhere: averages only
/// over the level-m cell of coordinate k, holding the other coordinates
/// fixed. Coordinates are numbered 0..d-1 here.
RandomVariable partial_cond_exp(const RandomVariable& g, int k, int level);

/// Per-atom maximum at a level, as an F_level-measurable function.
RandomVariable atom_max(const RandomVariable& g, int level);

/// Martingale stored by differences d_0 f, ..., d_N f. Differences with
/// index n >= 1 are F_n-measurable with E_{n-1} d_n f = 0; d_0 f is the
/// F_0-measurable start (zero for martingales in the strict convention,
/// E_0 g for martingales generated from a terminal function g).
class Martingale {
 public:
  Martingale(const ProductSpace* space, std::vector<Eigen::ArrayXd> diffs, bool validate = true);

  const ProductSpace* space() const { return space_; }
  int depth() const { return static_cast<int>(diffs_.size()) - 1; }
  const Eigen::ArrayXd& diff(int n) const { return diffs_.at(n); }
  Eigen::ArrayXd partial_sum(int n) const;  // f_n = d_0 + ... + d_n
  RandomVariable value_at(int n) const { return {space_, partial_sum(n)}; }
  RandomVariable terminal() const { return value_at(depth()); }
  RandomVariable start() const { return {space_, diffs_[0]}; }

  /// Same differences with d_0 replaced by zero.
  Martingale centered() const;

 private:
  const ProductSpace* space_;
  std::vector<Eigen::ArrayXd> diffs_;
};

/// The martingale f_n = E_n g. Its start is d_0 f = E_0 g, which is nonzero
/// unless g is centered on F_0; partial sums telescope back to g exactly.
Martingale from_terminal(const RandomVariable& g);

/// Seeded test martingale: for n >= 1 each F_n atom receives a uniform(-1,1)
/// value which is then centered within its F_{n-1} atom; d_0 = 0.
Martingale random_martingale(const ProductSpace& space, std::uint64_t seed);

/// Map from points to levels {0..N} or infinity; {nu = n} must be a union of
/// F_n atoms. Infinity is stored as the sentinel level N+1.
class StoppingTime {
 public:
  StoppingTime(const ProductSpace* space, Eigen::ArrayXi levels, bool validate = true);

  static StoppingTime always(const ProductSpace& space, int level);
  static StoppingTime never(const ProductSpace& space);  // nu == infinity

  const ProductSpace* space() const { return space_; }
  int infinity_level() const { return space_->depth() + 1; }
  const Eigen::ArrayXi& levels() const { return levels_; }
  bool finite_at(Eigen::Index i) const { return levels_[i] <= space_->depth(); }
  /// Indicator of {nu < infinity} as a 0/1 random variable.
  RandomVariable finite_indicator() const;
  /// Indicator of {nu >= m} at each point.
  Eigen::ArrayXd keep_mask(int m) const;
  bool all_infinite() const;

 private:
  const ProductSpace* space_;
  Eigen::ArrayXi levels_;
};

/// Stopped martingale: d_m (f^nu) = d_m f on {nu >= m}, zero after.
Martingale stop(const Martingale& f, const StoppingTime& nu);

/// First passage over a threshold: nu = least n with checked value > thr.
/// checked[n] is seq[min(n + offset, N)]; it must be F_n-measurable, which
/// admits both predictable sequences indexed one step ahead (offset 1) and
/// plain adapted sequences (offset 0).
StoppingTime first_passage(const std::vector<RandomVariable>& seq, double threshold, int offset);

/// Non-decreasing, non-negative adapted sequence lambda_0..lambda_N with
/// lambda_infinity = lambda_N (the class Lambda behind the P and Q norms).
class AdaptedEnvelope {
 public:
  AdaptedEnvelope(const ProductSpace* space, std::vector<Eigen::ArrayXd> lambda,
                  bool validate = true);
  const ProductSpace* space() const { return space_; }
  int depth() const { return static_cast<int>(lambda_.size()) - 1; }
  const Eigen::ArrayXd& at(int n) const { return lambda_.at(n); }
  RandomVariable terminal() const { return {space_, lambda_.back()}; }

 private:
  const ProductSpace* space_;
  std::vector<Eigen::ArrayXd> lambda_;
};

}  // namespace mhardy
