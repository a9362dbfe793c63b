#pragma once

#include "mhardy/martingale.hpp"
#include "mhardy/mixed_norm.hpp"

#include <vector>

namespace mhardy {

/// M_m(f) = max_{n <= m} |f_n|; upto < 0 means the full maximal function.
RandomVariable maximal(const Martingale& f, int upto = -1);

/// S_m(f) = ( sum_{n <= m} |d_n f|^2 )^{1/2}.
RandomVariable square_function(const Martingale& f, int upto = -1);

/// s_m(f) = ( sum_{n <= m} E_{n-1} |d_n f|^2 )^{1/2}, with E_{-1} = E_0.
/// s_m is F_{m-1}-measurable.
RandomVariable cond_square_function(const Martingale& f, int upto = -1);

/// All partial values M_0..M_N, S_0..S_N, s_0..s_N as plain grids.
std::vector<Eigen::ArrayXd> maximal_partials(const Martingale& f);
std::vector<Eigen::ArrayXd> square_partials(const Martingale& f);
std::vector<Eigen::ArrayXd> cond_square_partials(const Martingale& f);

/// Coordinate maximal operator: sup over levels m of the absolute partial
/// conditional expectation in coordinate k.
RandomVariable coord_maximal(const RandomVariable& g, int k);

/// Composition M_{d-1} o ... o M_0 applied to g; dominates the maximal
/// function of the martingale generated by g.
RandomVariable iterated_coord_maximal(const RandomVariable& g);

enum class EnvelopeKind {
  PredictableMax,     // lambda_n >= |f_{n+1}| atom-wise (P norm)
  PredictableSquare,  // lambda_n >= S_{n+1}(f) atom-wise (Q norm)
};

/// Pointwise-minimal element of Lambda dominating the next-level quantity:
/// lambda_n = running max of the per-F_n-atom maximum of |f_{n+1}| or
/// S_{n+1}(f). On finite spaces every admissible envelope dominates this one
/// pointwise, so monotone mixed norms attain the defining infimum here.
AdaptedEnvelope minimal_envelope(const Martingale& f, EnvelopeKind kind);

struct HardyNormReport {
  double max_norm = 0;          // |M(f)|_p
  double square_norm = 0;       // |S(f)|_p
  double cond_square_norm = 0;  // |s(f)|_p
  double pred_max_norm = 0;     // P norm via the minimal envelope
  double pred_square_norm = 0;  // Q norm via the minimal envelope
  double diff_sum_norm = 0;     // | sum_n |d_n f| |_p (the G norm)
};

HardyNormReport hardy_norms(const Martingale& f, const MixedExponent& p);

/// Predictable multiplier sequence b_0..b_{N-1}: b_k is F_k-measurable with
/// |b_k| <= 1.
class PredictableMultipliers {
 public:
  PredictableMultipliers(const ProductSpace* space, std::vector<Eigen::ArrayXd> b,
                         bool validate = true);
  static PredictableMultipliers constant(const ProductSpace& space, double c);
  const ProductSpace* space() const { return space_; }
  int count() const { return static_cast<int>(b_.size()); }
  const Eigen::ArrayXd& at(int k) const { return b_.at(k); }

 private:
  const ProductSpace* space_;
  std::vector<Eigen::ArrayXd> b_;
};

/// Martingale transform: d_k(Tf) = b_{k-1} d_k f for k >= 1, d_0(Tf) = 0.
Martingale transform(const Martingale& f, const PredictableMultipliers& b);

/// | sum_n E_n f_n |_p / | sum_n f_n |_p for non-negative f_n (f_n is paired
/// with conditioning level n). Returns 0 when both sides vanish.
double vector_inequality_ratio(const std::vector<RandomVariable>& fs, const MixedExponent& p);

struct WeakTypeCheck {
  double lhs = 0;  // rho * integral of phi over {Mf > rho}
  double rhs = 0;  // integral of |g| * M(phi)
};

/// Weighted weak-type inequality for the maximal operator, with constant 1:
/// f is the martingale generated by g, M(phi) the one generated by phi.
WeakTypeCheck weak_type_check(const RandomVariable& g, const Weight& phi, double rho);

/// Unboundedness witness for the maximal operator on L_(p,inf): the scale
/// function sum_{k<=n} 2^{k/p} 1_{[2^-k,2^-k+1)^2}, evaluated on the lumped
/// dyadic-scale space (exactly equal to the full 2^N x 2^N grid values).
struct CounterexampleResult {
  double norm_f = 0;                 // |f_n|_(p,inf), equals 1
  double norm_max = 0;               // |M f_n|_(p,inf), filtration maximal
  double norm_coord_max = 0;         // |Mtilde f_n|_(p,inf)
  double slice_integral_max = 0;       // min over y < 2^-n of int |Mf(.,y)|^p dx
  double slice_integral_coord_max = 0; // same for Mtilde
};

CounterexampleResult counterexample(int n, double p, int depth);

}  // namespace mhardy
