#include "mhardy/operators.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace mhardy {

namespace {
constexpr double kTol = 1e-9;

int clamp_upto(const Martingale& f, int upto) {
  if (upto < 0) return f.depth();
  if (upto > f.depth()) throw std::out_of_range("martingale level out of range");
  return upto;
}
}  // namespace

RandomVariable maximal(const Martingale& f, int upto) {
  const int m = clamp_upto(f, upto);
  Eigen::ArrayXd sum = f.diff(0);
  Eigen::ArrayXd out = sum.abs();
  for (int n = 1; n <= m; ++n) {
    sum += f.diff(n);
    out = out.max(sum.abs());
  }
  return {f.space(), std::move(out)};
}

RandomVariable square_function(const Martingale& f, int upto) {
  const int m = clamp_upto(f, upto);
  Eigen::ArrayXd acc = f.diff(0).square();
  for (int n = 1; n <= m; ++n) acc += f.diff(n).square();
  return {f.space(), acc.sqrt()};
}

RandomVariable cond_square_function(const Martingale& f, int upto) {
  const int m = clamp_upto(f, upto);
  Eigen::ArrayXd acc = cond_exp({f.space(), f.diff(0).square()}, 0).values;
  for (int n = 1; n <= m; ++n)
    acc += cond_exp({f.space(), f.diff(n).square()}, n - 1).values;
  return {f.space(), acc.sqrt()};
}

std::vector<Eigen::ArrayXd> maximal_partials(const Martingale& f) {
  std::vector<Eigen::ArrayXd> out(f.depth() + 1);
  Eigen::ArrayXd sum = f.diff(0);
  out[0] = sum.abs();
  for (int n = 1; n <= f.depth(); ++n) {
    sum += f.diff(n);
    out[n] = out[n - 1].max(sum.abs());
  }
  return out;
}

std::vector<Eigen::ArrayXd> square_partials(const Martingale& f) {
  std::vector<Eigen::ArrayXd> out(f.depth() + 1);
  Eigen::ArrayXd acc = f.diff(0).square();
  out[0] = acc.sqrt();
  for (int n = 1; n <= f.depth(); ++n) {
    acc += f.diff(n).square();
    out[n] = acc.sqrt();
  }
  return out;
}

std::vector<Eigen::ArrayXd> cond_square_partials(const Martingale& f) {
  std::vector<Eigen::ArrayXd> out(f.depth() + 1);
  Eigen::ArrayXd acc = cond_exp({f.space(), f.diff(0).square()}, 0).values;
  out[0] = acc.sqrt();
  for (int n = 1; n <= f.depth(); ++n) {
    acc += cond_exp({f.space(), f.diff(n).square()}, n - 1).values;
    out[n] = acc.sqrt();
  }
  return out;
}

RandomVariable coord_maximal(const RandomVariable& g, int k) {
  const int depth = g.space->coord(k).depth();
  Eigen::ArrayXd out = partial_cond_exp(g, k, 0).values.abs();
  for (int m = 1; m <= depth; ++m) out = out.max(partial_cond_exp(g, k, m).values.abs());
  return {g.space, std::move(out)};
}

RandomVariable iterated_coord_maximal(const RandomVariable& g) {
  RandomVariable out = g;
  for (int k = 0; k < g.space->dims(); ++k) out = coord_maximal(out, k);
  return out;
}

AdaptedEnvelope minimal_envelope(const Martingale& f, EnvelopeKind kind) {
  const ProductSpace& sp = *f.space();
  const int N = f.depth();
  std::vector<Eigen::ArrayXd> next(N + 1);  // the quantity lambda_n has to dominate
  if (kind == EnvelopeKind::PredictableSquare) {
    auto S = square_partials(f);
    for (int n = 0; n <= N; ++n) next[n] = S[std::min(n + 1, N)];
  } else {
    for (int n = 0; n <= N; ++n) next[n] = f.partial_sum(std::min(n + 1, N)).abs();
  }
  std::vector<Eigen::ArrayXd> lam(N + 1);
  lam[0] = atom_max({&sp, next[0]}, 0).values;
  for (int n = 1; n <= N; ++n)
    lam[n] = lam[n - 1].max(atom_max({&sp, next[n]}, n).values);
  return AdaptedEnvelope(&sp, std::move(lam), false);
}

HardyNormReport hardy_norms(const Martingale& f, const MixedExponent& p) {
  HardyNormReport rep;
  rep.max_norm = mixed_norm(maximal(f), p);
  rep.square_norm = mixed_norm(square_function(f), p);
  rep.cond_square_norm = mixed_norm(cond_square_function(f), p);
  rep.pred_max_norm = mixed_norm(minimal_envelope(f, EnvelopeKind::PredictableMax).terminal(), p);
  rep.pred_square_norm =
      mixed_norm(minimal_envelope(f, EnvelopeKind::PredictableSquare).terminal(), p);
  Eigen::ArrayXd absum = f.diff(0).abs();
  for (int n = 1; n <= f.depth(); ++n) absum += f.diff(n).abs();
  rep.diff_sum_norm = mixed_norm({f.space(), std::move(absum)}, p);
  return rep;
}

PredictableMultipliers::PredictableMultipliers(const ProductSpace* space,
                                               std::vector<Eigen::ArrayXd> b, bool validate)
    : space_(space), b_(std::move(b)) {
  if (space_ == nullptr) throw std::invalid_argument("multipliers need a space");
  if (static_cast<int>(b_.size()) != space_->depth())
    throw std::invalid_argument("need one multiplier per transition, b_0..b_{N-1}");
  for (int k = 0; k < count(); ++k) {
    if (b_[k].size() != space_->points())
      throw std::invalid_argument("multiplier grid does not match the space");
    if (validate) {
      if (b_[k].abs().maxCoeff() > 1.0 + 1e-12)
        throw std::invalid_argument("multiplier exceeds 1 in absolute value");
      if (!is_level_measurable({space_, b_[k]}, k, kTol))
        throw std::invalid_argument("multiplier b_k is not F_k-measurable");
    }
  }
}

PredictableMultipliers PredictableMultipliers::constant(const ProductSpace& space, double c) {
  std::vector<Eigen::ArrayXd> b(space.depth(),
                                Eigen::ArrayXd::Constant(space.points(), c));
  return PredictableMultipliers(&space, std::move(b), true);
}

Martingale transform(const Martingale& f, const PredictableMultipliers& b) {
  if (f.space() != b.space())
    throw std::invalid_argument("martingale and multipliers live on different spaces");
  std::vector<Eigen::ArrayXd> diffs(f.depth() + 1);
  diffs[0] = Eigen::ArrayXd::Zero(f.space()->points());
  for (int k = 1; k <= f.depth(); ++k) diffs[k] = b.at(k - 1) * f.diff(k);
  return Martingale(f.space(), std::move(diffs), false);
}

double vector_inequality_ratio(const std::vector<RandomVariable>& fs, const MixedExponent& p) {
  if (fs.empty()) throw std::invalid_argument("empty sequence");
  const ProductSpace& sp = *fs[0].space;
  Eigen::ArrayXd num = Eigen::ArrayXd::Zero(sp.points());
  Eigen::ArrayXd den = Eigen::ArrayXd::Zero(sp.points());
  for (std::size_t n = 0; n < fs.size(); ++n) {
    if (fs[n].space != &sp) throw std::invalid_argument("sequence spans several spaces");
    if (fs[n].values.minCoeff() < 0.0)
      throw std::invalid_argument("sequence must be non-negative");
    const int level = std::min<int>(static_cast<int>(n), sp.depth());
    num += cond_exp(fs[n], level).values;
    den += fs[n].values;
  }
  const double dnorm = mixed_norm({&sp, den}, p);
  if (dnorm == 0.0) return 0.0;
  return mixed_norm({&sp, num}, p) / dnorm;
}

WeakTypeCheck weak_type_check(const RandomVariable& g, const Weight& phi, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("threshold must be positive");
  require_same_space(g, phi.value);
  const ProductSpace& sp = *g.space;
  const RandomVariable mf = maximal(from_terminal(g));
  const RandomVariable mphi = maximal(from_terminal(phi.value));
  WeakTypeCheck out;
  const Eigen::ArrayXd& w = sp.point_probs();
  for (Eigen::Index i = 0; i < sp.points(); ++i)
    if (mf.values[i] > rho) out.lhs += phi.value.values[i] * w[i];
  out.lhs *= rho;
  out.rhs = (g.values.abs() * mphi.values * w).sum();
  return out;
}

CounterexampleResult counterexample(int n, double p, int depth) {
  if (n < 1) throw std::invalid_argument("counterexample needs n >= 1");
  if (depth < n) throw std::invalid_argument("counterexample needs depth >= n");
  if (!(p > 1.0) || std::isinf(p))
    throw std::invalid_argument("counterexample needs 1 < p < inf");
  static thread_local std::unique_ptr<ProductSpace> cache;
  static thread_local int cache_depth = -1;
  if (cache_depth != depth) {
    cache = std::make_unique<ProductSpace>(scale_space(2, depth));
    cache_depth = depth;
  }
  const ProductSpace& sp = *cache;

  // Scale point k < depth is the bucket [2^-(k+1), 2^-k); the value on the
  // diagonal square of bucket index k is 2^{(k+1)/p}.
  RandomVariable f = constant_rv(sp, 0.0);
  for (int k = 0; k < n; ++k)
    f.values[sp.flat_index({k, k})] = std::pow(2.0, static_cast<double>(k + 1) / p);

  const MixedExponent pvec({p, MixedExponent::inf});
  CounterexampleResult out;
  out.norm_f = mixed_norm(f, pvec);
  const RandomVariable mf = maximal(from_terminal(f));
  const RandomVariable mtf = iterated_coord_maximal(f);
  out.norm_max = mixed_norm(mf, pvec);
  out.norm_coord_max = mixed_norm(mtf, pvec);

  // Inner integral over x at fixed y, minimized over y in [0, 2^-n): those
  // are the scale points with index >= n.
  const auto slice_integral = [&](const RandomVariable& v) {
    double worst = std::numeric_limits<double>::infinity();
    const auto& wx = sp.coord(0).weights();
    for (int j = n; j <= depth; ++j) {
      double acc = 0.0;
      for (int i = 0; i <= depth; ++i)
        acc += std::pow(std::abs(v.values[sp.flat_index({i, j})]), p) * wx[i];
      worst = std::min(worst, acc);
    }
    return worst;
  };
  out.slice_integral_max = slice_integral(mf);
  out.slice_integral_coord_max = slice_integral(mtf);
  return out;
}

}  // namespace mhardy
