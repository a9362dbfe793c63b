#include "mhardy/mixed_norm.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mhardy {

MixedExponent::MixedExponent(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("exponent vector must be nonempty");
  for (double p : entries_)
    if (!(p > 0.0)) throw std::invalid_argument("exponent entries must be > 0");
}

MixedExponent MixedExponent::uniform(int dims, double p) {
  return MixedExponent(std::vector<double>(dims, p));
}

double MixedExponent::min_entry() const {
  double m = entries_[0];
  for (double p : entries_) m = std::min(m, p);
  return m;
}

bool MixedExponent::all_finite() const {
  for (double p : entries_)
    if (std::isinf(p)) return false;
  return true;
}

bool MixedExponent::all_at_least(double bound) const {
  for (double p : entries_)
    if (p < bound) return false;
  return true;
}

bool MixedExponent::all_below(double bound) const {
  for (double p : entries_)
    if (!(p < bound)) return false;
  return true;
}

MixedExponent MixedExponent::conjugate() const {
  if (!all_at_least(1.0))
    throw std::invalid_argument("conjugate exponent requires all entries >= 1");
  std::vector<double> out(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const double p = entries_[i];
    if (std::isinf(p))
      out[i] = 1.0;
    else if (p == 1.0)
      out[i] = inf;
    else
      out[i] = p / (p - 1.0);
  }
  return MixedExponent(std::move(out));
}

MixedExponent MixedExponent::divided_by(double alpha) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("exponent divisor must be > 0");
  std::vector<double> out(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i)
    out[i] = std::isinf(entries_[i]) ? inf : entries_[i] / alpha;
  return MixedExponent(std::move(out));
}

std::string MixedExponent::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ';';
    if (std::isinf(entries_[i]))
      os << "inf";
    else
      os << entries_[i];
  }
  return os.str();
}

double mixed_norm(const RandomVariable& f, const MixedExponent& p) {
  const ProductSpace& sp = *f.space;
  if (p.dims() != sp.dims())
    throw std::invalid_argument("exponent dimension does not match the space");
  Eigen::ArrayXd cur = f.values.abs();
  // Coordinate 0 is contiguous; after each reduction the next coordinate is.
  for (int k = 0; k < sp.dims(); ++k) {
    const Eigen::ArrayXd& w = sp.coord(k).weights();
    const Eigen::Index len = sp.coord(k).size();
    const Eigen::Index blocks = cur.size() / len;
    Eigen::ArrayXd next(blocks);
    if (std::isinf(p[k])) {
      for (Eigen::Index b = 0; b < blocks; ++b) next[b] = cur.segment(b * len, len).maxCoeff();
    } else {
      const double e = p[k];
      for (Eigen::Index b = 0; b < blocks; ++b)
        next[b] = std::pow((cur.segment(b * len, len).pow(e) * w).sum(), 1.0 / e);
    }
    cur = std::move(next);
  }
  return cur[0];
}

double pairing(const RandomVariable& f, const RandomVariable& g) {
  require_same_space(f, g);
  return (f.values * g.values * f.space->point_probs()).sum();
}

namespace {

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// 1-D extremal pair for the slice x with weights w and exponent q >= 1.
// Returns the norm and writes the norming function into g.
double dual_1d(const Eigen::ArrayXd& x, const Eigen::ArrayXd& w, double q, Eigen::ArrayXd& g) {
  g = Eigen::ArrayXd::Zero(x.size());
  if ((x == 0.0).all()) return 0.0;
  if (std::isinf(q)) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < x.size(); ++i)
      if (std::abs(x[i]) > std::abs(x[best])) best = i;
    g[best] = sign_of(x[best]) / w[best];
    return std::abs(x[best]);
  }
  if (q == 1.0) {
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = sign_of(x[i]);
    return (x.abs() * w).sum();
  }
  const double nrm = std::pow((x.abs().pow(q) * w).sum(), 1.0 / q);
  g = x.unaryExpr([](double v) { return sign_of(v); }) * x.abs().pow(q - 1.0) /
      std::pow(nrm, q - 1.0);
  return nrm;
}

// Recursive extremal construction over axes 0..axis (block is contiguous in
// those axes). Returns the mixed norm of the block.
double dual_block(const ProductSpace& sp, const MixedExponent& p, const Eigen::ArrayXd& block,
                  int axis, Eigen::ArrayXd& g) {
  if (axis == 0) return dual_1d(block, sp.coord(0).weights(), p[0], g);
  const Eigen::Index len = sp.coord(axis).size();
  const Eigen::Index inner = block.size() / len;
  Eigen::ArrayXd norms(len);
  g.resize(block.size());
  for (Eigen::Index j = 0; j < len; ++j) {
    Eigen::ArrayXd sub;
    norms[j] = dual_block(sp, p, block.segment(j * inner, inner), axis - 1, sub);
    g.segment(j * inner, inner) = sub;
  }
  Eigen::ArrayXd u;
  const double nrm = dual_1d(norms, sp.coord(axis).weights(), p[axis], u);
  for (Eigen::Index j = 0; j < len; ++j) g.segment(j * inner, inner) *= u[j];
  return nrm;
}

}  // namespace

RandomVariable dual_extremal(const RandomVariable& f, const MixedExponent& p) {
  const ProductSpace& sp = *f.space;
  if (p.dims() != sp.dims())
    throw std::invalid_argument("exponent dimension does not match the space");
  if (!p.all_at_least(1.0))
    throw std::invalid_argument("dual extremal requires 1 <= p <= inf");
  Eigen::ArrayXd g;
  dual_block(sp, p, f.values, sp.dims() - 1, g);
  return {&sp, std::move(g)};
}

Weight::Weight(RandomVariable w) : value(std::move(w)) {
  if (value.values.size() == 0 || value.values.minCoeff() <= 0.0)
    throw std::invalid_argument("weight must be strictly positive");
}

double weighted_norm(const RandomVariable& f, double r, const Weight& w) {
  if (!(r > 0.0) || std::isinf(r))
    throw std::invalid_argument("weighted norm requires finite r > 0");
  require_same_space(f, w.value);
  const double s = (f.values.abs().pow(r) * w.value.values * f.space->point_probs()).sum();
  return std::pow(s, 1.0 / r);
}

}  // namespace mhardy
