#include "mhardy/martingale.hpp"

#include "mhardy/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mhardy {

namespace {
constexpr double kTol = 1e-9;
}

RandomVariable cond_exp(const RandomVariable& g, int level) {
  const ProductSpace& sp = *g.space;
  const auto& table = sp.atom_table(level);
  const auto& atoms = sp.atoms(level);
  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(atoms.size());
  const Eigen::ArrayXd& w = sp.point_probs();
  for (Eigen::Index i = 0; i < g.values.size(); ++i) acc[table[i]] += g.values[i] * w[i];
  Eigen::ArrayXd out(g.values.size());
  for (Eigen::Index i = 0; i < g.values.size(); ++i)
    out[i] = acc[table[i]] / atoms[table[i]].prob;
  return {&sp, std::move(out)};
}

RandomVariable partial_cond_exp(const RandomVariable& g, int k, int level) {
  const ProductSpace& sp = *g.space;
  if (k < 0 || k >= sp.dims()) throw std::out_of_range("coordinate index out of range");
  const CoordinateSpace& cs = sp.coord(k);
  if (level < 0 || level > cs.depth()) throw std::out_of_range("filtration level out of range");
  const Eigen::Index sk = sp.stride(k);
  const Eigen::Index size_k = cs.size();
  const Eigen::Index groups_per_cell = g.values.size() / size_k;
  const Eigen::ArrayXd& wk = cs.weights();

  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(cs.cell_count(level) * groups_per_cell);
  auto group_of = [&](Eigen::Index i, int cell) {
    const Eigen::Index low = i % sk;
    const Eigen::Index high = i / (sk * size_k);
    return cell * groups_per_cell + low + high * sk;
  };
  for (Eigen::Index i = 0; i < g.values.size(); ++i) {
    const int ik = sp.coord_index(i, k);
    acc[group_of(i, cs.cell_of(level, ik))] += g.values[i] * wk[ik];
  }
  Eigen::ArrayXd out(g.values.size());
  for (Eigen::Index i = 0; i < g.values.size(); ++i) {
    const int cell = cs.cell_of(level, sp.coord_index(i, k));
    out[i] = acc[group_of(i, cell)] / cs.cell_prob(level, cell);
  }
  return {&sp, std::move(out)};
}

RandomVariable atom_max(const RandomVariable& g, int level) {
  const ProductSpace& sp = *g.space;
  const auto& table = sp.atom_table(level);
  const auto& atoms = sp.atoms(level);
  Eigen::ArrayXd acc =
      Eigen::ArrayXd::Constant(atoms.size(), -std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < g.values.size(); ++i)
    acc[table[i]] = std::max(acc[table[i]], g.values[i]);
  Eigen::ArrayXd out(g.values.size());
  for (Eigen::Index i = 0; i < g.values.size(); ++i) out[i] = acc[table[i]];
  return {&sp, std::move(out)};
}

Martingale::Martingale(const ProductSpace* space, std::vector<Eigen::ArrayXd> diffs,
                       bool validate)
    : space_(space), diffs_(std::move(diffs)) {
  if (space_ == nullptr) throw std::invalid_argument("martingale needs a space");
  if (static_cast<int>(diffs_.size()) != space_->depth() + 1)
    throw std::invalid_argument("martingale needs one difference per filtration level");
  for (const auto& d : diffs_)
    if (d.size() != space_->points())
      throw std::invalid_argument("difference grid does not match the space");
  if (validate) {
    for (int n = 0; n <= space_->depth(); ++n) {
      RandomVariable dn{space_, diffs_[n]};
      if (!is_level_measurable(dn, n, kTol))
        throw std::invalid_argument("difference is not measurable at its level");
      if (n >= 1) {
        const RandomVariable prev = cond_exp(dn, n - 1);
        if (prev.values.abs().maxCoeff() > kTol)
          throw std::invalid_argument("difference is not conditionally centered");
      }
    }
  }
}

Eigen::ArrayXd Martingale::partial_sum(int n) const {
  if (n < 0 || n > depth()) throw std::out_of_range("martingale level out of range");
  Eigen::ArrayXd s = diffs_[0];
  for (int m = 1; m <= n; ++m) s += diffs_[m];
  return s;
}

Martingale Martingale::centered() const {
  std::vector<Eigen::ArrayXd> d = diffs_;
  d[0].setZero();
  return Martingale(space_, std::move(d), false);
}

Martingale from_terminal(const RandomVariable& g) {
  const ProductSpace& sp = *g.space;
  std::vector<Eigen::ArrayXd> diffs(sp.depth() + 1);
  Eigen::ArrayXd prev = cond_exp(g, 0).values;
  diffs[0] = prev;
  for (int n = 1; n <= sp.depth(); ++n) {
    Eigen::ArrayXd cur = cond_exp(g, n).values;
    diffs[n] = cur - prev;
    prev = std::move(cur);
  }
  return Martingale(&sp, std::move(diffs), false);
}

Martingale random_martingale(const ProductSpace& space, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::ArrayXd> diffs(space.depth() + 1);
  diffs[0] = Eigen::ArrayXd::Zero(space.points());
  for (int n = 1; n <= space.depth(); ++n) {
    const auto& atoms = space.atoms(n);
    Eigen::ArrayXd raw(space.points());
    for (const auto& atom : atoms) {
      const double v = rng.symmetric();
      for (Eigen::Index i : atom.points) raw[i] = v;
    }
    RandomVariable rv{&space, std::move(raw)};
    diffs[n] = rv.values - cond_exp(rv, n - 1).values;
  }
  return Martingale(&space, std::move(diffs), false);
}

StoppingTime::StoppingTime(const ProductSpace* space, Eigen::ArrayXi levels, bool validate)
    : space_(space), levels_(std::move(levels)) {
  if (space_ == nullptr) throw std::invalid_argument("stopping time needs a space");
  if (levels_.size() != space_->points())
    throw std::invalid_argument("stopping time grid does not match the space");
  const int inf = infinity_level();
  if ((levels_ < 0).any() || (levels_ > inf).any())
    throw std::invalid_argument("stopping level out of range");
  if (validate) {
    // {nu = n} must be a union of F_n atoms.
    for (int n = 0; n <= space_->depth(); ++n) {
      const auto& table = space_->atom_table(n);
      const auto& atoms = space_->atoms(n);
      std::vector<signed char> state(atoms.size(), -1);
      for (Eigen::Index i = 0; i < levels_.size(); ++i) {
        const signed char hit = levels_[i] == n ? 1 : 0;
        if (state[table[i]] == -1)
          state[table[i]] = hit;
        else if (state[table[i]] != hit)
          throw std::invalid_argument("stopping time is not measurable at its level");
      }
    }
  }
}

StoppingTime StoppingTime::always(const ProductSpace& space, int level) {
  return StoppingTime(&space, Eigen::ArrayXi::Constant(space.points(), level), false);
}

StoppingTime StoppingTime::never(const ProductSpace& space) {
  return StoppingTime(&space, Eigen::ArrayXi::Constant(space.points(), space.depth() + 1), false);
}

RandomVariable StoppingTime::finite_indicator() const {
  Eigen::ArrayXd v(levels_.size());
  for (Eigen::Index i = 0; i < levels_.size(); ++i) v[i] = finite_at(i) ? 1.0 : 0.0;
  return {space_, std::move(v)};
}

Eigen::ArrayXd StoppingTime::keep_mask(int m) const {
  Eigen::ArrayXd v(levels_.size());
  for (Eigen::Index i = 0; i < levels_.size(); ++i) v[i] = levels_[i] >= m ? 1.0 : 0.0;
  return v;
}

bool StoppingTime::all_infinite() const { return (levels_ > space_->depth()).all(); }

Martingale stop(const Martingale& f, const StoppingTime& nu) {
  if (f.space() != nu.space())
    throw std::invalid_argument("martingale and stopping time live on different spaces");
  std::vector<Eigen::ArrayXd> diffs(f.depth() + 1);
  for (int m = 0; m <= f.depth(); ++m) diffs[m] = f.diff(m) * nu.keep_mask(m);
  return Martingale(f.space(), std::move(diffs), false);
}

StoppingTime first_passage(const std::vector<RandomVariable>& seq, double threshold,
                           int offset) {
  if (seq.empty()) throw std::invalid_argument("first passage needs a nonempty sequence");
  if (offset != 0 && offset != 1) throw std::invalid_argument("offset must be 0 or 1");
  const ProductSpace& sp = *seq[0].space;
  const int last = static_cast<int>(seq.size()) - 1;
  for (int n = 0; n <= sp.depth(); ++n) {
    const RandomVariable& checked = seq[std::min(n + offset, last)];
    if (checked.space != &sp) throw std::invalid_argument("sequence spans several spaces");
    if (!is_level_measurable(checked, n, kTol))
      throw std::invalid_argument("sequence is not adapted after the offset shift");
  }
  Eigen::ArrayXi levels = Eigen::ArrayXi::Constant(sp.points(), sp.depth() + 1);
  for (Eigen::Index i = 0; i < sp.points(); ++i) {
    for (int n = 0; n <= sp.depth(); ++n) {
      if (seq[std::min(n + offset, last)].values[i] > threshold) {
        levels[i] = n;
        break;
      }
    }
  }
  return StoppingTime(&sp, std::move(levels), false);
}

AdaptedEnvelope::AdaptedEnvelope(const ProductSpace* space, std::vector<Eigen::ArrayXd> lambda,
                                 bool validate)
    : space_(space), lambda_(std::move(lambda)) {
  if (space_ == nullptr) throw std::invalid_argument("envelope needs a space");
  if (static_cast<int>(lambda_.size()) != space_->depth() + 1)
    throw std::invalid_argument("envelope needs one function per filtration level");
  for (const auto& l : lambda_)
    if (l.size() != space_->points())
      throw std::invalid_argument("envelope grid does not match the space");
  if (validate) {
    for (int n = 0; n <= space_->depth(); ++n) {
      if (lambda_[n].minCoeff() < -kTol)
        throw std::invalid_argument("envelope must be non-negative");
      if (!is_level_measurable({space_, lambda_[n]}, n, kTol))
        throw std::invalid_argument("envelope is not adapted");
      if (n >= 1 && (lambda_[n] - lambda_[n - 1]).minCoeff() < -kTol)
        throw std::invalid_argument("envelope must be non-decreasing");
    }
  }
}

}  // namespace mhardy
