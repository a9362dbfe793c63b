#include "mhardy/atomic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mhardy {

namespace {

constexpr double kTol = 1e-9;

RandomVariable kind_operator(const Martingale& m, AtomKind kind) {
  switch (kind) {
    case AtomKind::CondSquare: return cond_square_function(m);
    case AtomKind::Square: return square_function(m);
    case AtomKind::Max: return maximal(m);
  }
  throw std::logic_error("unknown atom kind");
}

// Dyadic scale window [kmin, kmax] covering the positive values of the
// driving sequence: 2^kmin sits strictly below every positive value (so the
// bottom stopped martingale vanishes) and 2^kmax at or above the maximum (so
// the scale above the window never stops).
struct ScaleWindow {
  int kmin = 0;
  int kmax = -1;
  bool empty = true;
};

ScaleWindow scale_window(const std::vector<Eigen::ArrayXd>& seq) {
  double minpos = std::numeric_limits<double>::infinity();
  double maxval = 0.0;
  for (const auto& v : seq)
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (v[i] > 0.0) minpos = std::min(minpos, v[i]);
      maxval = std::max(maxval, v[i]);
    }
  ScaleWindow w;
  if (maxval == 0.0) return w;
  w.empty = false;
  w.kmin = static_cast<int>(std::floor(std::log2(minpos))) - 1;
  w.kmax = static_cast<int>(std::ceil(std::log2(maxval)));
  while (std::ldexp(1.0, w.kmin) >= minpos) --w.kmin;  // guard against log2 rounding
  while (std::ldexp(1.0, w.kmax) < maxval) ++w.kmax;
  return w;
}

StoppingTime passage(const ProductSpace& sp, const std::vector<Eigen::ArrayXd>& checked,
                     double threshold) {
  Eigen::ArrayXi levels = Eigen::ArrayXi::Constant(sp.points(), sp.depth() + 1);
  for (Eigen::Index i = 0; i < sp.points(); ++i)
    for (int n = 0; n <= sp.depth(); ++n)
      if (checked[n][i] > threshold) {
        levels[i] = n;
        break;
      }
  return StoppingTime(&sp, std::move(levels), false);
}

// Terminal grid of (f^{tau'} - f^{tau}) / mu; both stopping times act on the
// centered part, so index 0 contributes nothing.
Eigen::ArrayXd stopped_increment(const Martingale& f, const StoppingTime& tau,
                                 const StoppingTime& tau_next, double mu) {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(f.space()->points());
  for (int m = 1; m <= f.depth(); ++m)
    out += f.diff(m) * (tau_next.keep_mask(m) - tau.keep_mask(m));
  return out / mu;
}

// Shared tail of the three decomposition builders: stopping times per scale
// are given, emit mu_k and atoms. fc is the centered martingale; base is the
// F_0 start of the original one.
AtomicDecomposition assemble(const Martingale& fc, RandomVariable base, const MixedExponent& p,
                             double t, AtomKind kind, int kmin, std::vector<StoppingTime> taus) {
  AtomicDecomposition dec{p, t, kind, std::move(base), {}};
  const ProductSpace& sp = *fc.space();
  for (std::size_t j = 0; j + 1 < taus.size(); ++j) {
    DecompositionTerm term{kmin + static_cast<int>(j), 0.0, constant_rv(sp, 0.0), taus[j]};
    const double chi_norm = taus[j].all_infinite()
                                ? 0.0
                                : mixed_norm(taus[j].finite_indicator(), p);
    term.mu = 3.0 * std::ldexp(1.0, term.scale) * chi_norm;
    if (term.mu > 0.0)
      term.atom.values = stopped_increment(fc, taus[j], taus[j + 1], term.mu);
    dec.terms.push_back(std::move(term));
  }
  return dec;
}

}  // namespace

AtomCheck validate_atom(const Atom& atom, AtomKind kind, const MixedExponent& p) {
  AtomCheck out;
  const Martingale m = from_terminal(atom.terminal);
  for (int n = 0; n <= m.depth(); ++n) {
    const Eigen::ArrayXd fn = m.partial_sum(n);
    const Eigen::ArrayXd mask = atom.tau.keep_mask(n);
    const double worst = (fn * mask).abs().maxCoeff();
    if (worst > kTol) {
      out.ok = false;
      std::ostringstream os;
      os << "condition 1 violated at n=" << n << " (|E_n a| = " << worst << " on {tau >= n})";
      out.diagnostics = os.str();
      return out;
    }
  }
  if (atom.tau.all_infinite()) return out;  // condition 2 is vacuous
  const double chi_norm = mixed_norm(atom.tau.finite_indicator(), p);
  const Eigen::ArrayXd mask = atom.tau.finite_indicator().values;
  const double sup = (kind_operator(m, kind).values * mask).abs().maxCoeff();
  if (sup * chi_norm > 1.0 + kTol) {
    out.ok = false;
    std::ostringstream os;
    os << "condition 2 violated: |op(a) chi|_inf * |chi|_p = " << sup * chi_norm << " > 1";
    out.diagnostics = os.str();
  }
  return out;
}

AtomicDecomposition decompose_s(const Martingale& f, const MixedExponent& p, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("decompose_s needs 0 < t <= 1");
  if (!p.all_finite()) throw std::invalid_argument("decompose_s needs finite exponents");
  const Martingale fc = f.centered();
  const ProductSpace& sp = *f.space();
  const int N = sp.depth();
  const auto s = cond_square_partials(fc);
  // checked[n] = s_{n+1}(f), which is F_n-measurable.
  std::vector<Eigen::ArrayXd> checked(N + 1);
  for (int n = 0; n <= N; ++n) checked[n] = s[std::min(n + 1, N)];
  const ScaleWindow w = scale_window(checked);
  if (w.empty) return AtomicDecomposition{p, t, AtomKind::CondSquare, f.start(), {}};
  std::vector<StoppingTime> taus;
  for (int k = w.kmin; k <= w.kmax + 1; ++k)
    taus.push_back(passage(sp, checked, std::ldexp(1.0, k)));
  return assemble(fc, f.start(), p, t, AtomKind::CondSquare, w.kmin, std::move(taus));
}

AtomicDecomposition decompose_envelope(const Martingale& f, const MixedExponent& p, double t,
                                       EnvelopeKind kind) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("decompose_envelope needs 0 < t <= 1");
  if (!p.all_finite()) throw std::invalid_argument("decompose_envelope needs finite exponents");
  const Martingale fc = f.centered();
  const ProductSpace& sp = *f.space();
  const int N = sp.depth();
  const AdaptedEnvelope env = minimal_envelope(fc, kind);
  std::vector<Eigen::ArrayXd> checked(N + 1);
  for (int n = 0; n <= N; ++n) checked[n] = env.at(n);
  const AtomKind akind = kind == EnvelopeKind::PredictableMax ? AtomKind::Max : AtomKind::Square;
  const ScaleWindow w = scale_window(checked);
  if (w.empty) return AtomicDecomposition{p, t, akind, f.start(), {}};
  std::vector<StoppingTime> taus;
  for (int k = w.kmin; k <= w.kmax + 1; ++k)
    taus.push_back(passage(sp, checked, std::ldexp(1.0, k)));
  return assemble(fc, f.start(), p, t, akind, w.kmin, std::move(taus));
}

RegularDecomposition decompose_regular(const Martingale& f, const MixedExponent& p, double t,
                                       AtomKind kind) {
  if (kind == AtomKind::CondSquare)
    throw std::invalid_argument("regular decomposition covers the M and S kinds");
  if (!p.all_finite()) throw std::invalid_argument("decompose_regular needs finite exponents");
  const double tmax = std::min(1.0, p.min_entry());
  if (!(t > 0.0 && t < tmax))
    throw std::invalid_argument("decompose_regular needs 0 < t < min(p_i, 1)");
  const Martingale fc = f.centered();
  const ProductSpace& sp = *f.space();
  const int N = sp.depth();

  RegularDecomposition out{AtomicDecomposition{p, t, kind, f.start(), {}}, 1.0, 0.0, 0.0};
  out.regularity_constant = regularity(sp).constant;

  // rho_k drives on |f_n| (kind M) or S_n(f) (kind S); both vanish at n = 0
  // for the centered martingale, so {rho_k = 0} is always empty.
  std::vector<Eigen::ArrayXd> driver(N + 1);
  if (kind == AtomKind::Max) {
    for (int n = 0; n <= N; ++n) driver[n] = fc.partial_sum(n).abs();
  } else {
    driver = square_partials(fc);
  }
  const ScaleWindow w = scale_window(driver);
  if (w.empty) return out;

  std::vector<StoppingTime> taus;
  std::vector<StoppingTime> rhos;
  for (int k = w.kmin; k <= w.kmax + 1; ++k) {
    const double thr = std::ldexp(1.0, k);
    const StoppingTime rho = passage(sp, driver, thr);
    // Cover stopping time: tau(x) = inf { n : x lies in the F_n-parent of an
    // F_{n+1} atom inside {rho = n+1} }.
    Eigen::ArrayXi levels = Eigen::ArrayXi::Constant(sp.points(), N + 1);
    for (int j = 1; j <= N; ++j) {
      const auto& atoms = sp.atoms(j);
      const auto& up = sp.atoms(j - 1);
      std::vector<char> in_cover(up.size(), 0);
      double level_set_prob = 0.0;
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        if (rho.levels()[atoms[a].points[0]] == j) {
          in_cover[atoms[a].parent] = 1;
          level_set_prob += atoms[a].prob;
        }
      }
      double cover_prob = 0.0;
      for (std::size_t b = 0; b < up.size(); ++b) {
        if (!in_cover[b]) continue;
        cover_prob += up[b].prob;
        for (Eigen::Index i : up[b].points) levels[i] = std::min(levels[i], j - 1);
      }
      if (level_set_prob > 0.0) {
        const double ratio = cover_prob / level_set_prob;
        if (ratio > out.regularity_constant * (1.0 + 1e-12))
          throw std::logic_error("cover measure exceeds the regularity bound");
        out.max_cover_measure_ratio = std::max(out.max_cover_measure_ratio, ratio);
      }
    }
    taus.emplace_back(&sp, std::move(levels), false);
    rhos.push_back(rho);
  }
  for (std::size_t j = 0; j + 1 < taus.size(); ++j) {
    if (!rhos[j].all_infinite()) {
      const double num = mixed_norm(taus[j].finite_indicator(), p);
      const double den = mixed_norm(rhos[j].finite_indicator(), p);
      out.cover_ratio = std::max(out.cover_ratio, num / den);
    }
  }
  out.dec = assemble(fc, f.start(), p, t, kind, w.kmin, std::move(taus));
  return out;
}

double decomposition_norm(const AtomicDecomposition& dec) {
  if (dec.terms.empty()) return 0.0;
  const ProductSpace& sp = *dec.terms[0].tau.space();
  Eigen::ArrayXd agg = Eigen::ArrayXd::Zero(sp.points());
  bool any = false;
  for (const auto& term : dec.terms) {
    if (term.mu == 0.0) continue;
    any = true;
    const double chi_norm = mixed_norm(term.tau.finite_indicator(), dec.p);
    agg += (term.tau.finite_indicator().values * (term.mu / chi_norm)).pow(dec.t);
  }
  if (!any) return 0.0;
  return mixed_norm({&sp, agg.pow(1.0 / dec.t)}, dec.p);
}

double reconstruction_error(const AtomicDecomposition& dec, const Martingale& f) {
  const ProductSpace& sp = *f.space();
  double worst = 0.0;
  std::vector<Martingale> atom_mart;
  atom_mart.reserve(dec.terms.size());
  for (const auto& term : dec.terms) atom_mart.push_back(from_terminal(term.atom));
  for (int n = 0; n <= sp.depth(); ++n) {
    Eigen::ArrayXd rec = dec.base.values;
    for (std::size_t j = 0; j < dec.terms.size(); ++j)
      if (dec.terms[j].mu != 0.0) rec += dec.terms[j].mu * atom_mart[j].partial_sum(n);
    worst = std::max(worst, (f.partial_sum(n) - rec).abs().maxCoeff());
  }
  return worst;
}

DavisSplit davis_decompose(const Martingale& f, const MixedExponent& p,
                           const std::optional<AdaptedEnvelope>& lambda) {
  const ProductSpace& sp = *f.space();
  const int N = sp.depth();
  std::vector<Eigen::ArrayXd> lam(N + 1);
  if (lambda.has_value()) {
    if (lambda->space() != &sp)
      throw std::invalid_argument("envelope lives on a different space");
    for (int n = 0; n <= N; ++n) lam[n] = lambda->at(n);
    if (lam[0].abs().maxCoeff() > 0.0)
      throw std::invalid_argument("davis envelope needs lambda_0 = 0");
    const auto S = square_partials(f);
    for (int n = 0; n <= N; ++n)
      if ((S[n] - lam[n]).maxCoeff() > kTol)
        throw std::invalid_argument("envelope does not dominate S_n(f)");
  } else {
    const auto S = square_partials(f);
    for (int n = 0; n <= N; ++n) lam[n] = S[n];
    if (lam[0].abs().maxCoeff() > 0.0)
      throw std::invalid_argument("davis default envelope needs S_0 = |d_0 f| = 0");
  }

  std::vector<Eigen::ArrayXd> dh(N + 1), dg(N + 1);
  dh[0] = f.diff(0);
  dg[0] = Eigen::ArrayXd::Zero(sp.points());
  double jump_margin = 0.0, controlled_margin = 0.0;
  for (int k = 1; k <= N; ++k) {
    const Eigen::ArrayXd big = (lam[k] > 2.0 * lam[k - 1]).cast<double>();
    const Eigen::ArrayXd small = 1.0 - big;
    const Eigen::ArrayXd jump_part = f.diff(k) * big;
    const Eigen::ArrayXd rest_part = f.diff(k) * small;
    dh[k] = jump_part - cond_exp({&sp, jump_part}, k - 1).values;
    dg[k] = rest_part - cond_exp({&sp, rest_part}, k - 1).values;
    jump_margin =
        std::max(jump_margin, (jump_part.abs() - 2.0 * (lam[k] - lam[k - 1])).maxCoeff());
    controlled_margin = std::max(controlled_margin, (dg[k].abs() - 4.0 * lam[k - 1]).maxCoeff());
  }
  DavisSplit out{Martingale(&sp, std::move(dh), false), Martingale(&sp, std::move(dg), false),
                 0.0, 0.0, 0.0, jump_margin, controlled_margin};
  Eigen::ArrayXd absum = out.jump.diff(0).abs();
  for (int n = 1; n <= N; ++n) absum += out.jump.diff(n).abs();
  out.jump_diff_sum_norm = mixed_norm({&sp, absum}, p);
  out.controlled_pred_square =
      mixed_norm(minimal_envelope(out.controlled, EnvelopeKind::PredictableSquare).terminal(), p);
  for (int n = 0; n <= N; ++n) {
    const Eigen::ArrayXd err =
        f.partial_sum(n) - out.jump.partial_sum(n) - out.controlled.partial_sum(n);
    out.max_split_error = std::max(out.max_split_error, err.abs().maxCoeff());
  }
  return out;
}

std::vector<InequalityRow> equivalence_report(const std::vector<Martingale>& samples,
                                              const MixedExponent& p) {
  struct Entry {
    std::string name;
    bool in_regime;
    bool exact;
    double num(const HardyNormReport& r) const { return num_fn(r); }
    double den(const HardyNormReport& r) const { return den_fn(r); }
    double (*num_fn)(const HardyNormReport&);
    double (*den_fn)(const HardyNormReport&);
  };
  const bool below2 = p.all_below(2.0);
  const bool above2 = p.all_at_least(2.0) && p.all_finite() && p.min_entry() > 2.0;
  const bool doob = p.all_finite() && p.min_entry() > 1.0;
  const std::vector<Entry> specs = {
      {"M<=c*s", below2, false, [](const HardyNormReport& r) { return r.max_norm; },
       [](const HardyNormReport& r) { return r.cond_square_norm; }},
      {"S<=c*s", below2, false, [](const HardyNormReport& r) { return r.square_norm; },
       [](const HardyNormReport& r) { return r.cond_square_norm; }},
      {"M<=P", true, true, [](const HardyNormReport& r) { return r.max_norm; },
       [](const HardyNormReport& r) { return r.pred_max_norm; }},
      {"S<=Q", true, true, [](const HardyNormReport& r) { return r.square_norm; },
       [](const HardyNormReport& r) { return r.pred_square_norm; }},
      {"S<=c*P", true, false, [](const HardyNormReport& r) { return r.square_norm; },
       [](const HardyNormReport& r) { return r.pred_max_norm; }},
      {"M<=c*Q", true, false, [](const HardyNormReport& r) { return r.max_norm; },
       [](const HardyNormReport& r) { return r.pred_square_norm; }},
      {"P<=c*Q", true, false, [](const HardyNormReport& r) { return r.pred_max_norm; },
       [](const HardyNormReport& r) { return r.pred_square_norm; }},
      {"Q<=c*P", true, false, [](const HardyNormReport& r) { return r.pred_square_norm; },
       [](const HardyNormReport& r) { return r.pred_max_norm; }},
      {"s<=c*P", true, false, [](const HardyNormReport& r) { return r.cond_square_norm; },
       [](const HardyNormReport& r) { return r.pred_max_norm; }},
      {"s<=c*Q", true, false, [](const HardyNormReport& r) { return r.cond_square_norm; },
       [](const HardyNormReport& r) { return r.pred_square_norm; }},
      {"S<=c*M", doob, false, [](const HardyNormReport& r) { return r.square_norm; },
       [](const HardyNormReport& r) { return r.max_norm; }},
      {"M<=c*S", doob, false, [](const HardyNormReport& r) { return r.max_norm; },
       [](const HardyNormReport& r) { return r.square_norm; }},
      {"s<=c*S", above2, false, [](const HardyNormReport& r) { return r.cond_square_norm; },
       [](const HardyNormReport& r) { return r.square_norm; }},
      // regular-case converses of the exact rows (finite spaces with positive
      // weights are always regular)
      {"P<=c*M", true, false, [](const HardyNormReport& r) { return r.pred_max_norm; },
       [](const HardyNormReport& r) { return r.max_norm; }},
      {"Q<=c*S", true, false, [](const HardyNormReport& r) { return r.pred_square_norm; },
       [](const HardyNormReport& r) { return r.square_norm; }},
  };
  std::vector<InequalityRow> rows;
  rows.reserve(specs.size());
  for (const auto& spec : specs)
    rows.push_back({spec.name, spec.in_regime, spec.exact, 0.0, 0, 0});
  for (const auto& f : samples) {
    const HardyNormReport r = hardy_norms(f, p);
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const double num = specs[i].num(r);
      const double den = specs[i].den(r);
      ++rows[i].trials;
      if (den > 0.0) rows[i].max_ratio = std::max(rows[i].max_ratio, num / den);
      if (specs[i].exact && num > den + kTol) ++rows[i].violations;
    }
  }
  return rows;
}

}  // namespace mhardy
