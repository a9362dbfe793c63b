#include "mhardy/experiments.hpp"

#include "mhardy/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace mhardy {

namespace {

constexpr double kTol = 1e-9;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MixedExponent exponent_from(const std::vector<double>& e) { return MixedExponent(e); }

// Exponent class where the maximal operator is bounded: every entry in
// (1, inf), possibly preceded by a prefix of infinite entries.
bool doob_regime(const MixedExponent& p) {
  int i = 0;
  while (i < p.dims() && std::isinf(p[i])) ++i;
  for (; i < p.dims(); ++i)
    if (!(p[i] > 1.0) || std::isinf(p[i])) return false;
  return true;
}

// Exponent class of the vector inequality: a prefix of ones, the rest
// strictly between 1 and infinity.
bool vector_regime(const MixedExponent& p) {
  int i = 0;
  while (i < p.dims() && p[i] == 1.0) ++i;
  for (; i < p.dims(); ++i)
    if (!(p[i] > 1.0) || std::isinf(p[i])) return false;
  return true;
}

double doob_ceiling(const MixedExponent& p) {
  double c = 1.0;
  for (int i = 0; i < p.dims(); ++i) c *= std::isinf(p[i]) ? 1.0 : p[i] / (p[i] - 1.0);
  return c;
}

RandomVariable random_function(const ProductSpace& sp, Rng& rng, double lo, double hi) {
  Eigen::ArrayXd v(sp.points());
  for (Eigen::Index i = 0; i < sp.points(); ++i) v[i] = rng.uniform(lo, hi);
  return {&sp, std::move(v)};
}

PredictableMultipliers random_multipliers(const ProductSpace& sp, Rng& rng, bool signs_only) {
  std::vector<Eigen::ArrayXd> b(sp.depth());
  for (int k = 0; k < sp.depth(); ++k) {
    b[k].resize(sp.points());
    for (const auto& atom : sp.atoms(k)) {
      const double v = signs_only ? (rng.uniform01() < 0.5 ? -1.0 : 1.0) : rng.symmetric();
      for (Eigen::Index i : atom.points) b[k][i] = v;
    }
  }
  return PredictableMultipliers(&sp, std::move(b), false);
}

double default_t(const MixedExponent& p, AtomKind kind) {
  const double cap = std::min(1.0, p.min_entry());
  return kind == AtomKind::Max || kind == AtomKind::Square ? cap / 2.0 : cap;
}

struct RoundtripOutcome {
  double recon = 0;
  bool atoms_ok = true;
  bool taus_monotone = true;
  bool set_identity = true;  // s kind only
  double dec_norm = 0;
  double ref_norm = 0;
};

RoundtripOutcome roundtrip(const Martingale& f, const AtomicDecomposition& dec,
                           double ref_norm) {
  RoundtripOutcome out;
  out.recon = reconstruction_error(dec, f);
  out.dec_norm = decomposition_norm(dec);
  out.ref_norm = ref_norm;
  for (const auto& term : dec.terms) {
    if (term.mu == 0.0) continue;
    if (!validate_atom({term.atom, term.tau}, dec.kind, dec.p).ok) out.atoms_ok = false;
  }
  for (std::size_t j = 0; j + 1 < dec.terms.size(); ++j)
    if ((dec.terms[j + 1].tau.levels() < dec.terms[j].tau.levels()).any())
      out.taus_monotone = false;
  if (dec.kind == AtomKind::CondSquare && !dec.terms.empty()) {
    const Eigen::ArrayXd s = cond_square_function(f.centered()).values;
    for (const auto& term : dec.terms) {
      const double thr = std::ldexp(1.0, term.scale);
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        const bool finite = term.tau.levels()[i] <= f.depth();
        if (finite != (s[i] > thr)) out.set_identity = false;
      }
    }
  }
  return out;
}

using SuiteFn = std::function<SuiteResult(const ExperimentConfig&)>;

SuiteResult suite_doob(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.label_columns = {"suite", "p", "regime"};
  res.columns = {"trial", "norm_f", "norm_max", "norm_coord_max", "ratio", "ceiling",
                 "pointwise_ok", "pass"};
  const ProductSpace sp = space_from_string(cfg.space_selector);
  for (const auto& pe : cfg.exponents) {
    const MixedExponent p = exponent_from(pe);
    const bool in_regime = doob_regime(p);
    const double ceiling = doob_ceiling(p);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = Rng::for_trial(cfg.seed, trial);
      const Martingale f = random_martingale(sp, rng.next_u64());
      const RandomVariable g = f.terminal();
      const double nf = mixed_norm(g, p);
      const RandomVariable mf = maximal(f);
      const RandomVariable mtf = iterated_coord_maximal(g);
      const double nmf = mixed_norm(mf, p);
      const double nmtf = mixed_norm(mtf, p);
      const double ratio = nf > 0 ? nmf / nf : 0.0;
      const bool pointwise_ok = (mf.values - mtf.values).maxCoeff() <= kTol;
      const bool pass = pointwise_ok && (!in_regime || ratio <= ceiling + kTol);
      if (!pass) ++res.exact_failures;
      res.labels.push_back({cfg.suite, p.str(), in_regime ? "in" : "outside"});
      res.rows.push_back({static_cast<double>(trial), nf, nmf, nmtf, ratio, ceiling,
                          pointwise_ok ? 1.0 : 0.0, pass ? 1.0 : 0.0});
      res.histogram_values.push_back(ratio);
    }
  }
  return res;
}

SuiteResult suite_counterexample(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.label_columns = {"suite"};
  res.columns = {"n",          "p",        "depth",          "norm_f",
                 "integral_max", "bound_max", "integral_coord", "bound_coord",
                 "norm_max",   "norm_coord", "pass"};
  const int depth = cfg.counterexample_n;
  const double p = cfg.single_p;
  for (int n = 1; n <= cfg.counterexample_n; ++n) {
    const CounterexampleResult r = counterexample(n, p, depth);
    // The averaging chain certifies n/2^p through the coordinate maximal and
    // n/4^p through the filtration maximal.
    const double bound_coord = n / std::pow(2.0, p);
    const double bound_max = n / std::pow(4.0, p);
    const bool pass = std::abs(r.norm_f - 1.0) <= kTol &&
                      r.slice_integral_coord_max >= bound_coord - kTol &&
                      r.slice_integral_max >= bound_max - kTol &&
                      r.norm_coord_max >= r.norm_max - kTol;
    if (!pass) ++res.exact_failures;
    res.labels.push_back({cfg.suite});
    res.rows.push_back({static_cast<double>(n), p, static_cast<double>(depth), r.norm_f,
                        r.slice_integral_max, bound_max, r.slice_integral_coord_max, bound_coord,
                        r.norm_max, r.norm_coord_max, pass ? 1.0 : 0.0});
    res.histogram_values.push_back(r.norm_coord_max);
  }
  return res;
}

SuiteResult suite_weak_type(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.label_columns = {"suite"};
  res.columns = {"trial", "rho", "lhs", "rhs", "pass"};
  const ProductSpace sp = space_from_string(cfg.space_selector);
  for (int trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = Rng::for_trial(cfg.seed, trial);
    const RandomVariable g = random_function(sp, rng, -1.0, 1.0);
    const Weight phi(random_function(sp, rng, 0.25, 2.0));
    const double rho = rng.uniform(1e-3, 1.1 * g.values.abs().maxCoeff() + 1e-3);
    const WeakTypeCheck chk = weak_type_check(g, phi, rho);
    const bool pass = chk.lhs <= chk.rhs + kTol;
    if (!pass) ++res.exact_failures;
    res.labels.push_back({cfg.suite});
    res.rows.push_back({static_cast<double>(trial), rho, chk.lhs, chk.rhs, pass ? 1.0 : 0.0});
    res.histogram_values.push_back(chk.rhs > 0 ? chk.lhs / chk.rhs : 0.0);
  }
  return res;
}

SuiteResult suite_vector_ineq(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.label_columns = {"suite", "p", "regime"};
  res.columns = {"trial", "ratio", "pass"};
  const ProductSpace sp = space_from_string(cfg.space_selector);
  for (const auto& pe : cfg.exponents) {
    const MixedExponent p = exponent_from(pe);
    const bool in_regime = vector_regime(p) || doob_regime(p);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = Rng::for_trial(cfg.seed, trial);
      std::vector<RandomVariable> fs;
      for (int n = 0; n <= sp.depth(); ++n) fs.push_back(random_function(sp, rng, 0.0, 1.0));
      const double ratio = vector_inequality_ratio(fs, p);
      const bool pass = std::isfinite(ratio);
      if (!pass) ++res.exact_failures;
      res.labels.push_back({cfg.suite, p.str(), in_regime ? "in" : "outside"});
      res.rows.push_back({static_cast<double>(trial), ratio, pass ? 1.0 : 0.0});
      res.histogram_values.push_back(ratio);
    }
  }
  return res;
}

SuiteResult suite_atomic_roundtrip(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.label_columns = {"suite", "p", "kind"};
  res.columns = {"trial",     "t",       "recon_error", "atoms_valid", "taus_monotone",
                 "set_identity", "dec_norm", "ref_norm",    "ratio",       "pass"};
  const ProductSpace sp = space_from_string(cfg.space_selector);
  for (const auto& pe : cfg.exponents) {
    const MixedExponent p = exponent_from(pe);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = Rng::for_trial(cfg.seed, trial);
      const Martingale f = random_martingale(sp, rng.next_u64());
      const HardyNormReport norms = hardy_norms(f, p);
      struct Run {
        const char* kind;
        AtomicDecomposition dec;
        double ref;
      };
      std::vector<Run> runs;
      runs.push_back({"s", decompose_s(f, p, default_t(p, AtomKind::CondSquare)),
                      norms.cond_square_norm});
      runs.push_back({"P",
                      decompose_envelope(f, p, default_t(p, AtomKind::CondSquare),
                                         EnvelopeKind::PredictableMax),
                      norms.pred_max_norm});
      runs.push_back({"Q",
                      decompose_envelope(f, p, default_t(p, AtomKind::CondSquare),
                                         EnvelopeKind::PredictableSquare),
                      norms.pred_square_norm});
      runs.push_back({"M-regular",
                      decompose_regular(f, p, default_t(p, AtomKind::Max), AtomKind::Max).dec,
                      norms.max_norm});
      runs.push_back(
          {"S-regular",
           decompose_regular(f, p, default_t(p, AtomKind::Square), AtomKind::Square).dec,
           norms.square_norm});
      for (auto& run : runs) {
        const RoundtripOutcome o = roundtrip(f, run.dec, run.ref);
        const bool pass =
            o.recon <= kTol && o.atoms_ok && o.taus_monotone && o.set_identity &&
            (o.ref_norm == 0.0 || (o.dec_norm > 0.0 && std::isfinite(o.dec_norm)));
        if (!pass) ++res.exact_failures;
        res.labels.push_back({cfg.suite, p.str(), run.kind});
        res.rows.push_back({static_cast<double>(trial), run.dec.t, o.recon,
                            o.atoms_ok ? 1.0 : 0.0, o.taus_monotone ? 1.0 : 0.0,
                            o.set_identity ? 1.0 : 0.0, o.dec_norm, o.ref_norm,
                            o.ref_norm > 0 ? o.dec_norm / o.ref_norm : 0.0, pass ? 1.0 : 0.0});
        if (o.ref_norm > 0) res.histogram_values.push_back(o.dec_norm / o.ref_norm);
      }
    }
  }
  return res;
}

SuiteResult suite_decompose(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.label_columns = {"suite", "p", "kind", "row"};
  res.columns = {"k", "mu", "chi_norm", "atom_sup", "value"};
  const ProductSpace sp = space_from_string(cfg.space_selector);
  const MixedExponent p = exponent_from(cfg.exponents.at(0));
  Rng rng = Rng::for_trial(cfg.seed, 0);
  const Martingale f = random_martingale(sp, rng.next_u64());
  AtomicDecomposition dec{p, 1.0, AtomKind::CondSquare, f.start(), {}};
  if (cfg.kind == "s") {
    dec = decompose_s(f, p, cfg.t_exponent > 0 ? cfg.t_exponent : default_t(p, AtomKind::CondSquare));
  } else if (cfg.kind == "P") {
    dec = decompose_envelope(f, p, cfg.t_exponent > 0 ? cfg.t_exponent : default_t(p, AtomKind::CondSquare),
                             EnvelopeKind::PredictableMax);
  } else if (cfg.kind == "Q") {
    dec = decompose_envelope(f, p, cfg.t_exponent > 0 ? cfg.t_exponent : default_t(p, AtomKind::CondSquare),
                             EnvelopeKind::PredictableSquare);
  } else if (cfg.kind == "M" || cfg.kind == "M-regular") {
    dec = decompose_regular(f, p, cfg.t_exponent > 0 ? cfg.t_exponent : default_t(p, AtomKind::Max),
                            AtomKind::Max).dec;
  } else if (cfg.kind == "S" || cfg.kind == "S-regular") {
    dec = decompose_regular(f, p, cfg.t_exponent > 0 ? cfg.t_exponent : default_t(p, AtomKind::Square),
                            AtomKind::Square).dec;
  } else {
    throw std::invalid_argument("unknown decomposition kind: " + cfg.kind);
  }
  for (const auto& term : dec.terms) {
    const double chi_norm =
        term.tau.all_infinite() ? 0.0 : mixed_norm(term.tau.finite_indicator(), dec.p);
    double atom_sup = 0.0;
    if (term.mu > 0.0) {
      const Martingale am = from_terminal(term.atom);
      RandomVariable op = dec.kind == AtomKind::CondSquare ? cond_square_function(am)
                          : dec.kind == AtomKind::Square   ? square_function(am)
                                                           : maximal(am);
      atom_sup = (op.values * term.tau.finite_indicator().values).abs().maxCoeff();
    }
    res.labels.push_back({cfg.suite, p.str(), cfg.kind, "term"});
    res.rows.push_back({static_cast<double>(term.scale), term.mu, chi_norm, atom_sup, 0.0});
  }
  const double recon = reconstruction_error(dec, f);
  if (recon > kTol) ++res.exact_failures;
  res.labels.push_back({cfg.suite, p.str(), cfg.kind, "reconstruction_error"});
  res.rows.push_back({0.0, 0.0, 0.0, 0.0, recon});
  res.labels.push_back({cfg.suite, p.str(), cfg.kind, "decomposition_norm"});
  res.rows.push_back({0.0, 0.0, 0.0, 0.0, decomposition_norm(dec)});
  return res;
}

SuiteResult suite_davis(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.label_columns = {"suite", "p"};
  res.columns = {"trial",        "split_error", "jump_margin", "controlled_margin",
                 "jump_G",       "controlled_Q", "square_norm", "ratio_jump",
                 "ratio_controlled", "pass"};
  const ProductSpace sp = space_from_string(cfg.space_selector);
  for (const auto& pe : cfg.exponents) {
    const MixedExponent p = exponent_from(pe);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = Rng::for_trial(cfg.seed, trial);
      const Martingale f = random_martingale(sp, rng.next_u64());
      const DavisSplit split = davis_decompose(f, p);
      const double hs = mixed_norm(square_function(f), p);
      const bool pass = split.max_split_error <= kTol && split.jump_cert_margin <= kTol &&
                        split.controlled_cert_margin <= kTol;
      if (!pass) ++res.exact_failures;
      res.labels.push_back({cfg.suite, p.str()});
      res.rows.push_back({static_cast<double>(trial), split.max_split_error,
                          split.jump_cert_margin, split.controlled_cert_margin,
                          split.jump_diff_sum_norm, split.controlled_pred_square, hs,
                          hs > 0 ? split.jump_diff_sum_norm / hs : 0.0,
                          hs > 0 ? split.controlled_pred_square / hs : 0.0, pass ? 1.0 : 0.0});
      if (hs > 0) res.histogram_values.push_back(split.jump_diff_sum_norm / hs);
    }
  }
  return res;
}

SuiteResult suite_bdg(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.label_columns = {"suite", "p"};
  res.columns = {"trial", "square_norm", "max_norm", "ratio"};
  const ProductSpace sp = space_from_string(cfg.space_selector);
  for (const auto& pe : cfg.exponents) {
    const MixedExponent p = exponent_from(pe);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = Rng::for_trial(cfg.seed, trial);
      const Martingale f = random_martingale(sp, rng.next_u64());
      const double hs = mixed_norm(square_function(f), p);
      const double hm = mixed_norm(maximal(f), p);
      res.labels.push_back({cfg.suite, p.str()});
      res.rows.push_back(
          {static_cast<double>(trial), hs, hm, hm > 0 ? hs / hm : 0.0});
      if (hm > 0) res.histogram_values.push_back(hs / hm);
    }
  }
  return res;
}

SuiteResult suite_transform(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.label_columns = {"suite", "p", "multiplier"};
  res.columns = {"trial", "norm_f", "norm_transformed", "ratio", "square_dominated", "pass"};
  const ProductSpace sp = space_from_string(cfg.space_selector);
  for (const auto& pe : cfg.exponents) {
    const MixedExponent p = exponent_from(pe);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = Rng::for_trial(cfg.seed, trial);
      const Martingale f = random_martingale(sp, rng.next_u64());
      const bool signs = trial % 2 == 1;
      const PredictableMultipliers b = random_multipliers(sp, rng, signs);
      const Martingale tf = transform(f, b);
      const double nf = mixed_norm(f.terminal(), p);
      const double ntf = mixed_norm(tf.terminal(), p);
      const Eigen::ArrayXd sf = square_function(f).values;
      const Eigen::ArrayXd stf = square_function(tf).values;
      const bool dominated = (stf - sf).maxCoeff() <= (signs ? 0.0 : kTol);
      const bool pass = dominated;
      if (!pass) ++res.exact_failures;
      res.labels.push_back({cfg.suite, p.str(), signs ? "signs" : "uniform"});
      res.rows.push_back({static_cast<double>(trial), nf, ntf, nf > 0 ? ntf / nf : 0.0,
                          dominated ? 1.0 : 0.0, pass ? 1.0 : 0.0});
      if (nf > 0) res.histogram_values.push_back(ntf / nf);
    }
  }
  return res;
}

SuiteResult suite_equivalence(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.label_columns = {"suite", "p", "inequality", "regime"};
  res.columns = {"max_ratio", "exact", "violations", "trials"};
  const ProductSpace sp = space_from_string(cfg.space_selector);
  for (const auto& pe : cfg.exponents) {
    const MixedExponent p = exponent_from(pe);
    std::vector<Martingale> samples;
    samples.reserve(cfg.trials);
    for (int trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = Rng::for_trial(cfg.seed, trial);
      samples.push_back(random_martingale(sp, rng.next_u64()));
    }
    for (const auto& row : equivalence_report(samples, p)) {
      res.exact_failures += row.violations;
      res.labels.push_back({cfg.suite, p.str(), row.name, row.in_regime ? "in" : "outside"});
      res.rows.push_back({row.max_ratio, row.exact ? 1.0 : 0.0,
                          static_cast<double>(row.violations),
                          static_cast<double>(row.trials)});
      if (row.in_regime) res.histogram_values.push_back(row.max_ratio);
    }
  }
  return res;
}

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> reg = {
      {"doob-check", suite_doob},
      {"counterexample", suite_counterexample},
      {"weak-type", suite_weak_type},
      {"vector-ineq", suite_vector_ineq},
      {"atomic-roundtrip", suite_atomic_roundtrip},
      {"decompose", suite_decompose},
      {"davis", suite_davis},
      {"bdg-ratio", suite_bdg},
      {"transform-bound", suite_transform},
      {"equivalence-report", suite_equivalence},
  };
  return reg;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (registry().find(suite) == registry().end())
    throw std::invalid_argument("unknown suite: " + suite);
  if (trials < 1) throw std::invalid_argument("trial count must be >= 1");
  if (exponents.empty()) throw std::invalid_argument("exponent grid must be nonempty");
  for (const auto& e : exponents) {
    if (e.empty()) throw std::invalid_argument("empty exponent vector");
    for (double v : e)
      if (!(v > 0.0)) throw std::invalid_argument("exponent entries must be > 0");
  }
  if (counterexample_n < 1) throw std::invalid_argument("counterexample needs n >= 1");
}

std::string to_csv(const SuiteResult& result) {
  std::ostringstream os;
  for (std::size_t i = 0; i < result.label_columns.size(); ++i) {
    if (i) os << ',';
    os << result.label_columns[i];
  }
  for (std::size_t i = 0; i < result.columns.size(); ++i) {
    if (i || !result.label_columns.empty()) os << ',';
    os << result.columns[i];
  }
  os << '\n';
  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    for (std::size_t i = 0; i < result.labels[r].size(); ++i) {
      if (i) os << ',';
      os << result.labels[r][i];
    }
    for (std::size_t i = 0; i < result.rows[r].size(); ++i) {
      if (i || !result.labels[r].empty()) os << ',';
      os << fmt(result.rows[r][i]);
    }
    os << '\n';
  }
  return os.str();
}

void write_svg_histogram(const std::vector<double>& values, const std::string& path, int bins) {
  if (values.empty()) throw std::invalid_argument("histogram needs values");
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= lo) hi = lo + 1.0;
  std::vector<int> counts(bins, 0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    counts[std::min(b, bins - 1)]++;
  }
  const int peak = *std::max_element(counts.begin(), counts.end());
  const double w = 800.0, h = 400.0, margin = 40.0;
  const double bw = (w - 2 * margin) / bins;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n";
  for (int b = 0; b < bins; ++b) {
    const double bh = peak > 0 ? (h - 2 * margin) * counts[b] / peak : 0.0;
    out << "<rect x=\"" << margin + b * bw << "\" y=\"" << h - margin - bh << "\" width=\""
        << bw * 0.9 << "\" height=\"" << bh << "\" fill=\"#4878a8\"/>\n";
  }
  out << "<text x=\"" << margin << "\" y=\"" << h - 10 << "\" font-size=\"12\">" << fmt(lo)
      << "</text>\n";
  out << "<text x=\"" << w - margin - 60 << "\" y=\"" << h - 10 << "\" font-size=\"12\">"
      << fmt(hi) << "</text>\n";
  out << "</svg>\n";
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteResult run_suite(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  SuiteResult res = registry().at(config.suite)(config);
  // every data row carries the base seed, right after the suite name
  res.label_columns.insert(res.label_columns.begin() + 1, "seed");
  const std::string seed_str = std::to_string(config.seed);
  for (auto& lab : res.labels) lab.insert(lab.begin() + 1, seed_str);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream os;
  os << config.suite << ": " << res.rows.size() << " rows, " << res.exact_failures
     << " exact failures";
  res.summary = os.str();
  return res;
}

int run_and_report(const ExperimentConfig& config) {
  const SuiteResult res = run_suite(config);
  const std::string csv = to_csv(res);
  if (config.out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(config.out_path);
    if (!out) throw std::runtime_error("cannot write " + config.out_path);
    out << csv;
  }
  if (!config.svg_path.empty() && !res.histogram_values.empty())
    write_svg_histogram(res.histogram_values, config.svg_path);
  std::cerr << res.summary << " (" << res.wall_seconds << " s)\n";
  return res.exact_failures > 0 ? 1 : 0;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.value("schema_version", 0) != 1)
    throw std::runtime_error("unsupported config schema version in " + path);
  ExperimentConfig cfg;
  cfg.suite = j.at("suite").get<std::string>();
  cfg.space_selector = j.value("space", cfg.space_selector);
  if (j.contains("exponents"))
    cfg.exponents = j.at("exponents").get<std::vector<std::vector<double>>>();
  cfg.trials = j.value("trials", cfg.trials);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.counterexample_n = j.value("n", cfg.counterexample_n);
  cfg.single_p = j.value("p", cfg.single_p);
  cfg.out_path = j.value("out", cfg.out_path);
  cfg.svg_path = j.value("svg", cfg.svg_path);
  cfg.kind = j.value("kind", cfg.kind);
  cfg.t_exponent = j.value("t", cfg.t_exponent);
  return cfg;
}

}  // namespace mhardy
