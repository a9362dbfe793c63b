#pragma once

#include "mhardy/operators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mhardy {

enum class AtomKind { CondSquare, Square, Max };  // s / S / M atoms

/// Atom candidate: terminal grid a (the induced martingale is E_n a) and the
/// stopping time tau it is tied to.
struct Atom {
  RandomVariable terminal;
  StoppingTime tau;
};

struct AtomCheck {
  bool ok = true;
  std::string diagnostics;  // empty when ok
};

/// Checks the two atom conditions within 1e-9: E_n a vanishes on {tau >= n}
/// for every n, and the kind operator of a is bounded on {tau < inf} by the
/// reciprocal mixed norm of its indicator. The zero function passes for any
/// tau.
AtomCheck validate_atom(const Atom& atom, AtomKind kind, const MixedExponent& p);

struct DecompositionTerm {
  int scale = 0;       // the dyadic index k of this term
  double mu = 0;       // 3 * 2^k * |chi_{tau_k < inf}|_p
  RandomVariable atom; // terminal grid of a^k (zero grid when mu == 0)
  StoppingTime tau;
};

/// f_n = base + sum_k mu_k E_n a^k with finitely many scales k. The base is
/// the F_0 start d_0 f, which is zero for martingales in the strict
/// convention; atoms always have E_0 a = 0, so a nonzero start can never be
/// carried by the atoms themselves.
struct AtomicDecomposition {
  MixedExponent p;
  double t = 1.0;
  AtomKind kind = AtomKind::CondSquare;
  RandomVariable base;
  std::vector<DecompositionTerm> terms;
};

/// Decomposition through the conditional square function: tau_k is the first
/// passage of s_{n+1}(f) over 2^k, atoms are scaled stopped increments.
/// Scales run over the dyadic window of the positive partial values of s.
AtomicDecomposition decompose_s(const Martingale& f, const MixedExponent& p, double t);

/// Decomposition through the minimal predictable envelope (PredictableMax
/// for the P norm with M-atoms, PredictableSquare for the Q norm with
/// S-atoms): tau_k is the first passage of lambda_n over 2^k.
AtomicDecomposition decompose_envelope(const Martingale& f, const MixedExponent& p, double t,
                                       EnvelopeKind kind);

struct RegularDecomposition {
  AtomicDecomposition dec;
  double regularity_constant = 1.0;
  /// max over scales of |chi_{tau_k < inf}|_p / |chi_{rho_k < inf}|_p
  /// (the stopping-time cover comparison); 0 when no scale is stopped.
  double cover_ratio = 0.0;
  double max_cover_measure_ratio = 0.0;  // max P(cover) / P(level set)
};

/// Decomposition on a regular space for the M or S Hardy norm: rho_k is the
/// first passage of |f_n| (or S_n(f)) over 2^k and tau_k the predictable
/// cover stopping time built from the parent atoms of each {rho_k = j}.
/// Requires 0 < t < min(p_1, ..., p_d, 1).
RegularDecomposition decompose_regular(const Martingale& f, const MixedExponent& p, double t,
                                       AtomKind kind);

/// The l_t-aggregate mixed norm
/// | ( sum_k ( mu_k chi_{tau_k<inf} / |chi_{tau_k<inf}|_p )^t )^{1/t} |_p,
/// skipping zero-mu terms.
double decomposition_norm(const AtomicDecomposition& dec);

/// max over n of the sup-norm of f_n - (base + sum_k mu_k E_n a^k).
double reconstruction_error(const AtomicDecomposition& dec, const Martingale& f);

struct DavisSplit {
  Martingale jump;         // h: carries the large differences, compensated
  Martingale controlled;   // g: |d_k g| <= 4 lambda_{k-1}
  double jump_diff_sum_norm = 0;    // |h|_G
  double controlled_pred_square = 0;  // Q norm of g
  double max_split_error = 0;       // max_n sup |f_n - h_n - g_n|
  double jump_cert_margin = 0;      // max violation of |d_k f| chi <= 2(lam_k - lam_{k-1})
  double controlled_cert_margin = 0;  // max violation of |d_k g| <= 4 lam_{k-1}
};

/// Davis splitting along an envelope with lambda_0 = 0 and S_n(f) <= lambda_n
/// (default lambda_n = S_n(f)): differences with lambda_k > 2 lambda_{k-1}
/// go to h minus their compensator, the rest to g.
DavisSplit davis_decompose(const Martingale& f, const MixedExponent& p,
                           const std::optional<AdaptedEnvelope>& lambda = std::nullopt);

struct InequalityRow {
  std::string name;
  bool in_regime = false;   // sample exponent lies in the stated validity range
  bool exact = false;       // constant-free inequality, asserted per sample
  double max_ratio = 0.0;
  int violations = 0;       // exact rows only
  int trials = 0;
};

/// Empirical constants for the pairwise Hardy-norm inequalities over a sample
/// of martingales. Exact rows (constant 1) are checked within 1e-9; the rest
/// record the largest observed ratio.
std::vector<InequalityRow> equivalence_report(const std::vector<Martingale>& samples,
                                              const MixedExponent& p);

}  // namespace mhardy
