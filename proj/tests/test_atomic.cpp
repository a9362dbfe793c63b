#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mhardy/atomic.hpp"
#include "mhardy/rng.hpp"

#include <cmath>

using namespace mhardy;

namespace {

// one deterministic single-scale martingale: d_1 = sigma * (Rademacher step)
Martingale single_jump(const ProductSpace& sp, double sigma) {
  std::vector<Eigen::ArrayXd> diffs(sp.depth() + 1, Eigen::ArrayXd::Zero(sp.points()));
  Eigen::ArrayXd step(sp.points());
  for (Eigen::Index i = 0; i < sp.points(); ++i)
    step[i] = sp.atom_of(1, i) % 2 == 0 ? 1.0 : -1.0;
  diffs[1] = sigma * step;
  return Martingale(&sp, diffs, true);
}

void check_roundtrip(const Martingale& f, const AtomicDecomposition& dec) {
  CHECK(reconstruction_error(dec, f) < 1e-9);
  for (std::size_t j = 0; j + 1 < dec.terms.size(); ++j)
    CHECK(!(dec.terms[j + 1].tau.levels() < dec.terms[j].tau.levels()).any());
  for (const auto& term : dec.terms) {
    if (term.mu == 0.0) continue;
    const AtomCheck chk = validate_atom({term.atom, term.tau}, dec.kind, dec.p);
    INFO(chk.diagnostics);
    CHECK(chk.ok);
  }
}

}  // namespace

TEST_CASE("atom validation") {
  const ProductSpace sp = dyadic_space(1, 2);
  // zero function is an atom for any stopping time
  const Atom zero{constant_rv(sp, 0.0), StoppingTime::always(sp, 0)};
  CHECK(validate_atom(zero, AtomKind::CondSquare, MixedExponent({2.0})).ok);
  CHECK(validate_atom(zero, AtomKind::Max, MixedExponent({0.7})).ok);

  // nonzero start with tau == 0 breaks condition 1 at n = 0
  const Atom bad{constant_rv(sp, 1.0), StoppingTime::always(sp, 0)};
  const AtomCheck chk = validate_atom(bad, AtomKind::Max, MixedExponent({2.0}));
  CHECK(!chk.ok);
  CHECK(chk.diagnostics.find("condition 1") != std::string::npos);
  CHECK(chk.diagnostics.find("n=0") != std::string::npos);

  // vanishing conditional expectations up to tau == 1 but too large for the
  // size bound
  Eigen::ArrayXd v(4);
  v << 8.0, -8.0, 8.0, -8.0;
  const Atom big{{&sp, v}, StoppingTime::always(sp, 1)};
  const AtomCheck chk2 = validate_atom(big, AtomKind::Max, MixedExponent({2.0}));
  CHECK(!chk2.ok);
  CHECK(chk2.diagnostics.find("condition 2") != std::string::npos);
}

TEST_CASE("decomposition of the zero martingale is empty") {
  const ProductSpace sp = dyadic_space(2, 2);
  const Martingale z = from_terminal(constant_rv(sp, 0.0));
  const MixedExponent p({1.5, 0.8});
  CHECK(decompose_s(z, p, 0.5).terms.empty());
  CHECK(decompose_envelope(z, p, 0.5, EnvelopeKind::PredictableMax).terms.empty());
  CHECK(decompose_regular(z, p, 0.3, AtomKind::Max).dec.terms.empty());
  CHECK(decomposition_norm(decompose_s(z, p, 0.5)) == 0.0);
  CHECK(reconstruction_error(decompose_s(z, p, 0.5), z) == 0.0);
}

TEST_CASE("single-scale martingale produces one contributing scale") {
  const ProductSpace sp = dyadic_space(1, 3);
  const double sigma = 0.7;
  const Martingale f = single_jump(sp, sigma);
  const MixedExponent p({2.0});
  const AtomicDecomposition dec = decompose_s(f, p, 1.0);
  int contributing = 0;
  for (const auto& term : dec.terms)
    if (term.mu != 0.0 && term.atom.values.abs().maxCoeff() > 0) ++contributing;
  CHECK(contributing == 1);
  // the contributing scale straddles sigma: 2^k < sigma <= 2^{k+1}
  for (const auto& term : dec.terms) {
    if (term.mu == 0.0 || term.atom.values.abs().maxCoeff() == 0) continue;
    CHECK(std::ldexp(1.0, term.scale) < sigma);
    CHECK(sigma <= std::ldexp(1.0, term.scale + 1));
    CHECK(term.mu == doctest::Approx(3.0 * std::ldexp(1.0, term.scale)));
  }
  check_roundtrip(f, dec);

  // the P-decomposition of a deterministic martingale straddles max |f_n|
  const AtomicDecomposition decP = decompose_envelope(f, p, 1.0, EnvelopeKind::PredictableMax);
  check_roundtrip(f, decP);
  int live = 0;
  for (const auto& term : decP.terms)
    if (term.mu != 0.0 && term.atom.values.abs().maxCoeff() > 0) ++live;
  CHECK(live == 1);
}

TEST_CASE("s-decomposition on random martingales") {
  const ProductSpace sp = dyadic_space(2, 2);
  const MixedExponent p({1.5, 0.8});
  Rng rng(61);
  for (int rep = 0; rep < 25; ++rep) {
    const Martingale f = random_martingale(sp, rng.next_u64());
    const AtomicDecomposition dec = decompose_s(f, p, 0.5);
    check_roundtrip(f, dec);
    // set identity {tau_k < inf} = {s(f) > 2^k}
    const Eigen::ArrayXd s = cond_square_function(f).values;
    for (const auto& term : dec.terms) {
      const double thr = std::ldexp(1.0, term.scale);
      for (Eigen::Index i = 0; i < sp.points(); ++i)
        CHECK(term.tau.finite_at(i) == (s[i] > thr));
    }
  }
  CHECK_THROWS(decompose_s(random_martingale(sp, 1), p, 0.0));
  CHECK_THROWS(decompose_s(random_martingale(sp, 1), p, 1.5));
  CHECK_THROWS(decompose_s(random_martingale(sp, 1), MixedExponent({2.0, MixedExponent::inf}), 0.5));
  CHECK_THROWS(decompose_envelope(random_martingale(sp, 1), p, 0.0, EnvelopeKind::PredictableMax));
}

TEST_CASE("martingales with a nonzero start reconstruct through the base term") {
  const ProductSpace sp = dyadic_space(1, 3);
  Rng rng(97);
  Eigen::ArrayXd v(sp.points());
  for (Eigen::Index i = 0; i < sp.points(); ++i) v[i] = rng.uniform(0.5, 2.0);
  const Martingale f = from_terminal({&sp, v});  // E_0 f is far from zero
  REQUIRE(f.start().values.abs().maxCoeff() > 0.1);
  const MixedExponent p({2.0});
  check_roundtrip(f, decompose_s(f, p, 1.0));
  check_roundtrip(f, decompose_envelope(f, p, 1.0, EnvelopeKind::PredictableSquare));
  check_roundtrip(f, decompose_regular(f, p, 0.4, AtomKind::Max).dec);
}

TEST_CASE("envelope decompositions reconstruct and reverse-bound the norm") {
  const ProductSpace sp = dyadic_space(2, 2);
  Rng rng(67);
  for (const auto& pe : {std::vector<double>{1.5, 0.8}, {2.0, 2.0}}) {
    const MixedExponent p(pe);
    for (int rep = 0; rep < 15; ++rep) {
      const Martingale f = random_martingale(sp, rng.next_u64());
      const HardyNormReport norms = hardy_norms(f, p);
      const AtomicDecomposition decP = decompose_envelope(f, p, 1.0, EnvelopeKind::PredictableMax);
      const AtomicDecomposition decQ =
          decompose_envelope(f, p, 1.0, EnvelopeKind::PredictableSquare);
      check_roundtrip(f, decP);
      check_roundtrip(f, decQ);
      // reverse inequality: the norm never exceeds the aggregate
      CHECK(norms.pred_max_norm <= decomposition_norm(decP) + 1e-9);
      CHECK(norms.pred_square_norm <= decomposition_norm(decQ) + 1e-9);
    }
  }
}

TEST_CASE("regular decomposition with parent covers") {
  const ProductSpace sp1 = dyadic_space(1, 3);
  Rng rng(71);
  const MixedExponent p1({2.0});
  for (int rep = 0; rep < 10; ++rep) {
    const Martingale f = random_martingale(sp1, rng.next_u64());
    const RegularDecomposition reg = decompose_regular(f, p1, 0.4, AtomKind::Max);
    CHECK(reg.regularity_constant == doctest::Approx(2.0));
    CHECK(reg.max_cover_measure_ratio <= 2.0 + 1e-12);
    CHECK(std::isfinite(reg.cover_ratio));
    check_roundtrip(f, reg.dec);
  }

  const ProductSpace sp2 = dyadic_space(2, 2);
  const MixedExponent p2({0.9, 1.4});
  for (int rep = 0; rep < 10; ++rep) {
    const Martingale f = random_martingale(sp2, rng.next_u64());
    const RegularDecomposition reg = decompose_regular(f, p2, 0.4, AtomKind::Max);
    CHECK(reg.max_cover_measure_ratio <= regularity(sp2).constant + 1e-12);
    check_roundtrip(f, reg.dec);
    const RegularDecomposition regS = decompose_regular(f, p2, 0.4, AtomKind::Square);
    check_roundtrip(f, regS.dec);
  }
  CHECK_THROWS(decompose_regular(random_martingale(sp2, 3), p2, 0.9, AtomKind::Max));
  CHECK_THROWS(decompose_regular(random_martingale(sp2, 3), p2, 0.4, AtomKind::CondSquare));
}

TEST_CASE("decomposition norm") {
  const ProductSpace sp = dyadic_space(1, 2);
  const MixedExponent p({2.0});
  // single term with tau == 0: chi == 1, the aggregate is mu itself
  AtomicDecomposition dec{p, 1.0, AtomKind::Max, constant_rv(sp, 0.0), {}};
  dec.terms.push_back({0, 0.75, constant_rv(sp, 0.0), StoppingTime::always(sp, 0)});
  CHECK(decomposition_norm(dec) == doctest::Approx(0.75));
  // dropping a term never increases the aggregate
  dec.terms.push_back({1, 0.5, constant_rv(sp, 0.0), StoppingTime::always(sp, 0)});
  const double both = decomposition_norm(dec);
  dec.terms.pop_back();
  CHECK(decomposition_norm(dec) <= both + 1e-12);
}

TEST_CASE("two-sided equivalence band for the s-decomposition") {
  const ProductSpace sp = dyadic_space(2, 2);
  const MixedExponent p({1.5, 2.0});
  Rng rng(73);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int rep = 0; rep < 40; ++rep) {
    const Martingale f = random_martingale(sp, rng.next_u64());
    const double hs = hardy_norms(f, p).cond_square_norm;
    if (hs == 0.0) continue;
    const double ratio = decomposition_norm(decompose_s(f, p, 1.0)) / hs;
    CHECK(ratio > 0.0);
    CHECK(std::isfinite(ratio));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo > 0.0);
  CHECK(std::isfinite(hi));
}

TEST_CASE("davis split of the zero and single-jump martingales") {
  const ProductSpace sp = dyadic_space(1, 4);
  const MixedExponent p({2.0});
  const DavisSplit z = davis_decompose(from_terminal(constant_rv(sp, 0.0)), p);
  CHECK(maximal(z.jump).values.maxCoeff() == 0.0);
  CHECK(maximal(z.controlled).values.maxCoeff() == 0.0);

  // one jump: lambda_0 = 0 < lambda_1, so the difference routes to the jump
  // part minus its compensator and g keeps only the compensator
  const Martingale f = single_jump(sp, 1.0);
  const DavisSplit split = davis_decompose(f, p);
  const Eigen::ArrayXd comp = cond_exp({&sp, f.diff(1)}, 0).values;
  CHECK((split.jump.diff(1) - (f.diff(1) - comp)).abs().maxCoeff() < 1e-12);
  CHECK((split.controlled.diff(1) + comp.abs() * 0.0).abs().maxCoeff() < 1e-12);
  CHECK(split.max_split_error < 1e-12);
}

TEST_CASE("davis certificates on random martingales") {
  const ProductSpace sp = dyadic_space(1, 4);
  const MixedExponent p({2.0});
  Rng rng(79);
  for (int rep = 0; rep < 30; ++rep) {
    const Martingale f = random_martingale(sp, rng.next_u64());
    const DavisSplit split = davis_decompose(f, p);
    CHECK(split.max_split_error < 1e-9);
    CHECK(split.jump_cert_margin <= 1e-9);
    CHECK(split.controlled_cert_margin <= 1e-9);
    const double hs = mixed_norm(square_function(f), p);
    if (hs > 0) {
      CHECK(std::isfinite(split.jump_diff_sum_norm / hs));
      CHECK(std::isfinite(split.controlled_pred_square / hs));
    }
    // |d_k g| <= 4 lambda_{k-1} with the default envelope lambda = S
    const auto S = square_partials(f);
    for (int k = 1; k <= sp.depth(); ++k)
      CHECK((split.controlled.diff(k).abs() - 4.0 * S[k - 1]).maxCoeff() <= 1e-9);
  }
  // an envelope that fails to dominate S is rejected
  std::vector<Eigen::ArrayXd> lam(sp.depth() + 1, Eigen::ArrayXd::Zero(sp.points()));
  CHECK_THROWS(davis_decompose(random_martingale(sp, 5), p,
                               AdaptedEnvelope(&sp, lam, false)));
}

TEST_CASE("equivalence report") {
  const ProductSpace sp = dyadic_space(2, 2);
  Rng rng(83);
  std::vector<Martingale> samples;
  for (int rep = 0; rep < 25; ++rep) samples.push_back(random_martingale(sp, rng.next_u64()));

  const auto rows = equivalence_report(samples, MixedExponent({1.3, 2.5}));
  for (const auto& row : rows) {
    CHECK(row.trials == 25);
    if (row.exact) CHECK(row.violations == 0);
    CHECK(std::isfinite(row.max_ratio));
  }

  // deterministic martingales: S and s coincide, ratio exactly 1
  std::vector<Martingale> det;
  det.push_back(single_jump(sp, 0.9));
  const auto drows = equivalence_report(det, MixedExponent({2.0, 2.0}));
  for (const auto& row : drows)
    if (row.name == "S<=c*s") CHECK(row.max_ratio == doctest::Approx(1.0).epsilon(1e-9));
}
