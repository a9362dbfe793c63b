#pragma once

// Independent reference computations used only by the test suites. These
// deliberately avoid the library code paths they check.

#include "mhardy/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

namespace mhardy::oracle {

// Exhaustive minimization of |lambda_N|_p over discretized envelopes
// dominating the target sequence (|f_{n+1}| or S_{n+1}(f) per atom). The
// candidate grid holds every per-atom constraint value plus midpoints and a
// padded top, so it contains the optimum of any envelope built from the data;
// the terminal level is filled with its minimal feasible value because the
// objective is pointwise monotone in lambda_N alone.
inline double brute_force_envelope_norm(const Martingale& f, EnvelopeKind kind,
                                        const MixedExponent& p) {
  const ProductSpace& sp = *f.space();
  const int N = sp.depth();
  std::vector<Eigen::ArrayXd> target(N + 1);
  if (kind == EnvelopeKind::PredictableSquare) {
    const auto S = square_partials(f);
    for (int n = 0; n <= N; ++n) target[n] = S[std::min(n + 1, N)];
  } else {
    for (int n = 0; n <= N; ++n) target[n] = f.partial_sum(std::min(n + 1, N)).abs();
  }

  // per-level, per-atom lower bounds
  struct Slot {
    int level;
    int atom;
    double bound;
  };
  std::vector<Slot> slots;  // levels 0..N-1 enumerated, level N derived
  std::vector<std::vector<double>> atom_bound(N + 1);
  for (int n = 0; n <= N; ++n) {
    const auto& atoms = sp.atoms(n);
    atom_bound[n].resize(atoms.size());
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      double m = 0.0;
      for (Eigen::Index i : atoms[a].points) m = std::max(m, target[n][i]);
      atom_bound[n][a] = m;
      if (n < N) slots.push_back({n, static_cast<int>(a), m});
    }
  }

  std::set<double> grid;
  for (int n = 0; n <= N; ++n)
    for (double b : atom_bound[n]) grid.insert(b);
  std::vector<double> candidates(grid.begin(), grid.end());
  const std::size_t base = candidates.size();
  for (std::size_t i = 0; i + 1 < base; ++i)
    candidates.push_back(0.5 * (candidates[i] + candidates[i + 1]));
  candidates.push_back(candidates.empty() ? 1.0 : 2.0 * candidates[base - 1] + 1.0);
  std::sort(candidates.begin(), candidates.end());

  std::vector<double> chosen(slots.size(), 0.0);
  double best = std::numeric_limits<double>::infinity();

  const auto evaluate = [&]() {
    // terminal level: minimal feasible value per point given lambda_{N-1}
    Eigen::ArrayXd lamN(sp.points());
    for (Eigen::Index i = 0; i < sp.points(); ++i) {
      double lower = atom_bound[N][sp.atom_of(N, i)];
      if (N >= 1) {
        // find the slot of this point at level N-1
        const int a = sp.atom_of(N - 1, i);
        for (std::size_t s = 0; s < slots.size(); ++s)
          if (slots[s].level == N - 1 && slots[s].atom == a) lower = std::max(lower, chosen[s]);
      }
      lamN[i] = lower;
    }
    best = std::min(best, mixed_norm({&sp, lamN}, p));
  };

  const std::function<void(std::size_t)> recurse = [&](std::size_t s) {
    if (s == slots.size()) {
      evaluate();
      return;
    }
    // monotonicity: at least the chosen value of the parent atom
    double lower = slots[s].bound;
    if (slots[s].level > 0) {
      const int parent = sp.atoms(slots[s].level)[slots[s].atom].parent;
      for (std::size_t t = 0; t < s; ++t)
        if (slots[t].level == slots[s].level - 1 && slots[t].atom == parent)
          lower = std::max(lower, chosen[t]);
    }
    for (double c : candidates) {
      if (c < lower) continue;
      chosen[s] = c;
      recurse(s + 1);
    }
  };
  recurse(0);
  return best;
}

// Witness function of the (p, inf) counterexample on the full 2^N x 2^N
// dyadic grid, straight from the interval definition.
inline RandomVariable full_grid_witness(const ProductSpace& sp, int n, double p) {
  RandomVariable f = constant_rv(sp, 0.0);
  for (Eigen::Index i = 0; i < sp.points(); ++i) {
    const double x = sp.coord(0).labels()[sp.coord_index(i, 0)];
    const double y = sp.coord(1).labels()[sp.coord_index(i, 1)];
    for (int k = 1; k <= n; ++k) {
      const double lo = std::ldexp(1.0, -k), hi = std::ldexp(1.0, -k + 1);
      if (x >= lo && x < hi && y >= lo && y < hi)
        f.values[i] = std::pow(2.0, static_cast<double>(k) / p);
    }
  }
  return f;
}

// min over grid points y < 2^-n of the x-integral of |v|^p.
inline double full_grid_slice_integral(const RandomVariable& v, int n, double p) {
  const ProductSpace& sp = *v.space;
  const auto& wx = sp.coord(0).weights();
  double worst = std::numeric_limits<double>::infinity();
  for (int iy = 0; iy < sp.coord(1).size(); ++iy) {
    if (sp.coord(1).labels()[iy] >= std::ldexp(1.0, -n)) continue;
    double acc = 0.0;
    for (int ix = 0; ix < sp.coord(0).size(); ++ix)
      acc += std::pow(std::abs(v.values[sp.flat_index({ix, iy})]), p) * wx[ix];
    worst = std::min(worst, acc);
  }
  return worst;
}

}  // namespace mhardy::oracle
