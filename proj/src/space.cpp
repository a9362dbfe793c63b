#include "mhardy/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mhardy {

namespace {
constexpr double kWeightTol = 1e-12;
}

CoordinateSpace::CoordinateSpace(Eigen::ArrayXd weights,
                                 std::vector<Partition> filtration,
                                 std::vector<double> labels)
    : weights_(std::move(weights)),
      filtration_(std::move(filtration)),
      labels_(std::move(labels)) {
  const int n = size();
  if (n == 0) throw std::invalid_argument("coordinate space needs at least one point");
  if ((weights_ <= 0.0).any())
    throw std::invalid_argument("coordinate weights must be strictly positive");
  if (std::abs(weights_.sum() - 1.0) > kWeightTol)
    throw std::invalid_argument("coordinate weights must sum to 1");
  if (filtration_.empty())
    throw std::invalid_argument("filtration must contain at least P_0");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n)
    throw std::invalid_argument("label count must match point count");
  if (labels_.empty()) {
    labels_.resize(n);
    for (int i = 0; i < n; ++i) labels_[i] = i;
  }

  // Each level must partition the points.
  cell_of_.resize(filtration_.size());
  cell_prob_.resize(filtration_.size());
  for (std::size_t lvl = 0; lvl < filtration_.size(); ++lvl) {
    const Partition& part = filtration_[lvl];
    std::vector<int>& owner = cell_of_[lvl];
    owner.assign(n, -1);
    cell_prob_[lvl].resize(part.size());
    for (std::size_t c = 0; c < part.size(); ++c) {
      if (part[c].empty()) throw std::invalid_argument("empty cell in partition");
      double p = 0.0;
      for (int pt : part[c]) {
        if (pt < 0 || pt >= n) throw std::invalid_argument("cell index out of range");
        if (owner[pt] != -1) throw std::invalid_argument("point assigned to two cells");
        owner[pt] = static_cast<int>(c);
        p += weights_[pt];
      }
      cell_prob_[lvl][c] = p;
    }
    for (int pt = 0; pt < n; ++pt)
      if (owner[pt] == -1) throw std::invalid_argument("point missing from partition");
  }

  // Refinement: every cell of P_{m+1} lies in exactly one cell of P_m.
  parent_.resize(filtration_.size());
  for (std::size_t c = 0; c < filtration_[0].size(); ++c)
    parent_[0].push_back(static_cast<int>(c));
  for (std::size_t lvl = 1; lvl < filtration_.size(); ++lvl) {
    const Partition& part = filtration_[lvl];
    parent_[lvl].resize(part.size());
    for (std::size_t c = 0; c < part.size(); ++c) {
      const int up = cell_of_[lvl - 1][part[c][0]];
      for (int pt : part[c])
        if (cell_of_[lvl - 1][pt] != up)
          throw std::invalid_argument("partition does not refine the previous level");
      parent_[lvl][c] = up;
    }
  }

  // Terminal level separates points.
  if (filtration_.back().size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("terminal partition must consist of singletons");
}

const CoordinateSpace::Partition& CoordinateSpace::partition(int level) const {
  if (level < 0 || level > depth()) throw std::out_of_range("filtration level out of range");
  return filtration_[level];
}

int CoordinateSpace::cell_of(int level, int point) const {
  if (level < 0 || level > depth()) throw std::out_of_range("filtration level out of range");
  return cell_of_[level][point];
}

double CoordinateSpace::cell_prob(int level, int cell) const {
  if (level < 0 || level > depth()) throw std::out_of_range("filtration level out of range");
  return cell_prob_[level][cell];
}

int CoordinateSpace::parent_cell(int level, int cell) const {
  if (level < 0 || level > depth()) throw std::out_of_range("filtration level out of range");
  return parent_[level][cell];
}

ProductSpace::ProductSpace(std::vector<CoordinateSpace> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("product space needs at least one coordinate");
  depth_ = coords_[0].depth();
  for (const auto& c : coords_)
    if (c.depth() != depth_)
      throw std::invalid_argument("all coordinates must share one filtration length");

  const int d = dims();
  strides_.resize(d);
  total_ = 1;
  for (int k = 0; k < d; ++k) {
    strides_[k] = total_;
    total_ *= coords_[k].size();
  }

  point_probs_.resize(total_);
  for (Eigen::Index i = 0; i < total_; ++i) {
    double p = 1.0;
    for (int k = 0; k < d; ++k) p *= coords_[k].weights()[coord_index(i, k)];
    point_probs_[i] = p;
  }

  // Atom tables for every level of the product filtration. An F_n atom is a
  // product of level-n cells; its probability is the product of cell
  // probabilities and its parent the product of parent cells.
  atoms_.resize(depth_ + 1);
  atom_of_.resize(depth_ + 1);
  for (int lvl = 0; lvl <= depth_; ++lvl) {
    std::vector<Eigen::Index> cell_strides(d);
    Eigen::Index atom_count = 1;
    for (int k = 0; k < d; ++k) {
      cell_strides[k] = atom_count;
      atom_count *= coords_[k].cell_count(lvl);
    }
    atoms_[lvl].resize(atom_count);
    atom_of_[lvl].assign(total_, 0);
    for (Eigen::Index i = 0; i < total_; ++i) {
      Eigen::Index a = 0;
      for (int k = 0; k < d; ++k)
        a += cell_strides[k] * coords_[k].cell_of(lvl, coord_index(i, k));
      atom_of_[lvl][i] = static_cast<int>(a);
      atoms_[lvl][a].points.push_back(i);
    }
    for (Eigen::Index a = 0; a < atom_count; ++a) {
      ProductAtom& atom = atoms_[lvl][a];
      if (atom.points.empty()) throw std::logic_error("empty product atom");
      double p = 1.0;
      for (int k = 0; k < d; ++k) {
        const int cell = coords_[k].cell_of(lvl, coord_index(atom.points[0], k));
        p *= coords_[k].cell_prob(lvl, cell);
      }
      atom.prob = p;
      atom.parent = lvl == 0 ? static_cast<int>(a) : atom_of_[lvl - 1][atom.points[0]];
    }
  }
}

Eigen::Index ProductSpace::flat_index(const std::vector<int>& multi) const {
  if (static_cast<int>(multi.size()) != dims())
    throw std::invalid_argument("multi-index dimension mismatch");
  Eigen::Index i = 0;
  for (int k = 0; k < dims(); ++k) {
    if (multi[k] < 0 || multi[k] >= coords_[k].size())
      throw std::out_of_range("multi-index out of range");
    i += strides_[k] * multi[k];
  }
  return i;
}

void ProductSpace::check_level(int level) const {
  if (level < 0 || level > depth_) throw std::out_of_range("filtration level out of range");
}

const std::vector<ProductAtom>& ProductSpace::atoms(int level) const {
  check_level(level);
  return atoms_[level];
}

const std::vector<int>& ProductSpace::atom_table(int level) const {
  check_level(level);
  return atom_of_[level];
}

ProductSpace dyadic_space(int dims, int depth) {
  if (dims < 1) throw std::invalid_argument("dyadic space needs dims >= 1");
  if (depth < 1) throw std::invalid_argument("dyadic space needs depth >= 1");
  const int n = 1 << depth;
  Eigen::ArrayXd w = Eigen::ArrayXd::Constant(n, 1.0 / n);
  std::vector<double> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = static_cast<double>(i) / n;
  std::vector<CoordinateSpace::Partition> filt(depth + 1);
  for (int lvl = 0; lvl <= depth; ++lvl) {
    const int cells = 1 << lvl;
    const int span = n / cells;
    filt[lvl].resize(cells);
    for (int c = 0; c < cells; ++c)
      for (int j = 0; j < span; ++j) filt[lvl][c].push_back(c * span + j);
  }
  std::vector<CoordinateSpace> coords(dims, CoordinateSpace(w, filt, labels));
  return ProductSpace(std::move(coords));
}

ProductSpace scale_space(int dims, int depth) {
  if (dims < 1) throw std::invalid_argument("scale space needs dims >= 1");
  if (depth < 1) throw std::invalid_argument("scale space needs depth >= 1");
  const int n = depth + 1;
  Eigen::ArrayXd w(n);
  std::vector<double> labels(n);
  for (int k = 0; k < depth; ++k) {
    w[k] = std::ldexp(1.0, -(k + 1));  // bucket [2^-(k+1), 2^-k)
    labels[k] = std::ldexp(1.0, -(k + 1));
  }
  w[depth] = std::ldexp(1.0, -depth);  // tail [0, 2^-N)
  labels[depth] = 0.0;
  std::vector<CoordinateSpace::Partition> filt(depth + 1);
  for (int lvl = 0; lvl <= depth; ++lvl) {
    for (int k = 0; k < lvl; ++k) filt[lvl].push_back({k});
    CoordinateSpace::Cell rest;
    for (int k = lvl; k < n; ++k) rest.push_back(k);
    filt[lvl].push_back(rest);
  }
  std::vector<CoordinateSpace> coords(dims, CoordinateSpace(w, filt, labels));
  return ProductSpace(std::move(coords));
}

RegularityReport regularity(const ProductSpace& space) {
  RegularityReport rep;
  for (int lvl = 1; lvl <= space.depth(); ++lvl) {
    const auto& atoms = space.atoms(lvl);
    const auto& up = space.atoms(lvl - 1);
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const double ratio = up[atoms[a].parent].prob / atoms[a].prob;
      if (ratio > rep.constant) {
        rep.constant = ratio;
        rep.witness_level = lvl;
        rep.witness_atom = static_cast<int>(a);
      }
    }
  }
  return rep;
}

RandomVariable constant_rv(const ProductSpace& space, double c) {
  return {&space, Eigen::ArrayXd::Constant(space.points(), c)};
}

RandomVariable indicator_rv(const ProductSpace& space, const std::vector<Eigen::Index>& pts) {
  RandomVariable f = constant_rv(space, 0.0);
  for (Eigen::Index i : pts) f.values[i] = 1.0;
  return f;
}

double expectation(const RandomVariable& f) {
  return (f.values * f.space->point_probs()).sum();
}

bool is_level_measurable(const RandomVariable& f, int level, double tol) {
  const auto& table = f.space->atom_table(level);
  const auto& atoms = f.space->atoms(level);
  std::vector<double> first(atoms.size());
  std::vector<char> seen(atoms.size(), 0);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    const int a = table[i];
    if (!seen[a]) {
      seen[a] = 1;
      first[a] = f.values[i];
    } else if (std::abs(f.values[i] - first[a]) > tol) {
      return false;
    }
  }
  return true;
}

void require_same_space(const RandomVariable& a, const RandomVariable& b) {
  if (a.space != b.space) throw std::invalid_argument("random variables live on different spaces");
}

}  // namespace mhardy
