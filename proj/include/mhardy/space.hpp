#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mhardy {

/// One coordinate of a product space: finitely many sample points carrying
/// strictly positive weights that sum to 1, together with a filtration given
/// as refining partitions P_0, ..., P_N of the point set. The terminal
/// partition P_N must separate points, so conditioning on level N is the
/// identity.
class CoordinateSpace {
 public:
  using Cell = std::vector<int>;
  using Partition = std::vector<Cell>;

  CoordinateSpace(Eigen::ArrayXd weights, std::vector<Partition> filtration,
                  std::vector<double> labels = {});

  int size() const { return static_cast<int>(weights_.size()); }
  int depth() const { return static_cast<int>(filtration_.size()) - 1; }
  const Eigen::ArrayXd& weights() const { return weights_; }
  const std::vector<double>& labels() const { return labels_; }
  const Partition& partition(int level) const;
  int cell_count(int level) const { return static_cast<int>(partition(level).size()); }
  int cell_of(int level, int point) const;
  double cell_prob(int level, int cell) const;
  /// Index of the level-(n-1) cell containing a level-n cell; a level-0 cell
  /// is its own parent.
  int parent_cell(int level, int cell) const;

 private:
  Eigen::ArrayXd weights_;
  std::vector<Partition> filtration_;
  std::vector<double> labels_;
  std::vector<std::vector<int>> cell_of_;       // [level][point] -> cell
  std::vector<std::vector<double>> cell_prob_;  // [level][cell]
  std::vector<std::vector<int>> parent_;        // [level][cell] -> cell at level-1
};

/// Atom of F_n on the product space: a product of level-n cells, stored as
/// flat point indices with its probability and the containing F_{n-1} atom.
struct ProductAtom {
  std::vector<Eigen::Index> points;
  double prob = 0.0;
  int parent = 0;
};

/// Finite filtered product probability space. All coordinates share one
/// filtration length N; atoms of the product filtration are cached per level
/// at construction. Immutable afterwards, safe to share between threads.
class ProductSpace {
 public:
  explicit ProductSpace(std::vector<CoordinateSpace> coords);

  int dims() const { return static_cast<int>(coords_.size()); }
  int depth() const { return depth_; }
  Eigen::Index points() const { return total_; }
  const CoordinateSpace& coord(int k) const { return coords_.at(k); }
  Eigen::Index stride(int k) const { return strides_.at(k); }

  /// Coordinate-k index of a flat point index. Coordinate 0 varies fastest.
  int coord_index(Eigen::Index flat, int k) const {
    return static_cast<int>((flat / strides_[k]) % coords_[k].size());
  }
  Eigen::Index flat_index(const std::vector<int>& multi) const;

  /// Product of point weights, one entry per flat index.
  const Eigen::ArrayXd& point_probs() const { return point_probs_; }

  const std::vector<ProductAtom>& atoms(int level) const;
  int atom_of(int level, Eigen::Index point) const { return atom_table(level)[point]; }
  const std::vector<int>& atom_table(int level) const;

 private:
  void check_level(int level) const;

  std::vector<CoordinateSpace> coords_;
  int depth_ = 0;
  Eigen::Index total_ = 0;
  std::vector<Eigen::Index> strides_;
  Eigen::ArrayXd point_probs_;
  std::vector<std::vector<ProductAtom>> atoms_;  // [level]
  std::vector<std::vector<int>> atom_of_;        // [level][point]
};

/// Canonical regular test space: d coordinates, each [0,1) sampled at 2^N
/// uniform points, P_n the dyadic intervals of length 2^-n.
ProductSpace dyadic_space(int dims, int depth);

/// Dyadic-scale lumping of [0,1): point k (k = 0..N-1) is the interval
/// [2^-(k+1), 2^-k) of weight 2^-(k+1), the last point is [0, 2^-N) of weight
/// 2^-N, and P_m splits off the first m intervals as singletons. Functions
/// that are constant on dyadic scale buckets live on this space with the same
/// conditional expectations as on the full 2^N-point grid, which keeps deep
/// two-coordinate computations tractable.
ProductSpace scale_space(int dims, int depth);

struct RegularityReport {
  double constant = 1.0;  // smallest R with P(parent atom) <= R * P(atom)
  int witness_level = 0;
  int witness_atom = 0;
};

/// Exhaustive search over all atoms of every level; the covering set of an
/// F_n-atom is its unique F_{n-1} parent atom. Finite spaces with positive
/// weights are always regular, so this always returns a finite constant.
RegularityReport regularity(const ProductSpace& space);

/// A real value per product point.
struct RandomVariable {
  const ProductSpace* space = nullptr;
  Eigen::ArrayXd values;
};

RandomVariable constant_rv(const ProductSpace& space, double c);
RandomVariable indicator_rv(const ProductSpace& space, const std::vector<Eigen::Index>& pts);
double expectation(const RandomVariable& f);
/// True if f is constant on every F_level atom (within tol).
bool is_level_measurable(const RandomVariable& f, int level, double tol = 1e-9);
void require_same_space(const RandomVariable& a, const RandomVariable& b);

}  // namespace mhardy
