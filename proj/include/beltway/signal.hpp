#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "beltway/error.hpp"

namespace beltway {

using Point = Eigen::VectorXd;

/// Numerical thresholds shared by every module.
///
/// `eps_match` decides when two scalar values are "the same"; comparisons use
/// it as a mixed absolute/relative tolerance (see `nearly_equal`). `eps_psd`
/// and `eps_rank` are relative to the largest eigenvalue magnitude.
struct Tolerances {
  double eps_match = 1e-9;
  double eps_psd = 1e-8;
  double eps_rank = 1e-8;

  void validate() const;
};

/// |a - b| <= eps * max(1, |a|, |b|)
bool nearly_equal(double a, double b, double eps);

/// A weighted sum of point masses in R^n. Points are stored as the columns of
/// an n x k matrix.
class SparseSignal {
 public:
  SparseSignal(std::vector<double> weights, Eigen::MatrixXd points,
               const Tolerances& tol = {});

  static SparseSignal binary(Eigen::MatrixXd points, const Tolerances& tol = {});

  int dim() const { return static_cast<int>(points_.rows()); }
  int size() const { return static_cast<int>(points_.cols()); }

  const std::vector<double>& weights() const { return weights_; }
  double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  const Eigen::MatrixXd& points() const { return points_; }
  Point point(int i) const { return points_.col(i); }

  bool is_binary() const;

  SparseSignal transformed(const Eigen::MatrixXd& g) const;
  SparseSignal negated() const;
  SparseSignal reordered(std::span<const int> order) const;

 private:
  std::vector<double> weights_;
  Eigen::MatrixXd points_;
};

/// Symmetric k x k matrix of pairwise inner products. The constructor
/// symmetrizes its argument so the stored matrix is exactly symmetric.
class GramMatrix {
 public:
  explicit GramMatrix(const Eigen::MatrixXd& entries);

  int size() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const Eigen::MatrixXd& entries() const { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

GramMatrix gram_matrix(const SparseSignal& signal);

/// Factor a Gram matrix as X^T X with X of size max_dim x k.
///
/// Eigenvalues are sorted in descending order and row r carries the r-th one.
/// Eigenvalues in (-eps_psd * lambda_max, 0] are clamped to zero. Throws NotPSD,
/// or RankExceeded when more than max_dim eigenvalues exceed
/// eps_rank * lambda_max.
Eigen::MatrixXd psd_factor(const GramMatrix& gram, int max_dim, const Tolerances& tol = {});

/// Eigenvalues of a symmetric matrix, sorted descending.
Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& symmetric);

/// Same orbit, upper-triangular point matrix with non-negative diagonal.
/// Entries below the diagonal are exactly zero. Requires k <= n.
SparseSignal reduce_to_triangular(const SparseSignal& signal);

/// True iff some permutation maps the weights and the Gram matrix of `x` onto
/// those of `y` (i.e. x and y lie in the same O(n)-orbit).
bool orbit_equivalent(const SparseSignal& x, const SparseSignal& y, const Tolerances& tol = {});

/// Gram-level variant: finds a permutation with wy[p(i)] == wx[i] and
/// gy(p(i), p(j)) == gx(i, j).
bool gram_equivalent(const Eigen::MatrixXd& gx, std::span<const double> wx,
                     const Eigen::MatrixXd& gy, std::span<const double> wy,
                     const Tolerances& tol = {});

/// Builds a binary signal with the same second moment but (generically) a
/// different O(n)-orbit, by re-solving the last point against a swapped pair
/// of inner products.
///
/// The first equal-magnitude pair (in index order) is moved to positions 0
/// and 1; the remaining points keep their relative order. The result is
/// expressed in the triangular frame of that reordered signal.
SparseSignal homometric_partner(const SparseSignal& signal, const Tolerances& tol = {});

}  // namespace beltway
