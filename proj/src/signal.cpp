#include "beltway/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace beltway {

void Tolerances::validate() const {
  if (!(eps_match > 0.0) || !(eps_psd > 0.0) || !(eps_rank > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be strictly positive");
  }
}

bool nearly_equal(double a, double b, double eps) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= eps * scale;
}

SparseSignal::SparseSignal(std::vector<double> weights, Eigen::MatrixXd points,
                           const Tolerances& tol)
    : weights_(std::move(weights)), points_(std::move(points)) {
  if (points_.rows() < 1) throw Error(ErrorKind::InvalidSignal, "dimension must be >= 1");
  if (points_.cols() < 1) throw Error(ErrorKind::InvalidSignal, "signal needs at least one point");
  if (static_cast<Eigen::Index>(weights_.size()) != points_.cols()) {
    throw Error(ErrorKind::InvalidSignal, "weight count " + std::to_string(weights_.size()) +
                                              " != point count " + std::to_string(points_.cols()));
  }
  if (!points_.allFinite()) throw Error(ErrorKind::InvalidSignal, "non-finite coordinate");
  for (double w : weights_) {
    if (!std::isfinite(w) || w == 0.0) {
      throw Error(ErrorKind::InvalidSignal, "weights must be finite and non-zero");
    }
  }
  for (Eigen::Index i = 0; i < points_.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < points_.cols(); ++j) {
      const double scale = std::max({1.0, points_.col(i).norm(), points_.col(j).norm()});
      if ((points_.col(i) - points_.col(j)).norm() <= tol.eps_match * scale) {
        throw Error(ErrorKind::InvalidSignal, "points " + std::to_string(i) + " and " +
                                                  std::to_string(j) + " coincide");
      }
    }
  }
}

SparseSignal SparseSignal::binary(Eigen::MatrixXd points, const Tolerances& tol) {
  std::vector<double> ones(static_cast<std::size_t>(points.cols()), 1.0);
  return SparseSignal(std::move(ones), std::move(points), tol);
}

bool SparseSignal::is_binary() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 1.0; });
}

SparseSignal SparseSignal::transformed(const Eigen::MatrixXd& g) const {
  if (g.rows() != points_.rows() || g.cols() != points_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "transform must be n x n");
  }
  return SparseSignal(weights_, g * points_);
}

SparseSignal SparseSignal::negated() const {
  std::vector<double> w = weights_;
  for (double& v : w) v = -v;
  return SparseSignal(std::move(w), points_);
}

SparseSignal SparseSignal::reordered(std::span<const int> order) const {
  if (static_cast<int>(order.size()) != size()) {
    throw Error(ErrorKind::InvalidArgument, "reorder needs a full permutation");
  }
  std::vector<double> w(order.size());
  Eigen::MatrixXd p(points_.rows(), points_.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    w[i] = weights_.at(static_cast<std::size_t>(order[i]));
    p.col(static_cast<Eigen::Index>(i)) = points_.col(order[i]);
  }
  return SparseSignal(std::move(w), std::move(p));
}

GramMatrix::GramMatrix(const Eigen::MatrixXd& entries) {
  if (entries.rows() != entries.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "Gram matrix must be square");
  }
  entries_ = 0.5 * (entries + entries.transpose());
}

GramMatrix gram_matrix(const SparseSignal& signal) {
  return GramMatrix(signal.points().transpose() * signal.points());
}

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  Eigen::VectorXd values = solver.eigenvalues().reverse();
  return values;
}

Eigen::MatrixXd psd_factor(const GramMatrix& gram, int max_dim, const Tolerances& tol) {
  if (max_dim < 1) throw Error(ErrorKind::InvalidArgument, "max_dim must be >= 1");
  const int k = gram.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram.entries());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPSD, "eigendecomposition failed");
  }
  // Eigen returns ascending order.
  const Eigen::VectorXd values = solver.eigenvalues().reverse();
  const Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();

  const double scale = values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return Eigen::MatrixXd::Zero(max_dim, k);
  if (values(k - 1) < -tol.eps_psd * scale) {
    throw Error(ErrorKind::NotPSD, "eigenvalue " + std::to_string(values(k - 1)) +
                                       " below -eps_psd * lambda_max");
  }
  int rank = 0;
  while (rank < k && values(rank) > tol.eps_rank * scale) ++rank;
  if (rank > max_dim) {
    throw Error(ErrorKind::RankExceeded,
                "rank " + std::to_string(rank) + " exceeds dimension " + std::to_string(max_dim));
  }
  // Sub-threshold eigenvalues are kept when they fit so the factor stays exact.
  Eigen::MatrixXd points = Eigen::MatrixXd::Zero(max_dim, k);
  for (int r = 0; r < std::min(k, max_dim); ++r) {
    points.row(r) = std::sqrt(std::max(values(r), 0.0)) * vectors.col(r).transpose();
  }
  return points;
}

SparseSignal reduce_to_triangular(const SparseSignal& signal) {
  const int n = signal.dim();
  const int k = signal.size();
  if (k > n) {
    throw Error(ErrorKind::DimensionError, "triangular form needs k <= n (k=" +
                                               std::to_string(k) + ", n=" + std::to_string(n) + ")");
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(signal.points());
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < k; ++i) {
    if (r(i, i) < 0.0) r.row(i) = -r.row(i);
  }
  for (int j = 0; j < k; ++j) {
    for (int i = j + 1; i < n; ++i) r(i, j) = 0.0;
  }
  return SparseSignal(signal.weights(), std::move(r));
}

namespace {

class PermutationSearch {
 public:
  PermutationSearch(const Eigen::MatrixXd& gx, std::span<const double> wx,
                    const Eigen::MatrixXd& gy, std::span<const double> wy, double eps)
      : gx_(gx), gy_(gy), wx_(wx), wy_(wy), eps_(eps),
        image_(static_cast<std::size_t>(gx.rows()), -1),
        used_(static_cast<std::size_t>(gx.rows()), false) {}

  bool run() { return extend(0); }

 private:
  bool extend(int i) {
    const int k = static_cast<int>(gx_.rows());
    if (i == k) return true;
    for (int j = 0; j < k; ++j) {
      if (used_[static_cast<std::size_t>(j)]) continue;
      if (!nearly_equal(wx_[static_cast<std::size_t>(i)], wy_[static_cast<std::size_t>(j)], eps_)) continue;
      if (!nearly_equal(gx_(i, i), gy_(j, j), eps_)) continue;
      bool ok = true;
      for (int l = 0; l < i && ok; ++l) {
        ok = nearly_equal(gx_(l, i), gy_(image_[static_cast<std::size_t>(l)], j), eps_);
      }
      if (!ok) continue;
      image_[static_cast<std::size_t>(i)] = j;
      used_[static_cast<std::size_t>(j)] = true;
      if (extend(i + 1)) return true;
      used_[static_cast<std::size_t>(j)] = false;
    }
    return false;
  }

  const Eigen::MatrixXd& gx_;
  const Eigen::MatrixXd& gy_;
  std::span<const double> wx_;
  std::span<const double> wy_;
  double eps_;
  std::vector<int> image_;
  std::vector<bool> used_;
};

}  // namespace

bool gram_equivalent(const Eigen::MatrixXd& gx, std::span<const double> wx,
                     const Eigen::MatrixXd& gy, std::span<const double> wy,
                     const Tolerances& tol) {
  if (gx.rows() != gy.rows() || wx.size() != wy.size() ||
      static_cast<Eigen::Index>(wx.size()) != gx.rows()) {
    return false;
  }
  return PermutationSearch(gx, wx, gy, wy, tol.eps_match).run();
}

bool orbit_equivalent(const SparseSignal& x, const SparseSignal& y, const Tolerances& tol) {
  if (x.size() != y.size()) return false;
  return gram_equivalent(gram_matrix(x).entries(), x.weights(), gram_matrix(y).entries(),
                         y.weights(), tol);
}

SparseSignal homometric_partner(const SparseSignal& signal, const Tolerances& tol) {
  const int n = signal.dim();
  const int k = signal.size();
  if (!signal.is_binary()) throw Error(ErrorKind::PreconditionError, "signal must be binary");
  if (k < 3) throw Error(ErrorKind::PreconditionError, "need at least three points");
  if (k > n) throw Error(ErrorKind::PreconditionError, "need k <= n");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(signal.points());
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv(k - 1) <= tol.eps_rank * sv(0)) {
    throw Error(ErrorKind::PreconditionError, "points are linearly dependent");
  }

  const Eigen::MatrixXd gram = gram_matrix(signal).entries();
  int first = -1;
  int second = -1;
  for (int i = 0; i < k && first < 0; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (nearly_equal(gram(i, i), gram(j, j), tol.eps_match)) {
        first = i;
        second = j;
        break;
      }
    }
  }
  if (first < 0) throw Error(ErrorKind::PreconditionError, "no pair of equal magnitude");

  std::vector<int> order{first, second};
  for (int i = 0; i < k; ++i) {
    if (i != first && i != second) order.push_back(i);
  }
  const SparseSignal tri = reduce_to_triangular(signal.reordered(order));
  const Eigen::MatrixXd& r = tri.points();
  const Point last = r.col(k - 1);

  // Target inner products of the new last point with t_1..t_{k-1}; the
  // first two are exchanged.
  Eigen::VectorXd target(k - 1);
  for (int l = 0; l < k - 1; ++l) target(l) = r.col(l).dot(last);
  if (nearly_equal(target(0), target(1), tol.eps_match)) {
    throw Error(ErrorKind::DegeneratePartner, "t_1 . t_k == t_2 . t_k, swap is a no-op");
  }
  std::swap(target(0), target(1));

  // Forward substitution: t_l has support in its first l+1 coordinates.
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  for (int l = 0; l < k - 1; ++l) {
    double acc = target(l);
    for (int m = 0; m < l; ++m) acc -= r(m, l) * s(m);
    s(l) = acc / r(l, l);
  }
  const double norm2 = last.squaredNorm();
  const double residual = norm2 - s.head(k - 1).squaredNorm();
  if (residual < -tol.eps_match * std::max(1.0, norm2)) {
    throw Error(ErrorKind::NoRealSolution,
                "last coordinate would be imaginary (residual " + std::to_string(residual) + ")");
  }
  s(k - 1) = std::sqrt(std::max(0.0, residual));

  Eigen::MatrixXd partner_points = r;
  partner_points.col(k - 1) = s;
  SparseSignal partner(tri.weights(), std::move(partner_points), tol);
  if (orbit_equivalent(tri, partner, tol)) {
    throw Error(ErrorKind::DegeneratePartner, "partner lies in the input's orbit");
  }
  return partner;
}

}  // namespace beltway
