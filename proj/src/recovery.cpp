#include "beltway/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace beltway {

namespace {

BigInt factorial(long long n) {
  BigInt out = 1;
  for (long long i = 2; i <= n; ++i) out *= i;
  return out;
}

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

void require_collision_free(const InvariantSet& inv, const Tolerances& tol) {
  const auto off = inv.off_diagonal(tol.eps_match);
  for (std::size_t i = 0; i < off.size(); ++i) {
    for (std::size_t j = i + 1; j < off.size(); ++j) {
      if (off[i].triple.nearly_equal(off[j].triple, tol.eps_match)) {
        throw Error(ErrorKind::NotCollisionFree, "invariant set has repeated pair orbits");
      }
    }
  }
}

// Squared magnitude of each block, from the diagonal entries directly so no
// sqrt/square round trip enters the comparisons.
std::vector<double> block_squares(const InvariantSet& inv, const MagnitudePartition& part,
                                  const Tolerances& tol) {
  std::vector<double> squares;
  std::vector<double> diag;
  for (const auto& e : inv.diagonal(tol.eps_match)) diag.push_back(e.triple.a);
  std::sort(diag.begin(), diag.end());
  std::size_t pos = 0;
  for (int r : part.multiplicities) {
    squares.push_back(diag[pos]);
    pos += static_cast<std::size_t>(r);
  }
  return squares;
}

int find_block(const std::vector<double>& squares, double value, const Tolerances& tol) {
  for (std::size_t p = 0; p < squares.size(); ++p) {
    if (nearly_equal(squares[p], value, tol.eps_match)) return static_cast<int>(p);
  }
  throw Error(ErrorKind::InconsistentInvariants,
              "pair magnitude " + std::to_string(value) + " matches no diagonal entry");
}

bool feasible_principal(const Eigen::MatrixXd& gram, std::span<const int> index, int n,
                        const Tolerances& tol) {
  const auto m = static_cast<Eigen::Index>(index.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) sub(r, c) = gram(index[r], index[c]);
  }
  const Eigen::VectorXd values = sorted_eigenvalues(sub);
  const double scale = values.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  if (values(m - 1) < -tol.eps_psd * scale) return false;
  int rank = 0;
  while (rank < m && values(rank) > tol.eps_rank * scale) ++rank;
  return rank <= n;
}

std::vector<double> weights_from(const std::vector<double>& diag_wprod, const std::vector<int>& signs) {
  std::vector<double> w(diag_wprod.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = signs[i] * std::sqrt(diag_wprod[i]);
  return w;
}

bool lexicographically_less(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const auto xs = x.reshaped<Eigen::RowMajor>();
  const auto ys = y.reshaped<Eigen::RowMajor>();
  return std::lexicographical_compare(xs.begin(), xs.end(), ys.begin(), ys.end());
}

struct PoolEntry {
  double c;
  double wprod;
  auto operator<=>(const PoolEntry&) const = default;
};

bool same_entry(const PoolEntry& x, const PoolEntry& y, double eps) {
  return nearly_equal(x.c, y.c, eps) && nearly_equal(x.wprod, y.wprod, eps);
}

struct Pool {
  std::vector<PoolEntry> entries;
  std::vector<bool> used;
};

class OrbitEnumerator {
 public:
  OrbitEnumerator(const InvariantSet& inv, int n, int max_results, const Tolerances& tol,
                  std::uint64_t budget)
      : n_(n), k_(inv.k()), max_results_(max_results), tol_(tol), budget_(budget) {
    const MagnitudePartition part = magnitude_partition(inv, tol);
    q_ = part.blocks();
    squares_ = block_squares(inv, part, tol);
    for (int p = 0; p < q_; ++p) {
      for (int r = 0; r < part.multiplicities[static_cast<std::size_t>(p)]; ++r) block_of_.push_back(p);
    }

    diag_pools_.resize(static_cast<std::size_t>(q_));
    for (const auto& e : inv.diagonal(tol.eps_match)) {
      if (e.wprod <= 0.0 || nearly_equal(e.wprod, 0.0, tol.eps_match)) {
        throw Error(ErrorKind::InconsistentWeights, "diagonal weight product must be positive");
      }
      diag_pools_[static_cast<std::size_t>(find_block(squares_, e.triple.a, tol))].entries.push_back(
          {e.triple.a, e.wprod});
    }
    pair_pools_.resize(static_cast<std::size_t>(q_ * q_));
    for (const auto& e : inv.off_diagonal(tol.eps_match)) {
      const int a = find_block(squares_, e.triple.a, tol);
      const int b = find_block(squares_, e.triple.b, tol);
      pair_pools_[static_cast<std::size_t>(a * q_ + b)].entries.push_back({e.triple.c, e.wprod});
    }
    for (int a = 0; a < q_; ++a) {
      const auto ra = static_cast<std::size_t>(part.multiplicities[static_cast<std::size_t>(a)]);
      for (int b = a; b < q_; ++b) {
        const auto rb = static_cast<std::size_t>(part.multiplicities[static_cast<std::size_t>(b)]);
        const std::size_t expected = a == b ? ra * (ra - 1) / 2 : ra * rb;
        auto& pool = pair_pools_[static_cast<std::size_t>(a * q_ + b)];
        if (pool.entries.size() != expected) {
          throw Error(ErrorKind::InconsistentInvariants,
                      "block pair (" + std::to_string(a) + "," + std::to_string(b) + ") has " +
                          std::to_string(pool.entries.size()) + " entries, expected " +
                          std::to_string(expected));
        }
      }
    }
    for (auto& pool : diag_pools_) prepare(pool);
    for (auto& pool : pair_pools_) prepare(pool);

    gram_ = Eigen::MatrixXd::Zero(k_, k_);
    diag_wprod_.assign(static_cast<std::size_t>(k_), 0.0);
    signs_.assign(static_cast<std::size_t>(k_), 1);
  }

  RecoveryResult run() {
    place_diagonal(0);
    RecoveryResult result;
    std::vector<std::size_t> order(found_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return lexicographically_less(found_[x].gram, found_[y].gram);
    });
    for (std::size_t i : order) {
      const auto& f = found_[i];
      if (std::any_of(f.weights.begin(), f.weights.end(), [](double w) { return w < 0.0; })) {
        result.sign_ambiguous = true;
      }
      result.orbits.push_back(f.signal);
    }
    result.truncated = truncated_;
    result.nodes = nodes_;
    result.candidates = candidates_;
    return result;
  }

 private:
  struct Found {
    Eigen::MatrixXd gram;
    std::vector<double> weights;
    SparseSignal signal;
  };

  static void prepare(Pool& pool) {
    std::sort(pool.entries.begin(), pool.entries.end());
    pool.used.assign(pool.entries.size(), false);
  }

  bool done() const { return truncated_; }

  void tick() {
    if (++nodes_ > budget_) {
      throw Error(ErrorKind::BudgetExceeded,
                  "enumeration exceeded " + std::to_string(budget_) + " nodes");
    }
  }

  // Row j starts with its diagonal weight product, then fills (0,j)..(j-1,j).
  void place_diagonal(int j) {
    if (done()) return;
    if (j == k_) {
      accept();
      return;
    }
    const int block = block_of_[static_cast<std::size_t>(j)];
    auto& pool = diag_pools_[static_cast<std::size_t>(block)];
    std::optional<PoolEntry> previous;
    for (std::size_t e = 0; e < pool.entries.size() && !done(); ++e) {
      if (pool.used[e] || (previous && same_entry(*previous, pool.entries[e], tol_.eps_match))) continue;
      previous = pool.entries[e];
      tick();
      pool.used[e] = true;
      gram_(j, j) = squares_[static_cast<std::size_t>(block)];
      diag_wprod_[static_cast<std::size_t>(j)] = pool.entries[e].wprod;
      signs_[static_cast<std::size_t>(j)] = 1;
      if (j == 0) {
        place_diagonal(1);
      } else {
        place_off(0, j);
      }
      pool.used[e] = false;
    }
  }

  void place_off(int i, int j) {
    if (done()) return;
    if (i == j) {
      place_diagonal(j + 1);
      return;
    }
    const int a = block_of_[static_cast<std::size_t>(i)];
    const int b = block_of_[static_cast<std::size_t>(j)];
    auto& pool = pair_pools_[static_cast<std::size_t>(a * q_ + b)];
    const double expected = std::sqrt(diag_wprod_[static_cast<std::size_t>(i)] *
                                      diag_wprod_[static_cast<std::size_t>(j)]);
    std::optional<PoolEntry> previous;
    for (std::size_t e = 0; e < pool.entries.size() && !done(); ++e) {
      if (pool.used[e] || (previous && same_entry(*previous, pool.entries[e], tol_.eps_match))) continue;
      const PoolEntry& cand = pool.entries[e];
      previous = cand;
      tick();
      if (!nearly_equal(std::abs(cand.wprod), expected, tol_.eps_match)) continue;
      const int sign = sign_of(cand.wprod);
      if (i == 0) {
        signs_[static_cast<std::size_t>(j)] = sign;
      } else if (sign != signs_[static_cast<std::size_t>(i)] * signs_[static_cast<std::size_t>(j)]) {
        continue;
      }
      gram_(i, j) = gram_(j, i) = cand.c;
      index_.clear();
      for (int l = 0; l <= i; ++l) index_.push_back(l);
      index_.push_back(j);
      if (!feasible_principal(gram_, index_, n_, tol_)) continue;
      pool.used[e] = true;
      place_off(i + 1, j);
      pool.used[e] = false;
    }
  }

  void accept() {
    Eigen::MatrixXd points;
    try {
      points = psd_factor(GramMatrix(gram_), n_, tol_);
    } catch (const Error&) {
      return;
    }
    ++candidates_;
    const auto weights = weights_from(diag_wprod_, signs_);
    std::vector<double> negated(weights);
    for (double& w : negated) w = -w;
    // Solutions are identified up to a global weight sign: the w_0 > 0
    // normalization depends on which label of a block lands first.
    for (const auto& f : found_) {
      if (gram_equivalent(f.gram, f.weights, gram_, weights, tol_) ||
          gram_equivalent(f.gram, f.weights, gram_, negated, tol_)) {
        return;
      }
    }
    if (static_cast<int>(found_.size()) == max_results_) {
      truncated_ = true;
      return;
    }
    found_.push_back({gram_, weights, SparseSignal(weights, std::move(points), tol_)});
  }

  int n_;
  int k_;
  int q_ = 0;
  int max_results_;
  Tolerances tol_;
  std::uint64_t budget_;

  std::vector<double> squares_;
  std::vector<int> block_of_;
  std::vector<Pool> diag_pools_;
  std::vector<Pool> pair_pools_;

  Eigen::MatrixXd gram_;
  std::vector<double> diag_wprod_;
  std::vector<int> signs_;
  std::vector<int> index_;

  std::vector<Found> found_;
  bool truncated_ = false;
  std::uint64_t nodes_ = 0;
  std::uint64_t candidates_ = 0;
};

}  // namespace

BigInt orbit_count_bound(std::span<const int> multiplicities) {
  long long k = 0;
  for (int r : multiplicities) {
    if (r < 1) throw Error(ErrorKind::InvalidArgument, "multiplicities must be positive");
    k += r;
  }
  if (k < 3) return 1;
  // Individual factors C(r,2)!/r! need not be integers (r = 2), so divide
  // once at the end. Flooring keeps a valid bound on an integer count.
  BigInt numerator = 1;
  BigInt denominator = 1;
  for (int r : multiplicities) {
    if (r >= 2) {
      numerator *= factorial(static_cast<long long>(r) * (r - 1) / 2);
      denominator *= factorial(r);
    }
  }
  for (std::size_t a = 0; a < multiplicities.size(); ++a) {
    for (std::size_t b = a + 1; b < multiplicities.size(); ++b) {
      numerator *= factorial(static_cast<long long>(multiplicities[a]) * multiplicities[b]);
    }
  }
  return numerator / denominator;
}

BigInt orbit_count_bound(const MagnitudePartition& partition) {
  return orbit_count_bound(partition.multiplicities);
}

SparseSignal recover_unique(const InvariantSet& inv, int n, const Tolerances& tol) {
  const MagnitudePartition part = magnitude_partition(inv, tol);
  const int k = inv.k();
  if (part.blocks() != k) {
    throw Error(ErrorKind::NotRadiallyCollisionFree, "magnitudes are not pairwise distinct");
  }
  const auto squares = block_squares(inv, part, tol);

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd wprod = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXi filled = Eigen::MatrixXi::Zero(k, k);
  for (const auto& e : inv.entries()) {
    const int i = find_block(squares, e.triple.a, tol);
    const int j = find_block(squares, e.triple.b, tol);
    if (filled(i, j)++ > 0) {
      throw Error(ErrorKind::InconsistentInvariants,
                  "entry (" + std::to_string(i) + "," + std::to_string(j) + ") addressed twice");
    }
    gram(i, j) = gram(j, i) = i == j ? squares[static_cast<std::size_t>(i)] : e.triple.c;
    wprod(i, j) = wprod(j, i) = e.wprod;
  }

  std::vector<double> diag(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    if (wprod(i, i) <= 0.0 || nearly_equal(wprod(i, i), 0.0, tol.eps_match)) {
      throw Error(ErrorKind::InconsistentWeights, "diagonal weight product must be positive");
    }
    diag[static_cast<std::size_t>(i)] = wprod(i, i);
  }
  std::vector<int> signs(static_cast<std::size_t>(k), 1);
  for (int j = 1; j < k; ++j) signs[static_cast<std::size_t>(j)] = sign_of(wprod(0, j));
  const auto weights = weights_from(diag, signs);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if (!nearly_equal(weights[static_cast<std::size_t>(i)] * weights[static_cast<std::size_t>(j)],
                        wprod(i, j), tol.eps_match)) {
        throw Error(ErrorKind::InconsistentWeights,
                    "weight product at (" + std::to_string(i) + "," + std::to_string(j) +
                        ") incompatible with diagonal");
      }
    }
  }
  return SparseSignal(weights, psd_factor(GramMatrix(gram), n, tol), tol);
}

RecoveryResult enumerate_orbits(const InvariantSet& inv, int n, int max_results,
                                const Tolerances& tol, std::uint64_t node_budget) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "dimension must be >= 1");
  if (max_results < 1) throw Error(ErrorKind::InvalidArgument, "max_results must be >= 1");
  require_collision_free(inv, tol);
  RecoveryResult result = OrbitEnumerator(inv, n, max_results, tol, node_budget).run();
  result.bound = orbit_count_bound(magnitude_partition(inv, tol));
  return result;
}

bool weight_products_distinct(std::span<const double> weights, const Tolerances& tol) {
  std::vector<double> products;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    for (std::size_t j = i + 1; j < weights.size(); ++j) products.push_back(weights[i] * weights[j]);
  }
  for (std::size_t i = 0; i < products.size(); ++i) {
    for (std::size_t j = i + 1; j < products.size(); ++j) {
      if (nearly_equal(products[i], products[j], tol.eps_match)) return false;
    }
  }
  return true;
}

SparseSignal recover_distinct_weight_products(const InvariantSet& inv, int n,
                                              const Tolerances& tol) {
  require_collision_free(inv, tol);
  const int k = inv.k();
  if (k > 24) throw Error(ErrorKind::InvalidArgument, "sign search limited to k <= 24");
  const auto off = inv.off_diagonal(tol.eps_match);
  for (std::size_t i = 0; i < off.size(); ++i) {
    for (std::size_t j = i + 1; j < off.size(); ++j) {
      if (nearly_equal(off[i].wprod, off[j].wprod, tol.eps_match)) {
        throw Error(ErrorKind::WeightProductsNotDistinct, "two pairs share a weight product");
      }
    }
  }

  const auto diag = inv.diagonal(tol.eps_match);  // sorted by (magnitude, wprod)
  std::vector<double> abs_w(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double d = diag[static_cast<std::size_t>(i)].wprod;
    if (d <= 0.0 || nearly_equal(d, 0.0, tol.eps_match)) {
      throw Error(ErrorKind::InconsistentWeights, "diagonal weight product must be positive");
    }
    abs_w[static_cast<std::size_t>(i)] = std::sqrt(d);
  }

  std::optional<Error> factor_error;
  const std::uint32_t masks = 1u << static_cast<unsigned>(k - 1);
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<double> w(abs_w);
    for (int i = 1; i < k; ++i) {
      if ((mask >> (i - 1)) & 1u) w[static_cast<std::size_t>(i)] = -w[static_cast<std::size_t>(i)];
    }
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXi filled = Eigen::MatrixXi::Zero(k, k);
    for (int i = 0; i < k; ++i) gram(i, i) = diag[static_cast<std::size_t>(i)].triple.a;
    bool ok = true;
    for (const auto& e : off) {
      int hit_i = -1;
      int hit_j = -1;
      int hits = 0;
      for (int i = 0; i < k && hits < 2; ++i) {
        for (int j = i + 1; j < k; ++j) {
          const double ai = gram(i, i);
          const double aj = gram(j, j);
          if (!nearly_equal(w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)], e.wprod,
                            tol.eps_match)) {
            continue;
          }
          if (!nearly_equal(std::min(ai, aj), e.triple.a, tol.eps_match) ||
              !nearly_equal(std::max(ai, aj), e.triple.b, tol.eps_match)) {
            continue;
          }
          hit_i = i;
          hit_j = j;
          ++hits;
        }
      }
      if (hits != 1 || filled(hit_i, hit_j) != 0) {
        ok = false;
        break;
      }
      filled(hit_i, hit_j) = 1;
      gram(hit_i, hit_j) = gram(hit_j, hit_i) = e.triple.c;
    }
    if (!ok) continue;
    try {
      return SparseSignal(w, psd_factor(GramMatrix(gram), n, tol), tol);
    } catch (const Error& err) {
      if (!factor_error) factor_error = err;
    }
  }
  if (factor_error) throw *factor_error;
  throw Error(ErrorKind::InconsistentWeights, "no weight assignment reproduces the products");
}

}  // namespace beltway
