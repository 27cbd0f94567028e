#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "beltway/invariants.hpp"
#include "beltway/signal.hpp"

namespace beltway {

using BigInt = boost::multiprecision::cpp_int;

/// Upper bound on the number of O(n)-orbits sharing a second moment:
///
///   prod_{r_p >= 2} C(r_p, 2)! / r_p!  *  prod_{a < b} (r_a r_b)!
///
/// evaluated exactly. Returns 1 when k < 3.
BigInt orbit_count_bound(const MagnitudePartition& partition);
BigInt orbit_count_bound(std::span<const int> multiplicities);

struct RecoveryResult {
  std::vector<SparseSignal> orbits;  // canonical order, pairwise non-equivalent
  BigInt bound;
  bool truncated = false;
  // Weights carry mixed signs, so the negated signal is a distinct
  // solution with the same second moment.
  bool sign_ambiguous = false;
  std::uint64_t nodes = 0;       // backtracking nodes visited
  std::uint64_t candidates = 0;  // complete Gram candidates passing all filters
};

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

/// Radially collision-free case: every off-diagonal triple addresses exactly
/// one Gram entry. Weights are normalized so the smallest-magnitude point has
/// a positive weight.
SparseSignal recover_unique(const InvariantSet& inv, int n, const Tolerances& tol = {});

/// All orbits consistent with a collision-free invariant set.
///
/// Gram candidates are built row by row with the diagonal ordered by
/// magnitude. After each assignment the principal submatrix over the
/// completed indices is required to be PSD with rank <= n, and weight
/// products must be consistent with the diagonal. Survivors are deduplicated
/// up to magnitude- and weight-preserving relabelings and a global weight
/// sign. Stops with
/// `truncated` once more than `max_results` orbits are found; throws
/// BudgetExceeded past `node_budget` nodes.
RecoveryResult enumerate_orbits(const InvariantSet& inv, int n, int max_results,
                                const Tolerances& tol = {},
                                std::uint64_t node_budget = kDefaultNodeBudget);

bool weight_products_distinct(std::span<const double> weights, const Tolerances& tol = {});

/// Collision-free support with pairwise-distinct weight products: each
/// off-diagonal entry is located by its weight product alone. The result is
/// determined up to a global weight sign.
SparseSignal recover_distinct_weight_products(const InvariantSet& inv, int n,
                                              const Tolerances& tol = {});

}  // namespace beltway
