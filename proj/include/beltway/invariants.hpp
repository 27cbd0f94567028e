#pragma once

#include <vector>

#include "beltway/signal.hpp"

namespace beltway {

/// O(n)-orbit descriptor of an unordered point pair: the two squared
/// magnitudes (smaller first) and the inner product.
struct OrbitTriple {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  bool is_diagonal(double eps) const;
  bool nearly_equal(const OrbitTriple& other, double eps) const;
  auto operator<=>(const OrbitTriple&) const = default;
};

struct InvariantEntry {
  OrbitTriple triple;
  double wprod = 0.0;

  auto operator<=>(const InvariantEntry&) const = default;
};

/// Finite encoding of the second moment of a collision-free signal: one entry
/// per unordered pair i <= j, stored in lexicographic order.
class InvariantSet {
 public:
  InvariantSet(int k, std::vector<InvariantEntry> entries, const Tolerances& tol = {});

  int k() const { return k_; }
  const std::vector<InvariantEntry>& entries() const { return entries_; }

  std::vector<InvariantEntry> diagonal(double eps) const;
  std::vector<InvariantEntry> off_diagonal(double eps) const;

  /// Multiset equality with every field compared by `nearly_equal`.
  bool matches(const InvariantSet& other, double eps) const;

 private:
  int k_;
  std::vector<InvariantEntry> entries_;
};

struct MagnitudePartition {
  std::vector<double> magnitudes;  // strictly increasing
  std::vector<int> multiplicities;

  int k() const;
  int blocks() const { return static_cast<int>(magnitudes.size()); }
};

OrbitTriple pair_orbit_triple(const Point& ti, const Point& tj);

/// Throws NotCollisionFree when two distinct pairs share an orbit, since the
/// encoding would then merge their weights.
InvariantSet second_moment_invariants(const SparseSignal& signal, const Tolerances& tol = {});

bool is_collision_free(const SparseSignal& signal, const Tolerances& tol = {});
bool is_radially_collision_free(const SparseSignal& signal, const Tolerances& tol = {});

MagnitudePartition magnitude_partition(const InvariantSet& inv, const Tolerances& tol = {});

}  // namespace beltway
