#pragma once

#include <utility>
#include <vector>

#include "beltway/signal.hpp"

namespace beltway {

/// Points on the real line, pairwise distinct.
class LineSet {
 public:
  explicit LineSet(std::vector<double> values, const Tolerances& tol = {});

  const std::vector<double>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  double diameter() const;

 private:
  std::vector<double> values_;
};

/// Sorted |a_i - a_j| over i < j.
std::vector<double> difference_multiset(const LineSet& s);

bool same_differences(const LineSet& s, const LineSet& t, const Tolerances& tol = {});

/// a -> (cos(pi a / M), sin(pi a / M)). Requires M >= diameter.
SparseSignal embed_half_circle(const LineSet& s, double scale);
/// Uses the tight scale M = diameter.
SparseSignal embed_half_circle(const LineSet& s);

/// The two homometric six-point families
///   P = {0, a, b-2a, 2b-2a, 2b, 3b-a},  Q = {0, a, 2a+b, a+2b, 2b-a, 3b-a}.
std::pair<LineSet, LineSet> piccard_sets(double a, double b, const Tolerances& tol = {});

/// Equal up to translation and reflection.
bool turnpike_equivalent(const LineSet& s, const LineSet& t, const Tolerances& tol = {});

/// All pairwise differences distinct.
bool is_collision_free(const LineSet& s, const Tolerances& tol = {});

}  // namespace beltway
