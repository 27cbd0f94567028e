#include "beltway/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace beltway {

bool OrbitTriple::is_diagonal(double eps) const {
  return beltway::nearly_equal(a, b, eps) && beltway::nearly_equal(a, c, eps);
}

bool OrbitTriple::nearly_equal(const OrbitTriple& other, double eps) const {
  return beltway::nearly_equal(a, other.a, eps) && beltway::nearly_equal(b, other.b, eps) &&
         beltway::nearly_equal(c, other.c, eps);
}

InvariantSet::InvariantSet(int k, std::vector<InvariantEntry> entries, const Tolerances& tol)
    : k_(k), entries_(std::move(entries)) {
  if (k < 1) throw Error(ErrorKind::InconsistentInvariants, "k must be >= 1");
  const auto expected = static_cast<std::size_t>(k) * static_cast<std::size_t>(k + 1) / 2;
  if (entries_.size() != expected) {
    throw Error(ErrorKind::InconsistentInvariants,
                "expected " + std::to_string(expected) + " entries, got " +
                    std::to_string(entries_.size()));
  }
  for (const auto& e : entries_) {
    const auto& t = e.triple;
    if (!std::isfinite(t.a) || !std::isfinite(t.b) || !std::isfinite(t.c) ||
        !std::isfinite(e.wprod)) {
      throw Error(ErrorKind::InconsistentInvariants, "non-finite entry");
    }
    if (t.a > t.b || t.a < -tol.eps_match) {
      throw Error(ErrorKind::InconsistentInvariants, "triple magnitudes must satisfy 0 <= a <= b");
    }
    if (t.c * t.c > t.a * t.b + tol.eps_match * std::max(1.0, t.a * t.b)) {
      throw Error(ErrorKind::InconsistentInvariants, "triple violates Cauchy-Schwarz");
    }
  }
  const auto diag = std::count_if(entries_.begin(), entries_.end(), [&](const InvariantEntry& e) {
    return e.triple.is_diagonal(tol.eps_match);
  });
  if (diag != k) {
    throw Error(ErrorKind::InconsistentInvariants,
                "expected " + std::to_string(k) + " diagonal entries, found " + std::to_string(diag));
  }
  std::sort(entries_.begin(), entries_.end());
}

std::vector<InvariantEntry> InvariantSet::diagonal(double eps) const {
  std::vector<InvariantEntry> out;
  std::copy_if(entries_.begin(), entries_.end(), std::back_inserter(out),
               [&](const InvariantEntry& e) { return e.triple.is_diagonal(eps); });
  return out;
}

std::vector<InvariantEntry> InvariantSet::off_diagonal(double eps) const {
  std::vector<InvariantEntry> out;
  std::copy_if(entries_.begin(), entries_.end(), std::back_inserter(out),
               [&](const InvariantEntry& e) { return !e.triple.is_diagonal(eps); });
  return out;
}

bool InvariantSet::matches(const InvariantSet& other, double eps) const {
  if (k_ != other.k_ || entries_.size() != other.entries_.size()) return false;
  // Greedy matching is exact here: within eps, entries of a valid set form
  // equivalence classes (distinct triples, or equal diagonal triples that
  // only differ in wprod).
  std::vector<bool> used(other.entries_.size(), false);
  for (const auto& e : entries_) {
    bool found = false;
    for (std::size_t j = 0; j < other.entries_.size(); ++j) {
      if (used[j]) continue;
      const auto& f = other.entries_[j];
      if (e.triple.nearly_equal(f.triple, eps) && nearly_equal(e.wprod, f.wprod, eps)) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

int MagnitudePartition::k() const {
  return std::accumulate(multiplicities.begin(), multiplicities.end(), 0);
}

OrbitTriple pair_orbit_triple(const Point& ti, const Point& tj) {
  if (ti.size() != tj.size()) {
    throw Error(ErrorKind::DimensionMismatch, "points have different dimensions");
  }
  const double ni = ti.squaredNorm();
  const double nj = tj.squaredNorm();
  return {std::min(ni, nj), std::max(ni, nj), ti.dot(tj)};
}

namespace {

std::vector<OrbitTriple> off_diagonal_triples(const SparseSignal& signal) {
  std::vector<OrbitTriple> out;
  for (int i = 0; i < signal.size(); ++i) {
    for (int j = i + 1; j < signal.size(); ++j) {
      out.push_back(pair_orbit_triple(signal.point(i), signal.point(j)));
    }
  }
  return out;
}

}  // namespace

bool is_collision_free(const SparseSignal& signal, const Tolerances& tol) {
  const auto triples = off_diagonal_triples(signal);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    for (std::size_t j = i + 1; j < triples.size(); ++j) {
      if (triples[i].nearly_equal(triples[j], tol.eps_match)) return false;
    }
  }
  return true;
}

bool is_radially_collision_free(const SparseSignal& signal, const Tolerances& tol) {
  for (int i = 0; i < signal.size(); ++i) {
    for (int j = i + 1; j < signal.size(); ++j) {
      if (nearly_equal(signal.point(i).norm(), signal.point(j).norm(), tol.eps_match)) {
        return false;
      }
    }
  }
  return true;
}

InvariantSet second_moment_invariants(const SparseSignal& signal, const Tolerances& tol) {
  if (!is_collision_free(signal, tol)) {
    throw Error(ErrorKind::NotCollisionFree,
                "two distinct point pairs share an O(n)-orbit; encoding would merge them");
  }
  std::vector<InvariantEntry> entries;
  for (int i = 0; i < signal.size(); ++i) {
    for (int j = i; j < signal.size(); ++j) {
      entries.push_back({pair_orbit_triple(signal.point(i), signal.point(j)),
                         signal.weight(i) * signal.weight(j)});
    }
  }
  return InvariantSet(signal.size(), std::move(entries), tol);
}

MagnitudePartition magnitude_partition(const InvariantSet& inv, const Tolerances& tol) {
  std::vector<double> squared;
  for (const auto& e : inv.diagonal(tol.eps_match)) squared.push_back(e.triple.a);
  std::sort(squared.begin(), squared.end());

  MagnitudePartition out;
  double anchor = 0.0;
  for (double a : squared) {
    if (out.magnitudes.empty() || !nearly_equal(anchor, a, tol.eps_match)) {
      anchor = a;
      out.magnitudes.push_back(std::sqrt(std::max(0.0, a)));
      out.multiplicities.push_back(1);
    } else {
      ++out.multiplicities.back();
    }
  }
  return out;
}

}  // namespace beltway
