#include "beltway/turnpike.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace beltway {

LineSet::LineSet(std::vector<double> values, const Tolerances& tol) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw Error(ErrorKind::InvalidArgument, "non-finite position");
    for (std::size_t j = i + 1; j < values_.size(); ++j) {
      if (nearly_equal(values_[i], values_[j], tol.eps_match)) {
        throw Error(ErrorKind::InvalidArgument, "positions must be distinct");
      }
    }
  }
}

double LineSet::diameter() const {
  if (values_.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  return *hi - *lo;
}

std::vector<double> difference_multiset(const LineSet& s) {
  const auto& v = s.values();
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) out.push_back(std::abs(v[i] - v[j]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool same_differences(const LineSet& s, const LineSet& t, const Tolerances& tol) {
  const auto ds = difference_multiset(s);
  const auto dt = difference_multiset(t);
  if (ds.size() != dt.size()) return false;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!nearly_equal(ds[i], dt[i], tol.eps_match)) return false;
  }
  return true;
}

SparseSignal embed_half_circle(const LineSet& s, double scale) {
  if (s.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty line set");
  if (!(scale > 0.0) || scale < s.diameter()) {
    throw Error(ErrorKind::ScaleError, "scale " + std::to_string(scale) +
                                           " below the set's diameter " +
                                           std::to_string(s.diameter()));
  }
  Eigen::MatrixXd points(2, s.size());
  for (int i = 0; i < s.size(); ++i) {
    const double angle = std::numbers::pi * s.values()[static_cast<std::size_t>(i)] / scale;
    points(0, i) = std::cos(angle);
    points(1, i) = std::sin(angle);
  }
  return SparseSignal::binary(std::move(points));
}

SparseSignal embed_half_circle(const LineSet& s) {
  const double d = s.diameter();
  return embed_half_circle(s, d > 0.0 ? d : 1.0);
}

std::pair<LineSet, LineSet> piccard_sets(double a, double b, const Tolerances& tol) {
  std::vector<double> p{0.0, a, b - 2 * a, 2 * b - 2 * a, 2 * b, 3 * b - a};
  std::vector<double> q{0.0, a, 2 * a + b, a + 2 * b, 2 * b - a, 3 * b - a};
  try {
    return {LineSet(std::move(p), tol), LineSet(std::move(q), tol)};
  } catch (const Error&) {
    throw Error(ErrorKind::DegenerateParameters,
                "(a, b) = (" + std::to_string(a) + ", " + std::to_string(b) +
                    ") gives fewer than six distinct points");
  }
}

namespace {

std::vector<double> normalized(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double origin = v.front();
  for (double& x : v) x -= origin;
  return v;
}

bool all_close(const std::vector<double>& x, const std::vector<double>& y, double eps) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!nearly_equal(x[i], y[i], eps)) return false;
  }
  return true;
}

}  // namespace

bool turnpike_equivalent(const LineSet& s, const LineSet& t, const Tolerances& tol) {
  if (s.size() != t.size()) return false;
  if (s.size() == 0) return true;
  const auto ns = normalized(s.values());
  const auto nt = normalized(t.values());
  if (all_close(ns, nt, tol.eps_match)) return true;
  std::vector<double> reflected(s.values());
  for (double& x : reflected) x = -x;
  return all_close(normalized(std::move(reflected)), nt, tol.eps_match);
}

bool is_collision_free(const LineSet& s, const Tolerances& tol) {
  const auto d = difference_multiset(s);
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (nearly_equal(d[i - 1], d[i], tol.eps_match)) return false;
  }
  return true;
}

}  // namespace beltway
