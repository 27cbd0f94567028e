#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "beltway/experiment.hpp"
#include "beltway/invariants.hpp"
#include "beltway/recovery.hpp"
#include "beltway/turnpike.hpp"
#include "test_support.hpp"

using namespace beltway;
namespace bt = beltway::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream limit;
  limit << seconds << " s, limit " << limit_seconds << " s";
  o.require(seconds < limit_seconds, "runtime " + limit.str());
  if (!o.pass) ++failures;
  std::printf("%s %d %s (%.4g s)%s%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), seconds,
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
}

std::string str(const BigInt& v) { return v.str(); }

Eigen::MatrixXd printed_a() {
  Eigen::MatrixXd a(6, 6);
  a << 1.0, 0.98, 0.74, -0.27, -0.60, -1.0,
       0.98, 1.0, 0.85, -0.092, -0.45, -0.98,
       0.74, 0.85, 1.0, 0.45, 0.092, -0.74,
       -0.27, -0.092, 0.45, 1.0, 0.93, 0.27,
       -0.60, -0.45, 0.092, 0.93, 1.0, 0.60,
       -1.0, -0.98, -0.74, 0.27, 0.60, 1.0;
  return a;
}

Eigen::MatrixXd printed_b() {
  Eigen::MatrixXd b(6, 6);
  b << 1.0, 0.98, 0.092, -0.45, -0.74, -1.0,
       0.98, 1.0, 0.27, -0.27, -0.60, -0.98,
       0.092, 0.27, 1.0, 0.85, 0.60, -0.092,
       -0.45, -0.27, 0.85, 1.0, 0.93, 0.45,
       -0.74, -0.60, 0.60, 0.93, 1.0, 0.74,
       -1.0, -0.98, -0.092, 0.45, 0.74, 1.0;
  return b;
}

bool equivalent_up_to_sign(const SparseSignal& a, const SparseSignal& b) {
  return orbit_equivalent(a, b) || orbit_equivalent(a, b.negated());
}

Outcome bounds() {
  Outcome o;
  const BigInt six = orbit_count_bound(std::vector<int>{6});
  o.require(six == BigInt(121080960), "(6) gives " + str(six) + ", expected 121080960");
  const BigInt four = orbit_count_bound(std::vector<int>{4});
  o.require(four == 30, "(4) gives " + str(four));
  const BigInt ones = orbit_count_bound(std::vector<int>{1, 1, 1, 1, 1, 1});
  o.require(ones == 1, "ones give " + str(ones));
  return o;
}

Outcome golden() {
  Outcome o;
  const SparseSignal p = embed_half_circle(LineSet({0, 1, 8, 11, 13, 17}), 17.0);
  const SparseSignal q = embed_half_circle(LineSet({0, 1, 4, 10, 12, 17}), 17.0);
  const Eigen::MatrixXd gp = gram_matrix(p).entries();
  const Eigen::MatrixXd gq = gram_matrix(q).entries();
  o.require(bt::max_abs_diff(gq, printed_a()) < 0.005, "A differs from the Q embedding");
  o.require(bt::max_abs_diff(gp, printed_b()) < 0.005, "B differs from the P embedding");
  o.require(second_moment_invariants(p).matches(second_moment_invariants(q), 1e-9),
            "invariants differ");
  o.require(!orbit_equivalent(p, q), "P and Q reported equivalent");

  Eigen::MatrixXd c = gq;
  std::swap(c(0, 1), c(0, 2));
  c(1, 0) = c(0, 1);
  c(2, 0) = c(0, 2);
  const Eigen::VectorXd ev = sorted_eigenvalues(c);
  const std::array<double, 6> expected{3.9, 2.1, 0.30, 0.0, 0.0, -0.28};
  for (int i = 0; i < 6; ++i) {
    o.require(std::abs(ev(i) - expected[static_cast<std::size_t>(i)]) < 0.05,
              "eigenvalue " + std::to_string(i) + " = " + std::to_string(ev(i)));
  }
  const double scale = ev.cwiseAbs().maxCoeff();
  const Tolerances tol;
  o.require((ev.array().abs() > tol.eps_rank * scale).count() == 4, "C rank is not 4");
  bool not_psd = false;
  try {
    psd_factor(GramMatrix(c), 6);
  } catch (const Error& e) {
    not_psd = e.kind() == ErrorKind::NotPSD;
  }
  o.require(not_psd, "C not reported NotPSD");
  return o;
}

Outcome enumeration() {
  Outcome o;
  const SparseSignal p = embed_half_circle(LineSet({0, 1, 8, 11, 13, 17}), 17.0);
  const SparseSignal q = embed_half_circle(LineSet({0, 1, 4, 10, 12, 17}), 17.0);
  const RecoveryResult r = enumerate_orbits(second_moment_invariants(p), 2, 16);
  o.require(r.orbits.size() == 2, "found " + std::to_string(r.orbits.size()) + " orbits, expected 2");
  o.require(!r.truncated, "truncated");
  bool has_p = false;
  bool has_q = false;
  for (const auto& orbit : r.orbits) {
    has_p = has_p || orbit_equivalent(orbit, p);
    has_q = has_q || orbit_equivalent(orbit, q);
  }
  o.require(has_p, "P orbit missing");
  o.require(has_q, "Q orbit missing");
  return o;
}

Outcome monte_carlo() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.trials = 10'000;
  cfg.seed = 7;
  cfg.mode = PositiveMode::Every;
  const ExperimentReport r = mc_sphere_experiment(cfg);
  o.require(r.fraction >= 0.10 && r.fraction <= 0.18,
            "fraction " + std::to_string(r.fraction));
  o.detail = o.pass ? "fraction " + std::to_string(r.fraction) : o.detail;
  return o;
}

// Radially collision-free supports have a canonical labelling by magnitude.
SparseSignal by_magnitude(const SparseSignal& x) {
  std::vector<int> order(static_cast<std::size_t>(x.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return x.point(a).norm() < x.point(b).norm(); });
  return x.reordered(order);
}

Outcome uniqueness() {
  Outcome o;
  std::mt19937_64 rng(101);
  int bad_unique = 0;
  int bad_enum = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::array{3, 5, 8}[static_cast<std::size_t>(trial % 3)];
    const SparseSignal x(bt::random_weights(n, rng),
                         bt::points_with_magnitudes(n, bt::distinct_magnitudes(n, rng), rng));
    const InvariantSet inv = second_moment_invariants(x);
    const SparseSignal y = recover_unique(inv, n);
    const bool eq = equivalent_up_to_sign(y, x);
    const double residual =
        bt::max_abs_diff(gram_matrix(by_magnitude(y)).entries(), gram_matrix(by_magnitude(x)).entries());
    const bool residual_ok = residual < 1e-6;
    if (!eq || !residual_ok) ++bad_unique;
    if (enumerate_orbits(inv, n, 4).orbits.size() != 1) ++bad_enum;
  }
  o.require(bad_unique == 0, std::to_string(bad_unique) + " recover_unique mismatches");
  o.require(bad_enum == 0, std::to_string(bad_enum) + " enumerations without exactly 1 orbit");
  return o;
}

Outcome distinct_products() {
  Outcome o;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::uniform_real_distribution<double> level(0.8, 2.0);
  std::bernoulli_distribution flip(0.3);
  int tested = 0;
  int bad = 0;
  while (tested < 100) {
    const int n = 2 + tested % 3;
    const int k = 3 + tested % 4;
    const int levels = 1 + tested % 2;
    std::vector<double> values;
    for (int l = 0; l < levels; ++l) values.push_back(level(rng));
    std::vector<double> mags;
    for (int i = 0; i < k; ++i) mags.push_back(values[static_cast<std::size_t>(i % levels)]);
    std::vector<double> w;
    for (int i = 0; i < k; ++i) w.push_back(flip(rng) ? -mag(rng) : mag(rng));
    const SparseSignal x(w, bt::points_with_magnitudes(n, mags, rng));
    if (!is_collision_free(x) || is_radially_collision_free(x) || !weight_products_distinct(w))
      continue;
    ++tested;
    const SparseSignal y = recover_distinct_weight_products(second_moment_invariants(x), n);
    if (!equivalent_up_to_sign(y, x)) ++bad;
  }
  o.require(bad == 0, std::to_string(bad) + " of 100 not equivalent");
  return o;
}

Outcome partner() {
  Outcome o;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  int built = 0;
  int degenerate = 0;
  int bad = 0;
  while (built < 100) {
    const Eigen::MatrixXd t = bt::random_partner_input(rng, radius(rng));
    try {
      const SparseSignal x = SparseSignal::binary(t);
      const SparseSignal y = homometric_partner(x);
      ++built;
      if (!second_moment_invariants(y).matches(second_moment_invariants(x), 1e-8) ||
          orbit_equivalent(x, y))
        ++bad;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegeneratePartner) throw;
      if (++degenerate > 1000) break;
    }
  }
  o.require(built == 100, "only " + std::to_string(built) + " partners built");
  o.require(bad == 0, std::to_string(bad) + " partners failed the checks");
  return o;
}

Outcome soundness() {
  Outcome o;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> level(0.6, 2.5);
  int tested = 0;
  int unsound = 0;
  int missing = 0;
  int over = 0;
  while (tested < 100) {
    const int n = 2 + tested % 2;
    const int k = 2 + tested % 5;
    const int levels = 1 + tested % 3;
    std::vector<double> values;
    for (int l = 0; l < levels; ++l) values.push_back(level(rng));
    std::vector<double> mags;
    for (int i = 0; i < k; ++i) mags.push_back(values[static_cast<std::size_t>(i % levels)]);
    const auto pts = bt::points_with_magnitudes(n, mags, rng);
    const SparseSignal x = tested % 3 == 0 ? SparseSignal(bt::random_weights(k, rng), pts)
                                           : SparseSignal::binary(pts);
    if (!is_collision_free(x)) continue;
    ++tested;
    const InvariantSet inv = second_moment_invariants(x);
    const RecoveryResult r = enumerate_orbits(inv, n, 100000);
    bool found = false;
    for (const auto& orbit : r.orbits) {
      if (!second_moment_invariants(orbit).matches(inv, 1e-8)) ++unsound;
      found = found || equivalent_up_to_sign(orbit, x);
    }
    if (!found) ++missing;
    if (BigInt(r.orbits.size()) > r.bound) ++over;
  }
  o.require(unsound == 0, std::to_string(unsound) + " orbits do not reproduce the invariants");
  o.require(missing == 0, std::to_string(missing) + " sources missing");
  o.require(over == 0, std::to_string(over) + " counts above the bound");
  return o;
}

}  // namespace

int main() {
  criterion(1, "orbit_count_bound values", 1e-3, bounds);
  criterion(2, "printed Gram matrices, invariants and swapped matrix", 1.0, golden);
  criterion(3, "enumeration of the six-point homometric pair", 60.0, enumeration);
  criterion(4, "sphere Monte Carlo, 10000 trials, mode every", 60.0, monte_carlo);
  criterion(5, "uniqueness for radially collision-free signals", 600.0, uniqueness);
  criterion(6, "recovery from distinct weight products", 600.0, distinct_products);
  criterion(7, "homometric partners of triangular inputs", 600.0, partner);
  criterion(8, "enumeration soundness, completeness and bound", 600.0, soundness);
  return failures == 0 ? 0 : 1;
}
