#include "beltway/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "beltway/invariants.hpp"
#include "beltway/turnpike.hpp"

namespace beltway {

std::string_view to_string(PositiveMode mode) {
  return mode == PositiveMode::Every ? "every" : "exists";
}

PositiveMode parse_mode(std::string_view text) {
  if (text == "every") return PositiveMode::Every;
  if (text == "exists") return PositiveMode::Exists;
  throw Error(ErrorKind::ConfigError, "mode must be 'every' or 'exists'");
}

bool SphereTrial::every() const {
  return std::all_of(completable.begin(), completable.end(), [](bool b) { return b; });
}

bool SphereTrial::exists() const {
  return std::any_of(completable.begin(), completable.end(), [](bool b) { return b; });
}

SparseSignal SphereTrial::signal() const { return SparseSignal::binary(Eigen::MatrixXd(points)); }

namespace {

template <typename Rng>
Eigen::VectorXd uniform_on_sphere(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

}  // namespace

SphereTrial sample_sphere_trial(std::uint64_t seed, std::uint64_t index, const Tolerances& tol) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);

  SphereTrial trial;
  trial.points.setZero();
  trial.points(0, 0) = 1.0;
  for (int col = 1; col < 4; ++col) {
    trial.points.col(col).head(col + 1) = uniform_on_sphere(col + 1, rng);
  }

  const Eigen::Matrix4d& x = trial.points;
  const Eigen::Vector3d column(x.col(0).dot(x.col(3)), x.col(1).dot(x.col(3)),
                               x.col(2).dot(x.col(3)));
  std::array<int, 3> perm{0, 1, 2};
  std::size_t slot = 0;
  while (std::next_permutation(perm.begin(), perm.end())) {
    // Forward substitution for the first three coordinates of s_4.
    Eigen::Vector3d s;
    for (int l = 0; l < 3; ++l) {
      double acc = column(perm[static_cast<std::size_t>(l)]);
      for (int m = 0; m < l; ++m) acc -= x(m, l) * s(m);
      s(l) = acc / x(l, l);
    }
    trial.completable[slot++] = 1.0 - s.squaredNorm() >= -tol.eps_match;
  }
  return trial;
}

ExperimentReport mc_sphere_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw Error(ErrorKind::ConfigError, "trials must be >= 1");
  cfg.tolerances.validate();
  ExperimentReport report;
  report.trials = cfg.trials;
  report.mode = cfg.mode;
  report.seed = cfg.seed;
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    const SphereTrial trial = sample_sphere_trial(cfg.seed, t, cfg.tolerances);
    const bool positive = cfg.mode == PositiveMode::Every ? trial.every() : trial.exists();
    if (positive) ++report.positives;
  }
  report.fraction = static_cast<double>(report.positives) / static_cast<double>(report.trials);
  return report;
}

std::string format_report(const ExperimentReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "trials %llu\npositives %llu\nfraction %.12g\nmode %s\nseed %llu\n",
                static_cast<unsigned long long>(report.trials),
                static_cast<unsigned long long>(report.positives), report.fraction,
                std::string(to_string(report.mode)).c_str(),
                static_cast<unsigned long long>(report.seed));
  return buf;
}

PiccardDemo run_piccard_demo(const Tolerances& tol) {
  const LineSet p({0, 1, 8, 11, 13, 17}, tol);
  const LineSet q({0, 1, 4, 10, 12, 17}, tol);
  const SparseSignal x = embed_half_circle(p, 17.0);
  const SparseSignal y = embed_half_circle(q, 17.0);

  PiccardDemo demo;
  demo.gram_p = gram_matrix(x).entries();
  demo.gram_q = gram_matrix(y).entries();

  demo.swapped = demo.gram_q;
  std::swap(demo.swapped(0, 1), demo.swapped(0, 2));
  demo.swapped(1, 0) = demo.swapped(0, 1);
  demo.swapped(2, 0) = demo.swapped(0, 2);
  demo.swapped_eigenvalues = sorted_eigenvalues(demo.swapped);
  const double scale = demo.swapped_eigenvalues.cwiseAbs().maxCoeff();
  demo.swapped_is_psd = demo.swapped_eigenvalues.minCoeff() >= -tol.eps_psd * scale;
  demo.swapped_rank = static_cast<int>(
      (demo.swapped_eigenvalues.array().abs() > tol.eps_rank * scale).count());

  const InvariantSet inv_x = second_moment_invariants(x, tol);
  const InvariantSet inv_y = second_moment_invariants(y, tol);
  demo.invariants_equal = inv_x.matches(inv_y, tol.eps_match);
  demo.orbit_equivalent = beltway::orbit_equivalent(x, y, tol);

  const auto start = std::chrono::steady_clock::now();
  const RecoveryResult result = enumerate_orbits(inv_x, 2, 16, tol);
  demo.enumerate_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  demo.orbit_count = static_cast<int>(result.orbits.size());
  demo.bound = result.bound;
  for (const auto& orbit : result.orbits) {
    demo.found_p = demo.found_p || beltway::orbit_equivalent(orbit, x, tol);
    demo.found_q = demo.found_q || beltway::orbit_equivalent(orbit, y, tol);
  }
  return demo;
}

namespace {

void print_matrix(std::ostringstream& out, const Eigen::MatrixXd& m) {
  char buf[32];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%7.2f", m(r, c) == 0.0 ? 0.0 : m(r, c));
      out << buf;
    }
    out << '\n';
  }
}

const char* verdict(bool ok) { return ok ? "ok" : "FAILED"; }

}  // namespace

std::string format_demo(const PiccardDemo& demo) {
  std::ostringstream out;
  out << "P = {0, 1, 8, 11, 13, 17}, Q = {0, 1, 4, 10, 12, 17}, M = 17\n\n";
  out << "Gram matrix of the Q embedding:\n";
  print_matrix(out, demo.gram_q);
  out << "\nGram matrix of the P embedding:\n";
  print_matrix(out, demo.gram_p);
  out << "\nQ Gram with entries (1,2) and (1,3) exchanged:\n";
  print_matrix(out, demo.swapped);
  out << "eigenvalues:";
  char buf[32];
  for (double v : demo.swapped_eigenvalues) {
    std::snprintf(buf, sizeof buf, " %.2f", std::abs(v) < 5e-3 ? 0.0 : v);
    out << buf;
  }
  out << "\npsd: " << (demo.swapped_is_psd ? "yes" : "no") << ", rank: " << demo.swapped_rank
      << "\n\n";
  out << "invariant sets equal: " << (demo.invariants_equal ? "yes" : "no") << " ["
      << verdict(demo.invariants_equal) << "]\n";
  out << "orbit equivalent: " << (demo.orbit_equivalent ? "yes" : "no") << " ["
      << verdict(!demo.orbit_equivalent) << "]\n";
  out << "orbit bound: " << demo.bound.str() << '\n';
  out << "orbits enumerated (n = 2): " << demo.orbit_count << '\n';
  out << "P and Q among them: " << (demo.found_p && demo.found_q ? "yes" : "no") << " ["
      << verdict(demo.found_p && demo.found_q) << "]\n";
  return out.str();
}

}  // namespace beltway
