#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "beltway/recovery.hpp"
#include "beltway/signal.hpp"

namespace beltway {

enum class PositiveMode {
  Every,   // all five non-trivial permutations admit a completion
  Exists,  // at least one does
};

std::string_view to_string(PositiveMode mode);
PositiveMode parse_mode(std::string_view text);

struct ExperimentConfig {
  std::uint64_t trials = 10'000;
  std::uint64_t seed = 0;
  PositiveMode mode = PositiveMode::Every;
  Tolerances tolerances;
};

struct ExperimentReport {
  std::uint64_t trials = 0;
  std::uint64_t positives = 0;
  double fraction = 0.0;
  PositiveMode mode = PositiveMode::Every;
  std::uint64_t seed = 0;
};

/// One sample of the k = n = 4 sphere experiment: a unit-column upper
/// triangular X with t_1 = e_1, plus which non-trivial permutations of
/// (t_1.t_4, t_2.t_4, t_3.t_4) are realized by some unit s_4.
struct SphereTrial {
  Eigen::Matrix4d points;
  std::array<bool, 5> completable{};

  bool every() const;
  bool exists() const;
  SparseSignal signal() const;
};

/// Deterministic in (seed, index); each trial draws from its own stream.
SphereTrial sample_sphere_trial(std::uint64_t seed, std::uint64_t index, const Tolerances& tol = {});

ExperimentReport mc_sphere_experiment(const ExperimentConfig& cfg);

std::string format_report(const ExperimentReport& report);

/// The homometric pair P = {0,1,8,11,13,17}, Q = {0,1,4,10,12,17} embedded
/// in the half circle with M = 17.
struct PiccardDemo {
  Eigen::MatrixXd gram_p;
  Eigen::MatrixXd gram_q;
  // gram_q with entries (1,2) and (1,3) exchanged symmetrically.
  Eigen::MatrixXd swapped;
  Eigen::VectorXd swapped_eigenvalues;  // descending
  bool swapped_is_psd = false;
  int swapped_rank = 0;
  bool invariants_equal = false;
  bool orbit_equivalent = false;
  int orbit_count = 0;
  bool found_p = false;
  bool found_q = false;
  BigInt bound;
  double enumerate_seconds = 0.0;
};

PiccardDemo run_piccard_demo(const Tolerances& tol = {});

std::string format_demo(const PiccardDemo& demo);

}  // namespace beltway
