#include "cli.hpp"

#include <fstream>
#include <vector>

#include <CLI11.hpp>

#include "beltway/experiment.hpp"
#include "beltway/invariants.hpp"
#include "beltway/io.hpp"
#include "beltway/recovery.hpp"
#include "beltway/signal.hpp"
#include "beltway/turnpike.hpp"

namespace beltway::cli {

namespace {

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  file << text;
}

std::string recover_auto(const InvariantSet& inv, int n, const Tolerances& tol) {
  const MagnitudePartition part = magnitude_partition(inv, tol);
  if (part.blocks() == inv.k()) {
    return "# recovered via unique\n" + io::write_signal(recover_unique(inv, n, tol));
  }
  try {
    const SparseSignal s = recover_distinct_weight_products(inv, n, tol);
    return "# recovered via distinct-weight-products\n" + io::write_signal(s);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::WeightProductsNotDistinct) throw;
  }
  const RecoveryResult result = enumerate_orbits(inv, n, 1, tol);
  if (result.orbits.empty()) {
    throw Error(ErrorKind::InconsistentInvariants, "no orbit in dimension " + std::to_string(n));
  }
  if (result.truncated) {
    throw Error(ErrorKind::InconsistentInvariants,
                "second moment does not determine the orbit; use `enumerate`");
  }
  return "# recovered via enumeration\n" + io::write_signal(result.orbits.front());
}

std::string enumerate_report(const RecoveryResult& result) {
  std::string out = "# orbits " + std::to_string(result.orbits.size()) + "\n";
  out += "# bound " + result.bound.str() + "\n";
  out += std::string("# truncated ") + (result.truncated ? "yes" : "no") + "\n";
  out += std::string("# sign_ambiguous ") + (result.sign_ambiguous ? "yes" : "no") + "\n";
  for (std::size_t i = 0; i < result.orbits.size(); ++i) {
    out += "\n# orbit " + std::to_string(i + 1) + "\n" + io::write_signal(result.orbits[i]);
  }
  return out;
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += io::format_number(values[i]);
  }
  return out + "\n";
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse signal recovery from second moments over O(n)", "beltway"};
  app.require_subcommand(1);

  Tolerances tol;
  app.add_option("--eps-match", tol.eps_match, "value matching tolerance")->check(CLI::PositiveNumber);
  app.add_option("--eps-psd", tol.eps_psd, "relative PSD tolerance")->check(CLI::PositiveNumber);
  app.add_option("--eps-rank", tol.eps_rank, "relative rank tolerance")->check(CLI::PositiveNumber);

  std::string output;
  std::string input;
  std::string other;
  int dim = 0;
  int max_results = 1000;
  std::uint64_t budget = kDefaultNodeBudget;

  auto* invariants = app.add_subcommand("invariants", "signal file -> invariant file");
  invariants->add_option("signal", input, "signal file")->required();
  invariants->add_option("-o,--output", output, "output path (default stdout)");

  auto* recover = app.add_subcommand("recover", "invariant file -> signal file");
  recover->add_option("invariants", input, "invariant file")->required();
  recover->add_option("--dim", dim, "ambient dimension n")->required()->check(CLI::PositiveNumber);
  recover->add_option("-o,--output", output, "output path (default stdout)");

  auto* enumerate = app.add_subcommand("enumerate", "list every orbit matching an invariant file");
  enumerate->add_option("invariants", input, "invariant file")->required();
  enumerate->add_option("--dim", dim, "ambient dimension n")->required()->check(CLI::PositiveNumber);
  enumerate->add_option("--max-results", max_results, "stop after this many orbits")
      ->check(CLI::PositiveNumber);
  enumerate->add_option("--budget", budget, "backtracking node cap")->check(CLI::PositiveNumber);
  enumerate->add_option("-o,--output", output, "output path (default stdout)");

  std::vector<int> multiplicities;
  auto* bound = app.add_subcommand("bound", "orbit-count bound for magnitude multiplicities");
  bound->add_option("multiplicities", multiplicities, "r_1 ... r_q")
      ->required()
      ->check(CLI::PositiveNumber);

  auto* equiv = app.add_subcommand("equiv", "test two signal files for O(n)-equivalence");
  equiv->add_option("first", input, "signal file")->required();
  equiv->add_option("second", other, "signal file")->required();

  std::vector<double> line_values;
  double scale = 0.0;
  auto* turnpike = app.add_subcommand("turnpike", "line sets and the half-circle embedding");
  turnpike->require_subcommand(1);
  auto* embed = turnpike->add_subcommand("embed", "embed a line set on the half circle");
  embed->add_option("values", line_values, "positions")->required();
  embed->add_option("--scale", scale, "M (default: diameter)")->check(CLI::PositiveNumber);
  embed->add_option("-o,--output", output, "output path (default stdout)");
  auto* diffs = turnpike->add_subcommand("diffs", "sorted pairwise differences");
  diffs->add_option("values", line_values, "positions")->required();
  double pa = 0.0;
  double pb = 0.0;
  auto* piccard = turnpike->add_subcommand("piccard", "homometric pair P, Q for parameters a, b");
  piccard->add_option("a", pa)->required();
  piccard->add_option("b", pb)->required();

  ExperimentConfig cfg;
  std::string mode = "every";
  auto* mc = app.add_subcommand("mc-sphere", "k = n = 4 sphere experiment");
  mc->add_option("--trials", cfg.trials, "number of samples")->default_val(10000);
  mc->add_option("--seed", cfg.seed, "RNG seed")->default_val(0);
  mc->add_option("--mode", mode, "every | exists")
      ->check(CLI::IsMember({"every", "exists"}))
      ->default_val("every");

  auto* demo = app.add_subcommand("demo", "worked examples");
  demo->require_subcommand(1);
  auto* demo_piccard = demo->add_subcommand("piccard", "six-point homometric pair on S^1");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return 2;
  }

  try {
    tol.validate();
    if (invariants->parsed()) {
      const SparseSignal s = io::read_signal_file(input, tol);
      emit(io::write_invariants(second_moment_invariants(s, tol)), output, out);
    } else if (recover->parsed()) {
      emit(recover_auto(io::read_invariants_file(input, tol), dim, tol), output, out);
    } else if (enumerate->parsed()) {
      const InvariantSet inv = io::read_invariants_file(input, tol);
      emit(enumerate_report(enumerate_orbits(inv, dim, max_results, tol, budget)), output, out);
    } else if (bound->parsed()) {
      out << orbit_count_bound(multiplicities).str() << '\n';
    } else if (equiv->parsed()) {
      const bool same = orbit_equivalent(io::read_signal_file(input, tol),
                                         io::read_signal_file(other, tol), tol);
      out << (same ? "yes" : "no") << '\n';
    } else if (embed->parsed()) {
      const LineSet s(line_values, tol);
      emit(io::write_signal(scale > 0.0 ? embed_half_circle(s, scale) : embed_half_circle(s)),
           output, out);
    } else if (diffs->parsed()) {
      out << join_numbers(difference_multiset(LineSet(line_values, tol)));
    } else if (piccard->parsed()) {
      const auto [p, q] = piccard_sets(pa, pb, tol);
      out << "P " << join_numbers(p.values()) << "Q " << join_numbers(q.values());
    } else if (mc->parsed()) {
      cfg.mode = parse_mode(mode);
      cfg.tolerances = tol;
      out << format_report(mc_sphere_experiment(cfg));
    } else if (demo_piccard->parsed()) {
      out << format_demo(run_piccard_demo(tol));
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace beltway::cli
