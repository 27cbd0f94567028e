#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "beltway/invariants.hpp"
#include "beltway/io.hpp"
#include "beltway/turnpike.hpp"
#include "cli.hpp"
#include "test_support.hpp"

using namespace beltway;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "beltway");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("beltway-test-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& contents = "") const {
    const auto p = path_ / name;
    if (!contents.empty()) std::ofstream(p) << contents;
    return p.string();
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("signal format") {
  std::istringstream in(
      "# two points\n"
      "2 2\n"
      "1.5 1 0   # first\n"
      "\n"
      "-2 0 3\n");
  const SparseSignal s = io::read_signal(in);
  CHECK(s.dim() == 2);
  CHECK(s.size() == 2);
  CHECK(s.weight(1) == -2.0);
  CHECK(s.points()(1, 1) == 3.0);
  CHECK(io::write_signal(s) == "2 2\n1.5 1 0\n-2 0 3\n");
}

TEST_CASE("malformed signal files") {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return io::read_signal(in);
  };
  CHECK_THROWS_AS(parse(""), Error);
  CHECK_THROWS_AS(parse("2\n1 0 0\n"), Error);
  CHECK_THROWS_AS(parse("2 2\n1 0 0\n"), Error);
  CHECK_THROWS_AS(parse("2 1\n1 0\n"), Error);
  CHECK_THROWS_AS(parse("2 1\n1 0 x\n"), Error);
  CHECK_THROWS_AS(parse("0 1\n1\n"), Error);
  CHECK_THROWS_AS(parse("2 2\n1 1 0\n1 1 0\n"), Error);
}

TEST_CASE("canonical files are stable under parse and write (property)") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 5;
    const int k = 1 + trial % 4;
    const SparseSignal x(beltway::testing::random_weights(k, rng),
                         beltway::testing::points_with_magnitudes(
                             n, beltway::testing::distinct_magnitudes(k, rng), rng));
    const std::string once = io::write_signal(x);
    std::istringstream in(once);
    CHECK(io::write_signal(io::read_signal(in)) == once);

    const std::string inv_text = io::write_invariants(second_moment_invariants(x));
    std::istringstream inv_in(inv_text);
    const InvariantSet parsed = io::read_invariants(inv_in);
    CHECK(io::write_invariants(parsed) == inv_text);
    CHECK(parsed.matches(second_moment_invariants(x), 1e-9));
  }
}

TEST_CASE("invariant format") {
  std::istringstream in("2\n1 4 0 2\n4 4 4 4\n1 1 1 1\n");
  const InvariantSet inv = io::read_invariants(in);
  CHECK(inv.k() == 2);
  CHECK(io::write_invariants(inv) == "2\n1 1 1 1\n1 4 0 2\n4 4 4 4\n");
  std::istringstream short_in("2\n1 1 1 1\n");
  CHECK_THROWS_AS(io::read_invariants(short_in), Error);
  std::istringstream wide_in("1\n1 1 1 1 1\n");
  CHECK_THROWS_AS(io::read_invariants(wide_in), Error);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("bound") {
  CHECK(run_cli({"bound", "6"}).out == "1816214400\n");
  CHECK(run_cli({"bound", "4"}).out == "30\n");
  CHECK(run_cli({"bound", "1", "1", "1", "1", "1"}).out == "1\n");
  CHECK(run_cli({"bound", "0"}).code == 2);
}

TEST_CASE("usage errors") {
  const auto none = run_cli({});
  CHECK(none.code == 2);
  CHECK(none.err.find("Usage") != std::string::npos);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"recover", "x.inv"}).code == 2);
  CHECK(run_cli({"mc-sphere", "--mode", "sometimes"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("domain errors") {
  const auto missing = run_cli({"invariants", "/nonexistent/file"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("error:") != std::string::npos);
  CHECK(run_cli({"turnpike", "piccard", "1", "1"}).code == 1);
  CHECK(run_cli({"turnpike", "embed", "0", "1", "8", "--scale", "7"}).code == 1);
  CHECK(run_cli({"mc-sphere", "--trials", "0"}).code != 0);
}

TEST_CASE("invariants, recover, enumerate and equiv") {
  TempDir dir;
  const std::string p = dir.file("p.sig");
  const std::string q = dir.file("q.sig");
  REQUIRE(run_cli({"turnpike", "embed", "0", "1", "8", "11", "13", "17", "-o", p}).code == 0);
  REQUIRE(run_cli({"turnpike", "embed", "0", "1", "4", "10", "12", "17", "-o", q}).code == 0);

  CHECK(run_cli({"equiv", p, q}).out == "no\n");
  CHECK(run_cli({"equiv", p, p}).out == "yes\n");

  const std::string inv = dir.file("p.inv");
  REQUIRE(run_cli({"invariants", p, "-o", inv}).code == 0);
  const std::string qinv = dir.file("q.inv");
  REQUIRE(run_cli({"invariants", q, "-o", qinv}).code == 0);
  CHECK(io::read_invariants_file(qinv).matches(io::read_invariants_file(inv), 1e-9));

  const auto e = run_cli({"enumerate", inv, "--dim", "2"});
  REQUIRE(e.code == 0);
  CHECK(e.out.find("# orbits 3\n") != std::string::npos);
  CHECK(e.out.find("# bound 1816214400\n") != std::string::npos);

  const auto ambiguous = run_cli({"recover", inv, "--dim", "2"});
  CHECK(ambiguous.code == 1);

  const std::string unique = dir.file("u.sig", "3 3\n1 1 0 0\n1 0 2 0\n1 0.5 0.5 3\n");
  const std::string uinv = dir.file("u.inv");
  REQUIRE(run_cli({"invariants", unique, "-o", uinv}).code == 0);
  const std::string back = dir.file("back.sig");
  const auto r = run_cli({"recover", uinv, "--dim", "3", "-o", back});
  REQUIRE(r.code == 0);
  CHECK(slurp(back).rfind("# recovered via unique\n", 0) == 0);
  CHECK(run_cli({"equiv", unique, back}).out == "yes\n");

  const std::string weighted = dir.file("w.sig", "2 3\n1 1 0\n2 0 1\n4 -0.6 0.8\n");
  const std::string winv = dir.file("w.inv");
  REQUIRE(run_cli({"invariants", weighted, "-o", winv}).code == 0);
  const auto wr = run_cli({"recover", winv, "--dim", "2"});
  REQUIRE(wr.code == 0);
  CHECK(wr.out.rfind("# recovered via distinct-weight-products\n", 0) == 0);

  const std::string sphere = dir.file("s.sig", "2 3\n1 1 0\n1 0 1\n1 -0.6 0.8\n");
  const std::string sinv = dir.file("s.inv");
  REQUIRE(run_cli({"invariants", sphere, "-o", sinv}).code == 0);
  const auto sr = run_cli({"recover", sinv, "--dim", "2"});
  REQUIRE(sr.code == 0);
  CHECK(sr.out.rfind("# recovered via enumeration\n", 0) == 0);
}

TEST_CASE("turnpike subcommands") {
  CHECK(run_cli({"turnpike", "diffs", "0", "1", "3"}).out == "1 2 3\n");
  CHECK(run_cli({"turnpike", "piccard", "1", "6"}).out == "P 0 1 4 10 12 17\nQ 0 1 8 13 11 17\n");
  CHECK(run_cli({"turnpike", "embed", "0", "2"}).out == "2 2\n1 1 0\n1 -1 1.2246467991473532e-16\n");
  CHECK(run_cli({"turnpike", "diffs", "-1", "2"}).out == "3\n");
}

TEST_CASE("mc-sphere output is deterministic") {
  const auto a = run_cli({"mc-sphere", "--trials", "500", "--seed", "7", "--mode", "exists"});
  const auto b = run_cli({"mc-sphere", "--trials", "500", "--seed", "7", "--mode", "exists"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("trials 500\npositives ", 0) == 0);
  CHECK(a.out.find("mode exists\nseed 7\n") != std::string::npos);
}

TEST_CASE("demo piccard") {
  const auto d = run_cli({"demo", "piccard"});
  REQUIRE(d.code == 0);
  CHECK(d.out.find("orbits enumerated (n = 2): 3\nP and Q among them: yes [ok]") != std::string::npos);
  CHECK(d.out.find("psd: no, rank: 4") != std::string::npos);
}

}  // TEST_SUITE
