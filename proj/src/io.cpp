#include "beltway/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace beltway::io {

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  std::array<char, 32> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

namespace {

// Splits the stream into non-empty, comment-stripped lines of tokens.
std::vector<std::vector<std::string>> tokenize(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  return lines;
}

double to_double(const std::string& token) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) throw Error(ErrorKind::ParseError, "bad number '" + token + "'");
  return value;
}

int to_count(const std::string& token) {
  int value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || value < 1) {
    throw Error(ErrorKind::ParseError, "bad positive integer '" + token + "'");
  }
  return value;
}

void expect_width(const std::vector<std::string>& tokens, std::size_t width, std::size_t line) {
  if (tokens.size() != width) {
    throw Error(ErrorKind::ParseError, "record " + std::to_string(line) + ": expected " +
                                           std::to_string(width) + " fields, got " +
                                           std::to_string(tokens.size()));
  }
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  return in;
}

}  // namespace

SparseSignal read_signal(std::istream& in, const Tolerances& tol) {
  const auto lines = tokenize(in);
  if (lines.empty()) throw Error(ErrorKind::ParseError, "empty signal file");
  expect_width(lines[0], 2, 1);
  const int n = to_count(lines[0][0]);
  const int k = to_count(lines[0][1]);
  if (static_cast<int>(lines.size()) != k + 1) {
    throw Error(ErrorKind::ParseError, "expected " + std::to_string(k) + " point records, got " +
                                           std::to_string(lines.size() - 1));
  }
  std::vector<double> weights;
  Eigen::MatrixXd points(n, k);
  for (int i = 0; i < k; ++i) {
    const auto& rec = lines[static_cast<std::size_t>(i + 1)];
    expect_width(rec, static_cast<std::size_t>(n + 1), static_cast<std::size_t>(i + 2));
    weights.push_back(to_double(rec[0]));
    for (int c = 0; c < n; ++c) points(c, i) = to_double(rec[static_cast<std::size_t>(c + 1)]);
  }
  return SparseSignal(std::move(weights), std::move(points), tol);
}

SparseSignal read_signal_file(const std::string& path, const Tolerances& tol) {
  auto in = open(path);
  return read_signal(in, tol);
}

std::string write_signal(const SparseSignal& signal) {
  std::string out = std::to_string(signal.dim()) + " " + std::to_string(signal.size()) + "\n";
  for (int i = 0; i < signal.size(); ++i) {
    out += format_number(signal.weight(i));
    for (int c = 0; c < signal.dim(); ++c) out += " " + format_number(signal.points()(c, i));
    out += "\n";
  }
  return out;
}

InvariantSet read_invariants(std::istream& in, const Tolerances& tol) {
  const auto lines = tokenize(in);
  if (lines.empty()) throw Error(ErrorKind::ParseError, "empty invariant file");
  expect_width(lines[0], 1, 1);
  const int k = to_count(lines[0][0]);
  std::vector<InvariantEntry> entries;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    expect_width(lines[i], 4, i + 1);
    entries.push_back({{to_double(lines[i][0]), to_double(lines[i][1]), to_double(lines[i][2])},
                       to_double(lines[i][3])});
  }
  return InvariantSet(k, std::move(entries), tol);
}

InvariantSet read_invariants_file(const std::string& path, const Tolerances& tol) {
  auto in = open(path);
  return read_invariants(in, tol);
}

std::string write_invariants(const InvariantSet& inv) {
  std::vector<std::array<double, 4>> rows;
  for (const auto& e : inv.entries()) rows.push_back({e.triple.a, e.triple.b, e.triple.c, e.wprod});
  std::sort(rows.begin(), rows.end());
  std::string out = std::to_string(inv.k()) + "\n";
  for (const auto& r : rows) {
    out += format_number(r[0]) + " " + format_number(r[1]) + " " + format_number(r[2]) + " " +
           format_number(r[3]) + "\n";
  }
  return out;
}

}  // namespace beltway::io
