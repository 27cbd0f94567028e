#pragma once

#include <istream>
#include <string>

#include "beltway/invariants.hpp"
#include "beltway/signal.hpp"

namespace beltway::io {

// Text formats. Blank lines and anything after '#' are ignored; numbers are
// written in the shortest form that reads back to the same double.
//
// signal:      `n k`, then k lines `w t_1 ... t_n`
// invariants:  `k`, then k(k+1)/2 lines `a b c wprod` in lexicographic order

std::string format_number(double value);

SparseSignal read_signal(std::istream& in, const Tolerances& tol = {});
SparseSignal read_signal_file(const std::string& path, const Tolerances& tol = {});
std::string write_signal(const SparseSignal& signal);

InvariantSet read_invariants(std::istream& in, const Tolerances& tol = {});
InvariantSet read_invariants_file(const std::string& path, const Tolerances& tol = {});
std::string write_invariants(const InvariantSet& inv);

}  // namespace beltway::io
