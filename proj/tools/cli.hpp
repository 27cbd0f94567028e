#pragma once

#include <ostream>
#include <span>
#include <string>

namespace beltway::cli {

/// Runs the command line tool. Returns 0 on success, 1 on domain errors and
/// 2 on usage errors.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace beltway::cli
