#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modcm::cli {

/// Runs one CLI invocation. Exit codes: 0 success, 2 bad input, 3 cap
/// exceeded. All output is deterministic: identical argument vectors produce
/// byte-identical output (Monte Carlo commands take their entropy from
/// --seed only).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace modcm::cli
