#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ric::cli {

/// Seed used by simulate and sample-laplace when --seed is not given.
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Runs one subcommand. args excludes the program name. Machine output goes
/// to out when no output path is given; diagnostics go to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ric::cli
