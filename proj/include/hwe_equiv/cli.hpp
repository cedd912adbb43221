#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hwe_equiv::cli {

// Exit codes of the `test` subcommand. Every other subcommand returns
// kRejected on success and kError on failure.
inline constexpr int kRejected = 0;    // equivalence to HWE established
inline constexpr int kNotRejected = 1;
inline constexpr int kError = 2;

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Fixed-precision helpers used by the report writers.
std::string format_sig6(double value);
std::string format_fixed3(double value);

} // namespace hwe_equiv::cli
