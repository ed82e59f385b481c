#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdw/coin.hpp"

namespace qdw {

inline constexpr const char* kVersion = "0.1.0";

/// Raised for malformed flag values; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// `fixed:<f64>`, `uniform` or `discrete:<v1:w1,v2:w2,...>`.
DisorderModel parse_disorder(const std::string& text);

/// `<a_re>,<a_im>,<b_re>,<b_im>` or `random`.
InitMode parse_init(const std::string& text);

std::vector<std::size_t> parse_checkpoints(const std::string& text);

/// Subcommands simulate, spectrum, density, converge, localize. `args` excludes the program
/// name. Returns 0 on success, 2 on usage errors (no output file touched), 1 on runtime errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdw
