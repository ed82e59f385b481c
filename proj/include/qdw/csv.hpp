#pragma once

#include <string>

namespace qdw {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace qdw
