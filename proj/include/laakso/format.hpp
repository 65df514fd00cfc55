#pragma once

#include <string>

namespace laakso {

/// Shortest text that round-trips the double exactly.
std::string format_double(double value);

}  // namespace laakso
