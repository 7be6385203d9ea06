#pragma once

#include <string>

namespace fanoband {

/// Shortest decimal text that round-trips to the same double.
std::string format_shortest(double v);

/// Fixed notation with the given number of decimals ("%.*f").
std::string format_fixed(double v, int decimals);

}  // namespace fanoband
