#pragma once

#include <iosfwd>
#include <string>

#include "collspin/tableau.hpp"

namespace collspin {

/// Parses a scheme description. The format is line based:
///
///   component rk          # a plain Runge-Kutta component
///   a 1/4 1/4             # one a-row per stage
///   a 1/4 1/4
///   b 1/2 1/2
///
///   component prk         # a partitioned position/momentum component
///   a 0 0
///   a 1/2 1/2
///   b 1/2 1/2
///   ahat 1/2 0
///   ahat 1/2 0
///   bhat 1/2 1/2
///
/// Coefficients are integers or fractions `p/q`; `#` starts a comment.
/// Throws ParseError with the offending line number.
PartitionedScheme parse_scheme(std::istream& in);
PartitionedScheme load_scheme(const std::string& path);

/// Parses a single rational like "-3/4" or "2". Throws ParseError.
Rational parse_rational(const std::string& token, int line);

/// Front-end used by the check-tableau subcommand: loads the file, runs
/// check_scheme, and prints one line per condition to `out`. Returns the
/// process exit code: 0 on a full pass, 1 on violated conditions, 2 on parse
/// or stage errors.
int run_tableau_check(const std::string& path, std::ostream& out);

}  // namespace collspin
