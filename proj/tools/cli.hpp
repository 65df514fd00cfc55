#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace laakso::cli {

enum ExitCode : int { ok = 0, validation = 1, numerical = 2, mismatch = 3 };

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ReferenceRow {
    int k = 0;
    double lambda = 0.0;
    int decimals = 0;
    long long multiplicity = 0;

    /// Half a unit in the last printed place.
    double tolerance() const;
};

/// The embedded 20-row reference table for j = 2,3,2,3,...
std::vector<ReferenceRow> table1_reference();

}  // namespace laakso::cli
