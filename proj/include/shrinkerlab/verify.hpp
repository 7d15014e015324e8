#pragma once

#include <string>
#include <vector>

#include "shrinkerlab/report_io.hpp"

namespace shrinkerlab {

/// Property suites behind the `verify` CLI subcommand.  Suites: "geometry",
/// "spectral", "scalar", or "all".  Every row carries the measured lhs/rhs
/// and the fitted constant where one applies.
std::vector<CheckRow> run_verify(const std::string& suite);

bool all_pass(const std::vector<CheckRow>& rows);

}  // namespace shrinkerlab
