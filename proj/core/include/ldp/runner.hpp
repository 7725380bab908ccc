#pragma once

#include "ldp/scenario.hpp"

namespace ldp::runner {

// Runs every requested check, writes the main CSV report plus the
// error-term and svip sibling reports next to it, and echoes the resolved
// configuration to stdout. Exit codes: 0 when all checks pass, 1 when a
// check fails its tolerance, 2 for out-of-regime configurations, 3 for
// unsupported combinations.
int run(const scenario::Scenario& scenario);

}  // namespace ldp::runner
