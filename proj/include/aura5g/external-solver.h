#ifndef AURA5G_EXTERNAL_SOLVER_H
#define AURA5G_EXTERNAL_SOLVER_H

#include "aura5g/branch-and-bound.h"
#include "aura5g/milp-model.h"

#include <iosfwd>
#include <string>

namespace aura5g::milp
{

/**
 * Runs `executable model.lp solution.txt time_limit` in a scratch directory
 * and reads back a CBC-style solution file.  Throws AdapterUnavailable when
 * the executable is missing or fails to produce a solution, ParseError when
 * the file cannot be read or the reported point violates the model.
 */
SolveOutcome SolveExternal(const Model& model, const std::string& executable, double timeLimitSeconds);

/**
 * CBC solution text: a status line ("Optimal - objective value z",
 * "Infeasible ...", "Stopped on time ...") followed by
 * "index name value [reduced cost]" lines.
 */
SolveOutcome ParseCbcSolution(const Model& model, std::istream& is);

} // namespace aura5g::milp

#endif
