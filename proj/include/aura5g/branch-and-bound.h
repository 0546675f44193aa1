#ifndef AURA5G_BRANCH_AND_BOUND_H
#define AURA5G_BRANCH_AND_BOUND_H

#include "aura5g/lp-solver.h"
#include "aura5g/milp-model.h"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace aura5g::milp
{

enum class SolveStatus
{
    Optimal,
    Infeasible,
    TimeLimit,
    Unbounded
};

const char* ToString(SolveStatus status);
SolveStatus SolveStatusFromString(const std::string& s);

struct SolveOutcome
{
    SolveStatus status = SolveStatus::TimeLimit;
    std::optional<std::vector<double>> incumbent;
    double objective = 0.0;  ///< incumbent objective, model units
    double bestBound = 0.0;  ///< model units; >= objective when maximizing
    double gap = 0.0;        ///< relative gap, inf if no incumbent
    double wallSeconds = 0.0;
    std::size_t nodes = 0;
    long lpIterations = 0;
    double rootBound = 0.0;
    std::size_t cuts = 0; ///< cover cuts added at the root
};

/// One progress line, emitted in key=value form by FormatLogLine.
struct BnbLogLine
{
    std::size_t node = 0;
    double bound = 0.0;
    double incumbent = 0.0;
    bool hasIncumbent = false;
    double gap = 0.0;
    double seconds = 0.0;
    std::size_t open = 0;
};

std::string FormatLogLine(const BnbLogLine& line);

/// Maps an LP relaxation point to a candidate integral point (or nothing).
using PrimalHeuristic = std::function<std::optional<std::vector<double>>(const std::vector<double>& lp)>;

struct BnbOptions
{
    double timeLimitSeconds = 600.0;
    double relativeGap = 1e-4;
    double absoluteGap = 1e-9;
    double integralityTolerance = 1e-6;
    double feasibilityTolerance = 1e-7;
    std::size_t maxNodes = static_cast<std::size_t>(-1);
    /// Run the heuristic every this many nodes (and always at the root).
    std::size_t heuristicFrequency = 10;
    PrimalHeuristic heuristic;
    std::function<void(const BnbLogLine&)> log;
    std::size_t logEvery = 100;
    /// Rounds of root cover-cut separation; 0 disables cuts.
    int cutRounds = 30;
    std::size_t maxCutsPerRound = 200;
    LpOptions lp;
};

struct Presolved
{
    Model model;
    bool infeasible = false;
};

/**
 * Root presolve.  Singleton rows become column bounds, empty rows are
 * checked and dropped, bounds are tightened from row activities and binary
 * coefficients are tightened.  The integer-feasible set and the objective
 * are unchanged; the LP relaxation can only shrink.
 */
Presolved Presolve(const Model& model, double tol = 1e-7);

/**
 * Extended cover inequalities for the LP point x.  Every inequality row whose
 * non-fixed columns are all binary is read as a knapsack (negative
 * coefficients complemented).  Items that share a packing row (binaries
 * summing to at most 1) form one group, of which at most one item can be
 * set; each group enters the cover through a weight threshold and
 * contributes all of its items at or above it.  A greedy minimal cover C
 * of groups is extended by items of other groups at least as heavy as the
 * heaviest threshold, and the cut sum <= |C| - 1 is returned when x
 * violates it by more than minViolation.  Valid for every integer point of
 * the model.
 */
std::vector<Row> SeparateCoverCuts(const Model& model, const std::vector<double>& x, double minViolation = 1e-4);

/**
 * LP-based branch-and-bound for models whose integer columns are binary or
 * general integers.
 *
 * After Presolve, rounds of cover cuts tighten the root relaxation.  The
 * search dives depth-first until an incumbent exists, then picks the
 * best-bound node and plunges from it until the dive is pruned.  Branching
 * uses pseudocosts (product rule), lowest index on ties.  Every incumbent
 * is checked against the original rows before it is accepted.
 */
SolveOutcome BranchAndBound(const Model& model, const BnbOptions& options = {});

/// Generic threshold-and-check rounding: round integer columns at 0.5 and keep the point if feasible.
std::optional<std::vector<double>> RoundingHeuristic(const Model& model, const std::vector<double>& lp);

} // namespace aura5g::milp

#endif
