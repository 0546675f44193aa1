#ifndef AURA5G_METRICS_H
#define AURA5G_METRICS_H

#include "aura5g/association.h"
#include "aura5g/branch-and-bound.h"
#include "aura5g/topology.h"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aura5g
{

/// (sum r)^2 / (n sum r^2).  Throws UndefinedMetric for an empty or all-zero list.
double JainIndex(const std::vector<double>& rates);

/**
 * Demand minus capacity per AP, bps.  An SC's demand is its users'
 * traffic; an MC's is its own users, all child SCs' users and its mMTC
 * load.  Capacities are the topology's (wired, wireless or uplifted).
 */
std::vector<double> BackhaulDelta(const AssociationSolution& sol,
                                  const Topology& topo,
                                  const std::vector<double>& mmtcLoadBps);

struct LatencyReport
{
    /// Largest path latency among the user's APs; empty for an unattached user.
    std::vector<std::optional<double>> userLatencyMs;
    int violations = 0;
};

LatencyReport LatencyCompliance(const AssociationSolution& sol, const Topology& topo, double budgetMs);

struct MetricsBundle
{
    milp::SolveStatus status = milp::SolveStatus::TimeLimit;
    double solveSeconds = 0.0;
    double totalThroughputBps = 0.0;
    std::optional<double> jain;
    std::vector<double> backhaulDeltaBps;
    std::vector<std::optional<double>> userLatencyMs;
    int latencyViolations = 0;
};

MetricsBundle ComputeMetrics(const AssociationSolution& sol,
                             const Topology& topo,
                             const std::vector<double>& mmtcLoadBps,
                             double latencyBudgetMs);

struct CdfPoint
{
    double seconds;
    double fraction; ///< share of all trials converged by this time
};

/// Step CDF over converged solve times, normalised by the total trial count.
std::vector<CdfPoint> ConvergenceCdf(std::vector<double> convergedSeconds, std::size_t nTrials);

struct TrialSummary
{
    milp::SolveStatus status = milp::SolveStatus::TimeLimit;
    double solveSeconds = 0.0;
    double throughputBps = 0.0;
    std::optional<double> jain;
    int latencyViolations = 0;
};

struct CampaignAggregates
{
    std::map<std::string, int> statusCounts;
    std::size_t nTrials = 0;
    std::size_t nOptimal = 0;
    std::vector<CdfPoint> convergence;
    /// Means over Optimal trials only; empty when none converged.
    std::optional<double> meanThroughputBps;
    std::optional<double> meanJain;
    std::optional<double> meanSolveSeconds;
};

CampaignAggregates AggregateTrials(const std::vector<TrialSummary>& trials);

} // namespace aura5g

#endif
