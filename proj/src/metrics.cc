#include "aura5g/metrics.h"

#include "aura5g/errors.h"

#include <algorithm>

namespace aura5g
{

double
JainIndex(const std::vector<double>& rates)
{
    double sum = 0.0, sq = 0.0;
    for (double r : rates)
    {
        if (r < 0.0)
        {
            throw UndefinedMetric("negative rate in fairness index");
        }
        sum += r;
        sq += r * r;
    }
    if (rates.empty() || sq == 0.0)
    {
        throw UndefinedMetric("fairness index needs at least one positive rate");
    }
    return sum * sum / (static_cast<double>(rates.size()) * sq);
}

std::vector<double>
BackhaulDelta(const AssociationSolution& sol, const Topology& topo, const std::vector<double>& mmtcLoadBps)
{
    const int m = topo.NumAps();
    std::vector<double> demand(m, 0.0);
    for (int i = 0; i < sol.nUsers; ++i)
    {
        for (int j = 0; j < m; ++j)
        {
            double r = sol.linkRateBps[i * m + j];
            demand[j] += r;
            if (!topo.IsMacro(j))
            {
                demand[topo.ParentMc(j)] += r;
            }
        }
    }
    std::vector<double> delta(m);
    for (int j = 0; j < m; ++j)
    {
        double load = topo.IsMacro(j) && !mmtcLoadBps.empty() ? mmtcLoadBps[j] : 0.0;
        delta[j] = demand[j] + load - topo.backhaul[j].capacityBps;
    }
    return delta;
}

LatencyReport
LatencyCompliance(const AssociationSolution& sol, const Topology& topo, double budgetMs)
{
    LatencyReport rep;
    rep.userLatencyMs.resize(sol.nUsers);
    for (int i = 0; i < sol.nUsers; ++i)
    {
        for (int j = 0; j < sol.nAps; ++j)
        {
            if (sol.X(i, j))
            {
                double p = topo.PathLatencyMs(j);
                rep.userLatencyMs[i] = std::max(rep.userLatencyMs[i].value_or(p), p);
            }
        }
        rep.violations += rep.userLatencyMs[i] && *rep.userLatencyMs[i] > budgetMs;
    }
    return rep;
}

MetricsBundle
ComputeMetrics(const AssociationSolution& sol,
               const Topology& topo,
               const std::vector<double>& mmtcLoadBps,
               double latencyBudgetMs)
{
    MetricsBundle b;
    for (double r : sol.userRateBps)
    {
        b.totalThroughputBps += r;
    }
    try
    {
        b.jain = JainIndex(sol.userRateBps);
    }
    catch (const UndefinedMetric&)
    {
        b.jain.reset();
    }
    b.backhaulDeltaBps = BackhaulDelta(sol, topo, mmtcLoadBps);
    LatencyReport lat = LatencyCompliance(sol, topo, latencyBudgetMs);
    b.userLatencyMs = std::move(lat.userLatencyMs);
    b.latencyViolations = lat.violations;
    return b;
}

std::vector<CdfPoint>
ConvergenceCdf(std::vector<double> convergedSeconds, std::size_t nTrials)
{
    std::vector<CdfPoint> cdf;
    if (nTrials == 0)
    {
        return cdf;
    }
    std::sort(convergedSeconds.begin(), convergedSeconds.end());
    for (std::size_t k = 0; k < convergedSeconds.size(); ++k)
    {
        double frac = static_cast<double>(k + 1) / static_cast<double>(nTrials);
        if (!cdf.empty() && cdf.back().seconds == convergedSeconds[k])
        {
            cdf.back().fraction = frac;
        }
        else
        {
            cdf.push_back({convergedSeconds[k], frac});
        }
    }
    return cdf;
}

CampaignAggregates
AggregateTrials(const std::vector<TrialSummary>& trials)
{
    CampaignAggregates agg;
    agg.nTrials = trials.size();
    for (auto s : {milp::SolveStatus::Optimal, milp::SolveStatus::Infeasible, milp::SolveStatus::TimeLimit,
                   milp::SolveStatus::Unbounded})
    {
        agg.statusCounts[milp::ToString(s)] = 0;
    }
    std::vector<double> times;
    double thr = 0.0, jain = 0.0, secs = 0.0;
    std::size_t nJain = 0;
    for (const TrialSummary& t : trials)
    {
        ++agg.statusCounts[milp::ToString(t.status)];
        if (t.status != milp::SolveStatus::Optimal)
        {
            continue;
        }
        ++agg.nOptimal;
        times.push_back(t.solveSeconds);
        thr += t.throughputBps;
        secs += t.solveSeconds;
        if (t.jain)
        {
            jain += *t.jain;
            ++nJain;
        }
    }
    agg.convergence = ConvergenceCdf(times, trials.size());
    if (agg.nOptimal > 0)
    {
        agg.meanThroughputBps = thr / agg.nOptimal;
        agg.meanSolveSeconds = secs / agg.nOptimal;
    }
    if (nJain > 0)
    {
        agg.meanJain = jain / nJain;
    }
    return agg;
}

} // namespace aura5g
