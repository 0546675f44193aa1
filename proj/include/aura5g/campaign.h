#ifndef AURA5G_CAMPAIGN_H
#define AURA5G_CAMPAIGN_H

#include "aura5g/association.h"
#include "aura5g/metrics.h"
#include "aura5g/radio.h"
#include "aura5g/scenario.h"
#include "aura5g/topology.h"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace aura5g
{

inline constexpr int kOutputSchemaVersion = 1;

std::uint64_t TrialSeed(std::uint64_t baseSeed, int trialIndex);

/// Everything drawn for one trial before solving.  Identical for equal (spec, index).
struct TrialContext
{
    std::uint64_t seed = 0;
    Topology topology;
    RadioEnvironment radio;
    std::vector<double> mmtcLoadBps; ///< per MC; empty without mMTC
    ProblemInput input;
};

TrialContext BuildTrialContext(const ScenarioSpec& spec, int trialIndex, const ChannelParams& channel = {});

struct RunOptions
{
    ChannelParams channel;
    /// Empty: internal branch-and-bound.  Otherwise the external adapter's executable.
    std::string externalSolver;
    int threads = 0; ///< 0 picks the hardware concurrency
    bool keepSolutions = false;
    std::function<void(int trial, const milp::BnbLogLine&)> log;
};

struct TrialRecord
{
    int index = 0;
    std::uint64_t seed = 0;
    milp::SolveStatus status = milp::SolveStatus::TimeLimit;
    double objectiveBps = 0.0;
    double bestBoundBps = 0.0;
    double gap = 0.0;
    double solveSeconds = 0.0;
    std::size_t nodes = 0;
    bool hasSolution = false;
    MetricsBundle metrics;
    int auditViolations = 0;
    /// Mean backhaul demand over the SCs, for re-dimensioning.
    double meanScDemandBps = 0.0;
    std::vector<std::uint8_t> apIsMacro;
    std::vector<double> apCapacityBps;
    std::optional<AssociationSolution> solution;
};

TrialRecord RunTrial(const ScenarioSpec& spec, int trialIndex, const RunOptions& options = {});

struct CampaignReport
{
    ScenarioSpec spec;
    std::vector<TrialRecord> trials;
    CampaignAggregates aggregates;
};

/// Runs spec.nTrials trials on a worker pool; records come back in trial order.
CampaignReport RunCampaign(const ScenarioSpec& spec, const RunOptions& options = {});

/// Mean SC backhaul demand over the Optimal trials of a campaign.
double MeanScBackhaulUtilization(const CampaignReport& report);

nlohmann::json CampaignJson(const CampaignReport& report);

/**
 * Writes trials.csv, backhaul.csv, latency.csv, convergence.csv and
 * campaign.json into dir, creating it if needed.  Throws IoError.
 */
void WriteCampaignOutputs(const CampaignReport& report, const std::filesystem::path& dir);

/// Parses AURA5G_SOLVER: unset or "internal" gives "", "external:<path>" gives the path.
std::string SolverFromEnvironment();

} // namespace aura5g

#endif
