#ifndef AURA5G_SCENARIO_H
#define AURA5G_SCENARIO_H

#include "aura5g/association.h"
#include "aura5g/radio.h"
#include "aura5g/topology.h"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace aura5g
{

enum class Services
{
    EmbbOnly,
    EmbbPlusMmtc
};

/// Recognized parameter_overrides keys.
inline constexpr const char* kScBackhaulUplift = "sc_backhaul_uplift_bps";
inline constexpr const char* kMcBackhaulUplift = "mc_backhaul_uplift_bps";
inline constexpr const char* kScCountMin = "sc_count_min";
inline constexpr const char* kScCountMax = "sc_count_max";

struct ScenarioSpec
{
    Geometry deployment = Geometry::Circular;
    DcMode dcMode = DcMode::AnyDC;
    Regime regime = Regime::Beamformed;
    Services services = Services::EmbbOnly;
    ConstraintFlags constraints;
    int nEmbbUsers = 150;
    int mmtcPerMc = 960;
    double latencyBudgetMs = 3.0;
    double minRateBps = 100e6;
    int nTrials = 100;
    double solverTimeLimitS = 600.0;
    double relativeGap = 1e-4;
    std::uint64_t baseSeed = 1;
    std::map<std::string, double> parameterOverrides;

    /// Throws InvalidSpec on bad counts or limits, InvalidKnob on unknown overrides.
    void Validate() const;
    double Override(const std::string& key, double fallback) const;
};

/// Parses the 16 codes [C|S][A|M][B|I]E with an optional trailing m.  Throws UnknownCode.
ScenarioSpec ParseScenarioCode(const std::string& code);

/// Code of the scenario's deployment, mode, regime and services.  Throws UnknownCode for SA and Baseline.
std::string FormatScenarioCode(const ScenarioSpec& spec);

/// Code when one exists, otherwise the code letters with the mode spelled out, e.g. "C[SA]BE".
std::string ScenarioLabel(const ScenarioSpec& spec);

std::vector<std::string> AllScenarioCodes();

/// "MRT,CB,CPL" in any order and case, "none" or empty for no flags.  Throws InvalidSpec.
ConstraintFlags ParseConstraints(const std::string& text);
/// Canonical "MRT,CB,CPL" order; "none" when empty.
std::string FormatConstraints(const ConstraintFlags& flags);

DcMode ParseDcMode(const std::string& text);

nlohmann::json SpecToJson(const ScenarioSpec& spec);
ScenarioSpec SpecFromJson(const nlohmann::json& j);

struct RedimensioningKnobs
{
    /// Percent of the measured mean SC backhaul utilization: 30, 50, 80 or 100.
    std::optional<double> scUpliftPercent;
    std::optional<double> measuredMeanScUtilizationBps;
    bool densifySmallCells = false;
    bool relaxLatency = false;
};

/**
 * Returns a copy with the requested re-dimensioning: SC backhaul raised by
 * the given share of the measured mean SC utilization, every MC by ten
 * times that mean, SC counts drawn from U[6, 10], and a 5 ms budget.
 * Throws InvalidKnob for any other value.
 */
ScenarioSpec ApplyRedimensioning(const ScenarioSpec& spec, const RedimensioningKnobs& knobs);

/// Topology parameters implied by a scenario and its overrides.
TopologyParams MakeTopologyParams(const ScenarioSpec& spec);

} // namespace aura5g

#endif
