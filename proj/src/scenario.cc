#include "aura5g/scenario.h"

#include "aura5g/errors.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

namespace aura5g
{

void
ScenarioSpec::Validate() const
{
    if (nTrials < 1)
    {
        throw InvalidSpec("n_trials must be at least 1");
    }
    if (!(solverTimeLimitS > 0.0))
    {
        throw InvalidSpec("solver time limit must be positive");
    }
    if (!(latencyBudgetMs > 0.0))
    {
        throw InvalidSpec("latency budget must be positive");
    }
    if (nEmbbUsers < 0 || mmtcPerMc < 0)
    {
        throw InvalidSpec("user counts must be non-negative");
    }
    if (!(relativeGap >= 0.0) || !(minRateBps >= 0.0))
    {
        throw InvalidSpec("gap and minimum rate must be non-negative");
    }
    if (dcMode == DcMode::Baseline && !constraints.Empty())
    {
        throw InvalidSpec("the baseline takes no constraint flags");
    }
    static const std::set<std::string> known{kScBackhaulUplift, kMcBackhaulUplift, kScCountMin, kScCountMax};
    for (const auto& [key, value] : parameterOverrides)
    {
        if (!known.count(key))
        {
            throw InvalidKnob("unknown parameter override '" + key + "'");
        }
        if (!std::isfinite(value) || value < 0.0)
        {
            throw InvalidKnob("override '" + key + "' must be finite and non-negative");
        }
    }
    if (Override(kScCountMin, 3) > Override(kScCountMax, 10))
    {
        throw InvalidKnob("sc_count_min exceeds sc_count_max");
    }
}

double
ScenarioSpec::Override(const std::string& key, double fallback) const
{
    auto it = parameterOverrides.find(key);
    return it == parameterOverrides.end() ? fallback : it->second;
}

ScenarioSpec
ParseScenarioCode(const std::string& code)
{
    const bool ok = (code.size() == 4 || (code.size() == 5 && code[4] == 'm')) &&
                    (code[0] == 'C' || code[0] == 'S') && (code[1] == 'A' || code[1] == 'M') &&
                    (code[2] == 'B' || code[2] == 'I') && code[3] == 'E';
    if (!ok)
    {
        throw UnknownCode("unknown scenario code '" + code + "'");
    }
    ScenarioSpec s;
    s.deployment = code[0] == 'C' ? Geometry::Circular : Geometry::Square;
    s.dcMode = code[1] == 'A' ? DcMode::AnyDC : DcMode::MCSC;
    s.regime = code[2] == 'B' ? Regime::Beamformed : Regime::InterferenceLimited;
    s.services = code.size() == 5 ? Services::EmbbPlusMmtc : Services::EmbbOnly;
    return s;
}

namespace
{

std::string
CodeLetters(const ScenarioSpec& spec, const std::string& mode)
{
    std::string s;
    s += spec.deployment == Geometry::Circular ? "C" : "S";
    s += mode;
    s += spec.regime == Regime::Beamformed ? "B" : "I";
    s += "E";
    if (spec.services == Services::EmbbPlusMmtc)
    {
        s += "m";
    }
    return s;
}

std::string
Upper(std::string s)
{
    for (char& c : s)
    {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return s;
}

} // namespace

std::string
FormatScenarioCode(const ScenarioSpec& spec)
{
    if (spec.dcMode == DcMode::AnyDC)
    {
        return CodeLetters(spec, "A");
    }
    if (spec.dcMode == DcMode::MCSC)
    {
        return CodeLetters(spec, "M");
    }
    throw UnknownCode(std::string("no scenario code for mode ") + ToString(spec.dcMode));
}

std::string
ScenarioLabel(const ScenarioSpec& spec)
{
    if (spec.dcMode == DcMode::AnyDC || spec.dcMode == DcMode::MCSC)
    {
        return FormatScenarioCode(spec);
    }
    return CodeLetters(spec, std::string("[") + ToString(spec.dcMode) + "]");
}

std::vector<std::string>
AllScenarioCodes()
{
    std::vector<std::string> out;
    for (char d : {'C', 'S'})
    {
        for (char m : {'A', 'M'})
        {
            for (char r : {'B', 'I'})
            {
                std::string c{d, m, r, 'E'};
                out.push_back(c);
                out.push_back(c + "m");
            }
        }
    }
    return out;
}

ConstraintFlags
ParseConstraints(const std::string& text)
{
    ConstraintFlags f;
    std::string t = Upper(text);
    if (t.empty() || t == "NONE")
    {
        return f;
    }
    std::replace(t.begin(), t.end(), '+', ',');
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (item == "MRT")
        {
            f.mrt = true;
        }
        else if (item == "CB")
        {
            f.cb = true;
        }
        else if (item == "CPL")
        {
            f.cpl = true;
        }
        else
        {
            throw InvalidSpec("unknown constraint flag '" + item + "'");
        }
    }
    return f;
}

std::string
FormatConstraints(const ConstraintFlags& flags)
{
    std::string s;
    auto add = [&](bool on, const char* name) {
        if (on)
        {
            s += s.empty() ? "" : ",";
            s += name;
        }
    };
    add(flags.mrt, "MRT");
    add(flags.cb, "CB");
    add(flags.cpl, "CPL");
    return s.empty() ? "none" : s;
}

DcMode
ParseDcMode(const std::string& text)
{
    std::string t = Upper(text);
    if (t == "ANYDC" || t == "A")
    {
        return DcMode::AnyDC;
    }
    if (t == "MCSC" || t == "M")
    {
        return DcMode::MCSC;
    }
    if (t == "SA")
    {
        return DcMode::SA;
    }
    if (t == "BASELINE")
    {
        return DcMode::Baseline;
    }
    throw InvalidSpec("unknown DC mode '" + text + "'");
}

nlohmann::json
SpecToJson(const ScenarioSpec& spec)
{
    nlohmann::json j;
    j["label"] = ScenarioLabel(spec);
    j["deployment"] = spec.deployment == Geometry::Circular ? "Circular" : "Square";
    j["dc_mode"] = ToString(spec.dcMode);
    j["regime"] = spec.regime == Regime::Beamformed ? "Beamformed" : "InterferenceLimited";
    j["services"] = spec.services == Services::EmbbOnly ? "EmbbOnly" : "EmbbPlusMmtc";
    j["constraints"] = FormatConstraints(spec.constraints);
    j["n_embb_users"] = spec.nEmbbUsers;
    j["mmtc_per_mc"] = spec.mmtcPerMc;
    j["latency_budget_ms"] = spec.latencyBudgetMs;
    j["min_rate_bps"] = spec.minRateBps;
    j["n_trials"] = spec.nTrials;
    j["solver_time_limit_s"] = spec.solverTimeLimitS;
    j["relative_gap"] = spec.relativeGap;
    j["base_seed"] = spec.baseSeed;
    j["parameter_overrides"] = spec.parameterOverrides;
    return j;
}

ScenarioSpec
SpecFromJson(const nlohmann::json& j)
{
    try
    {
        ScenarioSpec s = j.contains("scenario") ? ParseScenarioCode(j.at("scenario").get<std::string>())
                                                : ScenarioSpec{};
        if (j.contains("deployment"))
        {
            std::string d = j.at("deployment");
            if (d != "Circular" && d != "Square")
            {
                throw InvalidSpec("deployment must be Circular or Square");
            }
            s.deployment = d == "Circular" ? Geometry::Circular : Geometry::Square;
        }
        if (j.contains("dc_mode"))
        {
            s.dcMode = ParseDcMode(j.at("dc_mode"));
        }
        if (j.contains("regime"))
        {
            std::string r = j.at("regime");
            if (r != "Beamformed" && r != "InterferenceLimited")
            {
                throw InvalidSpec("regime must be Beamformed or InterferenceLimited");
            }
            s.regime = r == "Beamformed" ? Regime::Beamformed : Regime::InterferenceLimited;
        }
        if (j.contains("services"))
        {
            std::string v = j.at("services");
            if (v != "EmbbOnly" && v != "EmbbPlusMmtc")
            {
                throw InvalidSpec("services must be EmbbOnly or EmbbPlusMmtc");
            }
            s.services = v == "EmbbOnly" ? Services::EmbbOnly : Services::EmbbPlusMmtc;
        }
        if (j.contains("constraints"))
        {
            const auto& c = j.at("constraints");
            if (c.is_array())
            {
                std::string joined;
                for (const auto& e : c)
                {
                    joined += (joined.empty() ? "" : ",") + e.get<std::string>();
                }
                s.constraints = ParseConstraints(joined);
            }
            else
            {
                s.constraints = ParseConstraints(c.get<std::string>());
            }
        }
        s.nEmbbUsers = j.value("n_embb_users", s.nEmbbUsers);
        s.mmtcPerMc = j.value("mmtc_per_mc", s.mmtcPerMc);
        s.latencyBudgetMs = j.value("latency_budget_ms", s.latencyBudgetMs);
        s.minRateBps = j.value("min_rate_bps", s.minRateBps);
        s.nTrials = j.value("n_trials", s.nTrials);
        s.solverTimeLimitS = j.value("solver_time_limit_s", s.solverTimeLimitS);
        s.relativeGap = j.value("relative_gap", s.relativeGap);
        s.baseSeed = j.value("base_seed", s.baseSeed);
        if (j.contains("parameter_overrides"))
        {
            s.parameterOverrides = j.at("parameter_overrides").get<std::map<std::string, double>>();
        }
        s.Validate();
        return s;
    }
    catch (const nlohmann::json::exception& e)
    {
        throw ParseError(std::string("scenario json: ") + e.what());
    }
}

ScenarioSpec
ApplyRedimensioning(const ScenarioSpec& spec, const RedimensioningKnobs& knobs)
{
    ScenarioSpec out = spec;
    if (knobs.scUpliftPercent)
    {
        static const double allowed[] = {30.0, 50.0, 80.0, 100.0};
        double p = *knobs.scUpliftPercent;
        if (std::find(std::begin(allowed), std::end(allowed), p) == std::end(allowed))
        {
            throw InvalidKnob("SC backhaul uplift must be 30, 50, 80 or 100 percent");
        }
        if (!knobs.measuredMeanScUtilizationBps || !(*knobs.measuredMeanScUtilizationBps >= 0.0))
        {
            throw InvalidKnob("backhaul uplift needs the measured mean SC utilization");
        }
        double mean = *knobs.measuredMeanScUtilizationBps;
        out.parameterOverrides[kScBackhaulUplift] = p / 100.0 * mean;
        // an MC serves at most ten SCs
        out.parameterOverrides[kMcBackhaulUplift] = 10.0 * mean;
    }
    else if (knobs.measuredMeanScUtilizationBps)
    {
        throw InvalidKnob("measured utilization given without an uplift level");
    }
    if (knobs.densifySmallCells)
    {
        out.parameterOverrides[kScCountMin] = 6;
        out.parameterOverrides[kScCountMax] = 10;
    }
    if (knobs.relaxLatency)
    {
        out.latencyBudgetMs = 5.0;
    }
    out.Validate();
    return out;
}

TopologyParams
MakeTopologyParams(const ScenarioSpec& spec)
{
    TopologyParams p;
    p.geometry = spec.deployment;
    p.nEmbb = spec.nEmbbUsers;
    p.mmtcPerMc = spec.services == Services::EmbbPlusMmtc ? spec.mmtcPerMc : 0;
    p.scCountMin = static_cast<int>(spec.Override(kScCountMin, p.scCountMin));
    p.scCountMax = static_cast<int>(spec.Override(kScCountMax, p.scCountMax));
    return p;
}

} // namespace aura5g
