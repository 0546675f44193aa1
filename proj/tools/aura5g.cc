// Command-line front end: run a campaign, sweep a scenario matrix, or export one trial's model.

#include "aura5g/campaign.h"
#include "aura5g/errors.h"
#include "aura5g/external-solver.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <mutex>

using namespace aura5g;

namespace
{

struct SpecArgs
{
    std::string config;
    std::string scenario = "CABE";
    std::string mode;
    std::string constraints = "none";
    int trials = -1;
    int users = -1;
    int mmtcPerMc = -1;
    double timeLimit = -1;
    double gap = -1;
    double latencyBudget = -1;
    long long seed = -1;
    double upliftPercent = 0;
    double measuredMeanBps = -1;
    bool densify = false;
    bool relaxLatency = false;
};

void
AddSpecOptions(CLI::App* app, SpecArgs& a)
{
    app->add_option("--config", a.config, "JSON scenario file; command-line flags override it");
    app->add_option("--scenario", a.scenario, "scenario code, e.g. CABE or SMIEm");
    app->add_option("--mode", a.mode, "override the DC mode: AnyDC, MCSC, SA or Baseline");
    app->add_option("--constraints", a.constraints, "comma list of MRT, CB, CPL or 'none'");
    app->add_option("--trials", a.trials, "Monte Carlo trials");
    app->add_option("--users", a.users, "eMBB users per trial");
    app->add_option("--mmtc-per-mc", a.mmtcPerMc, "mMTC devices per MC (scenarios ending in m)");
    app->add_option("--time-limit", a.timeLimit, "solver time limit per trial, seconds");
    app->add_option("--gap", a.gap, "relative optimality gap");
    app->add_option("--latency-budget", a.latencyBudget, "eMBB latency budget, ms");
    app->add_option("--seed", a.seed, "base seed");
    app->add_option("--uplift", a.upliftPercent, "SC backhaul uplift: 30, 50, 80 or 100 percent");
    app->add_option("--measured-mean-bps", a.measuredMeanBps, "mean SC backhaul utilization the uplift refers to");
    app->add_flag("--densify", a.densify, "draw 6 to 10 SCs per MC");
    app->add_flag("--relax-latency", a.relaxLatency, "5 ms latency budget");
}

ScenarioSpec
MakeSpec(const SpecArgs& a, bool scenarioGiven, bool constraintsGiven)
{
    ScenarioSpec spec;
    if (!a.config.empty())
    {
        std::ifstream is(a.config);
        if (!is)
        {
            throw IoError("cannot read " + a.config);
        }
        nlohmann::json j;
        try
        {
            is >> j;
        }
        catch (const nlohmann::json::exception& e)
        {
            throw ParseError(a.config + ": " + e.what());
        }
        spec = SpecFromJson(j);
    }
    if (a.config.empty() || scenarioGiven)
    {
        ScenarioSpec code = ParseScenarioCode(a.scenario);
        spec.deployment = code.deployment;
        spec.dcMode = code.dcMode;
        spec.regime = code.regime;
        spec.services = code.services;
    }
    if (!a.mode.empty())
    {
        spec.dcMode = ParseDcMode(a.mode);
    }
    if (a.config.empty() || constraintsGiven)
    {
        spec.constraints = ParseConstraints(a.constraints);
    }
    if (a.trials >= 0)
    {
        spec.nTrials = a.trials;
    }
    if (a.users >= 0)
    {
        spec.nEmbbUsers = a.users;
    }
    if (a.mmtcPerMc >= 0)
    {
        spec.mmtcPerMc = a.mmtcPerMc;
    }
    if (a.timeLimit >= 0)
    {
        spec.solverTimeLimitS = a.timeLimit;
    }
    if (a.gap >= 0)
    {
        spec.relativeGap = a.gap;
    }
    if (a.latencyBudget >= 0)
    {
        spec.latencyBudgetMs = a.latencyBudget;
    }
    if (a.seed >= 0)
    {
        spec.baseSeed = static_cast<std::uint64_t>(a.seed);
    }
    RedimensioningKnobs knobs;
    if (a.upliftPercent > 0)
    {
        knobs.scUpliftPercent = a.upliftPercent;
    }
    if (a.measuredMeanBps >= 0)
    {
        knobs.measuredMeanScUtilizationBps = a.measuredMeanBps;
    }
    knobs.densifySmallCells = a.densify;
    knobs.relaxLatency = a.relaxLatency;
    spec = ApplyRedimensioning(spec, knobs);
    spec.Validate();
    return spec;
}

void
PrintSummary(const CampaignReport& r, std::ostream& os)
{
    const auto& a = r.aggregates;
    os << ScenarioLabel(r.spec) << " constraints=" << FormatConstraints(r.spec.constraints) << " trials=" << a.nTrials;
    for (const auto& [status, count] : a.statusCounts)
    {
        os << ' ' << status << '=' << count;
    }
    if (a.meanThroughputBps)
    {
        os << " mean_throughput_gbps=" << *a.meanThroughputBps / 1e9;
    }
    if (a.meanJain)
    {
        os << " mean_jain=" << *a.meanJain;
    }
    os << '\n';
}

RunOptions
MakeRunOptions(int threads, bool verbose)
{
    RunOptions opt;
    opt.externalSolver = SolverFromEnvironment();
    opt.threads = threads;
    if (verbose)
    {
        static std::mutex mutex;
        opt.log = [](int trial, const milp::BnbLogLine& l) {
            std::lock_guard<std::mutex> lock(mutex);
            std::cerr << "trial=" << trial << ' ' << milp::FormatLogLine(l) << '\n';
        };
    }
    return opt;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Joint user association and bandwidth allocation for 5G HetNets"};
    app.require_subcommand(1);

    SpecArgs runArgs;
    std::string runOut = "out";
    int runThreads = 0;
    bool runVerbose = false;
    CLI::App* run = app.add_subcommand("run", "run a Monte Carlo campaign");
    AddSpecOptions(run, runArgs);
    run->add_option("--out", runOut, "output directory");
    run->add_option("--threads", runThreads, "worker threads (0: all cores)");
    run->add_flag("--log", runVerbose, "print solver progress lines to stderr");

    std::string matrixFile, sweepOut = "sweep";
    int sweepThreads = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "run every scenario x constraint pair of a matrix file");
    sweep->add_option("--matrix", matrixFile, "JSON: {base: {...}, scenarios: [...], constraints: [...], modes: [...]}")
        ->required();
    sweep->add_option("--out", sweepOut, "output directory");
    sweep->add_option("--threads", sweepThreads, "worker threads (0: all cores)");

    SpecArgs expArgs;
    int expTrial = 0;
    std::string expModel = "model.lp", expTopology, expSinr;
    bool expFull = false;
    CLI::App* exp = app.add_subcommand("export", "write one trial's model, topology and SINR matrix");
    AddSpecOptions(exp, expArgs);
    exp->add_option("--trial", expTrial, "trial index");
    exp->add_option("--model", expModel, "LP-format output file");
    exp->add_flag("--full", expFull, "export the full x/g/Gamma model instead of the solver's reduced form");
    exp->add_option("--topology", expTopology, "topology JSON output file");
    exp->add_option("--sinr", expSinr, "SINR matrix CSV output file (dB, users x APs)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
        {
            ScenarioSpec spec =
                MakeSpec(runArgs, run->count("--scenario") > 0, run->count("--constraints") > 0);
            CampaignReport report = RunCampaign(spec, MakeRunOptions(runThreads, runVerbose));
            WriteCampaignOutputs(report, runOut);
            PrintSummary(report, std::cout);
        }
        else if (*sweep)
        {
            std::ifstream is(matrixFile);
            if (!is)
            {
                throw IoError("cannot read " + matrixFile);
            }
            nlohmann::json m = nlohmann::json::parse(is);
            nlohmann::json summary = nlohmann::json::array();
            RunOptions opt = MakeRunOptions(sweepThreads, false);
            std::vector<std::string> modes;
            for (const auto& md : m.value("modes", nlohmann::json::array()))
            {
                modes.push_back(md.get<std::string>());
            }
            if (modes.empty())
            {
                modes.push_back("");
            }
            for (const auto& code : m.at("scenarios"))
            {
                for (const auto& flags : m.at("constraints"))
                {
                    for (const std::string& mode : modes)
                    {
                        nlohmann::json sj = m.value("base", nlohmann::json::object());
                        sj["scenario"] = code;
                        sj["constraints"] = flags;
                        sj.erase("dc_mode");
                        if (!mode.empty())
                        {
                            sj["dc_mode"] = mode;
                        }
                        ScenarioSpec spec = SpecFromJson(sj);
                        std::string flagName = FormatConstraints(spec.constraints);
                        std::replace(flagName.begin(), flagName.end(), ',', '+');
                        std::string name = ScenarioLabel(spec) + "_" + flagName;
                        CampaignReport report = RunCampaign(spec, opt);
                        WriteCampaignOutputs(report, std::filesystem::path(sweepOut) / name);
                        PrintSummary(report, std::cout);
                        nlohmann::json row = CampaignJson(report);
                        row["directory"] = name;
                        summary.push_back(row);
                    }
                }
            }
            std::ofstream os(std::filesystem::path(sweepOut) / "sweep.json");
            os << summary.dump(2) << '\n';
            if (!os)
            {
                throw IoError("cannot write sweep.json");
            }
        }
        else if (*exp)
        {
            ScenarioSpec spec =
                MakeSpec(expArgs, exp->count("--scenario") > 0, exp->count("--constraints") > 0);
            TrialContext ctx = BuildTrialContext(spec, expTrial);
            if (spec.dcMode != DcMode::Baseline)
            {
                std::ofstream os(expModel);
                if (expFull)
                {
                    milp::WriteLpFormat(BuildMilp(ctx.input).model, os);
                }
                else
                {
                    milp::WriteLpFormat(BuildAggregatedMilp(ctx.input).model, os);
                }
                if (!os)
                {
                    throw IoError("cannot write " + expModel);
                }
            }
            if (!expTopology.empty())
            {
                std::ofstream os(expTopology);
                WriteTopologyJson(ctx.topology, os);
            }
            if (!expSinr.empty())
            {
                std::ofstream os(expSinr);
                WriteMatrixCsv(ctx.radio.sinrDb, os);
            }
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
