#include "aura5g/campaign.h"

#include "aura5g/errors.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace aura5g
{

std::uint64_t
TrialSeed(std::uint64_t baseSeed, int trialIndex)
{
    return DeriveSeed(baseSeed, static_cast<std::uint64_t>(trialIndex));
}

TrialContext
BuildTrialContext(const ScenarioSpec& spec, int trialIndex, const ChannelParams& channel)
{
    spec.Validate();
    TrialContext ctx;
    ctx.seed = TrialSeed(spec.baseSeed, trialIndex);
    ctx.topology = GenerateTopology(MakeTopologyParams(spec), ctx.seed);

    Rng bhRng = MakeRng(ctx.seed, Stream::BackhaulShadowing);
    ApplyWirelessBackhaul(ctx.topology, WirelessBackhaulCapacities(ctx.topology, channel, bhRng));
    const double scUplift = spec.Override(kScBackhaulUplift, 0.0);
    const double mcUplift = spec.Override(kMcBackhaulUplift, 0.0);
    for (int j = 0; j < ctx.topology.NumAps(); ++j)
    {
        ctx.topology.backhaul[j].capacityBps += ctx.topology.IsMacro(j) ? mcUplift : scUplift;
    }

    Rng chRng = MakeRng(ctx.seed, Stream::Channel);
    ChannelDraws draws = DrawChannel(ctx.topology, channel, chRng);
    ctx.radio = BuildRadioEnvironment(ctx.topology, channel, draws, spec.regime);

    if (spec.services == Services::EmbbPlusMmtc)
    {
        Rng mRng = MakeRng(ctx.seed, Stream::MmtcRates);
        ctx.mmtcLoadBps = MmtcBackhaulLoad(ctx.topology, mRng);
    }
    InputDefaults defaults;
    defaults.minRateBps = spec.minRateBps;
    defaults.latencyBudgetMs = spec.latencyBudgetMs;
    ctx.input = MakeProblemInput(ctx.topology, ctx.radio, spec.dcMode, spec.constraints, ctx.mmtcLoadBps, defaults);
    return ctx;
}

TrialRecord
RunTrial(const ScenarioSpec& spec, int trialIndex, const RunOptions& options)
{
    TrialContext ctx = BuildTrialContext(spec, trialIndex, options.channel);
    TrialRecord rec;
    rec.index = trialIndex;
    rec.seed = ctx.seed;
    for (int j = 0; j < ctx.topology.NumAps(); ++j)
    {
        rec.apIsMacro.push_back(ctx.topology.IsMacro(j));
        rec.apCapacityBps.push_back(ctx.topology.backhaul[j].capacityBps);
    }

    std::optional<AssociationSolution> sol;
    if (spec.dcMode == DcMode::Baseline)
    {
        auto start = std::chrono::steady_clock::now();
        sol = BaselineAssociation(ctx.radio, ctx.topology);
        rec.status = milp::SolveStatus::Optimal;
        rec.solveSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rec.objectiveBps = sol->TotalRateBps();
        rec.bestBoundBps = rec.objectiveBps;
    }
    else
    {
        AssocSolverOptions so;
        so.timeLimitSeconds = spec.solverTimeLimitS;
        so.relativeGap = spec.relativeGap;
        so.externalSolver = options.externalSolver;
        if (options.log)
        {
            so.log = [&](const milp::BnbLogLine& l) { options.log(trialIndex, l); };
        }
        AssociationOutcome out = SolveAssociation(ctx.input, so);
        rec.status = out.status;
        rec.objectiveBps = out.objectiveBps;
        rec.bestBoundBps = out.bestBoundBps;
        rec.gap = out.gap;
        rec.solveSeconds = out.wallSeconds;
        rec.nodes = out.nodes;
        sol = std::move(out.solution);
    }

    rec.metrics.status = rec.status;
    rec.metrics.solveSeconds = rec.solveSeconds;
    if (sol)
    {
        rec.hasSolution = true;
        MetricsBundle m = ComputeMetrics(*sol, ctx.topology, ctx.mmtcLoadBps, spec.latencyBudgetMs);
        m.status = rec.status;
        m.solveSeconds = rec.solveSeconds;
        rec.metrics = std::move(m);
        rec.auditViolations = static_cast<int>(AuditSolution(ctx.input, *sol).violations.size());
        double sum = 0.0;
        for (int j = ctx.topology.NumMcs(); j < ctx.topology.NumAps(); ++j)
        {
            sum += sol->apDemandBps[j];
        }
        rec.meanScDemandBps = ctx.topology.NumScs() ? sum / ctx.topology.NumScs() : 0.0;
        if (options.keepSolutions)
        {
            rec.solution = std::move(sol);
        }
    }
    return rec;
}

CampaignReport
RunCampaign(const ScenarioSpec& spec, const RunOptions& options)
{
    spec.Validate();
    CampaignReport report;
    report.spec = spec;
    report.trials.resize(spec.nTrials);

    int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, spec.nTrials));
    std::atomic<int> next{0};
    std::mutex errMutex;
    std::exception_ptr error;
    auto worker = [&] {
        for (int t = next++; t < spec.nTrials; t = next++)
        {
            try
            {
                report.trials[t] = RunTrial(spec, t, options);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(errMutex);
                if (!error)
                {
                    error = std::current_exception();
                }
                next = spec.nTrials;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int k = 1; k < threads; ++k)
    {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool)
    {
        th.join();
    }
    if (error)
    {
        std::rethrow_exception(error);
    }

    std::vector<TrialSummary> summaries;
    for (const TrialRecord& r : report.trials)
    {
        summaries.push_back({r.status, r.solveSeconds, r.metrics.totalThroughputBps, r.metrics.jain,
                             r.metrics.latencyViolations});
    }
    report.aggregates = AggregateTrials(summaries);
    return report;
}

double
MeanScBackhaulUtilization(const CampaignReport& report)
{
    double sum = 0.0;
    int n = 0;
    for (const TrialRecord& r : report.trials)
    {
        if (r.status == milp::SolveStatus::Optimal && r.hasSolution)
        {
            sum += r.meanScDemandBps;
            ++n;
        }
    }
    return n ? sum / n : 0.0;
}

namespace
{

std::ofstream
OpenOut(const std::filesystem::path& p)
{
    std::ofstream os(p);
    if (!os)
    {
        throw IoError("cannot write " + p.string());
    }
    os << std::setprecision(12);
    return os;
}

template <typename T>
std::string
OptionalField(const std::optional<T>& v)
{
    if (!v)
    {
        return "";
    }
    std::ostringstream ss;
    ss << std::setprecision(12) << *v;
    return ss.str();
}

nlohmann::json
OptionalJson(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

} // namespace

nlohmann::json
CampaignJson(const CampaignReport& report)
{
    const CampaignAggregates& a = report.aggregates;
    nlohmann::json j;
    j["schema_version"] = kOutputSchemaVersion;
    j["spec"] = SpecToJson(report.spec);
    j["n_trials"] = a.nTrials;
    j["n_optimal"] = a.nOptimal;
    j["status_counts"] = a.statusCounts;
    j["mean_throughput_bps"] = OptionalJson(a.meanThroughputBps);
    j["mean_jain"] = OptionalJson(a.meanJain);
    j["mean_solve_time_s"] = OptionalJson(a.meanSolveSeconds);
    j["converged_fraction"] = a.nTrials ? static_cast<double>(a.nOptimal) / a.nTrials : 0.0;
    nlohmann::json cdf = nlohmann::json::array();
    for (const CdfPoint& p : a.convergence)
    {
        cdf.push_back({{"seconds", p.seconds}, {"fraction", p.fraction}});
    }
    j["convergence"] = cdf;
    int audit = 0;
    for (const TrialRecord& r : report.trials)
    {
        audit += r.status == milp::SolveStatus::Optimal ? r.auditViolations : 0;
    }
    j["audit_violations_optimal"] = audit;
    return j;
}

void
WriteCampaignOutputs(const CampaignReport& report, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
    {
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    }
    const std::string label = ScenarioLabel(report.spec);
    const std::string flags = FormatConstraints(report.spec.constraints);

    auto trials = OpenOut(dir / "trials.csv");
    trials << "trial,seed,scenario,constraints,status,objective_bps,best_bound_bps,gap,solve_time_s,nodes,"
              "throughput_bps,jain,latency_violations,max_backhaul_delta_bps,audit_violations\n";
    for (const TrialRecord& r : report.trials)
    {
        std::optional<double> maxDelta;
        for (double d : r.metrics.backhaulDeltaBps)
        {
            maxDelta = std::max(maxDelta.value_or(d), d);
        }
        trials << r.index << ',' << r.seed << ',' << label << ',' << '"' << flags << '"' << ','
               << milp::ToString(r.status) << ',' << r.objectiveBps << ',' << r.bestBoundBps << ','
               << (std::isfinite(r.gap) ? r.gap : -1.0) << ',' << r.solveSeconds << ',' << r.nodes << ','
               << r.metrics.totalThroughputBps << ',' << OptionalField(r.metrics.jain) << ','
               << r.metrics.latencyViolations << ',' << OptionalField(maxDelta) << ',' << r.auditViolations << '\n';
    }

    auto bh = OpenOut(dir / "backhaul.csv");
    bh << "trial,status,ap,kind,capacity_bps,demand_minus_capacity_bps\n";
    for (const TrialRecord& r : report.trials)
    {
        for (std::size_t j = 0; j < r.metrics.backhaulDeltaBps.size(); ++j)
        {
            bh << r.index << ',' << milp::ToString(r.status) << ',' << j << ',' << (r.apIsMacro[j] ? "MC" : "SC")
               << ',' << r.apCapacityBps[j] << ',' << r.metrics.backhaulDeltaBps[j] << '\n';
        }
    }

    auto lat = OpenOut(dir / "latency.csv");
    lat << "trial,status,user,latency_ms,violates\n";
    for (const TrialRecord& r : report.trials)
    {
        for (std::size_t u = 0; u < r.metrics.userLatencyMs.size(); ++u)
        {
            const auto& v = r.metrics.userLatencyMs[u];
            lat << r.index << ',' << milp::ToString(r.status) << ',' << u << ',' << OptionalField(v) << ','
                << (v && *v > report.spec.latencyBudgetMs ? 1 : 0) << '\n';
        }
    }

    auto conv = OpenOut(dir / "convergence.csv");
    conv << "seconds,fraction\n";
    for (const CdfPoint& p : report.aggregates.convergence)
    {
        conv << p.seconds << ',' << p.fraction << '\n';
    }

    auto js = OpenOut(dir / "campaign.json");
    js << CampaignJson(report).dump(2) << '\n';
    if (!js)
    {
        throw IoError("cannot write campaign.json");
    }
}

std::string
SolverFromEnvironment()
{
    const char* v = std::getenv("AURA5G_SOLVER");
    if (!v || !*v || std::string(v) == "internal")
    {
        return "";
    }
    std::string s(v);
    const std::string prefix = "external:";
    if (s.rfind(prefix, 0) != 0 || s.size() == prefix.size())
    {
        throw InvalidSpec("AURA5G_SOLVER must be 'internal' or 'external:<path>'");
    }
    return s.substr(prefix.size());
}

} // namespace aura5g
