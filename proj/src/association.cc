#include "aura5g/association.h"

#include "aura5g/errors.h"
#include "aura5g/external-solver.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>

namespace aura5g
{

using milp::RowSense;

const char*
ToString(DcMode mode)
{
    switch (mode)
    {
    case DcMode::AnyDC:
        return "AnyDC";
    case DcMode::MCSC:
        return "MCSC";
    case DcMode::SA:
        return "SA";
    case DcMode::Baseline:
        return "Baseline";
    }
    return "?";
}

void
ProblemInput::Validate() const
{
    auto need = [](bool ok, const char* what) {
        if (!ok)
        {
            throw InconsistentInput(what);
        }
    };
    need(nUsers >= 0 && nAps >= 0, "negative dimensions");
    need(spectralEfficiency.rows() == nUsers && spectralEfficiency.cols() == nAps,
         "spectral efficiency matrix does not match users x APs");
    need(static_cast<int>(isMacro.size()) == nAps, "isMacro size");
    need(static_cast<int>(parentMc.size()) == nAps, "parentMc size");
    need(static_cast<int>(optionsHz.size()) == nAps, "option list size");
    need(static_cast<int>(accessBandwidthHz.size()) == nAps, "access bandwidth size");
    need(static_cast<int>(capacityBps.size()) == nAps, "capacity size");
    need(static_cast<int>(latencyMs.size()) == nAps, "latency size");
    need(static_cast<int>(minRateBps.size()) == nUsers, "minimum rate size");
    need(static_cast<int>(latencyBudgetMs.size()) == nUsers, "latency budget size");
    for (int j = 0; j < nAps; ++j)
    {
        need(parentMc[j] >= 0 && parentMc[j] < nAps && isMacro[parentMc[j]], "parent is not an MC");
    }
}

ProblemInput
MakeProblemInput(const Topology& topo,
                 const RadioEnvironment& radio,
                 DcMode mode,
                 ConstraintFlags flags,
                 const std::vector<double>& mmtcLoadBps,
                 const InputDefaults& defaults)
{
    if (radio.NumUsers() != topo.NumEmbb() || radio.NumAps() != topo.NumAps())
    {
        throw InconsistentInput("radio environment and topology dimensions disagree");
    }
    if (!mmtcLoadBps.empty() && static_cast<int>(mmtcLoadBps.size()) != topo.NumMcs())
    {
        throw InconsistentInput("mMTC load list does not match the MC count");
    }
    ProblemInput in;
    in.mode = mode;
    in.flags = mode == DcMode::Baseline ? ConstraintFlags{} : flags;
    in.nUsers = radio.NumUsers();
    in.nAps = radio.NumAps();
    in.spectralEfficiency = radio.spectralEfficiency;
    in.optionsHz = radio.optionsHz;
    in.accessBandwidthHz = radio.carrierHz;
    for (int j = 0; j < in.nAps; ++j)
    {
        in.isMacro.push_back(topo.IsMacro(j));
        in.parentMc.push_back(topo.ParentMc(j));
        double cap = topo.backhaul.at(j).capacityBps;
        if (topo.IsMacro(j) && !mmtcLoadBps.empty())
        {
            cap -= mmtcLoadBps[j];
        }
        in.capacityBps.push_back(cap);
        in.latencyMs.push_back(topo.PathLatencyMs(j));
    }
    in.minRateBps.assign(in.nUsers, defaults.minRateBps);
    in.latencyBudgetMs.assign(in.nUsers, defaults.latencyBudgetMs);
    in.Validate();
    return in;
}

OptionLayout::OptionLayout(const ProblemInput& input)
    : m_nUsers(input.nUsers)
{
    for (int j = 0; j < input.nAps; ++j)
    {
        m_offset.push_back(m_perUser);
        m_perUser += input.NumOptions(j);
    }
}

double
AssociationSolution::TotalRateBps() const
{
    return std::accumulate(userRateBps.begin(), userRateBps.end(), 0.0);
}

AssociationSolution
EmptySolution(const ProblemInput& input)
{
    AssociationSolution s;
    s.nUsers = input.nUsers;
    s.nAps = input.nAps;
    s.layout = OptionLayout(input);
    s.x.assign(static_cast<std::size_t>(input.nUsers) * input.nAps, 0);
    s.g.assign(s.layout.Size(), 0);
    s.gamma.assign(s.layout.Size(), 0);
    s.linkBandwidthHz.assign(s.x.size(), 0.0);
    return s;
}

void
Summarize(const ProblemInput& input, AssociationSolution& sol)
{
    const int n = input.nUsers, m = input.nAps;
    sol.linkRateBps.assign(static_cast<std::size_t>(n) * m, 0.0);
    sol.userRateBps.assign(n, 0.0);
    sol.apBandwidthHz.assign(m, 0.0);
    sol.apDemandBps.assign(m, 0.0);
    if (sol.usesOptions)
    {
        sol.linkBandwidthHz.assign(static_cast<std::size_t>(n) * m, 0.0);
    }
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < m; ++j)
        {
            double bw = 0.0;
            if (sol.usesOptions)
            {
                for (int k = 0; k < input.NumOptions(j); ++k)
                {
                    bw += sol.gamma[sol.layout.Index(i, j, k)] ? input.optionsHz[j][k] : 0.0;
                }
                sol.linkBandwidthHz[i * m + j] = bw;
            }
            else
            {
                bw = sol.linkBandwidthHz[i * m + j];
            }
            double rate = bw * input.spectralEfficiency(i, j);
            sol.linkRateBps[i * m + j] = rate;
            sol.userRateBps[i] += rate;
            sol.apBandwidthHz[j] += bw;
            sol.apDemandBps[j] += rate;
            if (!input.isMacro[j])
            {
                sol.apDemandBps[input.parentMc[j]] += rate;
            }
        }
    }
}

namespace
{

std::string
Name(const char* stem, int a, int b = -1, int c = -1)
{
    std::string s = stem;
    for (int v : {a, b, c})
    {
        if (v >= 0)
        {
            s += "_" + std::to_string(v);
        }
    }
    return s;
}

// Terms of every capacity-relevant row are collected per AP, then the
// backhaul rows are assembled: an SC row holds its own users, an MC row its
// own users plus all children.
void
AddBackhaulRows(milp::Model& model,
                const ProblemInput& input,
                const std::vector<std::vector<std::pair<int, double>>>& rateTermsPerAp)
{
    std::vector<std::vector<std::pair<int, double>>> rows(input.nAps);
    for (int j = 0; j < input.nAps; ++j)
    {
        for (const auto& t : rateTermsPerAp[j])
        {
            rows[j].push_back(t);
            if (!input.isMacro[j])
            {
                rows[input.parentMc[j]].push_back(t);
            }
        }
    }
    for (int j = 0; j < input.nAps; ++j)
    {
        model.AddRow(Name(input.isMacro[j] ? "cb_mc" : "cb_sc", j), rows[j], RowSense::LessEqual,
                     input.capacityBps[j] * kRateScale);
    }
}

} // namespace

AssociationProblem
BuildMilp(const ProblemInput& input)
{
    input.Validate();
    if (input.mode == DcMode::Baseline)
    {
        throw InconsistentInput("the baseline has no optimization model");
    }
    AssociationProblem p;
    p.input = input;
    p.layout = OptionLayout(input);
    milp::Model& model = p.model;
    model.sense = milp::ObjectiveSense::Maximize;
    const int n = input.nUsers, m = input.nAps;

    p.xCol.resize(static_cast<std::size_t>(n) * m);
    p.gCol.resize(p.layout.Size());
    p.gammaCol.resize(p.layout.Size());
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < m; ++j)
        {
            int x = model.AddBinary(Name("x", i, j));
            if (input.Blocked(i, j))
            {
                model.columns[x].upper = 0.0;
            }
            p.xCol[i * m + j] = x;
            for (int k = 0; k < input.NumOptions(j); ++k)
            {
                p.gCol[p.layout.Index(i, j, k)] = model.AddBinary(Name("g", i, j, k));
                p.gammaCol[p.layout.Index(i, j, k)] =
                    model.AddBinary(Name("G", i, j, k), input.Rate(i, j, k) * kRateScale);
            }
        }
    }

    std::vector<std::vector<std::pair<int, double>>> bwTerms(m), rateTerms(m), userRate(n);
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < m; ++j)
        {
            std::vector<std::pair<int, double>> oneOption;
            const int x = p.xCol[i * m + j];
            for (int k = 0; k < input.NumOptions(j); ++k)
            {
                const int g = p.gCol[p.layout.Index(i, j, k)];
                const int gam = p.gammaCol[p.layout.Index(i, j, k)];
                const double v = input.Rate(i, j, k) * kRateScale;
                oneOption.push_back({g, 1.0});
                bwTerms[j].push_back({gam, input.optionsHz[j][k] * kBandwidthScale});
                rateTerms[j].push_back({gam, v});
                userRate[i].push_back({gam, v});
                model.AddRow(Name("link_x", i, j, k), {{gam, 1.0}, {x, -1.0}}, RowSense::LessEqual, 0.0);
                model.AddRow(Name("link_g", i, j, k), {{gam, 1.0}, {g, -1.0}}, RowSense::LessEqual, 0.0);
                model.AddRow(Name("link_xg", i, j, k), {{gam, 1.0}, {x, -1.0}, {g, -1.0}}, RowSense::GreaterEqual,
                             -1.0);
            }
            model.AddRow(Name("one_option", i, j), oneOption, RowSense::LessEqual, 1.0);
        }
    }
    for (int j = 0; j < m; ++j)
    {
        model.AddRow(Name("access_bw", j), bwTerms[j], RowSense::LessEqual,
                     input.accessBandwidthHz[j] * kBandwidthScale);
    }

    for (int i = 0; i < n; ++i)
    {
        std::vector<std::pair<int, double>> all, mc, sc;
        for (int j = 0; j < m; ++j)
        {
            all.push_back({p.xCol[i * m + j], 1.0});
            (input.isMacro[j] ? mc : sc).push_back({p.xCol[i * m + j], 1.0});
        }
        switch (input.mode)
        {
        case DcMode::AnyDC:
            model.AddRow(Name("mode_any", i), all, RowSense::Equal, 2.0);
            break;
        case DcMode::MCSC:
            model.AddRow(Name("mode_mc", i), mc, RowSense::Equal, 1.0);
            model.AddRow(Name("mode_sc", i), sc, RowSense::LessEqual, 1.0);
            break;
        case DcMode::SA:
            model.AddRow(Name("mode_sa", i), all, RowSense::LessEqual, 1.0);
            break;
        case DcMode::Baseline:
            break;
        }
    }

    if (input.flags.mrt)
    {
        for (int i = 0; i < n; ++i)
        {
            model.AddRow(Name("min_rate", i), userRate[i], RowSense::GreaterEqual, input.minRateBps[i] * kRateScale);
        }
    }
    if (input.flags.cb)
    {
        AddBackhaulRows(model, input, rateTerms);
    }
    return p;
}

AssociationSolution
SolutionFromFullModel(const AssociationProblem& problem, const std::vector<double>& values)
{
    const ProblemInput& in = problem.input;
    AssociationSolution s = EmptySolution(in);
    for (std::size_t e = 0; e < s.x.size(); ++e)
    {
        s.x[e] = values[problem.xCol[e]] > 0.5;
    }
    for (int e = 0; e < problem.layout.Size(); ++e)
    {
        s.g[e] = values[problem.gCol[e]] > 0.5;
        s.gamma[e] = values[problem.gammaCol[e]] > 0.5;
    }
    Summarize(in, s);
    return s;
}

AggregatedProblem
BuildAggregatedMilp(const ProblemInput& input)
{
    input.Validate();
    if (input.mode == DcMode::Baseline)
    {
        throw InconsistentInput("the baseline has no optimization model");
    }
    AggregatedProblem agg;
    milp::Model& model = agg.model;
    model.sense = milp::ObjectiveSense::Maximize;
    const int n = input.nUsers, m = input.nAps;

    std::vector<std::vector<std::pair<int, double>>> bwTerms(m), rateTerms(m);
    for (int i = 0; i < n; ++i)
    {
        int allowed = 0, allowedMc = 0;
        std::vector<std::pair<int, double>> all, mc, sc, rate;
        for (int j = 0; j < m; ++j)
        {
            if (input.Blocked(i, j))
            {
                continue;
            }
            ++allowed;
            allowedMc += input.isMacro[j];
            if (!(input.spectralEfficiency(i, j) > 0.0))
            {
                continue;
            }
            std::vector<std::pair<int, double>> link;
            for (int k = 0; k < input.NumOptions(j); ++k)
            {
                const double v = input.Rate(i, j, k) * kRateScale;
                int c = model.AddBinary(Name("G", i, j, k), v);
                agg.vars.push_back({i, j, k});
                link.push_back({c, 1.0});
                all.push_back({c, 1.0});
                (input.isMacro[j] ? mc : sc).push_back({c, 1.0});
                rate.push_back({c, v});
                bwTerms[j].push_back({c, input.optionsHz[j][k] * kBandwidthScale});
                rateTerms[j].push_back({c, v});
            }
            if (input.mode == DcMode::AnyDC && link.size() > 1)
            {
                model.AddRow(Name("one_option", i, j), link, RowSense::LessEqual, 1.0);
            }
        }
        switch (input.mode)
        {
        case DcMode::AnyDC:
            agg.infeasible |= allowed < 2;
            model.AddRow(Name("mode_any", i), all, RowSense::LessEqual, 2.0);
            break;
        case DcMode::MCSC:
            agg.infeasible |= allowedMc < 1;
            model.AddRow(Name("mode_mc", i), mc, RowSense::LessEqual, 1.0);
            model.AddRow(Name("mode_sc", i), sc, RowSense::LessEqual, 1.0);
            break;
        case DcMode::SA:
            model.AddRow(Name("mode_sa", i), all, RowSense::LessEqual, 1.0);
            break;
        case DcMode::Baseline:
            break;
        }
        if (input.flags.mrt)
        {
            model.AddRow(Name("min_rate", i), rate, RowSense::GreaterEqual, input.minRateBps[i] * kRateScale);
        }
    }
    for (int j = 0; j < m; ++j)
    {
        model.AddRow(Name("access_bw", j), bwTerms[j], RowSense::LessEqual,
                     input.accessBandwidthHz[j] * kBandwidthScale);
    }
    if (input.flags.cb)
    {
        AddBackhaulRows(model, input, rateTerms);
    }
    return agg;
}

AssociationSolution
MapBack(const ProblemInput& input, const AggregatedProblem& agg, const std::vector<double>& values)
{
    AssociationSolution s = EmptySolution(input);
    const int m = input.nAps;
    for (std::size_t c = 0; c < agg.vars.size(); ++c)
    {
        if (values[c] > 0.5)
        {
            const auto& v = agg.vars[c];
            int e = s.layout.Index(v.user, v.ap, v.option);
            s.g[e] = 1;
            s.gamma[e] = 1;
            s.x[v.user * m + v.ap] = 1;
        }
    }

    // lowest latency first, then lowest index
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return input.latencyMs[a] < input.latencyMs[b]; });
    for (int i = 0; i < input.nUsers; ++i)
    {
        auto attached = [&](bool macroOnly) {
            int c = 0;
            for (int j = 0; j < m; ++j)
            {
                c += s.X(i, j) && (!macroOnly || input.isMacro[j]);
            }
            return c;
        };
        auto pad = [&](bool macroOnly, int target) {
            for (int j : order)
            {
                if (attached(macroOnly) >= target)
                {
                    return;
                }
                if (!s.X(i, j) && !input.Blocked(i, j) && (!macroOnly || input.isMacro[j]))
                {
                    s.x[i * m + j] = 1;
                }
            }
        };
        if (input.mode == DcMode::MCSC)
        {
            pad(true, 1);
        }
        else if (input.mode == DcMode::AnyDC)
        {
            pad(false, 2);
        }
    }
    Summarize(input, s);
    return s;
}

namespace
{

class ThresholdRepair
{
  public:
    explicit ThresholdRepair(const milp::Model& model)
        : m_model(model),
          m_colRows(model.NumColumns())
    {
        for (int r = 0; r < model.NumRows(); ++r)
        {
            const milp::Row& row = model.rows[r];
            for (std::size_t e = 0; e < row.index.size(); ++e)
            {
                m_colRows[row.index[e]].push_back({r, row.value[e]});
            }
        }
    }

    std::optional<std::vector<double>> operator()(const std::vector<double>& lp) const
    {
        const int n = m_model.NumColumns();
        const double tol = 1e-9;
        std::vector<char> sel(n, 0);
        std::vector<double> act(m_model.NumRows(), 0.0);
        auto set = [&](int c, bool on) {
            sel[c] = on;
            for (const auto& [r, a] : m_colRows[c])
            {
                act[r] += on ? a : -a;
            }
        };
        for (int c = 0; c < n; ++c)
        {
            const milp::Column& col = m_model.columns[c];
            if (col.lower > 0.5 || (lp[c] >= 0.5 && col.upper > 0.5))
            {
                set(c, true);
            }
        }
        for (int r = 0; r < m_model.NumRows(); ++r)
        {
            const milp::Row& row = m_model.rows[r];
            if (row.sense != RowSense::LessEqual || act[r] <= row.rhs + tol)
            {
                continue;
            }
            std::vector<int> in;
            for (int c : row.index)
            {
                if (sel[c] && m_model.columns[c].lower < 0.5)
                {
                    in.push_back(c);
                }
            }
            std::sort(in.begin(), in.end(),
                      [&](int a, int b) { return m_model.columns[a].cost < m_model.columns[b].cost; });
            for (int c : in)
            {
                if (act[r] <= row.rhs + tol)
                {
                    break;
                }
                set(c, false);
            }
        }

        std::vector<int> order;
        for (int c = 0; c < n; ++c)
        {
            if (!sel[c] && m_model.columns[c].upper > 0.5 && m_model.columns[c].cost > 0.0)
            {
                order.push_back(c);
            }
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (lp[a] != lp[b])
            {
                return lp[a] > lp[b];
            }
            return m_model.columns[a].cost > m_model.columns[b].cost;
        });
        for (int c : order)
        {
            bool fits = true;
            for (const auto& [r, a] : m_colRows[c])
            {
                const milp::Row& row = m_model.rows[r];
                if (row.sense != RowSense::GreaterEqual && act[r] + a > row.rhs + tol)
                {
                    fits = false;
                    break;
                }
            }
            if (fits)
            {
                set(c, true);
            }
        }
        std::vector<double> x(n);
        for (int c = 0; c < n; ++c)
        {
            x[c] = sel[c];
        }
        return x;
    }

  private:
    const milp::Model& m_model;
    std::vector<std::vector<std::pair<int, double>>> m_colRows;
};

AssociationOutcome
FromSolveOutcome(const milp::SolveOutcome& out)
{
    AssociationOutcome r;
    r.status = out.status;
    r.objectiveBps = out.objective / kRateScale;
    r.bestBoundBps = out.bestBound / kRateScale;
    r.gap = out.gap;
    r.wallSeconds = out.wallSeconds;
    r.nodes = out.nodes;
    return r;
}

} // namespace

std::optional<std::vector<double>>
ThresholdRepairHeuristic(const milp::Model& model, const std::vector<double>& lp)
{
    return ThresholdRepair(model)(lp);
}

AssociationOutcome
SolveAssociation(const ProblemInput& input, const AssocSolverOptions& options)
{
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto solveModel = [&](const milp::Model& model, milp::PrimalHeuristic heuristic) {
        if (!options.externalSolver.empty())
        {
            return milp::SolveExternal(model, options.externalSolver, options.timeLimitSeconds);
        }
        milp::BnbOptions opt;
        opt.timeLimitSeconds = options.timeLimitSeconds;
        opt.relativeGap = options.relativeGap;
        opt.heuristic = std::move(heuristic);
        opt.log = options.log;
        return milp::BranchAndBound(model, opt);
    };
    auto stamp = [&](AssociationOutcome r) {
        r.wallSeconds = std::chrono::duration<double>(Clock::now() - start).count();
        return r;
    };

    if (input.mode == DcMode::Baseline)
    {
        throw InconsistentInput("use BaselineAssociation for the baseline mode");
    }
    if (options.route == SolveRoute::Full)
    {
        AssociationProblem p = BuildMilp(input);
        const milp::Model& model = p.model;
        milp::SolveOutcome out = solveModel(
            model, [&model](const std::vector<double>& lp) { return milp::RoundingHeuristic(model, lp); });
        AssociationOutcome r = FromSolveOutcome(out);
        if (out.incumbent)
        {
            r.solution = SolutionFromFullModel(p, *out.incumbent);
        }
        return stamp(r);
    }

    AggregatedProblem agg = BuildAggregatedMilp(input);
    if (agg.infeasible)
    {
        AssociationOutcome r;
        r.status = milp::SolveStatus::Infeasible;
        return stamp(r);
    }
    if (agg.model.NumColumns() == 0)
    {
        AssociationOutcome r;
        bool ok = milp::CheckFeasibility(agg.model, {}).Feasible(1e-9);
        r.status = ok ? milp::SolveStatus::Optimal : milp::SolveStatus::Infeasible;
        if (ok)
        {
            r.solution = MapBack(input, agg, {});
        }
        return stamp(r);
    }
    auto repair = std::make_shared<ThresholdRepair>(agg.model);
    milp::SolveOutcome out = solveModel(agg.model, [repair](const std::vector<double>& lp) { return (*repair)(lp); });
    AssociationOutcome r = FromSolveOutcome(out);
    if (out.incumbent)
    {
        r.solution = MapBack(input, agg, *out.incumbent);
    }
    return stamp(r);
}

AssociationSolution
BaselineAssociation(const RadioEnvironment& radio, const Topology& topo)
{
    ProblemInput in = MakeProblemInput(topo, radio, DcMode::Baseline, {}, {});
    AssociationSolution s = EmptySolution(in);
    s.usesOptions = false;
    const int m = in.nAps;
    std::vector<int> choice(in.nUsers, -1);
    std::vector<int> load(m, 0);
    for (int i = 0; i < in.nUsers; ++i)
    {
        int best = -1;
        for (int j = 0; j < m; ++j)
        {
            if (best < 0 || radio.snrDb(i, j) > radio.snrDb(i, best))
            {
                best = j;
            }
        }
        if (best >= 0)
        {
            choice[i] = best;
            ++load[best];
            s.x[i * m + best] = 1;
        }
    }
    for (int i = 0; i < in.nUsers; ++i)
    {
        if (choice[i] >= 0)
        {
            s.linkBandwidthHz[i * m + choice[i]] = radio.carrierHz[choice[i]] / load[choice[i]];
        }
    }
    Summarize(in, s);
    return s;
}

AuditReport
AuditSolution(const ProblemInput& input, const AssociationSolution& sol, double relTol)
{
    AuditReport rep;
    const int n = input.nUsers, m = input.nAps;
    auto flag = [&](std::string row, double excess) { rep.violations.push_back({std::move(row), excess}); };
    auto over = [&](double lhs, double rhs) { return lhs - rhs > relTol * std::max(1.0, std::abs(rhs)); };

    if (sol.nUsers != n || sol.nAps != m || sol.x.size() != static_cast<std::size_t>(n) * m)
    {
        flag("dimensions", 1.0);
        return rep;
    }
    const OptionLayout layout(input);
    if (sol.usesOptions &&
        (sol.g.size() != static_cast<std::size_t>(layout.Size()) || sol.gamma.size() != sol.g.size()))
    {
        flag("dimensions", 1.0);
        return rep;
    }

    std::vector<double> linkBw(static_cast<std::size_t>(n) * m, 0.0);
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < m; ++j)
        {
            const int xij = sol.x[i * m + j];
            if (xij > 1)
            {
                flag(Name("binary_x", i, j), xij - 1);
            }
            if (!sol.usesOptions)
            {
                linkBw[i * m + j] = sol.linkBandwidthHz[i * m + j];
                if (!xij && linkBw[i * m + j] != 0.0)
                {
                    flag(Name("unattached_bandwidth", i, j), linkBw[i * m + j]);
                }
                continue;
            }
            int options = 0;
            for (int k = 0; k < input.NumOptions(j); ++k)
            {
                const int e = layout.Index(i, j, k);
                const int g = sol.g[e], gam = sol.gamma[e];
                if (g > 1 || gam > 1)
                {
                    flag(Name("binary_g", i, j, k), std::max(g, gam) - 1);
                }
                options += g;
                if (gam > xij)
                {
                    flag(Name("link_x", i, j, k), gam - xij);
                }
                if (gam > g)
                {
                    flag(Name("link_g", i, j, k), gam - g);
                }
                if (gam < xij + g - 1)
                {
                    flag(Name("link_xg", i, j, k), xij + g - 1 - gam);
                }
                linkBw[i * m + j] += gam ? input.optionsHz[j][k] : 0.0;
            }
            if (options > 1)
            {
                flag(Name("one_option", i, j), options - 1);
            }
        }
    }

    std::vector<double> userRate(n, 0.0), apBw(m, 0.0), apDemand(m, 0.0);
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < m; ++j)
        {
            double rate = linkBw[i * m + j] * input.spectralEfficiency(i, j);
            userRate[i] += rate;
            apBw[j] += linkBw[i * m + j];
            apDemand[j] += rate;
            if (!input.isMacro[j])
            {
                apDemand[input.parentMc[j]] += rate;
            }
        }
    }
    rep.objectiveBps = std::accumulate(userRate.begin(), userRate.end(), 0.0);

    for (int j = 0; j < m; ++j)
    {
        if (over(apBw[j], input.accessBandwidthHz[j]))
        {
            flag(Name("access_bw", j), apBw[j] - input.accessBandwidthHz[j]);
        }
    }

    for (int i = 0; i < n; ++i)
    {
        int all = 0, mc = 0;
        for (int j = 0; j < m; ++j)
        {
            all += sol.X(i, j);
            mc += sol.X(i, j) && input.isMacro[j];
        }
        const int sc = all - mc;
        switch (input.mode)
        {
        case DcMode::AnyDC:
            if (all != 2)
            {
                flag(Name("mode_any", i), std::abs(all - 2));
            }
            break;
        case DcMode::MCSC:
            if (mc != 1)
            {
                flag(Name("mode_mc", i), std::abs(mc - 1));
            }
            if (sc > 1)
            {
                flag(Name("mode_sc", i), sc - 1);
            }
            break;
        case DcMode::SA:
            if (all > 1)
            {
                flag(Name("mode_sa", i), all - 1);
            }
            break;
        case DcMode::Baseline:
            if (all != 1)
            {
                flag(Name("mode_baseline", i), std::abs(all - 1));
            }
            break;
        }
    }

    if (input.flags.mrt)
    {
        for (int i = 0; i < n; ++i)
        {
            if (over(input.minRateBps[i], userRate[i]))
            {
                flag(Name("min_rate", i), input.minRateBps[i] - userRate[i]);
            }
        }
    }
    if (input.flags.cb)
    {
        for (int j = 0; j < m; ++j)
        {
            if (over(apDemand[j], input.capacityBps[j]))
            {
                flag(Name(input.isMacro[j] ? "cb_mc" : "cb_sc", j), apDemand[j] - input.capacityBps[j]);
            }
        }
    }
    if (input.flags.cpl)
    {
        for (int i = 0; i < n; ++i)
        {
            for (int j = 0; j < m; ++j)
            {
                if (sol.X(i, j) && input.latencyMs[j] > input.latencyBudgetMs[i])
                {
                    flag(Name("latency", i, j), input.latencyMs[j] - input.latencyBudgetMs[i]);
                }
            }
        }
    }
    return rep;
}

std::vector<double>
MmtcBackhaulLoad(const Topology& topo, Rng& rng)
{
    std::vector<double> load(topo.NumMcs(), 0.0);
    std::uniform_real_distribution<double> kbps(1.0, 1000.0);
    for (const UserEquipment& u : topo.users)
    {
        if (u.service == Service::Mmtc)
        {
            load.at(u.homeMc) += kbps(rng) * 1e3;
        }
    }
    return load;
}

} // namespace aura5g
