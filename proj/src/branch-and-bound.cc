#include "aura5g/branch-and-bound.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <tuple>

namespace aura5g::milp
{

const char*
ToString(SolveStatus status)
{
    switch (status)
    {
    case SolveStatus::Optimal:
        return "Optimal";
    case SolveStatus::Infeasible:
        return "Infeasible";
    case SolveStatus::TimeLimit:
        return "TimeLimit";
    case SolveStatus::Unbounded:
        return "Unbounded";
    }
    return "?";
}

SolveStatus
SolveStatusFromString(const std::string& s)
{
    if (s == "Optimal")
    {
        return SolveStatus::Optimal;
    }
    if (s == "Infeasible")
    {
        return SolveStatus::Infeasible;
    }
    if (s == "TimeLimit")
    {
        return SolveStatus::TimeLimit;
    }
    if (s == "Unbounded")
    {
        return SolveStatus::Unbounded;
    }
    throw std::invalid_argument("unknown solve status '" + s + "'");
}

std::string
FormatLogLine(const BnbLogLine& line)
{
    char buf[256];
    if (line.hasIncumbent)
    {
        std::snprintf(buf, sizeof(buf), "node=%zu open=%zu bound=%.9g incumbent=%.9g gap=%.3e time=%.3f",
                      line.node, line.open, line.bound, line.incumbent, line.gap, line.seconds);
    }
    else
    {
        std::snprintf(buf, sizeof(buf), "node=%zu open=%zu bound=%.9g incumbent=none gap=inf time=%.3f",
                      line.node, line.open, line.bound, line.seconds);
    }
    return buf;
}

std::optional<std::vector<double>>
RoundingHeuristic(const Model& model, const std::vector<double>& lp)
{
    std::vector<double> x(lp);
    for (int j = 0; j < model.NumColumns(); ++j)
    {
        if (model.columns[j].integer)
        {
            x[j] = std::round(x[j]);
        }
    }
    if (CheckFeasibility(model, x).Feasible(1e-7))
    {
        return x;
    }
    return std::nullopt;
}

namespace
{

struct BoundChange
{
    int column;
    double lower;
    double upper;
};

struct Node
{
    std::vector<BoundChange> changes;
    double bound; // maximization score of the parent relaxation
    std::size_t depth;
    std::shared_ptr<const BasisState> basis;
    // how this node was created, for the pseudocost update
    int branchCol = -1;
    bool branchUp = false;
    double branchDistance = 0.0;
};

// Average objective degradation per unit of change, per column and direction.
class Pseudocosts
{
  public:
    explicit Pseudocosts(int n)
        : m_sum{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)},
          m_count{std::vector<int>(n, 0), std::vector<int>(n, 0)}
    {
    }

    void Record(int col, bool up, double distance, double degradation)
    {
        if (distance <= 0.0)
        {
            return;
        }
        double unit = std::max(0.0, degradation) / distance;
        m_sum[up][col] += unit;
        ++m_count[up][col];
        m_total[up] += unit;
        ++m_totalCount[up];
    }

    double Get(int col, bool up) const
    {
        if (m_count[up][col] > 0)
        {
            return m_sum[up][col] / m_count[up][col];
        }
        // uninitialized columns borrow the mean over all observations
        return m_totalCount[up] > 0 ? m_total[up] / m_totalCount[up] : 1.0;
    }

  private:
    std::vector<double> m_sum[2];
    std::vector<int> m_count[2];
    double m_total[2] = {0.0, 0.0};
    long m_totalCount[2] = {0, 0};
};

// Activity-based bound tightening: a row's minimum activity over the other
// columns caps how far each column can move.  Removes, for instance, a binary
// whose coefficient alone exceeds a capacity row.
void
TightenBounds(Model& m, double tol)
{
    for (int pass = 0; pass < 3; ++pass)
    {
        bool changed = false;
        for (const Row& row : m.rows)
        {
            for (int side = 0; side < 2; ++side)
            {
                // side 0 treats the row as a.x <= rhs, side 1 as -a.x <= -rhs
                if ((side == 0 && row.sense == RowSense::GreaterEqual) ||
                    (side == 1 && row.sense == RowSense::LessEqual))
                {
                    continue;
                }
                const double sign = side == 0 ? 1.0 : -1.0;
                double minAct = 0.0;
                int infinite = 0;
                for (std::size_t e = 0; e < row.index.size(); ++e)
                {
                    const Column& c = m.columns[row.index[e]];
                    double a = sign * row.value[e];
                    double v = a > 0 ? a * c.lower : a * c.upper;
                    if (a == 0.0)
                    {
                        continue;
                    }
                    if (!std::isfinite(v))
                    {
                        ++infinite;
                    }
                    else
                    {
                        minAct += v;
                    }
                }
                if (infinite > 0)
                {
                    continue;
                }
                const double rhs = sign * row.rhs;
                for (std::size_t e = 0; e < row.index.size(); ++e)
                {
                    Column& c = m.columns[row.index[e]];
                    double a = sign * row.value[e];
                    if (a == 0.0)
                    {
                        continue;
                    }
                    double rest = minAct - (a > 0 ? a * c.lower : a * c.upper);
                    double limit = (rhs - rest) / a;
                    double slack = tol * std::max(1.0, std::abs(limit));
                    if (a > 0)
                    {
                        double ub = c.integer ? std::floor(limit + slack) : limit + slack;
                        if (ub < c.upper - slack)
                        {
                            c.upper = ub;
                            changed = true;
                        }
                    }
                    else
                    {
                        double lb = c.integer ? std::ceil(limit - slack) : limit - slack;
                        if (lb > c.lower + slack)
                        {
                            c.lower = lb;
                            changed = true;
                        }
                    }
                }
            }
        }
        if (!changed)
        {
            break;
        }
    }
}

// Coefficient tightening on inequality rows, written as a.x <= b.  A binary
// whose value 0 already makes the row redundant can have its coefficient
// shrunk by the excess, which leaves the integer points unchanged and cuts
// off fractional ones.  A minimum-rate row, for example, stops accepting a
// sliver of a multi-Gbps option.
void
TightenCoefficients(Model& m, double tol)
{
    for (Row& row : m.rows)
    {
        if (row.sense == RowSense::Equal)
        {
            continue;
        }
        const double sign = row.sense == RowSense::LessEqual ? 1.0 : -1.0;
        double maxAct = 0.0;
        bool finite = true;
        for (std::size_t e = 0; e < row.index.size(); ++e)
        {
            const Column& c = m.columns[row.index[e]];
            double a = sign * row.value[e];
            double v = a > 0 ? a * c.upper : a * c.lower;
            if (a != 0.0)
            {
                finite &= std::isfinite(v);
                maxAct += finite ? v : 0.0;
            }
        }
        if (!finite)
        {
            continue;
        }
        double b = sign * row.rhs;
        for (std::size_t e = 0; e < row.index.size(); ++e)
        {
            const Column& c = m.columns[row.index[e]];
            double a = sign * row.value[e];
            if (!c.integer || c.lower != 0.0 || c.upper != 1.0 || a == 0.0)
            {
                continue;
            }
            if (a > 0)
            {
                // x = 0 leaves the row slack by d: shrink a and b together
                double d = b - (maxAct - a);
                if (d > tol && a > d + tol)
                {
                    row.value[e] = sign * (a - d);
                    b -= d;
                    maxAct -= d;
                }
            }
            else
            {
                // x = 1 leaves the row slack by d: raise a towards zero
                double d = b - (maxAct + a);
                if (d > tol && -a > d + tol)
                {
                    row.value[e] = sign * (a + d);
                }
            }
        }
        row.rhs = sign * b;
    }
}

} // namespace

Presolved
Presolve(const Model& original, double tol)
{
    Presolved p;
    p.model.sense = original.sense;
    p.model.columns = original.columns;
    for (const Row& row : original.rows)
    {
        std::size_t nz = 0;
        int col = -1;
        double coef = 0.0;
        for (std::size_t e = 0; e < row.index.size(); ++e)
        {
            if (row.value[e] != 0.0)
            {
                ++nz;
                col = row.index[e];
                coef = row.value[e];
            }
        }
        if (nz == 0)
        {
            bool ok = (row.sense == RowSense::LessEqual && 0.0 <= row.rhs + tol) ||
                      (row.sense == RowSense::GreaterEqual && 0.0 >= row.rhs - tol) ||
                      (row.sense == RowSense::Equal && std::abs(row.rhs) <= tol);
            p.infeasible |= !ok;
            continue;
        }
        if (nz > 1)
        {
            p.model.rows.push_back(row);
            continue;
        }
        Column& c = p.model.columns[col];
        double v = row.rhs / coef;
        bool upperBound = (row.sense == RowSense::LessEqual) == (coef > 0);
        if (row.sense == RowSense::Equal || upperBound)
        {
            double ub = c.integer ? std::floor(v + tol) : v;
            c.upper = std::min(c.upper, ub);
        }
        if (row.sense == RowSense::Equal || !upperBound)
        {
            double lb = c.integer ? std::ceil(v - tol) : v;
            c.lower = std::max(c.lower, lb);
        }
    }
    TightenBounds(p.model, tol);
    TightenCoefficients(p.model, tol);
    for (const Column& c : p.model.columns)
    {
        if (c.lower > c.upper + tol)
        {
            p.infeasible = true;
        }
    }
    return p;
}

std::vector<Row>
SeparateCoverCuts(const Model& model, const std::vector<double>& x, double minViolation)
{
    struct Item
    {
        int col;
        double weight;   // after complementing, always positive
        bool complemented;
        double value;    // LP value of the (possibly complemented) binary
    };
    // items of one packing row (sum of binaries <= 1), sorted by weight; at most one is 1
    struct Group
    {
        std::vector<Item> items;
        std::size_t first = 0; // lightest item the cut uses
        double weight = 0.0;   // weight of items[first]
        double value = 0.0;    // LP mass of items[first..]
    };

    auto isBinary = [&](int j) {
        const Column& c = model.columns[j];
        return c.integer && c.lower == 0.0 && c.upper == 1.0;
    };
    std::vector<std::vector<int>> packsOf(model.columns.size());
    for (std::size_t r = 0; r < model.rows.size(); ++r)
    {
        const Row& row = model.rows[r];
        if (row.sense == RowSense::GreaterEqual || row.rhs != 1.0 || row.index.size() < 2)
        {
            continue;
        }
        bool packing = true;
        for (std::size_t e = 0; e < row.index.size() && packing; ++e)
        {
            packing = row.value[e] == 1.0 && isBinary(row.index[e]);
        }
        if (packing)
        {
            for (int j : row.index)
            {
                packsOf[j].push_back(static_cast<int>(r));
            }
        }
    }

    std::vector<std::pair<double, Row>> found;
    std::vector<Item> items;
    std::vector<Group> groups;
    std::vector<int> slot(model.columns.size(), -1); // position in items, -1 when absent or grouped
    for (const Row& row : model.rows)
    {
        for (int side = 0; side < 2; ++side)
        {
            if ((side == 0 && row.sense == RowSense::GreaterEqual) ||
                (side == 1 && row.sense == RowSense::LessEqual))
            {
                continue;
            }
            const double sign = side == 0 ? 1.0 : -1.0;
            double b = sign * row.rhs;
            items.clear();
            bool knapsack = true;
            double total = 0.0;
            for (std::size_t e = 0; e < row.index.size() && knapsack; ++e)
            {
                const int j = row.index[e];
                const Column& c = model.columns[j];
                const double a = sign * row.value[e];
                if (a == 0.0 || c.upper == c.lower)
                {
                    b -= a * c.lower; // fixed columns move to the right-hand side
                    continue;
                }
                knapsack = isBinary(j);
                if (a > 0)
                {
                    items.push_back({j, a, false, x[j]});
                }
                else
                {
                    items.push_back({j, -a, true, 1.0 - x[j]});
                    b -= a;
                }
                total += std::abs(a);
            }
            const double eps = 1e-9 * std::max(1.0, std::abs(b));
            if (!knapsack || items.size() < 2 || total <= b + eps || b < 0.0)
            {
                continue;
            }

            // partition into groups: uncomplemented items sharing a packing row go together
            for (std::size_t k = 0; k < items.size(); ++k)
            {
                if (!items[k].complemented)
                {
                    slot[items[k].col] = static_cast<int>(k);
                }
            }
            groups.clear();
            for (const Item& it : items)
            {
                Group g;
                if (it.complemented)
                {
                    g.items.push_back(it);
                }
                else if (slot[it.col] >= 0)
                {
                    const Row* best = nullptr;
                    std::size_t bestOverlap = 0;
                    for (int r : packsOf[it.col])
                    {
                        std::size_t overlap = 0;
                        for (int j : model.rows[r].index)
                        {
                            overlap += slot[j] >= 0 ? 1 : 0;
                        }
                        if (overlap > bestOverlap)
                        {
                            best = &model.rows[r];
                            bestOverlap = overlap;
                        }
                    }
                    if (best == nullptr)
                    {
                        g.items.push_back(it);
                        slot[it.col] = -1;
                    }
                    else
                    {
                        for (int j : best->index)
                        {
                            if (slot[j] >= 0)
                            {
                                g.items.push_back(items[slot[j]]);
                                slot[j] = -1;
                            }
                        }
                    }
                }
                else
                {
                    continue;
                }
                std::sort(g.items.begin(), g.items.end(), [](const Item& l, const Item& r) {
                    return l.weight != r.weight ? l.weight < r.weight : l.col < r.col;
                });
                // pick the threshold with the largest mass; ties go to the heavier item
                double mass = 0.0;
                g.value = -1.0;
                for (std::size_t k = g.items.size(); k-- > 0;)
                {
                    mass += g.items[k].value;
                    if (mass > g.value + 1e-12)
                    {
                        g.value = mass;
                        g.first = k;
                    }
                }
                g.weight = g.items[g.first].weight;
                groups.push_back(std::move(g));
            }

            // greedy cover over groups: prefer mass near 1 relative to weight
            std::vector<std::size_t> order(groups.size());
            for (std::size_t k = 0; k < order.size(); ++k)
            {
                order[k] = k;
            }
            std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
                double kl = (1.0 - groups[l].value) / groups[l].weight;
                double kr = (1.0 - groups[r].value) / groups[r].weight;
                return kl != kr ? kl < kr : l < r;
            });
            std::vector<std::size_t> cover;
            double weight = 0.0;
            for (std::size_t g : order)
            {
                cover.push_back(g);
                weight += groups[g].weight;
                if (weight > b + eps)
                {
                    break;
                }
            }
            if (weight <= b + eps)
            {
                continue;
            }
            // make it minimal, dropping low-mass groups first
            std::sort(cover.begin(), cover.end(), [&](std::size_t l, std::size_t r) {
                return groups[l].value != groups[r].value ? groups[l].value < groups[r].value : l < r;
            });
            for (std::size_t k = 0; k < cover.size();)
            {
                if (weight - groups[cover[k]].weight > b + eps)
                {
                    weight -= groups[cover[k]].weight;
                    cover.erase(cover.begin() + static_cast<std::ptrdiff_t>(k));
                }
                else
                {
                    ++k;
                }
            }
            double heaviest = 0.0;
            std::vector<bool> inCover(groups.size(), false);
            for (std::size_t g : cover)
            {
                heaviest = std::max(heaviest, groups[g].weight);
                inCover[g] = true;
            }
            // each cover group contributes its items from the threshold up; other groups
            // contribute items at least as heavy as the heaviest threshold
            std::vector<Item> extended;
            for (std::size_t g = 0; g < groups.size(); ++g)
            {
                for (std::size_t k = 0; k < groups[g].items.size(); ++k)
                {
                    const Item& it = groups[g].items[k];
                    if (inCover[g] ? k >= groups[g].first : it.weight >= heaviest)
                    {
                        extended.push_back(it);
                    }
                }
            }
            double lhs = 0.0;
            for (const Item& it : extended)
            {
                lhs += it.value;
            }
            const double rhs = static_cast<double>(cover.size()) - 1.0;
            if (lhs <= rhs + minViolation)
            {
                continue;
            }
            Row cut;
            cut.name = "cover_" + row.name;
            cut.sense = RowSense::LessEqual;
            cut.rhs = rhs;
            std::sort(extended.begin(), extended.end(), [](const Item& l, const Item& r) { return l.col < r.col; });
            for (const Item& it : extended)
            {
                cut.index.push_back(it.col);
                cut.value.push_back(it.complemented ? -1.0 : 1.0);
                cut.rhs -= it.complemented ? 1.0 : 0.0;
            }
            found.emplace_back(lhs - rhs, std::move(cut));
        }
    }
    // most violated first, duplicates dropped
    std::stable_sort(found.begin(), found.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    std::vector<Row> cuts;
    for (auto& [violation, cut] : found)
    {
        bool duplicate = std::any_of(cuts.begin(), cuts.end(), [&](const Row& c) {
            return c.index == cut.index && c.value == cut.value && c.rhs == cut.rhs;
        });
        if (!duplicate)
        {
            cuts.push_back(std::move(cut));
        }
    }
    return cuts;
}

SolveOutcome
BranchAndBound(const Model& original, const BnbOptions& opt)
{
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const auto deadline =
        start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(opt.timeLimitSeconds));
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    const double sign = original.sense == ObjectiveSense::Maximize ? 1.0 : -1.0;
    SolveOutcome out;
    out.gap = kInfinity;

    auto finish = [&](SolveStatus status) {
        out.status = status;
        out.wallSeconds = elapsed();
        return out;
    };

    if (opt.timeLimitSeconds <= 0.0 || Clock::now() >= deadline)
    {
        return finish(SolveStatus::TimeLimit);
    }

    Presolved pre = Presolve(original, opt.feasibilityTolerance);
    if (pre.infeasible)
    {
        return finish(SolveStatus::Infeasible);
    }
    Model& model = pre.model;
    const int n = model.NumColumns();
    std::vector<double> rootLo(n), rootUp(n);
    for (int j = 0; j < n; ++j)
    {
        rootLo[j] = model.columns[j].lower;
        rootUp[j] = model.columns[j].upper;
    }

    LpOptions lpOpt = opt.lp;
    lpOpt.deadline = deadline;

    // Root cut loop: cover cuts are globally valid, so they are appended to the
    // working model and the search starts from the last round's basis.
    std::shared_ptr<const BasisState> rootBasis;
    {
        double lastBound = kInfinity;
        int stalls = 0;
        for (int round = 0; round < opt.cutRounds && Clock::now() < deadline; ++round)
        {
            DualSimplex cutLp(model, lpOpt);
            LpResult res = cutLp.Solve(rootLo, rootUp, rootBasis.get());
            out.lpIterations += res.iterations;
            if (res.status != LpStatus::Optimal)
            {
                break;
            }
            rootBasis = std::make_shared<const BasisState>(res.basis);
            const double bound = sign * res.objective;
            stalls = bound < lastBound - 1e-5 * std::max(1.0, std::abs(bound)) ? 0 : stalls + 1;
            lastBound = bound;
            if (stalls >= 3)
            {
                break;
            }
            std::vector<Row> cuts = SeparateCoverCuts(model, res.x);
            if (cuts.empty())
            {
                break;
            }
            if (cuts.size() > opt.maxCutsPerRound)
            {
                cuts.resize(opt.maxCutsPerRound);
            }
            BasisState extended = *rootBasis;
            for (Row& cut : cuts)
            {
                model.rows.push_back(std::move(cut));
                extended.status.push_back(VarStatus::Basic);
            }
            out.cuts += cuts.size();
            rootBasis = std::make_shared<const BasisState>(std::move(extended));
        }
    }
    DualSimplex lp(model, lpOpt);

    bool hasInc = false;
    double incScore = -kInfinity;
    double prunedBound = -kInfinity; // largest bound discarded only because of the gap tolerance
    bool incomplete = false;
    bool timedOut = false;

    auto pruneTolerance = [&] { return std::max(opt.absoluteGap, opt.relativeGap * std::abs(incScore)); };

    auto offer = [&](std::vector<double> x) {
        for (int j = 0; j < n; ++j)
        {
            if (model.columns[j].integer)
            {
                x[j] = std::round(x[j]);
            }
        }
        if (!CheckFeasibility(original, x).Feasible(std::max(opt.feasibilityTolerance, 1e-7)))
        {
            return false;
        }
        double score = sign * original.Objective(x);
        if (!hasInc || score > incScore)
        {
            hasInc = true;
            incScore = score;
            out.incumbent = std::move(x);
            return true;
        }
        return false;
    };

    std::vector<Node> open;
    open.push_back(Node{{}, kInfinity, 0, rootBasis});

    auto globalBound = [&] {
        double b = hasInc ? incScore : -kInfinity;
        b = std::max(b, prunedBound);
        for (const Node& nd : open)
        {
            b = std::max(b, nd.bound);
        }
        return b;
    };
    auto relGap = [&](double bound) {
        if (!hasInc)
        {
            return kInfinity;
        }
        double diff = std::max(0.0, bound - incScore);
        if (diff <= opt.absoluteGap)
        {
            return 0.0;
        }
        return diff / std::max(std::abs(incScore), 1e-9);
    };
    auto emitLog = [&](double bound) {
        if (!opt.log)
        {
            return;
        }
        BnbLogLine line;
        line.node = out.nodes;
        line.bound = sign * bound;
        line.hasIncumbent = hasInc;
        line.incumbent = hasInc ? sign * incScore : 0.0;
        line.gap = relGap(bound);
        line.seconds = elapsed();
        line.open = open.size();
        opt.log(line);
    };

    std::vector<double> lo(n), up(n);
    bool plunging = false;
    Pseudocosts pseudo(n);
    while (!open.empty())
    {
        if (Clock::now() >= deadline || out.nodes >= opt.maxNodes)
        {
            timedOut = true;
            break;
        }
        if (hasInc)
        {
            double gb = globalBound();
            if (relGap(gb) <= opt.relativeGap)
            {
                break;
            }
        }

        // depth-first until an incumbent exists; afterwards best-bound, plunging
        // into the newest child while the dive keeps branching
        std::size_t pick = open.size() - 1;
        if (hasInc && !plunging)
        {
            for (std::size_t k = 0; k < open.size(); ++k)
            {
                if (open[k].bound > open[pick].bound)
                {
                    pick = k;
                }
            }
        }
        Node node = std::move(open[pick]);
        open[pick] = std::move(open.back());
        open.pop_back();
        plunging = false;

        if (hasInc && node.bound <= incScore + pruneTolerance())
        {
            prunedBound = std::max(prunedBound, node.bound);
            continue;
        }

        lo = rootLo;
        up = rootUp;
        bool crossed = false;
        for (const BoundChange& ch : node.changes)
        {
            lo[ch.column] = std::max(lo[ch.column], ch.lower);
            up[ch.column] = std::min(up[ch.column], ch.upper);
            crossed |= lo[ch.column] > up[ch.column];
        }
        if (crossed)
        {
            continue;
        }

        LpResult res = lp.Solve(lo, up, node.basis.get());
        ++out.nodes;
        out.lpIterations += res.iterations;

        if (res.status == LpStatus::TimeLimit)
        {
            open.push_back(std::move(node));
            timedOut = true;
            break;
        }
        if (res.status == LpStatus::NumericalFailure)
        {
            incomplete = true;
            continue;
        }
        if (res.status == LpStatus::Infeasible)
        {
            continue;
        }
        if (res.status == LpStatus::Unbounded)
        {
            if (node.depth == 0)
            {
                return finish(SolveStatus::Unbounded);
            }
            incomplete = true;
            continue;
        }

        const double score = sign * res.objective;
        if (node.depth == 0)
        {
            out.rootBound = sign * score;
        }
        if (node.branchCol >= 0 && std::isfinite(node.bound))
        {
            pseudo.Record(node.branchCol, node.branchUp, node.branchDistance, node.bound - score);
        }
        if (hasInc && score <= incScore + pruneTolerance())
        {
            prunedBound = std::max(prunedBound, std::min(score, node.bound));
            continue;
        }

        // pseudocost product rule; lowest index on ties
        int branchCol = -1;
        double bestScore = -1.0;
        for (int j = 0; j < n; ++j)
        {
            if (!model.columns[j].integer)
            {
                continue;
            }
            double f = res.x[j] - std::floor(res.x[j]);
            if (std::min(f, 1.0 - f) <= opt.integralityTolerance)
            {
                continue;
            }
            const double eps = 1e-6;
            double sc = std::max(eps, pseudo.Get(j, false) * f) * std::max(eps, pseudo.Get(j, true) * (1.0 - f));
            if (sc > bestScore * (1.0 + 1e-12))
            {
                bestScore = sc;
                branchCol = j;
            }
        }

        if (branchCol < 0)
        {
            if (!offer(res.x))
            {
                // integral within tolerance but rows fail after rounding; cannot certify this subtree
                incomplete = true;
            }
            else if (out.nodes % opt.logEvery == 0)
            {
                emitLog(globalBound());
            }
            continue;
        }

        if (opt.heuristic && (node.depth == 0 || !hasInc || out.nodes % opt.heuristicFrequency == 0))
        {
            if (auto cand = opt.heuristic(res.x))
            {
                offer(std::move(*cand));
            }
        }
        if (hasInc && score <= incScore + pruneTolerance())
        {
            prunedBound = std::max(prunedBound, std::min(score, node.bound));
            continue;
        }

        auto basis = std::make_shared<const BasisState>(std::move(res.basis));
        const double v = res.x[branchCol];
        const double f = v - std::floor(v);
        const double childBound = std::min(score, node.bound);
        Node down{node.changes, childBound, node.depth + 1, basis, branchCol, false, f};
        down.changes.push_back({branchCol, lo[branchCol], std::floor(v)});
        Node upper{std::move(node.changes), childBound, node.depth + 1, basis, branchCol, true, 1.0 - f};
        upper.changes.push_back({branchCol, std::ceil(v), up[branchCol]});
        if (v - std::floor(v) >= 0.5)
        {
            open.push_back(std::move(down));
            open.push_back(std::move(upper));
        }
        else
        {
            open.push_back(std::move(upper));
            open.push_back(std::move(down));
        }
        plunging = true;

        if (out.nodes % opt.logEvery == 0)
        {
            emitLog(globalBound());
        }
    }

    double gb = globalBound();
    if (!hasInc && open.empty() && !timedOut)
    {
        out.bestBound = 0.0;
        emitLog(gb);
        return finish(incomplete ? SolveStatus::TimeLimit : SolveStatus::Infeasible);
    }
    out.bestBound = std::isfinite(gb) ? sign * gb : sign * kInfinity;
    out.gap = relGap(gb);
    if (hasInc)
    {
        out.objective = sign * incScore;
    }
    emitLog(gb);
    bool proven = hasInc && !incomplete && out.gap <= opt.relativeGap;
    return finish(proven ? SolveStatus::Optimal : SolveStatus::TimeLimit);
}

} // namespace aura5g::milp
