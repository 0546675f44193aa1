#include "aura5g/branch-and-bound.h"

#include "doctest.h"
#include "lp-oracle.h"

#include <random>
#include <sstream>

using namespace aura5g::milp;

TEST_CASE("0/1 knapsack matches enumeration")
{
    Model m;
    double value[] = {10, 13, 7, 8, 9, 4};
    double weight[] = {5, 7, 4, 4, 5, 2};
    std::vector<std::pair<int, double>> t;
    for (int j = 0; j < 6; ++j)
    {
        t.push_back({m.AddBinary("x" + std::to_string(j), value[j]), weight[j]});
    }
    m.AddRow("cap", t, RowSense::LessEqual, 13);
    auto expected = aura5g::testing::EnumerateBinaryOptimum(m);
    SolveOutcome out = BranchAndBound(m);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.objective == doctest::Approx(*expected));
    CHECK(out.bestBound >= out.objective - 1e-9);
}

TEST_CASE("integer infeasibility is detected")
{
    Model m;
    int x = m.AddBinary("x", 1);
    int y = m.AddBinary("y", 1);
    m.AddRow("half", {{x, 1}, {y, 1}}, RowSense::Equal, 1.5);
    CHECK(BranchAndBound(m).status == SolveStatus::Infeasible);
}

TEST_CASE("zero time limit returns before the root")
{
    Model m;
    int x = m.AddBinary("x", 1);
    m.AddRow("r", {{x, 1}}, RowSense::LessEqual, 1);
    BnbOptions opt;
    opt.timeLimitSeconds = 0.0;
    SolveOutcome out = BranchAndBound(m, opt);
    CHECK(out.status == SolveStatus::TimeLimit);
    CHECK(out.nodes <= 1);
    CHECK_FALSE(out.incumbent.has_value());
}

TEST_CASE("singleton rows are presolved into bounds")
{
    Model m;
    int x = m.AddColumn("x", 0, 10, 1, true);
    int y = m.AddColumn("y", 0, 10, 1, true);
    m.AddRow("xcap", {{x, 2}}, RowSense::LessEqual, 7);   // x <= 3
    m.AddRow("ymin", {{y, -1}}, RowSense::LessEqual, -2); // y >= 2
    m.AddRow("sum", {{x, 1}, {y, 1}}, RowSense::LessEqual, 5.5);
    SolveOutcome out = BranchAndBound(m);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.objective == doctest::Approx(5));
    CHECK((*out.incumbent)[x] <= 3);
    CHECK((*out.incumbent)[y] >= 2);
}

TEST_CASE("random binary programs match enumeration and the LP bound dominates")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coef(-4, 9), nDist(2, 10), mDist(1, 5), sense(0, 2);
    int solved = 0;
    for (int trial = 0; trial < 200; ++trial)
    {
        Model m;
        m.sense = trial % 3 ? ObjectiveSense::Maximize : ObjectiveSense::Minimize;
        int n = nDist(rng);
        for (int j = 0; j < n; ++j)
        {
            m.AddBinary("x" + std::to_string(j), coef(rng));
        }
        int rows = mDist(rng);
        for (int i = 0; i < rows; ++i)
        {
            std::vector<std::pair<int, double>> t;
            double total = 0;
            for (int j = 0; j < n; ++j)
            {
                double a = coef(rng);
                t.push_back({j, a});
                total += std::abs(a);
            }
            auto s = static_cast<RowSense>(sense(rng));
            double rhs = std::round(total * 0.3);
            if (s == RowSense::Equal)
            {
                rhs = std::round(total * 0.2);
            }
            m.AddRow("r" + std::to_string(i), t, s, rhs);
        }
        auto expected = aura5g::testing::EnumerateBinaryOptimum(m);
        BnbOptions opt;
        opt.relativeGap = 0.0;
        opt.absoluteGap = 1e-9;
        SolveOutcome out = BranchAndBound(m, opt);
        if (!expected)
        {
            CHECK(out.status == SolveStatus::Infeasible);
            continue;
        }
        REQUIRE(out.status == SolveStatus::Optimal);
        CHECK(out.objective == doctest::Approx(*expected));
        LpResult relax = SolveLp(m);
        REQUIRE(relax.status == LpStatus::Optimal);
        if (m.sense == ObjectiveSense::Maximize)
        {
            CHECK(relax.objective >= *expected - 1e-7);
        }
        else
        {
            CHECK(relax.objective <= *expected + 1e-7);
        }
        ++solved;
    }
    CHECK(solved > 50);
}

TEST_CASE("log lines are key=value and the bound never increases")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> w(3, 20);
    Model m;
    std::vector<std::pair<int, double>> t1, t2;
    for (int j = 0; j < 24; ++j)
    {
        int c = m.AddBinary("x" + std::to_string(j), w(rng));
        t1.push_back({c, static_cast<double>(w(rng))});
        t2.push_back({c, static_cast<double>(w(rng))});
    }
    m.AddRow("a", t1, RowSense::LessEqual, 80.5);
    m.AddRow("b", t2, RowSense::LessEqual, 77.5);

    std::vector<BnbLogLine> lines;
    BnbOptions opt;
    opt.relativeGap = 0.0;
    opt.logEvery = 1;
    opt.log = [&](const BnbLogLine& l) { lines.push_back(l); };
    SolveOutcome out = BranchAndBound(m, opt);
    REQUIRE(out.status == SolveStatus::Optimal);
    REQUIRE(!lines.empty());
    double lastBound = lines.front().bound;
    double lastInc = -1e300;
    for (const auto& l : lines)
    {
        CHECK(l.bound <= lastBound + 1e-9);
        lastBound = l.bound;
        if (l.hasIncumbent)
        {
            CHECK(l.incumbent >= lastInc - 1e-9);
            lastInc = l.incumbent;
        }
    }
    std::string text = FormatLogLine(lines.back());
    CHECK(text.find("node=") == 0);
    CHECK(text.find("bound=") != std::string::npos);
    CHECK(text.find("gap=") != std::string::npos);
}

TEST_CASE("LP format export lists every section")
{
    Model m;
    int x = m.AddBinary("x_0_1", 2.5);
    int y = m.AddColumn("y", -1, 4, -1, false);
    m.AddRow("mix", {{x, 1}, {y, -2}}, RowSense::GreaterEqual, -3);
    std::ostringstream os;
    WriteLpFormat(m, os);
    std::string s = os.str();
    CHECK(s.find("Maximize") != std::string::npos);
    CHECK(s.find("Subject To") != std::string::npos);
    CHECK(s.find("mix: 1 x_0_1 - 2 y >= -3") != std::string::npos);
    CHECK(s.find("-1 <= y <= 4") != std::string::npos);
    CHECK(s.find("Binaries\n x_0_1") != std::string::npos);
    CHECK(s.find("End") != std::string::npos);
}

namespace
{

// Random 0/1 model with knapsack rows of mixed sign and a few packing rows,
// the structure the presolve and the cover separator look for.
Model
RandomPackingKnapsack(std::mt19937_64& rng, int n)
{
    std::uniform_int_distribution<int> w(1, 12), pick(0, n - 1), coin(0, 3);
    Model m;
    for (int j = 0; j < n; ++j)
    {
        m.AddBinary("x" + std::to_string(j), w(rng));
    }
    for (int g = 0; g + 2 < n; g += 3)
    {
        if (coin(rng))
        {
            m.AddRow("pack" + std::to_string(g), {{g, 1}, {g + 1, 1}, {g + 2, 1}}, RowSense::LessEqual, 1);
        }
    }
    for (int r = 0; r < 3; ++r)
    {
        std::vector<std::pair<int, double>> t;
        double total = 0;
        for (int j = 0; j < n; ++j)
        {
            if (coin(rng) == 0)
            {
                continue;
            }
            double a = coin(rng) == 0 ? -w(rng) : w(rng);
            t.push_back({j, a});
            total += std::abs(a);
        }
        auto sense = coin(rng) == 0 ? RowSense::GreaterEqual : RowSense::LessEqual;
        double rhs = std::round(total * (sense == RowSense::LessEqual ? 0.35 : 0.1));
        m.AddRow("knap" + std::to_string(r), t, sense, rhs);
    }
    if (coin(rng) == 0)
    {
        m.AddRow("fix", {{pick(rng), 3}}, RowSense::LessEqual, 2);
    }
    return m;
}

std::vector<std::vector<double>>
FeasiblePoints(const Model& m)
{
    std::vector<std::vector<double>> out;
    const int n = m.NumColumns();
    std::vector<double> x(n);
    for (unsigned long mask = 0; mask < (1ul << n); ++mask)
    {
        for (int j = 0; j < n; ++j)
        {
            x[j] = (mask >> j) & 1u;
        }
        if (CheckFeasibility(m, x).Feasible(1e-9))
        {
            out.push_back(x);
        }
    }
    return out;
}

bool
Satisfies(const Row& r, const std::vector<double>& x)
{
    double lhs = 0;
    for (std::size_t e = 0; e < r.index.size(); ++e)
    {
        lhs += r.value[e] * x[r.index[e]];
    }
    if (r.sense == RowSense::LessEqual)
    {
        return lhs <= r.rhs + 1e-9;
    }
    if (r.sense == RowSense::GreaterEqual)
    {
        return lhs >= r.rhs - 1e-9;
    }
    return std::abs(lhs - r.rhs) <= 1e-9;
}

} // namespace

TEST_CASE("presolve keeps every integer-feasible point")
{
    std::mt19937_64 rng(12);
    int infeasibleSeen = 0;
    for (int t = 0; t < 150; ++t)
    {
        Model m = RandomPackingKnapsack(rng, 6 + t % 7);
        auto points = FeasiblePoints(m);
        Presolved p = Presolve(m);
        CAPTURE(t);
        if (p.infeasible)
        {
            CHECK(points.empty());
            ++infeasibleSeen;
            continue;
        }
        for (const auto& x : points)
        {
            CHECK(CheckFeasibility(p.model, x).Feasible(1e-9));
        }
        // and adds none: the presolved model's points are the original's
        CHECK(FeasiblePoints(p.model).size() == points.size());
    }
    MESSAGE("presolve proved infeasibility on " << infeasibleSeen << " models");
}

TEST_CASE("cover cuts never remove an integer-feasible point")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int cutsSeen = 0;
    for (int t = 0; t < 150; ++t)
    {
        Model m = RandomPackingKnapsack(rng, 6 + t % 7);
        auto points = FeasiblePoints(m);
        // separate against the LP optimum and against random fractional points
        std::vector<std::vector<double>> probes;
        LpResult lp = SolveLp(m);
        if (lp.status == LpStatus::Optimal)
        {
            probes.push_back(lp.x);
        }
        for (int k = 0; k < 5; ++k)
        {
            std::vector<double> x(m.NumColumns());
            for (double& v : x)
            {
                v = u(rng);
            }
            probes.push_back(x);
        }
        for (const auto& x : probes)
        {
            for (const Row& cut : SeparateCoverCuts(m, x))
            {
                ++cutsSeen;
                CAPTURE(t);
                CAPTURE(cut.name);
                for (const auto& p : points)
                {
                    CHECK(Satisfies(cut, p));
                }
                CHECK_FALSE(Satisfies(cut, x));
            }
        }
    }
    CHECK(cutsSeen > 100);
}

TEST_CASE("a GUB-aware cover cuts off interpolated options")
{
    // two users share a 1000-unit backhaul; each picks one of two widths
    Model m;
    int a0 = m.AddBinary("a0", 361), a1 = m.AddBinary("a1", 722);
    int b0 = m.AddBinary("b0", 323), b1 = m.AddBinary("b1", 646);
    m.AddRow("one_a", {{a0, 1}, {a1, 1}}, RowSense::LessEqual, 1);
    m.AddRow("one_b", {{b0, 1}, {b1, 1}}, RowSense::LessEqual, 1);
    m.AddRow("cap", {{a0, 361}, {a1, 722}, {b0, 323}, {b1, 646}}, RowSense::LessEqual, 1000);
    std::vector<double> x{0.0, 0.5, 0.5, 0.5};
    std::vector<Row> cuts = SeparateCoverCuts(m, x);
    REQUIRE_FALSE(cuts.empty());
    for (const auto& p : FeasiblePoints(m))
    {
        for (const Row& c : cuts)
        {
            CHECK(Satisfies(c, p));
        }
    }
    // the best cut spans both of b's options
    const Row& best = cuts.front();
    CHECK(best.index.size() == 3);
    CHECK(best.rhs == 1.0);
    SolveOutcome out = BranchAndBound(m);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.objective == doctest::Approx(722));
}
