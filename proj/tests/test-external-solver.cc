#include "aura5g/association.h"
#include "aura5g/errors.h"
#include "aura5g/external-solver.h"

#include "association-oracle.h"
#include "doctest.h"

#include <cstdlib>
#include <sstream>

using namespace aura5g;
using namespace aura5g::milp;

namespace
{

bool
FixtureUsable()
{
    static const bool ok = std::system("python3 -c 'import scipy.optimize' > /dev/null 2>&1") == 0;
    return ok;
}

Model
Knapsack()
{
    Model m;
    int a = m.AddBinary("a", 5);
    int b = m.AddBinary("b", 4);
    int c = m.AddBinary("c", 3);
    m.AddRow("cap", {{a, 4}, {b, 3}, {c, 2}}, RowSense::LessEqual, 5);
    return m;
}

} // namespace

TEST_CASE("CBC-style solution text")
{
    Model m = Knapsack();
    std::istringstream good("Optimal - objective value 7\n      0 a 0 0\n      1 b 1 -4\n      2 c 1 -3\n");
    SolveOutcome out = ParseCbcSolution(m, good);
    CHECK(out.status == SolveStatus::Optimal);
    CHECK(out.objective == doctest::Approx(7));
    REQUIRE(out.incumbent);
    CHECK((*out.incumbent)[1] == 1.0);

    std::istringstream infeasible("Infeasible - objective value 0\n");
    CHECK(ParseCbcSolution(m, infeasible).status == SolveStatus::Infeasible);
    std::istringstream stopped("Stopped on time - objective value 0\n");
    SolveOutcome s = ParseCbcSolution(m, stopped);
    CHECK(s.status == SolveStatus::TimeLimit);
    CHECK_FALSE(s.incumbent);

    std::istringstream violating("Optimal - objective value 9\n 0 a 1 0\n 1 b 1 0\n");
    CHECK_THROWS_AS(ParseCbcSolution(m, violating), ParseError);
    std::istringstream unknown("Optimal - objective value 0\n 0 zz 1 0\n");
    CHECK_THROWS_AS(ParseCbcSolution(m, unknown), ParseError);
    std::istringstream garbage("Segmentation fault\n");
    CHECK_THROWS_AS(ParseCbcSolution(m, garbage), ParseError);
}

TEST_CASE("a missing executable is reported")
{
    CHECK_THROWS_AS(SolveExternal(Knapsack(), "/nonexistent/cbc", 10), AdapterUnavailable);
    CHECK_THROWS_AS(SolveExternal(Knapsack(), "", 10), AdapterUnavailable);
    // runs but writes nothing
    CHECK_THROWS_AS(SolveExternal(Knapsack(), "/bin/true", 10), AdapterUnavailable);
}

TEST_CASE("the external route agrees with branch-and-bound")
{
    if (!FixtureUsable())
    {
        MESSAGE("scipy not importable, external cross-check skipped");
        return;
    }
    SolveOutcome ext = SolveExternal(Knapsack(), AURA5G_SCIPY_FIXTURE, 30);
    REQUIRE(ext.status == SolveStatus::Optimal);
    CHECK(ext.objective == doctest::Approx(7));

    std::mt19937_64 rng(404);
    const DcMode modes[] = {DcMode::AnyDC, DcMode::MCSC, DcMode::SA};
    for (int t = 0; t < 12; ++t)
    {
        ProblemInput in = testing::RandomTinyInput(rng, modes[t % 3], {t % 2 == 0, true, t % 4 == 1});
        AssocSolverOptions internal;
        internal.relativeGap = 1e-9;
        AssocSolverOptions external = internal;
        external.externalSolver = AURA5G_SCIPY_FIXTURE;
        AssociationOutcome a = SolveAssociation(in, internal);
        AssociationOutcome b = SolveAssociation(in, external);
        CAPTURE(t);
        CHECK(a.status == b.status);
        if (a.status == SolveStatus::Optimal && b.status == SolveStatus::Optimal)
        {
            CHECK(a.objectiveBps == doctest::Approx(b.objectiveBps).epsilon(1e-6));
            REQUIRE(b.solution);
            CHECK(AuditSolution(in, *b.solution).Clean());
        }
    }
}
