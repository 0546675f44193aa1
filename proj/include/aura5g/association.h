#ifndef AURA5G_ASSOCIATION_H
#define AURA5G_ASSOCIATION_H

#include "aura5g/branch-and-bound.h"
#include "aura5g/milp-model.h"
#include "aura5g/radio.h"
#include "aura5g/random.h"
#include "aura5g/topology.h"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace aura5g
{

enum class DcMode
{
    AnyDC, ///< exactly two APs of any kind
    MCSC,  ///< exactly one MC plus at most one SC
    SA,    ///< at most one AP
    Baseline
};

const char* ToString(DcMode mode);

struct ConstraintFlags
{
    bool mrt = false; ///< minimum rate per user
    bool cb = false;  ///< backhaul capacity per AP
    bool cpl = false; ///< path latency budget per user

    bool Empty() const { return !mrt && !cb && !cpl; }
    bool operator==(const ConstraintFlags&) const = default;
};

/**
 * Raw data of one association instance, independent of any model rows.
 * Users are eMBB users; APs follow the topology's index space.
 */
struct ProblemInput
{
    DcMode mode = DcMode::AnyDC;
    ConstraintFlags flags;
    int nUsers = 0;
    int nAps = 0;
    std::vector<std::uint8_t> isMacro; ///< per AP
    std::vector<int> parentMc;         ///< per AP; an MC is its own parent
    Eigen::MatrixXd spectralEfficiency;
    std::vector<std::vector<double>> optionsHz;
    std::vector<double> accessBandwidthHz; ///< W_j
    std::vector<double> capacityBps;       ///< backhaul capacity left for eMBB traffic
    std::vector<double> latencyMs;         ///< p_j
    std::vector<double> minRateBps;        ///< R_i
    std::vector<double> latencyBudgetMs;   ///< l_i

    /// Throws InconsistentInput when the per-user or per-AP arrays disagree in size.
    void Validate() const;
    double Rate(int i, int j, int k) const { return optionsHz[j][k] * spectralEfficiency(i, j); }
    int NumOptions(int j) const { return static_cast<int>(optionsHz[j].size()); }
    /// AP j is barred for user i by the latency budget.
    bool Blocked(int i, int j) const { return flags.cpl && latencyMs[j] > latencyBudgetMs[i]; }
};

struct InputDefaults
{
    double minRateBps = 100e6;
    double latencyBudgetMs = 3.0;
};

/// Assembles the instance; MC capacities are reduced by mmtcLoadBps (one entry per MC, or empty).
ProblemInput MakeProblemInput(const Topology& topo,
                              const RadioEnvironment& radio,
                              DcMode mode,
                              ConstraintFlags flags,
                              const std::vector<double>& mmtcLoadBps,
                              const InputDefaults& defaults = {});

/// Flat index of (user, AP, option) over APs with differing option counts.
class OptionLayout
{
  public:
    OptionLayout() = default;
    explicit OptionLayout(const ProblemInput& input);

    int Index(int i, int j, int k) const { return i * m_perUser + m_offset[j] + k; }
    int Size() const { return m_nUsers * m_perUser; }

  private:
    int m_nUsers = 0;
    int m_perUser = 0;
    std::vector<int> m_offset;
};

/**
 * A (possibly infeasible) association.  Optimizer solutions carry x, g and
 * Gamma; the baseline instead carries an explicit bandwidth per link.
 * Derived fields are filled by Summarize.
 */
struct AssociationSolution
{
    int nUsers = 0;
    int nAps = 0;
    OptionLayout layout;
    std::vector<std::uint8_t> x;     ///< i * nAps + j
    std::vector<std::uint8_t> g;     ///< layout index
    std::vector<std::uint8_t> gamma; ///< layout index
    bool usesOptions = true;
    std::vector<double> linkBandwidthHz; ///< i * nAps + j

    std::vector<double> linkRateBps; ///< i * nAps + j
    std::vector<double> userRateBps;
    std::vector<double> apBandwidthHz;
    /// SC: its users' traffic.  MC: its own users plus every child SC's users.
    std::vector<double> apDemandBps;

    bool X(int i, int j) const { return x[i * nAps + j] != 0; }
    double TotalRateBps() const;
};

AssociationSolution EmptySolution(const ProblemInput& input);

/// Recomputes link bandwidths, rates and AP demands from the assignment and the raw input.
void Summarize(const ProblemInput& input, AssociationSolution& sol);

/**
 * Full x/g/Gamma model.  Objective and capacity rows are in Mbps, bandwidth
 * rows in MHz.  Latency-barred pairs are fixed by x_ij <= 0.
 */
struct AssociationProblem
{
    milp::Model model;
    ProblemInput input;
    OptionLayout layout;
    std::vector<int> xCol;     ///< i * nAps + j
    std::vector<int> gCol;     ///< layout index
    std::vector<int> gammaCol; ///< layout index
};

inline constexpr double kRateScale = 1e-6;      ///< bps to Mbps
inline constexpr double kBandwidthScale = 1e-6; ///< Hz to MHz

AssociationProblem BuildMilp(const ProblemInput& input);
AssociationSolution SolutionFromFullModel(const AssociationProblem& problem, const std::vector<double>& values);

/**
 * Gamma-only form used by the solver.  g is identified with Gamma and x is
 * eliminated: the per-user mode rows act on sum_k Gamma.  Columns exist
 * only for pairs that are not latency-barred and have a positive rate.
 * For every integer point of the full model there is one of this model
 * with the same objective and vice versa (see MapBack), and its LP
 * relaxation is no weaker.
 */
struct AggregatedProblem
{
    struct Var
    {
        int user;
        int ap;
        int option;
    };

    milp::Model model;
    std::vector<Var> vars;
    /// Set when the mode rows cannot be met at all (too few reachable APs).
    bool infeasible = false;
};

AggregatedProblem BuildAggregatedMilp(const ProblemInput& input);

/**
 * Turns an aggregated point into a full assignment: x_ij = 1 where an
 * option is chosen, then mode equalities are met by attaching the
 * lowest-latency allowed APs (lowest index on ties) with no option.
 */
AssociationSolution MapBack(const ProblemInput& input, const AggregatedProblem& agg, const std::vector<double>& values);

/**
 * Threshold-and-repair rounding for models whose row coefficients are all
 * non-negative: keep columns at or above 0.5, drop the cheapest column of
 * each violated <= row, then greedily add columns in order of LP value
 * while every <= row still holds.
 */
std::optional<std::vector<double>> ThresholdRepairHeuristic(const milp::Model& model, const std::vector<double>& lp);

enum class SolveRoute
{
    Aggregated,
    Full
};

struct AssocSolverOptions
{
    double timeLimitSeconds = 600.0;
    double relativeGap = 1e-4;
    SolveRoute route = SolveRoute::Aggregated;
    /// Executable for the external adapter; empty means the internal solver.
    std::string externalSolver;
    std::function<void(const milp::BnbLogLine&)> log;
};

struct AssociationOutcome
{
    milp::SolveStatus status = milp::SolveStatus::TimeLimit;
    std::optional<AssociationSolution> solution;
    double objectiveBps = 0.0;
    double bestBoundBps = 0.0;
    double gap = 0.0;
    double wallSeconds = 0.0;
    std::size_t nodes = 0;
};

AssociationOutcome SolveAssociation(const ProblemInput& input, const AssocSolverOptions& options = {});

/**
 * Max-SNR attachment: every user joins its best-SNR AP (lowest index on
 * ties) and each AP splits its carrier bandwidth equally among its users.
 * No constraint flag is applied.
 */
AssociationSolution BaselineAssociation(const RadioEnvironment& radio, const Topology& topo);

struct Violation
{
    std::string row;
    double excess; ///< amount by which the row is violated, in the row's units
};

struct AuditReport
{
    std::vector<Violation> violations;
    double objectiveBps = 0.0;

    bool Clean() const { return violations.empty(); }
};

/**
 * Re-checks an assignment against the raw input: binarity, one option per
 * link, the three product rows, access bandwidth, the mode rows and every
 * active constraint flag.  Rates are recomputed from the spectral
 * efficiencies, not taken from the solution.
 */
AuditReport AuditSolution(const ProblemInput& input, const AssociationSolution& sol, double relTol = 1e-6);

/// Per-MC mMTC backhaul load: one U[1, 1000] kbps draw per device, summed at its home MC.
std::vector<double> MmtcBackhaulLoad(const Topology& topo, Rng& rng);

} // namespace aura5g

#endif
