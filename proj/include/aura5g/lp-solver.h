#ifndef AURA5G_LP_SOLVER_H
#define AURA5G_LP_SOLVER_H

#include "aura5g/milp-model.h"

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace aura5g::milp
{

enum class LpStatus
{
    Optimal,
    Infeasible,
    Unbounded,
    TimeLimit,
    NumericalFailure
};

const char* ToString(LpStatus status);

enum class VarStatus : std::uint8_t
{
    Basic,
    AtLower,
    AtUpper
};

/// Basis snapshot: one status per structural column followed by one per row logical.
struct BasisState
{
    std::vector<VarStatus> status;
};

struct LpOptions
{
    double primalTolerance = 1e-7;
    double dualTolerance = 1e-7;
    double pivotTolerance = 1e-7;
    /// Replacement for infinite bounds (artificial bounding); hitting it means unbounded.
    double artificialBound = 1e9;
    long maxIterations = 200000;
    /// Consecutive non-improving iterations before switching to Bland's rule.
    int blandAfter = 50;
    int refactorInterval = 64;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct LpResult
{
    LpStatus status = LpStatus::NumericalFailure;
    double objective = 0.0; ///< in the model's own sense
    std::vector<double> x;  ///< structural values
    std::vector<double> rowDual;
    long iterations = 0;
    BasisState basis;
};

/**
 * Bounded-variable dual simplex.
 *
 * Each row i gets a logical s_i with a.x + s_i = b and bounds taken from the
 * row sense.  The basis is represented by the kernel K = A[T, S] where S are
 * the basic structurals and T the rows whose logical is nonbasic; K^-1 is held
 * densely and updated in O(r^2) per pivot.  Boxed nonbasics are kept dual
 * feasible by bound flipping, so any start basis is usable and a branch-and-
 * bound child can warm-start from its parent's final basis.
 */
class DualSimplex
{
  public:
    explicit DualSimplex(const Model& model, LpOptions options = {});

    /// Solve with the model's bounds.
    LpResult Solve(const BasisState* warm = nullptr);

    /// Solve with overridden structural bounds (sizes must equal NumColumns()).
    LpResult Solve(const std::vector<double>& lower,
                   const std::vector<double>& upper,
                   const BasisState* warm = nullptr);

    LpOptions& Options() { return m_opt; }

  private:
    struct Entry
    {
        int index;
        double value;
    };

    bool IsLogical(int v) const { return v >= m_n; }
    int RowOf(int logical) const { return logical - m_n; }

    void SetBounds(const std::vector<double>& lower, const std::vector<double>& upper);
    void ColdStart();
    bool WarmStart(const BasisState& warm);
    bool Refactor();
    void ComputePrimal();
    void ComputeDuals();
    bool RepairDualFeasibility();
    void ComputePivotRow(int leaving);
    bool Pivot(int entering, int leaving);
    double CurrentObjective() const;
    LpResult Finish(LpStatus status, long iterations);

    const Model& m_model;
    LpOptions m_opt;
    int m_n = 0;
    int m_m = 0;
    double m_objSign = 1.0; ///< internal problem is min m_objSign * c.x

    std::vector<std::vector<Entry>> m_cols; // structural columns
    std::vector<std::vector<Entry>> m_rowsA; // row-wise copy
    std::vector<double> m_cost;              // internal costs, size n + m
    std::vector<double> m_rhs;
    std::vector<double> m_rowScale; // internal row i = model row i * m_rowScale[i]

    std::vector<double> m_lo, m_up;         // working bounds, size n + m
    std::vector<bool> m_artificialLo, m_artificialUp;
    std::vector<VarStatus> m_status;
    std::vector<double> m_x;                // values of all n + m variables

    // Kernel bookkeeping.
    std::vector<int> m_kRows;   // kernel row position -> model row
    std::vector<int> m_kCols;   // kernel column position -> structural
    std::vector<int> m_rowPos;  // model row -> kernel row position, -1 if loose
    std::vector<int> m_colPos;  // structural -> kernel column position, -1 if not basic
    Eigen::MatrixXd m_kinv;
    int m_updates = 0;

    std::vector<double> m_y;     // row duals
    std::vector<double> m_d;     // reduced costs, size n + m
    std::vector<double> m_rho;   // pivot row in row space
    std::vector<double> m_alpha; // pivot row over all variables
    std::vector<int> m_alphaTouched;
};

/// One-shot convenience wrapper.
LpResult SolveLp(const Model& model, const LpOptions& options = {});

} // namespace aura5g::milp

#endif
