#ifndef AURA5G_MILP_MODEL_H
#define AURA5G_MILP_MODEL_H

#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace aura5g::milp
{

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense
{
    LessEqual,
    GreaterEqual,
    Equal
};

enum class ObjectiveSense
{
    Maximize,
    Minimize
};

struct Column
{
    std::string name;
    double lower = 0.0;
    double upper = kInfinity;
    double cost = 0.0;
    bool integer = false;
};

struct Row
{
    std::string name;
    std::vector<int> index;
    std::vector<double> value;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
};

/**
 * Sparse mixed-integer linear program in row form.
 *
 * Columns carry their own bounds and integrality; rows are stored sparse
 * with an explicit sense.  Duplicate indices inside one row are merged by
 * AddRow.
 */
class Model
{
  public:
    ObjectiveSense sense = ObjectiveSense::Maximize;

    int AddColumn(std::string name, double lower, double upper, double cost, bool integer);
    int AddBinary(std::string name, double cost = 0.0);
    int AddRow(std::string name,
               std::vector<std::pair<int, double>> terms,
               RowSense sense,
               double rhs);

    int NumColumns() const { return static_cast<int>(columns.size()); }
    int NumRows() const { return static_cast<int>(rows.size()); }
    std::size_t NumNonzeros() const;

    double Objective(const std::vector<double>& x) const;
    double RowActivity(int row, const std::vector<double>& x) const;

    std::vector<Column> columns;
    std::vector<Row> rows;
};

/// Largest violation of any row, bound or integrality requirement.
struct FeasibilityCheck
{
    double maxRowViolation = 0.0;
    double maxBoundViolation = 0.0;
    double maxIntegralityViolation = 0.0;
    int worstRow = -1;

    bool Feasible(double tol) const
    {
        return maxRowViolation <= tol && maxBoundViolation <= tol &&
               maxIntegralityViolation <= tol;
    }
};

/// Row violations are measured relative to max(1, |rhs|).
FeasibilityCheck CheckFeasibility(const Model& model, const std::vector<double>& x);

/// Column names as written by WriteLpFormat (sanitized, unique).
std::vector<std::string> LpColumnNames(const Model& model);

/// Writes the model in CPLEX LP text format (readable by CBC, GLPK, HiGHS, SCIP, Gurobi).
void WriteLpFormat(const Model& model, std::ostream& os);

} // namespace aura5g::milp

#endif
