#include "aura5g/lp-solver.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aura5g::milp
{

const char*
ToString(LpStatus status)
{
    switch (status)
    {
    case LpStatus::Optimal:
        return "Optimal";
    case LpStatus::Infeasible:
        return "Infeasible";
    case LpStatus::Unbounded:
        return "Unbounded";
    case LpStatus::TimeLimit:
        return "TimeLimit";
    case LpStatus::NumericalFailure:
        return "NumericalFailure";
    }
    return "?";
}

DualSimplex::DualSimplex(const Model& model, LpOptions options)
    : m_model(model),
      m_opt(options),
      m_n(model.NumColumns()),
      m_m(model.NumRows())
{
    m_objSign = model.sense == ObjectiveSense::Maximize ? -1.0 : 1.0;
    m_cols.assign(m_n, {});
    m_rowsA.assign(m_m, {});
    m_rhs.resize(m_m);
    m_rowScale.assign(m_m, 1.0);
    for (int i = 0; i < m_m; ++i)
    {
        const Row& r = model.rows[i];
        // power-of-two equilibration keeps mixed-unit rows from wrecking the kernel's conditioning
        double big = 0.0;
        for (double v : r.value)
        {
            big = std::max(big, std::abs(v));
        }
        if (big > 0.0)
        {
            m_rowScale[i] = std::ldexp(1.0, -std::ilogb(big));
        }
        const double sc = m_rowScale[i];
        m_rhs[i] = r.rhs * sc;
        for (std::size_t e = 0; e < r.index.size(); ++e)
        {
            if (r.value[e] == 0.0)
            {
                continue;
            }
            m_cols[r.index[e]].push_back({i, r.value[e] * sc});
            m_rowsA[i].push_back({r.index[e], r.value[e] * sc});
        }
    }
    m_cost.assign(m_n + m_m, 0.0);
    for (int j = 0; j < m_n; ++j)
    {
        m_cost[j] = m_objSign * model.columns[j].cost;
    }
    m_alpha.assign(m_n + m_m, 0.0);
    m_rho.assign(m_m, 0.0);
}

LpResult
DualSimplex::Solve(const BasisState* warm)
{
    std::vector<double> lo(m_n), up(m_n);
    for (int j = 0; j < m_n; ++j)
    {
        lo[j] = m_model.columns[j].lower;
        up[j] = m_model.columns[j].upper;
    }
    return Solve(lo, up, warm);
}

void
DualSimplex::SetBounds(const std::vector<double>& lower, const std::vector<double>& upper)
{
    const double big = m_opt.artificialBound;
    m_lo.assign(m_n + m_m, 0.0);
    m_up.assign(m_n + m_m, 0.0);
    m_artificialLo.assign(m_n + m_m, false);
    m_artificialUp.assign(m_n + m_m, false);
    auto assign = [&](int v, double lo, double up) {
        if (std::isinf(lo))
        {
            lo = -big;
            m_artificialLo[v] = true;
        }
        if (std::isinf(up))
        {
            up = big;
            m_artificialUp[v] = true;
        }
        m_lo[v] = lo;
        m_up[v] = up;
    };
    for (int j = 0; j < m_n; ++j)
    {
        assign(j, lower[j], upper[j]);
    }
    for (int i = 0; i < m_m; ++i)
    {
        switch (m_model.rows[i].sense)
        {
        case RowSense::LessEqual:
            assign(m_n + i, 0.0, kInfinity);
            break;
        case RowSense::GreaterEqual:
            assign(m_n + i, -kInfinity, 0.0);
            break;
        case RowSense::Equal:
            assign(m_n + i, 0.0, 0.0);
            break;
        }
    }
}

void
DualSimplex::ColdStart()
{
    m_status.assign(m_n + m_m, VarStatus::Basic);
    for (int j = 0; j < m_n; ++j)
    {
        m_status[j] = m_cost[j] >= 0.0 ? VarStatus::AtLower : VarStatus::AtUpper;
    }
    m_kRows.clear();
    m_kCols.clear();
    m_rowPos.assign(m_m, -1);
    m_colPos.assign(m_n, -1);
    m_kinv.resize(0, 0);
    m_updates = 0;
}

bool
DualSimplex::WarmStart(const BasisState& warm)
{
    if (static_cast<int>(warm.status.size()) != m_n + m_m)
    {
        return false;
    }
    m_status = warm.status;
    m_kRows.clear();
    m_kCols.clear();
    m_rowPos.assign(m_m, -1);
    m_colPos.assign(m_n, -1);
    for (int i = 0; i < m_m; ++i)
    {
        if (m_status[m_n + i] != VarStatus::Basic)
        {
            m_rowPos[i] = static_cast<int>(m_kRows.size());
            m_kRows.push_back(i);
        }
    }
    for (int j = 0; j < m_n; ++j)
    {
        if (m_status[j] == VarStatus::Basic)
        {
            m_colPos[j] = static_cast<int>(m_kCols.size());
            m_kCols.push_back(j);
        }
    }
    if (m_kRows.size() != m_kCols.size())
    {
        return false;
    }
    return Refactor();
}

bool
DualSimplex::Refactor()
{
    const int r = static_cast<int>(m_kRows.size());
    m_updates = 0;
    if (r == 0)
    {
        m_kinv.resize(0, 0);
        return true;
    }
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(r, r);
    for (int c = 0; c < r; ++c)
    {
        for (const Entry& e : m_cols[m_kCols[c]])
        {
            int pos = m_rowPos[e.index];
            if (pos >= 0)
            {
                k(pos, c) = e.value;
            }
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);
    // rcond() is only an estimate; an exactly singular kernel can pass it, so
    // check the U diagonal and the inverse as well
    const Eigen::VectorXd u = lu.matrixLU().diagonal().cwiseAbs();
    if (!(lu.rcond() > 1e-13) || !(u.minCoeff() > 1e-11 * std::max(1.0, u.maxCoeff())))
    {
        return false;
    }
    Eigen::MatrixXd inv = lu.inverse();
    if (!inv.allFinite())
    {
        return false;
    }
    m_kinv.swap(inv);
    return true;
}

void
DualSimplex::ComputePrimal()
{
    std::vector<double> work(m_rhs);
    for (int j = 0; j < m_n; ++j)
    {
        if (m_status[j] == VarStatus::Basic)
        {
            continue;
        }
        double v = m_status[j] == VarStatus::AtLower ? m_lo[j] : m_up[j];
        m_x[j] = v;
        if (v != 0.0)
        {
            for (const Entry& e : m_cols[j])
            {
                work[e.index] -= e.value * v;
            }
        }
    }
    for (int i = 0; i < m_m; ++i)
    {
        int v = m_n + i;
        if (m_status[v] != VarStatus::Basic)
        {
            m_x[v] = m_status[v] == VarStatus::AtLower ? m_lo[v] : m_up[v];
            work[i] -= m_x[v];
        }
    }
    const int r = static_cast<int>(m_kRows.size());
    if (r > 0)
    {
        Eigen::VectorXd rt(r);
        for (int t = 0; t < r; ++t)
        {
            rt[t] = work[m_kRows[t]];
        }
        Eigen::VectorXd zs = m_kinv * rt;
        for (int c = 0; c < r; ++c)
        {
            int j = m_kCols[c];
            m_x[j] = zs[c];
            for (const Entry& e : m_cols[j])
            {
                if (m_rowPos[e.index] < 0)
                {
                    work[e.index] -= e.value * zs[c];
                }
            }
        }
    }
    for (int i = 0; i < m_m; ++i)
    {
        if (m_rowPos[i] < 0)
        {
            m_x[m_n + i] = work[i];
        }
    }
}

void
DualSimplex::ComputeDuals()
{
    std::fill(m_y.begin(), m_y.end(), 0.0);
    const int r = static_cast<int>(m_kRows.size());
    if (r > 0)
    {
        Eigen::VectorXd cs(r);
        for (int c = 0; c < r; ++c)
        {
            cs[c] = m_cost[m_kCols[c]];
        }
        Eigen::VectorXd yt = m_kinv.transpose() * cs;
        for (int t = 0; t < r; ++t)
        {
            m_y[m_kRows[t]] = yt[t];
        }
    }
    for (int j = 0; j < m_n; ++j)
    {
        if (m_status[j] == VarStatus::Basic)
        {
            m_d[j] = 0.0;
            continue;
        }
        double d = m_cost[j];
        for (const Entry& e : m_cols[j])
        {
            d -= e.value * m_y[e.index];
        }
        m_d[j] = d;
    }
    for (int i = 0; i < m_m; ++i)
    {
        int v = m_n + i;
        m_d[v] = m_status[v] == VarStatus::Basic ? 0.0 : -m_y[i];
    }
}

bool
DualSimplex::RepairDualFeasibility()
{
    bool flipped = false;
    const double tol = m_opt.dualTolerance;
    for (int v = 0; v < m_n + m_m; ++v)
    {
        if (m_status[v] == VarStatus::Basic || m_lo[v] == m_up[v])
        {
            continue;
        }
        if (m_status[v] == VarStatus::AtLower && m_d[v] < -tol)
        {
            m_status[v] = VarStatus::AtUpper;
            flipped = true;
        }
        else if (m_status[v] == VarStatus::AtUpper && m_d[v] > tol)
        {
            m_status[v] = VarStatus::AtLower;
            flipped = true;
        }
    }
    return flipped;
}

void
DualSimplex::ComputePivotRow(int leaving)
{
    for (int t : m_alphaTouched)
    {
        m_alpha[t] = 0.0;
    }
    m_alphaTouched.clear();
    std::fill(m_rho.begin(), m_rho.end(), 0.0);

    const int r = static_cast<int>(m_kRows.size());
    if (!IsLogical(leaving))
    {
        int p = m_colPos[leaving];
        for (int t = 0; t < r; ++t)
        {
            m_rho[m_kRows[t]] = m_kinv(p, t);
        }
    }
    else
    {
        int row = RowOf(leaving);
        m_rho[row] = 1.0;
        if (r > 0)
        {
            Eigen::VectorXd h = Eigen::VectorXd::Zero(r);
            for (const Entry& e : m_rowsA[row])
            {
                int c = m_colPos[e.index];
                if (c >= 0)
                {
                    h[c] = -e.value;
                }
            }
            Eigen::VectorXd rt = m_kinv.transpose() * h;
            for (int t = 0; t < r; ++t)
            {
                m_rho[m_kRows[t]] = rt[t];
            }
        }
    }

    for (int i = 0; i < m_m; ++i)
    {
        double rho = m_rho[i];
        if (rho == 0.0)
        {
            continue;
        }
        for (const Entry& e : m_rowsA[i])
        {
            if (m_alpha[e.index] == 0.0)
            {
                m_alphaTouched.push_back(e.index);
            }
            m_alpha[e.index] += rho * e.value;
        }
        int v = m_n + i;
        m_alpha[v] = rho;
        m_alphaTouched.push_back(v);
    }
}

bool
DualSimplex::Pivot(int entering, int leaving)
{
    const int r = static_cast<int>(m_kRows.size());
    // pivots are rejected relative to the size of the vector they come from
    const double tiny = 1e-12;
    const double rel = 1e-9;

    auto columnOnKernelRows = [&](int j) {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(r);
        for (const Entry& e : m_cols[j])
        {
            int pos = m_rowPos[e.index];
            if (pos >= 0)
            {
                b[pos] = e.value;
            }
        }
        return b;
    };
    auto rowOnKernelCols = [&](int row) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(r);
        for (const Entry& e : m_rowsA[row])
        {
            int pos = m_colPos[e.index];
            if (pos >= 0)
            {
                c[pos] = e.value;
            }
        }
        return c;
    };

    if (!IsLogical(entering) && !IsLogical(leaving))
    {
        int p = m_colPos[leaving];
        Eigen::VectorXd w = m_kinv * columnOnKernelRows(entering);
        double piv = w[p];
        if (!(std::abs(piv) >= std::max(tiny, rel * w.cwiseAbs().maxCoeff())))
        {
            return false;
        }
        m_kinv.row(p) /= piv;
        for (int a = 0; a < r; ++a)
        {
            if (a != p && w[a] != 0.0)
            {
                m_kinv.row(a) -= w[a] * m_kinv.row(p);
            }
        }
        m_kCols[p] = entering;
        m_colPos[entering] = p;
        m_colPos[leaving] = -1;
    }
    else if (!IsLogical(entering) && IsLogical(leaving))
    {
        int row = RowOf(leaving);
        Eigen::VectorXd b = columnOnKernelRows(entering);
        Eigen::VectorXd c = rowOnKernelCols(row);
        double d = 0.0;
        for (const Entry& e : m_cols[entering])
        {
            if (e.index == row)
            {
                d = e.value;
            }
        }
        Eigen::VectorXd u = r > 0 ? Eigen::VectorXd(m_kinv * b) : Eigen::VectorXd();
        Eigen::VectorXd v = r > 0 ? Eigen::VectorXd(m_kinv.transpose() * c) : Eigen::VectorXd();
        double s = d - (r > 0 ? c.dot(u) : 0.0);
        double scale = std::abs(d) + (r > 0 ? c.cwiseAbs().sum() * u.cwiseAbs().maxCoeff() : 0.0);
        if (!(std::abs(s) >= std::max(tiny, rel * scale)))
        {
            return false;
        }
        Eigen::MatrixXd next(r + 1, r + 1);
        if (r > 0)
        {
            next.topLeftCorner(r, r) = m_kinv + (u * v.transpose()) / s;
            next.topRightCorner(r, 1) = -u / s;
            next.bottomLeftCorner(1, r) = -v.transpose() / s;
        }
        next(r, r) = 1.0 / s;
        m_kinv.swap(next);
        m_kRows.push_back(row);
        m_kCols.push_back(entering);
        m_rowPos[row] = r;
        m_colPos[entering] = r;
    }
    else if (IsLogical(entering) && !IsLogical(leaving))
    {
        int row = RowOf(entering);
        int rt = m_rowPos[row];
        int p = m_colPos[leaving];
        double h = m_kinv(p, rt);
        if (!(std::abs(h) >= std::max(tiny, rel * m_kinv.row(p).cwiseAbs().maxCoeff())))
        {
            return false;
        }
        Eigen::VectorXd colRt = m_kinv.col(rt);
        Eigen::RowVectorXd rowP = m_kinv.row(p);
        m_kinv.noalias() -= colRt * rowP / h;
        // swap-remove kernel column position p (a row of K^-1) and row position rt (a column of K^-1)
        int last = r - 1;
        if (p != last)
        {
            m_kinv.row(p) = m_kinv.row(last);
            m_kCols[p] = m_kCols[last];
            m_colPos[m_kCols[p]] = p;
        }
        if (rt != last)
        {
            m_kinv.col(rt) = m_kinv.col(last);
            m_kRows[rt] = m_kRows[last];
            m_rowPos[m_kRows[rt]] = rt;
        }
        m_kinv.conservativeResize(last, last);
        m_kCols.pop_back();
        m_kRows.pop_back();
        m_colPos[leaving] = -1;
        m_rowPos[row] = -1;
    }
    else
    {
        int enteringRow = RowOf(entering);
        int leavingRow = RowOf(leaving);
        int rt = m_rowPos[enteringRow];
        Eigen::VectorXd c = rowOnKernelCols(leavingRow);
        Eigen::VectorXd v = m_kinv.transpose() * c;
        double piv = v[rt];
        if (!(std::abs(piv) >= std::max(tiny, rel * v.cwiseAbs().maxCoeff())))
        {
            return false;
        }
        v[rt] -= 1.0;
        Eigen::VectorXd colRt = m_kinv.col(rt);
        m_kinv.noalias() -= colRt * v.transpose() / piv;
        m_kRows[rt] = leavingRow;
        m_rowPos[leavingRow] = rt;
        m_rowPos[enteringRow] = -1;
    }
    ++m_updates;
    return true;
}

double
DualSimplex::CurrentObjective() const
{
    double z = 0.0;
    for (int j = 0; j < m_n; ++j)
    {
        z += m_cost[j] * m_x[j];
    }
    return z;
}

LpResult
DualSimplex::Finish(LpStatus status, long iterations)
{
    LpResult res;
    res.status = status;
    res.iterations = iterations;
    res.x.assign(m_x.begin(), m_x.begin() + m_n);
    res.objective = m_model.Objective(res.x);
    res.rowDual.resize(m_m);
    for (int i = 0; i < m_m; ++i)
    {
        res.rowDual[i] = m_objSign * m_y[i] * m_rowScale[i];
    }
    res.basis.status = m_status;
    return res;
}

LpResult
DualSimplex::Solve(const std::vector<double>& lower,
                   const std::vector<double>& upper,
                   const BasisState* warm)
{
    if (static_cast<int>(lower.size()) != m_n || static_cast<int>(upper.size()) != m_n)
    {
        throw std::invalid_argument("bound vectors do not match the column count");
    }
    for (int j = 0; j < m_n; ++j)
    {
        if (lower[j] > upper[j])
        {
            LpResult res;
            res.status = LpStatus::Infeasible;
            return res;
        }
    }
    SetBounds(lower, upper);
    m_x.assign(m_n + m_m, 0.0);
    m_y.assign(m_m, 0.0);
    m_d.assign(m_n + m_m, 0.0);
    if (warm == nullptr || !WarmStart(*warm))
    {
        ColdStart();
    }

    const double ptol = m_opt.primalTolerance;
    long iter = 0;
    int stall = 0;
    int recoveries = 0;
    long pivotFailures = 0;
    int restarts = 0;
    // entering candidates whose pivot was rejected, cleared after the next good pivot
    std::vector<char> banned(m_n + m_m, 0);
    std::vector<int> bannedList;
    bool bland = false;
    bool confirmed = false;
    double lastObj = -kInfinity;

    while (true)
    {
        if (m_opt.deadline && (iter & 15) == 0 && std::chrono::steady_clock::now() >= *m_opt.deadline)
        {
            ComputePrimal();
            return Finish(LpStatus::TimeLimit, iter);
        }
        if (iter >= m_opt.maxIterations)
        {
            ComputePrimal();
            return Finish(LpStatus::NumericalFailure, iter);
        }

        ComputeDuals();
        RepairDualFeasibility();
        ComputePrimal();

        double obj = CurrentObjective();
        if (obj > lastObj + 1e-12 * (1.0 + std::abs(obj)))
        {
            lastObj = obj;
            stall = 0;
            bland = false;
        }
        else if (++stall > m_opt.blandAfter)
        {
            bland = true;
        }

        // leaving variable: largest bound violation among basics (Bland: lowest index)
        int leaving = -1;
        double worst = 0.0;
        auto consider = [&](int v) {
            double viol = 0.0;
            if (m_x[v] < m_lo[v] - ptol * std::max(1.0, std::abs(m_lo[v])))
            {
                viol = m_lo[v] - m_x[v];
            }
            else if (m_x[v] > m_up[v] + ptol * std::max(1.0, std::abs(m_up[v])))
            {
                viol = m_x[v] - m_up[v];
            }
            if (viol <= 0.0)
            {
                return;
            }
            if (bland)
            {
                if (leaving < 0 || v < leaving)
                {
                    leaving = v;
                }
            }
            else if (viol > worst)
            {
                worst = viol;
                leaving = v;
            }
        };
        for (int j : m_kCols)
        {
            consider(j);
        }
        for (int i = 0; i < m_m; ++i)
        {
            if (m_rowPos[i] < 0)
            {
                consider(m_n + i);
            }
        }

        if (leaving < 0)
        {
            if (m_updates > 0 && !confirmed)
            {
                // confirm optimality on a fresh factorization
                confirmed = true;
                if (!Refactor())
                {
                    ColdStart();
                }
                continue;
            }
            for (int v = 0; v < m_n + m_m; ++v)
            {
                bool atArtificial = (m_artificialLo[v] && m_x[v] <= m_lo[v] * 0.5) ||
                                    (m_artificialUp[v] && m_x[v] >= m_up[v] * 0.5);
                if (atArtificial)
                {
                    return Finish(LpStatus::Unbounded, iter);
                }
            }
            return Finish(LpStatus::Optimal, iter);
        }
        confirmed = false;

        ComputePivotRow(leaving);
        const bool toLower = m_x[leaving] < m_lo[leaving];

        // Harris two-pass dual ratio test
        const double dtol = m_opt.dualTolerance;
        const double piv = m_opt.pivotTolerance;
        auto eligible = [&](int v, double a) {
            if (m_status[v] == VarStatus::Basic || m_lo[v] == m_up[v] || std::abs(a) <= piv || banned[v])
            {
                return false;
            }
            bool atLower = m_status[v] == VarStatus::AtLower;
            return toLower ? (atLower ? a < 0 : a > 0) : (atLower ? a > 0 : a < 0);
        };
        auto dualSlack = [&](int v) {
            return m_status[v] == VarStatus::AtLower ? std::max(m_d[v], 0.0) : std::max(-m_d[v], 0.0);
        };
        double thetaMax = kInfinity;
        for (int v : m_alphaTouched)
        {
            double a = m_alpha[v];
            if (eligible(v, a))
            {
                thetaMax = std::min(thetaMax, (dualSlack(v) + dtol) / std::abs(a));
            }
        }
        int entering = -1;
        if (std::isfinite(thetaMax))
        {
            double best = -1.0;
            double minRatio = kInfinity;
            if (bland)
            {
                for (int v : m_alphaTouched)
                {
                    if (eligible(v, m_alpha[v]))
                    {
                        minRatio = std::min(minRatio, dualSlack(v) / std::abs(m_alpha[v]));
                    }
                }
            }
            for (int v : m_alphaTouched)
            {
                double a = m_alpha[v];
                if (!eligible(v, a))
                {
                    continue;
                }
                double ratio = dualSlack(v) / std::abs(a);
                if (bland)
                {
                    if (ratio <= minRatio + 1e-12 && (entering < 0 || v < entering))
                    {
                        entering = v;
                    }
                }
                else if (ratio <= thetaMax && std::abs(a) > best)
                {
                    best = std::abs(a);
                    entering = v;
                }
            }
        }
        if (entering < 0 && !bannedList.empty())
        {
            // every usable pivot was rejected: start over from the slack basis
            for (int v : bannedList)
            {
                banned[v] = 0;
            }
            bannedList.clear();
            if (++restarts > 5)
            {
                return Finish(LpStatus::NumericalFailure, iter);
            }
            ColdStart();
            continue;
        }
        if (entering < 0)
        {
            if (m_updates > 0 && recoveries < 3)
            {
                ++recoveries;
                if (!Refactor())
                {
                    ColdStart();
                }
                continue;
            }
            return Finish(LpStatus::Infeasible, iter);
        }

        const VarStatus enteringWas = m_status[entering];
        m_status[leaving] = toLower ? VarStatus::AtLower : VarStatus::AtUpper;
        m_status[entering] = VarStatus::Basic;
        bool ok = Pivot(entering, leaving);
        if (ok && !bannedList.empty())
        {
            for (int v : bannedList)
            {
                banned[v] = 0;
            }
            bannedList.clear();
        }
        if (!ok || m_updates >= m_opt.refactorInterval)
        {
            if (!ok)
            {
                // undo the status change; the factorization was not touched
                m_status[leaving] = VarStatus::Basic;
                m_status[entering] = enteringWas;
                banned[entering] = 1;
                bannedList.push_back(entering);
                if (++pivotFailures > 1000)
                {
                    return Finish(LpStatus::NumericalFailure, iter);
                }
            }
            if (!Refactor())
            {
                if (++recoveries > 20)
                {
                    return Finish(LpStatus::NumericalFailure, iter);
                }
                ColdStart();
            }
        }
        ++iter;
    }
}

LpResult
SolveLp(const Model& model, const LpOptions& options)
{
    DualSimplex lp(model, options);
    return lp.Solve();
}

} // namespace aura5g::milp
