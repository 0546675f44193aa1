#include "aura5g/milp-model.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace aura5g::milp
{

int
Model::AddColumn(std::string name, double lower, double upper, double cost, bool integer)
{
    if (lower > upper)
    {
        throw std::invalid_argument("column '" + name + "' has lower > upper");
    }
    columns.push_back(Column{std::move(name), lower, upper, cost, integer});
    return NumColumns() - 1;
}

int
Model::AddBinary(std::string name, double cost)
{
    return AddColumn(std::move(name), 0.0, 1.0, cost, true);
}

int
Model::AddRow(std::string name,
              std::vector<std::pair<int, double>> terms,
              RowSense sense,
              double rhs)
{
    std::sort(terms.begin(), terms.end());
    Row row;
    row.name = std::move(name);
    row.sense = sense;
    row.rhs = rhs;
    for (const auto& [col, coef] : terms)
    {
        if (col < 0 || col >= NumColumns())
        {
            throw std::out_of_range("row '" + row.name + "' references unknown column");
        }
        if (!row.index.empty() && row.index.back() == col)
        {
            row.value.back() += coef;
        }
        else
        {
            row.index.push_back(col);
            row.value.push_back(coef);
        }
    }
    rows.push_back(std::move(row));
    return NumRows() - 1;
}

std::size_t
Model::NumNonzeros() const
{
    std::size_t nnz = 0;
    for (const auto& r : rows)
    {
        nnz += r.index.size();
    }
    return nnz;
}

double
Model::Objective(const std::vector<double>& x) const
{
    double z = 0.0;
    for (std::size_t j = 0; j < columns.size(); ++j)
    {
        z += columns[j].cost * x[j];
    }
    return z;
}

double
Model::RowActivity(int row, const std::vector<double>& x) const
{
    const Row& r = rows[row];
    double a = 0.0;
    for (std::size_t e = 0; e < r.index.size(); ++e)
    {
        a += r.value[e] * x[r.index[e]];
    }
    return a;
}

FeasibilityCheck
CheckFeasibility(const Model& model, const std::vector<double>& x)
{
    FeasibilityCheck check;
    for (int i = 0; i < model.NumRows(); ++i)
    {
        const Row& r = model.rows[i];
        double act = model.RowActivity(i, x);
        double scale = std::max(1.0, std::abs(r.rhs));
        double viol = 0.0;
        switch (r.sense)
        {
        case RowSense::LessEqual:
            viol = act - r.rhs;
            break;
        case RowSense::GreaterEqual:
            viol = r.rhs - act;
            break;
        case RowSense::Equal:
            viol = std::abs(act - r.rhs);
            break;
        }
        viol /= scale;
        if (viol > check.maxRowViolation)
        {
            check.maxRowViolation = viol;
            check.worstRow = i;
        }
    }
    for (int j = 0; j < model.NumColumns(); ++j)
    {
        const Column& c = model.columns[j];
        double v = std::max(c.lower - x[j], x[j] - c.upper);
        check.maxBoundViolation = std::max(check.maxBoundViolation, v);
        if (c.integer)
        {
            check.maxIntegralityViolation =
                std::max(check.maxIntegralityViolation, std::abs(x[j] - std::round(x[j])));
        }
    }
    return check;
}

namespace
{

std::string
FormatNumber(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// LP-format names may not start with a digit or contain most punctuation.
std::string
SafeName(const std::string& name, char prefix, int index)
{
    if (name.empty())
    {
        return std::string(1, prefix) + std::to_string(index);
    }
    std::string out;
    for (char ch : name)
    {
        bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.';
        out.push_back(ok ? ch : '_');
    }
    if (std::isdigit(static_cast<unsigned char>(out.front())) || out.front() == '.')
    {
        out.insert(out.begin(), prefix);
    }
    return out;
}

class LineWrapper
{
  public:
    explicit LineWrapper(std::ostream& os)
        : m_os(os)
    {
    }

    void Put(const std::string& token)
    {
        if (m_width + token.size() + 1 > 200)
        {
            m_os << "\n   ";
            m_width = 3;
        }
        m_os << ' ' << token;
        m_width += token.size() + 1;
    }

    void Start(const std::string& head)
    {
        m_os << head;
        m_width = head.size();
    }

    void End()
    {
        m_os << '\n';
        m_width = 0;
    }

  private:
    std::ostream& m_os;
    std::size_t m_width = 0;
};

void
PutTerm(LineWrapper& w, double coef, const std::string& name, bool first)
{
    if (coef < 0)
    {
        w.Put("-");
    }
    else if (!first)
    {
        w.Put("+");
    }
    w.Put(FormatNumber(std::abs(coef)) + " " + name);
}

} // namespace

std::vector<std::string>
LpColumnNames(const Model& model)
{
    std::vector<std::string> names(model.columns.size());
    std::map<std::string, int> seen;
    for (std::size_t j = 0; j < model.columns.size(); ++j)
    {
        std::string n = SafeName(model.columns[j].name, 'c', static_cast<int>(j));
        if (seen.count(n))
        {
            n += "_" + std::to_string(j);
        }
        seen[n] = static_cast<int>(j);
        names[j] = n;
    }
    return names;
}

void
WriteLpFormat(const Model& model, std::ostream& os)
{
    const std::vector<std::string> names = LpColumnNames(model);

    os << "\\ aura5g association model\n";
    os << (model.sense == ObjectiveSense::Maximize ? "Maximize\n" : "Minimize\n");
    LineWrapper w(os);
    w.Start(" obj:");
    bool first = true;
    for (std::size_t j = 0; j < model.columns.size(); ++j)
    {
        if (model.columns[j].cost != 0.0)
        {
            PutTerm(w, model.columns[j].cost, names[j], first);
            first = false;
        }
    }
    if (first)
    {
        w.Put(names.empty() ? "0" : "0 " + names.front());
    }
    w.End();

    os << "Subject To\n";
    for (int i = 0; i < model.NumRows(); ++i)
    {
        const Row& r = model.rows[i];
        w.Start(" " + SafeName(r.name, 'r', i) + ":");
        if (r.index.empty())
        {
            // A constant row still has to be written; 0 * first column keeps it parseable.
            w.Put("0 " + names.front());
        }
        for (std::size_t e = 0; e < r.index.size(); ++e)
        {
            PutTerm(w, r.value[e], names[r.index[e]], e == 0);
        }
        const char* op = r.sense == RowSense::LessEqual ? "<=" : r.sense == RowSense::GreaterEqual ? ">=" : "=";
        w.Put(op);
        w.Put(FormatNumber(r.rhs));
        w.End();
    }

    os << "Bounds\n";
    for (std::size_t j = 0; j < model.columns.size(); ++j)
    {
        const Column& c = model.columns[j];
        if (c.lower == c.upper)
        {
            os << ' ' << names[j] << " = " << FormatNumber(c.lower) << '\n';
            continue;
        }
        if (c.integer && c.lower == 0.0 && c.upper == 1.0)
        {
            continue; // implied by the Binaries section
        }
        std::string lo = std::isinf(c.lower) ? "-inf" : FormatNumber(c.lower);
        std::string up = std::isinf(c.upper) ? "+inf" : FormatNumber(c.upper);
        os << ' ' << lo << " <= " << names[j] << " <= " << up << '\n';
    }

    bool anyBinary = false;
    bool anyGeneral = false;
    for (const auto& c : model.columns)
    {
        bool binary = c.integer && c.lower >= 0.0 && c.upper <= 1.0;
        anyBinary |= binary;
        anyGeneral |= c.integer && !binary;
    }
    if (anyBinary)
    {
        os << "Binaries\n";
        w.Start("");
        for (std::size_t j = 0; j < model.columns.size(); ++j)
        {
            const Column& c = model.columns[j];
            if (c.integer && c.lower >= 0.0 && c.upper <= 1.0)
            {
                w.Put(names[j]);
            }
        }
        w.End();
    }
    if (anyGeneral)
    {
        os << "Generals\n";
        w.Start("");
        for (std::size_t j = 0; j < model.columns.size(); ++j)
        {
            const Column& c = model.columns[j];
            if (c.integer && !(c.lower >= 0.0 && c.upper <= 1.0))
            {
                w.Put(names[j]);
            }
        }
        w.End();
    }
    os << "End\n";
}

} // namespace aura5g::milp
