#include "aura5g/external-solver.h"

#include "aura5g/errors.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

namespace aura5g::milp
{

namespace fs = std::filesystem;

namespace
{

std::string
Quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s)
    {
        if (c == '\'')
        {
            out += "'\\''";
        }
        else
        {
            out += c;
        }
    }
    return out + "'";
}

} // namespace

SolveOutcome
ParseCbcSolution(const Model& model, std::istream& is)
{
    SolveOutcome out;
    std::string head;
    if (!std::getline(is, head))
    {
        throw ParseError("empty solution file");
    }
    if (head.rfind("Optimal", 0) == 0)
    {
        out.status = SolveStatus::Optimal;
    }
    else if (head.find("nfeasible") != std::string::npos)
    {
        out.status = SolveStatus::Infeasible;
    }
    else if (head.find("nbounded") != std::string::npos)
    {
        out.status = SolveStatus::Unbounded;
    }
    else if (head.rfind("Stopped", 0) == 0)
    {
        out.status = SolveStatus::TimeLimit;
    }
    else
    {
        throw ParseError("unrecognized status line: " + head);
    }
    if (out.status == SolveStatus::Infeasible || out.status == SolveStatus::Unbounded)
    {
        return out;
    }

    const std::vector<std::string> names = LpColumnNames(model);
    std::map<std::string, int> byName;
    for (std::size_t j = 0; j < names.size(); ++j)
    {
        byName[names[j]] = static_cast<int>(j);
    }
    std::vector<double> x(model.NumColumns(), 0.0);
    bool any = false;
    std::string line;
    while (std::getline(is, line))
    {
        if (line.rfind("**", 0) == 0)
        {
            line = line.substr(2);
        }
        std::istringstream ls(line);
        long index;
        std::string name;
        double value;
        if (!(ls >> index >> name >> value))
        {
            if (line.find_first_not_of(" \t\r") == std::string::npos)
            {
                continue;
            }
            throw ParseError("bad solution line: " + line);
        }
        auto it = byName.find(name);
        if (it == byName.end())
        {
            throw ParseError("unknown column in solution: " + name);
        }
        x[it->second] = value;
        any = true;
    }
    if (!any && model.NumColumns() > 0)
    {
        if (out.status == SolveStatus::TimeLimit)
        {
            return out;
        }
        throw ParseError("solution file lists no columns");
    }
    for (int j = 0; j < model.NumColumns(); ++j)
    {
        if (model.columns[j].integer)
        {
            x[j] = std::round(x[j]);
        }
    }
    if (!CheckFeasibility(model, x).Feasible(1e-6))
    {
        throw ParseError("external solution violates the model");
    }
    out.objective = model.Objective(x);
    out.bestBound = out.objective;
    out.gap = 0.0;
    out.incumbent = std::move(x);
    return out;
}

SolveOutcome
SolveExternal(const Model& model, const std::string& executable, double timeLimitSeconds)
{
    if (executable.empty() || !fs::exists(executable) || access(executable.c_str(), X_OK) != 0)
    {
        throw AdapterUnavailable("external solver not found or not executable: " + executable);
    }
    std::string templ = (fs::temp_directory_path() / "aura5g-XXXXXX").string();
    if (!mkdtemp(templ.data()))
    {
        throw IoError("cannot create a scratch directory");
    }
    const fs::path dir(templ);
    const fs::path lp = dir / "model.lp";
    const fs::path sol = dir / "solution.txt";
    {
        std::ofstream os(lp);
        WriteLpFormat(model, os);
        if (!os)
        {
            throw IoError("cannot write " + lp.string());
        }
    }
    const auto start = std::chrono::steady_clock::now();
    std::string cmd = Quote(executable) + " " + Quote(lp.string()) + " " + Quote(sol.string()) + " " +
                      std::to_string(timeLimitSeconds) + " > " + Quote((dir / "solver.log").string()) + " 2>&1";
    int rc = std::system(cmd.c_str());
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ifstream is(sol);
    if (rc != 0 || !is)
    {
        std::error_code ec;
        fs::remove_all(dir, ec);
        throw AdapterUnavailable("external solver failed (exit status " + std::to_string(rc) + ")");
    }
    SolveOutcome out;
    try
    {
        out = ParseCbcSolution(model, is);
    }
    catch (...)
    {
        std::error_code ec;
        fs::remove_all(dir, ec);
        throw;
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    out.wallSeconds = seconds;
    return out;
}

} // namespace aura5g::milp
