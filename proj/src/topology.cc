#include "aura5g/topology.h"

#include "aura5g/errors.h"

#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace aura5g
{

double
Distance2d(const Point& a, const Point& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double
Distance3d(const Point& a, double ha, const Point& b, double hb)
{
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (ha - hb) * (ha - hb));
}

const Point&
Topology::ApPosition(int ap) const
{
    return IsMacro(ap) ? mcs[ap].position : scs[ap - NumMcs()].position;
}

double
Topology::ApHeight(int ap) const
{
    return IsMacro(ap) ? mcs[ap].height : scs[ap - NumMcs()].height;
}

int
Topology::ParentMc(int ap) const
{
    return IsMacro(ap) ? ap : scs[ap - NumMcs()].parentMc;
}

double
Topology::PathLatencyMs(int ap) const
{
    const BackhaulLink& link = backhaul.at(ap);
    return link.hops * link.perHopDelayMs;
}

std::vector<int>
Topology::EmbbUsers() const
{
    std::vector<int> out;
    for (std::size_t u = 0; u < users.size(); ++u)
    {
        if (users[u].service == Service::Embb)
        {
            out.push_back(static_cast<int>(u));
        }
    }
    return out;
}

int
Topology::NumEmbb() const
{
    int n = 0;
    for (const auto& u : users)
    {
        n += u.service == Service::Embb;
    }
    return n;
}

std::vector<Point>
GenerateMacroGrid(double width, double height, double isd)
{
    if (isd <= 0.0)
    {
        throw AreaTooSmall("inter-site distance must be positive");
    }
    const int nx = static_cast<int>(std::floor(width / isd + 1e-9));
    const int ny = static_cast<int>(std::floor(height / isd + 1e-9));
    if (nx < 1 || ny < 1)
    {
        throw AreaTooSmall("no macro cell fits in the area");
    }
    std::vector<Point> out;
    for (int r = 0; r < ny; ++r)
    {
        for (int c = 0; c < nx; ++c)
        {
            out.push_back({isd / 2 + c * isd, isd / 2 + r * isd});
        }
    }
    return out;
}

int
DrawSmallCellCount(const TopologyParams& params, Rng& rng)
{
    std::uniform_int_distribution<int> d(params.scCountMin, params.scCountMax);
    return d(rng);
}

std::vector<Point>
GenerateSmallCells(const Point& mc, int count, const TopologyParams& params, Rng& rng)
{
    const double half = params.isd / 2;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Point> pts(count);
    for (int attempt = 0; attempt < params.resampleLimit; ++attempt)
    {
        for (Point& p : pts)
        {
            if (params.geometry == Geometry::Circular)
            {
                double r = half * std::sqrt(unit(rng));
                double a = 2 * M_PI * unit(rng);
                p = {mc.x + r * std::cos(a), mc.y + r * std::sin(a)};
            }
            else
            {
                p = {mc.x - half + 2 * half * unit(rng), mc.y - half + 2 * half * unit(rng)};
            }
        }
        bool ok = true;
        for (int a = 0; a < count && ok; ++a)
        {
            for (int b = a + 1; b < count; ++b)
            {
                if (Distance2d(pts[a], pts[b]) < params.scMinSeparation)
                {
                    ok = false;
                    break;
                }
            }
        }
        if (ok)
        {
            return pts;
        }
    }
    throw ResampleLimit("could not place " + std::to_string(count) + " small cells " +
                        std::to_string(params.scMinSeparation) + " m apart");
}

std::vector<UserEquipment>
GenerateUsers(const TopologyParams& params, const std::vector<Point>& mcs, Rng& embbRng, Rng& mmtcRng)
{
    std::vector<UserEquipment> users;
    std::uniform_real_distribution<double> ux(0.0, params.areaWidth), uy(0.0, params.areaHeight);
    for (int i = 0; i < params.nEmbb; ++i)
    {
        UserEquipment u;
        u.position.x = ux(embbRng);
        u.position.y = uy(embbRng);
        u.height = params.ueHeight;
        users.push_back(u);
    }
    std::uniform_real_distribution<double> cell(-params.isd / 2, params.isd / 2);
    for (std::size_t m = 0; m < mcs.size(); ++m)
    {
        for (int k = 0; k < params.mmtcPerMc; ++k)
        {
            UserEquipment u;
            u.position.x = mcs[m].x + cell(mmtcRng);
            u.position.y = mcs[m].y + cell(mmtcRng);
            u.height = params.ueHeight;
            u.service = Service::Mmtc;
            u.homeMc = static_cast<int>(m);
            users.push_back(u);
        }
    }
    return users;
}

void
BuildBackhaul(Topology& topo, const TopologyParams& params, Rng& rng)
{
    std::uniform_int_distribution<int> hops(params.mcHopsMin, params.mcHopsMax);
    topo.backhaul.assign(topo.NumAps(), BackhaulLink{});
    for (int m = 0; m < topo.NumMcs(); ++m)
    {
        BackhaulLink& l = topo.backhaul[m];
        l.hops = hops(rng);
        l.perHopDelayMs = params.perHopDelayMs;
        l.capacityBps = params.mcCapacityBps;
    }
    for (int s = 0; s < topo.NumScs(); ++s)
    {
        SmallCell& sc = topo.scs[s];
        const MacroCell& mc = topo.mcs[sc.parentMc];
        sc.backhaul = Distance2d(sc.position, mc.position) <= params.wirelessBreakpoint ? BackhaulKind::Wireless
                                                                                        : BackhaulKind::Wired;
        BackhaulLink& l = topo.backhaul[topo.NumMcs() + s];
        l.hops = topo.backhaul[sc.parentMc].hops + 1;
        l.perHopDelayMs = params.perHopDelayMs;
        // wireless capacities depend on the 73 GHz link budget and are filled by the radio stage
        l.capacityBps = sc.backhaul == BackhaulKind::Wired ? params.wiredScCapacityBps : 0.0;
    }
}

Topology
GenerateTopology(const TopologyParams& params, std::uint64_t trialSeed)
{
    Topology topo;
    topo.areaWidth = params.areaWidth;
    topo.areaHeight = params.areaHeight;
    topo.isd = params.isd;
    std::vector<Point> grid = GenerateMacroGrid(params.areaWidth, params.areaHeight, params.isd);
    for (const Point& p : grid)
    {
        topo.mcs.push_back({p, params.mcHeight});
    }

    Rng scRng = MakeRng(trialSeed, Stream::SmallCells);
    for (int m = 0; m < topo.NumMcs(); ++m)
    {
        int count = DrawSmallCellCount(params, scRng);
        for (const Point& p : GenerateSmallCells(grid[m], count, params, scRng))
        {
            SmallCell sc;
            sc.position = p;
            sc.height = params.scHeight;
            sc.parentMc = m;
            topo.scs.push_back(sc);
        }
    }

    Rng embbRng = MakeRng(trialSeed, Stream::EmbbUsers);
    Rng mmtcRng = MakeRng(trialSeed, Stream::MmtcUsers);
    topo.users = GenerateUsers(params, grid, embbRng, mmtcRng);

    Rng hopRng = MakeRng(trialSeed, Stream::Hops);
    BuildBackhaul(topo, params, hopRng);
    return topo;
}

void
WriteTopologyJson(const Topology& topo, std::ostream& os)
{
    using nlohmann::json;
    json j;
    j["area"] = {topo.areaWidth, topo.areaHeight};
    j["isd"] = topo.isd;
    for (const auto& m : topo.mcs)
    {
        j["mcs"].push_back({{"x", m.position.x}, {"y", m.position.y}, {"height", m.height}});
    }
    for (const auto& s : topo.scs)
    {
        j["scs"].push_back({{"x", s.position.x},
                            {"y", s.position.y},
                            {"height", s.height},
                            {"parent_mc", s.parentMc},
                            {"backhaul", s.backhaul == BackhaulKind::Wired ? "wired" : "wireless"}});
    }
    for (const auto& u : topo.users)
    {
        j["users"].push_back({{"x", u.position.x},
                              {"y", u.position.y},
                              {"height", u.height},
                              {"service", u.service == Service::Embb ? "embb" : "mmtc"},
                              {"home_mc", u.homeMc}});
    }
    for (const auto& l : topo.backhaul)
    {
        j["backhaul"].push_back({{"hops", l.hops}, {"delay_ms", l.perHopDelayMs}, {"capacity_bps", l.capacityBps}});
    }
    os << j.dump(1) << '\n';
}

Topology
ReadTopologyJson(std::istream& is)
{
    using nlohmann::json;
    json j;
    try
    {
        is >> j;
    }
    catch (const json::exception& e)
    {
        throw ParseError(std::string("topology json: ") + e.what());
    }
    Topology topo;
    topo.areaWidth = j.at("area").at(0);
    topo.areaHeight = j.at("area").at(1);
    topo.isd = j.at("isd");
    for (const auto& m : j.value("mcs", json::array()))
    {
        topo.mcs.push_back({{m.at("x"), m.at("y")}, m.at("height")});
    }
    for (const auto& s : j.value("scs", json::array()))
    {
        SmallCell sc;
        sc.position = {s.at("x"), s.at("y")};
        sc.height = s.at("height");
        sc.parentMc = s.at("parent_mc");
        sc.backhaul = s.at("backhaul") == "wired" ? BackhaulKind::Wired : BackhaulKind::Wireless;
        topo.scs.push_back(sc);
    }
    for (const auto& u : j.value("users", json::array()))
    {
        UserEquipment ue;
        ue.position = {u.at("x"), u.at("y")};
        ue.height = u.at("height");
        ue.service = u.at("service") == "embb" ? Service::Embb : Service::Mmtc;
        ue.homeMc = u.at("home_mc");
        topo.users.push_back(ue);
    }
    for (const auto& l : j.value("backhaul", json::array()))
    {
        topo.backhaul.push_back({l.at("hops"), l.at("delay_ms"), l.at("capacity_bps")});
    }
    if (static_cast<int>(topo.backhaul.size()) != topo.NumAps())
    {
        throw ParseError("topology json: backhaul list does not match the AP count");
    }
    return topo;
}

} // namespace aura5g
