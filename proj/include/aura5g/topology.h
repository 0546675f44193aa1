#ifndef AURA5G_TOPOLOGY_H
#define AURA5G_TOPOLOGY_H

#include "aura5g/random.h"

#include <iosfwd>
#include <vector>

namespace aura5g
{

struct Point
{
    double x = 0.0;
    double y = 0.0;
};

double Distance2d(const Point& a, const Point& b);
double Distance3d(const Point& a, double ha, const Point& b, double hb);

enum class Geometry
{
    Circular,
    Square
};

enum class BackhaulKind
{
    Wired,
    Wireless
};

enum class Service
{
    Embb,
    Mmtc
};

enum class CellKind
{
    Macro,
    Small
};

struct MacroCell
{
    Point position;
    double height = 25.0;
};

struct SmallCell
{
    Point position;
    double height = 10.0;
    int parentMc = -1;
    BackhaulKind backhaul = BackhaulKind::Wired;
};

struct UserEquipment
{
    Point position;
    double height = 1.5;
    Service service = Service::Embb;
    int homeMc = -1; ///< grid-cell MC for mMTC devices, -1 for eMBB
};

/// Link from an AP toward the core.  For an SC this is the SC-MC hop plus the MC path.
struct BackhaulLink
{
    int hops = 1;
    double perHopDelayMs = 1.0;
    double capacityBps = 0.0;
};

struct TopologyParams
{
    double areaWidth = 600.0;
    double areaHeight = 600.0;
    double isd = 200.0;
    Geometry geometry = Geometry::Circular;
    int scCountMin = 3;
    int scCountMax = 10;
    double scMinSeparation = 20.0;
    int resampleLimit = 10000;
    double mcHeight = 25.0;
    double scHeight = 10.0;
    double ueHeight = 1.5;
    int mcHopsMin = 1;
    int mcHopsMax = 4;
    double perHopDelayMs = 1.0;
    double wirelessBreakpoint = 25.0;
    double wiredScCapacityBps = 1e9;
    double mcCapacityBps = 10e9;
    int nEmbb = 150;
    int mmtcPerMc = 0;
};

/**
 * Placement of macro cells, small cells and users plus the backhaul tree.
 *
 * Access points share one index space: MCs occupy [0, NumMcs()) and SCs
 * follow in [NumMcs(), NumAps()).  backhaul is indexed the same way.
 */
class Topology
{
  public:
    double areaWidth = 0.0;
    double areaHeight = 0.0;
    double isd = 0.0;
    std::vector<MacroCell> mcs;
    std::vector<SmallCell> scs;
    std::vector<UserEquipment> users;
    std::vector<BackhaulLink> backhaul;

    int NumMcs() const { return static_cast<int>(mcs.size()); }
    int NumScs() const { return static_cast<int>(scs.size()); }
    int NumAps() const { return NumMcs() + NumScs(); }
    bool IsMacro(int ap) const { return ap < NumMcs(); }
    CellKind Kind(int ap) const { return IsMacro(ap) ? CellKind::Macro : CellKind::Small; }
    const Point& ApPosition(int ap) const;
    double ApHeight(int ap) const;
    /// MC index for an SC, the MC itself for an MC.
    int ParentMc(int ap) const;
    /// Delay from the AP to the core, excluding the radio hop to the user.
    double PathLatencyMs(int ap) const;

    /// Indices into users of the eMBB population, in placement order.
    std::vector<int> EmbbUsers() const;
    int NumEmbb() const;
};

/// MCs on a regular grid with half-ISD margins.  Throws AreaTooSmall when no MC fits.
std::vector<Point> GenerateMacroGrid(double width, double height, double isd);

int DrawSmallCellCount(const TopologyParams& params, Rng& rng);

/**
 * Uniform SC placement around one MC: a disc of radius isd/2 or a square
 * of edge isd.  The whole cluster is redrawn until the minimum separation
 * holds; ResampleLimit is thrown after params.resampleLimit redraws.
 */
std::vector<Point> GenerateSmallCells(const Point& mc, int count, const TopologyParams& params, Rng& rng);

/// eMBB users uniform over the area, mMTC devices uniform inside each MC's grid cell.
std::vector<UserEquipment> GenerateUsers(const TopologyParams& params,
                                         const std::vector<Point>& mcs,
                                         Rng& embbRng,
                                         Rng& mmtcRng);

/// Draws MC hop counts and fills hops, delays and wired capacities.
void BuildBackhaul(Topology& topo, const TopologyParams& params, Rng& rng);

/// Full topology for one trial, each stage drawing from its own stream of trialSeed.
Topology GenerateTopology(const TopologyParams& params, std::uint64_t trialSeed);

void WriteTopologyJson(const Topology& topo, std::ostream& os);
Topology ReadTopologyJson(std::istream& is);

} // namespace aura5g

#endif
