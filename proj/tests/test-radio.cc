#include "aura5g/errors.h"
#include "aura5g/radio.h"

#include "doctest.h"

#include <cmath>
#include <sstream>

using namespace aura5g;

namespace
{

// One MC at the origin, SCs at the given points, one user per given position.
Topology
HandTopology(const std::vector<Point>& scs, const std::vector<Point>& users)
{
    Topology t;
    t.mcs.push_back({{0, 0}, 25.0});
    for (const Point& p : scs)
    {
        t.scs.push_back({p, 10.0, 0, BackhaulKind::Wired});
    }
    for (const Point& p : users)
    {
        t.users.push_back({p, 1.5});
    }
    t.backhaul.assign(t.NumAps(), BackhaulLink{1, 1.0, 1e9});
    return t;
}

ChannelDraws
AllLos(const Topology& t)
{
    ChannelDraws d;
    d.nUsers = t.NumEmbb();
    d.nAps = t.NumAps();
    d.los.assign(static_cast<std::size_t>(d.nUsers) * d.nAps, 1);
    d.shadowZ.assign(d.los.size(), 0.0);
    return d;
}

} // namespace

TEST_CASE("free-space reference loss")
{
    // 20 log10(4 pi f / c) at 1 m
    CHECK(std::abs(Fspl(27.0) - 61.07) <= 0.01);
    CHECK(std::abs(Fspl(3.55) - 43.45) <= 0.01);
    CHECK(std::abs(Fspl(73.0) - 69.71) <= 0.01);
    CHECK_THROWS_AS(Fspl(0.0), DomainError);
}

TEST_CASE("SC LOS probability")
{
    for (double d : {0.0, 1.0, 10.0, 18.0})
    {
        CHECK(LosProbability(d, CellKind::Small, 1.5) == 1.0);
        CHECK(LosProbability(d, CellKind::Macro, 1.5) == 1.0);
    }
    // 18/36 + e^-1 (1 - 18/36)
    CHECK(std::abs(LosProbability(36.0, CellKind::Small, 1.5) - 0.68394) <= 1e-4);
    double prev = 1.0;
    for (double d = 19; d < 400; d += 7)
    {
        double p = LosProbability(d, CellKind::Small, 1.5);
        CHECK(p < prev);
        CHECK(p > 0.0);
        prev = p;
    }
}

TEST_CASE("MC LOS probability and its height range")
{
    // 18/100 + e^(-100/63) (1 - 0.18) with no height correction at 1.5 m
    CHECK(LosProbability(100.0, CellKind::Macro, 1.5) == doctest::Approx(0.18 + std::exp(-100.0 / 63.0) * 0.82));
    CHECK(LosProbability(100.0, CellKind::Macro, 13.0) == LosProbability(100.0, CellKind::Macro, 1.5));
    CHECK(LosProbability(100.0, CellKind::Macro, 20.0) > LosProbability(100.0, CellKind::Macro, 1.5));
    CHECK(LosProbability(100.0, CellKind::Macro, 23.0) <= 1.0);
    CHECK_THROWS_AS(LosProbability(100.0, CellKind::Macro, 30.0), DomainError);
    CHECK_THROWS_AS(LosProbability(100.0, CellKind::Macro, 1.0), DomainError);
    CHECK_THROWS_AS(LosProbability(-1.0, CellKind::Small, 1.5), DomainError);
}

TEST_CASE("close-in pathloss")
{
    ChannelParams p;
    // 61.07 + 10 * 2.1 * log10(100)
    CHECK(std::abs(Pathloss(27.0, 100.0, p.scLos, 0.0) - 103.07) <= 0.01);
    CHECK(Pathloss(27.0, 100.0, p.scLos, 4.0) == doctest::Approx(Pathloss(27.0, 100.0, p.scLos, 0.0) + 4.0));
    CHECK(Pathloss(27.0, 1.0, p.scNlos, 0.0) == doctest::Approx(Fspl(27.0)));
    CHECK_THROWS_AS(Pathloss(27.0, 0.5, p.scLos, 0.0), DomainError);
}

TEST_CASE("channel parameters are validated")
{
    ChannelParams p;
    CHECK_NOTHROW(p.Validate());
    p.scNlos.sigmaDb = -1;
    CHECK_THROWS_AS(p.Validate(), DomainError);
    p = ChannelParams{};
    p.mcLos.exponent = 0;
    CHECK_THROWS_AS(p.Validate(), DomainError);
}

TEST_CASE("a lone SC link gains exactly the UE beam gain")
{
    Topology t = HandTopology({{100, 0}}, {{150, 0}});
    ChannelParams p;
    ChannelDraws d = AllLos(t);
    Eigen::MatrixXd snrOmni, snrBeam;
    Eigen::MatrixXd omni = ComputeSinrOmni(t, p, d, &snrOmni);
    Eigen::MatrixXd beam = ComputeSinrBeam(t, p, d, &snrBeam);
    CHECK(snrBeam(0, 1) - snrOmni(0, 1) == doctest::Approx(14.0));
    CHECK(beam(0, 1) - omni(0, 1) == doctest::Approx(14.0));
    CHECK(beam(0, 0) == doctest::Approx(omni(0, 0)));

    // SC SNR by hand: 23 dBm + 30 dBi - PL - (-174 + 90)
    double d3 = std::sqrt(50.0 * 50.0 + 8.5 * 8.5);
    double pl = Fspl(27.0) + 21.0 * std::log10(d3);
    CHECK(snrOmni(0, 1) == doctest::Approx(23.0 + 30.0 - pl + 84.0));
}

TEST_CASE("two equidistant SCs on opposite sides")
{
    // omni: equal powers give SINR just under 0 dB; the beam rejects the back SC entirely
    Topology t = HandTopology({{100, 0}, {200, 0}}, {{150, 0}});
    ChannelParams p;
    ChannelDraws d = AllLos(t);
    Eigen::MatrixXd snrBeam;
    Eigen::MatrixXd omni = ComputeSinrOmni(t, p, d);
    Eigen::MatrixXd beam = ComputeSinrBeam(t, p, d, &snrBeam);
    CHECK(omni(0, 1) < 0.0);
    CHECK(omni(0, 1) > -1e-3);
    CHECK(omni(0, 1) == doctest::Approx(omni(0, 2)));
    CHECK(beam(0, 1) == doctest::Approx(snrBeam(0, 1)));

    // a side-lobe gain brings the back SC in at that gain
    p.sideLobeDbi = -10.0;
    Eigen::MatrixXd side = ComputeSinrBeam(t, p, d, &snrBeam);
    CHECK(side(0, 1) == doctest::Approx(24.0).epsilon(1e-3));
}

TEST_CASE("SINR never exceeds SNR and the beam never hurts")
{
    TopologyParams tp;
    tp.nEmbb = 25;
    Topology t = GenerateTopology(tp, 123);
    ChannelParams p;
    Rng rng(8);
    ChannelDraws d = DrawChannel(t, p, rng);
    Eigen::MatrixXd snrOmni, snrBeam;
    Eigen::MatrixXd omni = ComputeSinrOmni(t, p, d, &snrOmni);
    Eigen::MatrixXd beam = ComputeSinrBeam(t, p, d, &snrBeam);
    for (int i = 0; i < omni.rows(); ++i)
    {
        for (int j = 0; j < omni.cols(); ++j)
        {
            CHECK(omni(i, j) <= snrOmni(i, j) + 1e-12);
            CHECK(beam(i, j) <= snrBeam(i, j) + 1e-12);
            CHECK(beam(i, j) >= omni(i, j) - 1e-9);
        }
    }
}

TEST_CASE("draws are reproducible and shared by both regimes")
{
    TopologyParams tp;
    tp.nEmbb = 10;
    Topology t = GenerateTopology(tp, 4);
    ChannelParams p;
    Rng a(99), b(99);
    ChannelDraws da = DrawChannel(t, p, a), db = DrawChannel(t, p, b);
    CHECK(da.los == db.los);
    CHECK(da.shadowZ == db.shadowZ);
    RadioEnvironment beam = BuildRadioEnvironment(t, p, da, Regime::Beamformed);
    RadioEnvironment omni = BuildRadioEnvironment(t, p, da, Regime::InterferenceLimited);
    CHECK(beam.snrDb.col(0).isApprox(omni.snrDb.col(0)));
}

TEST_CASE("wireless backhaul capacity")
{
    ChannelParams p;
    auto byHand = [&](double d3, int sharing, double z) {
        double w = 1e9 / sharing;
        double pl = Fspl(73.0) + 20.0 * std::log10(d3) + 2.4 * z;
        double snrDb = 49.0 + 30.0 + 30.0 - pl - (-174.0 + 10.0 * std::log10(w));
        return w * std::log2(1.0 + std::pow(10.0, snrDb / 10.0));
    };
    CHECK(WirelessBackhaulCapacity(20.0, 1, p, 0.0) == doctest::Approx(byHand(20.0, 1, 0.0)));
    CHECK(WirelessBackhaulCapacity(24.0, 3, p, -1.2) == doctest::Approx(byHand(24.0, 3, -1.2)));
    // tens of Gbps for a 20 m unshared link
    CHECK(WirelessBackhaulCapacity(20.0, 1, p, 0.0) > 3e10);
    CHECK(WirelessBackhaulCapacity(20.0, 2, p, 0.0) < WirelessBackhaulCapacity(20.0, 1, p, 0.0));
    CHECK_THROWS_AS(WirelessBackhaulCapacity(20.0, 0, p, 0.0), DomainError);

    Topology t = HandTopology({{10, 0}, {0, 15}, {100, 0}}, {});
    t.scs[0].backhaul = BackhaulKind::Wireless;
    t.scs[1].backhaul = BackhaulKind::Wireless;
    Rng rng(1);
    std::vector<double> cap = WirelessBackhaulCapacities(t, p, rng);
    REQUIRE(cap.size() == 3);
    CHECK(cap[0] > 0.0);
    CHECK(cap[1] > 0.0);
    CHECK(cap[2] == 0.0);
    ApplyWirelessBackhaul(t, cap);
    CHECK(t.backhaul[1].capacityBps == cap[0]);
    CHECK(t.backhaul[3].capacityBps == 1e9);
    CHECK_THROWS_AS(ApplyWirelessBackhaul(t, {1.0}), InconsistentInput);
}

TEST_CASE("rate table is option width times spectral efficiency")
{
    Topology t = HandTopology({{100, 0}}, {{150, 0}, {20, 20}});
    ChannelParams p;
    RadioEnvironment env = BuildRadioEnvironment(t, p, AllLos(t), Regime::Beamformed);
    REQUIRE(env.optionsHz.size() == 2);
    CHECK(env.optionsHz[0] == p.mcOptionsHz);
    CHECK(env.optionsHz[1] == p.scOptionsHz);
    CHECK(env.carrierHz[0] == 80e6);
    CHECK(env.carrierHz[1] == 1e9);
    for (int i = 0; i < 2; ++i)
    {
        for (int j = 0; j < 2; ++j)
        {
            double se = std::log2(1.0 + std::pow(10.0, env.sinrDb(i, j) / 10.0));
            CHECK(env.spectralEfficiency(i, j) == doctest::Approx(se));
            CHECK(env.Rate(i, j, 0) == doctest::Approx(env.optionsHz[j][0] * se));
        }
    }
    std::ostringstream os;
    WriteMatrixCsv(env.sinrDb, os);
    const std::string text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}
