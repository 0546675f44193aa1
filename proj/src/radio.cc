#include "aura5g/radio.h"

#include "aura5g/errors.h"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace aura5g
{

void
ChannelParams::Validate() const
{
    for (const CiParams* ci : {&scLos, &scNlos, &mcLos, &mcNlos})
    {
        if (!(ci->exponent > 0.0) || !(ci->sigmaDb >= 0.0))
        {
            throw DomainError("pathloss exponent must be positive and sigma non-negative");
        }
    }
    if (scOptionsHz.empty() || mcOptionsHz.empty())
    {
        throw DomainError("bandwidth option lists must not be empty");
    }
}

const CiParams&
ChannelParams::Ci(CellKind kind, bool los) const
{
    if (kind == CellKind::Macro)
    {
        return los ? mcLos : mcNlos;
    }
    return los ? scLos : scNlos;
}

double
ChannelParams::FrequencyGHz(CellKind kind) const
{
    return kind == CellKind::Macro ? mcFrequencyGHz : scFrequencyGHz;
}

double
ChannelParams::TxPowerDbm(CellKind kind) const
{
    return kind == CellKind::Macro ? mcTxPowerDbm : scTxPowerDbm;
}

double
ChannelParams::TxGainDbi(CellKind kind) const
{
    return kind == CellKind::Macro ? mcTxGainDbi : scTxGainDbi;
}

double
ChannelParams::CarrierHz(CellKind kind) const
{
    return kind == CellKind::Macro ? mcCarrierHz : scCarrierHz;
}

const std::vector<double>&
ChannelParams::OptionsHz(CellKind kind) const
{
    return kind == CellKind::Macro ? mcOptionsHz : scOptionsHz;
}

double
Fspl(double frequencyGHz)
{
    if (!(frequencyGHz > 0.0))
    {
        throw DomainError("frequency must be positive");
    }
    const double d0 = 1.0;
    return 20.0 * std::log10(4.0 * M_PI * frequencyGHz * 1e9 * d0 / kSpeedOfLight);
}

double
LosProbability(double d2d, CellKind kind, double ueHeight)
{
    if (d2d < 0.0)
    {
        throw DomainError("negative distance");
    }
    if (kind == CellKind::Macro && (ueHeight > 23.0 || ueHeight < 1.5))
    {
        throw DomainError("UE height outside the macro LOS model range [1.5, 23] m");
    }
    if (d2d <= 18.0)
    {
        return 1.0;
    }
    if (kind == CellKind::Small)
    {
        return 18.0 / d2d + std::exp(-d2d / 36.0) * (1.0 - 18.0 / d2d);
    }
    double c = ueHeight <= 13.0 ? 0.0 : std::pow((ueHeight - 13.0) / 10.0, 1.5);
    double base = 18.0 / d2d + std::exp(-d2d / 63.0) * (1.0 - 18.0 / d2d);
    double corr = 1.0 + c * 1.25 * std::pow(d2d / 100.0, 2) * std::exp(-d2d / 150.0);
    return std::min(1.0, base * corr);
}

double
Pathloss(double frequencyGHz, double d3d, const CiParams& ci, double shadowDb)
{
    if (d3d < 1.0)
    {
        throw DomainError("distance below the 1 m reference");
    }
    return Fspl(frequencyGHz) + 10.0 * ci.exponent * std::log10(d3d) + shadowDb;
}

double
DbmToMw(double dbm)
{
    return std::pow(10.0, dbm / 10.0);
}

double
DbToLinear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double
LinearToDb(double lin)
{
    return 10.0 * std::log10(lin);
}

double
NoiseDbm(const ChannelParams& params, double bandwidthHz)
{
    return params.noiseDensityDbmHz + 10.0 * std::log10(bandwidthHz);
}

ChannelDraws
DrawChannel(const Topology& topo, const ChannelParams& params, Rng& rng)
{
    (void)params;
    const std::vector<int> embb = topo.EmbbUsers();
    ChannelDraws d;
    d.nUsers = static_cast<int>(embb.size());
    d.nAps = topo.NumAps();
    d.los.resize(static_cast<std::size_t>(d.nUsers) * d.nAps);
    d.shadowZ.resize(d.los.size());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < d.nUsers; ++i)
    {
        const UserEquipment& ue = topo.users[embb[i]];
        for (int j = 0; j < d.nAps; ++j)
        {
            double p = LosProbability(Distance2d(ue.position, topo.ApPosition(j)), topo.Kind(j), ue.height);
            d.los[i * d.nAps + j] = unit(rng) < p;
            d.shadowZ[i * d.nAps + j] = normal(rng);
        }
    }
    return d;
}

Eigen::MatrixXd
PathlossMatrix(const Topology& topo, const ChannelParams& params, const ChannelDraws& draws)
{
    const std::vector<int> embb = topo.EmbbUsers();
    if (static_cast<int>(embb.size()) != draws.nUsers || topo.NumAps() != draws.nAps)
    {
        throw InconsistentInput("channel draws do not match the topology");
    }
    Eigen::MatrixXd pl(draws.nUsers, draws.nAps);
    for (int i = 0; i < draws.nUsers; ++i)
    {
        const UserEquipment& ue = topo.users[embb[i]];
        for (int j = 0; j < draws.nAps; ++j)
        {
            const CiParams& ci = params.Ci(topo.Kind(j), draws.Los(i, j));
            double d3d = Distance3d(ue.position, ue.height, topo.ApPosition(j), topo.ApHeight(j));
            pl(i, j) = Pathloss(params.FrequencyGHz(topo.Kind(j)), d3d, ci, ci.sigmaDb * draws.Z(i, j));
        }
    }
    return pl;
}

namespace
{

// Received power in dBm without any UE receive gain.
Eigen::MatrixXd
ReceivedPowerDbm(const Topology& topo, const ChannelParams& params, const ChannelDraws& draws)
{
    Eigen::MatrixXd pl = PathlossMatrix(topo, params, draws);
    Eigen::MatrixXd rx(pl.rows(), pl.cols());
    for (int j = 0; j < pl.cols(); ++j)
    {
        CellKind kind = topo.Kind(j);
        rx.col(j) = (params.TxPowerDbm(kind) + params.TxGainDbi(kind)) - pl.col(j).array();
    }
    return rx;
}

// Smallest angle between the directions from `from` to a and to b, degrees.
double
AngularOffsetDeg(const Point& from, const Point& a, const Point& b)
{
    double ta = std::atan2(a.y - from.y, a.x - from.x);
    double tb = std::atan2(b.y - from.y, b.x - from.x);
    double d = std::abs(ta - tb);
    if (d > M_PI)
    {
        d = 2 * M_PI - d;
    }
    return d * 180.0 / M_PI;
}

// Omni SINR for one band: every other AP of that band interferes at 0 dBi.
void
OmniBand(const Topology& topo,
         const ChannelParams& params,
         const Eigen::MatrixXd& rxDbm,
         CellKind kind,
         double rxGainDbi,
         Eigen::MatrixXd& sinr,
         Eigen::MatrixXd& snr)
{
    const double noiseMw = DbmToMw(NoiseDbm(params, params.CarrierHz(kind)));
    for (int i = 0; i < rxDbm.rows(); ++i)
    {
        double total = 0.0;
        for (int j = 0; j < topo.NumAps(); ++j)
        {
            if (topo.Kind(j) == kind)
            {
                total += DbmToMw(rxDbm(i, j) + rxGainDbi);
            }
        }
        for (int j = 0; j < topo.NumAps(); ++j)
        {
            if (topo.Kind(j) != kind)
            {
                continue;
            }
            double s = DbmToMw(rxDbm(i, j) + rxGainDbi);
            double interference = std::max(0.0, total - s);
            snr(i, j) = LinearToDb(s / noiseMw);
            sinr(i, j) = LinearToDb(s / (noiseMw + interference));
        }
    }
}

} // namespace

Eigen::MatrixXd
ComputeSinrOmni(const Topology& topo, const ChannelParams& params, const ChannelDraws& draws, Eigen::MatrixXd* snrDb)
{
    Eigen::MatrixXd rx = ReceivedPowerDbm(topo, params, draws);
    Eigen::MatrixXd sinr(rx.rows(), rx.cols()), snr(rx.rows(), rx.cols());
    OmniBand(topo, params, rx, CellKind::Macro, 0.0, sinr, snr);
    OmniBand(topo, params, rx, CellKind::Small, 0.0, sinr, snr);
    if (snrDb)
    {
        *snrDb = snr;
    }
    return sinr;
}

Eigen::MatrixXd
ComputeSinrBeam(const Topology& topo, const ChannelParams& params, const ChannelDraws& draws, Eigen::MatrixXd* snrDb)
{
    Eigen::MatrixXd rx = ReceivedPowerDbm(topo, params, draws);
    Eigen::MatrixXd sinr(rx.rows(), rx.cols()), snr(rx.rows(), rx.cols());
    OmniBand(topo, params, rx, CellKind::Macro, params.ueRxGainMcDbi, sinr, snr);

    const std::vector<int> embb = topo.EmbbUsers();
    const double noiseMw = DbmToMw(NoiseDbm(params, params.scCarrierHz));
    const double halfBeam = params.hpbwDeg / 2.0;
    const int first = topo.NumMcs();
    for (int i = 0; i < rx.rows(); ++i)
    {
        const Point& ue = topo.users[embb[i]].position;
        for (int j = first; j < topo.NumAps(); ++j)
        {
            double s = DbmToMw(rx(i, j) + params.ueRxGainScDbi);
            double interference = 0.0;
            for (int l = first; l < topo.NumAps(); ++l)
            {
                if (l == j)
                {
                    continue;
                }
                if (AngularOffsetDeg(ue, topo.ApPosition(j), topo.ApPosition(l)) <= halfBeam)
                {
                    interference += DbmToMw(rx(i, l) + params.ueRxGainScDbi);
                }
                else if (params.sideLobeDbi)
                {
                    interference += DbmToMw(rx(i, l) + *params.sideLobeDbi);
                }
            }
            snr(i, j) = LinearToDb(s / noiseMw);
            sinr(i, j) = LinearToDb(s / (noiseMw + interference));
        }
    }
    if (snrDb)
    {
        *snrDb = snr;
    }
    return sinr;
}

double
WirelessBackhaulCapacity(double d3d, int sharing, const ChannelParams& params, double shadowZ)
{
    if (sharing < 1)
    {
        throw DomainError("backhaul band must be shared by at least one SC");
    }
    const double w = params.backhaulBandwidthHz / sharing;
    double pl = Pathloss(params.backhaulFrequencyGHz, d3d, params.mcLos, params.mcLos.sigmaDb * shadowZ);
    double rxDbm = params.backhaulTxPowerDbm + params.backhaulTxGainDbi + params.backhaulRxGainDbi - pl;
    double snr = DbToLinear(rxDbm - NoiseDbm(params, w));
    return w * std::log2(1.0 + snr);
}

std::vector<double>
WirelessBackhaulCapacities(const Topology& topo, const ChannelParams& params, Rng& rng)
{
    std::vector<int> sharing(topo.NumMcs(), 0);
    for (const SmallCell& sc : topo.scs)
    {
        sharing[sc.parentMc] += sc.backhaul == BackhaulKind::Wireless;
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> cap(topo.NumScs(), 0.0);
    for (int s = 0; s < topo.NumScs(); ++s)
    {
        const SmallCell& sc = topo.scs[s];
        // one variate per SC keeps the stream aligned whatever the link kinds are
        double z = normal(rng);
        if (sc.backhaul != BackhaulKind::Wireless)
        {
            continue;
        }
        const MacroCell& mc = topo.mcs[sc.parentMc];
        double d3d = Distance3d(sc.position, sc.height, mc.position, mc.height);
        cap[s] = WirelessBackhaulCapacity(d3d, sharing[sc.parentMc], params, z);
    }
    return cap;
}

void
ApplyWirelessBackhaul(Topology& topo, const std::vector<double>& capacityPerSc)
{
    if (static_cast<int>(capacityPerSc.size()) != topo.NumScs())
    {
        throw InconsistentInput("capacity list does not match the SC count");
    }
    for (int s = 0; s < topo.NumScs(); ++s)
    {
        if (topo.scs[s].backhaul == BackhaulKind::Wireless)
        {
            topo.backhaul[topo.NumMcs() + s].capacityBps = capacityPerSc[s];
        }
    }
}

Eigen::MatrixXd
SpectralEfficiency(const Eigen::MatrixXd& sinrDb)
{
    return sinrDb.unaryExpr([](double db) { return std::log2(1.0 + std::pow(10.0, db / 10.0)); });
}

RadioEnvironment
BuildRadioEnvironment(const Topology& topo, const ChannelParams& params, const ChannelDraws& draws, Regime regime)
{
    params.Validate();
    RadioEnvironment env;
    env.regime = regime;
    env.sinrDb = regime == Regime::Beamformed ? ComputeSinrBeam(topo, params, draws, &env.snrDb)
                                              : ComputeSinrOmni(topo, params, draws, &env.snrDb);
    env.spectralEfficiency = SpectralEfficiency(env.sinrDb);
    for (int j = 0; j < topo.NumAps(); ++j)
    {
        env.optionsHz.push_back(params.OptionsHz(topo.Kind(j)));
        env.carrierHz.push_back(params.CarrierHz(topo.Kind(j)));
    }
    return env;
}

void
WriteMatrixCsv(const Eigen::MatrixXd& m, std::ostream& os)
{
    os << std::setprecision(10);
    for (int i = 0; i < m.rows(); ++i)
    {
        for (int j = 0; j < m.cols(); ++j)
        {
            os << (j ? "," : "") << m(i, j);
        }
        os << '\n';
    }
}

} // namespace aura5g
