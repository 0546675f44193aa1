#ifndef AURA5G_RADIO_H
#define AURA5G_RADIO_H

#include "aura5g/random.h"
#include "aura5g/topology.h"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace aura5g
{

inline constexpr double kSpeedOfLight = 3e8;

/// Close-in reference pathloss parameters for one (cell kind, LOS state).
struct CiParams
{
    double exponent;
    double sigmaDb;
};

struct ChannelParams
{
    CiParams scLos{2.1, 4.4};
    CiParams scNlos{3.2, 8.0};
    CiParams mcLos{2.0, 2.4};
    CiParams mcNlos{2.9, 5.7};

    double mcFrequencyGHz = 3.55;
    double scFrequencyGHz = 27.0;
    double backhaulFrequencyGHz = 73.0;

    double mcTxPowerDbm = 49.0;
    double scTxPowerDbm = 23.0;
    double mcTxGainDbi = 17.0;
    double scTxGainDbi = 30.0;
    double ueRxGainScDbi = 14.0;
    double ueRxGainMcDbi = 0.0;
    double noiseDensityDbmHz = -174.0;
    double hpbwDeg = 45.0;
    /// Gain of SC interferers outside the receive lobe; empty means they are dropped.
    std::optional<double> sideLobeDbi;

    double scCarrierHz = 1e9;
    double mcCarrierHz = 80e6;

    double backhaulBandwidthHz = 1e9;
    double backhaulTxPowerDbm = 49.0;
    double backhaulTxGainDbi = 30.0;
    double backhaulRxGainDbi = 30.0;

    std::vector<double> scOptionsHz{50e6, 100e6, 200e6};
    std::vector<double> mcOptionsHz{1.5e6, 3e6, 5e6, 10e6, 20e6};

    /// Throws DomainError on a non-positive exponent or negative sigma.
    void Validate() const;
    const CiParams& Ci(CellKind kind, bool los) const;
    double FrequencyGHz(CellKind kind) const;
    double TxPowerDbm(CellKind kind) const;
    double TxGainDbi(CellKind kind) const;
    double CarrierHz(CellKind kind) const;
    const std::vector<double>& OptionsHz(CellKind kind) const;
};

enum class Regime
{
    Beamformed,
    InterferenceLimited
};

/// Free-space loss at the 1 m reference distance, dB.
double Fspl(double frequencyGHz);

/**
 * LOS probability for a ground distance.  The SC law uses an 18 m / 36 m
 * decay; the MC law uses 18 m / 63 m with a UE-height correction that is
 * zero up to 13 m.  Throws DomainError for negative distance or, for MCs,
 * UE heights outside [1.5, 23] m.
 */
double LosProbability(double d2d, CellKind kind, double ueHeight);

/// FSPL(1 m) + 10 n log10(d) + shadow.  Throws DomainError for d < 1 m.
double Pathloss(double frequencyGHz, double d3d, const CiParams& ci, double shadowDb);

double DbmToMw(double dbm);
double DbToLinear(double db);
double LinearToDb(double lin);
double NoiseDbm(const ChannelParams& params, double bandwidthHz);

/**
 * Per-trial channel state for every (eMBB user, AP) pair.  LOS and the
 * standard-normal shadow variate are drawn once and reused by both
 * regimes, so regime comparisons see identical propagation.
 */
struct ChannelDraws
{
    int nUsers = 0;
    int nAps = 0;
    std::vector<std::uint8_t> los;
    std::vector<double> shadowZ;

    bool Los(int i, int j) const { return los[i * nAps + j] != 0; }
    double Z(int i, int j) const { return shadowZ[i * nAps + j]; }
};

ChannelDraws DrawChannel(const Topology& topo, const ChannelParams& params, Rng& rng);

/// Pathloss in dB for every (eMBB user, AP) pair.
Eigen::MatrixXd PathlossMatrix(const Topology& topo, const ChannelParams& params, const ChannelDraws& draws);

/// Omnidirectional SINR (dB); snrDb receives the matching SNR.
Eigen::MatrixXd ComputeSinrOmni(const Topology& topo,
                                const ChannelParams& params,
                                const ChannelDraws& draws,
                                Eigen::MatrixXd* snrDb = nullptr);

/// SC band with UE receive beamforming toward the candidate SC; MC band as omni.
Eigen::MatrixXd ComputeSinrBeam(const Topology& topo,
                                const ChannelParams& params,
                                const ChannelDraws& draws,
                                Eigen::MatrixXd* snrDb = nullptr);

/// Shannon capacity of one SC-MC link sharing the backhaul band with sharing-1 other SCs.
double WirelessBackhaulCapacity(double d3d, int sharing, const ChannelParams& params, double shadowZ);

/// Capacity per SC (0 for wired SCs), one shadow draw per wireless link.
std::vector<double> WirelessBackhaulCapacities(const Topology& topo, const ChannelParams& params, Rng& rng);

/// Writes wireless capacities into the topology's backhaul records.
void ApplyWirelessBackhaul(Topology& topo, const std::vector<double>& capacityPerSc);

/**
 * SNR, SINR and the rate table for one regime.  Users are the eMBB users
 * in topology order; APs use the topology's index space.
 */
struct RadioEnvironment
{
    Regime regime = Regime::Beamformed;
    Eigen::MatrixXd snrDb;
    Eigen::MatrixXd sinrDb;
    /// log2(1 + SINR), bits/s/Hz.
    Eigen::MatrixXd spectralEfficiency;
    std::vector<std::vector<double>> optionsHz; ///< per AP
    std::vector<double> carrierHz;              ///< per AP

    int NumUsers() const { return static_cast<int>(sinrDb.rows()); }
    int NumAps() const { return static_cast<int>(sinrDb.cols()); }
    /// V_ijk in bps.
    double Rate(int i, int j, int k) const { return optionsHz[j][k] * spectralEfficiency(i, j); }
};

RadioEnvironment BuildRadioEnvironment(const Topology& topo,
                                       const ChannelParams& params,
                                       const ChannelDraws& draws,
                                       Regime regime);

/// log2(1 + 10^(sinrDb/10)) elementwise.
Eigen::MatrixXd SpectralEfficiency(const Eigen::MatrixXd& sinrDb);

void WriteMatrixCsv(const Eigen::MatrixXd& m, std::ostream& os);

} // namespace aura5g

#endif
