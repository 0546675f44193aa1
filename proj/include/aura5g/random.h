#ifndef AURA5G_RANDOM_H
#define AURA5G_RANDOM_H

#include <cstdint>
#include <random>

namespace aura5g
{

/// One step of the splitmix64 generator; advances state.
inline std::uint64_t
SplitMix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Mixes a parent seed with a key into a child seed.
inline std::uint64_t
DeriveSeed(std::uint64_t parent, std::uint64_t key)
{
    std::uint64_t s = parent;
    SplitMix64(s);
    s ^= key * 0xd6e8feb86659fd93ull;
    return SplitMix64(s);
}

/**
 * Independent random streams inside one trial.  Keeping them apart means
 * that changing, say, the SC placement law does not shift the user
 * positions, so paired comparisons share every draw they can.
 */
enum class Stream : std::uint64_t
{
    SmallCells = 1,
    EmbbUsers = 2,
    MmtcUsers = 3,
    Hops = 4,
    Channel = 5,
    BackhaulShadowing = 6,
    MmtcRates = 7,
};

using Rng = std::mt19937_64;

inline Rng
MakeRng(std::uint64_t trialSeed, Stream stream)
{
    return Rng(DeriveSeed(trialSeed, static_cast<std::uint64_t>(stream)));
}

} // namespace aura5g

#endif
