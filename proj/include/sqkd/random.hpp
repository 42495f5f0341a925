#ifndef SQKD_RANDOM_HPP_
#define SQKD_RANDOM_HPP_

#include <cstdint>
#include <random>

#include "sqkd/common.hpp"

namespace sqkd {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Stable seed-splitting rule. Every random stream in a run is derived from
// the master seed, a domain constant and an index (typically the round id),
// so results do not depend on the order in which streams are consumed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t domain, std::uint64_t index);

inline constexpr std::uint64_t kRoundDomain = 1;       // per-round protocol randomness
inline constexpr std::uint64_t kDisclosureDomain = 2;  // SIFT_Z check-sample selection

// Deterministic source of uniform variates. The double construction uses the
// top 53 bits of the engine output directly, so sequences are identical
// across standard library implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform();

    // Uniform bit.
    Bit bit();

    // True with probability p.
    bool bernoulli(double p);

private:
    std::mt19937_64 engine_;
};

}  // namespace sqkd

#endif  // SQKD_RANDOM_HPP_
