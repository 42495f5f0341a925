#include "sqkd/random.hpp"

namespace sqkd {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t domain, std::uint64_t index) {
    return mix64(mix64(master ^ mix64(domain)) ^ index);
}

double RandomStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

Bit RandomStream::bit() {
    return uniform() < 0.5 ? 0 : 1;
}

bool RandomStream::bernoulli(double p) {
    return uniform() < p;
}

}  // namespace sqkd
