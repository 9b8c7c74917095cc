#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace retroalign {

using RngStream = std::mt19937_64;

// Independent stream seeds derived from one run seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum class Stream : std::uint64_t { Channel = 1, Offline = 2, Synthetic = 3 };

inline RngStream make_stream(std::uint64_t seed, Stream s) {
    return RngStream(derive_seed(seed, static_cast<std::uint64_t>(s)));
}

template <class F>
std::vector<typename F::value_type> random_coeffs(int n, RngStream& stream) {
    std::vector<typename F::value_type> out;
    out.reserve(n > 0 ? n : 0);
    for (int i = 0; i < n; ++i) out.push_back(F::random_nonzero(stream));
    return out;
}

} // namespace retroalign
