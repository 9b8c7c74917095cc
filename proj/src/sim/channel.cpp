#include "retroalign/sim/channel.hpp"

#include "retroalign/algebra/random.hpp"

#include <stdexcept>

namespace retroalign {

template <class F>
ChannelRealization<F> generate_channel(int K_rx, int M_tx, int T, std::uint64_t seed, bool fullduplex) {
    if (T < 1 || K_rx < 1 || M_tx < 1) throw std::invalid_argument("generate_channel: need T, K, M >= 1");
    ChannelRealization<F> ch;
    ch.K_rx = K_rx;
    ch.M_tx = M_tx;
    ch.T = T;
    ch.has_fullduplex = fullduplex;
    RngStream rng = make_stream(seed, Stream::Channel);
    ch.cross.reserve(T);
    for (int t = 0; t < T; ++t) {
        ch.cross.push_back(random_coeffs<F>(K_rx * M_tx, rng));
        if (fullduplex) ch.fullduplex.push_back(random_coeffs<F>(M_tx * M_tx, rng));
    }
    return ch;
}

template ChannelRealization<PrimeField> generate_channel<PrimeField>(int, int, int, std::uint64_t, bool);
template ChannelRealization<ComplexField> generate_channel<ComplexField>(int, int, int, std::uint64_t, bool);

} // namespace retroalign
