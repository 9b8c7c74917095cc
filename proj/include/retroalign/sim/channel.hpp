#pragma once

#include "retroalign/algebra/field.hpp"

#include <cstdint>
#include <vector>

namespace retroalign {

// Per-slot K_rx x M_tx cross matrices and, optionally, M_tx x M_tx
// full-duplex matrices.
template <class F>
struct ChannelRealization {
    using value_type = typename F::value_type;

    int K_rx = 0;
    int M_tx = 0;
    int T = 0;
    bool has_fullduplex = false;
    std::vector<std::vector<value_type>> cross;
    std::vector<std::vector<value_type>> fullduplex;

    // Coefficient from TX_i to RX_j at slot t.
    value_type h(int t, int j, int i) const { return cross.at(t)[static_cast<std::size_t>(j) * M_tx + i]; }
    // Coefficient from TX_ip into the full-duplex receiver of TX_i at slot t.
    value_type hfd(int t, int i, int ip) const { return fullduplex.at(t)[static_cast<std::size_t>(i) * M_tx + ip]; }
};

template <class F>
ChannelRealization<F> generate_channel(int K_rx, int M_tx, int T, std::uint64_t seed, bool fullduplex);

} // namespace retroalign
