#pragma once

#include "retroalign/algebra/span.hpp"
#include "retroalign/model.hpp"
#include "retroalign/rational.hpp"
#include "retroalign/sim/channel.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace retroalign {

// Latest channel slots whose coefficients a transmitted value depends on.
struct CsiUse {
    std::optional<int> cross;
    std::optional<int> fullduplex;

    void merge(const CsiUse& o) {
        if (o.cross && (!cross || *o.cross > *cross)) cross = o.cross;
        if (o.fullduplex && (!fullduplex || *o.fullduplex > *fullduplex)) fullduplex = o.fullduplex;
    }
    friend bool operator==(const CsiUse&, const CsiUse&) = default;
};

template <class F>
struct Transmission {
    LinearExpr<F> value;
    CsiUse csi;
};

template <class F>
struct SlotPlan {
    int t = 0;
    std::map<int, Transmission<F>> transmissions;
};

// What a transmitter knows about channel coefficients at slot `now`.
struct CoeffKnowledge {
    bool delayed_cross = false;
    bool own_fullduplex_row = false;
    int now = 0;

    bool knows_cross(int t) const { return delayed_cross && t < now; }
    bool knows_fullduplex_row(int t) const { return own_fullduplex_row && t <= now; }
};

struct Violation {
    int t = 0;
    int tx = 0;
    std::string reason;
};

class FeasibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class F>
struct ReceiverState {
    std::vector<LinearExpr<F>> received_eqs;
    // Own-row CSI is known through slot `csi_slots - 1`, all rows one slot later.
    int csi_slots = 0;
};

template <class F>
struct TransmitterState {
    std::vector<LinearExpr<F>> side_info;
    Span<F> span;
    CoeffKnowledge coeff;
};

template <class F>
struct NodeState {
    ModelId model;
    int M = 0;
    int K = 0;
    int t = 0;
    bool strict = true;
    std::vector<ReceiverState<F>> rx;
    std::vector<TransmitterState<F>> tx;
    std::vector<Violation> violations;
};

template <class F>
NodeState<F> make_state(const ModelId& model, int M, int K, bool strict);

// Gives TX_i its own fresh symbols.
template <class F>
void grant_own(NodeState<F>& state, int i, const std::vector<SymbolId>& ids);

// Adds side information to TX_i outside of any slot (phase verification inputs).
template <class F>
void grant_side_info(NodeState<F>& state, int i, const LinearExpr<F>& e);

template <class F>
bool tx_can_form(const NodeState<F>& state, int i, const LinearExpr<F>& target);

// Executes one slot. Infeasible transmissions are recorded, or thrown in strict mode.
template <class F>
void apply_slot(NodeState<F>& state, const SlotPlan<F>& plan, const ChannelRealization<F>& ch);

struct SimReport {
    std::string scheme;
    std::string field;
    std::uint64_t seed = 0;
    long long symbols_injected = 0;
    long long slots_used = 0;
    std::map<int, bool> per_rx_decodable;
    std::optional<Rational> empirical_dof;
    std::vector<Violation> feasibility_violations;
    bool analytic_only = false;
    std::string note;

    bool all_decodable() const;
    bool ok() const { return all_decodable() && feasibility_violations.empty() && empirical_dof.has_value(); }
};

template <class F>
SimReport finalize(const NodeState<F>& state, const std::map<int, std::set<SymbolId>>& desired);

} // namespace retroalign
