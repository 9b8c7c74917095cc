#include "retroalign/sim/simulator.hpp"

#include <sstream>

namespace retroalign {

template <class F>
NodeState<F> make_state(const ModelId& model, int M, int K, bool strict) {
    check_model_params(model, M, K);
    NodeState<F> s;
    s.model = model;
    s.M = M;
    s.K = K;
    s.strict = strict;
    s.rx.resize(K);
    s.tx.resize(M);
    for (auto& tx : s.tx) {
        tx.coeff.delayed_cross = model.delayed_csit();
        tx.coeff.own_fullduplex_row = model.full_duplex();
    }
    return s;
}

template <class F>
void grant_own(NodeState<F>& state, int i, const std::vector<SymbolId>& ids) {
    for (SymbolId id : ids) grant_side_info(state, i, LinearExpr<F>::unit(id));
}

template <class F>
void grant_side_info(NodeState<F>& state, int i, const LinearExpr<F>& e) {
    auto& tx = state.tx.at(i);
    tx.side_info.push_back(e);
    tx.span.insert(e);
}

template <class F>
bool tx_can_form(const NodeState<F>& state, int i, const LinearExpr<F>& target) {
    return state.tx.at(i).span.contains(target);
}

namespace {

template <class F>
void flag(NodeState<F>& state, int tx, std::string reason) {
    Violation v{state.t, tx, std::move(reason)};
    if (state.strict) {
        std::ostringstream os;
        os << "slot " << v.t << " TX" << v.tx << ": " << v.reason;
        throw FeasibilityError(os.str());
    }
    state.violations.push_back(std::move(v));
}

} // namespace

template <class F>
void apply_slot(NodeState<F>& state, const SlotPlan<F>& plan, const ChannelRealization<F>& ch) {
    const int t = state.t;
    if (plan.t != t) throw std::invalid_argument("apply_slot: plan slot does not match elapsed slots");
    if (t >= ch.T) throw std::invalid_argument("apply_slot: slot beyond channel horizon");

    for (auto& tx : state.tx) tx.coeff.now = t;
    for (const auto& [i, tr] : plan.transmissions) {
        if (i < 0 || i >= state.M) throw std::invalid_argument("apply_slot: transmitter index out of range");
        const CoeffKnowledge& ck = state.tx[i].coeff;
        if (tr.csi.cross && !ck.knows_cross(*tr.csi.cross))
            flag(state, i, "uses cross-channel coefficients of slot " + std::to_string(*tr.csi.cross) + " it does not know");
        if (tr.csi.fullduplex && !ck.knows_fullduplex_row(*tr.csi.fullduplex))
            flag(state, i, "uses full-duplex coefficients of slot " + std::to_string(*tr.csi.fullduplex) + " it does not know");
        if (!tx_can_form(state, i, tr.value)) flag(state, i, "transmitted value is outside its knowledge span");
    }

    std::vector<LinearExpr<F>> y(state.K);
    for (int j = 0; j < state.K; ++j) {
        for (const auto& [i, tr] : plan.transmissions) y[j].add_scaled(tr.value, ch.h(t, j, i));
        state.rx[j].received_eqs.push_back(y[j]);
        state.rx[j].csi_slots = t + 1;
    }

    if (state.model.full_duplex() && ch.has_fullduplex) {
        for (int i = 0; i < state.M; ++i) {
            LinearExpr<F> yt;
            for (const auto& [ip, tr] : plan.transmissions)
                if (ip != i) yt.add_scaled(tr.value, ch.hfd(t, i, ip));
            if (!yt.is_zero()) grant_side_info(state, i, yt);
        }
    }
    if (state.model.output_feedback()) {
        for (int i = 0; i < state.M && i < state.K; ++i)
            if (!y[i].is_zero()) grant_side_info(state, i, y[i]);
    }
    ++state.t;
}

bool SimReport::all_decodable() const {
    for (const auto& [j, ok] : per_rx_decodable)
        if (!ok) return false;
    return true;
}

template <class F>
SimReport finalize(const NodeState<F>& state, const std::map<int, std::set<SymbolId>>& desired) {
    SimReport r;
    r.field = F::name;
    r.slots_used = state.t;
    for (const auto& [j, targets] : desired) {
        r.symbols_injected += static_cast<long long>(targets.size());
        r.per_rx_decodable[j] = decodable<F>(state.rx.at(j).received_eqs, {}, targets);
    }
    if (r.slots_used > 0) r.empirical_dof = Rational(r.symbols_injected, r.slots_used);
    else r.note = "no slots used: DoF undefined";
    r.feasibility_violations = state.violations;
    return r;
}

#define RETROALIGN_INSTANTIATE(F)                                                                  \
    template NodeState<F> make_state<F>(const ModelId&, int, int, bool);                          \
    template void grant_own<F>(NodeState<F>&, int, const std::vector<SymbolId>&);                 \
    template void grant_side_info<F>(NodeState<F>&, int, const LinearExpr<F>&);                   \
    template bool tx_can_form<F>(const NodeState<F>&, int, const LinearExpr<F>&);                 \
    template void apply_slot<F>(NodeState<F>&, const SlotPlan<F>&, const ChannelRealization<F>&); \
    template SimReport finalize<F>(const NodeState<F>&, const std::map<int, std::set<SymbolId>>&);

RETROALIGN_INSTANTIATE(PrimeField)
RETROALIGN_INSTANTIATE(ComplexField)

} // namespace retroalign
