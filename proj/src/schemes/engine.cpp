#include "retroalign/schemes/engine.hpp"

#include "retroalign/algebra/random.hpp"
#include "retroalign/dof/dof.hpp"
#include "retroalign/sim/trace.hpp"

#include <algorithm>
#include <stdexcept>

namespace retroalign::schemes {

namespace {

template <class F>
class Engine {
public:
    using Expr = LinearExpr<F>;
    using Spec = SymbolSpec<F>;

    Engine(const Policy& p, std::uint64_t seed, bool strict, long long horizon, std::ostream* trace)
        : p_(p),
          all_rx_(all_nodes(p.K)),
          all_tx_(all_nodes(p.M)),
          fd_(p.model.full_duplex()),
          state_(make_state<F>(p.model, p.M, p.K, strict)),
          ch_(generate_channel<F>(p.K, p.M, static_cast<int>(std::max<long long>(horizon, 1)), seed, p.model.full_duplex())),
          offline_(make_stream(seed, Stream::Offline)),
          trace_(trace) {
        if (p.M > kMaxNodes || p.K > kMaxNodes) throw UnsupportedError("simulation supports at most 8 nodes per side");
    }

    void run(const PhaseDescriptor& d) {
        ledger_ = PhaseLedger{};
        ledger_.label = d.label;
        for (long long r = 0; r < d.repetitions; ++r) unit(d);
        ledgers_.push_back(ledger_);
    }

    // Places a symbol in the inventory without counting it (synthesized inputs).
    void stock(Spec s) { inv_[s.key()].push_back(std::move(s)); }

    NodeState<F>& state() { return state_; }
    SymbolPool& pool() { return pool_; }
    const std::vector<PhaseLedger>& ledgers() const { return ledgers_; }
    const std::map<int, std::set<SymbolId>>& desired() const { return desired_; }
    const std::map<TypeKey, std::deque<Spec>>& inventory() const { return inv_; }

private:
    SymbolId fresh(int owner, int intended) {
        SymbolId id = pool_.mint(owner, intended);
        grant_own(state_, owner, {id});
        desired_[intended].insert(id);
        ++ledger_.fresh;
        return id;
    }

    int slot(std::map<int, Transmission<F>> txs) {
        SlotPlan<F> plan;
        plan.t = state_.t;
        plan.transmissions = std::move(txs);
        apply_slot(state_, plan, ch_);
        if (trace_) write_slot(*trace_, plan, ch_);
        ++ledger_.slots;
        return plan.t;
    }

    const Expr& y(int j) const { return state_.rx.at(j).received_eqs.back(); }

    static void track(int& slot, int order) {
        if (slot == 0) slot = order;
        else if (slot != order) slot = -1;
    }

    Spec take(const TypeKey& key) {
        auto it = inv_.find(key);
        if (it == inv_.end() || it->second.empty())
            throw std::logic_error("phase " + ledger_.label + ": no symbol of type desired " + mask_str(key.desired) +
                                   " known " + mask_str(key.known) + " holders " + mask_str(key.holders));
        Spec s = std::move(it->second.front());
        it->second.pop_front();
        ++ledger_.consumed;
        track(ledger_.consumed_order, s.order);
        return s;
    }

    std::vector<Spec> take(const TypeKey& key, int n) {
        std::vector<Spec> out;
        for (int k = 0; k < n; ++k) out.push_back(take(key));
        return out;
    }

    void put(Spec s) {
        s.order = popcount(s.rx_desired);
        ++ledger_.produced;
        track(ledger_.produced_order, s.order);
        inv_[s.key()].push_back(std::move(s));
    }

    CsiUse recon(int t) const {
        CsiUse c;
        c.cross = t;
        if (fd_) c.fullduplex = t;
        return c;
    }

    Spec spec(const Expr& e, Mask desired, Mask known, Mask holders) const {
        Spec s;
        s.expr = e;
        s.rx_desired = desired;
        s.rx_known = known;
        s.tx_holders = holders;
        s.order = popcount(desired);
        return s;
    }

    // n offline random combinations of parts, held by `holders`.
    void combos(const std::vector<Spec>& parts, int n, Mask desired, Mask holders) {
        std::vector<Expr> exprs;
        for (const Spec& s : parts) exprs.push_back(s.expr);
        for (int k = 0; k < n; ++k) {
            Spec out = spec(combine(exprs, random_coeffs<F>(static_cast<int>(exprs.size()), offline_)), desired, 0, holders);
            for (int h : members(holders))
                for (const Spec& s : parts) out.csi[h].merge(s.csi[h]);
            put(std::move(out));
        }
    }

    Transmission<F> send(const Spec& s, int tx) const { return {s.expr, s.csi[tx]}; }

    void unit(const PhaseDescriptor& d) {
        switch (d.kind) {
        case PhaseKind::IcPairFresh: return ic_pair_fresh();
        case PhaseKind::IcFreshGroups: return ic_fresh_groups(d.m);
        case PhaseKind::IcCascade: return ic_cascade(d.m);
        case PhaseKind::IcRepeat: return ic_repeat();
        case PhaseKind::SfFreshPairs: return sf_fresh_pairs();
        case PhaseKind::SfCascade: return sf_cascade(d.m);
        case PhaseKind::Broadcast: return broadcast();
        case PhaseKind::XofFresh: return xof_fresh();
        case PhaseKind::XofPairs: return xof_pairs();
        case PhaseKind::XsfRound1: return xsf_round1();
        case PhaseKind::XsfTriples: return xsf_triples();
        case PhaseKind::XfdPairFresh: return xfd_pair_fresh(d.tx_pairs);
        case PhaseKind::XfdHub: return xfd_hub(d.hub);
        case PhaseKind::XfdCaseOne: return xfd_case_one(d.m);
        }
    }

    void ic_pair_fresh() {
        for (Mask s : subsets(all_rx_, 3)) {
            const auto e = members(s);
            for (int n = 0; n < 3; ++n) {
                const int a = e[n], b = e[(n + 1) % 3], obs = e[(n + 2) % 3];
                std::map<int, Transmission<F>> txs;
                txs[a] = {Expr::unit(fresh(a, a)), {}};
                txs[b] = {Expr::unit(fresh(b, b)), {}};
                const int t = slot(std::move(txs));
                Spec out = spec(y(obs), bit(a) | bit(b), bit(obs), bit(a) | bit(b));
                out.csi[a] = out.csi[b] = recon(t);
                put(std::move(out));
            }
        }
    }

    void ic_fresh_groups(int w) {
        for (Mask s : subsets(all_rx_, w))
            for (Mask obs : subsets(all_rx_ & ~s, w - 1)) {
                std::map<int, Transmission<F>> txs;
                for (int i : members(s)) txs[i] = {Expr::unit(fresh(i, i)), {}};
                slot(std::move(txs));
                for (int j : members(obs)) put(spec(y(j), s, bit(j), bit(j)));
            }
    }

    void ic_cascade(int m) {
        const int q = dof::q_min(m, p_.K), L = dof::l_lcm(m, p_.K);
        for (Mask s : subsets(all_rx_, m + 1))
            for (Mask obs : subsets(all_rx_ & ~s, q - 1)) {
                std::map<int, std::vector<Spec>> batch;
                std::map<int, int> sender;
                for (int r : members(s)) {
                    const Mask rest = s & ~bit(r);
                    batch[r] = take({rest, bit(r), fd_ ? rest : bit(r)}, L / m);
                    sender[r] = fd_ ? cyclic_next(s, r) : r;
                }
                for (int k = 0; k < L / q; ++k) {
                    std::map<int, Transmission<F>> txs;
                    for (int r : members(s)) {
                        std::vector<Expr> exprs;
                        Transmission<F> tr;
                        for (const Spec& b : batch[r]) {
                            exprs.push_back(b.expr);
                            tr.csi.merge(b.csi[sender[r]]);
                        }
                        tr.value = combine(exprs, random_coeffs<F>(static_cast<int>(exprs.size()), offline_));
                        txs[sender[r]] = std::move(tr);
                    }
                    const int t = slot(std::move(txs));
                    for (int j : members(obs)) {
                        Spec out = spec(y(j), s, bit(j), fd_ ? s : bit(j));
                        if (fd_) {
                            for (int h : members(s)) {
                                out.csi[h] = recon(t);
                                for (int r : members(s))
                                    if (r != h)
                                        for (const Spec& b : batch[r]) out.csi[h].merge(b.csi[h]);
                            }
                        }
                        put(std::move(out));
                    }
                }
            }
    }

    void ic_repeat() {
        const int K = p_.K;
        std::map<int, Spec> sym;
        for (int i = 0; i < K; ++i) {
            const int r = fd_ ? (i + K - 1) % K : i;
            const Mask rest = all_rx_ & ~bit(r);
            sym.emplace(i, take({rest, bit(r), fd_ ? rest : bit(r)}));
        }
        for (int k = 0; k < K - 1; ++k) {
            std::map<int, Transmission<F>> txs;
            for (const auto& [i, s] : sym) txs[i] = send(s, i);
            slot(std::move(txs));
        }
    }

    void sf_fresh_pairs() {
        for (Mask s : subsets(all_rx_, 3)) {
            std::vector<Spec> parts;
            for (Mask pr : subsets(s, 2)) {
                const int j0 = members(s & ~pr).front();
                std::map<int, Transmission<F>> txs;
                for (int i : members(pr)) txs[i] = {Expr::unit(fresh(i, i)), {}};
                const int t = slot(std::move(txs));
                Spec part = spec(y(j0), pr, bit(j0), s);
                for (int i : members(pr)) part.csi[i] = recon(t);
                parts.push_back(std::move(part));
            }
            combos(parts, 2, s, s);
        }
    }

    void sf_cascade(int m) {
        const int q = std::min(p_.K + 1 - m, m);
        for (Mask g : subsets(all_rx_, q + m - 1)) {
            std::map<Mask, std::vector<Spec>> parts;
            for (Mask s : subsets(g, m)) {
                const auto el = members(s);
                std::map<int, Spec> sent;
                std::map<int, Transmission<F>> txs;
                for (int k = 0; k < q; ++k) {
                    Spec x = take({s, 0, s});
                    txs[el[k]] = send(x, el[k]);
                    sent.emplace(el[k], std::move(x));
                }
                const int t = slot(std::move(txs));
                for (int j : members(g & ~s)) {
                    Spec part = spec(y(j), s, bit(j), s | bit(j));
                    for (int h : el) {
                        part.csi[h] = recon(t);
                        for (const auto& [i, x] : sent) part.csi[h].merge(x.csi[h]);
                    }
                    parts[s | bit(j)].push_back(std::move(part));
                }
            }
            for (Mask target : subsets(g, m + 1)) combos(parts.at(target), m, target, target);
        }
    }

    void broadcast() {
        for (auto& [key, q] : inv_) {
            if (key.desired != all_rx_ || q.empty()) continue;
            Spec s = take(key);
            const int tx = members(s.tx_holders).front();
            std::map<int, Transmission<F>> txs;
            txs[tx] = send(s, tx);
            slot(std::move(txs));
            return;
        }
        throw std::logic_error("phase " + ledger_.label + ": nothing left to broadcast");
    }

    void xof_fresh() {
        for (int j = 0; j < p_.K; ++j) {
            std::map<int, Transmission<F>> txs;
            for (int i = 0; i < p_.M; ++i) txs[i] = {Expr::unit(fresh(i, j)), {}};
            slot(std::move(txs));
            for (int jp = 0; jp < p_.K; ++jp)
                if (jp != j) put(spec(y(jp), bit(j), bit(jp), bit(jp)));
        }
    }

    void xof_pairs() {
        for (Mask pr : subsets(all_rx_, 2)) {
            const auto e = members(pr);
            const int a = e[0], b = e[1];
            Spec sa = take({bit(b), bit(a), bit(a)});
            Spec sb = take({bit(a), bit(b), bit(b)});
            std::map<int, Transmission<F>> txs;
            txs[a] = send(sa, a);
            txs[b] = send(sb, b);
            slot(std::move(txs));
        }
    }

    void xsf_round1() {
        const int K = p_.K;
        for (int j0 = 0; j0 < K; ++j0) {
            // rec[j][jp]: reception of RX_jp in the slot carrying symbols for RX_j.
            std::vector<std::vector<Expr>> rec(K, std::vector<Expr>(K));
            std::vector<int> last(K, 0);
            for (int j = 0; j < K; ++j) {
                std::map<int, Transmission<F>> txs;
                for (int i = 0; i < K; ++i) txs[i] = {Expr::unit(fresh(i, j)), {}};
                last[j] = slot(std::move(txs));
                for (int jp = 0; jp < K; ++jp) rec[j][jp] = y(jp);
            }
            for (Mask pr : subsets(all_rx_ & ~bit(j0), 2)) {
                const auto e = members(pr);
                const int a = e[0], b = e[1];
                std::map<int, Transmission<F>> txs;
                txs[a] = {rec[b][a], {}};
                txs[b] = {rec[a][b], {}};
                last[a] = last[b] = slot(std::move(txs));
            }
            for (int j = 0; j < K; ++j) {
                if (j == j0) continue;
                Spec out = spec(rec[j0][j] + rec[j][j0], bit(j) | bit(j0), 0, bit(j));
                out.csi[j].cross = last[j];
                put(std::move(out));
            }
        }
    }

    void xsf_triples() {
        for (Mask s : subsets(all_rx_, 3)) {
            std::vector<Spec> parts;
            for (Mask pr : subsets(s, 2)) {
                const auto e = members(pr);
                const int a = e[0], b = e[1], c = members(s & ~pr).front();
                Spec sa = take({pr, 0, bit(a)});
                Spec sb = take({pr, 0, bit(b)});
                std::map<int, Transmission<F>> txs;
                txs[a] = send(sa, a);
                txs[b] = send(sb, b);
                const int t = slot(std::move(txs));
                Spec part = spec(y(c), pr, bit(c), s);
                part.csi[a] = recon(t);
                part.csi[a].merge(sa.csi[a]);
                part.csi[b] = recon(t);
                part.csi[b].merge(sb.csi[b]);
                parts.push_back(std::move(part));
            }
            combos(parts, 2, s, s);
        }
    }

    void xfd_pair_fresh(const std::vector<Mask>& pairs) {
        for (Mask pr : pairs) {
            const auto tx = members(pr);
            for (Mask dset : subsets(all_rx_, 2)) {
                const auto r = members(dset);
                std::map<int, Transmission<F>> first, second;
                for (int i : tx) first[i] = {Expr::unit(fresh(i, r[0])), {}};
                slot(std::move(first));
                const Expr l1 = y(r[1]);
                for (int i : tx) second[i] = {Expr::unit(fresh(i, r[1])), {}};
                const int t = slot(std::move(second));
                const Expr l2 = y(r[0]);
                Spec out = spec(l1 + l2, dset, 0, pr);
                for (int i : tx) out.csi[i] = recon(t);
                put(std::move(out));
            }
        }
    }

    void xfd_hub(int hub) {
        const auto o = members(all_tx_ & ~bit(hub));
        std::vector<Spec> parts;
        for (Mask dset : subsets(all_rx_, 2)) {
            const int third = members(all_rx_ & ~dset).front();
            Spec sh = take({dset, 0, bit(hub) | bit(o[1])});
            Spec so = take({dset, 0, bit(hub) | bit(o[0])});
            std::map<int, Transmission<F>> txs;
            txs[hub] = send(sh, hub);
            txs[o[0]] = send(so, o[0]);
            const int t = slot(std::move(txs));
            Spec part = spec(y(third), dset, bit(third), bit(hub));
            part.csi[hub] = recon(t);
            part.csi[hub].merge(sh.csi[hub]);
            part.csi[hub].merge(so.csi[hub]);
            parts.push_back(std::move(part));
        }
        combos(parts, 2, all_rx_, bit(hub));
    }

    void xfd_case_one(int m) {
        for (Mask st : subsets(all_tx_, m + 1))
            for (Mask sr2 : subsets(all_rx_, 2 * m)) {
                std::map<Mask, std::vector<Spec>> parts;
                for (Mask sr : subsets(sr2, m)) {
                    std::map<int, Spec> sent;
                    std::map<int, Transmission<F>> txs;
                    for (int i : members(st)) {
                        Spec x = take({sr, 0, st & ~bit(cyclic_prev(st, i))});
                        txs[i] = send(x, i);
                        sent.emplace(i, std::move(x));
                    }
                    const int t = slot(std::move(txs));
                    for (int j : members(sr2 & ~sr)) {
                        Spec part = spec(y(j), sr, bit(j), st);
                        for (int h : members(st)) {
                            part.csi[h] = recon(t);
                            for (const auto& [i, x] : sent)
                                if (x.tx_holders & bit(h)) part.csi[h].merge(x.csi[h]);
                        }
                        parts[sr | bit(j)].push_back(std::move(part));
                    }
                }
                for (Mask target : subsets(sr2, m + 1)) combos(parts.at(target), m, target, st);
            }
    }

    const Policy& p_;
    Mask all_rx_;
    Mask all_tx_;
    bool fd_;
    SymbolPool pool_;
    NodeState<F> state_;
    ChannelRealization<F> ch_;
    RngStream offline_;
    std::ostream* trace_;
    std::map<TypeKey, std::deque<Spec>> inv_;
    std::map<int, std::set<SymbolId>> desired_;
    PhaseLedger ledger_;
    std::vector<PhaseLedger> ledgers_;
};

} // namespace

template <class F>
RunResult<F> execute(const Policy& policy, const RunOptions& options) {
    RunResult<F> out;
    for (const auto& d : policy.phases) out.expected.push_back(expected_total(policy, d));
    Engine<F> engine(policy, options.seed, options.strict, policy.total_slots(), options.trace);
    for (const auto& d : policy.phases) engine.run(d);
    out.actual = engine.ledgers();
    out.report = finalize(engine.state(), engine.desired());
    out.report.scheme = policy.name;
    out.report.seed = options.seed;
    if (options.trace) write_trailer(*options.trace, out.report, {policy.model, policy.M, policy.K}, engine.pool());
    out.state = std::move(engine.state());
    out.pool = engine.pool();
    return out;
}

bool PhaseVerification::all_decodable() const {
    for (const auto& [j, ok] : decodable)
        if (!ok) return false;
    return true;
}

template <class F>
PhaseVerification verify_phase(const ModelId& model, int m, int K, int M, std::uint64_t seed) {
    Policy p;
    p.name = model.tag() + "-phase";
    p.model = model;
    p.M = M;
    p.K = K;
    p.adaptive = model.delayed_csit();
    PhaseDescriptor d = phase_for(model, m, K, M);
    const bool bcast = d.kind == PhaseKind::Broadcast;
    if (bcast) d.repetitions = K - 1;
    p.phases.push_back(d);

    PhaseVerification v;
    v.expected = expected_total(p, d);

    Engine<F> engine(p, seed, false, v.expected.slots, nullptr);
    TypeCounts demand = phase_demand(p, d);
    if (bcast) demand[{all_nodes(K), 0, all_nodes(M)}] = d.repetitions;

    std::map<int, std::set<SymbolId>> targets;
    std::map<int, std::vector<LinearExpr<F>>> known;
    for (const auto& [key, count] : demand) {
        for (long long n = 0; n < count; ++n) {
            SymbolSpec<F> s;
            const SymbolId id = engine.pool().mint(-1, -1);
            s.expr = LinearExpr<F>::unit(id);
            s.rx_desired = key.desired;
            s.rx_known = key.known;
            s.tx_holders = key.holders;
            s.order = popcount(key.desired);
            for (int h : members(key.holders)) grant_side_info(engine.state(), h, s.expr);
            for (int j : members(key.desired)) targets[j].insert(id);
            for (int j : members(key.known)) known[j].push_back(s.expr);
            engine.stock(std::move(s));
        }
    }

    try {
        engine.run(d);
    } catch (const std::exception& e) {
        v.diagnostics.push_back(e.what());
        return v;
    }
    v.actual = engine.ledgers().back();
    v.violations = engine.state().violations;
    if (!v.ledger_ok()) v.diagnostics.push_back("ledger mismatch: expected " + v.expected.describe() + "; got " + v.actual.describe());

    for (const auto& [j, ids] : engine.desired())
        if (j >= 0) targets[j].insert(ids.begin(), ids.end());
    for (const auto& [j, tset] : targets) {
        std::vector<LinearExpr<F>> eqs = engine.state().rx.at(j).received_eqs;
        for (const auto& [key, q] : engine.inventory())
            if (key.desired & bit(j))
                for (const auto& s : q) eqs.push_back(s.expr);
        v.decodable[j] = decodable<F>(eqs, known[j], tset);
        if (!v.decodable[j]) v.diagnostics.push_back("receiver " + std::to_string(j) + " cannot decode its phase inputs");
    }
    return v;
}

template RunResult<PrimeField> execute<PrimeField>(const Policy&, const RunOptions&);
template RunResult<ComplexField> execute<ComplexField>(const Policy&, const RunOptions&);
template PhaseVerification verify_phase<PrimeField>(const ModelId&, int, int, int, std::uint64_t);
template PhaseVerification verify_phase<ComplexField>(const ModelId&, int, int, int, std::uint64_t);

} // namespace retroalign::schemes
