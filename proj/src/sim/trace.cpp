#include "retroalign/sim/trace.hpp"

#include <istream>
#include <ostream>
#include <string>

namespace retroalign {

using nlohmann::json;

json field_json(PrimeField::value_type v) { return std::to_string(v); }
json field_json(ComplexField::value_type v) { return json::array({v.real(), v.imag()}); }

namespace {

PrimeField::value_type parse_elem(const json& j, PrimeField*) { return std::stoull(j.get<std::string>()); }
ComplexField::value_type parse_elem(const json& j, ComplexField*) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

template <class F>
typename F::value_type elem(const json& j) {
    return parse_elem(j, static_cast<F*>(nullptr));
}

json csi_json(const CsiUse& c) {
    json o = json::object();
    if (c.cross) o["cross"] = *c.cross;
    if (c.fullduplex) o["fullduplex"] = *c.fullduplex;
    return o;
}

template <class F>
json matrix_json(const std::vector<typename F::value_type>& flat, int rows, int cols) {
    json m = json::array();
    for (int r = 0; r < rows; ++r) {
        json row = json::array();
        for (int c = 0; c < cols; ++c) row.push_back(field_json(flat[static_cast<std::size_t>(r) * cols + c]));
        m.push_back(row);
    }
    return m;
}

template <class F>
std::vector<typename F::value_type> matrix_parse(const json& m) {
    std::vector<typename F::value_type> flat;
    for (const auto& row : m)
        for (const auto& v : row) flat.push_back(elem<F>(v));
    return flat;
}

template <class F>
LinearExpr<F> expr_parse(const json& j) {
    std::vector<typename LinearExpr<F>::Term> terms;
    for (const auto& t : j) terms.push_back({SymbolId{t.at(0).get<std::uint32_t>()}, elem<F>(t.at(1))});
    return LinearExpr<F>::from_terms(std::move(terms));
}

} // namespace

template <class F>
json expr_json(const LinearExpr<F>& e) {
    json a = json::array();
    for (const auto& t : e.terms()) a.push_back(json::array({t.id.index, field_json(t.coeff)}));
    return a;
}

json report_json(const SimReport& r) {
    json o;
    o["scheme"] = r.scheme;
    o["field"] = r.field;
    o["seed"] = r.seed;
    o["symbols_injected"] = r.symbols_injected;
    o["slots_used"] = r.slots_used;
    json dec = json::object();
    for (const auto& [j, ok] : r.per_rx_decodable) dec[std::to_string(j)] = ok;
    o["per_rx_decodable"] = dec;
    o["empirical_dof"] = r.empirical_dof ? json(r.empirical_dof->str()) : json(nullptr);
    json v = json::array();
    for (const auto& x : r.feasibility_violations) v.push_back({{"t", x.t}, {"tx", x.tx}, {"reason", x.reason}});
    o["feasibility_violations"] = v;
    o["analytic_only"] = r.analytic_only;
    if (!r.note.empty()) o["note"] = r.note;
    return o;
}

template <class F>
void write_slot(std::ostream& os, const SlotPlan<F>& plan, const ChannelRealization<F>& ch) {
    json o;
    o["t"] = plan.t;
    o["H"] = matrix_json<F>(ch.cross.at(plan.t), ch.K_rx, ch.M_tx);
    if (ch.has_fullduplex) o["Hfd"] = matrix_json<F>(ch.fullduplex.at(plan.t), ch.M_tx, ch.M_tx);
    json txs = json::array();
    for (const auto& [i, tr] : plan.transmissions)
        txs.push_back({{"tx", i}, {"expr", expr_json(tr.value)}, {"csi", csi_json(tr.csi)}});
    o["transmissions"] = txs;
    os << o.dump() << '\n';
}

void write_trailer(std::ostream& os, const SimReport& r, const TraceMeta& meta, const SymbolPool& pool) {
    json o;
    o["report"] = report_json(r);
    o["model"] = meta.model.tag();
    o["M"] = meta.M;
    o["K"] = meta.K;
    json syms = json::array();
    for (const auto& s : pool.all()) syms.push_back(json::array({s.owner_tx, s.intended_rx}));
    o["symbols"] = syms;
    os << o.dump() << '\n';
}

namespace {

SimReport report_parse(const json& o) {
    SimReport r;
    r.scheme = o.value("scheme", "");
    r.field = o.value("field", "");
    r.seed = o.value("seed", std::uint64_t{0});
    r.symbols_injected = o.at("symbols_injected").get<long long>();
    r.slots_used = o.at("slots_used").get<long long>();
    for (const auto& [k, v] : o.at("per_rx_decodable").items()) r.per_rx_decodable[std::stoi(k)] = v.get<bool>();
    if (!o.at("empirical_dof").is_null()) r.empirical_dof = parse_rational(o.at("empirical_dof").get<std::string>());
    for (const auto& v : o.at("feasibility_violations"))
        r.feasibility_violations.push_back({v.at("t").get<int>(), v.at("tx").get<int>(), v.at("reason").get<std::string>()});
    r.analytic_only = o.value("analytic_only", false);
    r.note = o.value("note", "");
    return r;
}

} // namespace

template <class F>
ReplayResult replay_trace(std::istream& is) {
    std::vector<json> slots;
    json trailer;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json o = json::parse(line);
        if (o.contains("report")) trailer = std::move(o);
        else slots.push_back(std::move(o));
    }
    if (trailer.is_null()) throw std::runtime_error("replay: trace has no trailing report");
    const auto model = parse_model(trailer.at("model").get<std::string>());
    if (!model) throw std::runtime_error("replay: unknown model");
    const int M = trailer.at("M").get<int>(), K = trailer.at("K").get<int>();

    ChannelRealization<F> ch;
    ch.K_rx = K;
    ch.M_tx = M;
    ch.T = static_cast<int>(slots.size());
    ch.has_fullduplex = !slots.empty() && slots.front().contains("Hfd");
    for (const auto& s : slots) {
        ch.cross.push_back(matrix_parse<F>(s.at("H")));
        if (ch.has_fullduplex) ch.fullduplex.push_back(matrix_parse<F>(s.at("Hfd")));
    }

    NodeState<F> state = make_state<F>(*model, M, K, false);
    std::map<int, std::set<SymbolId>> desired;
    const auto& syms = trailer.at("symbols");
    for (std::uint32_t id = 0; id < syms.size(); ++id) {
        const int owner = syms[id].at(0).get<int>(), intended = syms[id].at(1).get<int>();
        if (owner >= 0) grant_own(state, owner, {SymbolId{id}});
        if (intended >= 0) desired[intended].insert(SymbolId{id});
    }
    for (const auto& s : slots) {
        SlotPlan<F> plan;
        plan.t = s.at("t").get<int>();
        for (const auto& tr : s.at("transmissions")) {
            Transmission<F> x;
            x.value = expr_parse<F>(tr.at("expr"));
            const auto& c = tr.at("csi");
            if (c.contains("cross")) x.csi.cross = c.at("cross").get<int>();
            if (c.contains("fullduplex")) x.csi.fullduplex = c.at("fullduplex").get<int>();
            plan.transmissions[tr.at("tx").get<int>()] = std::move(x);
        }
        apply_slot(state, plan, ch);
    }
    ReplayResult out;
    out.recorded = report_parse(trailer.at("report"));
    out.replayed = finalize(state, desired);
    out.replayed.scheme = out.recorded.scheme;
    out.replayed.seed = out.recorded.seed;
    out.replayed.analytic_only = out.recorded.analytic_only;
    return out;
}

template json expr_json<PrimeField>(const LinearExpr<PrimeField>&);
template json expr_json<ComplexField>(const LinearExpr<ComplexField>&);
template void write_slot<PrimeField>(std::ostream&, const SlotPlan<PrimeField>&, const ChannelRealization<PrimeField>&);
template void write_slot<ComplexField>(std::ostream&, const SlotPlan<ComplexField>&, const ChannelRealization<ComplexField>&);
template ReplayResult replay_trace<PrimeField>(std::istream&);
template ReplayResult replay_trace<ComplexField>(std::istream&);

} // namespace retroalign
