#include "retroalign/schemes/policy.hpp"

#include "retroalign/dof/combinatorics.hpp"
#include "retroalign/dof/dof.hpp"
#include "retroalign/rational.hpp"

#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace retroalign::schemes {

int popcount(Mask m) { return std::popcount(m); }

std::vector<int> members(Mask m) {
    std::vector<int> out;
    for (int i = 0; m; ++i, m >>= 1)
        if (m & 1) out.push_back(i);
    return out;
}

std::vector<Mask> subsets(Mask universe, int k) {
    const std::vector<int> el = members(universe);
    const int n = static_cast<int>(el.size());
    std::vector<Mask> out;
    if (k < 0 || k > n) return out;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        Mask s = 0;
        for (int i : idx) s |= bit(el[i]);
        out.push_back(s);
        int p = k - 1;
        while (p >= 0 && idx[p] == n - k + p) --p;
        if (p < 0) break;
        ++idx[p];
        for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
    return out;
}

int cyclic_next(Mask s, int r) {
    const auto el = members(s);
    for (std::size_t i = 0; i < el.size(); ++i)
        if (el[i] == r) return el[(i + 1) % el.size()];
    throw std::logic_error("cyclic_next: element not in set");
}

int cyclic_prev(Mask s, int r) {
    const auto el = members(s);
    for (std::size_t i = 0; i < el.size(); ++i)
        if (el[i] == r) return el[(i + el.size() - 1) % el.size()];
    throw std::logic_error("cyclic_prev: element not in set");
}

std::string mask_str(Mask m) {
    std::string s = "{";
    bool first = true;
    for (int i : members(m)) {
        if (!first) s += ",";
        s += std::to_string(i);
        first = false;
    }
    return s + "}";
}

std::string kind_name(PhaseKind k) {
    switch (k) {
    case PhaseKind::IcPairFresh: return "ic-pair-fresh";
    case PhaseKind::IcFreshGroups: return "ic-fresh-groups";
    case PhaseKind::IcCascade: return "ic-cascade";
    case PhaseKind::IcRepeat: return "ic-repeat";
    case PhaseKind::SfFreshPairs: return "sf-fresh-pairs";
    case PhaseKind::SfCascade: return "sf-cascade";
    case PhaseKind::Broadcast: return "broadcast";
    case PhaseKind::XofFresh: return "xof-fresh";
    case PhaseKind::XofPairs: return "xof-pairs";
    case PhaseKind::XsfRound1: return "xsf-round1";
    case PhaseKind::XsfTriples: return "xsf-triples";
    case PhaseKind::XfdPairFresh: return "xfd-pair-fresh";
    case PhaseKind::XfdHub: return "xfd-hub";
    case PhaseKind::XfdCaseOne: return "xfd-case1";
    }
    return "unknown";
}

std::string PhaseLedger::describe() const {
    std::ostringstream os;
    os << label << ": fresh " << fresh << ", consumed " << consumed << " (order " << consumed_order << "), slots "
       << slots << ", produced " << produced << " (order " << produced_order << ")";
    return os.str();
}

namespace {

long long C(int n, int k) { return dof::binomial(n, k).convert_to<long long>(); }

int sf_q(int m, int K) { return std::min(K + 1 - m, m); }

} // namespace

PhaseLedger expected_ledger(const Policy& p, const PhaseDescriptor& d) {
    const int K = p.K, M = p.M, m = d.m;
    PhaseLedger l;
    l.label = d.label;
    switch (d.kind) {
    case PhaseKind::IcPairFresh:
        l.fresh = 6 * C(K, 3);
        l.slots = 3 * C(K, 3);
        l.produced = 3 * C(K, 3);
        l.produced_order = 2;
        break;
    case PhaseKind::IcFreshGroups:
        l.slots = C(K, m) * C(K - m, m - 1);
        l.fresh = m * l.slots;
        l.produced = (m - 1) * l.slots;
        l.produced_order = m;
        break;
    case PhaseKind::IcCascade: {
        const long long a = dof::alpha(m, K).convert_to<long long>();
        const long long q = dof::q_min(m, K);
        l.consumed = (m + 1) * a / m;
        l.consumed_order = m;
        l.slots = a / q;
        l.produced = (q - 1) * a / q;
        l.produced_order = m + 1;
        break;
    }
    case PhaseKind::IcRepeat:
        l.consumed = K;
        l.consumed_order = K - 1;
        l.slots = K - 1;
        break;
    case PhaseKind::SfFreshPairs:
        l.fresh = 6 * C(K, 3);
        l.slots = 3 * C(K, 3);
        l.produced = 2 * C(K, 3);
        l.produced_order = 3;
        break;
    case PhaseKind::SfCascade: {
        const int q = sf_q(m, K);
        l.slots = C(K, q + m - 1) * C(q + m - 1, m);
        l.consumed = q * l.slots;
        l.consumed_order = m;
        l.produced = m * C(K, q + m - 1) * C(q + m - 1, m + 1);
        l.produced_order = m + 1;
        break;
    }
    case PhaseKind::Broadcast:
        l.consumed = 1;
        l.consumed_order = K;
        l.slots = 1;
        break;
    case PhaseKind::XofFresh:
        l.fresh = static_cast<long long>(K) * K;
        l.slots = K;
        l.produced = static_cast<long long>(K) * (K - 1);
        l.produced_order = 1;
        break;
    case PhaseKind::XofPairs:
        l.consumed = static_cast<long long>(K) * (K - 1);
        l.consumed_order = 1;
        l.slots = C(K, 2);
        break;
    case PhaseKind::XsfRound1:
        l.fresh = static_cast<long long>(K) * K * K;
        l.slots = K * (K + C(K - 1, 2));
        l.produced = static_cast<long long>(K) * (K - 1);
        l.produced_order = 2;
        break;
    case PhaseKind::XsfTriples:
        l.consumed = 6 * C(K, 3);
        l.consumed_order = 2;
        l.slots = 3 * C(K, 3);
        l.produced = 2 * C(K, 3);
        l.produced_order = 3;
        break;
    case PhaseKind::XfdPairFresh: {
        const long long n = static_cast<long long>(d.tx_pairs.size()) * C(K, 2);
        l.fresh = 4 * n;
        l.slots = 2 * n;
        l.produced = n;
        l.produced_order = 2;
        break;
    }
    case PhaseKind::XfdHub:
        l.consumed = 6;
        l.consumed_order = 2;
        l.slots = 3;
        l.produced = 2;
        l.produced_order = 3;
        break;
    case PhaseKind::XfdCaseOne:
        l.slots = C(M, m + 1) * C(K, 2 * m) * C(2 * m, m);
        l.consumed = (m + 1) * l.slots;
        l.consumed_order = m;
        l.produced = m * C(M, m + 1) * C(K, 2 * m) * C(2 * m, m + 1);
        l.produced_order = m + 1;
        break;
    }
    return l;
}

PhaseLedger expected_total(const Policy& p, const PhaseDescriptor& d) {
    PhaseLedger l = expected_ledger(p, d);
    l.fresh *= d.repetitions;
    l.consumed *= d.repetitions;
    l.slots *= d.repetitions;
    l.produced *= d.repetitions;
    return l;
}

TypeCounts phase_demand(const Policy& p, const PhaseDescriptor& d) {
    const int K = p.K, M = p.M, m = d.m;
    const Mask all = all_nodes(K);
    const bool fd = p.model.full_duplex();
    TypeCounts out;
    switch (d.kind) {
    case PhaseKind::IcCascade: {
        const int q = dof::q_min(m, K), L = dof::l_lcm(m, K);
        for (Mask s : subsets(all, m + 1))
            for (std::size_t n = 0; n < subsets(all & ~s, q - 1).size(); ++n)
                for (int r : members(s)) out[{s & ~bit(r), bit(r), fd ? s & ~bit(r) : bit(r)}] += L / m;
        break;
    }
    case PhaseKind::IcRepeat:
        for (int i = 0; i < K; ++i) {
            const int r = fd ? (i + K - 1) % K : i;
            out[{all & ~bit(r), bit(r), fd ? all & ~bit(r) : bit(r)}] += 1;
        }
        break;
    case PhaseKind::SfCascade: {
        const int q = sf_q(m, K);
        for (Mask g : subsets(all, q + m - 1))
            for (Mask s : subsets(g, m)) out[{s, 0, s}] += q;
        break;
    }
    case PhaseKind::XofPairs:
        for (Mask pr : subsets(all, 2))
            for (int j : members(pr)) out[{pr & ~bit(j), bit(j), bit(j)}] += 1;
        break;
    case PhaseKind::XsfTriples:
        for (Mask s : subsets(all, 3))
            for (Mask pr : subsets(s, 2))
                for (int x : members(pr)) out[{pr, 0, bit(x)}] += 1;
        break;
    case PhaseKind::XfdHub: {
        const Mask others = all_nodes(M) & ~bit(d.hub);
        const auto o = members(others);
        for (Mask dset : subsets(all, 2)) {
            out[{dset, 0, bit(d.hub) | bit(o[1])}] += 1;
            out[{dset, 0, bit(d.hub) | bit(o[0])}] += 1;
        }
        break;
    }
    case PhaseKind::XfdCaseOne:
        for (Mask st : subsets(all_nodes(M), m + 1))
            for (Mask sr2 : subsets(all, 2 * m))
                for (Mask sr : subsets(sr2, m))
                    for (int i : members(st)) out[{sr, 0, st & ~bit(cyclic_prev(st, i))}] += 1;
        break;
    default:
        break;
    }
    return out;
}

TypeCounts phase_supply(const Policy& p, const PhaseDescriptor& d) {
    const int K = p.K, M = p.M, m = d.m;
    const Mask all = all_nodes(K);
    const bool fd = p.model.full_duplex();
    TypeCounts out;
    switch (d.kind) {
    case PhaseKind::IcPairFresh:
        for (Mask s : subsets(all, 3)) {
            const auto e = members(s);
            for (int n = 0; n < 3; ++n) {
                const Mask pair = bit(e[n]) | bit(e[(n + 1) % 3]);
                out[{pair, s & ~pair, pair}] += 1;
            }
        }
        break;
    case PhaseKind::IcFreshGroups:
        for (Mask s : subsets(all, m))
            for (Mask obs : subsets(all & ~s, m - 1))
                for (int j : members(obs)) out[{s, bit(j), bit(j)}] += 1;
        break;
    case PhaseKind::IcCascade: {
        const int q = dof::q_min(m, K), L = dof::l_lcm(m, K);
        for (Mask s : subsets(all, m + 1))
            for (Mask obs : subsets(all & ~s, q - 1))
                for (int j : members(obs)) out[{s, bit(j), fd ? s : bit(j)}] += L / q;
        break;
    }
    case PhaseKind::SfFreshPairs:
        for (Mask s : subsets(all, 3)) out[{s, 0, s}] += 2;
        break;
    case PhaseKind::SfCascade: {
        const int q = sf_q(m, K);
        for (Mask g : subsets(all, q + m - 1))
            for (Mask s : subsets(g, m + 1)) out[{s, 0, s}] += m;
        break;
    }
    case PhaseKind::XofFresh:
        for (int j = 0; j < K; ++j)
            for (int jp = 0; jp < K; ++jp)
                if (jp != j) out[{bit(j), bit(jp), bit(jp)}] += 1;
        break;
    case PhaseKind::XsfRound1:
        for (int j0 = 0; j0 < K; ++j0)
            for (int j = 0; j < K; ++j)
                if (j != j0) out[{bit(j) | bit(j0), 0, bit(j)}] += 1;
        break;
    case PhaseKind::XsfTriples:
        for (Mask s : subsets(all, 3)) out[{s, 0, s}] += 2;
        break;
    case PhaseKind::XfdPairFresh:
        for (Mask pr : d.tx_pairs)
            for (Mask dset : subsets(all, 2)) out[{dset, 0, pr}] += 1;
        break;
    case PhaseKind::XfdHub:
        out[{all, 0, bit(d.hub)}] += 2;
        break;
    case PhaseKind::XfdCaseOne:
        for (Mask st : subsets(all_nodes(M), m + 1))
            for (Mask sr2 : subsets(all, 2 * m))
                for (Mask s : subsets(sr2, m + 1)) out[{s, 0, st}] += m;
        break;
    default:
        break;
    }
    return out;
}

void plan_repetitions(Policy& p) {
    std::size_t start = 0;
    while (start < p.phases.size()) {
        std::size_t end = start + 1;
        while (end < p.phases.size() && !phase_demand(p, p.phases[end]).empty() ) ++end;
        while (end < p.phases.size() && p.phases[end].kind == PhaseKind::Broadcast) ++end;

        std::vector<Rational> reps{Rational(1)};
        for (std::size_t k = start + 1; k < end; ++k) {
            const TypeCounts sup = phase_supply(p, p.phases[k - 1]);
            if (p.phases[k].kind == PhaseKind::Broadcast) {
                long long n = 0;
                for (const auto& [key, c] : sup) n += c;
                reps.push_back(reps.back() * Rational(n));
                continue;
            }
            const TypeCounts dem = phase_demand(p, p.phases[k]);
            if (sup.size() != dem.size()) throw std::logic_error("plan: supply and demand type sets differ at " + p.phases[k].label);
            std::optional<Rational> ratio;
            for (const auto& [key, c] : dem) {
                auto it = sup.find(key);
                if (it == sup.end()) throw std::logic_error("plan: demanded type not supplied at " + p.phases[k].label);
                Rational r = reps.back() * Rational(it->second) / Rational(c);
                if (ratio && *ratio != r) throw std::logic_error("plan: unbalanced flow at " + p.phases[k].label);
                ratio = r;
            }
            reps.push_back(*ratio);
        }
        BigInt scale = 1;
        for (const Rational& r : reps) scale = boost::multiprecision::lcm(scale, r.denominator());
        for (std::size_t k = start; k < end; ++k) {
            Rational r = reps[k - start] * Rational(scale);
            p.phases[k].repetitions = r.numerator().convert_to<long long>();
        }
        start = end;
    }
}

long long Policy::total_slots() const {
    long long n = 0;
    for (const auto& d : phases) n += expected_total(*this, d).slots;
    return n;
}

long long Policy::total_fresh() const {
    long long n = 0;
    for (const auto& d : phases) n += expected_total(*this, d).fresh;
    return n;
}

namespace {

PhaseDescriptor phase(PhaseKind k, int m, std::string label) {
    PhaseDescriptor d;
    d.kind = k;
    d.m = m;
    d.label = std::move(label);
    return d;
}

Policy base(std::string name, const ModelId& model, int M, int K) {
    Policy p;
    p.name = std::move(name);
    p.model = model;
    p.M = M;
    p.K = K;
    p.adaptive = model.delayed_csit();
    return p;
}

void require_range(bool ok, const std::string& what) {
    if (!ok) throw UnsupportedError(what);
}

} // namespace

Policy build_icfd(int K) {
    require_range(3 <= K && K <= 6, "icfd simulation supports 3 <= K <= 6");
    Policy p = base("icfd", kICFD, K, K);
    p.phases.push_back(phase(PhaseKind::IcPairFresh, 1, "phase 1"));
    for (int m = 2; m <= K - 2; ++m) p.phases.push_back(phase(PhaseKind::IcCascade, m, "phase " + std::to_string(m)));
    p.phases.push_back(phase(PhaseKind::IcRepeat, K - 1, "phase " + std::to_string(K - 1)));
    plan_repetitions(p);
    return p;
}

Policy build_icof(int K) {
    require_range(3 <= K && K <= 6, "icof simulation supports 3 <= K <= 6");
    Policy p = base("icof", kICOF, K, K);
    const int mu = dof::mu_star(K);
    p.phases.push_back(phase(PhaseKind::IcFreshGroups, mu, "phase 1"));
    for (int m = mu; m <= K - 2; ++m) p.phases.push_back(phase(PhaseKind::IcCascade, m, "phase " + std::to_string(m)));
    p.phases.push_back(phase(PhaseKind::IcRepeat, K - 1, "phase " + std::to_string(K - 1)));
    plan_repetitions(p);
    return p;
}

Policy build_icsf(int K) {
    require_range(3 <= K && K <= 5, "icsf simulation supports 3 <= K <= 5");
    if (dof::nu_star(K) != 2) throw UnsupportedError("icsf round 1 with more than two active transmitters is analytic-only");
    Policy p = base("icsf", kICSF, K, K);
    p.phases.push_back(phase(PhaseKind::SfFreshPairs, 2, "round 1"));
    for (int m = 3; m <= K - 1; ++m) p.phases.push_back(phase(PhaseKind::SfCascade, m, "phase " + std::to_string(m)));
    p.phases.push_back(phase(PhaseKind::Broadcast, K, "phase " + std::to_string(K)));
    plan_repetitions(p);
    return p;
}

Policy build_xof(int K) {
    require_range(2 <= K && K <= 8, "xof simulation supports 2 <= K <= 8");
    Policy p = base("xof", kXOF, K, K);
    p.phases.push_back(phase(PhaseKind::XofFresh, 1, "phase 1"));
    p.phases.push_back(phase(PhaseKind::XofPairs, 2, "phase 2"));
    plan_repetitions(p);
    return p;
}

Policy build_xfd(int M, int K) {
    Policy p = base("xfd", kXFD, M, K);
    if (M == 2 && K == 2) {
        PhaseDescriptor d = phase(PhaseKind::XfdPairFresh, 1, "phase 1");
        d.tx_pairs = {0b11};
        p.phases.push_back(d);
        p.phases.push_back(phase(PhaseKind::Broadcast, 2, "phase 2"));
    } else if (M == 3 && K == 3) {
        for (int hub = 0; hub < 3; ++hub) {
            const std::string tag = " (hub " + std::to_string(hub) + ")";
            PhaseDescriptor d = phase(PhaseKind::XfdPairFresh, 1, "phase 1" + tag);
            for (int o = 0; o < 3; ++o)
                if (o != hub) d.tx_pairs.push_back(bit(hub) | bit(o));
            p.phases.push_back(d);
            PhaseDescriptor h = phase(PhaseKind::XfdHub, 2, "phase 2" + tag);
            h.hub = hub;
            p.phases.push_back(h);
            p.phases.push_back(phase(PhaseKind::Broadcast, 3, "phase 3" + tag));
        }
    } else {
        throw UnsupportedError("xfd end-to-end simulation covers (2,2) and (3,3); other (M,K) are analytic-only");
    }
    plan_repetitions(p);
    return p;
}

Policy build_xsf(int K) {
    require_range(2 <= K && K <= 5, "xsf simulation supports 2 <= K <= 5");
    Policy p = base("xsf", kXSF, K, K);
    p.phases.push_back(phase(PhaseKind::XsfRound1, 1, "round 1"));
    if (K > 2) p.phases.push_back(phase(PhaseKind::XsfTriples, 2, "round 2 phase 2"));
    for (int m = 3; m <= K - 1; ++m) p.phases.push_back(phase(PhaseKind::SfCascade, m, "round 2 phase " + std::to_string(m)));
    p.phases.push_back(phase(PhaseKind::Broadcast, K, "round 2 phase " + std::to_string(K)));
    plan_repetitions(p);
    return p;
}

Policy build_policy(const ModelId& model, int K, int M) {
    check_model_params(model, M, K);
    if (model == kICFD) return build_icfd(K);
    if (model == kICOF) return build_icof(K);
    if (model == kICSF) return build_icsf(K);
    if (model == kXOF) return build_xof(K);
    if (model == kXFD) return build_xfd(M, K);
    return build_xsf(K);
}

PhaseDescriptor phase_for(const ModelId& model, int m, int K, int M) {
    check_model_params(model, M, K);
    const std::string label = "phase " + std::to_string(m);
    auto bad = [&] { return ParameterError(model.tag() + ": no standalone phase m=" + std::to_string(m) + " at K=" + std::to_string(K)); };
    if (model.channel == Channel::IC) {
        if (K < 3) throw bad();
        if (model.feedback == Feedback::ShannonFeedback) {
            if (m == 1) return phase(PhaseKind::SfFreshPairs, 2, label);
            if (m >= 2 && m <= K - 1) return phase(PhaseKind::SfCascade, m, label);
            if (m == K) return phase(PhaseKind::Broadcast, K, label);
            throw bad();
        }
        if (m == 1) {
            if (model.full_duplex()) return phase(PhaseKind::IcPairFresh, 1, label);
            return phase(PhaseKind::IcFreshGroups, dof::mu_star(K), label);
        }
        if (m >= 2 && m <= K - 2) return phase(PhaseKind::IcCascade, m, label);
        if (m == K - 1) return phase(PhaseKind::IcRepeat, K - 1, label);
        throw bad();
    }
    if (model.feedback == Feedback::OutputFeedback) {
        if (m == 1) return phase(PhaseKind::XofFresh, 1, label);
        if (m == 2) return phase(PhaseKind::XofPairs, 2, label);
        throw bad();
    }
    if (model.feedback == Feedback::ShannonFeedback) {
        if (m == 1) return phase(PhaseKind::XsfRound1, 1, label);
        if (m == 2 && K > 2) return phase(PhaseKind::XsfTriples, 2, label);
        if (m >= 3 && m <= K - 1) return phase(PhaseKind::SfCascade, m, label);
        if (m == K) return phase(PhaseKind::Broadcast, K, label);
        throw bad();
    }
    if (m == 1) {
        PhaseDescriptor d = phase(PhaseKind::XfdPairFresh, 1, label);
        d.tx_pairs = subsets(all_nodes(M), 2);
        return d;
    }
    if (m == K) return phase(PhaseKind::Broadcast, K, label);
    if (M > (K + 1) / 2 && m >= 2 && 2 * m <= K) return phase(PhaseKind::XfdCaseOne, m, label);
    throw UnsupportedError("xfd phase m=" + std::to_string(m) + " at (M,K)=(" + std::to_string(M) + "," + std::to_string(K) +
                           ") uses the MISO broadcast sub-scheme; analytic-only");
}

} // namespace retroalign::schemes
