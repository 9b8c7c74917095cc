#include "retroalign/verify/acceptance.hpp"

#include "retroalign/algebra/random.hpp"
#include "retroalign/algebra/span.hpp"
#include "retroalign/dof/dof.hpp"
#include "retroalign/schemes/engine.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace retroalign::verify {

namespace {

using namespace retroalign::dof;
using schemes::Policy;

struct Check {
    bool ok = true;
    std::ostringstream first;
    int failures = 0;

    void expect(bool cond, const std::string& what) {
        if (cond) return;
        if (ok) first << what;
        ok = false;
        ++failures;
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string golden(const AcceptanceOptions&, Check& c) {
    struct G {
        std::string name;
        Rational got, want;
    };
    const std::vector<G> gs = {
        {"icfd(3)", dof_icfd_closed(3).value, Rational(6, 5)},
        {"icfd(4)", dof_icfd_closed(4).value, Rational(24, 19)},
        {"icof(3)", dof_icof(3).value, Rational(6, 5)},
        {"icof(4)", dof_icof(4).value, Rational(24, 19)},
        {"icsf(3)", dof_icsf(3).value, Rational(6, 5)},
        {"icsf(4)", dof_icsf(4).value, Rational(24, 19)},
        {"xfd(2,2)", dof_xfd(2, 2), Rational(4, 3)},
        {"xfd(3,3)", dof_xfd(3, 3), Rational(24, 17)},
        {"xof(2)", dof_xof(2), Rational(4, 3)},
        {"xof(3)", dof_xof(3), Rational(3, 2)},
        {"xsf(2)", dof_xsf(2), Rational(4, 3)},
        {"xsf(3)", dof_xsf(3), Rational(27, 17)},
    };
    for (const auto& g : gs) c.expect(g.got == g.want, g.name + " = " + g.got.str() + ", want " + g.want.str());
    return std::to_string(gs.size()) + " exact fractions";
}

std::string consistency(const AcceptanceOptions& o, Check& c) {
    SweepOptions so;
    if (o.inject_fault) so.q_offset = 1;
    const SweepReport r = consistency_sweep(30, so);
    if (r.first_mismatch) c.expect(false, r.first_mismatch->describe());
    return std::to_string(r.comparisons) + " closed-form/recursion comparisons, K <= 30";
}

std::string asymptotics(const AcceptanceOptions&, Check& c) {
    const double icfd = dof_icfd_closed(1000).value.to_double();
    c.expect(std::abs(icfd - 4.0 / 3) < 1e-2, "icfd(1000) = " + num(icfd));
    Rational prev_of(0), prev_sf(0);
    for (int K = 3; K <= 60; ++K) {
        const Rational of = dof_icof(K).value, sf = dof_icsf(K).value;
        c.expect(of > prev_of && of < Rational(2), "icof not increasing below 2 at K=" + std::to_string(K));
        c.expect(sf > prev_sf && sf < Rational(2), "icsf not increasing below 2 at K=" + std::to_string(K));
        prev_of = of;
        prev_sf = sf;
    }
    const double x2 = dof_xfd(2, 500).to_double(), x3 = dof_xfd(3, 500).to_double();
    const double l2 = 1 / std::numbers::ln2, l3 = 8 / (3 * std::log(3.0) + 2);
    c.expect(std::abs(x2 - l2) < 1e-2, "xfd(2,500) = " + num(x2));
    c.expect(std::abs(x3 - l3) < 1e-2, "xfd(3,500) = " + num(x3));
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double wide = dof_xfd(31, 60).to_double(), lw = 6 / (pi2 - 6);
    c.expect(std::abs(wide - lw) < 5e-2, "xfd(31,60) = " + num(wide));
    return "icfd(1000)-4/3=" + num(icfd - 4.0 / 3) + ", xfd(2,500)-1/ln2=" + num(x2 - l2) + ", xfd(3,500)-lim=" +
           num(x3 - l3) + ", xfd(31,60)-lim=" + num(wide - lw);
}

std::string ordering(const AcceptanceOptions&, Check& c) {
    int n = 0;
    for (int K = 3; K <= 30; ++K) {
        const std::string k = std::to_string(K);
        c.expect(dof_xfd(K, K) < dof_xof(K) && dof_xof(K) < dof_xsf(K), "x-channel order fails at K=" + k);
        ++n;
        if (K >= 6) {
            c.expect(dof_icof(K).value > dof_icfd_closed(K).value, "icof <= icfd at K=" + k);
            ++n;
        }
        if (K == 5 || K >= 7) {
            c.expect(dof_icsf(K).value > dof_icof(K).value, "icsf <= icof at K=" + k);
            ++n;
        }
    }
    return std::to_string(n) + " strict comparisons";
}

std::string selection(const AcceptanceOptions&, Check& c) {
    int ties = 0;
    for (int K = 3; K <= 60; ++K) {
        const std::string k = std::to_string(K);
        c.expect(mu_selection(K).mu == mu_exhaustive(K), "mu rule != exhaustive at K=" + k);
        const IcsfOptimum opt = icsf_optimum(K);
        std::size_t best = 0;
        for (std::size_t w = 1; w < opt.per_w.size(); ++w)
            if (opt.per_w[w] > opt.per_w[best]) best = w;
        c.expect(static_cast<int>(best) + 2 == opt.nu, "nu is not the lowest argmax at K=" + k);
        ties += opt.tie;
    }
    return "K = 3..60, " + std::to_string(ties) + " nu ties";
}

struct SimCase {
    ModelId model;
    int K, M;
    long long slots;  // 0 when no worked total exists
};

std::string simulation(const AcceptanceOptions& o, Check& c) {
    std::vector<SimCase> cases = {
        {kICFD, 3, 3, 5}, {kICFD, 4, 4, 19}, {kICFD, 5, 5, 0}, {kICOF, 3, 3, 0}, {kICOF, 4, 4, 0},
        {kICOF, 5, 5, 0}, {kICSF, 3, 3, 0},  {kICSF, 4, 4, 0}, {kXFD, 2, 2, 3},  {kXFD, 3, 3, 51},
        {kXSF, 2, 2, 0},  {kXSF, 3, 3, 17},
    };
    for (int K = 2; K <= 6; ++K) cases.push_back({kXOF, K, K, K == 3 ? 6 : 0});
    long long runs = 0;
    for (const auto& sc : cases) {
        const std::string tag = sc.model.tag() + "(M=" + std::to_string(sc.M) + ",K=" + std::to_string(sc.K) + ")";
        const Policy p = schemes::build_policy(sc.model, sc.K, sc.M);
        const Rational want = analytic(sc.model, sc.K, sc.M).value;
        for (int s = 0; s < o.seeds; ++s) {
            const std::uint64_t seed = o.base_seed + static_cast<std::uint64_t>(s);
            auto r = schemes::execute<PrimeField>(p, {seed, true, nullptr});
            if (o.inject_fault && s == 0) {
                r.state.rx.at(0).received_eqs.pop_back();
                std::map<int, std::set<SymbolId>> desired;
                for (const auto& info : r.pool.all())
                    if (info.intended_rx >= 0) desired[info.intended_rx].insert(info.id);
                const std::string scheme = r.report.scheme;
                r.report = finalize(r.state, desired);
                r.report.scheme = scheme;
            }
            ++runs;
            const std::string at = tag + " seed " + std::to_string(seed) + ": ";
            c.expect(r.report.all_decodable(), at + "undecodable receiver");
            c.expect(r.report.feasibility_violations.empty(), at + "feasibility violation");
            c.expect(r.report.empirical_dof && *r.report.empirical_dof == want,
                     at + "empirical dof " + (r.report.empirical_dof ? r.report.empirical_dof->str() : "-") + " != " + want.str());
            c.expect(sc.slots == 0 || r.report.slots_used == sc.slots,
                     at + std::to_string(r.report.slots_used) + " slots, want " + std::to_string(sc.slots));
            c.expect(r.ledgers_match(), at + "ledger mismatch");
            if (!c.ok) return std::to_string(runs) + " runs before first failure";
        }
    }
    return std::to_string(cases.size()) + " schemes x " + std::to_string(o.seeds) + " seeds";
}

std::string phases(const AcceptanceOptions& o, Check& c) {
    int n = 0;
    auto one = [&](const ModelId& model, int m, int K) {
        const auto v = schemes::verify_phase<PrimeField>(model, m, K, K, o.base_seed);
        ++n;
        std::string why = v.diagnostics.empty() ? (v.violations.empty() ? "" : v.violations.front().reason) : v.diagnostics.front();
        c.expect(v.ok(), model.tag() + " K=" + std::to_string(K) + " m=" + std::to_string(m) + ": " + why);
    };
    for (int K : {6, 7, 8})
        for (const ModelId& model : {kICFD, kICOF})
            for (int m = 2; m <= K - 1; ++m) one(model, m, K);
    for (int K : {6, 7})
        for (int m = nu_star(K) + 1; m <= K; ++m) one(kICSF, m, K);
    return std::to_string(n) + " phases";
}

// Row i is either a fresh random support or a combination of two earlier rows.
struct Structure {
    int n = 0;
    int known = 0;
    std::vector<std::vector<std::uint32_t>> support;
    std::vector<std::pair<int, int>> parents;  // (-1, -1) for fresh rows
    std::set<SymbolId> targets;
};

Structure random_structure(RngStream& rng) {
    Structure s;
    s.n = std::uniform_int_distribution<int>(2, 8)(rng);
    s.known = std::uniform_int_distribution<int>(0, s.n / 2)(rng);
    const int rows = std::uniform_int_distribution<int>(1, s.n + 1)(rng);
    std::bernoulli_distribution half(0.5), quarter(0.25);
    for (int i = 0; i < s.known + rows; ++i) {
        if (i >= 2 && quarter(rng)) {
            std::uniform_int_distribution<int> pick(0, i - 1);
            int a = pick(rng), b = pick(rng);
            if (a == b) b = (a + 1) % i;
            s.parents.emplace_back(a, b);
            s.support.emplace_back();
            continue;
        }
        std::vector<std::uint32_t> sup;
        for (int k = 0; k < s.n; ++k)
            if (half(rng)) sup.push_back(static_cast<std::uint32_t>(k));
        if (sup.empty()) sup.push_back(std::uniform_int_distribution<std::uint32_t>(0, s.n - 1)(rng));
        s.parents.emplace_back(-1, -1);
        s.support.push_back(std::move(sup));
    }
    for (int k = 0; k < s.n; ++k)
        if (half(rng)) s.targets.insert(SymbolId{static_cast<std::uint32_t>(k)});
    if (s.targets.empty()) s.targets.insert(SymbolId{0});
    return s;
}

template <class F>
bool instantiate(const Structure& s, RngStream& rng) {
    std::vector<LinearExpr<F>> all;
    for (std::size_t i = 0; i < s.support.size(); ++i) {
        if (s.parents[i].first >= 0) {
            const auto c = random_coeffs<F>(2, rng);
            all.push_back(combine<F>({all[s.parents[i].first], all[s.parents[i].second]}, c));
            continue;
        }
        std::vector<typename LinearExpr<F>::Term> terms;
        for (auto k : s.support[i]) terms.push_back({SymbolId{k}, F::random_nonzero(rng)});
        all.push_back(LinearExpr<F>::from_terms(std::move(terms)));
    }
    const std::vector<LinearExpr<F>> known(all.begin(), all.begin() + s.known);
    const std::vector<LinearExpr<F>> eqs(all.begin() + s.known, all.end());
    return decodable<F>(eqs, known, s.targets);
}

std::string genericity(const AcceptanceOptions& o, Check& c) {
    RngStream rng = make_stream(o.base_seed, Stream::Synthetic);
    int failures = 0;
    for (int trial = 0; trial < o.generic_prime_systems; ++trial) {
        const int n = 1 + trial % 8;
        std::vector<LinearExpr<PrimeField>> eqs;
        std::set<SymbolId> targets;
        for (int r = 0; r < n; ++r) {
            std::vector<LinearExpr<PrimeField>::Term> terms;
            for (int k = 0; k < n; ++k) terms.push_back({SymbolId{static_cast<std::uint32_t>(k)}, PrimeField::random_nonzero(rng)});
            eqs.push_back(LinearExpr<PrimeField>::from_terms(std::move(terms)));
            targets.insert(SymbolId{static_cast<std::uint32_t>(r)});
        }
        failures += !decodable<PrimeField>(eqs, {}, targets);
    }
    c.expect(failures == 0, std::to_string(failures) + " generic prime systems undecodable");
    int disagree = 0, positive = 0;
    for (int trial = 0; trial < o.generic_shared_instances; ++trial) {
        const Structure s = random_structure(rng);
        const bool p = instantiate<PrimeField>(s, rng);
        const bool z = instantiate<ComplexField>(s, rng);
        disagree += p != z;
        positive += p;
    }
    c.expect(disagree == 0, std::to_string(disagree) + " complex/prime disagreements");
    // A degree-n determinant vanishes at a uniform nonzero point with probability at most n/(p-1).
    const double bound = 8.0 * o.generic_prime_systems / static_cast<double>(PrimeField::modulus - 1);
    return std::to_string(o.generic_prime_systems) + " prime systems (failure bound " + num(bound) + "), " +
           std::to_string(o.generic_shared_instances) + " shared instances (" + std::to_string(positive) + " decodable)";
}

struct Entry {
    const char* name;
    double budget;
    std::function<std::string(const AcceptanceOptions&, Check&)> run;
};

const std::vector<Entry>& entries() {
    static const std::vector<Entry> s = {
        {"golden", 1, golden},         {"consistency", 10, consistency}, {"asymptotics", 0, asymptotics},
        {"ordering", 0, ordering},     {"selection", 0, selection},    {"simulation", 60, simulation},
        {"phases", 0, phases},         {"genericity", 0, genericity},
    };
    return s;
}

} // namespace

std::vector<int> scope_criteria(const std::string& scope) {
    if (scope == "all") return {1, 2, 3, 4, 5, 6, 7, 8};
    if (scope == "appendices") return {2};
    const auto& s = entries();
    for (std::size_t i = 0; i < s.size(); ++i)
        if (scope == s[i].name) return {static_cast<int>(i) + 1};
    throw std::invalid_argument("unknown scope: " + scope);
}

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
    const auto& s = entries();
    if (id < 1 || id > static_cast<int>(s.size())) throw std::invalid_argument("unknown criterion " + std::to_string(id));
    const Entry& sp = s[id - 1];
    CriterionResult r;
    r.id = id;
    r.name = sp.name;
    r.budget_seconds = sp.budget;
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        r.detail = sp.run(options, c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = c.ok;
    if (!c.ok) r.detail = c.first.str() + (c.failures > 1 ? " (+" + std::to_string(c.failures - 1) + " more)" : "");
    if (r.budget_seconds > 0 && r.seconds > r.budget_seconds) {
        r.pass = false;
        r.detail += "; over time budget";
    }
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
    std::vector<int> ids = options.criteria.empty() ? scope_criteria("all") : options.criteria;
    std::vector<CriterionResult> out;
    for (int id : ids) out.push_back(run_criterion(id, options));
    return out;
}

std::string format_line(const CriterionResult& r) {
    char head[128];
    if (r.budget_seconds > 0)
        std::snprintf(head, sizeof head, "%s [%d] %s (%.2f s / %g s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                      r.budget_seconds);
    else
        std::snprintf(head, sizeof head, "%s [%d] %s (%.2f s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    return head + r.detail;
}

} // namespace retroalign::verify
