#pragma once

#include "retroalign/schemes/policy.hpp"
#include "retroalign/sim/simulator.hpp"

#include <array>
#include <deque>
#include <iosfwd>
#include <map>
#include <vector>

namespace retroalign::schemes {

// An aggregate coded symbol with its holders and desiring/knowing receivers.
// csi[i] is what transmitter i needs to know to reproduce expr.
template <class F>
struct SymbolSpec {
    LinearExpr<F> expr;
    Mask tx_holders = 0;
    Mask rx_desired = 0;
    Mask rx_known = 0;
    int order = 0;
    std::array<CsiUse, kMaxNodes> csi{};

    TypeKey key() const { return {rx_desired, rx_known, tx_holders}; }
};

struct RunOptions {
    std::uint64_t seed = 1;
    bool strict = true;
    std::ostream* trace = nullptr;
};

template <class F>
struct RunResult {
    SimReport report;
    std::vector<PhaseLedger> expected;
    std::vector<PhaseLedger> actual;
    NodeState<F> state;
    SymbolPool pool;

    bool ledgers_match() const { return expected == actual; }
};

template <class F>
RunResult<F> execute(const Policy& policy, const RunOptions& options);

struct PhaseVerification {
    PhaseLedger expected;
    PhaseLedger actual;
    std::map<int, bool> decodable;
    std::vector<Violation> violations;
    std::vector<std::string> diagnostics;

    bool ledger_ok() const { return expected == actual; }
    bool all_decodable() const;
    bool ok() const { return ledger_ok() && all_decodable() && violations.empty() && diagnostics.empty(); }
};

// Runs phase m alone on synthesized inputs and checks its ledger and post-grant decodability.
template <class F>
PhaseVerification verify_phase(const ModelId& model, int m, int K, int M, std::uint64_t seed);

} // namespace retroalign::schemes
