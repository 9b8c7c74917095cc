#pragma once

#include "retroalign/model.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace retroalign::schemes {

using Mask = std::uint32_t;
inline constexpr int kMaxNodes = 8;

enum class PhaseKind {
    IcPairFresh,    // full-duplex IC phase 1: transmitter pairs per 3-subset
    IcFreshGroups,  // output-feedback IC phase 1 with w active transmitters
    IcCascade,      // FD/OF IC phase m: order m -> m+1
    IcRepeat,       // FD/OF IC phase K-1
    SfFreshPairs,   // Shannon IC round 1 with two active transmitters
    SfCascade,      // Shannon phase m: order m -> m+1
    Broadcast,      // one symbol per slot from its lowest-index holder
    XofFresh,       // X output feedback phase 1
    XofPairs,       // X output feedback phase 2
    XsfRound1,      // X Shannon round 1, one repetition per j0
    XsfTriples,     // X Shannon order-2 -> order-3 conversion
    XfdPairFresh,   // X full-duplex phase 1 over a list of transmitter pairs
    XfdHub,         // 3x3 full-duplex order-2 -> order-3 step through a hub
    XfdCaseOne,     // X full-duplex phase m, M > ceil(K/2)
};

std::string kind_name(PhaseKind k);

struct PhaseDescriptor {
    PhaseKind kind = PhaseKind::Broadcast;
    int m = 0;  // order parameter: w for IcFreshGroups, m for cascades
    int hub = -1;
    std::vector<Mask> tx_pairs;  // XfdPairFresh
    long long repetitions = 1;
    std::string label;
};

// Symbol class: receivers desiring it, receivers already holding it, transmitters holding it.
struct TypeKey {
    Mask desired = 0;
    Mask known = 0;
    Mask holders = 0;
    friend auto operator<=>(const TypeKey&, const TypeKey&) = default;
};

using TypeCounts = std::map<TypeKey, long long>;

struct PhaseLedger {
    std::string label;
    long long fresh = 0;
    long long consumed = 0;
    int consumed_order = 0;
    long long slots = 0;
    long long produced = 0;
    int produced_order = 0;

    friend bool operator==(const PhaseLedger&, const PhaseLedger&) = default;
    std::string describe() const;
};

struct Policy {
    std::string name;
    ModelId model;
    int M = 0;
    int K = 0;
    bool adaptive = false;
    std::vector<PhaseDescriptor> phases;

    long long total_slots() const;
    long long total_fresh() const;
};

// Per-unit ledger from closed-form counting identities.
PhaseLedger expected_ledger(const Policy& p, const PhaseDescriptor& d);
// Same, scaled by the descriptor's repetitions.
PhaseLedger expected_total(const Policy& p, const PhaseDescriptor& d);

// Per-unit symbol demand and supply by type. Broadcast demand is resolved by the planner.
TypeCounts phase_demand(const Policy& p, const PhaseDescriptor& d);
TypeCounts phase_supply(const Policy& p, const PhaseDescriptor& d);

// Sets integer repetitions so each phase consumes exactly what its predecessor produces.
void plan_repetitions(Policy& p);

Policy build_icfd(int K);
Policy build_icof(int K);
Policy build_icsf(int K);
Policy build_xof(int K);
Policy build_xfd(int M, int K);
Policy build_xsf(int K);
// Dispatch on model; M is ignored except for XFD.
Policy build_policy(const ModelId& model, int K, int M);

// Descriptor for a single phase m of a model, for standalone verification.
PhaseDescriptor phase_for(const ModelId& model, int m, int K, int M);

// Mask utilities.
inline Mask bit(int i) { return Mask{1} << i; }
inline Mask all_nodes(int n) { return (Mask{1} << n) - 1; }
int popcount(Mask m);
std::vector<int> members(Mask m);
// k-subsets of `universe`, lexicographic over sorted members.
std::vector<Mask> subsets(Mask universe, int k);
// Cyclic successor / predecessor of r inside s.
int cyclic_next(Mask s, int r);
int cyclic_prev(Mask s, int r);
std::string mask_str(Mask m);

} // namespace retroalign::schemes
