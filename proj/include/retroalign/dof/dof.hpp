#pragma once

#include "retroalign/model.hpp"
#include "retroalign/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace retroalign::dof {

// Phase-m parameters of the interference-channel cascades.
int q_min(int m, int n);
int l_lcm(int m, int n);
BigInt alpha(int m, int K);

// IC values carry a flag: K = 2 is outside the formula domain and reports 1.
struct DofValue {
    Rational value;
    bool supported = true;
};

// Full-duplex delayed CSIT interference channel.
DofValue dof_icfd_recursive(int m, int K);
DofValue dof_icfd_closed(int K);

// Output feedback interference channel.
Rational dof_icof_order(int m, int K);
Rational dof_icof_order_recursive(int m, int K);
Rational icof_a(int K);
// Objective of the phase-1 choice of w active transmitters, closed form.
Rational icof_objective(int w, int K);
// Same objective composed from the phase-w order DoF.
Rational icof_objective_recursive(int w, int K);

struct MuSelection {
    int mu = 2;
    double w_star = 0;
    int floor_candidate = 2;
    int ceil_candidate = 2;
};
MuSelection mu_selection(int K);
int mu_star(int K);
// Argmax over [2, ceil(K/2)] by exhaustive exact comparison, ties to the smaller w.
int mu_exhaustive(int K);
DofValue dof_icof(int K);

// Shannon feedback interference channel.
Rational dof_icsf_order(int m, int K);
Rational dof_icsf_order_recursive(int m, int K);
// Round-1 value for a given number w of simultaneously active transmitters.
Rational icsf_objective(int w, int K);

struct IcsfOptimum {
    Rational value;
    int nu = 2;
    std::vector<Rational> per_w;  // index w - 2
    bool tie = false;
};
IcsfOptimum icsf_optimum(int K);
DofValue dof_icsf(int K);
int nu_star(int K);

// X channels.
Rational dof_xfd(int M, int K);
// D_m of the phase recursion, D_K = 1; D_1 is the achieved DoF.
Rational dof_xfd_recursive(int m, int M, int K);
Rational dof_xof(int K);
Rational dof_xsf(int K);
Rational dof_xsf_composed(int K);

// Analytic DoF of a model at (K, M), after parameter checks.
DofValue analytic(const ModelId& model, int K, int M);

// Large-K limits.
inline constexpr int kWideM = -1;
struct Limit {
    double value = 0;
    std::optional<Rational> exact;
};
// M selects the XFD family: a fixed M >= 2, or kWideM for M > K/2.
Limit asymptote(const ModelId& model, std::optional<int> M = std::nullopt);

struct SweepRow {
    std::string model;
    int K = 0;
    int comparisons = 0;
    bool ok = true;
};
struct Mismatch {
    std::string model;
    int m = 0;
    int K = 0;
    int M = 0;
    Rational closed;
    Rational recursive;
    std::string describe() const;
};
struct SweepReport {
    std::vector<SweepRow> rows;
    std::optional<Mismatch> first_mismatch;
    int comparisons = 0;
    bool ok() const { return !first_mismatch; }
};
struct SweepOptions {
    // Negative control: adds this offset to Q_m inside the recursions.
    int q_offset = 0;
};
SweepReport consistency_sweep(int K_max, const SweepOptions& options = {});

} // namespace retroalign::dof
