#include "retroalign/dof/dof.hpp"

#include "retroalign/dof/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace retroalign::dof {

namespace {

int ceil_half(int K) { return (K + 1) / 2; }
int floor_half(int K) { return K / 2; }

void require(bool ok, const char* what) {
    if (!ok) throw ParameterError(what);
}

// Shared by the full-duplex and output-feedback cascades for 2 <= m <= K-1.
Rational ic_cascade_order(int m, int K, int q_offset) {
    Rational d(K, K - 1);
    for (int j = K - 2; j >= m; --j) {
        const int q = q_min(j, K) + q_offset;
        d = Rational(static_cast<long long>(j + 1) * q, j) / (Rational(1) + Rational(q - 1) / d);
    }
    return d;
}

Rational icsf_order_rec(int m, int K, int q_offset) {
    Rational d(1);
    for (int j = K - 1; j >= m; --j) {
        const int q = q_min(j, K + 1) + q_offset;
        d = Rational(q) / (Rational(1) + Rational(static_cast<long long>(j) * (q - 1), j + 1) / d);
    }
    return d;
}

Rational xfd_rec(int m, int M, int K, int q_offset) {
    Rational d(1);
    for (int j = K - 1; j >= m; --j) {
        const int q = std::min({M - 1, K - j, j}) + q_offset;
        d = Rational(static_cast<long long>(j + 1) * (q + 1)) / (Rational(j + 1) + Rational(static_cast<long long>(j) * q) / d);
    }
    return d;
}

Rational icfd_rec(int m, int K, int q_offset) {
    if (m == 1) return Rational(2) / (Rational(1) + ic_cascade_order(2, K, q_offset).inverse());
    return ic_cascade_order(m, K, q_offset);
}

Rational xsf_composed(int K, int q_offset) {
    Rational d2 = K == 2 ? Rational(1) : Rational(6) / (Rational(3) + Rational(2) / icsf_order_rec(3, K, q_offset));
    const long long k = K;
    return Rational(k * k) / (Rational(k) + Rational((k - 1) * (k - 2), 2) + Rational(k - 1) / d2);
}

} // namespace

int q_min(int m, int n) {
    require(1 <= m && m < n, "q_min: need 1 <= m < n");
    return std::min(n - m, m);
}

int l_lcm(int m, int n) {
    require(1 <= m && m < n, "l_lcm: need 1 <= m < n");
    return std::lcm(n - m, m);
}

BigInt alpha(int m, int K) {
    require(2 <= m && m <= K - 2, "alpha: need 2 <= m <= K-2");
    return binomial(K, m + 1) * binomial(K - m - 1, q_min(m, K) - 1) * l_lcm(m, K);
}

DofValue dof_icfd_recursive(int m, int K) {
    if (K == 2) return {Rational(1), false};
    require(K >= 3 && 1 <= m && m <= K - 1, "dof_icfd_recursive: need K >= 3, 1 <= m <= K-1");
    return {icfd_rec(m, K, 0), true};
}

DofValue dof_icfd_closed(int K) {
    if (K == 2) return {Rational(1), false};
    require(K >= 3, "dof_icfd_closed: need K >= 3");
    const long long c = ceil_half(K), f = floor_half(K);
    Rational den = Rational(3) - Rational(2, c * (c - 1)) + Rational(4, f * (c - 1)) * harmonic(c + 1, K);
    return {Rational(4) / den, true};
}

Rational dof_icof_order(int m, int K) {
    require(K >= 3 && 2 <= m && m <= K - 1, "dof_icof_order: need 2 <= m <= K-1");
    const long long c = ceil_half(K), f = floor_half(K), mm = m;
    if (m <= c) {
        Rational den = Rational(1, 2) - Rational(mm * (mm - 1), 2 * c * (c - 1)) +
                       Rational(mm * (mm - 1), f * (c - 1)) * harmonic(c + 1, K);
        return den.inverse();
    }
    return (Rational(mm, K - mm) * harmonic(m + 1, K)).inverse();
}

Rational dof_icof_order_recursive(int m, int K) {
    require(K >= 3 && 2 <= m && m <= K - 1, "dof_icof_order_recursive: need 2 <= m <= K-1");
    return ic_cascade_order(m, K, 0);
}

Rational icof_a(int K) {
    require(K >= 3, "icof_a: need K >= 3");
    const long long c = ceil_half(K), f = floor_half(K);
    return Rational(1, c - 1) * (Rational(-1, 2 * c) + Rational(1, f) * harmonic(c + 1, K));
}

Rational icof_objective(int w, int K) {
    require(K >= 3 && 2 <= w && w <= ceil_half(K), "icof_objective: need 2 <= w <= ceil(K/2)");
    const Rational W(w);
    return W / (icof_a(K) * W * (W - 1) * (W - 1) + (W + 1) / 2);
}

Rational icof_objective_recursive(int w, int K) {
    require(K >= 3 && 2 <= w && w <= K - 1, "icof_objective_recursive: need 2 <= w <= K-1");
    return Rational(w) / (Rational(1) + Rational(w - 1) / dof_icof_order_recursive(w, K));
}

MuSelection mu_selection(int K) {
    require(K >= 3, "mu_star: need K >= 3");
    const int hi = ceil_half(K);
    MuSelection s;
    const double a = icof_a(K).to_double();
    const double root = std::sqrt(48 * a + 81);
    s.w_star = 1.0 / 3 + std::cbrt((8 * a + 3 * root + 27) / a) / 6 + std::cbrt((8 * a - 3 * root + 27) / a) / 6;
    const double fl = std::floor(s.w_star);
    s.floor_candidate = static_cast<int>(std::clamp(fl, 2.0, static_cast<double>(hi)));
    s.ceil_candidate = static_cast<int>(std::clamp(fl + 1, 2.0, static_cast<double>(hi)));
    if (s.ceil_candidate < s.floor_candidate) s.ceil_candidate = s.floor_candidate;
    const bool take_ceil = icof_objective(s.ceil_candidate, K) > icof_objective(s.floor_candidate, K);
    s.mu = take_ceil ? s.ceil_candidate : s.floor_candidate;
    return s;
}

int mu_star(int K) { return mu_selection(K).mu; }

int mu_exhaustive(int K) {
    require(K >= 3, "mu_exhaustive: need K >= 3");
    int best = 2;
    Rational best_v = icof_objective(2, K);
    for (int w = 3; w <= ceil_half(K); ++w) {
        Rational v = icof_objective(w, K);
        if (v > best_v) {
            best_v = v;
            best = w;
        }
    }
    return best;
}

DofValue dof_icof(int K) {
    if (K == 2) return {Rational(1), false};
    require(K >= 3, "dof_icof: need K >= 3");
    return {icof_objective(mu_star(K), K), true};
}

Rational dof_icsf_order(int m, int K) {
    require(K >= 3 && 2 <= m && m <= K, "dof_icsf_order: need 2 <= m <= K");
    const long long c = ceil_half(K), f = floor_half(K), mm = m;
    if (m <= f) {
        Rational bracket = Rational(1, mm) - Rational(1, f) - inverse_squares(m + 1, f) +
                           harmonic(f + 1, K) / Rational(f * c);
        return (Rational(1, mm) + Rational(mm * (mm - 1)) * bracket).inverse();
    }
    return (Rational(mm, K - mm + 1) * harmonic(m, K)).inverse();
}

Rational dof_icsf_order_recursive(int m, int K) {
    require(K >= 3 && 2 <= m && m <= K, "dof_icsf_order_recursive: need 2 <= m <= K");
    return icsf_order_rec(m, K, 0);
}

Rational icsf_objective(int w, int K) {
    require(K >= 3 && 2 <= w && w <= ceil_half(K), "icsf_objective: need 2 <= w <= ceil(K/2)");
    Rational den = Rational(1) + Rational(w) / (Rational(w + 1) * dof_icsf_order(w + 1, K));
    if (w > 2) den += Rational(w - 2) / dof_icof_order(w, K);
    return Rational(w) / den;
}

IcsfOptimum icsf_optimum(int K) {
    require(K >= 3, "dof_icsf: need K >= 3");
    IcsfOptimum o;
    for (int w = 2; w <= ceil_half(K); ++w) {
        Rational v = icsf_objective(w, K);
        if (o.per_w.empty() || v > o.value) {
            o.value = v;
            o.nu = w;
            o.tie = false;
        } else if (v == o.value) {
            o.tie = true;
        }
        o.per_w.push_back(v);
    }
    return o;
}

DofValue dof_icsf(int K) {
    if (K == 2) return {Rational(1), false};
    return {icsf_optimum(K).value, true};
}

int nu_star(int K) { return icsf_optimum(K).nu; }

Rational dof_xfd(int M, int K) {
    require(M >= 2 && K >= 2, "dof_xfd: need M >= 2 and K >= 2");
    const long long c = ceil_half(K), f = floor_half(K);
    if (M > c) {
        Rational den = Rational(1, c) - 1 + inverse_squares(1, c - 1) + harmonic(c, K) / Rational(c * (f + 1));
        return den.inverse();
    }
    const Rational r(M - 1, M);
    Rational tail(0);
    for (int l = M - 1; l <= K; ++l) tail += r.pow(std::min(l, K - M + 1) - M) / Rational(l);
    const long long mm = M;
    Rational den = Rational(1, mm - 1) - 1 + inverse_squares(1, M - 2) + tail / Rational(mm * mm);
    return den.inverse();
}

Rational dof_xfd_recursive(int m, int M, int K) {
    require(M >= 2 && K >= 2 && 1 <= m && m <= K, "dof_xfd_recursive: need M, K >= 2 and 1 <= m <= K");
    return xfd_rec(m, M, K, 0);
}

Rational dof_xof(int K) {
    require(K >= 2, "dof_xof: need K >= 2");
    return Rational(2LL * K, K + 1);
}

Rational dof_xsf(int K) {
    require(K >= 2, "dof_xsf: need K >= 2");
    const long long k = K, c = ceil_half(K), f = floor_half(K);
    Rational den = Rational(k * k + 7 * k - 6, 2) - Rational(2 * (k - 1), f) - Rational(2 * (k - 1)) * inverse_squares(1, f) +
                   Rational(2 * (k - 1), f * c) * harmonic(f + 1, K);
    return Rational(k * k) / den;
}

Rational dof_xsf_composed(int K) {
    require(K >= 2, "dof_xsf_composed: need K >= 2");
    return xsf_composed(K, 0);
}

DofValue analytic(const ModelId& model, int K, int M) {
    check_model_params(model, M, K);
    if (model.channel == Channel::IC) {
        switch (model.feedback) {
        case Feedback::FullDuplexDelayedCSIT: return dof_icfd_closed(K);
        case Feedback::OutputFeedback: return dof_icof(K);
        case Feedback::ShannonFeedback: return dof_icsf(K);
        }
    }
    switch (model.feedback) {
    case Feedback::FullDuplexDelayedCSIT: return {dof_xfd(M, K), true};
    case Feedback::OutputFeedback: return {dof_xof(K), true};
    case Feedback::ShannonFeedback: return {dof_xsf(K), true};
    }
    return {};
}

Limit asymptote(const ModelId& model, std::optional<int> M) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    if (model.channel == Channel::IC) {
        if (model.feedback == Feedback::FullDuplexDelayedCSIT) return {4.0 / 3.0, Rational(4, 3)};
        return {2.0, Rational(2)};
    }
    if (model.feedback != Feedback::FullDuplexDelayedCSIT) return {2.0, Rational(2)};
    if (!M || *M == kWideM) return {6.0 / (pi2 - 6.0), std::nullopt};
    require(*M >= 2, "asymptote: need M >= 2");
    const double m = *M;
    const double g = m / (m - 1);
    double s2 = 0, tail = 0;
    for (int l = 1; l <= *M - 2; ++l) {
        s2 += 1.0 / (static_cast<double>(l) * l);
        tail += std::pow(g, *M - 2 - l) / l;
    }
    const double bracket = std::pow(g, *M - 2) * std::log(m) - tail;
    return {1.0 / (1.0 / (m - 1) - 1 + s2 + bracket / ((m - 1) * (m - 1))), std::nullopt};
}

std::string Mismatch::describe() const {
    std::ostringstream os;
    os << model << " K=" << K;
    if (m) os << " m=" << m;
    if (M) os << " M=" << M;
    os << ": closed " << closed << " vs recursive " << recursive;
    return os.str();
}

SweepReport consistency_sweep(int K_max, const SweepOptions& options) {
    require(K_max >= 3, "consistency_sweep: need K_max >= 3");
    const int qo = options.q_offset;
    SweepReport rep;
    for (int K = 3; K <= K_max; ++K) {
        auto check = [&](SweepRow& row, int m, int M, const Rational& closed, const Rational& rec) {
            ++row.comparisons;
            ++rep.comparisons;
            if (closed == rec) return;
            row.ok = false;
            if (!rep.first_mismatch) rep.first_mismatch = Mismatch{row.model, m, K, M, closed, rec};
        };

        SweepRow icfd{"icfd", K};
        check(icfd, 1, 0, dof_icfd_closed(K).value, icfd_rec(1, K, qo));
        rep.rows.push_back(icfd);

        SweepRow icof{"icof", K};
        for (int m = 2; m <= K - 1; ++m) check(icof, m, 0, dof_icof_order(m, K), ic_cascade_order(m, K, qo));
        for (int w = 2; w <= ceil_half(K); ++w)
            check(icof, w, 0, icof_objective(w, K),
                  Rational(w) / (Rational(1) + Rational(w - 1) / ic_cascade_order(w, K, qo)));
        rep.rows.push_back(icof);

        SweepRow icsf{"icsf", K};
        for (int m = 2; m <= K; ++m) check(icsf, m, 0, dof_icsf_order(m, K), icsf_order_rec(m, K, qo));
        rep.rows.push_back(icsf);

        SweepRow xfd{"xfd", K};
        for (int M = 2; M <= K + 2; ++M) check(xfd, 1, M, dof_xfd(M, K), xfd_rec(1, M, K, qo));
        rep.rows.push_back(xfd);

        SweepRow xof{"xof", K};
        const long long k = K;
        check(xof, 0, K, dof_xof(K), Rational(k * k) / Rational(k + k * (k - 1) / 2));
        rep.rows.push_back(xof);

        SweepRow xsf{"xsf", K};
        check(xsf, 0, K, dof_xsf(K), xsf_composed(K, qo));
        rep.rows.push_back(xsf);
    }
    return rep;
}

} // namespace retroalign::dof
