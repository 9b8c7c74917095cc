#!/usr/bin/env python3
"""Independent exact-fraction oracle for the DoF recursions.

Unrolls every phase recursion directly from its per-phase accounting and
prints values that the C++ tests freeze. Use:  python3 dof_oracle.py
"""
from fractions import Fraction as F
from math import comb, gcd, ceil, floor, log, pi


def q_min(m, n):
    return min(n - m, m)


def l_lcm(m, n):
    a, b = n - m, m
    return a * b // gcd(a, b)


def alpha(m, K):
    q = q_min(m, K)
    return comb(K, m + 1) * comb(K - m - 1, q - 1) * l_lcm(m, K)


def icfd_rec(m, K):
    # phase K-1 repetition
    d = F(K, K - 1)
    for mm in range(K - 2, max(m, 2) - 1, -1):
        q = q_min(mm, K)
        d = F(mm + 1, mm) * q / (1 + (q - 1) / d)
    if m == 1:
        d = 2 / (1 + 1 / d)
    return d


def icof_order(m, K):
    return icfd_rec(m, K) if m >= 2 else None


def icof_f(w, K):
    return w / (1 + (w - 1) / icof_order(w, K)) if w < K else None


def mu_exhaustive(K):
    best, arg = None, None
    for w in range(2, (K + 1) // 2 + 1):
        v = w / (1 + (w - 1) / icof_order(w, K))
        if best is None or v > best:
            best, arg = v, w
    return arg, best


def icsf_order(m, K):
    d = F(1)
    for mm in range(K - 1, m - 1, -1):
        q = q_min(mm, K + 1)
        d = F((mm + 1) * q) / (mm + 1 + mm * (q - 1) / d)
    return d


def icsf(K):
    best, arg = None, None
    for w in range(2, (K + 1) // 2 + 1):
        v = w / (1 + (w - 2) / icof_order(w, K) + F(w, w + 1) / icsf_order(w + 1, K))
        if best is None or v > best:
            best, arg = v, w
    return arg, best


def xfd_rec(M, K, m=1):
    d = F(1)
    for mm in range(K - 1, m - 1, -1):
        q = min(M - 1, K - mm, mm)
        d = F((mm + 1) * (q + 1)) / (mm + 1 + mm * q / d)
    return d


def xof(K):
    return F(2 * K, K + 1)


def xsf(K):
    if K == 2:
        d2 = F(1)  # two slots, two order-2 symbols
    else:
        d2 = 6 / (3 + 2 / icsf_order(3, K))
    return F(K * K) / (K + F((K - 1) * (K - 2), 2) + (K - 1) / d2)


if __name__ == "__main__":
    print("alpha(2,5)", alpha(2, 5), "alpha(2,4)", alpha(2, 4), "alpha(3,6)", alpha(3, 6))
    for K in range(3, 9):
        print(K, "icfd", icfd_rec(1, K), "icof", mu_exhaustive(K), "icsf", icsf(K),
              "xfd", xfd_rec(K, K), "xof", xof(K), "xsf", xsf(K))
    print("xfd22", xfd_rec(2, 2), "xfd33", xfd_rec(3, 3), "xsf2", xsf(2))
    print("icof_order(2,3)", icof_order(2, 3), "icsf_order(3,4)", icsf_order(3, 4))
    print("mu/nu up to 60:")
    print([(K, mu_exhaustive(K)[0], icsf(K)[0]) for K in range(3, 61)])
    print("icfd1000", float(icfd_rec(1, 1000)))
    print("xfd(2,500)", float(xfd_rec(2, 500)), 1 / log(2))
    print("xfd(3,500)", float(xfd_rec(3, 500)), 8 / (3 * log(3) + 2))
    print("xfd(31,60)", float(xfd_rec(31, 60)), 6 / (pi ** 2 - 6))
