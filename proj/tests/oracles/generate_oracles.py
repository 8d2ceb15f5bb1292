#!/usr/bin/env python3
"""Regenerates tests/oracle_values.hpp from extended-precision series sums.

Every value is produced by direct summation of the defining power series in
mpmath at a working precision large enough to absorb the cancellation of the
alternating terms, and is rounded to 20 significant digits. None of this code
shares a path with the C++ implementation.
"""
import mpmath as mp
from pathlib import Path

WORK_DPS = 450


def ml_series(alpha, beta2, z):
    """E_{alpha,beta2}(z) by the Taylor series, summed until terms vanish."""
    with mp.workdps(WORK_DPS):
        alpha, beta2, z = mp.mpf(alpha), mp.mpf(beta2), mp.mpmathify(z)
        total, n, small = mp.mpf(0), 0, 0
        while True:
            term = z**n * mp.rgamma(beta2 + alpha * n)
            total += term
            if abs(term) < mp.mpf(10) ** (-60) * max(1, abs(total)):
                small += 1
                if small > 5 and n * alpha > abs(z) ** (1 / alpha):
                    return total
            else:
                small = 0
            n += 1


def mwright_series(beta, z):
    with mp.workdps(WORK_DPS):
        beta, z = mp.mpf(beta), mp.mpf(z)
        total, n, small = mp.mpf(0), 0, 0
        while True:
            term = (-z) ** n / mp.factorial(n) * mp.rgamma(-beta * n + 1 - beta)
            total += term
            if abs(term) < mp.mpf(10) ** (-60) and n > 10:
                small += 1
                if small > 5:
                    return total
            else:
                small = 0
            n += 1


def counting_pmf_series(beta, t, k):
    """P(N(t)=k) = t^{beta k} sum_n C(n+k,k) (-t^beta)^n / Gamma(beta(n+k)+1)."""
    with mp.workdps(WORK_DPS):
        beta, t = mp.mpf(beta), mp.mpf(t)
        x = t**beta
        total, n, small = mp.mpf(0), 0, 0
        while True:
            term = mp.binomial(n + k, k) * (-x) ** n * mp.rgamma(beta * (n + k) + 1)
            total += term
            if abs(term) < mp.mpf(10) ** (-60) and n > 10:
                small += 1
                if small > 5:
                    return x**k * total
            else:
                small = 0
            n += 1


def fmt(v):
    return mp.nstr(mp.mpf(v), 20, min_fixed=-5, max_fixed=5)


def main():
    out = []
    out.append("// Generated by tests/oracles/generate_oracles.py; do not edit.")
    out.append("#pragma once\n")
    out.append("#include <array>\n")
    out.append("namespace fracwalk::oracle {\n")
    out.append("struct MlPoint {\n  double alpha;\n  double z;\n  double value;\n};\n")

    alphas = [0.25, 0.5, 0.75, 1.0]
    zs = [mp.mpf(-5) + mp.mpf(7) * i / 49 for i in range(50)]
    rows = []
    for a in alphas:
        for z in zs:
            rows.append((a, z, ml_series(a, 1, z)))
    out.append(f"inline constexpr std::array<MlPoint, {len(rows)}> kMlGrid{{{{")
    for a, z, v in rows:
        out.append(f"    {{{a}, {fmt(z)}, {fmt(v)}}},")
    out.append("}};\n")

    out.append("struct Ml2Point {\n  double alpha;\n  double beta2;\n  double z;\n  double value;\n};\n")
    pts2 = [(0.7, 0.7, -3), (0.5, 0.5, -1), (0.5, 0.5, -4), (0.25, 0.25, -2), (0.8, 0.8, -10),
            (0.5, 1, -1), (1, 2, 1.5), (1, 2, -2), (1.5, 1, -7), (1.5, 1.2, 3), (0.3, 0.3, -0.001),
            (0.75, 0.75, -50), (0.5, 0.5, -31.6227766016837933), (0.9, 1.0, -200)]
    out.append(f"inline constexpr std::array<Ml2Point, {len(pts2)}> kMlTwoPoints{{{{")
    for a, b, z in pts2:
        out.append(f"    {{{a}, {b}, {fmt(mp.mpf(z))}, {fmt(ml_series(a, b, mp.mpf(z)))}}},")
    out.append("}};\n")

    out.append("struct MlComplexPoint {\n  double alpha;\n  double re;\n  double im;\n  double value_re;\n  double value_im;\n};\n")
    cpts = [(0.5, 1, 1), (0.8, -2, 3), (1.5, 0, 4), (0.6, 3, -2), (2.0, -5, 1)]
    out.append(f"inline constexpr std::array<MlComplexPoint, {len(cpts)}> kMlComplex{{{{")
    for a, re, im in cpts:
        v = ml_series(a, 1, mp.mpc(re, im))
        out.append(f"    {{{a}, {re}, {im}, {fmt(v.real)}, {fmt(v.imag)}}},")
    out.append("}};\n")

    out.append("struct MWrightPoint {\n  double beta;\n  double z;\n  double value;\n};\n")
    mpts = [(0.25, 0.5), (0.25, 2.0), (0.25, 6.0), (0.5, 1.0), (0.75, 0.5), (0.75, 1.5), (0.9, 1.2), (0.3, 10.0)]
    out.append(f"inline constexpr std::array<MWrightPoint, {len(mpts)}> kMWright{{{{")
    for b, z in mpts:
        out.append(f"    {{{b}, {z}, {fmt(mwright_series(b, z))}}},")
    out.append("}};\n")

    out.append("struct PmfPoint {\n  double beta;\n  double t;\n  int k;\n  double value;\n};\n")
    ppts = [(0.5, 1, 0), (0.5, 1, 1), (0.5, 1, 3), (0.9, 5, 2), (0.5, 5, 7), (0.7, 2, 4)]
    out.append(f"inline constexpr std::array<PmfPoint, {len(ppts)}> kCountingPmf{{{{")
    for b, t, k in ppts:
        out.append(f"    {{{b}, {t}, {k}, {fmt(counting_pmf_series(b, t, k))}}},")
    out.append("}};\n")

    out.append("}  // namespace fracwalk::oracle")
    path = Path(__file__).resolve().parent.parent / "oracle_values.hpp"
    path.write_text("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
