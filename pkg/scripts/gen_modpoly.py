#!/usr/bin/env python3
"""Regenerate the classical modular polynomial data files phi{2,3,5,7}.txt.

Construction over the integers from q-expansions: with f_0 = j(l*tau) and
f_b = j((tau+b)/l), the product Phi_l(X, j) = prod (X - f) has coefficients
that are integer q-series, each reducible to a polynomial in j by stripping
principal parts.  Power sums of the f_b need no roots of unity: summing over
b keeps exactly the exponents divisible by l.

Checks before writing: the known Phi_2 table, symmetry, and the Kronecker
congruence Phi_l = (X^l - Y)(X - Y^l) mod l.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

ELLS = (2, 3, 5, 7)
TAIL = 12  # extra verified-zero coefficients beyond each reduction

PHI2_KNOWN = {
    (3, 0): 1,
    (2, 2): -1,
    (2, 1): 1488,
    (2, 0): -162000,
    (1, 1): 40773375,
    (1, 0): 8748000000,
    (0, 0): -157464000000000,
}

J_HEAD = [1, 744, 196884, 21493760, 864299970, 20245856256]  # exponents -1..4


# ---- integer Laurent series as {exponent: coefficient} dicts ----------------


def ser_trunc(s, hi):
    return {e: c for e, c in s.items() if c and e <= hi}


def ser_add(a, b):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
        if not out[e]:
            del out[e]
    return out


def ser_scale(a, k):
    return {e: c * k for e, c in a.items() if c * k}


def ser_mul(a, b, hi):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            if e <= hi:
                out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def ser_inv_unit(a, hi):
    """Inverse of a series with a[0] = 1 and no negative exponents."""
    assert a.get(0) == 1 and min(a) == 0
    out = {0: 1}
    for n in range(1, hi + 1):
        c = -sum(a.get(k, 0) * out.get(n - k, 0) for k in range(1, n + 1))
        if c:
            out[n] = c
    return out


def j_series(hi) -> dict:
    """q-expansion of j as E4^3 / Delta, exponents -1..hi, all integers."""
    n = hi + 2
    sig3 = [0] * (n + 1)
    for d in range(1, n + 1):
        for m in range(d, n + 1, d):
            sig3[m] += d**3
    e4 = {0: 1}
    for m in range(1, n + 1):
        e4[m] = 240 * sig3[m]
    e4cubed = ser_mul(ser_mul(e4, e4, n), e4, n)
    # Delta / q = prod (1 - q^m)^24
    eta = {0: 1}
    for m in range(1, n + 1):
        eta = ser_mul(eta, {0: 1, m: -1}, n)
    eta24 = {0: 1}
    for _ in range(24):
        eta24 = ser_mul(eta24, eta, n)
    jq = ser_mul(e4cubed, ser_inv_unit(eta24, n), n)  # q * j
    j = {e - 1: c for e, c in jq.items() if e - 1 <= hi}
    for t, want in enumerate(J_HEAD):
        assert j.get(t - 1, 0) == want, f"j-series coefficient q^{t-1} wrong"
    return j


def power_sums(j, ell, kmax, hi):
    """P_k = j(l tau)^k + sum_b j((tau+b)/l)^k, exact through exponent hi."""
    jpow = {0: {0: 1}}
    for k in range(1, kmax + 1):
        jpow[k] = ser_mul(jpow[k - 1], j, hi * ell)
    out = {}
    for k in range(1, kmax + 1):
        up = {e * ell: c for e, c in jpow[k].items() if e * ell <= hi}
        down = {e // ell: c * ell for e, c in jpow[k].items() if e % ell == 0 and e // ell <= hi}
        out[k] = ser_trunc(ser_add(up, down), hi)
    return out


def newton_elementary(psums, kmax, ell):
    """Elementary symmetric functions from power sums; must come out integral.

    e_m is only exact where every product contributing to it is; the window
    TAIL + l*(kmax - m) keeps each round exact through exponent TAIL.
    """
    es = {0: {0: 1}}
    for k in range(1, kmax + 1):
        window = TAIL + ell * (kmax - k)
        acc = {}
        for t in range(1, k + 1):
            term = ser_mul(es[k - t], psums[t], window)
            acc = ser_add(acc, ser_scale(term, (-1) ** (t - 1)))
        ek = {}
        for e, c in ser_trunc(acc, window).items():
            f = Fraction(c, k)
            assert f.denominator == 1, "elementary symmetric functions must be integral"
            ek[e] = int(f)
        es[k] = ek
    return es


def reduce_to_j_polynomial(series, j, hi):
    """Write a weight-0 integer series as a polynomial in j; the remainder
    must vanish through the verified tail."""
    coeffs = {}
    jpow = {0: {0: 1}}
    degree = max(0, -min(series)) if series else 0
    for n in range(1, degree + 1):
        # carry intermediate powers wide enough that j^n is exact through hi
        jpow[n] = ser_mul(jpow[n - 1], j, hi + degree - n)
    work = ser_trunc(series, hi)
    for n in range(degree, -1, -1):
        c = work.get(-n, 0)
        if c:
            coeffs[n] = c
            work = ser_add(work, ser_scale(ser_trunc(jpow[n], hi), -c))
    assert not any(c for e, c in work.items() if e <= hi), "series is not a polynomial in j"
    return coeffs


def modular_polynomial(ell: int) -> dict:
    kmax = ell + 1
    hi_work = TAIL + ell * kmax
    j = j_series(ell * hi_work)
    psums = power_sums(j, ell, kmax, hi_work)
    es = newton_elementary(psums, kmax, ell)
    table = {}
    table[(kmax, 0)] = 1
    for t in range(1, kmax + 1):
        poly = reduce_to_j_polynomial(ser_scale(es[t], (-1) ** t), j, TAIL)
        for n, c in poly.items():
            a, b = kmax - t, n
            if a >= b:
                table[(a, b)] = c
            else:
                prev = table.get((b, a))
                assert prev is None or prev == c, "asymmetric table"
                table[(b, a)] = c
    # symmetry check on the full expansion
    full = {}
    for (a, b), c in table.items():
        full[(a, b)] = c
        full[(b, a)] = c
    for (a, b), c in full.items():
        assert full.get((b, a)) == c, "Phi must be symmetric"
    # Kronecker congruence
    expect = {(kmax, 0): 1, (0, kmax): 1, (ell, ell): -1, (1, 1): -1}
    for a in range(kmax + 1):
        for b in range(kmax + 1):
            assert full.get((a, b), 0) % ell == expect.get((a, b), 0) % ell, (
                f"Kronecker congruence fails at ({a},{b})"
            )
    if ell == 2:
        assert table == PHI2_KNOWN | {(3, 0): 1}, "Phi_2 does not match the classical table"
    return table


def main() -> None:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "src/qisog/data"
    outdir.mkdir(parents=True, exist_ok=True)
    for ell in ELLS:
        table = modular_polynomial(ell)
        path = outdir / f"phi{ell}.txt"
        with open(path, "w") as fh:
            fh.write(f"ell {ell}\n")
            for (a, b) in sorted(table, reverse=True):
                fh.write(f"{a} {b} {table[(a, b)]}\n")
        print(f"wrote {path} ({len(table)} terms)")


if __name__ == "__main__":
    main()
