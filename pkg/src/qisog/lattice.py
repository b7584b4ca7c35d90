"""Full-rank rank-4 lattices inside the quaternion algebra.

A lattice is stored as an integer matrix in row Hermite normal form together
with a positive common denominator, with the gcd of all entries and the
denominator divided out.  That canonical form makes lattice equality (and
hashing, for graph vertex identity) plain tuple equality.

No floating point is used anywhere except as a seed guess inside the
short-vector enumeration, where every bound is re-verified exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import CapExceeded, PreconditionError
from .quat import QuatAlgebra, QuatElement

Frac = Fraction


# ---------------------------------------------------------------------------
# integer / rational matrix helpers


def hnf_rows(rows: list[list[int]], ncols: int = 4) -> list[tuple[int, ...]]:
    """Row Hermite normal form; returns the nonzero rows.

    Pivots are positive and entries above a pivot are reduced into
    [0, pivot).  Rows appear in order of pivot column.
    """
    work = [list(map(int, r)) for r in rows if any(r)]
    out: list[list[int]] = []
    for col in range(ncols):
        while True:
            nz = [r for r in work if r[col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            base = nz[0]
            for r in nz[1:]:
                q = r[col] // base[col]
                for t in range(ncols):
                    r[t] -= q * base[t]
        nz = [r for r in work if r[col]]
        if nz:
            piv = nz[0]
            work = [r for r in work if r is not piv and any(r)]
            if piv[col] < 0:
                piv = [-a for a in piv]
            for r in out:
                q = r[col] // piv[col]
                if q:
                    for t in range(ncols):
                        r[t] -= q * piv[t]
            out.append(list(piv))
        else:
            work = [r for r in work if any(r)]
    return [tuple(r) for r in out]


def integer_kernel(rows: list[list[int]], ncols: int) -> list[tuple[int, ...]]:
    """Basis of {u : u.M = 0} for the integer matrix M given by rows."""
    n = len(rows)
    ext = [list(rows[i]) + [int(i == t) for t in range(n)] for i in range(n)]
    width = ncols + n
    done: list[list[int]] = []
    work = ext
    for col in range(ncols):
        while True:
            nz = [r for r in work if r[col]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            base = nz[0]
            for r in nz[1:]:
                q = r[col] // base[col]
                for t in range(width):
                    r[t] -= q * base[t]
        nz = [r for r in work if r[col]]
        if nz:
            done.append(nz[0])
            work = [r for r in work if r is not nz[0]]
    return [tuple(r[ncols:]) for r in work]


def frac_inverse(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    a = [[Frac(x) for x in row] + [Frac(int(r == c)) for c in range(n)] for r, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise PreconditionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def frac_matmul(a, b):
    return [[sum(a[r][t] * b[t][c] for t in range(len(b))) for c in range(len(b[0]))] for r in range(len(a))]


def int_det(m) -> int:
    """Determinant by fraction-free expansion; inputs are small here."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for c in range(n):
        if m[0][c]:
            minor = [[row[t] for t in range(n) if t != c] for row in m[1:]]
            total += (-1) ** c * m[0][c] * int_det(minor)
    return total


def _floor_sqrt_frac(x: Fraction) -> int:
    """floor(sqrt(x)) for x >= 0."""
    return math.isqrt(x.numerator * x.denominator) // x.denominator


def _max_c_leq(s: Fraction, r: Fraction) -> int:
    """Largest integer c with c + s <= sqrt(r), r >= 0."""
    try:
        guess = math.floor(-float(s) + math.sqrt(float(r))) if r > 0 else math.floor(-s)
    except (OverflowError, ValueError):
        guess = _floor_sqrt_frac(r) - math.ceil(s)  # exact, slightly loose

    def ok(c: int) -> bool:
        t = c + s
        return t <= 0 or t * t <= r

    while ok(guess + 1):
        guess += 1
    while not ok(guess):
        guess -= 1
    return guess


def _min_c_geq(s: Fraction, r: Fraction) -> int:
    """Smallest integer c with c + s >= -sqrt(r), r >= 0."""
    return -_max_c_leq(-s, r)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QLattice:
    """Full-rank lattice, canonical (HNF basis, reduced denominator)."""

    algebra: QuatAlgebra
    mat: tuple[tuple[int, int, int, int], ...]
    den: int

    @classmethod
    def from_int_rows(cls, algebra: QuatAlgebra, rows, den: int) -> "QLattice":
        if den <= 0:
            raise PreconditionError("denominator must be positive")
        h = hnf_rows([list(r) for r in rows])
        if len(h) != 4:
            raise PreconditionError("generators do not span a full-rank lattice")
        g = den
        for row in h:
            for x in row:
                g = math.gcd(g, abs(x))
        if g > 1:
            h = [tuple(x // g for x in row) for row in h]
            den //= g
        return cls(algebra=algebra, mat=tuple(tuple(r) for r in h), den=den)

    @classmethod
    def from_frac_rows(cls, algebra: QuatAlgebra, rows) -> "QLattice":
        rows = [[Frac(x) for x in r] for r in rows]
        den = 1
        for r in rows:
            for x in r:
                den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [[int(x * den) for x in r] for r in rows]
        return cls.from_int_rows(algebra, ints, den)

    @classmethod
    def from_elements(cls, gens) -> "QLattice":
        if not gens:
            raise PreconditionError("no generators")
        alg = gens[0].algebra
        return cls.from_frac_rows(alg, [g.coords for g in gens])

    @classmethod
    def standard_order_lattice(cls, algebra: QuatAlgebra) -> "QLattice":
        eye = [[int(r == c) for c in range(4)] for r in range(4)]
        return cls.from_int_rows(algebra, eye, 1)

    # -- basic views --------------------------------------------------------

    def key(self):
        return (self.den, self.mat)

    def basis_elements(self) -> list[QuatElement]:
        return [
            QuatElement(self.algebra, tuple(Frac(x, self.den) for x in row))
            for row in self.mat
        ]

    @cached_property
    def basis_inv(self) -> list[list[Fraction]]:
        """Inverse of the rational basis matrix; maps ambient coords to
        coordinates in this basis."""
        m = [[Frac(x, self.den) for x in row] for row in self.mat]
        return frac_inverse(m)

    def coords_of(self, elt: QuatElement) -> tuple[Fraction, ...]:
        v = elt.coords
        inv = self.basis_inv
        return tuple(sum(v[t] * inv[t][c] for t in range(4)) for c in range(4))

    def contains(self, elt: QuatElement) -> bool:
        return all(c.denominator == 1 for c in self.coords_of(elt))

    def contains_lattice(self, other: "QLattice") -> bool:
        return all(self.contains(b) for b in other.basis_elements())

    def covolume(self) -> Fraction:
        return abs(Frac(int_det([list(r) for r in self.mat]), self.den**4))

    # -- arithmetic ---------------------------------------------------------

    def _merge_rows(self, other: "QLattice"):
        d = self.den * other.den // math.gcd(self.den, other.den)
        rows = [[x * (d // self.den) for x in r] for r in self.mat]
        rows += [[x * (d // other.den) for x in r] for r in other.mat]
        return rows, d

    def __add__(self, other: "QLattice") -> "QLattice":
        rows, d = self._merge_rows(other)
        return QLattice.from_int_rows(self.algebra, rows, d)

    def __mul__(self, other):
        if isinstance(other, QLattice):
            prods = [a * b for a in self.basis_elements() for b in other.basis_elements()]
            return QLattice.from_elements(prods)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, r) -> "QLattice":
        r = Frac(r)
        if r == 0:
            raise PreconditionError("cannot scale a lattice by 0")
        rows = [[x * abs(r.numerator) for x in row] for row in self.mat]
        return QLattice.from_int_rows(self.algebra, rows, self.den * r.denominator)

    def conjugate(self) -> "QLattice":
        rows = [[r[0], -r[1], -r[2], -r[3]] for r in self.mat]
        return QLattice.from_int_rows(self.algebra, rows, self.den)

    def intersect(self, other: "QLattice") -> "QLattice":
        d = self.den * other.den // math.gcd(self.den, other.den)
        a = [[x * (d // self.den) for x in r] for r in self.mat]
        b = [[x * (d // other.den) for x in r] for r in other.mat]
        stacked = a + [[-x for x in r] for r in b]
        kern = integer_kernel(stacked, 4)
        rows = []
        for u in kern:
            rows.append([sum(u[t] * a[t][c] for t in range(4)) for c in range(4)])
        return QLattice.from_int_rows(self.algebra, rows, d)

    def index_in(self, sup: "QLattice") -> int:
        """[sup : self] for self a finite-index sublattice of sup."""
        if not sup.contains_lattice(self):
            raise PreconditionError("not a sublattice")
        ratio = self.covolume() / sup.covolume()
        assert ratio.denominator == 1
        return int(ratio)

    # -- invariants ---------------------------------------------------------

    @cached_property
    def gram_int(self) -> tuple[tuple[int, ...], ...]:
        """Integer Gram matrix of the norm form on the scaled basis rows:
        entry (a,b) is den^2 * (1/2) trd(b_a conj(b_b))."""
        g0 = self.algebra.norm_diag()
        out = []
        for ra in self.mat:
            out.append(tuple(sum(ra[t] * rb[t] * g0[t] for t in range(4)) for rb in self.mat))
        return tuple(out)

    def reduced_norm(self) -> Fraction:
        """Positive generator of the Z-ideal spanned by norms of elements,
        read off the basis through the polarization identity."""
        g = self.gram_int
        vals = [g[a][a] for a in range(4)]
        vals += [2 * g[a][b] for a in range(4) for b in range(a + 1, 4)]
        n = 0
        for v in vals:
            n = math.gcd(n, abs(v))
        assert n > 0
        return Frac(n, self.den**2)

    def _mul_matrices(self, side: str):
        """Matrices of multiplication by each basis element on ambient coords."""
        alg = self.algebra
        eye = [(Frac(1), Frac(0), Frac(0), Frac(0)), (Frac(0), Frac(1), Frac(0), Frac(0)),
               (Frac(0), Frac(0), Frac(1), Frac(0)), (Frac(0), Frac(0), Frac(0), Frac(1))]
        mats = []
        for b in self.basis_elements():
            rows = []
            for e in eye:
                if side == "right":
                    rows.append(list(alg.mul_coords(e, b.coords)))
                else:
                    rows.append(list(alg.mul_coords(b.coords, e)))
            mats.append(rows)
        return mats

    def _order_of(self, side: str) -> "QLattice":
        binv = self.basis_inv
        lat = None
        for m in self._mul_matrices(side):
            cond = frac_matmul(m, binv)
            piece = QLattice.from_frac_rows(self.algebra, frac_inverse(cond))
            lat = piece if lat is None else lat.intersect(piece)
        return lat

    def left_order(self) -> "QLattice":
        """{a : a L contained in L} as a canonical lattice."""
        return self._order_of("right")

    def right_order(self) -> "QLattice":
        return self._order_of("left")

    def is_ring(self) -> bool:
        one = self.algebra.one
        if not self.contains(one):
            return False
        bas = self.basis_elements()
        return all(self.contains(a * b) for a in bas for b in bas)

    # -- short vectors ------------------------------------------------------

    def min_norm_elements(self, bound, cap: int = 10**6) -> list[QuatElement]:
        """All lattice elements with 0 < nrd <= bound, one of each +-pair,
        sorted by (norm, coordinates).  Exact Fincke-Pohst on the integer
        coordinate Gram matrix."""
        bound = Frac(bound)
        if bound <= 0:
            raise PreconditionError("bound must be positive")
        g = [[Frac(x) for x in row] for row in self.gram_int]
        # G = L D L^T with L unit lower triangular
        n = 4
        L = [[Frac(int(r == c)) for c in range(n)] for r in range(n)]
        D = [Frac(0)] * n
        for c in range(n):
            D[c] = g[c][c] - sum(D[t] * L[c][t] ** 2 for t in range(c))
            assert D[c] > 0, "norm form must be positive definite"
            for r in range(c + 1, n):
                L[r][c] = (g[r][c] - sum(D[t] * L[r][t] * L[c][t] for t in range(c))) / D[c]
        limit = bound * self.den**2
        found: dict[tuple, QuatElement] = {}
        nodes = 0
        c = [0] * n

        def descend(level: int, rem: Fraction):
            nonlocal nodes
            s = sum(L[t][level] * c[t] for t in range(level + 1, n))
            r = rem / D[level]
            lo = _min_c_geq(s, r)
            hi = _max_c_leq(s, r)
            for v in range(lo, hi + 1):
                nodes += 1
                if nodes > cap:
                    raise CapExceeded("short-vector enumeration cap exceeded")
                c[level] = v
                used = D[level] * (v + s) ** 2
                if used > rem:
                    continue
                if level == 0:
                    if any(c):
                        vec = [sum(c[t] * self.mat[t][col] for t in range(n)) for col in range(4)]
                        for x in vec:
                            if x > 0:
                                break
                            if x < 0:
                                vec = [-y for y in vec]
                                break
                        elt = QuatElement(
                            self.algebra, tuple(Frac(x, self.den) for x in vec)
                        )
                        found[tuple(vec)] = elt
                else:
                    descend(level - 1, rem - used)
            c[level] = 0

        descend(n - 1, limit)
        return sorted(found.values(), key=lambda e: e.key())
