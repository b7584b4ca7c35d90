"""Exact arithmetic in a definite rational quaternion algebra with basis
1, i, j, k where i^2 = d_i, j^2 = d_j and k = ij = -ji.

Coordinates are Fractions, so element equality is coordinate equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import numth
from .errors import PreconditionError

Frac = Fraction
Coords = tuple[Fraction, Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class QuatAlgebra:
    """(d_i, d_j | Q), ramified exactly at {p, oo}; the default basis is
    perpendicular for the trace pairing (tr(ij) = 0 by construction)."""

    p: int
    d_i: int
    d_j: int
    q: int | None = None

    @classmethod
    def for_prime(cls, p: int, q: int | None = None) -> "QuatAlgebra":
        if q is None:
            q = numth.pizer_params(p)
        alg = cls(p=p, d_i=-q, d_j=-p, q=q)
        alg.validate_ramification()
        return alg

    def validate_ramification(self) -> None:
        ram = numth.hilbert_ramified_places(self.d_i, self.d_j)
        if ram != {self.p, numth.INF}:
            raise PreconditionError(
                f"({self.d_i},{self.d_j}) is ramified at {ram}, "
                f"expected {{{self.p}, oo}}"
            )

    def element(self, x=0, y=0, z=0, w=0) -> "QuatElement":
        return QuatElement(self, (Frac(x), Frac(y), Frac(z), Frac(w)))

    @cached_property
    def one(self) -> "QuatElement":
        return self.element(1)

    @cached_property
    def i(self) -> "QuatElement":
        return self.element(0, 1)

    @cached_property
    def j(self) -> "QuatElement":
        return self.element(0, 0, 1)

    @cached_property
    def k(self) -> "QuatElement":
        return self.element(0, 0, 0, 1)

    def basis(self) -> tuple["QuatElement", ...]:
        return (self.one, self.i, self.j, self.k)

    def norm_diag(self) -> tuple[int, int, int, int]:
        """Diagonal Gram of the norm form on the basis 1, i, j, k."""
        return (1, -self.d_i, -self.d_j, self.d_i * self.d_j)

    def mul_coords(self, a: Coords, b: Coords) -> Coords:
        di, dj = self.d_i, self.d_j
        x1, y1, z1, w1 = a
        x2, y2, z2, w2 = b
        return (
            x1 * x2 + di * y1 * y2 + dj * z1 * z2 - di * dj * w1 * w2,
            x1 * y2 + y1 * x2 - dj * z1 * w2 + dj * w1 * z2,
            x1 * z2 + z1 * x2 + di * y1 * w2 - di * w1 * y2,
            x1 * w2 + w1 * x2 + y1 * z2 - z1 * y2,
        )

    def nrd_coords(self, a: Coords) -> Fraction:
        x, y, z, w = a
        return x * x - self.d_i * y * y - self.d_j * z * z + self.d_i * self.d_j * w * w


@dataclass(frozen=True)
class QuatElement:
    algebra: QuatAlgebra
    coords: Coords

    def _check(self, other: "QuatElement") -> None:
        if self.algebra != other.algebra:
            raise PreconditionError("elements live in different algebras")

    def __add__(self, other):
        self._check(other)
        return QuatElement(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return QuatElement(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return QuatElement(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, QuatElement):
            self._check(other)
            return QuatElement(self.algebra, self.algebra.mul_coords(self.coords, other.coords))
        return QuatElement(self.algebra, tuple(a * Frac(other) for a in self.coords))

    def __rmul__(self, other):
        # scalars commute; quaternion * quaternion goes through __mul__
        return self * other

    def __truediv__(self, other):
        if isinstance(other, QuatElement):
            return self * other.inverse()
        return self * (Frac(1) / Frac(other))

    def conjugate(self) -> "QuatElement":
        x, y, z, w = self.coords
        return QuatElement(self.algebra, (x, -y, -z, -w))

    def trd(self) -> Fraction:
        return 2 * self.coords[0]

    def nrd(self) -> Fraction:
        return self.algebra.nrd_coords(self.coords)

    def inverse(self) -> "QuatElement":
        n = self.nrd()
        if n == 0:
            raise PreconditionError("division by zero quaternion")
        return QuatElement(self.algebra, tuple(c / n for c in self.conjugate().coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.algebra.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def key(self):
        """Deterministic sort key: norm first, then coordinates."""
        return (self.nrd(), self.coords)

    def __repr__(self):
        names = ("", "i", "j", "k")
        parts = []
        for c, n in zip(self.coords, names):
            if c == 0:
                continue
            if n and c == 1:
                parts.append(n)
            elif n and c == -1:
                parts.append(f"-{n}")
            else:
                parts.append(f"{c}{n}")
        return " + ".join(parts) if parts else "0"


def simultaneous_embedding_check(d1: int, d2: int, s: int, p: int) -> tuple[bool, bool]:
    """Whether Q(sqrt(d1)), Q(sqrt(d2)) embed simultaneously with tr = s into
    the algebra ramified at {p, oo} (first flag), and whether additionally
    their maximal orders generate an order (second flag).
    """
    if d1 >= 0 or d2 >= 0 or numth.squarefree_part(d1) != d1 or numth.squarefree_part(d2) != d2:
        raise PreconditionError("d1, d2 must be negative and squarefree")
    disc = s * s - 4 * d1 * d2
    if disc >= 0:
        raise PreconditionError("s^2 < 4 d1 d2 required")
    places = {numth.INF} | set(numth.factorize(2 * p * d1 * disc))
    fields_ok = True
    for v in places:
        want = -1 if (v == p or v == numth.INF) else 1
        if numth.hilbert_symbol(d1, disc, v) != want:
            fields_ok = False
            break
    if d1 % 4 != 1 and d2 % 4 != 1:
        delta = 1
    elif d1 % 4 == 1 and d2 % 4 == 1:
        delta = 4
    else:
        delta = 2
    orders_ok = fields_ok and (s - 2) % delta == 0
    return fields_ok, orders_ok
