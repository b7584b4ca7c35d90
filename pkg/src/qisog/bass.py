"""Bass orders generated by the two perpendicular maximal quadratic orders,
Eichler symbols, local and global embedding numbers, and a brute-force
enumeration of the maximal orders containing a given order.

The symbol has two independent computation paths: the splitting-behaviour
formula (valid when a maximal quadratic order is known inside), and a
radical computation in the 4-dimensional algebra O/lO.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import ideals as idl
from . import numth
from .errors import CapExceeded, PreconditionError
from .ideals import QOrder
from .lattice import QLattice, frac_inverse
from .quat import QuatAlgebra

Frac = Fraction

SUPERORDER_CAP = 10**5


def bass_order(alg: QuatAlgebra) -> QOrder:
    """The order generated by the maximal orders of Q(i) and Q(j).

    Requires at least one of d_i, d_j not congruent to 1 mod 4; otherwise
    the two maximal quadratic orders do not generate an order at all."""
    if alg.d_i % 4 == 1 and alg.d_j % 4 == 1:
        raise PreconditionError(
            "both d_i and d_j are 1 mod 4: the maximal quadratic orders "
            "do not generate an order (s = 0 fails the congruence)"
        )
    wi, wj = idl.maximal_quadratic_generators(alg)
    O = idl.order_closure([wi, wj])
    dKi = numth.fundamental_discriminant(alg.d_i)
    dKj = numth.fundamental_discriminant(alg.d_j)
    assert O.reduced_discriminant == dKi * dKj // 4, "discriminant formula violated"
    return O


# ---------------------------------------------------------------------------
# Eichler symbol


@dataclass(frozen=True)
class EichlerSymbol:
    value: int  # -1, 0 or 1

    def __post_init__(self):
        if self.value not in (-1, 0, 1):
            raise PreconditionError("symbol must be -1, 0 or 1")


def eichler_symbol_formula(O: QOrder, ell: int, contained_dK: int) -> EichlerSymbol:
    """Symbol from the splitting of ell in a quadratic field whose maximal
    order lies inside O; only valid for such Bass orders."""
    D = O.reduced_discriminant
    p = O.algebra.p
    if D % ell != 0:
        raise PreconditionError("symbol is only defined at primes dividing discrd")
    if D % (ell * ell) != 0:
        return EichlerSymbol(1 if ell != p else -1)
    return EichlerSymbol(numth.kronecker(contained_dK, ell))


def _radical_bruteforce(table, ell):
    """All x with x*y nilpotent for every basis y; elementwise, for tiny ell."""

    def is_nilpotent(x) -> bool:
        y = x
        for _ in range(3):
            y = idl._quot_mul(table, ell, y, x)
        return not any(y)

    rad = []
    for coords in product(range(ell), repeat=4):
        x = tuple(coords)
        if all(is_nilpotent(idl._quot_mul(table, ell, x, tuple(int(t == a) for t in range(4))))
               for a in range(4)):
            rad.append(x)
    return idl._rref_mod(rad, ell)


def _radical_trace_kernel(O: QOrder, table, ell):
    """Radical as the kernel of the reduced-trace pairing, certified.

    Nilpotents have reduced trace zero, so rad is inside the kernel; the
    kernel is a two-sided ideal by trace cyclicity, and once its fourth
    power is checked to vanish it is a nilpotent ideal, hence inside rad."""
    bas = O.basis_elements()
    gram = [[int((a * b).trd()) % ell for b in bas] for a in bas]
    kern = idl._fp_kernel(gram, ell)
    basis = idl._rref_mod(kern, ell)
    span = list(basis)
    for _ in range(3):  # span <- span * basis, three times: rad^4 must vanish
        span = [idl._quot_mul(table, ell, x, y) for x in span for y in basis]
        span = idl._rref_mod(span, ell)
    assert not span, "trace kernel is not nilpotent; not the radical"
    return basis


def eichler_symbol_radical(O: QOrder, ell: int) -> EichlerSymbol:
    """Symbol by classifying A/rad(A) for A = O/ell O.

    The radical comes from elementwise nilpotency search for tiny ell and
    from the certified trace-kernel computation otherwise."""
    if O.reduced_discriminant % ell != 0:
        raise PreconditionError("symbol is only defined at primes dividing discrd")
    table = idl._mult_table_mod(O, ell)
    one = idl._one_coords(O, ell)
    if ell <= 7:
        basis = _radical_bruteforce(table, ell)
    else:
        basis = _radical_trace_kernel(O, table, ell)
    raddim = len(basis)
    qdim = 4 - raddim
    if qdim == 4:
        raise PreconditionError("quotient is the full matrix algebra; O is maximal at ell")
    if qdim == 1:
        return EichlerSymbol(0)
    if qdim != 2:
        raise AssertionError(f"semisimple quotient of dimension {qdim} is outside the trichotomy")
    if ell == 2:
        # split iff an idempotent beside 0, 1 exists; 16 candidates
        for coords in product(range(2), repeat=4):
            x = tuple(coords)
            if (idl._quot_mul(table, 2, x, x) == x and any(x) and x != one
                    and not _in_radical(x, basis, 2)):
                return EichlerSymbol(1)
        return EichlerSymbol(-1)
    # an order element with non-scalar image generates the 2-dimensional
    # etale quotient; split iff its characteristic discriminant is a square
    for b in O.basis_elements():
        disc = int(b.trd() ** 2 - 4 * b.nrd()) % ell
        if disc:
            return EichlerSymbol(numth.kronecker(disc, ell))
    raise AssertionError("no generator of the semisimple quotient among the basis")


def _in_radical(x, radical_basis, ell) -> bool:
    return idl._in_span_mod(radical_basis, list(x), ell)


def eichler_symbol(O: QOrder, ell: int, contained_dK: int | None = None,
                   cross_check: bool = True) -> EichlerSymbol:
    """Formula path when a contained maximal quadratic order is known,
    radical oracle otherwise; with cross_check both must agree."""
    if contained_dK is None:
        return eichler_symbol_radical(O, ell)
    sym = eichler_symbol_formula(O, ell, contained_dK)
    if cross_check:
        assert eichler_symbol_radical(O, ell) == sym, "symbol paths disagree"
    return sym


def _contained_dK(O: QOrder) -> int | None:
    """Fundamental discriminant of a quadratic subfield whose maximal order
    sits inside O, if one of the two standard ones does."""
    alg = O.algebra
    wi, wj = idl.maximal_quadratic_generators(alg)
    if O.contains(wi):
        return numth.fundamental_discriminant(alg.d_i)
    if O.contains(wj):
        return numth.fundamental_discriminant(alg.d_j)
    return None


def local_embedding_number(O: QOrder, ell: int) -> int:
    """Number of local maximal orders above O at ell."""
    D = O.reduced_discriminant
    p = O.algebra.p
    if D % ell != 0 or ell == p:
        return 1
    sym = eichler_symbol(O, ell, _contained_dK(O)).value
    if sym == 1:
        v = 0
        d = D
        while d % ell == 0:
            d //= ell
            v += 1
        return v + 1
    return 2 if sym == 0 else 1


def global_embedding_number(O: QOrder) -> int:
    out = 1
    for ell in numth.factorize(O.reduced_discriminant):
        out *= local_embedding_number(O, ell)
    return out


# ---------------------------------------------------------------------------
# superorder oracle


def _sublattice_hnfs(index: int):
    """Upper-triangular HNF bases of the sublattices of Z^4 of given index."""
    profiles = []

    def diags(rem, pos, cur):
        if pos == 4:
            if rem == 1:
                profiles.append(tuple(cur))
            return
        d = 1
        while d <= rem:
            if rem % d == 0:
                diags(rem // d, pos + 1, cur + [d])
            d += 1

    diags(index, 0, [])
    for diag in profiles:
        slots = [(r, c) for c in range(4) for r in range(c)]
        for vals in product(*[range(diag[c]) for (_, c) in slots]):
            H = [[0] * 4 for _ in range(4)]
            for t in range(4):
                H[t][t] = diag[t]
            for (rc, v) in zip(slots, vals):
                H[rc[0]][rc[1]] = v
            yield H


def _superorders_at(O: QOrder, index: int, cap: int) -> list[QOrder]:
    """Orders containing O with the given index, by dualizing the HNF
    enumeration of sublattices of that index."""
    out = []
    seen = set()
    bas = O.basis_elements()
    count = 0
    for H in _sublattice_hnfs(index):
        count += 1
        if count > cap:
            raise CapExceeded("superorder enumeration cap exceeded")
        inv = frac_inverse([[Frac(x) for x in row] for row in H])
        rows = []
        for c in range(4):  # columns of H^{-1} = dual basis coordinates
            e = O.algebra.element()
            for t in range(4):
                e = e + inv[t][c] * bas[t]
            rows.append(e.coords)
        try:
            L = QLattice.from_frac_rows(O.algebra, rows)
        except PreconditionError:
            continue
        if L.key() in seen:
            continue
        seen.add(L.key())
        if L.contains_lattice(O.lattice) and L.is_ring():
            out.append(QOrder(L))
    return out


def enumerate_maximal_superorders(O: QOrder, cap: int = SUPERORDER_CAP) -> list[QOrder]:
    """All maximal orders containing O, prime by prime: at each ell | f the
    candidates are index-ell^v superorders, and maximality is certified by
    the discriminant."""
    p = O.algebra.p
    f, rem = divmod(O.reduced_discriminant, p)
    if rem:
        raise PreconditionError("discrd must be divisible by p")
    current = [O]
    for ell, v in sorted(numth.factorize(f).items()):
        step = []
        for cand in current:
            step.extend(_superorders_at(cand, ell**v, cap))
        uniq = {}
        for cand in step:
            uniq[cand.key()] = cand
        current = list(uniq.values())
    out = [cand for cand in current if cand.reduced_discriminant == p]
    for cand in out:
        assert cand.contains_order(O)
    return sorted(out, key=lambda c: c.key())
