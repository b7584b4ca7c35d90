import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qisog import ideals as idl
from qisog.errors import PreconditionError
from qisog.lattice import QLattice, hnf_rows
from qisog.quat import QuatAlgebra, QuatElement

A7 = QuatAlgebra.for_prime(7)
STD = QLattice.standard_order_lattice(A7)
O0 = idl.global_root_orders(7)[0].lattice  # Z<i, (1+j)/2>


def brute_short_vectors(lat, bound):
    """Box-search oracle: the diagonal norm form bounds each ambient
    coordinate of a short vector, so the box is provably complete."""
    import math

    den = lat.den
    ranges = []
    for coef in lat.algebra.norm_diag():
        m = math.isqrt(int(bound * den * den // coef)) + 1
        ranges.append(range(-m, m + 1))
    out = {}
    for vec in product(*ranges):
        if not any(vec):
            continue
        e = QuatElement(lat.algebra, tuple(Fraction(x, den) for x in vec))
        if 0 < e.nrd() <= bound and lat.contains(e):
            for x in vec:
                if x > 0:
                    break
                if x < 0:
                    vec = tuple(-v for v in vec)
                    break
            out[vec] = QuatElement(lat.algebra, tuple(Fraction(x, den) for x in vec))
    return sorted(out.values(), key=lambda e: e.key())


def random_unimodular(rng):
    m = [[int(r == c) for c in range(4)] for r in range(4)]
    for _ in range(8):
        a, b = rng.sample(range(4), 2)
        f = rng.randint(-3, 3)
        for c in range(4):
            m[a][c] += f * m[b][c]
    return m


class TestCanonicalForm:
    def test_from_generators_examples(self):
        one, i, j, k = A7.basis()
        assert STD.mat == tuple(tuple(int(r == c) for c in range(4)) for r in range(4))
        assert STD.den == 1
        L = QLattice.from_elements([one, i, (one + j) / 2, (i + k) / 2])
        assert L.den == 2
        M = QLattice.from_elements([2 * one, 2 * i, 2 * j, 2 * k, one + i])
        assert M.den == 1
        assert M.mat == ((1, 1, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2))

    def test_rank_deficient_rejected(self):
        one, i, _, _ = A7.basis()
        with pytest.raises(PreconditionError):
            QLattice.from_elements([one, i, one + i])

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_hnf_canonical_under_unimodular_row_ops(self, seed):
        rng = random.Random(seed)
        U = random_unimodular(rng)
        rows = [[sum(U[r][t] * O0.mat[t][c] for t in range(4)) for c in range(4)]
                for r in range(4)]
        assert QLattice.from_int_rows(A7, rows, O0.den) == O0

    def test_content_normalized(self):
        L = QLattice.from_int_rows(A7, [[6, 0, 0, 0], [0, 6, 0, 0], [0, 0, 6, 0], [0, 0, 0, 6]], 2)
        assert L == QLattice.from_int_rows(
            A7, [[3, 0, 0, 0], [0, 3, 0, 0], [0, 0, 3, 0], [0, 0, 0, 3]], 1)

    def test_hnf_pivot_reduction(self):
        h = hnf_rows([[2, 7, 0, 0], [0, 3, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        assert h[0][1] < 3  # entry above the pivot is reduced


class TestBinaryOps:
    def test_conjugation_laws(self):
        one, i, j, k = A7.basis()
        L = O0
        M = QLattice.from_elements([2 * one, 2 * i, 2 * j, 2 * k, one + i])
        assert L.conjugate().conjugate() == L
        assert (L * M).conjugate() == M.conjugate() * L.conjugate()

    def test_idempotence(self):
        assert O0 + O0 == O0
        assert O0.intersect(O0) == O0

    def test_sum_and_intersection_against_membership(self):
        L = STD.scale(2)
        S = L + O0
        assert S.contains_lattice(L) and S.contains_lattice(O0)
        I = L.intersect(O0)
        assert L.contains_lattice(I) and O0.contains_lattice(I)
        # sampled double inclusion: everything in both lattices is in I
        for c in product(range(-2, 3), repeat=4):
            e = A7.element(*[Fraction(x) for x in c])
            if L.contains(e) and O0.contains(e):
                assert I.contains(e)

    def test_index(self):
        assert STD.scale(2).index_in(STD) == 16
        assert STD.index_in(STD) == 1
        with pytest.raises(PreconditionError):
            STD.index_in(STD.scale(2))

    def test_index_multiplicative_along_chains(self):
        L, M, N = STD, STD.scale(2), STD.scale(6)
        assert N.index_in(L) == N.index_in(M) * M.index_in(L)


class TestOrders:
    def test_left_order_of_order(self):
        assert O0.left_order() == O0
        assert O0.right_order() == O0

    def test_right_order_of_principal_lattice(self):
        alpha = A7.element(1, 1, 0, 0)  # nrd 2
        L = QLattice.from_elements([b * alpha for b in O0.basis_elements()])
        conj = QLattice.from_elements(
            [alpha.inverse() * b * alpha for b in O0.basis_elements()])
        assert L.right_order() == conj
        assert L.left_order() == O0

    def test_orders_of_conjugate_lattice(self):
        alpha = A7.element(1, 0, 1, 0)
        I = QLattice.from_elements([b * alpha for b in O0.basis_elements()])
        assert I.conjugate().left_order() == I.right_order()
        assert I.conjugate().right_order() == I.left_order()

    def test_order_outputs_are_rings(self):
        alpha = A7.element(2, 1, 1, 0)
        I = QLattice.from_elements([b * alpha for b in O0.basis_elements()])
        assert I.left_order().is_ring()
        assert I.right_order().is_ring()


class TestReducedNorm:
    def test_order_has_norm_one(self):
        assert O0.reduced_norm() == 1

    def test_homogeneity(self):
        alpha = A7.element(1, 2, 1, 0)
        L = QLattice.from_elements([b * alpha for b in O0.basis_elements()])
        assert L.scale(2).reduced_norm() == 4 * L.reduced_norm()

    def test_norm_squared_is_index(self):
        for alpha in (A7.element(1, 1, 0, 0), A7.element(0, 1, 1, 1)):
            I = QLattice.from_elements([b * alpha for b in O0.basis_elements()])
            n = I.reduced_norm()
            assert n * n == I.index_in(I.left_order())


class TestShortVectors:
    def test_example_standard_order(self):
        got = STD.min_norm_elements(1)
        assert sorted(e.coords for e in got) == [
            (0, 1, 0, 0), (1, 0, 0, 0)]

    def test_below_minimum_empty(self):
        assert STD.min_norm_elements(Fraction(1, 2)) == []

    def test_membership_contract(self):
        for e in O0.min_norm_elements(6):
            assert O0.contains(e)
            assert 0 < e.nrd() <= 6

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 10**6), bound=st.integers(1, 8))
    def test_against_box_oracle(self, seed, bound):
        rng = random.Random(seed)
        while True:  # random full-rank sublattice of O0
            R = [[rng.randint(-2, 2) for _ in range(4)] for _ in range(4)]
            rows = [[sum(R[r][t] * O0.mat[t][c] for t in range(4)) for c in range(4)]
                    for r in range(4)]
            try:
                L = QLattice.from_int_rows(A7, rows, O0.den)
                break
            except PreconditionError:
                continue
        got = L.min_norm_elements(bound)
        want = brute_short_vectors(L, bound)
        assert [e.coords for e in got] == [e.coords for e in want]
