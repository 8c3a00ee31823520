import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordhom.algebra import (
    QQ,
    ZZ,
    FgModule,
    LatticeSolver,
    Matrix,
    ModuleMap,
    RingSpec,
    certify_exact,
    cokernel,
    invariant_factors,
    kernel_basis,
    rank,
    snf,
    solve,
)
from ordhom.errors import DimensionError, InvariantError

from oracles import invariant_factors_by_minors, rank_over

Z5 = RingSpec.mod_ring(5)


def matrices(max_rows=6, max_cols=6, lo=-9, hi=9):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


class TestRingSpec:
    @pytest.mark.parametrize("text,expected", [("Z", "Z"), ("Q", "Q"), ("Fp:5", "F5"), ("F7", "F7"),
                                               ("Zm:6", "Z/6"), ("Z/4", "Z/4")])
    def test_parse(self, text, expected):
        assert str(RingSpec.parse(text)) == expected

    @pytest.mark.parametrize("text", ["Fp:6", "Zm:1", "R", "Z/0", "F"])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            RingSpec.parse(text)

    def test_kinds(self):
        assert RingSpec.prime_field(3).is_field and QQ.is_field and not ZZ.is_field
        assert RingSpec.mod_ring(6).is_modular and not QQ.is_modular


class TestSnf:
    def test_zero(self):
        res = snf(Matrix([[0]]))
        assert res.s == Matrix([[0]]) and res.invariant_factors == ()

    def test_identity(self):
        assert snf(Matrix.identity(3)).invariant_factors == (1, 1, 1)

    def test_two_by_two(self):
        a = Matrix([[2, 4], [6, 8]])
        res = snf(a)
        assert res.invariant_factors == (2, 4)
        # d1 = gcd of entries, d1*d2 = |det|
        assert res.invariant_factors[0] == 2 and res.invariant_factors[0] * res.invariant_factors[1] == abs(a.det())

    def test_big_entries_do_not_overflow(self):
        big = 10**40
        a = Matrix([[big, big + 1], [big - 1, big]])
        res = snf(a)
        assert res.u @ a @ res.v == res.s
        assert res.invariant_factors == (1, 1)

    def test_deterministic(self):
        a = Matrix([[3, 6, 9], [2, 4, 7], [1, 0, 5]])
        assert snf(a).u == snf(a).u and snf(a).v == snf(a).v

    @settings(max_examples=150, deadline=None)
    @given(matrices())
    def test_contract(self, rows):
        a = Matrix(rows)
        res = snf(a)
        assert res.u @ a @ res.v == res.s
        assert abs(res.u.det()) == 1 and abs(res.v.det()) == 1
        d = res.invariant_factors
        assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))

    @settings(max_examples=80, deadline=None)
    @given(matrices(4, 4, -6, 6))
    def test_factors_match_minors(self, rows):
        assert list(invariant_factors(Matrix(rows))) == invariant_factors_by_minors(rows)

    @settings(max_examples=80, deadline=None)
    @given(matrices())
    def test_rank_matches_elimination(self, rows):
        a = Matrix(rows)
        assert rank(a, QQ) == rank_over(rows)
        assert rank(a, RingSpec.prime_field(3)) == rank_over(rows, 3)


class TestCokernel:
    def test_no_relations(self):
        assert cokernel(Matrix.zeros(2, 0)) == FgModule.free(ZZ, 2)

    def test_cyclic(self):
        assert cokernel(Matrix([[2]])) == FgModule.parse("Z/2")

    def test_from_snf(self):
        assert cokernel(Matrix([[2, 4], [6, 8]])) == FgModule.parse("Z/2+Z/4")

    def test_over_field_and_modular(self):
        assert cokernel(Matrix([[2]]), QQ) == FgModule.zero(QQ)
        assert cokernel(Matrix([[2]]), RingSpec.prime_field(2)) == FgModule.free(RingSpec.prime_field(2))
        assert cokernel(Matrix([[2]]), RingSpec.mod_ring(4)) == FgModule(RingSpec.mod_ring(4), 0, (2,))

    @settings(max_examples=60, deadline=None)
    @given(matrices(4, 4), st.randoms(use_true_random=False))
    def test_invariant_under_unimodular_change(self, rows, rnd):
        a = Matrix(rows)
        u = _random_unimodular(rnd, a.rows)
        v = _random_unimodular(rnd, a.cols)
        assert cokernel(u @ a @ v) == cokernel(a)
        perm = list(range(a.rows))
        rnd.shuffle(perm)
        assert cokernel(a.submatrix(perm, range(a.cols))) == cokernel(a)


def _random_unimodular(rnd: random.Random, n: int) -> Matrix:
    m = Matrix.identity(n)
    for _ in range(3 * n):
        i, j = rnd.randrange(n), rnd.randrange(n)
        if i != j:
            e = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
            e[i][j] = rnd.randint(-2, 2)
            m = m @ Matrix(e)
    return m


class TestSolve:
    def test_identity(self):
        assert solve(Matrix.identity(3), (4, -1, 7)) == (4, -1, 7)

    def test_parity_obstruction(self):
        assert solve(Matrix([[2]]), (3,)) is None

    def test_mod_five(self):
        x = solve(Matrix([[2]]), (3,), Z5)
        assert x == (4,) and (2 * x[0]) % 5 == 3

    def test_rational(self):
        assert solve(Matrix([[2]]), (3,), QQ) == (Fraction(3, 2),)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            solve(Matrix([[1, 0]]), (1, 2))

    @settings(max_examples=100, deadline=None)
    @given(matrices(5, 5), st.lists(st.integers(-9, 9), min_size=5, max_size=5))
    def test_solution_is_exact_or_obstructed(self, rows, bvals):
        a = Matrix(rows)
        b = tuple(bvals[: a.rows])
        x = solve(a, b)
        if x is not None:
            assert a.apply(x) == b
        else:
            res = snf(a)
            tb = res.u.apply(b)
            d = res.invariant_factors
            assert any(tb[i] % d[i] for i in range(len(d))) or any(tb[i] for i in range(len(d), a.rows))

    def test_lattice_solver(self):
        s = LatticeSolver(Matrix([[2, 0], [0, 3]]))
        assert s.contains((4, 9)) and not s.contains((1, 0))


class TestKernel:
    def test_identity(self):
        assert kernel_basis(Matrix.identity(3)).cols == 0

    def test_row(self):
        k = kernel_basis(Matrix([[1, 1]]))
        assert k.cols == 1 and k.column(0) in ((1, -1), (-1, 1))

    def test_triangle_boundary(self):
        d1 = Matrix([[-1, -1, 0], [1, 0, -1], [0, 1, 1]])
        k = kernel_basis(d1)
        assert k.cols == 1 and d1.apply(k.column(0)) == (0, 0, 0)

    @settings(max_examples=100, deadline=None)
    @given(matrices())
    def test_kernel_property(self, rows):
        a = Matrix(rows)
        k = kernel_basis(a)
        assert k.cols == a.cols - rank(a, QQ)
        for col in k.columns():
            assert a.apply(col) == (0,) * a.rows


class TestFgModule:
    def test_parse_and_print(self):
        m = FgModule.parse("Z^2+Z/2+Z/3")
        assert m.free_rank == 2 and m.torsion == (6,)
        assert str(FgModule.parse("Z/2+Z/4")) == "Z/2 + Z/4"

    def test_divisibility_chain_enforced(self):
        with pytest.raises(InvariantError):
            FgModule(ZZ, 0, (4, 2))

    def test_no_torsion_over_fields(self):
        with pytest.raises(InvariantError):
            FgModule(QQ, 1, (2,))

    def test_generator_orders(self):
        assert FgModule.parse("Z+Z/2").generator_orders() == (2, 0)
        assert FgModule.from_cyclic(ZZ, [2, 3, 0]) == FgModule.parse("Z+Z/6")


class TestModuleMap:
    def test_torsion_respected(self):
        with pytest.raises(InvariantError):
            ModuleMap(FgModule.parse("Z/2"), FgModule.parse("Z"), Matrix([[1]]))
        ModuleMap(FgModule.parse("Z/2"), FgModule.parse("Z/4"), Matrix([[2]]))

    def test_reduction(self):
        m = ModuleMap(FgModule.parse("Z"), FgModule.parse("Z/3"), Matrix([[7]]))
        assert m.matrix == Matrix([[1]])

    def test_iso_checks(self):
        z = FgModule.free(ZZ)
        assert ModuleMap(z, z, Matrix([[-1]])).is_isomorphism()
        assert not ModuleMap(z, z, Matrix([[2]])).is_surjective()
        assert ModuleMap(z, z, Matrix([[2]])).is_injective()


class TestExactnessCertificate:
    def test_short_exact(self):
        z, z2 = FgModule.free(ZZ), FgModule.parse("Z/2")
        f = ModuleMap(z, z, Matrix([[2]]))
        g = ModuleMap(z, z2, Matrix([[1]]))
        assert certify_exact(f, g).exact

    def test_torsion_hides_from_ranks(self):
        # Z --2--> Z --> Z/4 has composite 2 != 0 mod 4: not even a complex
        z, z4 = FgModule.free(ZZ), FgModule.parse("Z/4")
        f = ModuleMap(z, z, Matrix([[2]]))
        g = ModuleMap(z, z4, Matrix([[1]]))
        assert not certify_exact(f, g).exact
        # Z --4--> Z --2--> Z/4: composite 8 = 0 but kernel (2Z) strictly contains image (4Z)
        f4 = ModuleMap(z, z, Matrix([[4]]))
        g2 = ModuleMap(z, z4, Matrix([[2]]))
        cert = certify_exact(f4, g2)
        assert cert.composite_zero and not cert.kernel_in_image
