"""Acceptance criteria 1-13.  All comparisons are exact equalities of modules or matrices."""
import random

import pytest

from ordhom.algebra import QQ, ZZ, FgModule, Matrix, RingSpec, snf
from ordhom.axioms import (
    cellular_chain_map,
    cellular_complex,
    check_additivity,
    check_homotopy_invariance,
    check_point_axiom,
    compare_cellular_vs_direct,
    degree,
    validate_good_filtration,
)
from ordhom.complexes import homology, homology_with_coefficients, induced_map, uct_oracle
from ordhom.corpus import golden_corpus
from ordhom.exactness import (
    ExcisiveSquare,
    circle_two_arc_cover,
    excision_compare,
    mayer_vietoris,
    mv_naturality_check,
    pair_les,
    sphere_two_disk_cover,
    torus_two_cylinder_cover,
)
from ordhom.spaces import (
    FinitePoset,
    SubcomplexPair,
    chain_complex,
    collapse_map,
    covering_map,
    disk_pair,
    klein_delta,
    order_complex,
    point,
    rp2_delta,
    skeletal_filtration,
    sphere_delta,
    torus_delta,
    wrap_map,
)

import generators
from oracles import betti_numbers

F2, F3, Z4, Z6 = (RingSpec.parse(t) for t in ("F2", "F3", "Z/4", "Z/6"))
FOUR_RINGS = [ZZ, QQ, RingSpec.prime_field(5), Z6]
FIVE_SPACES = {
    "point": point,
    "circle": lambda: sphere_delta(1),
    "s2": lambda: sphere_delta(2),
    "torus": torus_delta,
    "rp2": rp2_delta,
    "klein": klein_delta,
}
RANDOM_FILTRATION_SEEDS = list(range(50))


@pytest.fixture(scope="module")
def corpus():
    return golden_corpus()


# 1 ---------------------------------------------------------------------------
@pytest.mark.criterion(1)
@pytest.mark.parametrize("ring", FOUR_RINGS, ids=str)
def test_point_axiom(ring):
    res = check_point_axiom(ring, top=5)
    assert res.passed
    h = homology(chain_complex(point(), ring).padded(5))
    assert h[0] == FgModule.free(ring)
    assert all(h[i] == FgModule.zero(ring) for i in range(1, 6))


# 2 ---------------------------------------------------------------------------
@pytest.mark.criterion(2)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("ring", [ZZ, F2, Z6], ids=str)
def test_sphere_homology(n, ring):
    h = homology(chain_complex(sphere_delta(n), ring))
    r = FgModule.free(ring)
    for i in range(n + 1):
        assert h[i] == (r if i in (0, n) else FgModule.zero(ring))


@pytest.mark.criterion(2)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sphere_betti_oracle(n):
    c = chain_complex(sphere_delta(n))
    bds = [m.tolist() for m in c.boundaries]
    expected = [1] + [0] * (n - 1) + [1]
    assert betti_numbers(list(c.ranks), bds) == expected
    assert betti_numbers(list(c.ranks), bds, 2) == expected


# 3 ---------------------------------------------------------------------------
@pytest.mark.criterion(3)
@pytest.mark.parametrize("m", [0, 1, 2, 3, 5])
def test_wrap_degree(m):
    assert abs(degree(wrap_map(m))) == m


@pytest.mark.criterion(3)
def test_degree_multiplicative():
    f = covering_map(3, 2)  # 6-gon onto 3-gon, twice around
    g = wrap_map(3)  # 3-gon onto 1-gon, three times around
    assert degree(g @ f) == degree(g) * degree(f)
    assert abs(degree(g @ f)) == 6


@pytest.mark.criterion(3)
@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_degree_matches_cellular_path(m):
    """The cellular route sees the same multiplication by m, and the comparison maps are natural."""
    f = wrap_map(m)
    fs, ft = skeletal_filtration(f.source), skeletal_filtration(f.target)
    assert compare_cellular_vs_direct(fs, ZZ, mapping=(f, ft)).passed
    cs, ct = cellular_complex(fs), cellular_complex(ft)
    cm = cellular_chain_map(f, cs, ct)
    assert abs(induced_map(cm, homology(cs.complex), homology(ct.complex), 1).scalar()) == abs(degree(f)) == m


# 4 ---------------------------------------------------------------------------
@pytest.mark.criterion(4)
@pytest.mark.parametrize("name", list(FIVE_SPACES))
def test_skeletal_filtrations_are_good(name):
    rep = validate_good_filtration(skeletal_filtration(FIVE_SPACES[name]()), ZZ)
    assert rep.passed, rep.failures


# 5 ---------------------------------------------------------------------------
@pytest.mark.criterion(5)
@pytest.mark.parametrize("ring", [ZZ, QQ, F2, F3], ids=str)
@pytest.mark.parametrize("name", list(FIVE_SPACES))
def test_cellular_equals_direct(name, ring):
    res = compare_cellular_vs_direct(skeletal_filtration(FIVE_SPACES[name]()), ring, name)
    assert res.passed, res.witness


@pytest.mark.criterion(5)
def test_cellular_named_values():
    expect = {"torus": "Z^2", "rp2": "Z/2", "klein": "Z + Z/2"}
    for name, h1 in expect.items():
        cell = cellular_complex(skeletal_filtration(FIVE_SPACES[name]()))
        assert str(homology(cell.complex)[1]) == h1
        assert str(homology(chain_complex(FIVE_SPACES[name]()))[1]) == h1


# 6 ---------------------------------------------------------------------------
def _check_d_squared(cell):
    c = cell.complex
    for p in range(2, c.top + 1):
        assert (c.d(p - 1) @ c.d(p)).is_zero()


@pytest.mark.criterion(6)
def test_d_squared_corpus(corpus):
    for item in corpus:
        if item.kind in ("delta_complex", "poset"):
            _check_d_squared(cellular_complex(skeletal_filtration(corpus.space(item.name))))
        elif item.kind == "filtration" and item.spec.get("expect_good", True):
            _check_d_squared(cellular_complex(item.value))


@pytest.mark.criterion(6)
@pytest.mark.parametrize("seed", RANDOM_FILTRATION_SEEDS)
def test_d_squared_random_filtrations(seed):
    rng = random.Random(seed)
    x = generators.random_complex(rng, dim=3)
    assert x.dim == 3
    f = generators.random_good_filtration(x, rng)
    assert validate_good_filtration(f).passed
    cell = cellular_complex(f)
    _check_d_squared(cell)
    assert compare_cellular_vs_direct(f).passed


# 7 ---------------------------------------------------------------------------
@pytest.mark.criterion(7)
@pytest.mark.parametrize("build", [circle_two_arc_cover, sphere_two_disk_cover, torus_two_cylinder_cover],
                         ids=["circle", "s2", "torus"])
def test_mayer_vietoris_exact(build):
    les = mayer_vietoris(build())
    assert les.is_exact
    assert all(c.exact for c in les.certificates)


@pytest.mark.criterion(7)
def test_mv_values():
    circle = mayer_vietoris(circle_two_arc_cover())
    assert circle.term("H_1(X)") == FgModule.free(ZZ)
    assert circle.term("H_0(U∩V)") == FgModule.free(ZZ, 2)
    boundary = circle.map_from("H_1(X)")
    assert boundary.is_injective()
    s2 = mayer_vietoris(sphere_two_disk_cover())
    assert s2.map_from("H_2(X)").is_isomorphism()
    torus = mayer_vietoris(torus_two_cylinder_cover())
    assert torus.term("H_1(X)") == FgModule.free(ZZ, 2)


@pytest.mark.criterion(7)
def test_mv_naturality_double_cover():
    f = covering_map(2, 2)
    x, y = f.source, f.target
    s1 = ExcisiveSquare(x, x.closure([(1, 0), (1, 2)]), x.closure([(1, 1), (1, 3)]))
    s2 = ExcisiveSquare(y, y.closure([(1, 0)]), y.closure([(1, 1)]))
    rep = mv_naturality_check(f, s1, s2)
    assert rep.commutes, rep.failures()
    pt = point()
    rep = mv_naturality_check(collapse_map(x), s1, ExcisiveSquare(pt, pt.all_members(), pt.all_members()))
    assert rep.commutes


# 8 ---------------------------------------------------------------------------
@pytest.mark.criterion(8)
def test_excision_corpus(corpus):
    covers = corpus.of_kind("cover")
    assert len(covers) >= 3
    for item in covers:
        for ring in (ZZ, QQ, F2, Z4):
            rep = excision_compare(item.value, ring)
            assert rep.passed, (item.name, str(ring), rep.failed_degrees())


# 9 ---------------------------------------------------------------------------
@pytest.mark.criterion(9)
def test_homotopy_invariance_corpus(corpus):
    for item in corpus:
        if item.kind in ("delta_complex", "poset", "pair"):
            x = item.value if item.kind == "pair" else corpus.space(item.name)
            res = check_homotopy_invariance(x, ZZ, item.name)
            assert res.passed, (item.name, res.witness)


@pytest.mark.criterion(9)
def test_homotopy_invariance_pair_over_field():
    assert check_homotopy_invariance(disk_pair(2), F3).passed
    assert check_homotopy_invariance(SubcomplexPair(rp2_delta(), rp2_delta().closure([(1, 2)])), Z4).passed


# 10 --------------------------------------------------------------------------
@pytest.mark.criterion(10)
@pytest.mark.parametrize(
    "xs",
    [
        lambda: [point(), point()],
        lambda: [sphere_delta(1), sphere_delta(1)],
        lambda: [torus_delta(), rp2_delta(), point()],
    ],
    ids=["two-points", "two-circles", "torus-rp2-point"],
)
def test_additivity(xs):
    spaces = xs()
    res = check_additivity(spaces, ZZ)
    assert res.passed, res.witness
    expected_h0 = FgModule.free(ZZ, len(spaces))
    assert res.witness["union"][0] == str(expected_h0)


# 11 --------------------------------------------------------------------------
COEFFICIENTS = ["Z", "Z/2", "Z/4", "Z/6", "Z/2+Z/3", "Z^2"]


@pytest.mark.criterion(11)
@pytest.mark.parametrize("coeff", COEFFICIENTS)
def test_uct(corpus, coeff):
    a = FgModule.parse(coeff)
    for item in corpus:
        if item.kind not in ("delta_complex", "poset"):
            continue
        c = chain_complex(corpus.space(item.name))
        direct = homology_with_coefficients(c, a)
        oracle = uct_oracle(homology(c), a)
        assert direct.same_modules(oracle, upto=c.top), (item.name, str(direct), str(oracle))


# 12 --------------------------------------------------------------------------
@pytest.mark.criterion(12)
def test_pseudo_circle():
    p = FinitePoset.from_relations("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    x = order_complex(p)
    assert x.counts == (4, 4)
    h = homology(chain_complex(x))
    assert h[0] == FgModule.free(ZZ) and h[1] == FgModule.free(ZZ)


@pytest.mark.criterion(12)
@pytest.mark.parametrize("seed", range(10))
def test_poset_with_minimum_is_acyclic(seed):
    p = generators.random_poset(random.Random(seed), with_minimum=True)
    h = homology(chain_complex(order_complex(p)))
    assert h[0] == FgModule.free(ZZ)
    assert all(h[n].is_zero() for n in range(1, h.top + 1))


# 13 --------------------------------------------------------------------------
@pytest.mark.criterion(13)
def test_snf_contract_random():
    rng = random.Random(20240613)
    for _ in range(500):
        r, c = rng.randint(1, 12), rng.randint(1, 12)
        a = Matrix([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)], r, c)
        res = snf(a)
        assert res.u @ a @ res.v == res.s
        assert abs(res.u.det()) == 1 and abs(res.v.det()) == 1
        assert res.u @ res.u_inv == Matrix.identity(r) and res.v @ res.v_inv == Matrix.identity(c)
        d = res.invariant_factors
        assert all(x > 0 for x in d)
        assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
        for i in range(r):
            for j in range(c):
                if i != j or i >= len(d):
                    assert res.s[i, j] == 0
                else:
                    assert res.s[i, j] == d[i]


@pytest.mark.criterion(13)
def test_functoriality_random():
    rng = random.Random(777)
    for _ in range(50):
        f, g = generators.random_composable_maps(rng)
        for ring in (ZZ, F2):
            cf, cg, cgf = f.chain_map(ring), g.chain_map(ring), (g @ f).chain_map(ring)
            hx, hy, hz = homology(cf.source), homology(cf.target), homology(cg.target)
            for n in range(f.source.dim + 1):
                lhs = induced_map(cgf, hx, hz, n)
                rhs = induced_map(cg, hy, hz, n) @ induced_map(cf, hx, hy, n)
                assert lhs.matrix == rhs.matrix


@pytest.mark.criterion(13)
def test_every_emitted_sequence_is_exact(corpus):
    rng = random.Random(99)
    for ring in (ZZ, QQ, F2, Z4, Z6):
        for item in corpus.of_kind("pair"):
            assert pair_les(item.value, ring, rng=rng).is_exact
        for item in corpus.of_kind("cover"):
            assert mayer_vietoris(item.value, ring, rng=rng).is_exact
    for seed in range(20):
        p = generators.random_pair(random.Random(seed))
        assert pair_les(p).is_exact
