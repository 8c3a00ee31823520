"""Long exact sequences of pairs, Mayer-Vietoris, excision and reduced homology."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import ZZ, FgModule, Matrix, RingSpec
from .complexes import (
    ChainComplex,
    ChainMap,
    GradedModule,
    LongExactSequence,
    ShortExactSeqOfComplexes,
    connecting_homomorphism,
    homology,
    induced_map,
    les_from_ses,
)
from .errors import InvariantError
from .spaces import (
    DeltaComplex,
    Members,
    SimplicialMap,
    SimplicialMapError,
    SubcomplexPair,
    chain_complex,
    inclusion_map,
    intersect_members,
    relative_chain_complex,
    relative_chain_map,
    torus_grid,
    torus_grid_row,
    union_members,
    circle_mgon,
    sphere_delta,
)

__all__ = [
    "ExcisiveSquare",
    "ExcisionReport",
    "NaturalityReport",
    "pair_les",
    "mayer_vietoris",
    "mv_short_exact",
    "mv_naturality_check",
    "excision_compare",
    "reduced_homology",
    "circle_two_arc_cover",
    "sphere_two_disk_cover",
    "torus_two_cylinder_cover",
]

MV_NAMES = ("U∩V", "U⊕V", "X")


@dataclass(frozen=True, eq=False)
class ExcisiveSquare:
    """A cover ``X = U ∪ V`` by closed subcomplexes."""

    total: DeltaComplex
    u: Members
    v: Members

    def __post_init__(self):
        x = self.total
        u, v = x.members(self.u), x.members(self.v)
        for name, m in (("U", u), ("V", v)):
            try:
                x.check_closed(m)
            except InvariantError as exc:
                raise InvariantError(f"{name}: {exc}") from None
        if union_members(u, v) != x.all_members():
            missing = [(n, k) for n in range(x.dim + 1) for k in range(x.count(n)) if k not in u[n] | v[n]]
            raise InvariantError(f"U and V do not cover X; first uncovered simplex {missing[0]}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def intersection(self) -> Members:
        return intersect_members(self.u, self.v)


def _sub_chain_map(inner: SimplicialMap, outer: SimplicialMap | None, ring: RingSpec) -> ChainMap:
    """Chain map between two extracted subcomplexes ``A <= B`` of the same complex."""
    src = chain_complex(inner.source, ring)
    if outer is None:
        return inner.chain_map(ring)
    tgt = chain_complex(outer.source, ring)
    comps = []
    for n in range(len(src.ranks)):
        pos = {img[1]: k for k, img in enumerate(outer.images[n])}
        rows = [[0] * src.rank(n) for _ in range(tgt.rank(n))]
        for j, img in enumerate(inner.images[n]):
            rows[pos[img[1]]][j] = 1
        comps.append(Matrix(rows, tgt.rank(n), src.rank(n)))
    return ChainMap(src, tgt, tuple(comps))


def pair_ses(p: SubcomplexPair, ring: RingSpec = ZZ) -> ShortExactSeqOfComplexes:
    inc = p.inclusion_chain_map(ring)
    quo = p.quotient_chain_map(ring)
    return ShortExactSeqOfComplexes(inc.source, inc.target, quo.target, inc, quo)


def pair_les(p: SubcomplexPair, ring: RingSpec = ZZ, rng: random.Random | None = None) -> LongExactSequence:
    """``... -> H_n(Y) -> H_n(X) -> H_n(X,Y) -> H_{n-1}(Y) -> ...``, certified exact."""
    return les_from_ses(pair_ses(p, ring), top_degree=p.total.dim + 1, names=("Y", "X", "X,Y"), rng=rng)


@dataclass(frozen=True, eq=False)
class _MvData:
    ses: ShortExactSeqOfComplexes
    w_in_u: SimplicialMap
    w_in_v: SimplicialMap
    u_in_x: SimplicialMap
    v_in_x: SimplicialMap


def _mv_data(s: ExcisiveSquare, ring: RingSpec) -> _MvData:
    x = s.total
    wu, wv = inclusion_map(x, s.intersection), inclusion_map(x, s.intersection)
    ux, vx = inclusion_map(x, s.u), inclusion_map(x, s.v)
    a = _sub_chain_map(wu, ux, ring)
    b = _sub_chain_map(wv, vx, ring)
    cu, cv = a.target, b.target
    cw = a.source
    cx = chain_complex(x, ring)
    middle = cu.direct_sum(cv)
    top = middle.top
    inc = ChainMap(cw, middle, tuple(Matrix.vstack(a.f(n), b.f(n)) for n in range(len(cw.ranks))))
    ux_c, vx_c = ux.chain_map(ring), vx.chain_map(ring)
    proj = ChainMap(middle, cx, tuple(Matrix.hstack(ux_c.f(n), -vx_c.f(n)) for n in range(top + 1)))
    return _MvData(ShortExactSeqOfComplexes(cw, middle, cx, inc, proj), wu, wv, ux, vx)


def mv_short_exact(s: ExcisiveSquare, ring: RingSpec = ZZ) -> ShortExactSeqOfComplexes:
    """``0 -> C(U∩V) -> C(U) ⊕ C(V) -> C(X) -> 0`` with ``c -> (c, c)`` and ``(a, b) -> a - b``."""
    return _mv_data(s, ring).ses


def mayer_vietoris(s: ExcisiveSquare, ring: RingSpec = ZZ, rng: random.Random | None = None) -> LongExactSequence:
    return les_from_ses(mv_short_exact(s, ring), top_degree=s.total.dim + 1, names=MV_NAMES, rng=rng)


@dataclass(frozen=True)
class NaturalityReport:
    squares: tuple[tuple[str, bool], ...]

    @property
    def commutes(self) -> bool:
        return all(ok for _, ok in self.squares)

    def failures(self) -> list[str]:
        return [name for name, ok in self.squares if not ok]

    def to_json(self) -> dict:
        return {"commutes": self.commutes, "squares_checked": len(self.squares), "failures": self.failures()}


def _restricted(f: SimplicialMap, a: Members, b: Members, ring: RingSpec,
                src: ChainComplex, tgt: ChainComplex) -> ChainMap:
    g, _, _ = f.restrict(a, b)
    return ChainMap(src, tgt, g.chain_map(ring).components)


def mv_naturality_check(f: SimplicialMap, s1: ExcisiveSquare, s2: ExcisiveSquare, ring: RingSpec = ZZ) -> NaturalityReport:
    """Check every square of the ladder between the two Mayer-Vietoris sequences, ``∂`` squares included."""
    if f.source.faces != s1.total.faces or f.target.faces != s2.total.faces:
        raise SimplicialMapError("map endpoints differ from the covered complexes")
    if not (f.maps_into(s1.u, s2.u) and f.maps_into(s1.v, s2.v)):
        raise SimplicialMapError("map does not send U into U' and V into V'")
    d1, d2 = _mv_data(s1, ring), _mv_data(s2, ring)
    e1, e2 = d1.ses, d2.ses
    phi_w = _restricted(f, s1.intersection, s2.intersection, ring, e1.left, e2.left)
    phi_u = f.restrict(s1.u, s2.u)[0].chain_map(ring)
    phi_v = f.restrict(s1.v, s2.v)[0].chain_map(ring)
    phi_uv = ChainMap(e1.middle, e2.middle,
                      tuple(Matrix.block_diag(phi_u.f(n), phi_v.f(n)) for n in range(len(e1.middle.ranks))))
    phi_x = ChainMap(e1.right, e2.right, f.chain_map(ring).components)
    h1, h2 = e1.homologies(), e2.homologies()
    top = max(s1.total.dim, s2.total.dim) + 1
    squares = []
    for n in range(top + 1):
        vw = induced_map(phi_w, h1[0], h2[0], n)
        vuv = induced_map(phi_uv, h1[1], h2[1], n)
        vx = induced_map(phi_x, h1[2], h2[2], n)
        i1, i2 = induced_map(e1.inclusion, h1[0], h1[1], n), induced_map(e2.inclusion, h2[0], h2[1], n)
        p1, p2 = induced_map(e1.projection, h1[1], h1[2], n), induced_map(e2.projection, h2[1], h2[2], n)
        squares.append((f"inclusion square in degree {n}", (vuv @ i1).matrix == (i2 @ vw).matrix))
        squares.append((f"difference square in degree {n}", (vx @ p1).matrix == (p2 @ vuv).matrix))
        if n >= 1:
            b1, b2 = connecting_homomorphism(e1, h1, n), connecting_homomorphism(e2, h2, n)
            vw_prev = induced_map(phi_w, h1[0], h2[0], n - 1)
            squares.append((f"boundary square in degree {n}", (vw_prev @ b1).matrix == (b2 @ vx).matrix))
    return NaturalityReport(tuple(squares))


@dataclass(frozen=True)
class ExcisionReport:
    """Per degree: ``H_n(U, U∩V)``, ``H_n(X, V)`` and whether inclusion is an isomorphism."""

    degrees: tuple[tuple[int, FgModule, FgModule, bool], ...]

    @property
    def passed(self) -> bool:
        return all(ok for *_, ok in self.degrees)

    def failed_degrees(self) -> list[int]:
        return [n for n, _, _, ok in self.degrees if not ok]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "degrees": [{"degree": n, "source": str(a), "target": str(b), "isomorphism": ok}
                        for n, a, b, ok in self.degrees],
        }


def excision_compare(s: ExcisiveSquare, ring: RingSpec = ZZ) -> ExcisionReport:
    """Certify ``H_n(U, U∩V) -> H_n(X, V)`` is an isomorphism in every degree up to ``dim X``."""
    x = s.total
    inc = inclusion_map(x, s.u)
    _, umaps = x.subcomplex(s.u)
    w_in_u = tuple(frozenset(k for k, old in enumerate(umaps[n]) if old in s.v[n]) for n in range(len(umaps)))
    src = SubcomplexPair(inc.source, w_in_u)
    tgt = SubcomplexPair(x, s.v)
    cmap = relative_chain_map(inc, src, tgt, ring)
    hs, ht = homology(cmap.source), homology(cmap.target)
    out = []
    for n in range(x.dim + 1):
        m = induced_map(cmap, hs, ht, n)
        out.append((n, hs[n], ht[n], m.is_isomorphism()))
    return ExcisionReport(tuple(out))


def reduced_homology(x: DeltaComplex, basepoint: int = 0, ring: RingSpec = ZZ) -> GradedModule:
    """``H_n(X, pt)``; checks ``H_0(X) = H~_0(X) ⊕ R`` before returning."""
    if not 0 <= basepoint < x.count(0):
        raise InvariantError(f"basepoint {basepoint} is not a vertex")
    members = x.members([[basepoint]])
    red = homology(relative_chain_complex(SubcomplexPair(x, members), ring))
    full = homology(chain_complex(x, ring))
    if full[0] != red[0].direct_sum(FgModule.free(ring)):
        raise InvariantError(f"H_0 = {full[0]} is not reduced H_0 ({red[0]}) plus {ring}")
    for n in range(1, x.dim + 1):
        if full[n] != red[n]:
            raise InvariantError(f"reduced and unreduced homology differ in degree {n}")
    return red


def circle_two_arc_cover() -> ExcisiveSquare:
    """Square circle covered by two arcs of two edges each, meeting in two points."""
    x = circle_mgon(4)
    return ExcisiveSquare(x, x.closure([(1, 0), (1, 1)]), x.closure([(1, 2), (1, 3)]))


def sphere_two_disk_cover() -> ExcisiveSquare:
    """Boundary of the 3-simplex: star of vertex 0 and the opposite triangle, meeting in a circle."""
    x = sphere_delta(2)
    star = [x.simplex_with_vertices(t) for t in ((0, 1, 2), (0, 1, 3), (0, 2, 3))]
    return ExcisiveSquare(x, x.closure(star), x.closure([x.simplex_with_vertices((1, 2, 3))]))


def torus_two_cylinder_cover(a: int = 3, b: int = 3) -> ExcisiveSquare:
    """Grid torus split into the bottom row band and the remaining bands, meeting in two circles."""
    x = torus_grid(a, b)
    return ExcisiveSquare(x, x.closure(torus_grid_row(a, b, [0])), x.closure(torus_grid_row(a, b, range(1, b))))
