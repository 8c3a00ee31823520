"""Combinatorial spaces: delta complexes, CW incidence data, finite posets.

Subcomplexes are stored as one frozenset of simplex indices per dimension.
Simplicial maps send every simplex to ``theta^* tau``: a target simplex
``tau`` pulled back along a monotone surjection ``theta``; a non-identity
``theta`` is the degenerate marker and contributes 0 on chains.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .algebra import ZZ, Matrix, RingSpec
from .complexes import ChainComplex, ChainMap, cone
from .errors import InvariantError

Members = tuple  # tuple[frozenset[int], ...], one entry per dimension
Image = tuple  # (dim, index, theta)

__all__ = [
    "DeltaComplex",
    "SubcomplexPair",
    "CwComplex",
    "FinitePoset",
    "Filtration",
    "SimplicialMap",
    "SimplicialMapError",
    "Cylinder",
    "chain_complex",
    "relative_chain_complex",
    "relative_chain_map",
    "inclusion_map",
    "union_members",
    "intersect_members",
    "members_subset",
    "torus_grid_row",
    "cylinder",
    "cylinder_pair",
    "cw_chain_complex",
    "order_complex",
    "disjoint_union",
    "simplicial_map",
    "skeletal_filtration",
    "delta_from_simplices",
    "point",
    "sphere_delta",
    "disk_pair",
    "torus_delta",
    "rp2_delta",
    "klein_delta",
    "circle_mgon",
    "torus_grid",
    "wrap_map",
    "covering_map",
    "collapse_map",
]


class SimplicialMapError(InvariantError):
    pass


@dataclass(frozen=True, eq=False)
class DeltaComplex:
    """A semi-simplicial set.

    ``faces[n][k]`` lists the ``n + 1`` faces of the ``k``-th ``n``-simplex,
    face ``i`` omitting vertex ``i``.  ``faces[0]`` holds empty tuples.
    """

    faces: tuple[tuple[tuple[int, ...], ...], ...]
    labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        faces = tuple(tuple(tuple(f) for f in level) for level in self.faces)
        while faces and not faces[-1]:
            faces = faces[:-1]
        object.__setattr__(self, "faces", faces)
        for n, level in enumerate(faces):
            for k, fs in enumerate(level):
                if len(fs) != (n + 1 if n else 0):
                    raise InvariantError(f"simplex ({n},{k}) has {len(fs)} faces, expected {n + 1 if n else 0}")
                for i, f in enumerate(fs):
                    if not 0 <= f < len(faces[n - 1]):
                        raise InvariantError(f"simplex ({n},{k}): face {i} index {f} out of range")
        for n in range(2, len(faces)):
            below = faces[n - 1]
            for k, fs in enumerate(faces[n]):
                for j in range(n + 1):
                    for i in range(j):
                        if below[fs[j]][i] != below[fs[i]][j - 1]:
                            raise InvariantError(
                                f"simplex ({n},{k}) violates d_{i} d_{j} = d_{j - 1} d_{i}"
                            )

    @classmethod
    def from_faces(cls, num_vertices: int, higher: Sequence = (), labels=None) -> "DeltaComplex":
        return cls((((),) * num_vertices,) + tuple(higher), labels)

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.faces)

    def count(self, n: int) -> int:
        return len(self.faces[n]) if 0 <= n < len(self.faces) else 0

    def face(self, n: int, k: int, i: int) -> int:
        return self.faces[n][k][i]

    @cached_property
    def vertex_tuples(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        out = [tuple((k,) for k in range(self.count(0)))] if self.faces else []
        for n in range(1, len(self.faces)):
            prev = out[n - 1]
            out.append(tuple(prev[fs[n]] + (prev[fs[0]][-1],) for fs in self.faces[n]))
        return tuple(out)

    def vertices(self, n: int, k: int) -> tuple[int, ...]:
        return self.vertex_tuples[n][k]

    @cached_property
    def _vertex_lookup(self) -> dict:
        table = {}
        for n, level in enumerate(self.vertex_tuples):
            for k, vs in enumerate(level):
                if vs in table:
                    raise ValueError(f"vertex set {vs} is shared by several simplices")
                table[vs] = (n, k)
        return table

    def simplex_with_vertices(self, vs: Sequence[int]) -> tuple[int, int]:
        return self._vertex_lookup[tuple(vs)]

    def all_members(self) -> Members:
        return tuple(frozenset(range(c)) for c in self.counts)

    def empty_members(self) -> Members:
        return tuple(frozenset() for _ in self.counts)

    def skeleton(self, p: int) -> Members:
        return tuple(frozenset(range(c)) if n <= p else frozenset() for n, c in enumerate(self.counts))

    def members(self, spec) -> Members:
        """Normalize per-dimension index lists into a ``Members`` tuple."""
        spec = list(spec) if spec is not None else []
        out = []
        for n in range(len(self.faces)):
            idx = frozenset(spec[n]) if n < len(spec) else frozenset()
            for k in idx:
                if not 0 <= k < self.count(n):
                    raise InvariantError(f"simplex ({n},{k}) does not exist")
            out.append(idx)
        if len(spec) > len(self.faces) and any(spec[len(self.faces):]):
            raise InvariantError("subcomplex lists simplices above the top dimension")
        return tuple(out)

    def closure(self, seeds: Iterable[tuple[int, int]]) -> Members:
        sets = [set() for _ in self.faces]
        stack = list(seeds)
        while stack:
            n, k = stack.pop()
            if k in sets[n]:
                continue
            sets[n].add(k)
            if n:
                stack.extend((n - 1, f) for f in self.faces[n][k])
        return tuple(frozenset(s) for s in sets)

    def check_closed(self, members: Members) -> None:
        for n in range(1, len(members)):
            for k in members[n]:
                for i, f in enumerate(self.faces[n][k]):
                    if f not in members[n - 1]:
                        raise InvariantError(f"simplex ({n},{k}) is in the subcomplex but its face {i} ({n - 1},{f}) is not")

    def subcomplex(self, members: Members) -> tuple["DeltaComplex", tuple[tuple[int, ...], ...]]:
        """The subcomplex as a complex of its own plus ``new index -> old index`` per dimension."""
        self.check_closed(members)
        index_maps = tuple(tuple(sorted(members[n])) if n < len(members) else () for n in range(len(self.faces)))
        inverse = [{old: new for new, old in enumerate(m)} for m in index_maps]
        faces = []
        for n, olds in enumerate(index_maps):
            faces.append(tuple(tuple(inverse[n - 1][f] for f in self.faces[n][k]) if n else () for k in olds))
        labels = tuple(self.labels[k] for k in index_maps[0]) if self.labels and index_maps else None
        return DeltaComplex(tuple(faces), labels), index_maps

    def chain_complex(self, ring: RingSpec = ZZ) -> ChainComplex:
        return chain_complex(self, ring)

    def __repr__(self) -> str:
        return f"DeltaComplex(counts={self.counts})"


def union_members(a: Members, b: Members) -> Members:
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else frozenset()) | (b[i] if i < len(b) else frozenset()) for i in range(n))


def intersect_members(a: Members, b: Members) -> Members:
    n = max(len(a), len(b))
    return tuple((a[i] if i < len(a) else frozenset()) & (b[i] if i < len(b) else frozenset()) for i in range(n))


def members_subset(a: Members, b: Members) -> bool:
    return all(s <= (b[n] if n < len(b) else frozenset()) for n, s in enumerate(a))


def chain_complex(x: DeltaComplex, ring: RingSpec = ZZ) -> ChainComplex:
    """Free on simplices; ``d(sigma) = sum_i (-1)^i face_i(sigma)``."""
    counts = x.counts
    bds = []
    for n in range(1, len(counts)):
        rows = [[0] * counts[n] for _ in range(counts[n - 1])]
        for k, fs in enumerate(x.faces[n]):
            for i, f in enumerate(fs):
                rows[f][k] += -1 if i % 2 else 1
        bds.append(Matrix(rows, counts[n - 1], counts[n]))
    return ChainComplex(ring, counts, tuple(bds))


def _inclusion_matrix(index_map: Sequence[int], total: int) -> Matrix:
    rows = [[0] * len(index_map) for _ in range(total)]
    for new, old in enumerate(index_map):
        rows[old][new] = 1
    return Matrix(rows, total, len(index_map))


@dataclass(frozen=True, eq=False)
class SubcomplexPair:
    """``(X, Y)`` with ``Y`` a closed subcomplex of ``X``."""

    total: DeltaComplex
    sub: Members

    def __post_init__(self):
        sub = self.total.members(self.sub)
        self.total.check_closed(sub)
        object.__setattr__(self, "sub", sub)

    @classmethod
    def absolute(cls, x: DeltaComplex) -> "SubcomplexPair":
        return cls(x, x.empty_members())

    @property
    def member_flags(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(tuple(k in self.sub[n] for k in range(c)) for n, c in enumerate(self.total.counts))

    def quotient_basis(self, n: int) -> tuple[int, ...]:
        return tuple(k for k in range(self.total.count(n)) if k not in self.sub[n])

    def sub_complex(self) -> tuple[DeltaComplex, tuple]:
        return self.total.subcomplex(self.sub)

    def inclusion_chain_map(self, ring: RingSpec = ZZ) -> ChainMap:
        y, maps = self.sub_complex()
        cy = chain_complex(y, ring)
        cx = chain_complex(self.total, ring)
        comps = tuple(_inclusion_matrix(maps[n], cx.rank(n)) for n in range(len(cy.ranks)))
        return ChainMap(cy, cx, comps)

    def quotient_chain_map(self, ring: RingSpec = ZZ) -> ChainMap:
        """Projection ``C(X) -> C(X)/C(Y)``."""
        cx = chain_complex(self.total, ring)
        q = relative_chain_complex(self, ring)
        comps = []
        for n in range(len(cx.ranks)):
            basis = self.quotient_basis(n)
            rows = [[1 if j == b else 0 for j in range(cx.rank(n))] for b in basis]
            comps.append(Matrix(rows, len(basis), cx.rank(n)))
        return ChainMap(cx, q, tuple(comps))


def relative_chain_complex(p: SubcomplexPair, ring: RingSpec = ZZ, method: str = "quotient") -> ChainComplex:
    """Chains of ``(X, Y)``: the quotient ``C(X)/C(Y)`` or the cone of ``C(Y) -> C(X)``."""
    if method == "cone":
        return cone(p.inclusion_chain_map(ring))
    if method != "quotient":
        raise ValueError(f"unknown method {method!r}")
    cx = chain_complex(p.total, ring)
    ranks = tuple(len(p.quotient_basis(n)) for n in range(len(cx.ranks)))
    bds = tuple(cx.d(n).submatrix(p.quotient_basis(n - 1), p.quotient_basis(n)) for n in range(1, len(cx.ranks)))
    return ChainComplex(ring, ranks, bds)


# ---------------------------------------------------------------------------
# simplicial maps
# ---------------------------------------------------------------------------


def _identity_theta(n: int) -> tuple[int, ...]:
    return tuple(range(n + 1))


def _pull_face(target: DeltaComplex, img: Image, i: int) -> Image:
    """Face ``i`` of ``theta^* tau``, normalized to a surjective ``theta``."""
    k, tau, theta = img
    th = theta[:i] + theta[i + 1:]
    present = sorted(set(th))
    cur, t = k, tau
    for v in reversed([v for v in range(k + 1) if v not in present]):
        t = target.faces[cur][t][v]
        cur -= 1
    pos = {v: j for j, v in enumerate(present)}
    return (cur, t, tuple(pos[v] for v in th))


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    """``images[n][k] = (dim, tau, theta)``: the ``n``-simplex ``k`` goes to ``theta^* tau``."""

    source: DeltaComplex
    target: DeltaComplex
    images: tuple[tuple[Image, ...], ...]

    def __post_init__(self):
        imgs = tuple(tuple((int(a), int(b), tuple(c)) for a, b, c in level) for level in self.images)
        object.__setattr__(self, "images", imgs)
        if tuple(len(l) for l in imgs) != self.source.counts:
            raise SimplicialMapError(f"assignment sizes {[len(l) for l in imgs]} != {self.source.counts}")
        for n, level in enumerate(imgs):
            for k, (d, t, theta) in enumerate(level):
                if not 0 <= d <= n or not 0 <= t < self.target.count(d):
                    raise SimplicialMapError(f"simplex ({n},{k}) has an impossible image ({d},{t})")
                if len(theta) != n + 1 or theta[0] != 0 or theta[-1] != d or any(
                    b - a not in (0, 1) for a, b in zip(theta, theta[1:])
                ):
                    raise SimplicialMapError(f"simplex ({n},{k}): {theta} is not a monotone surjection onto [{d}]")
        for n in range(1, len(imgs)):
            for k, fs in enumerate(self.source.faces[n]):
                for i, f in enumerate(fs):
                    want = _pull_face(self.target, imgs[n][k], i)
                    if imgs[n - 1][f] != want:
                        raise SimplicialMapError(
                            f"simplex ({n},{k}): face {i} goes to {imgs[n - 1][f]} but the image's face {i} is {want}"
                        )

    def chain_map(self, ring: RingSpec = ZZ) -> ChainMap:
        cs, ct = chain_complex(self.source, ring), chain_complex(self.target, ring)
        comps = []
        for n, level in enumerate(self.images):
            rows = [[0] * len(level) for _ in range(ct.rank(n))]
            for k, (d, t, _) in enumerate(level):
                if d == n:
                    rows[t][k] = 1
            comps.append(Matrix(rows, ct.rank(n), len(level)))
        return ChainMap(cs, ct, tuple(comps))

    def image_members(self, members: Members) -> Members:
        sets = [set() for _ in range(len(self.target.faces))]
        for n, idx in enumerate(members):
            for k in idx:
                d, t, _ = self.images[n][k]
                sets[d].add(t)
        return tuple(frozenset(s) for s in sets)

    def maps_into(self, src: Members, tgt: Members) -> bool:
        return members_subset(self.image_members(src), tgt)

    def __matmul__(self, other: "SimplicialMap") -> "SimplicialMap":
        """``self . other``."""
        if other.target is not self.source:
            if other.target.faces != self.source.faces:
                raise SimplicialMapError("maps are not composable")
        out = []
        for level in other.images:
            row = []
            for d, t, theta in level:
                d2, t2, theta2 = self.images[d][t]
                row.append((d2, t2, tuple(theta2[x] for x in theta)))
            out.append(tuple(row))
        return SimplicialMap(other.source, self.target, tuple(out))

    def restrict(self, src: Members, tgt: Members) -> tuple["SimplicialMap", DeltaComplex, DeltaComplex]:
        """The map between the extracted subcomplexes ``src -> tgt``."""
        if not self.maps_into(src, tgt):
            raise SimplicialMapError("the map does not send the subcomplex into the target subcomplex")
        a, amap = self.source.subcomplex(src)
        b, bmap = self.target.subcomplex(tgt)
        inv = [{old: new for new, old in enumerate(m)} for m in bmap]
        images = []
        for n, olds in enumerate(amap[: len(a.faces)]):
            images.append(tuple((self.images[n][k][0], inv[self.images[n][k][0]][self.images[n][k][1]],
                                 self.images[n][k][2]) for k in olds))
        return SimplicialMap(a, b, tuple(images)), a, b

    @classmethod
    def identity(cls, x: DeltaComplex) -> "SimplicialMap":
        return cls(x, x, tuple(tuple((n, k, _identity_theta(n)) for k in range(c)) for n, c in enumerate(x.counts)))

    @classmethod
    def from_vertex_map(cls, source: DeltaComplex, target: DeltaComplex, phi: Sequence[int]) -> "SimplicialMap":
        """For complexes whose simplices are determined by their vertices (ordered simplicial complexes)."""
        images = []
        for n, level in enumerate(source.vertex_tuples):
            row = []
            for k, vs in enumerate(level):
                w = [phi[v] for v in vs]
                if any(b < a for a, b in zip(w, w[1:])):
                    raise SimplicialMapError(f"simplex ({n},{k}): vertex map is not order preserving on it")
                present = sorted(set(w))
                try:
                    d, t = target.simplex_with_vertices(present)
                except KeyError:
                    raise SimplicialMapError(f"simplex ({n},{k}): {present} is not a simplex of the target") from None
                pos = {v: j for j, v in enumerate(present)}
                row.append((d, t, tuple(pos[v] for v in w)))
            images.append(tuple(row))
        return cls(source, target, tuple(images))


def _parse_image(n: int, entry) -> Image:
    if isinstance(entry, int):
        return (n, entry, _identity_theta(n))
    if isinstance(entry, dict):
        d, t = entry["simplex"]
        return (d, t, tuple(entry["theta"]))
    d, t, theta = entry
    return (d, t, tuple(theta))


def simplicial_map(src: DeltaComplex, tgt: DeltaComplex, assignment: Sequence[Sequence]) -> SimplicialMap:
    """Build a map from per-dimension assignments.

    Each entry is an index (same-dimension image), ``(dim, index, theta)`` or
    ``{"simplex": [dim, index], "theta": [...]}``.  Rejects assignments that
    do not commute with the face maps, naming the offending simplex.
    """
    images = tuple(tuple(_parse_image(n, e) for e in level) for n, level in enumerate(assignment))
    return SimplicialMap(src, tgt, images)


def inclusion_map(x: DeltaComplex, members: Members) -> SimplicialMap:
    """The subcomplex as its own complex, with its inclusion into ``x``."""
    sub, maps = x.subcomplex(members)
    imgs = tuple(tuple((n, old, _identity_theta(n)) for old in maps[n]) for n in range(len(sub.faces)))
    return SimplicialMap(sub, x, imgs)


def relative_chain_map(f: SimplicialMap, src: SubcomplexPair, tgt: SubcomplexPair, ring: RingSpec = ZZ) -> ChainMap:
    """Chain map ``C(X)/C(Y) -> C(X')/C(Y')`` induced by a map of pairs."""
    if not f.maps_into(src.sub, tgt.sub):
        raise SimplicialMapError("map does not send the subcomplex into the target subcomplex")
    cs, ct = relative_chain_complex(src, ring), relative_chain_complex(tgt, ring)
    comps = []
    for n in range(len(cs.ranks)):
        sb, tb = src.quotient_basis(n), tgt.quotient_basis(n)
        pos = {t: i for i, t in enumerate(tb)}
        rows = [[0] * len(sb) for _ in range(len(tb))]
        for j, k in enumerate(sb):
            d, t, _ = f.images[n][k]
            if d == n and t in pos:
                rows[pos[t]][j] = 1
        comps.append(Matrix(rows, len(tb), len(sb)))
    return ChainMap(cs, ct, tuple(comps))


# ---------------------------------------------------------------------------
# cylinders
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Cylinder:
    complex: DeltaComplex
    i0: SimplicialMap
    i1: SimplicialMap
    p: SimplicialMap
    origin: tuple[tuple[int, ...], ...]  # per cylinder simplex: (dim, index) of the source simplex

    def members_over(self, members: Members) -> Members:
        """Cylinder simplices lying over a subcomplex of the base."""
        return tuple(
            frozenset(k for k, (n, s) in enumerate(level) if n < len(members) and s in members[n])
            for level in self.origin
        )


def cylinder(x: DeltaComplex) -> Cylinder:
    """``X x I`` with the prism triangulation.

    A simplex of the cylinder is ``(sigma, chain)`` where ``chain`` is a chain
    in ``[n] x [1]`` whose first coordinates exhaust ``[n]``; the vertex order
    of ``sigma`` fixes the triangulation.
    """
    keys: list[list[tuple]] = [[] for _ in range(x.dim + 2)]
    for n in range(x.dim + 1):
        for s in range(x.count(n)):
            for j in (n + 1, 0) + tuple(range(1, n + 1)):
                keys[n].append((n, s, tuple((a, 0 if a < j else 1) for a in range(n + 1))))
        for s in range(x.count(n)):
            for j in range(n + 1):
                chain = tuple((a, 0) for a in range(j + 1)) + tuple((a, 1) for a in range(j, n + 1))
                keys[n + 1].append((n, s, chain))
    if x.dim < 0:
        keys = []
    index = [{key: k for k, key in enumerate(level)} for level in keys]
    faces = []
    for dim, level in enumerate(keys):
        row = []
        for n, s, chain in level:
            if dim == 0:
                row.append(())
                continue
            fs = []
            for i in range(len(chain)):
                rest = chain[:i] + chain[i + 1:]
                present = {a for a, _ in rest}
                if len(present) == n + 1:
                    fs.append(index[dim - 1][(n, s, rest)])
                else:
                    miss = next(a for a in range(n + 1) if a not in present)
                    t = x.faces[n][s][miss]
                    re = tuple((a - (a > miss), b) for a, b in rest)
                    fs.append(index[dim - 1][(n - 1, t, re)])
            row.append(tuple(fs))
        faces.append(tuple(row))
    cyl = DeltaComplex(tuple(faces))

    def end(b):
        return tuple(
            tuple((n, index[n][(n, s, tuple((a, b) for a in range(n + 1)))], _identity_theta(n)) for s in range(c))
            for n, c in enumerate(x.counts)
        )

    proj = tuple(tuple((n, s, tuple(a for a, _ in chain)) for n, s, chain in level) for level in keys)
    origin = tuple(tuple((n, s) for n, s, _ in level) for level in keys)
    return Cylinder(
        cyl,
        SimplicialMap(x, cyl, end(0)),
        SimplicialMap(x, cyl, end(1)),
        SimplicialMap(cyl, x, proj),
        origin,
    )


def cylinder_pair(p: SubcomplexPair) -> tuple[SubcomplexPair, Cylinder]:
    """``(X x I, Y x I)`` together with the cylinder maps of ``X``."""
    cyl = cylinder(p.total)
    return SubcomplexPair(cyl.complex, cyl.members_over(p.sub)), cyl


# ---------------------------------------------------------------------------
# CW complexes and posets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CwComplex:
    """Cell counts plus incidence matrices ``D_n`` (``cells_{n-1} x cells_n``)."""

    cell_counts: tuple[int, ...]
    incidence: tuple[Matrix, ...]

    def __post_init__(self):
        counts = tuple(self.cell_counts)
        inc = tuple(m if isinstance(m, Matrix) else Matrix(m, counts[n], counts[n + 1])
                    for n, m in enumerate(self.incidence))
        object.__setattr__(self, "cell_counts", counts)
        object.__setattr__(self, "incidence", inc)
        if len(inc) != max(len(counts) - 1, 0):
            raise InvariantError(f"{len(counts)} cell dimensions need {len(counts) - 1} incidence matrices")
        for n, m in enumerate(inc, start=1):
            if m.shape != (counts[n - 1], counts[n]):
                raise InvariantError(f"D_{n} has shape {m.shape}, expected {(counts[n - 1], counts[n])}")
        for n in range(1, len(inc)):
            if not (inc[n - 1] @ inc[n]).is_zero():
                raise InvariantError(f"D_{n} D_{n + 1} != 0")


def cw_chain_complex(k: CwComplex, ring: RingSpec = ZZ) -> ChainComplex:
    return ChainComplex(ring, k.cell_counts, k.incidence)


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """Finite poset, i.e. a finite T0 space; ``leq[i][j]`` means ``elements[i] <= elements[j]``."""

    elements: tuple
    leq: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        els = tuple(self.elements)
        leq = tuple(tuple(bool(x) for x in r) for r in self.leq)
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "leq", leq)
        n = len(els)
        if len(leq) != n or any(len(r) != n for r in leq):
            raise InvariantError("order matrix has the wrong shape")
        for i in range(n):
            if not leq[i][i]:
                raise InvariantError(f"{els[i]!r} <= {els[i]!r} fails (not reflexive)")
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    raise InvariantError(f"{els[i]!r} and {els[j]!r} violate antisymmetry")
                if leq[i][j]:
                    for k in range(n):
                        if leq[j][k] and not leq[i][k]:
                            raise InvariantError(f"transitivity fails at {els[i]!r} <= {els[j]!r} <= {els[k]!r}")

    @classmethod
    def from_relations(cls, elements: Sequence, less: Iterable[tuple]) -> "FinitePoset":
        """Reflexive-transitive closure of the given ``a < b`` pairs."""
        els = tuple(elements)
        pos = {e: i for i, e in enumerate(els)}
        n = len(els)
        leq = [[i == j for j in range(n)] for i in range(n)]
        for a, b in less:
            leq[pos[a]][pos[b]] = True
        for k in range(n):
            for i in range(n):
                if leq[i][k]:
                    for j in range(n):
                        if leq[k][j]:
                            leq[i][j] = True
        return cls(els, tuple(tuple(r) for r in leq))

    def less(self, i: int, j: int) -> bool:
        return i != j and self.leq[i][j]


def order_complex(p: FinitePoset) -> DeltaComplex:
    """Nerve of the poset: ``n``-simplices are chains ``x_0 < ... < x_n``."""
    n = len(p.elements)
    order = sorted(range(n), key=lambda i: (sum(p.leq[j][i] for j in range(n)), i))
    chains = []

    def extend(chain):
        chains.append(chain)
        for j in order:
            if p.less(chain[-1], j):
                extend(chain + (j,))

    for i in order:
        extend((i,))
    rank = {e: r for r, e in enumerate(order)}
    simplices = [tuple(rank[e] for e in c) for c in chains]
    labels = tuple(p.elements[e] for e in order)
    return delta_from_simplices(simplices, num_vertices=n, labels=labels)


# ---------------------------------------------------------------------------
# unions, filtrations, builders
# ---------------------------------------------------------------------------


def disjoint_union(xs: Sequence[DeltaComplex]) -> tuple[DeltaComplex, list[SimplicialMap]]:
    if not xs:
        raise ValueError("disjoint union of an empty list")
    top = max(x.dim for x in xs)
    faces = [[] for _ in range(top + 1)]
    offsets = []
    for x in xs:
        off = [len(faces[n]) for n in range(top + 1)]
        offsets.append(off)
        for n in range(x.dim + 1):
            for fs in x.faces[n]:
                faces[n].append(tuple(f + off[n - 1] for f in fs) if n else ())
    u = DeltaComplex(tuple(tuple(l) for l in faces))
    incs = []
    for x, off in zip(xs, offsets):
        imgs = tuple(tuple((n, k + off[n], _identity_theta(n)) for k in range(c)) for n, c in enumerate(x.counts))
        incs.append(SimplicialMap(x, u, imgs))
    return u, incs


@dataclass(frozen=True, eq=False)
class Filtration:
    """``X_0 <= X_1 <= ... <= X_d = X`` as closed member sets (``X_{-1}`` is empty)."""

    total: DeltaComplex
    stages: tuple[Members, ...]

    def __post_init__(self):
        stages = tuple(self.total.members(s) for s in self.stages)
        object.__setattr__(self, "stages", stages)
        if not stages:
            raise InvariantError("a filtration needs at least one stage")
        for p, s in enumerate(stages):
            try:
                self.total.check_closed(s)
            except InvariantError as exc:
                raise InvariantError(f"stage {p}: {exc}") from None
            if p and not members_subset(stages[p - 1], s):
                raise InvariantError(f"stage {p} does not contain stage {p - 1}")
        if stages[-1] != self.total.all_members():
            raise InvariantError("the last stage must be the whole complex")

    @property
    def length(self) -> int:
        return len(self.stages)

    def stage(self, p: int) -> Members:
        if p < 0:
            return self.total.empty_members()
        return self.stages[min(p, len(self.stages) - 1)]


def skeletal_filtration(x: DeltaComplex) -> Filtration:
    return Filtration(x, tuple(x.skeleton(p) for p in range(max(x.dim, 0) + 1)))


def delta_from_simplices(simplices: Iterable[Sequence[int]], num_vertices: int | None = None, labels=None) -> DeltaComplex:
    """Ordered simplicial complex generated by the given vertex tuples (closed under faces)."""
    found: set[tuple[int, ...]] = set()
    for s in simplices:
        s = tuple(sorted(set(s)))
        for r in range(1, len(s) + 1):
            found.update(itertools.combinations(s, r))
    if num_vertices is not None:
        found.update((v,) for v in range(num_vertices))
    top = max((len(s) for s in found), default=0) - 1
    levels = [sorted(s for s in found if len(s) == n + 1) for n in range(top + 1)]
    if levels and [v for (v,) in levels[0]] != list(range(len(levels[0]))):
        raise ValueError("vertices must be numbered 0..N-1")
    index = [{s: k for k, s in enumerate(level)} for level in levels]
    faces = []
    for n, level in enumerate(levels):
        faces.append(tuple(tuple(index[n - 1][s[:i] + s[i + 1:]] for i in range(n + 1)) if n else () for s in level))
    return DeltaComplex(tuple(faces), tuple(labels) if labels is not None else None)


def point() -> DeltaComplex:
    return DeltaComplex.from_faces(1)


def sphere_delta(n: int) -> DeltaComplex:
    """``S^n`` as the boundary of the ``(n+1)``-simplex."""
    if n < 0:
        raise ValueError("sphere dimension must be >= 0")
    vs = range(n + 2)
    return delta_from_simplices(itertools.combinations(vs, n + 1))


def disk_pair(n: int) -> SubcomplexPair:
    """``(D^n, S^{n-1})`` as the ``n``-simplex with its boundary."""
    x = delta_from_simplices([tuple(range(n + 1))])
    sub = tuple(frozenset(range(c)) if k < n else frozenset() for k, c in enumerate(x.counts))
    return SubcomplexPair(x, sub)


def torus_delta() -> DeltaComplex:
    """One vertex, edges a (horizontal), b (vertical), c (diagonal), two triangles."""
    return DeltaComplex.from_faces(1, [((0, 0), (0, 0), (0, 0)), ((1, 2, 0), (0, 2, 1))])


def rp2_delta() -> DeltaComplex:
    """Square with antipodal boundary identification: vertices P, Q; edges a, b, c."""
    # a: P->Q, b: P->Q, c: Q->Q; T1 = [A,B,C] -> (c, b, a), T2 = [D,B,C] -> (c, a, b)
    return DeltaComplex.from_faces(2, [((1, 0), (1, 0), (1, 1)), ((2, 1, 0), (2, 0, 1))])


def klein_delta() -> DeltaComplex:
    """Square with one pair of sides twisted; one vertex, edges a, b, c."""
    # T1 = [A,C,B] -> (c, a, b), T2 = [C,D,B] -> (b, c, a)
    return DeltaComplex.from_faces(1, [((0, 0), (0, 0), (0, 0)), ((2, 0, 1), (1, 2, 0))])


def circle_mgon(m: int) -> DeltaComplex:
    """``m`` vertices and edges ``e_j : v_j -> v_{j+1 mod m}``."""
    if m < 1:
        raise ValueError("an m-gon needs m >= 1")
    return DeltaComplex.from_faces(m, [tuple(((j + 1) % m, j) for j in range(m))])


def torus_grid(a: int = 3, b: int = 3) -> DeltaComplex:
    """Simplicial torus from an ``a x b`` grid (``a, b >= 3``); row ``j`` holds vertices ``j*a .. j*a+a-1``."""
    if a < 3 or b < 3:
        raise ValueError("grid torus needs a, b >= 3")

    def v(i, j):
        return (i % a) + a * (j % b)

    tris = []
    for j in range(b):
        for i in range(a):
            tris.append((v(i, j), v(i + 1, j), v(i + 1, j + 1)))
            tris.append((v(i, j), v(i, j + 1), v(i + 1, j + 1)))
    return delta_from_simplices(tris)


def torus_grid_row(a: int, b: int, rows: Iterable[int]) -> list[tuple[int, int]]:
    """Seeds (dim 2) for the triangles of the given grid rows of :func:`torus_grid`."""
    x = torus_grid(a, b)
    seeds = []
    for j in rows:
        for i in range(a):
            for tri in ((i, j, i + 1, j, i + 1, j + 1), (i, j, i, j + 1, i + 1, j + 1)):
                vs = sorted({(tri[0] % a) + a * (tri[1] % b), (tri[2] % a) + a * (tri[3] % b),
                             (tri[4] % a) + a * (tri[5] % b)})
                seeds.append(x.simplex_with_vertices(vs))
    return seeds


def wrap_map(m: int) -> SimplicialMap:
    """Degree-``m`` map onto the one-vertex circle (``m = 0`` is the constant map)."""
    target = circle_mgon(1)
    if m == 0:
        return simplicial_map(target, target, [[0], [(0, 0, (0, 0))]])
    src = circle_mgon(m)
    return simplicial_map(src, target, [[0] * m, [0] * m])


def covering_map(n: int, k: int) -> SimplicialMap:
    """``circle_mgon(n*k) -> circle_mgon(n)``, wrapping ``k`` times."""
    src, tgt = circle_mgon(n * k), circle_mgon(n)
    return simplicial_map(src, tgt, [[j % n for j in range(n * k)], [j % n for j in range(n * k)]])


def collapse_map(x: DeltaComplex, target: DeltaComplex | None = None, vertex: int = 0) -> SimplicialMap:
    """Constant map onto a vertex; positive-dimensional simplices become degenerate."""
    target = point() if target is None else target
    return SimplicialMap(x, target, tuple(tuple((0, vertex, (0,) * (n + 1)) for _ in range(c))
                                           for n, c in enumerate(x.counts)))
