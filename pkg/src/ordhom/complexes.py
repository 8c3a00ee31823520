"""Free chain complexes with integer differentials and their homology.

A complex over a ring ``R`` is stored by its integer differentials; the
chain groups are ``R^{rank_n}``.  Homology classes carry explicit cycle
representatives so that induced maps and connecting homomorphisms can be
written as matrices in canonical generators.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .algebra import (
    ZZ,
    ExactnessCertificate,
    FgModule,
    LatticeSolver,
    Matrix,
    ModuleMap,
    RingSpec,
    _snf_partial,
    certify_exact,
    invariant_factors,
)
from .errors import DimensionError, ExactnessError, InvariantError, LiftError, RingMismatchError

__all__ = [
    "ChainComplex",
    "ChainMap",
    "HomologyGroup",
    "GradedModule",
    "ShortExactSeqOfComplexes",
    "LongExactSequence",
    "homology",
    "homology_with_coefficients",
    "uct_oracle",
    "induced_map",
    "cone",
    "connecting_homomorphism",
    "les_from_ses",
]


def _zero_in_ring(m: Matrix, ring: RingSpec) -> bool:
    if ring.is_modular:
        return all(a % ring.modulus == 0 for r in m.data for a in r)
    return m.is_zero()


@dataclass(frozen=True)
class ChainComplex:
    """``C_0 <- C_1 <- ... <- C_top`` with ``C_n = R^{ranks[n]}``.

    ``boundaries[n - 1]`` is ``d_n : C_n -> C_{n-1}``; use :meth:`d` for any degree.
    """

    ring: RingSpec
    ranks: tuple[int, ...]
    boundaries: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "ranks", tuple(self.ranks))
        object.__setattr__(self, "boundaries", tuple(self.boundaries))
        if len(self.boundaries) != max(len(self.ranks) - 1, 0):
            raise DimensionError(f"{len(self.ranks)} chain groups need {len(self.ranks) - 1} differentials")
        for n, d in enumerate(self.boundaries, start=1):
            if d.shape != (self.ranks[n - 1], self.ranks[n]):
                raise DimensionError(f"d_{n} has shape {d.shape}, expected {(self.ranks[n - 1], self.ranks[n])}")
            if not d.is_integral():
                raise TypeError(f"d_{n} must have integer entries")
        for n in range(2, len(self.ranks)):
            if not _zero_in_ring(self.d(n - 1) @ self.d(n), self.ring):
                raise InvariantError(f"d_{n - 1} d_{n} != 0")

    @classmethod
    def from_differentials(cls, ring: RingSpec, ranks: Sequence[int], differentials: Sequence) -> "ChainComplex":
        return cls(ring, tuple(ranks), tuple(Matrix(d, ranks[n], ranks[n + 1]) if not isinstance(d, Matrix) else d
                                              for n, d in enumerate(differentials)))

    @classmethod
    def zero(cls, ring: RingSpec) -> "ChainComplex":
        return cls(ring, (), ())

    @property
    def top(self) -> int:
        """Largest degree with a chain group (``-1`` for the zero complex)."""
        return len(self.ranks) - 1

    def rank(self, n: int) -> int:
        return self.ranks[n] if 0 <= n < len(self.ranks) else 0

    def d(self, n: int) -> Matrix:
        if 1 <= n < len(self.ranks):
            return self.boundaries[n - 1]
        return Matrix.zeros(self.rank(n - 1), self.rank(n))

    def with_ring(self, ring: RingSpec) -> "ChainComplex":
        return ChainComplex(ring, self.ranks, self.boundaries)

    def padded(self, top: int) -> "ChainComplex":
        """Same complex with zero chain groups appended up to degree ``top``."""
        if top <= self.top:
            return self
        ranks = self.ranks + (0,) * (top - self.top)
        bds = list(self.boundaries) + [Matrix.zeros(ranks[n - 1], 0) for n in range(len(self.ranks), top + 1)]
        if not self.ranks:
            bds = bds[1:]
        return ChainComplex(self.ring, ranks, tuple(bds))

    def direct_sum(self, *others: "ChainComplex") -> "ChainComplex":
        cs = (self,) + others
        top = max(c.top for c in cs)
        ranks = tuple(sum(c.rank(n) for c in cs) for n in range(top + 1))
        bds = tuple(Matrix.block_diag(*(c.d(n) for c in cs)) for n in range(1, top + 1))
        return ChainComplex(self.ring, ranks, bds)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * r for n, r in enumerate(self.ranks))

    def identity(self) -> "ChainMap":
        return ChainMap(self, self, tuple(Matrix.identity(r) for r in self.ranks))


@dataclass(frozen=True)
class ChainMap:
    """Integer matrices ``f_n : C_n -> C'_n`` commuting with the differentials."""

    source: ChainComplex
    target: ChainComplex
    components: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if self.source.ring != self.target.ring:
            raise RingMismatchError(f"{self.source.ring} vs {self.target.ring}")
        if len(self.components) != len(self.source.ranks):
            raise DimensionError(f"{len(self.components)} components for {len(self.source.ranks)} degrees")
        for n, f in enumerate(self.components):
            if f.shape != (self.target.rank(n), self.source.rank(n)):
                raise DimensionError(f"f_{n} has shape {f.shape}")
        for n in range(1, len(self.components)):
            lhs = self.f(n - 1) @ self.source.d(n)
            rhs = self.target.d(n) @ self.f(n)
            if not _zero_in_ring(lhs - rhs, self.source.ring):
                raise InvariantError(f"chain map does not commute with d_{n}")

    def f(self, n: int) -> Matrix:
        if 0 <= n < len(self.components):
            return self.components[n]
        return Matrix.zeros(self.target.rank(n), self.source.rank(n))

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(other.source, self.target, tuple(self.f(n) @ other.f(n) for n in range(len(other.source.ranks))))


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HomologyGroup:
    """``ker d_n / im d_{n+1}`` together with the data to take coordinates.

    Cycles of ``C_n (x) R`` form a lattice ``L = V diag(scale)`` in ``Z^{rank}``
    (``V`` from the Smith form of ``d_n``).  Boundaries, plus ``m Z^rank``
    over ``Z/m``, are written in ``L``-coordinates and reduced by a second
    Smith form; generators with invariant factor ``!= 1`` survive.
    """

    ring: RingSpec
    degree: int
    ambient: int
    module: FgModule
    generators: Matrix  # ambient x num_generators, canonical SNF order
    orders: tuple[int, ...]
    _v_inv: Matrix
    _zero_rows: tuple[int, ...]  # coordinates that must vanish on cycles (Z/Q)
    _cycle_rows: tuple[int, ...]
    _scales: tuple[int, ...]
    _um: Matrix
    _kept: tuple[int, ...]

    def is_cycle(self, x: Sequence) -> bool:
        y = self._v_inv.apply(x) if self.ambient else ()
        if any(y[i] for i in self._zero_rows):
            return False
        return all(y[i] % s == 0 for i, s in zip(self._cycle_rows, self._scales) if s != 1)

    def coordinates(self, x: Sequence) -> tuple:
        """Coordinates of the class of the cycle ``x`` in the canonical generators."""
        if len(x) != self.ambient:
            raise DimensionError(f"chain of length {len(x)} in a group of rank {self.ambient}")
        if not self.module.num_generators:
            if not self.is_cycle(x):
                raise InvariantError(f"not a cycle in degree {self.degree}")
            return ()
        y = self._v_inv.apply(x)
        if any(y[i] for i in self._zero_rows):
            raise InvariantError(f"not a cycle in degree {self.degree}")
        c = []
        for i, s in zip(self._cycle_rows, self._scales):
            v = y[i]
            if s != 1:
                if isinstance(v, Fraction):
                    v = v / s
                else:
                    q, r = divmod(v, s)
                    if r:
                        raise InvariantError(f"not a cycle in degree {self.degree}")
                    v = q
            c.append(v)
        cc = self._um.apply(c)
        out = []
        for k, o in zip(self._kept, self.orders):
            v = cc[k]
            if isinstance(v, Fraction) and v.denominator == 1:
                v = v.numerator
            out.append(v % o if o else v)
        return tuple(out)

    def is_boundary(self, x: Sequence) -> bool:
        return not any(self.coordinates(x))


def _homology_group(d_out: Matrix, d_in: Matrix, ring: RingSpec, degree: int) -> HomologyGroup:
    n = d_out.cols
    _, _, v, vi, facs = _snf_partial(d_out, False, True)
    r = len(facs)
    v_inv = Matrix(vi, n, n)
    if ring.is_modular:
        m = ring.modulus
        scales = tuple(m // gcd(f, m) for f in facs) + (1,) * (n - r)
        cycle_rows = tuple(range(n))
        zero_rows: tuple[int, ...] = ()
    else:
        scales = (1,) * (n - r)
        cycle_rows = tuple(range(r, n))
        zero_rows = tuple(range(r))
    k = len(cycle_rows)

    rel_cols = []
    vi_rows = v_inv.data
    for col in d_in.columns():
        y = v_inv.apply(col) if n else ()
        if any(y[i] for i in zero_rows):
            raise InvariantError(f"boundary is not a cycle in degree {degree}")
        if any(y[i] % s for i, s in zip(cycle_rows, scales)):
            raise InvariantError(f"boundary is not a cycle mod {ring.modulus} in degree {degree}")
        rel_cols.append([y[i] // s for i, s in zip(cycle_rows, scales)])
    if ring.is_modular:
        m = ring.modulus
        for j in range(n):
            rel_cols.append([m * vi_rows[i][j] // s for i, s in zip(cycle_rows, scales)])
    rel = Matrix.from_columns(rel_cols, k) if rel_cols else Matrix.zeros(k, 0)
    um, umi, _, _, mfacs = _snf_partial(rel, True, False)
    um_m = Matrix(um, k, k)
    umi_m = Matrix(umi, k, k)
    all_factors = list(mfacs) + [0] * (k - len(mfacs))
    if ring.kind == RingSpec.RATIONALS:
        kept = tuple(i for i, f in enumerate(all_factors) if f == 0)
    else:
        kept = tuple(i for i, f in enumerate(all_factors) if f != 1)
    orders = tuple(all_factors[i] for i in kept)
    module = FgModule.from_cyclic(ring, orders)
    if module.generator_orders() != orders:
        raise AssertionError(f"non-canonical generator order {orders} for {module}")
    basis_cols = []
    for j, s in zip(cycle_rows, scales):
        basis_cols.append([s * v[i][j] for i in range(n)])
    basis = Matrix.from_columns(basis_cols, n) if basis_cols else Matrix.zeros(n, 0)
    gens = basis @ umi_m.submatrix(range(k), kept) if k else Matrix.zeros(n, 0)
    return HomologyGroup(
        ring=ring,
        degree=degree,
        ambient=n,
        module=module,
        generators=gens,
        orders=orders,
        _v_inv=v_inv,
        _zero_rows=zero_rows,
        _cycle_rows=cycle_rows,
        _scales=scales,
        _um=um_m,
        _kept=kept,
    )


@dataclass(frozen=True, eq=False)
class GradedModule:
    """``H_n`` for ``0 <= n <= top`` plus canonical cycle representatives.

    ``groups`` is ``None`` for purely abstract results (coefficients split
    into several cyclic summands, or the UCT prediction).
    """

    ring: RingSpec
    modules: tuple[FgModule, ...]
    groups: tuple[HomologyGroup, ...] | None = None
    complex: ChainComplex | None = field(default=None, repr=False)

    def __getitem__(self, n: int) -> FgModule:
        if 0 <= n < len(self.modules):
            return self.modules[n]
        return FgModule.zero(self.ring)

    def __len__(self) -> int:
        return len(self.modules)

    @property
    def top(self) -> int:
        return len(self.modules) - 1

    def group(self, n: int) -> HomologyGroup:
        if self.groups is None:
            raise ValueError("this graded module carries no representatives")
        if 0 <= n < len(self.groups):
            return self.groups[n]
        rank_n = self.complex.rank(n) if self.complex is not None else 0
        return _homology_group(Matrix.zeros(0, rank_n), Matrix.zeros(rank_n, 0), self.ring, n)

    def representatives(self, n: int) -> Matrix:
        return self.group(n).generators

    def same_modules(self, other: "GradedModule", upto: int | None = None) -> bool:
        top = max(self.top, other.top) if upto is None else upto
        return all(self[n] == other[n] for n in range(top + 1))

    def to_json(self) -> list:
        return [{"degree": n, "module": m.to_json()} for n, m in enumerate(self.modules)]

    def __str__(self) -> str:
        return ", ".join(f"H_{n} = {m}" for n, m in enumerate(self.modules))


def homology(c: ChainComplex) -> GradedModule:
    groups = tuple(_homology_group(c.d(n), c.d(n + 1), c.ring, n) for n in range(c.top + 1))
    return GradedModule(c.ring, tuple(g.module for g in groups), groups, c)


def homology_with_coefficients(c: ChainComplex, a: FgModule) -> GradedModule:
    """Homology of ``C (x) A`` for a f.g. abelian group ``A``.

    ``A`` is split into cyclic summands; ``Z/t`` summands are computed over the
    ring ``Z/t`` and read back as abelian groups.  Only ``A = Z`` keeps cycle
    representatives.
    """
    if c.ring != ZZ or a.ring != ZZ:
        raise RingMismatchError("homology_with_coefficients needs a complex and a module over Z")
    pieces = []
    for t in a.generator_orders():
        ring = ZZ if t == 0 else RingSpec.mod_ring(t)
        pieces.append((t, homology(c.with_ring(ring))))
    top = c.top
    modules = []
    for n in range(top + 1):
        orders = []
        for t, h in pieces:
            orders.extend(h[n].generator_orders())
        modules.append(FgModule.from_cyclic(ZZ, orders))
    if len(pieces) == 1 and pieces[0][0] == 0:
        return pieces[0][1]
    return GradedModule(ZZ, tuple(modules), None, c)


def _tensor_orders(x: int, y: int) -> int:
    """Order of ``Z/x (x) Z/y`` (0 means Z)."""
    if x == 0:
        return y
    if y == 0:
        return x
    return gcd(x, y)


def uct_oracle(h_z: GradedModule, a: FgModule) -> GradedModule:
    """``H_n(X; A) = (H_n (x) A) (+) Tor(H_{n-1}, A)`` from invariant factors alone."""
    if h_z.ring != ZZ or a.ring != ZZ:
        raise RingMismatchError("the UCT oracle works over Z")
    aos = a.generator_orders()
    modules = []
    for n in range(h_z.top + 1):
        orders = []
        for x in h_z[n].generator_orders():
            orders.extend(_tensor_orders(x, y) for y in aos)
        if n > 0:
            for x in h_z[n - 1].torsion:
                orders.extend(gcd(x, y) for y in aos if y != 0)
        modules.append(FgModule.from_cyclic(ZZ, orders))
    return GradedModule(ZZ, tuple(modules))


def induced_map(f: ChainMap, h_src: GradedModule, h_tgt: GradedModule, n: int) -> ModuleMap:
    """``H_n(f)`` in canonical generators: push representatives through ``f_n`` and read coordinates."""
    src = h_src.group(n)
    tgt = h_tgt.group(n)
    fn = f.f(n)
    cols = [tgt.coordinates(fn.apply(z)) for z in src.generators.columns()]
    mat = Matrix.from_columns(cols, tgt.module.num_generators)
    return ModuleMap(src.module, tgt.module, mat)


def cone(f: ChainMap) -> ChainComplex:
    """``Cone(f)_n = C'_n (+) C_{n-1}`` with ``d = [[d', f], [0, -d]]``."""
    s, t = f.source, f.target
    top = max(t.top, s.top + 1)
    ranks = tuple(t.rank(n) + s.rank(n - 1) for n in range(top + 1))
    bds = []
    for n in range(1, top + 1):
        upper = Matrix.hstack(t.d(n), f.f(n - 1))
        lower = Matrix.hstack(Matrix.zeros(s.rank(n - 2), t.rank(n)), -s.d(n - 1))
        bds.append(Matrix.vstack(upper, lower))
    return ChainComplex(t.ring, ranks, tuple(bds))


# ---------------------------------------------------------------------------
# short and long exact sequences
# ---------------------------------------------------------------------------


def _unit_factors(m: Matrix) -> bool:
    return all(d == 1 for d in invariant_factors(m))


@dataclass(frozen=True, eq=False)
class ShortExactSeqOfComplexes:
    """``0 -> left --inclusion--> middle --projection--> right -> 0``, exact over Z in every degree."""

    left: ChainComplex
    middle: ChainComplex
    right: ChainComplex
    inclusion: ChainMap
    projection: ChainMap

    def __post_init__(self):
        if self.inclusion.source is not self.left and self.inclusion.source != self.left:
            raise InvariantError("inclusion does not start at left")
        top = max(self.left.top, self.middle.top, self.right.top)
        for n in range(top + 1):
            i, p = self.inclusion.f(n), self.projection.f(n)
            if not (p @ i).is_zero():
                raise InvariantError(f"projection . inclusion != 0 in degree {n}")
            fi, fp = invariant_factors(i), invariant_factors(p)
            if len(fi) != i.cols or any(x != 1 for x in fi):
                raise InvariantError(f"inclusion is not a split injection in degree {n}")
            if len(fp) != p.rows or any(x != 1 for x in fp):
                raise InvariantError(f"projection is not surjective in degree {n}")
            if len(fi) + len(fp) != self.middle.rank(n):
                raise InvariantError(f"image(inclusion) != kernel(projection) in degree {n}")

    @property
    def ring(self) -> RingSpec:
        return self.middle.ring

    def homologies(self) -> tuple[GradedModule, GradedModule, GradedModule]:
        return homology(self.left), homology(self.middle), homology(self.right)


def connecting_homomorphism(
    s: ShortExactSeqOfComplexes,
    h: tuple[GradedModule, GradedModule, GradedModule],
    n: int,
    rng: random.Random | None = None,
) -> ModuleMap:
    """Snake-lemma ``H_n(right) -> H_{n-1}(left)``.

    Lift each representative through the projection, apply the middle
    differential, pull back through the inclusion.  ``rng`` perturbs the
    lift by random elements of ``im(inclusion) + im(d)`` and the representative
    by a random boundary; the answer must not change.
    """
    h_left, _, h_right = h
    ring = s.ring
    src = h_right.group(n)
    tgt = h_left.group(n - 1)
    if n <= 0:
        return ModuleMap.zero(src.module, tgt.module)
    p_n = s.projection.f(n)
    i_prev = s.inclusion.f(n - 1)
    d_mid = s.middle.d(n)
    lift = LatticeSolver(p_n)
    pull = LatticeSolver(_modulus_extended(i_prev, ring))
    cols = []
    for z in src.generators.columns():
        if rng is not None:
            b = [rng.randint(-3, 3) for _ in range(s.right.rank(n + 1))]
            z = tuple(x + y for x, y in zip(z, s.right.d(n + 1).apply(b))) if b else z
        zhat = lift.solve(z)
        if zhat is None:
            raise LiftError(f"cannot lift a cycle through the projection in degree {n}")
        if rng is not None:
            a = [rng.randint(-3, 3) for _ in range(s.left.rank(n))]
            c = [rng.randint(-3, 3) for _ in range(s.middle.rank(n + 1))]
            zhat = tuple(x + y + w for x, y, w in zip(zhat, s.inclusion.f(n).apply(a) if a else (0,) * len(zhat),
                                                        s.middle.d(n + 1).apply(c) if c else (0,) * len(zhat)))
        y = d_mid.apply(zhat)
        w = pull.solve(y) if len(y) else ()
        if w is None:
            raise LiftError(f"boundary does not come from the left complex in degree {n - 1}")
        w = tuple(w[: s.left.rank(n - 1)])
        cols.append(tgt.coordinates(w))
    return ModuleMap(src.module, tgt.module, Matrix.from_columns(cols, tgt.module.num_generators))


def _modulus_extended(a: Matrix, ring: RingSpec) -> Matrix:
    if ring.is_modular and a.rows:
        return Matrix.hstack(a, Matrix.identity(a.rows).scale(ring.modulus))
    return a


@dataclass(frozen=True, eq=False)
class LongExactSequence:
    """``terms[k] --maps[k]--> terms[k+1]``; ``certificates[k]`` is exactness at ``terms[k+1]``."""

    terms: tuple[FgModule, ...]
    maps: tuple[ModuleMap, ...]
    labels: tuple[str, ...]
    certificates: tuple[ExactnessCertificate, ...] = ()

    def __post_init__(self):
        if len(self.maps) != len(self.terms) - 1 or len(self.labels) != len(self.terms):
            raise DimensionError("terms, maps and labels do not line up")
        for k, f in enumerate(self.maps):
            if f.source != self.terms[k] or f.target != self.terms[k + 1]:
                raise DimensionError(f"map {k} does not connect {self.labels[k]} and {self.labels[k + 1]}")

    def certify(self) -> tuple[ExactnessCertificate, ...]:
        return tuple(certify_exact(self.maps[k - 1], self.maps[k]) for k in range(1, len(self.maps)))

    @property
    def is_exact(self) -> bool:
        return all(c.exact for c in self.certify())

    def term(self, label: str) -> FgModule:
        return self.terms[self.labels.index(label)]

    def map_from(self, label: str) -> ModuleMap:
        return self.maps[self.labels.index(label)]

    def to_json(self) -> dict:
        certs = self.certificates or self.certify()
        return {
            "terms": [{"label": l, "module": str(t)} for l, t in zip(self.labels, self.terms)],
            "maps": [m.to_json() for m in self.maps],
            "exact": all(c.exact for c in certs),
        }


def les_from_ses(
    s: ShortExactSeqOfComplexes,
    top_degree: int | None = None,
    names: tuple[str, str, str] = ("left", "middle", "right"),
    h: tuple[GradedModule, GradedModule, GradedModule] | None = None,
    rng: random.Random | None = None,
) -> LongExactSequence:
    """``0 -> H_top(L) -> H_top(M) -> H_top(R) -> H_{top-1}(L) -> ... -> H_0(R) -> 0``.

    ``top_degree`` defaults to one more than the largest chain degree, so the
    truncation point has zero homology on the right.  Exactness is certified
    at every interior term before returning.
    """
    if top_degree is None:
        top_degree = max(s.left.top, s.middle.top, s.right.top) + 1
    if h is None:
        h = s.homologies()
    hl, hm, hr = h
    ring = s.ring
    zero = FgModule.zero(ring)
    terms = [zero]
    labels = ["0"]
    maps: list[ModuleMap] = []
    a, b, c = names
    for n in range(top_degree, -1, -1):
        ml, mm, mr = hl.group(n).module, hm.group(n).module, hr.group(n).module
        if n == top_degree:
            maps.append(ModuleMap.zero(zero, ml))
        else:
            maps.append(connecting_homomorphism(s, h, n + 1, rng))
        terms.append(ml)
        labels.append(f"H_{n}({a})")
        maps.append(induced_map(s.inclusion, hl, hm, n))
        terms.append(mm)
        labels.append(f"H_{n}({b})")
        maps.append(induced_map(s.projection, hm, hr, n))
        terms.append(mr)
        labels.append(f"H_{n}({c})")
    maps.append(ModuleMap.zero(terms[-1], zero))
    terms.append(zero)
    labels.append("0")
    les = LongExactSequence(tuple(terms), tuple(maps), tuple(labels))
    certs = les.certify()
    for k, cert in enumerate(certs):
        if not cert.exact:
            raise ExactnessError(f"sequence is not exact at {labels[k + 1]}: {cert}")
    return LongExactSequence(les.terms, les.maps, les.labels, certs)
