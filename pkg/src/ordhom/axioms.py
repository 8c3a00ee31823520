"""Verification harness for the homology axioms, plus the cellular complex of a good filtration."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import lcm
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Sequence

from .algebra import ZZ, FgModule, Matrix, ModuleMap, RingSpec, solve
from .complexes import (
    ChainComplex,
    ChainMap,
    GradedModule,
    ShortExactSeqOfComplexes,
    connecting_homomorphism,
    homology,
    induced_map,
)
from .errors import InvariantError, NotHomologySphere, OrdhomError, RefusedComputation
from .spaces import (
    DeltaComplex,
    Filtration,
    Members,
    SimplicialMap,
    SubcomplexPair,
    chain_complex,
    cw_chain_complex,
    cylinder_pair,
    disjoint_union,
    point,
    relative_chain_map,
    skeletal_filtration,
)

__all__ = [
    "CheckResult",
    "AxiomReport",
    "FiltrationReport",
    "CellularComplex",
    "check_point_axiom",
    "check_homotopy_invariance",
    "check_additivity",
    "validate_good_filtration",
    "cellular_complex",
    "compare_cellular_vs_direct",
    "cellular_chain_map",
    "degree",
    "full_report",
]


@dataclass(frozen=True)
class CheckResult:
    """One verdict; ``witness`` holds exact data (module strings, matrices) that reproduce it."""

    axiom: str
    subject: str
    passed: bool
    witness: dict = field(default_factory=dict)
    elapsed_us: int = 0

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "subject": self.subject, "passed": self.passed,
                "witness": self.witness, "elapsed_us": self.elapsed_us}


@dataclass(frozen=True)
class AxiomReport:
    results: tuple[CheckResult, ...]
    warnings: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": len(self.results),
            "failed": len(self.failures()),
            "warnings": list(self.warnings),
            "results": [r.to_json() for r in self.results],
        }


def timed(axiom: str, subject: str, fn: Callable[[], tuple[bool, dict]]) -> CheckResult:
    start = time.perf_counter_ns()
    ok, witness = fn()
    return CheckResult(axiom, subject, ok, witness, (time.perf_counter_ns() - start) // 1000)


def _as_pair(x: DeltaComplex | SubcomplexPair) -> SubcomplexPair:
    return x if isinstance(x, SubcomplexPair) else SubcomplexPair.absolute(x)


# ---------------------------------------------------------------------------
# point, homotopy invariance, additivity
# ---------------------------------------------------------------------------


def check_point_axiom(ring: RingSpec = ZZ, top: int = 5) -> CheckResult:
    """``H_0(pt) = R`` and ``H_i(pt) = 0`` for ``1 <= i <= top``."""

    def run():
        h = homology(chain_complex(point(), ring).padded(top))
        ok = h[0] == FgModule.free(ring) and all(h[i].is_zero() for i in range(1, top + 1))
        return ok, {"homology": [str(h[i]) for i in range(top + 1)]}

    return timed("point", str(ring), run)


def check_homotopy_invariance(x: DeltaComplex | SubcomplexPair, ring: RingSpec = ZZ, subject: str = "") -> CheckResult:
    """``p: I(X, Y) -> (X, Y)`` is an isomorphism on homology and ``H(i0) = H(i1)``."""
    pair = _as_pair(x)

    def run():
        cpair, cyl = cylinder_pair(pair)
        p = relative_chain_map(cyl.p, cpair, pair, ring)
        i0 = relative_chain_map(cyl.i0, pair, cpair, ring)
        i1 = relative_chain_map(cyl.i1, pair, cpair, ring)
        hc, hx = homology(p.source), homology(p.target)
        bad_p, bad_i = [], []
        for n in range(pair.total.dim + 2):
            if not induced_map(p, hc, hx, n).is_isomorphism():
                bad_p.append(n)
            if induced_map(i0, hx, hc, n).matrix != induced_map(i1, hx, hc, n).matrix:
                bad_i.append(n)
        witness = {"cylinder_counts": list(cyl.complex.counts), "projection_not_iso": bad_p, "ends_differ": bad_i,
                   "homology": [str(hx[n]) for n in range(pair.total.dim + 1)]}
        return not bad_p and not bad_i, witness

    return timed("homotopy_invariance", subject, run)


def check_additivity(xs: Sequence[DeltaComplex], ring: RingSpec = ZZ, subject: str = "") -> CheckResult:
    """``gamma: (+) H(x_j) -> H(⊔ x_j)`` and every ``kappa: H(x_j) -> H(⊔, ⊔_{k != j} x_k)`` are isomorphisms."""

    def run():
        u, incs = disjoint_union(xs)
        cu = chain_complex(u, ring)
        pieces = [chain_complex(x, ring) for x in xs]
        summed = pieces[0].direct_sum(*pieces[1:])
        maps = [f.chain_map(ring) for f in incs]
        gamma = ChainMap(summed, cu, tuple(Matrix.hstack(*(m.f(n) for m in maps)) for n in range(len(summed.ranks))))
        hs, hu = homology(summed), homology(cu)
        hx = [homology(c) for c in pieces]
        top = u.dim + 1
        bad = []
        for n in range(top + 1):
            expect = FgModule.zero(ring).direct_sum(*(h[n] for h in hx))
            if hu[n] != expect or not induced_map(gamma, hs, hu, n).is_isomorphism():
                bad.append(f"gamma in degree {n}")
        for j, (x, inc) in enumerate(zip(xs, incs)):
            others = tuple(frozenset(range(u.count(n))) - inc.image_members(x.all_members())[n]
                           for n in range(u.dim + 1))
            kappa = relative_chain_map(inc, SubcomplexPair.absolute(x), SubcomplexPair(u, others), ring)
            hk = homology(kappa.target)
            for n in range(top + 1):
                if not induced_map(kappa, hx[j], hk, n).is_isomorphism():
                    bad.append(f"kappa_{j} in degree {n}")
        return not bad, {"union": [str(hu[n]) for n in range(u.dim + 1)], "failures": bad}

    return timed("additivity", subject, run)


# ---------------------------------------------------------------------------
# filtrations and the cellular complex
# ---------------------------------------------------------------------------


def _basis(x: DeltaComplex, big: Members, small: Members | None, n: int) -> tuple[int, ...]:
    if n < 0 or n >= len(big):
        return ()
    drop = small[n] if small is not None and n < len(small) else frozenset()
    return tuple(sorted(big[n] - drop))


def _stage_complex(x: DeltaComplex, big: Members, small: Members | None, ring: RingSpec) -> tuple[ChainComplex, list]:
    """Chains of ``(big, small)`` as a subquotient of ``C(X)``, with the basis (simplex indices) per degree."""
    full = chain_complex(x, ring)
    bases = [_basis(x, big, small, n) for n in range(x.dim + 1)]
    bds = tuple(full.d(n).submatrix(bases[n - 1], bases[n]) for n in range(1, x.dim + 1))
    return ChainComplex(ring, tuple(len(b) for b in bases), bds), bases


def _selection(src_basis: Sequence[int], tgt_basis: Sequence[int]) -> Matrix:
    """0/1 matrix sending basis simplices to themselves (or to 0 when absent from the target)."""
    pos = {k: i for i, k in enumerate(tgt_basis)}
    rows = [[0] * len(src_basis) for _ in tgt_basis]
    for j, k in enumerate(src_basis):
        if k in pos:
            rows[pos[k]][j] = 1
    return Matrix(rows, len(tgt_basis), len(src_basis))


def _basis_map(src: ChainComplex, sb: list, tgt: ChainComplex, tb: list) -> ChainMap:
    return ChainMap(src, tgt, tuple(_selection(sb[n], tb[n]) for n in range(len(src.ranks))))


@dataclass(frozen=True)
class FiltrationReport:
    """Per stage and bullet: ``(stage, bullet, degree)`` triples that failed."""

    stages: int
    failures: tuple[tuple[int, int, int], ...]
    relative: tuple[tuple[str, ...], ...]
    absolute: tuple[tuple[str, ...], ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "stages": self.stages,
            "failures": [{"stage": p, "condition": b, "degree": i} for p, b, i in self.failures],
            "relative_homology": [list(r) for r in self.relative],
            "stage_homology": [list(a) for a in self.absolute],
        }


def validate_good_filtration(f: Filtration, ring: RingSpec = ZZ) -> FiltrationReport:
    """The three conditions of a good filtration, stage by stage.

    1. ``H_i(X_p, X_{p-1}) = 0`` for ``i != p``;
    2. ``H_i(X_p) = 0`` for ``i > p``;
    3. ``H_i(X_p) -> H_i(X)`` is an isomorphism for ``i < p``.
    """
    x = f.total
    top = x.dim + 1
    cx, bx = _stage_complex(x, x.all_members(), None, ring)
    hx = homology(cx)
    failures = []
    rel_out, abs_out = [], []
    for p in range(f.length):
        crel, _ = _stage_complex(x, f.stage(p), f.stage(p - 1), ring)
        hrel = homology(crel)
        cp, bp = _stage_complex(x, f.stage(p), None, ring)
        hp = homology(cp)
        inc = _basis_map(cp, bp, cx, bx)
        rel_out.append(tuple(str(hrel[i]) for i in range(top)))
        abs_out.append(tuple(str(hp[i]) for i in range(top)))
        for i in range(top + 1):
            if i != p and not hrel[i].is_zero():
                failures.append((p, 1, i))
            if i > p and not hp[i].is_zero():
                failures.append((p, 2, i))
            if i < p and not induced_map(inc, hp, hx, i).is_isomorphism():
                failures.append((p, 3, i))
    return FiltrationReport(f.length, tuple(failures), tuple(rel_out), tuple(abs_out))


@dataclass(frozen=True, eq=False)
class CellularComplex:
    """``C_p = H_p(X_p, X_{p-1})`` with the composite boundary.

    ``cells[p][j]`` is ``scales[p][j]`` times the ``j``-th canonical generator of
    the relative group, written in ``C_p(X)`` coordinates.  Scales differ from 1
    only over Q, where they keep the differentials integral.
    """

    filtration: Filtration
    complex: ChainComplex
    cells: tuple[tuple[tuple, ...], ...]
    scales: tuple[tuple[int, ...], ...]

    @property
    def ring(self) -> RingSpec:
        return self.complex.ring


def _require_good(f: Filtration, ring: RingSpec) -> FiltrationReport:
    rep = validate_good_filtration(f, ring)
    if not rep.passed:
        p, b, i = rep.failures[0]
        raise InvariantError(f"filtration is not good: condition {b} fails at stage {p}, degree {i}")
    return rep


def _relative_groups(f: Filtration, ring: RingSpec) -> list:
    x = f.total
    out = []
    for p in range(f.length):
        c, b = _stage_complex(x, f.stage(p), f.stage(p - 1), ring)
        h = homology(c)
        if h[p].torsion:
            raise RefusedComputation(f"H_{p}(X_{p}, X_{p - 1}) = {h[p]} has torsion; cellular chains need free groups")
        out.append((c, b, h))
    return out


def cellular_complex(f: Filtration, ring: RingSpec = ZZ) -> CellularComplex:
    """Cellular chain complex of a good filtration.

    ``d_p`` is the connecting map ``H_p(X_p, X_{p-1}) -> H_{p-1}(X_{p-1})``
    followed by ``H_{p-1}(X_{p-1}) -> H_{p-1}(X_{p-1}, X_{p-2})``.  Torsion in
    a relative group is refused.
    """
    _require_good(f, ring)
    x = f.total
    rel = _relative_groups(f, ring)
    cells, scales, diffs = [], [], []
    for p, (quo, qb, hq) in enumerate(rel):
        raw = [_embed(col, qb[p], x.count(p)) for col in hq.group(p).generators.columns()]
        if p == 0:
            col_scale = [1] * len(raw)
        else:
            sub, sb = _stage_complex(x, f.stage(p - 1), None, ring)
            whole, wb = _stage_complex(x, f.stage(p), None, ring)
            ses = ShortExactSeqOfComplexes(sub, whole, quo, _basis_map(sub, sb, whole, wb),
                                           _basis_map(whole, wb, quo, qb))
            h_sub = homology(sub)
            delta = connecting_homomorphism(ses, (h_sub, homology(whole), hq), p)
            prev_c, prev_b, prev_h = rel[p - 1]
            down = induced_map(_basis_map(sub, sb, prev_c, prev_b), h_sub, prev_h, p - 1)
            mat, col_scale = _integralize((down @ delta).matrix, scales[p - 1])
            diffs.append(mat)
        cells.append(tuple(tuple(s * v for v in g) for s, g in zip(col_scale, raw)))
        scales.append(tuple(col_scale))
    cc = ChainComplex(ring, tuple(len(cs) for cs in cells), tuple(diffs))
    return CellularComplex(f, cc, tuple(cells), tuple(scales))


def _embed(vec: Sequence, basis: Sequence[int], size: int) -> tuple:
    out = [0] * size
    for v, k in zip(vec, basis):
        out[k] = v
    return tuple(out)


def _integralize(mat: Matrix, row_scale: Sequence) -> tuple[Matrix, list]:
    """Rescale rows by ``1/row_scale`` and each column by the lcm of its denominators."""
    rows = [[Fraction(v) / row_scale[i] for v in mat.row(i)] for i in range(mat.rows)]
    col_scale = []
    for j in range(mat.cols):
        den = lcm(1, *(rows[i][j].denominator for i in range(mat.rows)))
        col_scale.append(den)
        for i in range(mat.rows):
            rows[i][j] *= den
    data = [[int(v) for v in r] for r in rows]
    return Matrix(data, mat.rows, mat.cols), col_scale


def _psi(cell: CellularComplex, hc: GradedModule, hx: GradedModule, n: int) -> ModuleMap:
    """``H_n(C^cell) -> H_n(X)``: lift a cellular cycle to ``X_n``, then correct it inside ``X_{n-1}``."""
    f = cell.filtration
    x = f.total
    ring = cell.ring
    full = chain_complex(x, ring)
    src = hc.group(n)
    tgt = hx.group(n)
    prev = _basis(x, f.stage(n - 1), None, n)
    d_prev = full.d(n).submatrix(range(x.count(n - 1)), prev) if n >= 1 else None
    cols = []
    for c in src.generators.columns():
        y = [0] * x.count(n)
        for coeff, g in zip(c, cell.cells[n] if n < len(cell.cells) else ()):
            for k, v in enumerate(g):
                y[k] += coeff * v
        if n >= 1 and x.count(n):
            dy = full.d(n).apply(y)
            w = solve(d_prev, dy, ring) if prev else (None if any(ring.reduce(v) for v in dy) else ())
            if w is None:
                raise InvariantError(f"cellular cycle in degree {n} does not lift to a cycle of X")
            for k, v in zip(prev, w):
                y[k] -= v
        cols.append(tgt.coordinates(y))
    return ModuleMap(src.module, tgt.module, Matrix.from_columns(cols, tgt.module.num_generators))


def compare_cellular_vs_direct(
    f: Filtration,
    ring: RingSpec = ZZ,
    subject: str = "",
    mapping: tuple[SimplicialMap, Filtration] | None = None,
) -> CheckResult:
    """``H(C^cell) = H(X)`` as modules and through the explicit comparison map.

    With ``mapping = (g, f')`` for a filtration-preserving ``g: X -> X'``, also
    checks that the comparison maps are natural in ``g``.
    """

    def run():
        cell = cellular_complex(f, ring)
        hc = homology(cell.complex)
        hx = homology(chain_complex(f.total, ring))
        top = max(f.total.dim, cell.complex.top)
        bad = []
        for n in range(top + 1):
            if hc[n] != hx[n]:
                bad.append(f"modules differ in degree {n}")
            elif not _psi(cell, hc, hx, n).is_isomorphism():
                bad.append(f"comparison map not an isomorphism in degree {n}")
        if mapping is not None:
            bad.extend(_naturality(cell, hc, hx, mapping, ring))
        witness = {
            "cellular_ranks": list(cell.complex.ranks),
            "cellular_differentials": [[list(r) for r in m.data] for m in cell.complex.boundaries],
            "homology": [str(hx[n]) for n in range(top + 1)],
            "failures": bad,
        }
        return not bad, witness

    return timed("cellular", subject, run)


def cellular_chain_map(g: SimplicialMap, cell: CellularComplex, cell2: CellularComplex) -> ChainMap:
    """Chain map of cellular complexes induced by a filtration-preserving map."""
    f, f2 = cell.filtration, cell2.filtration
    ring = cell.ring
    for p in range(max(f.length, f2.length)):
        if not g.maps_into(f.stage(p), f2.stage(p)):
            raise InvariantError(f"map does not preserve stage {p} of the filtrations")
    gx = g.chain_map(ring)
    comps = []
    for p in range(len(cell.complex.ranks)):
        c2, b2 = _stage_complex(f2.total, f2.stage(p), f2.stage(p - 1), ring)
        grp = homology(c2).group(p)
        cols = []
        for gen in cell.cells[p]:
            img = gx.f(p).apply(gen)
            coords = grp.coordinates([img[k] for k in b2[p]])
            cols.append(tuple(c if s == 1 else Fraction(c) / s for c, s in zip(coords, cell2.scales[p])))
        comps.append(Matrix.from_columns(cols, cell2.complex.rank(p)))
    return ChainMap(cell.complex, cell2.complex, tuple(comps))


def _naturality(cell, hc, hx, mapping, ring) -> list[str]:
    g, f2 = mapping
    cell2 = cellular_complex(f2, ring)
    gc = cellular_chain_map(g, cell, cell2)
    hc2 = homology(cell2.complex)
    hx2 = homology(chain_complex(f2.total, ring))
    gx = g.chain_map(ring)
    bad = []
    for n in range(len(cell.complex.ranks)):
        lhs = induced_map(gx, hx, hx2, n) @ _psi(cell, hc, hx, n)
        rhs = _psi(cell2, hc2, hx2, n) @ induced_map(gc, hc, hc2, n)
        if lhs.matrix != rhs.matrix:
            bad.append(f"naturality square fails in degree {n}")
    return bad


# ---------------------------------------------------------------------------
# degree
# ---------------------------------------------------------------------------


def _sphere_dimension(x: DeltaComplex) -> int:
    h = homology(chain_complex(x, ZZ))
    top = [n for n in range(1, x.dim + 1) if not h[n].is_zero()]
    if h[0] != FgModule.free(ZZ) or len(top) != 1 or h[top[0]] != FgModule.free(ZZ):
        raise NotHomologySphere(f"homology {h} is not that of a sphere of positive dimension")
    return top[0]


def degree(f: SimplicialMap) -> int:
    """The integer by which ``f`` acts on top homology, in canonical generators."""
    n = _sphere_dimension(f.source)
    if _sphere_dimension(f.target) != n:
        raise NotHomologySphere("source and target spheres have different dimensions")
    cm = f.chain_map(ZZ)
    return induced_map(cm, homology(cm.source), homology(cm.target), n).scalar()


def _guard(axiom: str, subject: str, fn: Callable[[], CheckResult]) -> CheckResult:
    """Run a check; engine errors become failed verdicts carrying the message."""
    start = time.perf_counter_ns()
    try:
        return fn()
    except OrdhomError as exc:
        return CheckResult(axiom, subject, False, {"error": f"{type(exc).__name__}: {exc}"},
                           (time.perf_counter_ns() - start) // 1000)


def _expect_homology(x: DeltaComplex, expected: Sequence[str], ring: RingSpec, subject: str) -> CheckResult:
    def run():
        h = homology(chain_complex(x, ring))
        got = [str(h[n]) for n in range(max(len(expected), x.dim + 1))]
        want = [str(FgModule.parse(e, ring)) for e in expected] + ["0"] * (len(got) - len(expected))
        return got == want, {"expected": want, "computed": got}

    return timed("homology", subject, run)


def _les_check(axiom: str, subject: str, build: Callable) -> CheckResult:
    def run():
        les = build()
        return les.is_exact, {"terms": [f"{l} = {t}" for l, t in zip(les.labels, les.terms)]}

    return timed(axiom, subject, run)


def _excision_check(s, ring: RingSpec, subject: str) -> CheckResult:
    from .exactness import excision_compare

    def run():
        rep = excision_compare(s, ring)
        return rep.passed, rep.to_json()

    return timed("excision", subject, run)


def _naturality_check(g: SimplicialMap, s1, s2, ring: RingSpec, subject: str) -> CheckResult:
    from .exactness import mv_naturality_check

    def run():
        rep = mv_naturality_check(g, s1, s2, ring)
        return rep.commutes, rep.to_json()

    return timed("mv_naturality", subject, run)


def _filtration_check(f: Filtration, ring: RingSpec, subject: str) -> CheckResult:
    def run():
        rep = validate_good_filtration(f, ring)
        return rep.passed, rep.to_json()

    return timed("good_filtration", subject, run)


def _degree_check(f: SimplicialMap, expected: int | None, signed: bool, subject: str) -> CheckResult:
    def run():
        d = degree(f)
        ok = expected is None or (d == expected if signed else abs(d) == abs(expected))
        return ok, {"degree": d, "expected": expected, "signed": signed}

    return timed("degree", subject, run)


def _cw_check(k, match: DeltaComplex | None, ring: RingSpec, subject: str) -> CheckResult:
    def run():
        h = homology(cw_chain_complex(k, ring))
        witness = {"homology": [str(h[n]) for n in range(len(k.cell_counts))]}
        if match is None:
            return True, witness
        hm = homology(chain_complex(match, ring))
        ok = h.same_modules(hm, upto=max(h.top, hm.top))
        witness["matches"] = ok
        return ok, witness

    return timed("cw_cross_check", subject, run)


def _tasks(corpus, ring: RingSpec) -> list[tuple[str, str, Callable[[], CheckResult]]]:
    from .exactness import mayer_vietoris, pair_les

    tasks = [("point", str(ring), partial(check_point_axiom, ring))]
    seen: list[tuple[str, DeltaComplex]] = []
    for item in corpus:
        name, spec = item.name, item.spec
        if item.kind in ("delta_complex", "poset"):
            x = corpus.space(name)
            seen.append((name, x))
            filt = skeletal_filtration(x)
            tasks.append(("homotopy_invariance", name, partial(check_homotopy_invariance, x, ring, name)))
            tasks.append(("good_filtration", name, partial(_filtration_check, filt, ring, name)))
            tasks.append(("cellular", name, partial(compare_cellular_vs_direct, filt, ring, name)))
            if "expect_homology" in spec and ring == ZZ:
                tasks.append(("homology", name, partial(_expect_homology, x, spec["expect_homology"], ring, name)))
        elif item.kind == "cw_complex":
            match = corpus.space(spec["matches"]) if "matches" in spec else None
            tasks.append(("cw_cross_check", name, partial(_cw_check, item.value, match, ring, name)))
        elif item.kind == "pair":
            p = item.value
            tasks.append(("homotopy_invariance", name, partial(check_homotopy_invariance, p, ring, name)))
            tasks.append(("pair_les", name, partial(_les_check, "pair_les", name, partial(pair_les, p, ring))))
        elif item.kind == "cover":
            s = item.value
            tasks.append(("mayer_vietoris", name,
                          partial(_les_check, "mayer_vietoris", name, partial(mayer_vietoris, s, ring))))
            tasks.append(("excision", name, partial(_excision_check, s, ring, name)))
        elif item.kind == "filtration":
            tasks.append(("good_filtration", name, partial(_filtration_check, item.value, ring, name)))
            if spec.get("expect_good", True):
                tasks.append(("cellular", name, partial(compare_cellular_vs_direct, item.value, ring, name)))
        elif item.kind == "map":
            g = item.value
            if "expected_degree" in spec and ring == ZZ:
                tasks.append(("degree", name, partial(_degree_check, g, spec["expected_degree"],
                                                      spec.get("signed", False), name)))
            if "covers" in spec:
                c1, c2 = (corpus.get(c, "cover").value for c in spec["covers"])
                tasks.append(("mv_naturality", name, partial(_naturality_check, g, c1, c2, ring, name)))
    for (a, x), (b, y) in zip(seen, seen[1:]):
        tasks.append(("additivity", f"{a}+{b}", partial(check_additivity, [x, y], ring, f"{a}+{b}")))
    return tasks


def full_report(corpus, ring: RingSpec = ZZ, threads: int = 1) -> AxiomReport:
    """Every applicable check over the corpus, reported in corpus order.

    A filtration item with ``"expect_good": false`` passes when validation
    fails; everything else passes when the check does.
    """
    jobs = [partial(_guard, a, s, fn) for a, s, fn in _tasks(corpus, ring)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda job: job(), jobs))
    else:
        results = [job() for job in jobs]
    results = [_expectation(corpus, r) for r in results]
    warns = () if len(corpus) else ("corpus has no items; the report is vacuous",)
    return AxiomReport(tuple(results), warns)


def _expectation(corpus, r: CheckResult) -> CheckResult:
    item = corpus.items.get(r.subject)
    if item is not None and item.kind == "filtration" and r.axiom == "good_filtration" \
            and item.spec.get("expect_good", True) is False:
        return CheckResult(r.axiom, r.subject, not r.passed, {**r.witness, "expected_good": False}, r.elapsed_us)
    return r
