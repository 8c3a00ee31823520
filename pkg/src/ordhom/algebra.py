"""Exact linear algebra over Z, Q, F_p and Z/m.

Everything is carried out with Python integers (arbitrary precision).  The
quotient rings Z/m are handled by lifting to Z and adjoining ``m * I`` as
extra relations, so a single Smith normal form routine over Z drives every
computation in the package.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionError, InvariantError, RingMismatchError

__all__ = [
    "RingSpec",
    "Matrix",
    "IntMatrix",
    "SnfResult",
    "snf",
    "invariant_factors",
    "rank",
    "cokernel",
    "solve",
    "kernel_basis",
    "image_basis",
    "LatticeSolver",
    "FgModule",
    "ModuleMap",
    "ExactnessCertificate",
    "certify_exact",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class RingSpec:
    """One of the four coefficient rings: ``Z``, ``Q``, ``F_p`` or ``Z/m``.

    ``modulus`` is 0 for Z and Q.
    """

    kind: str
    modulus: int = 0

    INTEGERS = "Z"
    RATIONALS = "Q"
    PRIME_FIELD = "F"
    MOD_RING = "Zm"

    def __post_init__(self):
        if self.kind in (self.INTEGERS, self.RATIONALS):
            if self.modulus != 0:
                raise ValueError(f"{self.kind} takes no modulus")
        elif self.kind == self.PRIME_FIELD:
            if not _is_prime(self.modulus):
                raise ValueError(f"F_p needs a prime p, got {self.modulus}")
        elif self.kind == self.MOD_RING:
            if self.modulus < 2:
                raise ValueError(f"Z/m needs m >= 2, got {self.modulus}")
        else:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    @classmethod
    def integers(cls) -> "RingSpec":
        return cls(cls.INTEGERS)

    @classmethod
    def rationals(cls) -> "RingSpec":
        return cls(cls.RATIONALS)

    @classmethod
    def prime_field(cls, p: int) -> "RingSpec":
        return cls(cls.PRIME_FIELD, p)

    @classmethod
    def mod_ring(cls, m: int) -> "RingSpec":
        return cls(cls.MOD_RING, m)

    @classmethod
    def parse(cls, text: str) -> "RingSpec":
        """Parse ``Z``, ``Q``, ``Fp:5`` / ``F5`` or ``Zm:6`` / ``Z/6``."""
        t = text.strip()
        if t == "Z":
            return cls.integers()
        if t == "Q":
            return cls.rationals()
        try:
            if t.startswith("Fp:"):
                return cls.prime_field(int(t[3:]))
            if t.startswith("Zm:"):
                return cls.mod_ring(int(t[3:]))
            if t.startswith("Z/"):
                return cls.mod_ring(int(t[2:]))
            if t.startswith("F") and t[1:].isdigit():
                return cls.prime_field(int(t[1:]))
        except ValueError as exc:
            raise ValueError(f"cannot parse ring {text!r}: {exc}") from None
        raise ValueError(f"cannot parse ring {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind in (self.RATIONALS, self.PRIME_FIELD)

    @property
    def is_modular(self) -> bool:
        return self.modulus != 0

    @property
    def free_order(self) -> int:
        """Additive order of the generator of the free rank-one module (0 = infinite)."""
        return self.modulus

    def normalize_order(self, order: int) -> int:
        """Order of ``Z/order`` after base change to this ring (1 means trivial)."""
        order = abs(order)
        if self.kind == self.INTEGERS:
            return order
        if self.kind == self.RATIONALS:
            return 0 if order == 0 else 1
        return gcd(order, self.modulus) if order else self.modulus

    def reduce(self, x):
        return x % self.modulus if self.modulus else x

    def __str__(self) -> str:
        if self.kind == self.PRIME_FIELD:
            return f"F{self.modulus}"
        if self.kind == self.MOD_RING:
            return f"Z/{self.modulus}"
        return self.kind


ZZ = RingSpec.integers()
QQ = RingSpec.rationals()


class Matrix:
    """Immutable exact matrix (Python ints; Fractions only appear in Q-module maps)."""

    __slots__ = ("rows", "cols", "data", "_hash")

    def __init__(self, data: Iterable[Iterable] = (), rows: int | None = None, cols: int | None = None):
        d = tuple(tuple(r) for r in data)
        nr = len(d) if rows is None else rows
        if len(d) != nr:
            raise DimensionError(f"expected {nr} rows, got {len(d)}")
        if cols is None:
            if not d:
                raise DimensionError("cols must be given for a matrix without rows")
            cols = len(d[0])
        for r in d:
            if len(r) != cols:
                raise DimensionError(f"ragged row: expected {cols} entries, got {len(r)}")
        self.rows = nr
        self.cols = cols
        self.data = d
        self._hash = None

    # construction helpers
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def hstack(cls, *ms: "Matrix") -> "Matrix":
        if not ms:
            raise DimensionError("hstack of nothing")
        r = ms[0].rows
        if any(m.rows != r for m in ms):
            raise DimensionError("hstack row mismatch")
        return cls([sum((m.data[i] for m in ms), ()) for i in range(r)], r, sum(m.cols for m in ms))

    @classmethod
    def vstack(cls, *ms: "Matrix") -> "Matrix":
        if not ms:
            raise DimensionError("vstack of nothing")
        c = ms[0].cols
        if any(m.cols != c for m in ms):
            raise DimensionError("vstack column mismatch")
        return cls([row for m in ms for row in m.data], sum(m.rows for m in ms), c)

    @classmethod
    def block_diag(cls, *ms: "Matrix") -> "Matrix":
        rows = sum(m.rows for m in ms)
        cols = sum(m.cols for m in ms)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for m in ms:
            for i, row in enumerate(m.data):
                out[r0 + i][c0:c0 + m.cols] = row
            r0 += m.rows
            c0 += m.cols
        return cls(out, rows, cols)

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.data]

    def transpose(self) -> "Matrix":
        return Matrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)], self.cols, self.rows)

    T = property(transpose)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.data[i][j] for j in cols] for i in rows], len(rows), len(cols))

    # arithmetic
    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise DimensionError(f"vector of length {len(vec)} against {self.rows}x{self.cols}")
        nz = [(j, x) for j, x in enumerate(vec) if x]
        return tuple(sum(r[j] * x for j, x in nz) for r in self.data)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return self.apply(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        out = []
        for r in self.data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append([sum(a * c[k] for k, a in nz) for c in ocols])
        return Matrix(out, self.rows, other.cols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)], self.rows, self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.data], self.rows, self.cols)

    def scale(self, k) -> "Matrix":
        return Matrix([[k * a for a in r] for r in self.data], self.rows, self.cols)

    def reduce_rows(self, orders: Sequence[int]) -> "Matrix":
        """Reduce row ``i`` modulo ``orders[i]`` (0 leaves the row alone)."""
        if len(orders) != self.rows:
            raise DimensionError("one order per row expected")
        return Matrix([[a % o for a in r] if o else list(r) for r, o in zip(self.data, orders)], self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(not a for r in self.data for a in r)

    def is_integral(self) -> bool:
        return all(isinstance(a, int) for r in self.data for a in r)

    def det(self):
        """Determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(r) for r in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                    a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else num / prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.data))
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"


IntMatrix = Matrix


def _as_matrix(a) -> Matrix:
    if isinstance(a, Matrix):
        return a
    return Matrix(a)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    """``u @ a @ v == s``; ``u_inv``/``v_inv`` are the exact inverses."""

    u: Matrix
    s: Matrix
    v: Matrix
    u_inv: Matrix
    v_inv: Matrix
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def _identity_rows(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _snf_core(data, m: int, n: int, track_u: bool, track_v: bool):
    a = [list(r) for r in data]
    u = _identity_rows(m) if track_u else None
    ui = _identity_rows(m) if track_u else None
    v = _identity_rows(n) if track_v else None
    vi = _identity_rows(n) if track_v else None

    def add_row(i, t, q):
        # row_i += q * row_t
        ai, at = a[i], a[t]
        a[i] = [x + q * y for x, y in zip(ai, at)]
        if track_u:
            u[i] = [x + q * y for x, y in zip(u[i], u[t])]
            for row in ui:
                row[t] -= q * row[i]

    def add_col(j, t, q):
        # col_j += q * col_t
        for row in a:
            if row[t]:
                row[j] += q * row[t]
        if track_v:
            for row in v:
                row[j] += q * row[t]
            vi[t] = [x - q * y for x, y in zip(vi[t], vi[j])]

    def swap_rows(i, t):
        if i == t:
            return
        a[i], a[t] = a[t], a[i]
        if track_u:
            u[i], u[t] = u[t], u[i]
            for row in ui:
                row[i], row[t] = row[t], row[i]

    def swap_cols(j, t):
        if j == t:
            return
        for row in a:
            row[j], row[t] = row[t], row[j]
        if track_v:
            for row in v:
                row[j], row[t] = row[t], row[j]
            vi[j], vi[t] = vi[t], vi[j]

    def negate_row(t):
        a[t] = [-x for x in a[t]]
        if track_u:
            u[t] = [-x for x in u[t]]
            for row in ui:
                row[t] = -row[t]

    factors = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(best[1], t)
        swap_cols(best[2], t)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    add_row(i, t, -(x // p))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = a[t][j]
                if x:
                    add_col(j, t, -(x // p))
                    if a[t][j]:
                        dirty = True
            if dirty:
                best = (abs(p), t, t)
                for i in range(t + 1, m):
                    x = a[i][t]
                    if x and abs(x) < best[0]:
                        best = (abs(x), i, t)
                for j in range(t + 1, n):
                    x = a[t][j]
                    if x and abs(x) < best[0]:
                        best = (abs(x), t, j)
                swap_rows(best[1], t)
                swap_cols(best[2], t)
                continue
            bad = None
            for i in range(t + 1, m):
                row = a[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)
        factors.append(a[t][t])
        t += 1
    return a, u, ui, v, vi, tuple(factors)


def snf(a) -> SnfResult:
    """Smith normal form with unimodular transforms.

    Pivot: the nonzero entry of smallest absolute value, ties broken by the
    lowest row and then the lowest column, so the output is deterministic.
    """
    a = _as_matrix(a)
    if not a.is_integral():
        raise TypeError("snf needs an integer matrix")
    m, n = a.shape
    s, u, ui, v, vi, factors = _snf_core(a.data, m, n, True, True)
    return SnfResult(
        u=Matrix(u, m, m),
        s=Matrix(s, m, n),
        v=Matrix(v, n, n),
        u_inv=Matrix(ui, m, m),
        v_inv=Matrix(vi, n, n),
        invariant_factors=factors,
    )


def _snf_partial(a: Matrix, track_u: bool, track_v: bool):
    _, u, ui, v, vi, factors = _snf_core(a.data, a.rows, a.cols, track_u, track_v)
    return u, ui, v, vi, factors


def invariant_factors(a) -> tuple[int, ...]:
    a = _as_matrix(a)
    return _snf_core(a.data, a.rows, a.cols, False, False)[-1]


def _rank_fraction(a: Matrix) -> int:
    rows = [[Fraction(x) for x in r] for r in a.data]
    rk = 0
    for c in range(a.cols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        for i in range(rk + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] / rows[rk][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        rk += 1
    return rk


def rank(a, ring: RingSpec = ZZ) -> int:
    """Rank over Z/Q (same thing), or over F_p.  Undefined for Z/m with m composite."""
    a = _as_matrix(a)
    if not a.is_integral():
        if ring.kind != RingSpec.RATIONALS:
            raise TypeError("fractional matrices only make sense over Q")
        return _rank_fraction(a)
    factors = invariant_factors(a)
    if ring.kind == RingSpec.PRIME_FIELD:
        return sum(1 for d in factors if d % ring.modulus)
    if ring.kind == RingSpec.MOD_RING:
        raise ValueError("rank over Z/m is not defined for composite m")
    return len(factors)


def _with_modulus(a: Matrix, ring: RingSpec) -> Matrix:
    if not ring.is_modular:
        return a
    return Matrix.hstack(a, Matrix.identity(a.rows).scale(ring.modulus)) if a.rows else a


def cokernel(a, ring: RingSpec = ZZ) -> "FgModule":
    """The module on ``a.rows`` generators subject to the columns of ``a``."""
    a = _as_matrix(a)
    factors = invariant_factors(a)
    orders = list(factors) + [0] * (a.rows - len(factors))
    return FgModule.from_cyclic(ring, orders)


def solve(a, b: Sequence, ring: RingSpec = ZZ):
    """A solution ``x`` of ``a @ x == b`` over ``ring``, or ``None``.

    Over Z the answer is decided by the Smith form: after ``y = u @ b`` every
    ``y_i`` must be divisible by ``d_i`` and vanish beyond the rank.  Over Z/m
    the relations ``m * I`` are adjoined and the result is reduced mod m.
    """
    a = _as_matrix(a)
    if len(b) != a.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {a.rows} rows")
    if ring.kind == RingSpec.RATIONALS:
        return _solve_rational(a, b)
    aa = _with_modulus(a, ring)
    x = LatticeSolver(aa).solve(b)
    if x is None:
        return None
    x = x[: a.cols]
    if ring.is_modular:
        x = tuple(v % ring.modulus for v in x)
    return x


def _solve_rational(a: Matrix, b: Sequence):
    if a.is_integral() and all(isinstance(v, int) for v in b):
        res = snf(a)
        y = res.u.apply(b)
        r = res.rank
        if any(y[i] for i in range(r, a.rows)):
            return None
        z = [Fraction(y[i], res.invariant_factors[i]) for i in range(r)] + [0] * (a.cols - r)
        return tuple(_demote(v) for v in res.v.apply(z))
    # general Gauss-Jordan over Fractions
    rows = [[Fraction(x) for x in r] + [Fraction(v)] for r, v in zip(a.data, b)]
    pivots = []
    rk = 0
    for c in range(a.cols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        pv = rows[rk][c]
        rows[rk] = [x / pv for x in rows[rk]]
        for i in range(len(rows)):
            if i != rk and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        pivots.append(c)
        rk += 1
    if any(rows[i][-1] for i in range(rk, len(rows))):
        return None
    x = [Fraction(0)] * a.cols
    for i, c in enumerate(pivots):
        x[c] = rows[i][-1]
    return tuple(_demote(v) for v in x)


def _demote(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


class LatticeSolver:
    """Reusable integral solver for ``a @ x == b`` (one Smith form, many right-hand sides)."""

    def __init__(self, a):
        self.a = _as_matrix(a)
        u, _, v, _, factors = _snf_partial(self.a, True, True)
        self._u = Matrix(u, self.a.rows, self.a.rows)
        self._v = Matrix(v, self.a.cols, self.a.cols)
        self.factors = factors

    def solve(self, b: Sequence):
        if len(b) != self.a.rows:
            raise DimensionError(f"right-hand side has length {len(b)}, matrix has {self.a.rows} rows")
        y = self._u.apply(b) if self.a.rows else ()
        r = len(self.factors)
        z = []
        for i in range(r):
            q, rem = divmod(y[i], self.factors[i])
            if rem:
                return None
            z.append(q)
        if any(y[i] for i in range(r, self.a.rows)):
            return None
        z.extend([0] * (self.a.cols - r))
        return self._v.apply(z) if self.a.cols else ()

    def contains(self, b: Sequence) -> bool:
        return self.solve(b) is not None


def kernel_basis(a, ring: RingSpec = ZZ) -> Matrix:
    """Columns span ``{x : a @ x == 0}`` over ``ring``.

    Over Z and Q they are a lattice basis taken from the Smith transform; over
    F_p a vector-space basis; over Z/m a generating set (kernels need not be
    free there).
    """
    a = _as_matrix(a)
    n = a.cols
    _, _, v, _, factors = _snf_partial(a, False, True)
    r = len(factors)
    cols = [[v[i][j] for i in range(n)] for j in range(r, n)]
    if ring.is_modular:
        m = ring.modulus
        extra = []
        for j, d in enumerate(factors):
            e = m // gcd(d, m)
            if e != m:
                extra.append([e * v[i][j] % m for i in range(n)])
        cols = extra + [[x % m for x in c] for c in cols]
    return Matrix.from_columns(cols, n)


def image_basis(a) -> Matrix:
    """A Z-basis of the lattice spanned by the columns of ``a``."""
    a = _as_matrix(a)
    _, _, v, _, factors = _snf_partial(a, False, True)
    av = a @ Matrix(v, a.cols, a.cols)
    return av.submatrix(range(a.rows), range(len(factors)))


# ---------------------------------------------------------------------------
# finitely generated modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FgModule:
    """``R^free_rank  (+)  R/t_1 (+) ... (+) R/t_k`` with ``t_1 | t_2 | ...``.

    Over F_p and Q the torsion list is empty.  Over Z/m a summand ``Z/m`` is free.
    """

    ring: RingSpec
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise InvariantError("negative free rank")
        if self.torsion and self.ring.is_field:
            raise InvariantError(f"torsion {self.torsion} over the field {self.ring}")
        for t in self.torsion:
            if t < 2:
                raise InvariantError(f"torsion coefficient {t} < 2")
            if self.ring.is_modular and (self.ring.modulus % t or t == self.ring.modulus):
                raise InvariantError(f"torsion {t} is not a proper divisor of {self.ring.modulus}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise InvariantError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def zero(cls, ring: RingSpec) -> "FgModule":
        return cls(ring)

    @classmethod
    def free(cls, ring: RingSpec, rank: int = 1) -> "FgModule":
        return cls(ring, rank)

    @classmethod
    def from_cyclic(cls, ring: RingSpec, orders: Iterable[int]) -> "FgModule":
        """Direct sum of cyclic modules ``R/(o)`` (``o == 0`` is a free summand), in invariant form."""
        normalized = [ring.normalize_order(o) for o in orders]
        normalized = [o for o in normalized if o != 1]
        if not normalized:
            return cls(ring)
        if len(normalized) == 1:
            facs = normalized
        else:
            facs = list(invariant_factors(Matrix.diagonal(normalized)))
            facs += [0] * (len(normalized) - len(facs))
        free = sum(1 for o in facs if o == ring.free_order)
        torsion = tuple(o for o in facs if o != ring.free_order and o != 1)
        return cls(ring, free, torsion)

    @classmethod
    def parse(cls, text: str, ring: RingSpec = ZZ) -> "FgModule":
        """Mini-grammar ``Z``, ``Z/6``, ``Z^2+Z/2``, ``0``."""
        t = text.replace(" ", "")
        if t in ("0", ""):
            return cls(ring)
        orders = []
        for part in t.split("+"):
            if part.startswith("Z/"):
                orders.append(int(part[2:]))
            elif part == "Z":
                orders.append(0)
            elif part.startswith("Z^"):
                orders.extend([0] * int(part[2:]))
            else:
                raise ValueError(f"cannot parse module summand {part!r}")
        return cls.from_cyclic(ring, orders)

    def generator_orders(self) -> tuple[int, ...]:
        """Orders of the canonical generators: torsion first, then free."""
        return self.torsion + (self.ring.free_order,) * self.free_rank

    @property
    def num_generators(self) -> int:
        return len(self.torsion) + self.free_rank

    def is_zero(self) -> bool:
        return self.num_generators == 0

    def direct_sum(self, *others: "FgModule") -> "FgModule":
        orders = list(self.generator_orders())
        for o in others:
            if o.ring != self.ring:
                raise RingMismatchError(f"{o.ring} vs {self.ring}")
            orders.extend(o.generator_orders())
        return FgModule.from_cyclic(self.ring, orders)

    def as_integer_module(self) -> "FgModule":
        """Forget the ring structure down to an abelian group (Z/m and F_p only)."""
        if self.ring.kind == RingSpec.INTEGERS:
            return self
        if self.ring.kind == RingSpec.RATIONALS:
            raise ValueError("Q-vector spaces are not finitely generated abelian groups")
        return FgModule.from_cyclic(ZZ, self.generator_orders())

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        base = {
            RingSpec.INTEGERS: "Z",
            RingSpec.RATIONALS: "Q",
            RingSpec.PRIME_FIELD: f"F{self.ring.modulus}",
            RingSpec.MOD_RING: f"Z/{self.ring.modulus}",
        }[self.ring.kind]
        parts = []
        if self.free_rank:
            wrapped = f"({base})" if "/" in base else base
            parts.append(base if self.free_rank == 1 else f"{wrapped}^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"ring": str(self.ring), "free_rank": self.free_rank, "torsion": list(self.torsion), "text": str(self)}


@dataclass(frozen=True)
class ModuleMap:
    """A homomorphism written in the canonical generators of source and target.

    Entries are reduced modulo the order of the target generator, so two maps
    are equal exactly when their matrices are.
    """

    source: FgModule
    target: FgModule
    matrix: Matrix

    def __post_init__(self):
        if self.source.ring != self.target.ring:
            raise RingMismatchError(f"{self.source.ring} vs {self.target.ring}")
        if self.matrix.shape != (self.target.num_generators, self.source.num_generators):
            raise DimensionError(
                f"matrix {self.matrix.shape} does not fit "
                f"{self.source.num_generators} -> {self.target.num_generators} generators"
            )
        tgt = self.target.generator_orders()
        m = self.matrix.reduce_rows(tgt) if self.matrix.is_integral() else self.matrix
        object.__setattr__(self, "matrix", m)
        for j, t in enumerate(self.source.generator_orders()):
            if t == 0:
                continue
            for i, o in enumerate(tgt):
                x = t * m.data[i][j]
                if (x % o if o else x) != 0:
                    raise InvariantError(f"generator {j} of order {t} is not killed by {t} in the target")

    @classmethod
    def zero(cls, source: FgModule, target: FgModule) -> "ModuleMap":
        return cls(source, target, Matrix.zeros(target.num_generators, source.num_generators))

    @classmethod
    def identity(cls, module: FgModule) -> "ModuleMap":
        return cls(module, module, Matrix.identity(module.num_generators))

    @property
    def ring(self) -> RingSpec:
        return self.source.ring

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        if other.target != self.source:
            raise DimensionError(f"cannot compose {other.target} -> | {self.source} ->")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def is_injective(self) -> bool:
        return certify_exact(ModuleMap.zero(FgModule.zero(self.ring), self.source), self).exact

    def is_surjective(self) -> bool:
        return certify_exact(self, ModuleMap.zero(self.target, FgModule.zero(self.ring))).exact

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def scalar(self):
        """The single entry of a map between rank-one modules."""
        if self.matrix.shape != (1, 1):
            raise DimensionError(f"not a 1x1 map: {self.matrix.shape}")
        return self.matrix.data[0][0]

    def to_json(self) -> dict:
        return {"source": str(self.source), "target": str(self.target), "matrix": _json_matrix(self.matrix)}


def _json_matrix(m: Matrix):
    return [[x if isinstance(x, int) else str(x) for x in r] for r in m.data]


@dataclass(frozen=True)
class ExactnessCertificate:
    """Outcome of checking ``A --f--> B --g--> C`` at ``B``."""

    composite_zero: bool
    kernel_in_image: bool
    witness: tuple = field(default=())

    @property
    def exact(self) -> bool:
        return self.composite_zero and self.kernel_in_image


def _relation_columns(orders: Sequence[int]) -> list[list[int]]:
    n = len(orders)
    return [[o if i == k else 0 for i in range(n)] for k, o in enumerate(orders) if o]


def certify_exact(f: ModuleMap, g: ModuleMap) -> ExactnessCertificate:
    """Certify ``image(f) == kernel(g)`` as subgroups of the middle module.

    Over Q this is a rank count.  Otherwise the middle module is presented as
    ``Z^b / diag(orders)``; the kernel lattice ``{x : g x in relations}`` and
    the image lattice ``im f + relations`` are compared by explicit membership.
    The witness, on failure, is a kernel vector that is not in the image.
    """
    if f.target != g.source:
        raise DimensionError("maps are not composable")
    middle = f.target
    b = middle.num_generators
    comp = g @ f
    composite_zero = comp.is_zero()
    if b == 0:
        return ExactnessCertificate(composite_zero, True)
    ring = middle.ring
    if ring.kind == RingSpec.RATIONALS:
        ok = rank(f.matrix, ring) + rank(g.matrix, ring) == b
        return ExactnessCertificate(composite_zero, ok and composite_zero)
    rel_b = _relation_columns(middle.generator_orders())
    rel_c = _relation_columns(g.target.generator_orders())
    gm = g.matrix
    if rel_c:
        gm = Matrix.hstack(gm, Matrix.from_columns(rel_c, g.target.num_generators))
    if gm.rows:
        kern = kernel_basis(gm)
        kernel_gens = [c[:b] for c in kern.columns()]
    else:
        kernel_gens = [tuple(1 if i == k else 0 for i in range(b)) for k in range(b)]
    img_cols = list(f.matrix.columns()) + [tuple(c) for c in rel_b]
    if not img_cols:
        missing = next((k for k in kernel_gens if any(k)), None)
        return ExactnessCertificate(composite_zero, missing is None, () if missing is None else (missing,))
    solver = LatticeSolver(Matrix.from_columns(img_cols, b))
    for k in kernel_gens:
        if not solver.contains(k):
            return ExactnessCertificate(composite_zero, False, (tuple(k),))
    return ExactnessCertificate(composite_zero, True)
