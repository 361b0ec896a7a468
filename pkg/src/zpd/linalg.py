"""Exact linear algebra over the rationals and prime fields.

Scalars are plain Python objects: ``fractions.Fraction`` over Q and ``int``
residues in ``[0, p)`` over F_p.  A :class:`FieldSpec` knows how to bring
anything into canonical form and how to invert; all elimination routines
are written against that small interface so the same code serves both
kinds of field.

Subspaces are stored by their reduced row echelon basis, which is unique,
so equality of subspaces is equality of tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "BudgetExceeded",
    "DimensionMismatch",
    "FieldSpec",
    "Q",
    "GF",
    "Matrix",
    "Subspace",
    "SpanAccumulator",
    "rref",
    "rank",
    "kernel_basis",
    "span",
    "solve",
    "subspace_contains",
    "subspace_equal",
    "subspace_sum",
    "enumerate_vectors",
    "projective_points",
    "projective_count",
    "tensor",
]


class DimensionMismatch(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its configured cap."""

    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} steps, budget is {budget}")
        self.required = required
        self.budget = budget


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_prime_field(self) -> bool:
        return self.p != 0

    @property
    def characteristic(self) -> int:
        return self.p

    def __str__(self):
        return f"F{self.p}" if self.p else "Q"

    def __repr__(self):
        return f"GF({self.p})" if self.p else "Q"

    # -- scalars ---------------------------------------------------------

    def __call__(self, x) -> Fraction | int:
        """Canonical form of ``x`` (int, Fraction or "num/den" string)."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{x} has no image in {self}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def reduce(self, x):
        # hot path: results of +, -, * on canonical scalars
        return x % self.p if self.p else x

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(x, -1, self.p)
        return 1 / x

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def format(self, x) -> str:
        return str(x)

    def vector(self, values: Iterable) -> tuple:
        return tuple(self(v) for v in values)

    def elements(self) -> range:
        if not self.p:
            raise ValueError("the rationals cannot be enumerated")
        return range(self.p)


Q = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix with exact entries, stored row-major."""

    field: FieldSpec
    rows: tuple
    ncols: int = dc_field(default=-1)

    def __post_init__(self):
        rows = tuple(tuple(self.field(x) for x in r) for r in self.rows)
        ncols = self.ncols
        if ncols < 0:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged rows")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> Matrix:
        return cls(field, tuple((0,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> Matrix:
        return cls(field, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence], nrows: int) -> Matrix:
        return cls(field, tuple(tuple(c[i] for c in columns) for i in range(nrows)), len(columns))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def T(self) -> Matrix:
        return Matrix(self.field, tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        red = self.field.reduce
        return tuple(red(sum(a * b for a, b in zip(r, v) if a and b)) for r in self.rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if other.nrows != self.ncols:
                raise DimensionMismatch(f"{self.shape} @ {other.shape}")
            cols = [other.column(j) for j in range(other.ncols)]
            return Matrix.from_columns(self.field, [self.apply(c) for c in cols], self.nrows)
        return self.apply(other)

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        red = self.field.reduce
        return Matrix(self.field, tuple(tuple(red(a + b) for a, b in zip(r, s))
                                        for r, s in zip(self.rows, other.rows)), self.ncols)

    def scale(self, k) -> Matrix:
        k = self.field(k)
        red = self.field.reduce
        return Matrix(self.field, tuple(tuple(red(k * a) for a in r) for r in self.rows), self.ncols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)


def _rref_rows(rows: list[list], ncols: int, field: FieldSpec) -> tuple[list[list], list[int]]:
    # in-place Gauss-Jordan on a list of mutable rows; returns (nonzero rows, pivots)
    red = field.reduce
    inv = field.inv
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        for i in range(r, nrows):
            if rows[i][c]:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        pr = rows[r]
        if pr[c] != 1:
            k = inv(pr[c])
            pr = rows[r] = [red(x * k) for x in pr]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    rows[i] = [red(x - f * y) if y else x for x, y in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form of ``m`` and its pivot columns.

    The returned matrix keeps the shape of ``m``; zero rows sit at the bottom.
    """
    rows = [list(r) for r in m.rows]
    nz, pivots = _rref_rows(rows, m.ncols, m.field)
    out = nz + [[0] * m.ncols for _ in range(m.nrows - len(nz))]
    return Matrix(m.field, tuple(map(tuple, out)), m.ncols), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """A subspace of ``field ** ambient_dim`` in canonical (RREF) form.

    Build these with :func:`span` or :func:`kernel_basis`; the constructor
    trusts that ``basis`` is already reduced.
    """

    field: FieldSpec
    ambient_dim: int
    basis: tuple = ()
    pivots: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __contains__(self, v) -> bool:
        return subspace_contains(self, v)

    def coordinates(self, v: Sequence) -> tuple:
        """Coordinates of ``v`` w.r.t. ``basis``; ``v`` must lie in the subspace."""
        coords = tuple(self.field(v[c]) for c in self.pivots)
        red = self.field.reduce
        recon = [0] * self.ambient_dim
        for k, b in zip(coords, self.basis):
            if k:
                for j, x in enumerate(b):
                    if x:
                        recon[j] = red(recon[j] + k * x)
        if tuple(recon) != tuple(self.field(x) for x in v):
            raise ValueError("vector is not in the subspace")
        return coords

    def as_matrix(self) -> Matrix:
        return Matrix(self.field, self.basis, self.ambient_dim)


def span(vectors: Iterable[Sequence], ambient_dim: int, field: FieldSpec = Q) -> Subspace:
    rows = []
    for v in vectors:
        if len(v) != ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        rows.append([field(x) for x in v])
    nz, pivots = _rref_rows(rows, ambient_dim, field)
    return Subspace(field, ambient_dim, tuple(map(tuple, nz)), tuple(pivots))


def kernel_basis(m: Matrix) -> Subspace:
    """Null space of ``m`` as a canonical subspace of ``field ** m.ncols``."""
    field = m.field
    rows, pivots = _rref_rows([list(r) for r in m.rows], m.ncols, field)
    pivset = set(pivots)
    red = field.reduce
    vecs = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [0] * m.ncols
        v[f] = 1
        for r, c in zip(rows, pivots):
            if r[f]:
                v[c] = red(-r[f])
        vecs.append(v)
    return span(vecs, m.ncols, field)


def solve(m: Matrix, rhs: Sequence) -> tuple | None:
    """One solution ``x`` of ``m x = rhs`` (free variables zero), or None."""
    if len(rhs) != m.nrows:
        raise DimensionMismatch("right-hand side length")
    field = m.field
    aug = [list(r) + [field(b)] for r, b in zip(m.rows, rhs)]
    rows, pivots = _rref_rows(aug, m.ncols + 1, field)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [field.zero] * m.ncols
    for r, c in zip(rows, pivots):
        x[c] = r[-1]
    return tuple(x)


def _check_same(s: Subspace, t: Subspace):
    if s.ambient_dim != t.ambient_dim or s.field != t.field:
        raise DimensionMismatch(f"{s.ambient_dim}-dim over {s.field} vs {t.ambient_dim}-dim over {t.field}")


def subspace_contains(s: Subspace, v: Sequence) -> bool:
    if len(v) != s.ambient_dim:
        raise DimensionMismatch(f"vector of length {len(v)} in ambient dimension {s.ambient_dim}")
    field = s.field
    red = field.reduce
    w = [field(x) for x in v]
    for b, c in zip(s.basis, s.pivots):
        f = w[c]
        if f:
            w = [red(x - f * y) if y else x for x, y in zip(w, b)]
    return not any(w)


def subspace_equal(s: Subspace, t: Subspace) -> bool:
    _check_same(s, t)
    return s.basis == t.basis


def subspace_sum(s: Subspace, t: Subspace) -> Subspace:
    _check_same(s, t)
    return span(s.basis + t.basis, s.ambient_dim, s.field)


# ---------------------------------------------------------------------------
# incremental span


class SpanAccumulator:
    """Grows an RREF basis one batch of vectors at a time.

    Over small prime fields a batch is reduced against the current basis with
    a single integer matrix product (rows already in RREF have an identity
    block at their pivots).  Over Q the same reduction runs on Fractions.
    """

    def __init__(self, ambient_dim: int, field: FieldSpec = Q):
        self.field = field
        self.ambient_dim = ambient_dim
        self.pivots: list[int] = []
        self._numpy = bool(field.p) and field.p ** 2 * max(ambient_dim, 1) < 2 ** 62
        if self._numpy:
            self._basis = np.zeros((0, ambient_dim), dtype=np.int64)
        else:
            self._rows: list[list] = []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def add(self, v: Sequence) -> bool:
        return bool(self.add_many([v]))

    def add_many(self, vectors: Sequence[Sequence]) -> list[int]:
        """Add vectors; return the indices of those that enlarged the span."""
        if not len(vectors):
            return []
        if self._numpy:
            return self._add_many_np(vectors)
        accepted = []
        for idx, v in enumerate(vectors):
            if len(v) != self.ambient_dim:
                raise DimensionMismatch("vector length")
            if self._insert([self.field(x) for x in v]):
                accepted.append(idx)
        return accepted

    def _insert(self, w: list) -> bool:
        red = self.field.reduce
        for b, c in zip(self._rows, self.pivots):
            f = w[c]
            if f:
                w = [red(x - f * y) if y else x for x, y in zip(w, b)]
        for c, x in enumerate(w):
            if x:
                break
        else:
            return False
        if w[c] != 1:
            k = self.field.inv(w[c])
            w = [red(x * k) for x in w]
        for i, b in enumerate(self._rows):
            f = b[c]
            if f:
                self._rows[i] = [red(x - f * y) if y else x for x, y in zip(b, w)]
        pos = sum(1 for q in self.pivots if q < c)
        self._rows.insert(pos, w)
        self.pivots.insert(pos, c)
        return True

    def _add_many_np(self, vectors) -> list[int]:
        p = self.field.p
        V = np.asarray(vectors, dtype=np.int64) % p
        if V.ndim != 2 or V.shape[1] != self.ambient_dim:
            raise DimensionMismatch("vector length")
        if self.pivots:
            V = (V - V[:, self.pivots] @ self._basis) % p
        todo = np.flatnonzero(V.any(axis=1))
        accepted = []
        while todo.size:
            i = todo[0]
            w = V[i]
            c = int(np.flatnonzero(w)[0])
            w = w * pow(int(w[c]), -1, p) % p
            if len(self.pivots):
                f = self._basis[:, c].copy()
                self._basis = (self._basis - np.outer(f, w)) % p
            pos = sum(1 for q in self.pivots if q < c)
            self._basis = np.insert(self._basis, pos, w, axis=0)
            self.pivots.insert(pos, c)
            accepted.append(int(i))
            rest = todo[1:]
            if rest.size:
                V[rest] = (V[rest] - np.outer(V[rest, c], w)) % p
                todo = rest[V[rest].any(axis=1)]
            else:
                todo = rest
        return accepted

    def subspace(self) -> Subspace:
        if self._numpy:
            basis = tuple(tuple(int(x) for x in row) for row in self._basis)
        else:
            basis = tuple(map(tuple, self._rows))
        return Subspace(self.field, self.ambient_dim, basis, tuple(self.pivots))


# ---------------------------------------------------------------------------
# enumeration over F_p


def _require_prime_field(field: FieldSpec):
    if not field.is_prime_field:
        raise ValueError("enumeration needs a prime field")


def enumerate_vectors(field: FieldSpec, dim: int, budget: int | None = None) -> Iterator[tuple]:
    """All ``p ** dim`` vectors in odometer order (last coordinate fastest)."""
    _require_prime_field(field)
    total = field.p ** dim
    if budget is not None and total > budget:
        raise BudgetExceeded(total, budget)
    return itertools.product(range(field.p), repeat=dim)


def projective_count(field: FieldSpec, dim: int) -> int:
    _require_prime_field(field)
    return (field.p ** dim - 1) // (field.p - 1)


def projective_points(field: FieldSpec, dim: int, budget: int | None = None,
                      include_zero: bool = False) -> Iterator[tuple]:
    """One representative per line through the origin.

    Representatives have first nonzero coordinate 1.  Ordered by the position
    of that leading 1 (leftmost first), then odometer order on the tail.  The
    zero vector, if requested, comes first.
    """
    _require_prime_field(field)
    total = projective_count(field, dim) + int(include_zero)
    if budget is not None and total > budget:
        raise BudgetExceeded(total, budget)

    def gen():
        if include_zero:
            yield (0,) * dim
        for lead in range(dim):
            head = (0,) * lead + (1,)
            for tail in itertools.product(range(field.p), repeat=dim - lead - 1):
                yield head + tail

    return gen()


def tensor(a: Sequence, b: Sequence, field: FieldSpec = Q) -> tuple:
    """Coordinates of ``a ⊗ b``; index ``i * len(b) + j`` holds ``a[i] * b[j]``."""
    red = field.reduce
    return tuple(red(x * y) for x in a for y in b)
