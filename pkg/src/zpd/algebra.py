"""Finite-dimensional algebras given by structure constants.

An algebra of dimension ``n`` is stored as the dense table ``c[i][j][k]``
with ``e_i e_j = sum_k c[i][j][k] e_k``.  Its multiplication map is the
``n x n**2`` matrix acting on the tensor square, whose coordinates follow
one global convention: ``e_i ⊗ e_j`` sits at index ``i * n + j``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

from .linalg import (
    BudgetExceeded,
    DimensionMismatch,
    FieldSpec,
    Matrix,
    Q,
    Subspace,
    kernel_basis,
    projective_points,
    span,
    solve,
    tensor,
)

__all__ = [
    "Algebra",
    "BilinearMap",
    "Classification",
    "FactoredMap",
    "Counterexample",
    "tensor_index",
    "tensor_pair",
    "multiply",
    "mu_matrix",
    "ker_mu",
    "a_squared",
    "left_mult_matrix",
    "classify",
    "factor_through_mu",
    "vanishes_on_zero_products",
]


def tensor_index(i: int, j: int, n: int) -> int:
    return i * n + j


def tensor_pair(idx: int, n: int) -> tuple[int, int]:
    return divmod(idx, n)


@dataclass(frozen=True, eq=False)
class Algebra:
    """An algebra over ``field`` with dense structure constants.

    ``labels`` names the basis vectors and ``layout`` records the component
    dimensions when the algebra was built as a direct sum.  Equality only
    looks at the field and the structure constants.
    """

    field: FieldSpec
    constants: tuple
    name: str = "algebra"
    labels: tuple = ()
    layout: tuple | None = None
    dim: int = dc_field(init=False)

    def __post_init__(self):
        f = self.field
        n = len(self.constants)
        if n < 1:
            raise ValueError("an algebra needs dimension at least 1")
        c = []
        for row in self.constants:
            if len(row) != n:
                raise DimensionMismatch("structure constants must be n x n x n")
            crow = []
            for col in row:
                if len(col) != n:
                    raise DimensionMismatch("structure constants must be n x n x n")
                crow.append(tuple(f(x) for x in col))
            c.append(tuple(crow))
        object.__setattr__(self, "constants", tuple(c))
        object.__setattr__(self, "dim", n)
        labels = tuple(self.labels) or tuple(f"e{i}" for i in range(n))
        if len(labels) != n:
            raise ValueError("need one label per basis vector")
        object.__setattr__(self, "labels", labels)
        if self.layout is not None:
            layout = tuple(int(d) for d in self.layout)
            if sum(layout) != n or any(d < 1 for d in layout):
                raise ValueError(f"layout {layout} does not partition dimension {n}")
            object.__setattr__(self, "layout", layout)

    @classmethod
    def from_sparse(cls, field: FieldSpec, n: int, entries, **kw) -> Algebra:
        """Build from ``(i, j, k, value)`` entries; omitted entries are zero.

        Repeated ``(i, j, k)`` entries are summed.
        """
        c = [[[field.zero] * n for _ in range(n)] for _ in range(n)]
        for i, j, k, v in entries:
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise IndexError(f"structure constant index ({i}, {j}, {k}) out of range for dim {n}")
            c[i][j][k] = field.reduce(c[i][j][k] + field(v))
        return cls(field, c, **kw)

    def sparse(self) -> list[tuple[int, int, int, object]]:
        """Nonzero structure constants in lexicographic ``(i, j, k)`` order."""
        n = self.dim
        c = self.constants
        return [(i, j, k, c[i][j][k]) for i in range(n) for j in range(n) for k in range(n)
                if c[i][j][k]]

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.field == other.field and self.constants == other.constants

    def __hash__(self):
        return hash((self.field, self.constants))

    def __repr__(self):
        return f"Algebra({self.name!r}, dim={self.dim}, field={self.field})"

    @cached_property
    def structure_hash(self) -> str:
        """sha256 over field, dimension and sparse constants (presentation excluded)."""
        payload = {
            "field": str(self.field),
            "dim": self.dim,
            "constants": [[i, j, k, str(v)] for i, j, k, v in self.sparse()],
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()

    def vector(self, values: Sequence) -> tuple:
        if len(values) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} coordinates, got {len(values)}")
        return self.field.vector(values)

    def basis_vector(self, i: int) -> tuple:
        return tuple(self.field.one if k == i else self.field.zero for k in range(self.dim))

    def element(self, coeffs: dict) -> tuple:
        """Vector from ``{label: coefficient}``."""
        v = [self.field.zero] * self.dim
        for label, x in coeffs.items():
            i = self.labels.index(label)
            v[i] = self.field.reduce(v[i] + self.field(x))
        return tuple(v)

    def tensor_element(self, terms: dict) -> tuple:
        """Tensor-square vector from ``{(left_label, right_label): coefficient}``."""
        n = self.dim
        t = [self.field.zero] * (n * n)
        for (l, r), x in terms.items():
            idx = tensor_index(self.labels.index(l), self.labels.index(r), n)
            t[idx] = self.field.reduce(t[idx] + self.field(x))
        return tuple(t)

    @cached_property
    def _mu(self) -> Matrix:
        n = self.dim
        c = self.constants
        rows = tuple(tuple(c[i][j][k] for i in range(n) for j in range(n)) for k in range(n))
        return Matrix(self.field, rows, n * n)

    @cached_property
    def _left_basis(self) -> tuple:
        # L_{e_i}[k][j] = c[i][j][k]
        n = self.dim
        c = self.constants
        return tuple(tuple(tuple(c[i][j][k] for j in range(n)) for k in range(n)) for i in range(n))


@dataclass(frozen=True)
class BilinearMap:
    """A bilinear map ``A x A -> F^m`` stored as its linear map on ``A ⊗ A``."""

    matrix: Matrix

    @property
    def codomain_dim(self) -> int:
        return self.matrix.nrows

    def __call__(self, a: Sequence, b: Sequence) -> tuple:
        return self.matrix.apply(tensor(a, b, self.matrix.field))

    def on_tensor(self, t: Sequence) -> tuple:
        return self.matrix.apply(t)


def multiply(alg: Algebra, a: Sequence, b: Sequence) -> tuple:
    n = alg.dim
    if len(a) != n or len(b) != n:
        raise DimensionMismatch(f"expected vectors of length {n}")
    f = alg.field
    red = f.reduce
    out = [0] * n
    c = alg.constants
    for i, x in enumerate(a):
        if not x:
            continue
        ci = c[i]
        for j, y in enumerate(b):
            if not y:
                continue
            xy = x * y
            for k, z in enumerate(ci[j]):
                if z:
                    out[k] += xy * z
    return tuple(f(red(v)) for v in out)


def mu_matrix(alg: Algebra) -> Matrix:
    return alg._mu


def ker_mu(alg: Algebra) -> Subspace:
    ker = kernel_basis(alg._mu)
    # rank-nullity on the tensor square; cheap and catches elimination bugs
    if ker.dim + a_squared(alg).dim != alg.dim ** 2:
        raise ArithmeticError("rank-nullity violated for the multiplication map")
    return ker


def a_squared(alg: Algebra) -> Subspace:
    """The span of all products, i.e. the image of the multiplication map."""
    n = alg.dim
    mu = alg._mu
    return span([mu.column(j) for j in range(n * n)], n, alg.field)


def left_mult_matrix(alg: Algebra, a: Sequence) -> Matrix:
    n = alg.dim
    if len(a) != n:
        raise DimensionMismatch(f"expected a vector of length {n}")
    f = alg.field
    red = f.reduce
    L = [[0] * n for _ in range(n)]
    for x, Li in zip(a, alg._left_basis):
        if not x:
            continue
        for k in range(n):
            row, src = L[k], Li[k]
            for j in range(n):
                if src[j]:
                    row[j] += x * src[j]
    return Matrix(f, tuple(tuple(red(v) for v in row) for row in L), n)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    is_commutative: bool
    is_anticommutative: bool
    is_alternating: bool
    is_associative: bool
    satisfies_jacobi: bool
    is_lie: bool
    identity: tuple | None

    @property
    def has_identity(self) -> bool:
        return self.identity is not None

    def as_dict(self, field: FieldSpec | None = None) -> dict:
        fmt = field.format if field else str
        return {
            "is_commutative": self.is_commutative,
            "is_anticommutative": self.is_anticommutative,
            "is_alternating": self.is_alternating,
            "is_associative": self.is_associative,
            "satisfies_jacobi": self.satisfies_jacobi,
            "is_lie": self.is_lie,
            "has_identity": self.has_identity,
            "identity": None if self.identity is None else [fmt(x) for x in self.identity],
        }


def _find_identity(alg: Algebra) -> tuple | None:
    # unknowns u_i; equations sum_i u_i c[i][j][k] = delta_jk and sum_i u_i c[j][i][k] = delta_jk
    n = alg.dim
    c = alg.constants
    rows, rhs = [], []
    for j in range(n):
        for k in range(n):
            rows.append([c[i][j][k] for i in range(n)])
            rhs.append(int(j == k))
            rows.append([c[j][i][k] for i in range(n)])
            rhs.append(int(j == k))
    return solve(Matrix(alg.field, rows, n), rhs)


def classify(alg: Algebra) -> Classification:
    """Check the usual identities on all basis pairs and triples."""
    n = alg.dim
    f = alg.field
    red = f.reduce
    c = alg.constants
    rng = range(n)

    commutative = all(c[i][j] == c[j][i] for i in rng for j in rng)
    anti = all(red(x + y) == 0 for i in rng for j in rng for x, y in zip(c[i][j], c[j][i]))
    alternating = all(not any(c[i][i]) for i in rng)

    # (e_i e_j) e_l and e_i (e_j e_l), expanded in the basis
    def prod_vec(u, l, left):
        out = [0] * n
        for k, x in enumerate(u):
            if x:
                src = c[k][l] if left else c[l][k]
                for m, y in enumerate(src):
                    if y:
                        out[m] += x * y
        return [red(v) for v in out]

    associative = True
    jacobi = True
    for i in rng:
        for j in rng:
            for l in rng:
                ij_l = prod_vec(c[i][j], l, True)
                if associative:
                    i_jl = prod_vec(c[j][l], i, False)
                    if ij_l != i_jl:
                        associative = False
                if jacobi:
                    jl_i = prod_vec(c[j][l], i, True)
                    li_j = prod_vec(c[l][i], j, True)
                    if any(red(x + y + z) for x, y, z in zip(ij_l, jl_i, li_j)):
                        jacobi = False
                if not (associative or jacobi):
                    break

    is_lie = anti and jacobi and (alternating or f.characteristic != 2)
    return Classification(
        is_commutative=commutative,
        is_anticommutative=anti,
        is_alternating=alternating,
        is_associative=associative,
        satisfies_jacobi=jacobi,
        is_lie=is_lie,
        identity=_find_identity(alg),
    )


# ---------------------------------------------------------------------------
# factoring bilinear maps through the multiplication


@dataclass(frozen=True)
class FactoredMap:
    """``phi = matrix ∘ (coordinates in a2_basis) ∘ mu``.

    ``matrix`` is ``m x dim(A^2)``; column ``r`` is the image of the ``r``-th
    canonical basis vector of ``A^2``.
    """

    matrix: Matrix
    a2_basis: Subspace

    def apply(self, v: Sequence) -> tuple:
        return self.matrix.apply(self.a2_basis.coordinates(v))


@dataclass(frozen=True)
class Counterexample:
    """A tensor killed by the multiplication but not by ``phi``."""

    vector: tuple


def _as_matrix(alg: Algebra, phi) -> Matrix:
    m = phi.matrix if isinstance(phi, BilinearMap) else phi
    if m.ncols != alg.dim ** 2:
        raise DimensionMismatch(f"map has {m.ncols} columns, tensor square has {alg.dim ** 2}")
    if m.field != alg.field:
        raise DimensionMismatch(f"map over {m.field}, algebra over {alg.field}")
    return m


def factor_through_mu(alg: Algebra, phi) -> FactoredMap | Counterexample:
    """Factor ``phi`` through the multiplication map, or explain why not."""
    pm = _as_matrix(alg, phi)
    for t in ker_mu(alg).basis:
        if any(pm.apply(t)):
            return Counterexample(t)

    n = alg.dim
    mu = alg._mu
    a2 = a_squared(alg)
    cols = []
    for u in a2.basis:
        pre = solve(mu, u)
        if pre is None:  # pragma: no cover - u is in the image by construction
            raise ArithmeticError("A^2 basis vector has no preimage")
        cols.append(pm.apply(pre))
    fac = Matrix.from_columns(alg.field, cols, pm.nrows) if cols else Matrix.zeros(alg.field, pm.nrows, 0)
    result = FactoredMap(fac, a2)
    for idx in range(n * n):
        if result.apply(mu.column(idx)) != pm.column(idx):
            raise ArithmeticError("factored map disagrees with phi on a basis tensor")
    return result


def vanishes_on_zero_products(alg: Algebra, phi, budget: int | None = None) -> bool:
    """Whether ``phi(a ⊗ b) = 0`` for every ``a, b`` with ``ab = 0`` (prime fields).

    Runs over projective representatives ``a`` and a basis of ``{b : ab = 0}``.
    """
    if not alg.field.is_prime_field:
        raise ValueError("exhaustive check needs a prime field")
    pm = _as_matrix(alg, phi)
    f = alg.field
    for a in projective_points(f, alg.dim, budget=budget):
        for b in kernel_basis(left_mult_matrix(alg, a)).basis:
            if any(pm.apply(tensor(a, b, f))):
                return False
    return True
