"""Named constructors for concrete algebras.

Every constructor takes the base field as its last argument.  Catalog
specs are written like Python calls, e.g. ``sl(3)``, ``parabolic_sl(3, [1, 2])``
or ``lie_from_associative(matrix(2))``, optionally followed by ``@field``
(``Q``, ``F5``, ``GF(7)``).
"""

from __future__ import annotations

import ast
import itertools
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import Algebra
from .constructions import direct_sum
from .linalg import FieldSpec, Matrix, Q, solve

__all__ = [
    "CatalogEntry",
    "CATALOG",
    "CatalogError",
    "catalog",
    "parse_field",
    "parse_catalog_spec",
    "build",
    "abelian",
    "matrix",
    "lie_from_associative",
    "jordan_from_associative",
    "sl",
    "gl",
    "heisenberg",
    "upper_triangular",
    "strictly_upper_triangular",
    "parabolic_sl",
    "trunc_poly",
    "trunc_tensor",
    "trunc_sym",
    "unit_field",
]


class CatalogError(ValueError):
    pass


# ---------------------------------------------------------------------------
# helpers


def _unit_matrix(n: int, i: int, j: int) -> list[list[int]]:
    m = [[0] * n for _ in range(n)]
    m[i][j] = 1
    return m


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _bracket(a, b):
    ab, ba = _matmul(a, b), _matmul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


def _matrix_algebra(basis: list, labels: list, product: Callable, field: FieldSpec,
                    name: str) -> Algebra:
    # structure constants of a product-closed span of integer matrices
    flat = [[x for row in m for x in row] for m in basis]
    coords = Matrix.from_columns(field, flat, len(flat[0]))
    entries = []
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            prod = [x for row in product(a, b) for x in row]
            if not any(prod):
                continue
            x = solve(coords, prod)
            if x is None:
                raise CatalogError(f"{name}: basis is not closed under the product")
            entries.extend((i, j, k, v) for k, v in enumerate(x) if v)
    return Algebra.from_sparse(field, len(basis), entries, name=name, labels=tuple(labels))


def _check_char(field: FieldSpec, n: int, what: str):
    p = field.characteristic
    if p and n % p == 0:
        warnings.warn(f"{what} over {field}: characteristic divides {n}, "
                      "the identity matrix is traceless and central", stacklevel=3)


# ---------------------------------------------------------------------------
# constructors


def abelian(n: int, field: FieldSpec = Q) -> Algebra:
    """Trivial multiplication on an ``n``-dimensional space."""
    if n < 1:
        raise CatalogError("abelian(n) needs n >= 1")
    zero = [[[0] * n for _ in range(n)] for _ in range(n)]
    return Algebra(field, zero, name=f"abelian({n})", labels=tuple(f"a{i + 1}" for i in range(n)))


def unit_field(field: FieldSpec = Q) -> Algebra:
    """The base field as a one-dimensional algebra, ``e e = e``."""
    return Algebra(field, [[[1]]], name="unit_field", labels=("1",))


def matrix(n: int, field: FieldSpec = Q) -> Algebra:
    """Full matrix algebra M_n with basis E_ij in row-major order."""
    if n < 1:
        raise CatalogError("matrix(n) needs n >= 1")
    idx = {(i, j): i * n + j for i in range(n) for j in range(n)}
    entries = [(idx[i, j], idx[j, l], idx[i, l], 1)
               for i in range(n) for j in range(n) for l in range(n)]
    labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return Algebra.from_sparse(field, n * n, entries, name=f"matrix({n})", labels=tuple(labels))


def lie_from_associative(alg: Algebra, field: FieldSpec | None = None) -> Algebra:
    """Commutator algebra ``[a, b] = ab - ba``."""
    _same_field(alg, field)
    n = alg.dim
    c = alg.constants
    red = alg.field.reduce
    new = [[[red(x - y) for x, y in zip(c[i][j], c[j][i])] for j in range(n)] for i in range(n)]
    return Algebra(alg.field, new, name=f"lie_from_associative({alg.name})", labels=alg.labels)


def jordan_from_associative(alg: Algebra, field: FieldSpec | None = None) -> Algebra:
    """Jordan product: ``(ab + ba) / 2`` over Q, ``ab + ba`` over F_p (p odd)."""
    _same_field(alg, field)
    f = alg.field
    if f.characteristic == 2:
        raise CatalogError("jordan_from_associative needs characteristic != 2")
    half = Fraction(1, 2) if not f.is_prime_field else 1
    n = alg.dim
    c = alg.constants
    new = [[[f(half * (x + y)) for x, y in zip(c[i][j], c[j][i])] for j in range(n)]
           for i in range(n)]
    return Algebra(f, new, name=f"jordan_from_associative({alg.name})", labels=alg.labels)


def _same_field(alg: Algebra, field: FieldSpec | None):
    if not isinstance(alg, Algebra):
        raise CatalogError("expected an algebra argument")
    if field is not None and field != alg.field:
        raise CatalogError(f"argument is over {alg.field}, requested {field}")


def _sl_basis(n: int, blocks: list[int]):
    # upper off-diagonal E_ij (row-major), H_1..H_{n-1}, then allowed lower E_ij
    blk = [b for b, size in enumerate(blocks) for _ in range(size)]
    basis, labels = [], []
    for i in range(n):
        for j in range(i + 1, n):
            basis.append(_unit_matrix(n, i, j))
            labels.append(f"E{i + 1}{j + 1}")
    for i in range(n - 1):
        h = _unit_matrix(n, i, i)
        h[i + 1][i + 1] = -1
        basis.append(h)
        labels.append(f"H{i + 1}")
    for i in range(n):
        for j in range(i):
            if blk[i] == blk[j]:
                basis.append(_unit_matrix(n, i, j))
                labels.append(f"E{i + 1}{j + 1}")
    return basis, labels


def sl(n: int, field: FieldSpec = Q) -> Algebra:
    """Traceless ``n x n`` matrices under the commutator."""
    if n < 2:
        raise CatalogError("sl(n) needs n >= 2")
    _check_char(field, n, f"sl({n})")
    basis, labels = _sl_basis(n, [n])
    return _matrix_algebra(basis, labels, _bracket, field, f"sl({n})")


def parabolic_sl(n: int, blocks, field: FieldSpec = Q) -> Algebra:
    """Block-upper-triangular traceless matrices for the composition ``blocks``."""
    blocks = list(blocks)
    if n < 2 or not blocks or any(int(b) != b or b < 1 for b in blocks) or sum(blocks) != n:
        raise CatalogError(f"parabolic_sl: blocks {blocks} must be a composition of {n}")
    _check_char(field, n, f"parabolic_sl({n})")
    basis, labels = _sl_basis(n, blocks)
    name = f"parabolic_sl({n},[{','.join(map(str, blocks))}])"
    return _matrix_algebra(basis, labels, _bracket, field, name)


def gl(n: int, field: FieldSpec = Q) -> Algebra:
    """``gl(n)`` built as the direct sum of its center and ``sl(n)`` (Q only)."""
    if field.is_prime_field:
        raise CatalogError("gl(n) is only built over Q")
    center = Algebra(field, [[[0]]], name="center", labels=("I",))
    return direct_sum([center, sl(n, field)], name=f"gl({n})")


def heisenberg(field: FieldSpec = Q) -> Algebra:
    """Basis x, y, z with ``[x, y] = z`` and z central."""
    entries = [(0, 1, 2, 1), (1, 0, 2, -1)]
    return Algebra.from_sparse(field, 3, entries, name="heisenberg", labels=("x", "y", "z"))


def upper_triangular(n: int, field: FieldSpec = Q) -> Algebra:
    if n < 1:
        raise CatalogError("upper_triangular(n) needs n >= 1")
    pos = [(i, j) for i in range(n) for j in range(i, n)]
    return _triangular(pos, field, f"upper_triangular({n})")


def strictly_upper_triangular(n: int, field: FieldSpec = Q) -> Algebra:
    if n < 2:
        raise CatalogError("strictly_upper_triangular(n) needs n >= 2")
    pos = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return _triangular(pos, field, f"strictly_upper_triangular({n})")


def _triangular(pos, field, name):
    idx = {ij: k for k, ij in enumerate(pos)}
    entries = [(idx[i, j], idx[j2, l], idx[i, l], 1)
               for (i, j) in pos for (j2, l) in pos if j == j2]
    labels = [f"E{i + 1}{j + 1}" for i, j in pos]
    return Algebra.from_sparse(field, len(pos), entries, name=name, labels=tuple(labels))


def trunc_poly(m: int, field: FieldSpec = Q) -> Algebra:
    """``K[x] / (x^m)`` with basis 1, x, ..., x^(m-1)."""
    if m < 1:
        raise CatalogError("trunc_poly(m) needs m >= 1")
    entries = [(i, j, i + j, 1) for i in range(m) for j in range(m) if i + j < m]
    labels = ["1"] + [f"x^{i}" if i > 1 else "x" for i in range(1, m)]
    return Algebra.from_sparse(field, m, entries, name=f"trunc_poly({m})", labels=tuple(labels))


def _word_label(word) -> str:
    return "".join(f"v{w + 1}" for w in word) or "1"


def trunc_tensor(d: int, deg: int, field: FieldSpec = Q) -> Algebra:
    """Free associative algebra on ``d`` letters, words longer than ``deg`` set to zero.

    Basis: words ordered by length, then lexicographically; the empty word is 1.
    """
    if d < 1 or deg < 0:
        raise CatalogError("trunc_tensor(d, deg) needs d >= 1 and deg >= 0")
    words = [w for k in range(deg + 1) for w in itertools.product(range(d), repeat=k)]
    idx = {w: i for i, w in enumerate(words)}
    entries = [(idx[u], idx[v], idx[u + v], 1) for u in words for v in words
               if len(u) + len(v) <= deg]
    return Algebra.from_sparse(field, len(words), entries, name=f"trunc_tensor({d},{deg})",
                               labels=tuple(_word_label(w) for w in words))


def trunc_sym(d: int, deg: int, field: FieldSpec = Q) -> Algebra:
    """Polynomials in ``d`` commuting variables, total degree above ``deg`` set to zero.

    Basis: monomials ordered by degree, then as sorted variable tuples.
    """
    if d < 1 or deg < 0:
        raise CatalogError("trunc_sym(d, deg) needs d >= 1 and deg >= 0")
    monos = [m for k in range(deg + 1)
             for m in itertools.combinations_with_replacement(range(d), k)]
    idx = {m: i for i, m in enumerate(monos)}
    entries = [(idx[u], idx[v], idx[tuple(sorted(u + v))], 1) for u in monos for v in monos
               if len(u) + len(v) <= deg]
    return Algebra.from_sparse(field, len(monos), entries, name=f"trunc_sym({d},{deg})",
                               labels=tuple(_word_label(m) for m in monos))


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    builder: Callable
    expected_flags: dict
    note: str = ""


_LIE = {"is_lie": True, "is_anticommutative": True, "satisfies_jacobi": True}

CATALOG: dict[str, CatalogEntry] = {e.name: e for e in [
    CatalogEntry("abelian", abelian,
                 {**_LIE, "is_commutative": True, "is_associative": True},
                 "abelian Lie algebra; every product is zero"),
    CatalogEntry("unit_field", unit_field,
                 {"is_commutative": True, "is_associative": True, "has_identity": True},
                 "the base field viewed as an algebra over itself"),
    CatalogEntry("matrix", matrix, {"is_associative": True, "has_identity": True}, "M_n"),
    CatalogEntry("lie_from_associative", lie_from_associative, dict(_LIE),
                 "commutator bracket of an associative algebra"),
    CatalogEntry("jordan_from_associative", jordan_from_associative, {"is_commutative": True},
                 "(ab+ba)/2 over Q; over F_p (p odd) the factor 1/2 is dropped"),
    CatalogEntry("sl", sl, {**_LIE, "is_associative": False},
                 "traceless matrices; warns when the characteristic divides n"),
    CatalogEntry("gl", gl, dict(_LIE), "center + sl(n), Q only"),
    CatalogEntry("heisenberg", heisenberg, {**_LIE, "is_commutative": False},
                 "[x,y] = z, z central"),
    CatalogEntry("upper_triangular", upper_triangular,
                 {"is_associative": True, "has_identity": True}, "upper triangular matrices"),
    CatalogEntry("strictly_upper_triangular", strictly_upper_triangular,
                 {"is_associative": True, "has_identity": False},
                 "strictly upper triangular matrices"),
    CatalogEntry("parabolic_sl", parabolic_sl, dict(_LIE),
                 "standard parabolic of sl(n) for a block composition"),
    CatalogEntry("trunc_poly", trunc_poly,
                 {"is_commutative": True, "is_associative": True, "has_identity": True},
                 "K[x]/(x^m)"),
    CatalogEntry("trunc_tensor", trunc_tensor, {"is_associative": True, "has_identity": True},
                 "tensor algebra truncated above a total degree"),
    CatalogEntry("trunc_sym", trunc_sym,
                 {"is_commutative": True, "is_associative": True, "has_identity": True},
                 "symmetric algebra truncated above a total degree"),
]}


def catalog(name: str, params=(), field: FieldSpec = Q) -> Algebra:
    """Build the catalog algebra ``name(*params)`` over ``field``."""
    entry = CATALOG.get(name)
    if entry is None:
        raise CatalogError(f"unknown catalog algebra {name!r}")
    try:
        return entry.builder(*params, field)
    except TypeError as exc:
        raise CatalogError(f"bad parameters for {name}: {exc}") from exc


def parse_field(text) -> FieldSpec:
    """``Q`` / ``QQ`` / ``F5`` / ``GF(5)`` / ``Fp5`` or the file form ``{"Fp": 5}``."""
    if isinstance(text, dict):
        if set(text) != {"Fp"}:
            raise CatalogError(f"bad field {text!r}")
        return FieldSpec(int(text["Fp"]))
    t = str(text).strip().replace(" ", "")
    if t in ("Q", "QQ"):
        return Q
    for prefix in ("GF(", "Fp", "F"):
        if t.startswith(prefix):
            digits = t[len(prefix):].rstrip(")")
            if digits.isdigit():
                try:
                    return FieldSpec(int(digits))
                except ValueError as exc:
                    raise CatalogError(str(exc)) from exc
    raise CatalogError(f"bad field {text!r}")


def _eval_node(node, field: FieldSpec):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, (ast.List, ast.Tuple)):
        return [_eval_node(e, field) for e in node.elts]
    if isinstance(node, ast.Name):
        return catalog(node.id, (), field)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        args = [_eval_node(a, field) for a in node.args]
        return catalog(node.func.id, args, field)
    raise CatalogError(f"unsupported catalog expression: {ast.dump(node)}")


def parse_catalog_spec(spec: str, field: FieldSpec | str | None = None) -> Algebra:
    """Build from ``name(params)[@field]``; an explicit ``field`` wins over the suffix."""
    text = spec.strip()
    if text.startswith("catalog:"):
        text = text[len("catalog:"):]
    if "@" in text:
        text, ftext = text.rsplit("@", 1)
        if field is None:
            field = ftext
    if field is None:
        field = Q
    if not isinstance(field, FieldSpec):
        field = parse_field(field)
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise CatalogError(f"cannot parse catalog spec {spec!r}") from exc
    alg = _eval_node(tree.body, field)
    if not isinstance(alg, Algebra):
        raise CatalogError(f"{spec!r} does not describe an algebra")
    return alg


def build(name: str, params: str | None, field) -> Algebra:
    """CLI form: name, optional comma-separated params, field."""
    spec = name if not params else f"{name}({params})"
    return parse_catalog_spec(spec, field)
