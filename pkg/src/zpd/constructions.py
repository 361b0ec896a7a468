"""Direct sums of algebras and the block decompositions of their tensor squares.

With ``A = A_1 ⊕ ... ⊕ A_r`` and offsets ``o_i``, the block ``A_i ⊗ A_j`` of
the tensor square is the set of coordinates ``(o_i + r) * N + (o_j + s)``,
where ``N = dim A``.  The checks here build both sides of the kernel and
pure-tensor decompositions as subspaces and compare them exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import Algebra, ker_mu, multiply
from .decision import DEFAULT_MAX_ENUMERATION, pure_tensor_span
from .linalg import Subspace, span

__all__ = [
    "DirectSumLayout",
    "DecompositionCheck",
    "LayoutMissing",
    "direct_sum",
    "layout_of",
    "components",
    "embed",
    "check_kernel_decomposition",
    "check_pure_tensor_decomposition",
    "componentwise_product_holds",
    "witness_check",
    "WitnessReport",
]


class LayoutMissing(ValueError):
    pass


@dataclass(frozen=True)
class DirectSumLayout:
    component_dims: tuple

    @property
    def total(self) -> int:
        return sum(self.component_dims)

    @property
    def offsets(self) -> tuple:
        out, o = [], 0
        for d in self.component_dims:
            out.append(o)
            o += d
        return tuple(out)

    def block(self, i: int, j: int) -> list[int]:
        """Tensor coordinates of ``A_i ⊗ A_j``."""
        N = self.total
        oi, oj = self.offsets[i], self.offsets[j]
        return [(oi + r) * N + oj + s
                for r in range(self.component_dims[i])
                for s in range(self.component_dims[j])]


def layout_of(alg: Algebra) -> DirectSumLayout:
    if alg.layout is None:
        raise LayoutMissing(f"{alg.name} carries no direct-sum layout")
    return DirectSumLayout(alg.layout)


def direct_sum(algebras: Sequence[Algebra], name: str | None = None) -> Algebra:
    """Block-diagonal structure constants; products across blocks are zero."""
    if not algebras:
        raise ValueError("direct sum of an empty list")
    field = algebras[0].field
    for a in algebras:
        if a.field != field:
            raise ValueError(f"field mismatch: {a.field} vs {field}")
    N = sum(a.dim for a in algebras)
    entries = []
    labels = []
    o = 0
    for idx, a in enumerate(algebras):
        for i, j, k, v in a.sparse():
            entries.append((o + i, o + j, o + k, v))
        labels.extend(f"{lab}_{idx}" for lab in a.labels)
        o += a.dim
    name = name or " + ".join(a.name for a in algebras)
    return Algebra.from_sparse(field, N, entries, name=name, labels=tuple(labels),
                               layout=tuple(a.dim for a in algebras))


def components(alg: Algebra) -> list[Algebra]:
    """The diagonal blocks of a direct sum, as algebras in their own right."""
    lay = layout_of(alg)
    c = alg.constants
    out = []
    for idx, (o, d) in enumerate(zip(lay.offsets, lay.component_dims)):
        sub = [[[c[o + i][o + j][o + k] for k in range(d)] for j in range(d)] for i in range(d)]
        out.append(Algebra(alg.field, sub, name=f"{alg.name}[{idx}]",
                           labels=alg.labels[o:o + d]))
    return out


def embed(t: Sequence, lay: DirectSumLayout, i: int) -> tuple:
    """Place a tensor of ``A_i ⊗ A_i`` into the tensor square of the sum."""
    d = lay.component_dims[i]
    if len(t) != d * d:
        raise ValueError("tensor length does not match the component")
    out = [0] * (lay.total ** 2)
    for idx, coord in enumerate(lay.block(i, i)):
        out[coord] = t[idx]
    return tuple(out)


def _cross_blocks(lay: DirectSumLayout) -> list[tuple]:
    N2 = lay.total ** 2
    vecs = []
    r = len(lay.component_dims)
    for i in range(r):
        for j in range(r):
            if i != j:
                for coord in lay.block(i, j):
                    e = [0] * N2
                    e[coord] = 1
                    vecs.append(tuple(e))
    return vecs


@dataclass(frozen=True)
class DecompositionCheck:
    holds: bool
    lhs_dim: int
    rhs_dim: int

    def __bool__(self):
        return self.holds


def _block_rhs(alg: Algebra, per_component: list[Subspace]) -> Subspace:
    lay = layout_of(alg)
    vecs = []
    for i, sub in enumerate(per_component):
        vecs.extend(embed(t, lay, i) for t in sub.basis)
    vecs.extend(_cross_blocks(lay))
    return span(vecs, lay.total ** 2, alg.field)


def check_kernel_decomposition(alg: Algebra) -> DecompositionCheck:
    """Kernel of the sum vs. (component kernels) ⊕ (all off-diagonal blocks)."""
    lhs = ker_mu(alg)
    rhs = _block_rhs(alg, [ker_mu(c) for c in components(alg)])
    return DecompositionCheck(lhs.basis == rhs.basis, lhs.dim, rhs.dim)


def check_pure_tensor_decomposition(alg: Algebra, budget: int = DEFAULT_MAX_ENUMERATION
                                    ) -> DecompositionCheck:
    """Same comparison for the pure-tensor spans, each side by enumeration."""
    layout_of(alg)
    lhs = pure_tensor_span(alg, budget)
    rhs = _block_rhs(alg, [pure_tensor_span(c, budget) for c in components(alg)])
    return DecompositionCheck(lhs.basis == rhs.basis, lhs.dim, rhs.dim)


def componentwise_product_holds(alg: Algebra, a: Sequence, b: Sequence) -> bool:
    """``(a_1, ..., a_r)(b_1, ..., b_r) == (a_1 b_1, ..., a_r b_r)``."""
    lay = layout_of(alg)
    expect = []
    for comp, o, d in zip(components(alg), lay.offsets, lay.component_dims):
        expect.extend(multiply(comp, a[o:o + d], b[o:o + d]))
    return multiply(alg, a, b) == tuple(expect)


@dataclass(frozen=True)
class WitnessReport:
    in_kernel: bool
    nonzero: bool
    in_pure_span: bool | None = None


def witness_check(alg: Algebra, w: Sequence, budget: int = DEFAULT_MAX_ENUMERATION) -> WitnessReport:
    n = alg.dim
    if len(w) != n * n:
        raise ValueError(f"expected {n * n} tensor coordinates")
    f = alg.field
    w = f.vector(w)
    in_kernel = not any(alg._mu.apply(w))
    in_pure = None
    if f.is_prime_field:
        in_pure = w in pure_tensor_span(alg, budget)
    return WitnessReport(in_kernel, any(w), in_pure)
