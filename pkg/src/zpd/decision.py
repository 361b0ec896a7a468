"""Deciding whether an algebra is zero product determined.

An algebra is ZPD exactly when the kernel of its multiplication map is
spanned by pure tensors ``a ⊗ b`` with ``ab = 0``.  The span of those
tensors always sits inside the kernel, so everything here grows that span
from slices ``a ⊗ {b : ab = 0}`` and compares dimensions.

Over F_p every line through the origin is visited, which settles the
question.  Over Q only a sampled span is available: reaching the kernel
proves ZPD, and anything short of it is reported as unknown.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterator, Sequence

from .algebra import (
    Algebra,
    BilinearMap,
    Counterexample,
    FactoredMap,
    factor_through_mu,
    ker_mu,
    left_mult_matrix,
    mu_matrix,
    multiply,
    vanishes_on_zero_products,
)
from .linalg import (
    BudgetExceeded,
    FieldSpec,
    Matrix,
    SpanAccumulator,
    Subspace,
    kernel_basis,
    projective_count,
    projective_points,
    rank,
    span,
    subspace_contains,
    tensor,
)

__all__ = [
    "Certificate",
    "Verdict",
    "ProvenZPD",
    "ProvenNotZPD",
    "ExhaustiveGap",
    "NoZeroDivisorsAssumed",
    "Unknown",
    "SaturationBudget",
    "ZeroDivisorFound",
    "VerificationReport",
    "PropertySuiteReport",
    "pure_kernel_subspace",
    "pure_tensor_span",
    "decide_zpd_exhaustive",
    "saturate_zpd",
    "decide",
    "sampling_schedule",
    "verify_certificate",
    "zpd_map_property_suite",
    "canonical_projection",
]

DEFAULT_MAX_SAMPLES = 5000
DEFAULT_MAX_ENUMERATION = 50_000


@dataclass(frozen=True)
class SaturationBudget:
    max_samples: int = DEFAULT_MAX_SAMPLES
    prng_seed: int = 0
    max_enumeration: int = DEFAULT_MAX_ENUMERATION

    def __post_init__(self):
        if self.max_samples < 1 or self.max_enumeration < 1 or self.prng_seed < 0:
            raise ValueError("budget values must be positive")


@dataclass(frozen=True)
class Certificate:
    """Zero-product pairs whose tensors are claimed to span the kernel."""

    field: FieldSpec
    pairs: tuple = ()

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class ExhaustiveGap:
    dim_span: int
    dim_ker: int


@dataclass(frozen=True)
class NoZeroDivisorsAssumed:
    dim_ker: int


class Verdict:
    kind: str = ""


@dataclass(frozen=True)
class ProvenZPD(Verdict):
    certificate: Certificate
    dim_ker: int
    samples: int
    kind = "ProvenZPD"

    @property
    def dim_span(self) -> int:
        return self.dim_ker


@dataclass(frozen=True)
class ProvenNotZPD(Verdict):
    evidence: ExhaustiveGap | NoZeroDivisorsAssumed
    samples: int
    kind = "ProvenNotZPD"

    @property
    def dim_span(self) -> int:
        ev = self.evidence
        return ev.dim_span if isinstance(ev, ExhaustiveGap) else 0

    @property
    def dim_ker(self) -> int:
        return self.evidence.dim_ker


@dataclass(frozen=True)
class Unknown(Verdict):
    samples_tried: int
    dim_reached: int
    dim_required: int
    reason: str = "budget exhausted"
    kind = "Unknown"

    @property
    def dim_span(self) -> int:
        return self.dim_reached

    @property
    def dim_ker(self) -> int:
        return self.dim_required


class ZeroDivisorFound(ValueError):
    """The no-zero-divisor assumption was contradicted by a sampled pair."""

    def __init__(self, a: tuple, b: tuple, step: int):
        super().__init__(f"zero divisors at schedule step {step}: a={list(map(str, a))}, "
                         f"b={list(map(str, b))} with ab = 0")
        self.a = a
        self.b = b
        self.step = step


# ---------------------------------------------------------------------------


def pure_kernel_subspace(alg: Algebra, a: Sequence) -> Subspace:
    """``span{a ⊗ b : ab = 0}`` inside the tensor square."""
    a = alg.vector(a)
    f = alg.field
    n = alg.dim
    if not any(a):
        return span([], n * n, f)
    ker = kernel_basis(left_mult_matrix(alg, a))
    return span([tensor(a, b, f) for b in ker.basis], n * n, f)


def _slice_pairs(alg: Algebra, a: tuple) -> list[tuple]:
    ker = kernel_basis(left_mult_matrix(alg, a))
    bs = []
    for b in ker.basis:
        if any(multiply(alg, a, b)):
            raise ArithmeticError("kernel vector of L_a is not a zero-product partner")
        bs.append(b)
    return bs


def _require_field(alg: Algebra, prime: bool):
    if alg.field.is_prime_field != prime:
        want = "a prime field" if prime else "the rationals"
        raise ValueError(f"{alg.name} is over {alg.field}; this procedure needs {want}")


def _exhaust(alg: Algebra, budget: int, stop_at: int | None):
    # grows <T_mu> over all projective points; returns (accumulator, pairs, points visited)
    _require_field(alg, prime=True)
    f = alg.field
    n = alg.dim
    need = projective_count(f, n)
    if need > budget:
        raise BudgetExceeded(need, budget)
    acc = SpanAccumulator(n * n, f)
    pairs = []
    batch_pairs, batch_vecs = [], []
    visited = 0

    def flush():
        for idx in acc.add_many(batch_vecs):
            pairs.append(batch_pairs[idx])
        batch_pairs.clear()
        batch_vecs.clear()

    for a in projective_points(f, n):
        visited += 1
        for b in _slice_pairs(alg, a):
            batch_pairs.append((a, b))
            batch_vecs.append(tensor(a, b, f))
        if len(batch_vecs) >= 256:
            flush()
            if stop_at is not None and acc.dim >= stop_at:
                break
    flush()
    return acc, pairs, visited


def pure_tensor_span(alg: Algebra, budget: int = DEFAULT_MAX_ENUMERATION) -> Subspace:
    """The span of all zero-product pure tensors, by enumeration (prime fields)."""
    acc, _, _ = _exhaust(alg, budget, stop_at=ker_mu(alg).dim)
    return acc.subspace()


def decide_zpd_exhaustive(alg: Algebra, budget: int = DEFAULT_MAX_ENUMERATION) -> Verdict:
    """Exact decision over F_p by visiting every projective point."""
    dim_ker = ker_mu(alg).dim
    acc, pairs, visited = _exhaust(alg, budget, stop_at=dim_ker)
    if acc.dim > dim_ker:  # pragma: no cover - would mean an unsound slice
        raise ArithmeticError("pure tensor span exceeds the kernel")
    if acc.dim == dim_ker:
        return ProvenZPD(Certificate(alg.field, tuple(pairs)), dim_ker, visited)
    return ProvenNotZPD(ExhaustiveGap(acc.dim, dim_ker), visited)


def sampling_schedule(n: int, seed: int) -> Iterator[tuple]:
    """Sample points over Q: basis vectors, ``e_i + e_j``, ``e_i - e_j``, then random.

    Random vectors have entries in ``{-2, ..., 2}``, are nonzero, and come from
    ``random.Random(seed)``.
    """
    def unit(i):
        return tuple(int(k == i) for k in range(n))

    for i in range(n):
        yield unit(i)
    for i in range(n):
        for j in range(i + 1, n):
            yield tuple(int(k == i) + int(k == j) for k in range(n))
    for i in range(n):
        for j in range(i + 1, n):
            yield tuple(int(k == i) - int(k == j) for k in range(n))
    rng = random.Random(seed)
    while True:
        v = tuple(rng.randint(-2, 2) for _ in range(n))
        if any(v):
            yield v


def _primitive(v: Sequence[Fraction]) -> tuple:
    # scale a rational vector to coprime integers with a positive leading entry
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints) or 1
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return tuple(Fraction(x // g) for x in ints)


def saturate_zpd(alg: Algebra, budget: SaturationBudget | None = None,
                 assume_no_zero_divisors: bool = False) -> Verdict:
    """Semi-decision over Q by sampling zero-product slices.

    With ``assume_no_zero_divisors`` the sampled points are only screened for
    zero divisors; if none turn up and the kernel is nonzero the algebra is
    declared not ZPD (without zero divisors there are no nonzero pure tensors
    in the kernel).  A zero divisor found on the way raises
    :class:`ZeroDivisorFound`.
    """
    _require_field(alg, prime=False)
    budget = budget or SaturationBudget()
    f = alg.field
    n = alg.dim
    dim_ker = ker_mu(alg).dim

    if assume_no_zero_divisors:
        steps = 0
        for steps, a in enumerate(sampling_schedule(n, budget.prng_seed), 1):
            bs = _slice_pairs(alg, f.vector(a))
            if bs:
                raise ZeroDivisorFound(f.vector(a), _primitive(bs[0]), steps)
            if steps >= budget.max_samples:
                break
        if dim_ker == 0:
            return ProvenZPD(Certificate(f, ()), 0, steps)
        return ProvenNotZPD(NoZeroDivisorsAssumed(dim_ker), steps)

    acc = SpanAccumulator(n * n, f)
    pairs = []
    steps = 0
    if dim_ker == 0:
        return ProvenZPD(Certificate(f, ()), 0, 0)
    for steps, a in enumerate(sampling_schedule(n, budget.prng_seed), 1):
        a = f.vector(a)
        bs = [_primitive(b) for b in _slice_pairs(alg, a)]
        for b in bs:
            if acc.add(tensor(a, b, f)):
                pairs.append((a, b))
        if acc.dim > dim_ker:  # pragma: no cover
            raise ArithmeticError("pure tensor span exceeds the kernel")
        if acc.dim == dim_ker:
            return ProvenZPD(Certificate(f, tuple(pairs)), dim_ker, steps)
        if steps >= budget.max_samples:
            break
    return Unknown(steps, acc.dim, dim_ker)


def decide(alg: Algebra, budget: SaturationBudget | None = None,
           assume_no_zero_divisors: bool = False) -> Verdict:
    """Pick the procedure for the algebra's field."""
    budget = budget or SaturationBudget()
    if alg.field.is_prime_field:
        return decide_zpd_exhaustive(alg, budget.max_enumeration)
    return saturate_zpd(alg, budget, assume_no_zero_divisors)


# ---------------------------------------------------------------------------
# verification
#
# Deliberately avoids algebra.py: products and the multiplication matrix are
# rebuilt here from the raw structure constants.


@dataclass
class VerificationReport:
    ok: bool
    dim_span: int = 0
    dim_ker: int = 0
    failures: list = dc_field(default_factory=list)

    def __bool__(self):
        return self.ok


def _raw_product(c, f: FieldSpec, a, b) -> list:
    n = len(c)
    out = []
    for k in range(n):
        s = 0
        for i in range(n):
            if a[i]:
                for j in range(n):
                    if b[j] and c[i][j][k]:
                        s += a[i] * b[j] * c[i][j][k]
        out.append(f.reduce(s))
    return out


def verify_certificate(alg: Algebra, cert: Certificate) -> VerificationReport:
    """Independent check that ``cert`` witnesses the ZPD property.

    Passes iff every pair multiplies to zero and the pair tensors span a
    subspace of the kernel whose dimension is ``n**2 - dim A^2``.
    """
    f = alg.field
    c = alg.constants
    n = len(c)
    report = VerificationReport(ok=False)
    if cert.field != f:
        report.failures.append(f"certificate field {cert.field} != algebra field {f}")
        return report

    # multiplication matrix, one row per output coordinate
    mu = Matrix(f, [[c[i][j][k] for i in range(n) for j in range(n)] for k in range(n)], n * n)
    report.dim_ker = n * n - rank(mu)

    tensors = []
    for idx, (a, b) in enumerate(cert.pairs):
        if len(a) != n or len(b) != n:
            report.failures.append(f"pair {idx}: wrong length")
            continue
        a = [f(x) for x in a]
        b = [f(x) for x in b]
        if any(_raw_product(c, f, a, b)):
            report.failures.append(f"pair {idx}: product is nonzero")
            continue
        t = [f.reduce(x * y) for x in a for y in b]
        if any(mu.apply(t)):  # pragma: no cover - implied by the product check
            report.failures.append(f"pair {idx}: tensor not in the kernel")
            continue
        tensors.append(t)
    report.dim_span = span(tensors, n * n, f).dim
    if report.dim_span != report.dim_ker:
        report.failures.append(f"dimension gap: span {report.dim_span} < kernel {report.dim_ker}")
    report.ok = not report.failures
    return report


# ---------------------------------------------------------------------------
# randomized check of the factorization criterion


@dataclass
class PropertySuiteReport:
    is_zpd: bool
    maps_checked: int = 0
    vanishing: int = 0
    factored: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _random_matrix(f: FieldSpec, rows: int, cols: int, rng: random.Random) -> Matrix:
    return Matrix(f, [[rng.randrange(f.p) for _ in range(cols)] for _ in range(rows)], cols)


def _projection_onto_quotient(sub: Subspace) -> Matrix:
    # rows span the annihilator of sub, so the kernel is exactly sub
    f = sub.field
    N = sub.ambient_dim
    if not sub.basis:
        return Matrix.identity(f, N)
    ann = kernel_basis(sub.as_matrix())
    if not ann.basis:
        return Matrix.zeros(f, 1, N)
    return Matrix(f, ann.basis, N)


def zpd_map_property_suite(alg: Algebra, trials: int = 20, seed: int = 0,
                           budget: int = DEFAULT_MAX_ENUMERATION) -> PropertySuiteReport:
    """Exercise "vanishes on zero products => factors" on random maps (prime fields).

    Three families of maps are tried: ``psi ∘ mu`` for random ``psi``, quotient
    maps by random enlargements of the pure tensor span, and unconstrained
    random maps.  For non-ZPD algebras the quotient by the pure tensor span
    itself must vanish on zero products and still fail to factor.
    """
    _require_field(alg, prime=True)
    f = alg.field
    n = alg.dim
    N = n * n
    rng = random.Random(seed)
    tmu = pure_tensor_span(alg, budget)
    ker = ker_mu(alg)
    rep = PropertySuiteReport(is_zpd=tmu.dim == ker.dim)
    mu = mu_matrix(alg)

    def check(phi: Matrix, label: str, must_vanish: bool):
        rep.maps_checked += 1
        van = vanishes_on_zero_products(alg, phi, budget)
        res = factor_through_mu(alg, phi)
        factored = isinstance(res, FactoredMap)
        rep.vanishing += van
        rep.factored += factored
        if must_vanish and not van:
            rep.failures.append(f"{label}: expected to vanish on zero products")
        if factored and not van:
            rep.failures.append(f"{label}: factors but does not vanish on zero products")
        if rep.is_zpd and van and not factored:
            rep.failures.append(f"{label}: vanishes on zero products but does not factor")
        if isinstance(res, Counterexample):
            t = res.vector
            if any(mu.apply(t)) or not any(phi.apply(t)):
                rep.failures.append(f"{label}: bad counterexample")

    for t in range(trials):
        m = rng.randint(1, 3)
        psi = _random_matrix(f, m, n, rng)
        check(psi @ mu, f"psi∘mu #{t}", True)

        extra = [tuple(rng.randrange(f.p) for _ in range(N)) for _ in range(rng.randint(0, 2))]
        bigger = span(tmu.basis + tuple(extra), N, f)
        check(_projection_onto_quotient(bigger), f"quotient #{t}", True)

        check(_random_matrix(f, rng.randint(1, 3), N, rng), f"random #{t}", False)

    if not rep.is_zpd:
        pi = _projection_onto_quotient(tmu)
        rep.maps_checked += 1
        if not vanishes_on_zero_products(alg, pi, budget):
            rep.failures.append("canonical projection does not vanish on zero products")
        res = factor_through_mu(alg, pi)
        if not isinstance(res, Counterexample):
            rep.failures.append("canonical projection factors through mu")
        elif any(mu.apply(res.vector)) or not any(pi.apply(res.vector)):
            rep.failures.append("canonical projection: bad counterexample")
    return rep


def canonical_projection(alg: Algebra, budget: int = DEFAULT_MAX_ENUMERATION) -> BilinearMap:
    """Quotient map of the tensor square by the pure tensor span (prime fields)."""
    return BilinearMap(_projection_onto_quotient(pure_tensor_span(alg, budget)))

