"""Valuation-theoretic linear algebra on finite-rank divisible subgroups.

Provides valuation independence testing, valuation-basis extraction by
leading-coefficient elimination, the term-sign decision through archimedean
component reals, and pseudo-Cauchy sequence machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import OracleFailure, TruncationInsufficient
from .scalars import (
    rational_relations,
    scalar_add,
    scalar_inv,
    scalar_mul,
    scalar_sign,
)
from .series import (
    INFINITY,
    Series,
    add,
    compare_series,
    negate,
    restrict_exponents,
    scale,
    subtract,
    valuation,
    zero_series,
)


@dataclass(frozen=True)
class SpanBasis:
    """A valuation-independent generating set in ascending element order.

    `component_reals[i]` is arch_ratio(generators[i], class rep of its
    valuation class); `class_reps` holds one representative per archimedean
    class, ascending; `change_of_basis[i]` expresses input i over the
    generators.
    """

    generators: tuple
    component_reals: tuple
    class_reps: tuple
    change_of_basis: tuple

    def __len__(self):
        return len(self.generators)


def _leading_coeffs(gs: Sequence[Series]):
    return [g.terms[valuation(g)] for g in gs]


def _classes_by_valuation(gs: Sequence[Series]) -> dict:
    out: dict = {}
    for i, g in enumerate(gs):
        out.setdefault(valuation(g), []).append(i)
    return out


def is_valuation_independent(gs: Sequence[Series]) -> bool:
    """True iff v(sum q_i g_i) = min{v(g_i) : q_i != 0} for all rational q̄,
    decided per valuation class through leading-coefficient independence."""
    for g in gs:
        if g.is_zero():
            raise ValueError("generators must be nonzero")
    for _, idxs in _classes_by_valuation(gs).items():
        leads = _leading_coeffs([gs[i] for i in idxs])
        if rational_relations(leads):
            return False
    return True


def _linear_combination(coeffs: Sequence[Fraction], gs: Sequence[Series], dim: int) -> Series:
    out = zero_series(dim)
    for q, g in zip(coeffs, gs):
        if q:
            out = add(out, scale(g, q))
    return out


def _rational_coordinates(c, leads):
    """Rationals q with sum q_j * leads[j] = c, or None when c is outside
    the Q-span of the (independent) leading coefficients."""
    rels = rational_relations([c] + list(leads))
    for vec in rels:
        if vec[0]:
            return [-q / vec[0] for q in vec[1:]]
    return None


def valuation_basis(gs: Sequence[Series]) -> SpanBasis:
    """Extract a valuation basis of the Q-span of `gs` by elimination.

    Within each common-valuation class, leading-coefficient relations are
    eliminated (the combination's valuation strictly increases, inside the
    finite union of input supports, so this terminates); the result is
    back-reduced to canonical form, leading-normalized, and sorted ascending
    as group elements.
    """
    for g in gs:
        if g.is_zero():
            raise ValueError("generators must be nonzero")
    if not gs:
        return SpanBasis((), (), (), ())
    dim = gs[0].dim
    work = list(gs)
    while True:
        work = [g for g in work if not g.is_zero()]
        classes = _classes_by_valuation(work)
        reduced = False
        for _, idxs in sorted(classes.items()):
            leads = _leading_coeffs([work[i] for i in idxs])
            rels = rational_relations(leads)
            if not rels:
                continue
            vec = rels[0]
            pivot_local = max(j for j, q in enumerate(vec) if q)
            replacement = _linear_combination(vec, [work[i] for i in idxs], dim)
            work[idxs[pivot_local]] = replacement
            reduced = True
            break
        if not reduced:
            break
    # back-reduce each element at the other classes' valuations, ascending
    work.sort(key=valuation)
    for i in range(len(work)):
        exps_done = set()
        while True:
            classes = _classes_by_valuation(work)
            g = work[i]
            candidates = sorted(
                e for e in g.terms
                if e > valuation(g) and e in classes and e not in exps_done
            )
            if not candidates:
                break
            e = candidates[0]
            exps_done.add(e)
            others = [j for j in classes[e] if j != i]
            if not others:
                continue
            leads = _leading_coeffs([work[j] for j in others])
            coords = _rational_coordinates(g.terms[e], leads)
            if coords is None:
                continue
            for q, j in zip(coords, others):
                if q:
                    g = subtract(g, scale(work[j], q))
            work[i] = g
    for i, g in enumerate(work):
        if scalar_sign(g.terms[valuation(g)]) < 0:
            work[i] = negate(g)
    # ascending as positive group elements: higher valuation first, then
    # element order inside each class
    basis = sorted(work, key=valuation, reverse=True)
    i = 0
    while i < len(basis):
        j = i
        while j + 1 < len(basis) and valuation(basis[j + 1]) == valuation(basis[i]):
            j += 1
        if j > i:
            chunk = basis[i:j + 1]
            chunk.sort(key=_AsElement)
            basis[i:j + 1] = chunk
        i = j + 1
    class_reps = []
    rep_by_val = {}
    for g in basis:
        v = valuation(g)
        if v not in rep_by_val:
            rep_by_val[v] = g
            class_reps.append(g)
    component_reals = tuple(
        scalar_mul(g.terms[valuation(g)],
                   scalar_inv(rep_by_val[valuation(g)].terms[valuation(g)]))
        for g in basis
    )
    change = tuple(tuple(represent(g, basis)) for g in gs)
    return SpanBasis(tuple(basis), component_reals, tuple(class_reps), change)


class _AsElement:
    """Sort key wrapper ordering series as group elements."""

    def __init__(self, s: Series):
        self.s = s

    def __lt__(self, other):
        return compare_series(self.s, other.s) < 0


def represent(x: Series, basis: Sequence[Series]) -> list[Fraction]:
    """Coordinates of x over a valuation-independent basis (exact)."""
    coords = [Fraction(0)] * len(basis)
    residual = x
    classes = _classes_by_valuation(basis)
    while not residual.is_zero():
        v = valuation(residual)
        idxs = classes.get(v)
        if idxs is None:
            raise OracleFailure("element lies outside the basis span")
        leads = _leading_coeffs([basis[j] for j in idxs])
        sol = _rational_coordinates(residual.terms[v], leads)
        if sol is None:
            raise OracleFailure("element lies outside the basis span")
        for q, j in zip(sol, idxs):
            if q:
                coords[j] += q
                residual = subtract(residual, scale(basis[j], q))
    return coords


def term_sign(s: Sequence[Fraction], basis: SpanBasis) -> int:
    """Sign of sum s_i * g_i decided from component reals alone: restrict to
    the minimal-valuation class among the nonzero coefficients and take the
    sign of sum s_i * r_i there."""
    if len(s) != len(basis.generators):
        raise ValueError("coefficient vector length does not match basis size")
    nonzero = [i for i, q in enumerate(s) if q]
    if not nonzero:
        return 0
    vmin = min(valuation(basis.generators[i]) for i in nonzero)
    acc = Fraction(0)
    for i in nonzero:
        if valuation(basis.generators[i]) == vmin:
            acc = scalar_add(acc, scalar_mul(basis.component_reals[i], Fraction(s[i])))
    return scalar_sign(acc)


# ---------------------------------------------------------------------------
# pseudo-Cauchy sequences


@dataclass(frozen=True)
class PseudoSequence:
    """A sequence handle: explicit finite prefix, or generator with budget."""

    items: Optional[tuple] = None
    generator: Optional[Callable[[int], Series]] = None
    budget: Optional[int] = None

    @classmethod
    def explicit(cls, items: Sequence[Series]) -> "PseudoSequence":
        return cls(items=tuple(items))

    @classmethod
    def generated(cls, fn: Callable[[int], Series], budget: int) -> "PseudoSequence":
        return cls(generator=fn, budget=budget)

    def materialize(self, k: int) -> list[Series]:
        if self.items is not None:
            if k > len(self.items):
                raise ValueError(
                    f"explicit sequence has {len(self.items)} elements, need {k}"
                )
            return list(self.items[:k])
        if k > self.budget:
            raise TruncationInsufficient(
                f"sequence budget {self.budget} exceeded (need {k} elements)"
            )
        return [self.generator(i) for i in range(k)]


def check_pseudo_cauchy(seq: PseudoSequence, k: int) -> bool:
    """True iff successive-difference valuations strictly increase on the
    length-k prefix (k >= 3)."""
    if k < 3:
        raise ValueError("pseudo-Cauchy check needs k >= 3")
    elems = seq.materialize(k)
    prev = None
    for i in range(k - 1):
        d = subtract(elems[i + 1], elems[i])
        v = valuation(d)
        if v is INFINITY:
            return False
        if prev is not None and not prev < v:
            return False
        prev = v
    return True


def pseudo_limit(seq: PseudoSequence, k: int) -> Series:
    """An exact pseudo limit of the length-k prefix: the last element
    restricted to exponents at most v(a_{k-1} - a_{k-2}).

    Then v(x - a_i) = v(a_{i+1} - a_i) for every i < k-1: for i < k-2 the
    discarded tail sits strictly above v(a_{k-1} - a_{i+1}) > v(a_{i+1} -
    a_i), and at i = k-2 the restriction leaves exactly the leading term of
    the last difference.
    """
    if not check_pseudo_cauchy(seq, k):
        raise ValueError("prefix is not pseudo-Cauchy")
    elems = seq.materialize(k)
    gamma = valuation(subtract(elems[k - 1], elems[k - 2]))
    return restrict_exponents(elems[k - 1], gamma, inclusive=True)
