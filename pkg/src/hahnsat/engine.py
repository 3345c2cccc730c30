"""Cut classification and type realization over the finite-support model.

A cut is presented only through a CutOracle (side queries against a hidden
element, plus a height-graded enumeration of comparison elements).  The
engine maximizes the valuation of (hidden - d0) over examined candidates,
resolves rational digits level by level, and classifies the cut as realized,
residue-transcendental (irrational leading coefficient), value-transcendental
(valuation falls in a gap of the observed value set), or immediate
(the approximation keeps improving through the final height generation).
All conclusions are budget-relative and reported as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import (
    BudgetExhausted,
    NonlinearUnsupported,
    NotFinitelySatisfiable,
    OracleFailure,
    PseudoLimitUnverified,
    Unsatisfiable,
)
from .formulas import (
    And,
    Atom,
    Not,
    PartialType,
    Signature,
    _atom_linear_parts,
    _has_quantifier,
    _nnf,
    _term_series,
    cut_bounds,
    doag_qe,
    enumerate_formulas,
    eval_formula,
    format_formula,
    free_symbols,
    iter_atoms,
    iter_worlds,
    satisfiable,
)
from .scalars import (
    OracleReal,
    RealAlgebraic,
    Rational,
    format_scalar,
    rational_height,
    real_algebraic,
    simplest_between,
)
from .series import (
    INFINITY,
    Series,
    add,
    compare_series,
    format_series,
    make_exp,
    monomial,
    negate,
    scale,
    subtract,
    valuation,
    zero_series,
)
from .trees import TreeOracle, find_path_bounded
from .valbasis import (
    PseudoSequence,
    SpanBasis,
    check_pseudo_cauchy,
    pseudo_limit,
    valuation_basis,
)


class Side(Enum):
    BELOW = -1
    EQUAL = 0
    ABOVE = 1


@dataclass(frozen=True)
class Budgets:
    height_budget: int = 4
    exponent_denominator_budget: int = 2
    formula_prefix_budget: int = 48
    precision_budget: int = 16

    def __post_init__(self):
        for name in ("height_budget", "exponent_denominator_budget",
                     "formula_prefix_budget", "precision_budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


class CutOracle:
    """side: element -> Side, queried against a hidden cut; height_enum:
    generation -> new comparison elements.  The wrapper memoizes, logs every
    query in order, and enforces that at most one element tests EQUAL."""

    def __init__(self, side: Callable[[Series], Side],
                 height_enum: Callable[[int], Iterable[Series]]):
        self._side = side
        self.height_enum = height_enum
        self._memo: dict = {}
        self.log: list = []
        self._equal_key = None

    def side(self, d: Series) -> Side:
        key = d
        if key in self._memo:
            return self._memo[key]
        s = self._side(d)
        if not isinstance(s, Side):
            raise OracleFailure(f"oracle returned {s!r}, not a Side")
        if s == Side.EQUAL:
            if self._equal_key is not None and self._equal_key != key:
                raise OracleFailure("oracle reported two distinct EQUAL elements")
            self._equal_key = key
        self._memo[key] = s
        self.log.append((d, s))
        return s

    def check_monotone(self) -> bool:
        """Spot-check the monotonicity invariant over the query log."""
        for i, (d, s) in enumerate(self.log):
            for d2, s2 in self.log[i + 1:]:
                c = compare_series(d, d2)
                if c <= 0 and s == Side.ABOVE and s2 == Side.BELOW:
                    return False
                if c >= 0 and s == Side.BELOW and s2 == Side.ABOVE:
                    return False
        return True


def oracle_from_value(x0: Series,
                      height_enum: Callable[[int], Iterable[Series]]) -> CutOracle:
    """Test helper: the cut of a concrete hidden element."""

    def side(d: Series) -> Side:
        c = compare_series(d, x0)
        return Side.BELOW if c < 0 else Side.ABOVE if c > 0 else Side.EQUAL

    return CutOracle(side, height_enum)


def _rationals_of_height(h: int):
    """All p/q with max(|p|, q) <= h, in a deterministic order."""
    out = set()
    for den in range(1, h + 1):
        for num in range(-h, h + 1):
            q = Fraction(num, den)
            if rational_height(q) <= h:
                out.add(q)
    return sorted(out)


def standard_height_enum(generators: Sequence[Series],
                         paced: Sequence[Sequence[Series]] = ()) -> Callable:
    """Enumerate the rational-linear span of the generators by ascending
    coefficient height, releasing one paced batch per generation."""
    gens = list(generators)
    paced = [list(group) for group in paced]
    seen: set = set()

    def enum(h: int):
        batch = []
        if h - 1 < len(paced):
            batch.extend(paced[h - 1])
        coeffs = _rationals_of_height(h)
        for vec in _coeff_vectors(coeffs, len(gens), h):
            e = zero_series(gens[0].dim) if gens else None
            for q, g in zip(vec, gens):
                if q:
                    e = add(e, scale(g, q))
            if e is not None:
                batch.append(e)
        out = []
        for e in batch:
            if e not in seen and not e.is_zero():
                seen.add(e)
                out.append(e)
        return out

    return enum


def _coeff_vectors(coeffs, n, h):
    """Coefficient vectors over `coeffs` whose maximal height is exactly h."""
    if n == 0:
        return
    vecs = [()]
    for _ in range(n):
        vecs = [v + (q,) for v in vecs for q in coeffs]
    for v in vecs:
        if any(q != 0 for q in v) and max(rational_height(q) for q in v) == h:
            yield v


# ---------------------------------------------------------------------------
# classification result types


@dataclass(frozen=True)
class Realized:
    element: Series


@dataclass(frozen=True)
class ResidueTranscendental:
    d0: Series
    scale: Series
    residue: object  # RealAlgebraic or OracleReal
    level: tuple


@dataclass(frozen=True)
class GroupTranscendental:
    d0: Series
    lower: Optional[tuple]  # v(hidden - d0) strictly above this level
    upper: Optional[tuple]  # and strictly below this one
    direction: int


@dataclass(frozen=True)
class ImmediateTranscendental:
    chain: tuple  # successive adopted approximations, ascending
    enum_prefix: tuple  # enumerated comparison elements, in arrival order


CutClassification = object


# ---------------------------------------------------------------------------
# grids and exponent arithmetic


def _exp_mid(a: tuple, b: tuple) -> tuple:
    return tuple((x + y) / 2 for x, y in zip(a, b))


def _exp_lt(a: tuple, b: tuple) -> bool:
    return tuple(a) < tuple(b)


def _group_grid(basis: SpanBasis) -> list:
    return sorted({valuation(rep) for rep in basis.class_reps})


def _field_grid(basis: SpanBasis, denom_budget: int, dim: int) -> list:
    """Rational multiples p/q of the parameter valuations, q and |p| up to
    the denominator budget, combined additively across classes."""
    base = sorted({valuation(rep) for rep in basis.class_reps})
    ratios = [Fraction(p, q) for q in range(1, denom_budget + 1)
              for p in range(-denom_budget, denom_budget + 1)]
    grid = {tuple([Fraction(0)] * dim)}
    for gamma in base:
        extended = set()
        for r in ratios:
            scaled_g = tuple(c * r for c in gamma)
            for g0 in grid:
                extended.add(tuple(a + b for a, b in zip(g0, scaled_g)))
        grid |= extended
    return sorted(grid)


def _exp_monomial(gamma: tuple, dim: int) -> Series:
    return monomial(make_exp(gamma, dim), Fraction(1), dim)


def _class_rep_for(basis: SpanBasis, gamma: tuple) -> Optional[Series]:
    for rep in basis.class_reps:
        if valuation(rep) == gamma:
            return rep
    return None


# ---------------------------------------------------------------------------
# canonical gap center


def _first_floor(gamma: tuple) -> int:
    return math.floor(gamma[0])


def gap_center(lower: Optional[Series], upper: Optional[Series],
               dim: int) -> Series:
    """Deterministic representative of the open interval (lower, upper)."""
    if lower is None and upper is None:
        return zero_series(dim)
    if lower is None:
        if compare_series(upper, zero_series(dim)) > 0:
            return zero_series(dim)
        vu = valuation(upper)
        return subtract(upper, _exp_monomial((_first_floor(vu) - 1,), dim))
    if upper is None:
        if compare_series(lower, zero_series(dim)) < 0:
            return zero_series(dim)
        vl = valuation(lower)
        return add(lower, _exp_monomial((_first_floor(vl) - 1,), dim))
    sl = compare_series(lower, zero_series(dim))
    su = compare_series(upper, zero_series(dim))
    if sl < 0 < su:
        return zero_series(dim)
    if sl == 0:
        vu = valuation(upper)
        return _exp_monomial((_first_floor(vu) + 1,), dim)
    if su == 0:
        vl = valuation(lower)
        return negate(_exp_monomial((_first_floor(vl) + 1,), dim))
    vl, vu = valuation(lower), valuation(upper)
    if vl == vu:
        return scale(add(lower, upper), Fraction(1, 2))
    gamma = _exp_mid(vl, vu)
    mono = _exp_monomial(gamma, dim)
    return mono if su > 0 else negate(mono)


# ---------------------------------------------------------------------------
# cut classification


class _ResolveOutcome(Enum):
    REALIZED = "realized"
    DIGIT = "digit"
    FILL_ZERO = "fill-zero"
    UNBOUNDED = "unbounded"
    RESIDUE = "residue"


_ALG_HEIGHT_CAP = 20
_SAME_LEVEL_DIGIT_CAP = 4


def _algebraic_candidates(lo: Fraction, hi: Fraction, height_cap: int):
    """Roots of integer polynomials (degree 2-3, coefficient height
    ascending) inside the open interval, by (height, degree, coeff order)."""
    from .scalars import isolate_real_roots

    for height in range(1, height_cap + 1):
        for degree in (2, 3):
            span = range(-height, height + 1)
            for coeffs in _int_tuples(span, degree + 1):
                if coeffs[-1] == 0:
                    continue
                if max(abs(c) for c in coeffs) != height:
                    continue
                if _no_sign_change(coeffs, lo, hi):
                    continue
                for cell_lo, cell_hi in isolate_real_roots(list(coeffs)):
                    root = real_algebraic(list(coeffs), cell_lo, cell_hi)
                    if isinstance(root, Fraction):
                        continue  # rational roots belong to the rational lane
                    if _inside_after_refining(root, lo, hi):
                        yield height, root
                        break


def _inside_after_refining(root, lo: Fraction, hi: Fraction,
                           rounds: int = 12) -> bool:
    ra, rb = root.interval()
    for _ in range(rounds):
        if lo < ra and rb < hi:
            return True
        if rb <= lo or ra >= hi:
            return False
        root.refine((rb - ra) / 4)
        ra, rb = root.interval()
    return False


def _int_tuples(span, n):
    vecs = [()]
    for _ in range(n):
        vecs = [v + (c,) for v in vecs for c in span]
    return vecs


def _no_sign_change(coeffs, lo, hi):
    def ev(x):
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    a, b = ev(lo), ev(hi)
    return a * b > 0


def _resolve_level(oracle: CutOracle, d0: Series, u: Series, direction: int,
                   budgets: Budgets):
    """Place the hidden element against d0 + q*u for rational q, at one
    valuation level.  Returns (outcome, payload)."""
    pb = budgets.precision_budget

    def probe(q: Fraction) -> Side:
        return oracle.side(add(d0, scale(u, q)) if q else d0)

    # exponential scan in the working direction until the side flips
    hi_q = None
    for j in range(pb + 1):
        q = Fraction(direction * 2 ** j)
        s = probe(q)
        if s == Side.EQUAL:
            return _ResolveOutcome.REALIZED, add(d0, scale(u, q))
        expected = Side.BELOW if direction > 0 else Side.ABOVE
        if s != expected:
            hi_q = q
            break
    if hi_q is None:
        return _ResolveOutcome.UNBOUNDED, None
    lo_q = Fraction(0) if abs(hi_q) == 1 else hi_q / 2
    # orient as a real interval: below-side endpoint first
    lo, hi = (lo_q, hi_q) if direction > 0 else (hi_q, lo_q)
    # bisect to the precision budget
    while hi - lo > Fraction(1, 2 ** pb):
        mid = (lo + hi) / 2
        s = probe(mid)
        if s == Side.EQUAL:
            return _ResolveOutcome.REALIZED, add(d0, scale(u, mid))
        if s == Side.BELOW:
            lo = mid
        else:
            hi = mid
    for _ in range(3):
        q_star, kind = _pick_candidate(lo, hi)
        if kind != "algebraic":
            if q_star == 0:
                return _ResolveOutcome.FILL_ZERO, None
            s = probe(q_star)
            if s == Side.EQUAL:
                return _ResolveOutcome.REALIZED, add(d0, scale(u, q_star))
            return _ResolveOutcome.DIGIT, q_star
        rho = q_star
        ra, rb = rho.interval()
        while rb - ra > (hi - lo) / 4:
            rho.refine((rb - ra) / 4)
            ra, rb = rho.interval()
        s_lo, s_hi = probe(ra), probe(rb)
        if s_lo == Side.EQUAL:
            return _ResolveOutcome.REALIZED, add(d0, scale(u, ra))
        if s_hi == Side.EQUAL:
            return _ResolveOutcome.REALIZED, add(d0, scale(u, rb))
        if s_lo == Side.BELOW and s_hi == Side.ABOVE:
            return _ResolveOutcome.RESIDUE, rho
        # flanks disagree with the candidate: narrow and retry
        if s_lo == Side.ABOVE:
            hi = ra
        elif s_hi == Side.BELOW:
            lo = rb
    # no algebraic candidate survived: present the residue as an oracle real
    residual = _bisection_oracle(probe, lo, hi)
    return _ResolveOutcome.RESIDUE, residual


def _pick_candidate(lo: Fraction, hi: Fraction):
    """Minimal-height value in [lo, hi]: endpoints, then the simplest
    rational strictly inside, then small algebraic irrationals."""
    candidates = [(rational_height(lo), 0, lo, "endpoint")]
    candidates.append((rational_height(hi), 1, hi, "endpoint"))
    sb = simplest_between(lo, hi)
    if sb is not None and lo < sb < hi:
        candidates.append((rational_height(sb), 2, sb, "rational"))
    best_rational = min(c[0] for c in candidates)
    for height, root in _algebraic_candidates(lo, hi,
                                              min(_ALG_HEIGHT_CAP,
                                                  best_rational - 1)):
        candidates.append((height, 3, root, "algebraic"))
        break
    candidates.sort(key=lambda c: (c[0], c[1]))
    _, _, value, kind = candidates[0]
    return value, kind


def _bisection_oracle(probe, lo: Fraction, hi: Fraction) -> OracleReal:
    state = {"lo": lo, "hi": hi}

    def approx(n: int):
        while state["hi"] - state["lo"] > Fraction(1, 2 ** n):
            mid = (state["lo"] + state["hi"]) / 2
            s = probe(mid)
            if s == Side.BELOW:
                state["lo"] = mid
            elif s == Side.ABOVE:
                state["hi"] = mid
            else:
                state["lo"] = state["hi"] = mid
        return state["lo"], state["hi"]

    return OracleReal(approx, name="residue")


@dataclass
class _ClassifyState:
    d0: Series
    direction: int
    achieved: Optional[tuple] = None
    achieved_strict: bool = False
    window_hi: Optional[tuple] = None  # strict upper bound on the level
    chain: list = field(default_factory=list)
    improved: bool = False
    generations_used: int = 0

    def note_improvement(self):
        self.improved = True


def classify_cut(oracle: CutOracle, basis: SpanBasis, budgets: Budgets,
                 mode: str = "group") -> CutClassification:
    if mode not in ("group", "field"):
        raise ValueError("mode must be 'group' or 'field'")
    dim = basis.generators[0].dim
    zero = zero_series(dim)
    s0 = oracle.side(zero)
    if s0 == Side.EQUAL:
        return Realized(zero)
    state = _ClassifyState(d0=zero, direction=1 if s0 == Side.BELOW else -1,
                           chain=[zero])
    grid = (_group_grid(basis) if mode == "group"
            else _field_grid(basis, budgets.exponent_denominator_budget, dim))
    grid = [tuple(make_exp(g, dim)) for g in grid]
    known: list = []
    known_set: set = set()

    for h in range(1, budgets.height_budget + 1):
        state.improved = False
        state.generations_used = h
        for e in oracle.height_enum(h):
            if e in known_set:
                continue
            known_set.add(e)
            s = oracle.side(e)
            if s == Side.EQUAL:
                return Realized(e)
            known.append(e)
        _adopt_from_enum(oracle, state, known, budgets)
        result = _scan_levels(oracle, state, basis, grid, mode, budgets)
        if result is not None:
            return result
        if not state.improved:
            return _stable_conclusion(state, grid, mode, dim, oracle)
    if mode == "field":
        if len(state.chain) < 2:
            raise BudgetExhausted(
                "no approximation chain found within the height budget",
                stage="classify")
        _field_rank_guard(state, basis, dim)
        return ImmediateTranscendental(tuple(state.chain), tuple(known))
    raise BudgetExhausted(
        "cut still improving at the height budget (group mode)",
        stage="classify")


def _effective_side(direction: int) -> Side:
    return Side.BELOW if direction > 0 else Side.ABOVE


def _adopt_from_enum(oracle: CutOracle, state: _ClassifyState, known: list,
                     budgets: Budgets):
    """Adopt enumerated elements strictly beyond d0 on its own side whose
    difference valuation improves the achieved level, certified by a
    coefficient-scaled straddle probe."""
    big = Fraction(2 ** budgets.precision_budget)
    while True:
        candidates = []
        mine = _effective_side(state.direction)
        for e in known:
            s = oracle.side(e)
            if s != mine:
                continue
            diff = subtract(e, state.d0)
            if diff.is_zero():
                continue
            if compare_series(e, state.d0) * state.direction <= 0:
                continue
            gamma = tuple(valuation(diff))
            if state.achieved is not None and not _exp_lt(state.achieved,
                                                          gamma):
                continue
            candidates.append((gamma, format_series(e), e))
        if not candidates:
            return
        candidates.sort(key=lambda c: (c[0], c[1]))
        adopted = False
        for gamma, _, e in candidates:
            probe_unit = _exp_monomial(gamma, e.dim)
            lo = oracle.side(subtract(e, scale(probe_unit, big)))
            if lo == Side.EQUAL:
                return
            hi = oracle.side(add(e, scale(probe_unit, big)))
            if hi == Side.EQUAL:
                return
            if lo == Side.BELOW and hi == Side.ABOVE:
                state.d0 = e
                state.direction = 1 if oracle.side(e) == Side.BELOW else -1
                state.achieved = gamma
                state.achieved_strict = False
                state.window_hi = None
                state.chain.append(e)
                state.note_improvement()
                adopted = True
                break
        if not adopted:
            return


def _observed_bounds(oracle: CutOracle, state: _ClassifyState):
    """(gamma_lo, gamma_hi) from the query log relative to the current d0:
    opposite-side elements bound the level from below, same-side elements
    strictly beyond d0 bound it from above."""
    mine = _effective_side(state.direction)
    gamma_lo = None
    gamma_hi = None
    for e, s in list(oracle.log):
        diff = subtract(e, state.d0)
        if diff.is_zero():
            continue
        gamma = tuple(valuation(diff))
        if s == mine:
            if compare_series(e, state.d0) * state.direction > 0:
                if gamma_hi is None or _exp_lt(gamma, gamma_hi):
                    gamma_hi = gamma
        elif s != Side.EQUAL:
            if gamma_lo is None or _exp_lt(gamma_lo, gamma):
                gamma_lo = gamma
    return gamma_lo, gamma_hi


def _scan_levels(oracle: CutOracle, state: _ClassifyState, basis: SpanBasis,
                 grid: list, mode: str, budgets: Budgets):
    """Resolve digits at candidate valuation levels, ascending.  Returns a
    final classification when one is forced, else None."""
    while True:
        gamma_lo, gamma_hi = _observed_bounds(oracle, state)
        if state.window_hi is not None and (
                gamma_hi is None or _exp_lt(state.window_hi, gamma_hi)):
            gamma_hi = state.window_hi
        levels = set(grid)
        for e, _ in list(oracle.log):
            diff = subtract(e, state.d0)
            if not diff.is_zero():
                levels.add(tuple(valuation(diff)))
        if gamma_lo is not None:
            levels.add(gamma_lo)
        chosen = None
        for gamma in sorted(levels):
            if state.achieved is not None:
                if state.achieved_strict:
                    if not _exp_lt(state.achieved, gamma):
                        continue
                elif _exp_lt(gamma, state.achieved):
                    continue
            if gamma_lo is not None and _exp_lt(gamma, gamma_lo):
                continue
            if gamma_hi is not None and _exp_lt(gamma_hi, gamma):
                continue
            if state.window_hi is not None and not _exp_lt(gamma,
                                                           state.window_hi):
                continue
            chosen = gamma
            break
        if chosen is None:
            return None
        scale_u = _level_scale(basis, chosen, mode, state.d0.dim)
        if scale_u is None:
            return None
        outcome = _resolve_with_digits(oracle, state, scale_u, chosen,
                                       budgets)
        if outcome is not None:
            return outcome


def _level_scale(basis: SpanBasis, gamma: tuple, mode: str,
                 dim: int) -> Optional[Series]:
    if mode == "group":
        rep = _class_rep_for(basis, make_exp(gamma, dim))
        return rep
    return _exp_monomial(gamma, dim)


def _resolve_with_digits(oracle: CutOracle, state: _ClassifyState,
                         u: Series, gamma: tuple, budgets: Budgets):
    """Drive one valuation level to a conclusion, installing rational digits
    as they appear.  Returns a classification to surface, or None to let the
    level scan continue."""
    for _ in range(_SAME_LEVEL_DIGIT_CAP):
        outcome, payload = _resolve_level(oracle, state.d0, u,
                                          state.direction, budgets)
        if outcome == _ResolveOutcome.REALIZED:
            return Realized(payload)
        if outcome == _ResolveOutcome.UNBOUNDED:
            new_hi = tuple(gamma)
            if state.window_hi is None or _exp_lt(new_hi, state.window_hi):
                state.window_hi = new_hi
                state.note_improvement()
            return None
        if outcome == _ResolveOutcome.FILL_ZERO:
            if state.achieved is None or _exp_lt(state.achieved, gamma) or \
                    not state.achieved_strict:
                state.achieved = tuple(gamma)
                state.achieved_strict = True
                state.note_improvement()
            return None
        if outcome == _ResolveOutcome.RESIDUE:
            return ResidueTranscendental(state.d0, u, payload, tuple(gamma))
        # a rational digit: adopt and re-resolve the same level
        q = payload
        state.d0 = add(state.d0, scale(u, q))
        side_now = oracle.side(state.d0)
        if side_now == Side.EQUAL:
            return Realized(state.d0)
        state.direction = 1 if side_now == Side.BELOW else -1
        state.achieved = tuple(gamma)
        state.achieved_strict = False
        state.window_hi = None
        state.chain.append(state.d0)
        state.note_improvement()
    raise BudgetExhausted(
        f"more than {_SAME_LEVEL_DIGIT_CAP} digits at level {gamma}",
        stage="resolve")


def _stable_conclusion(state: _ClassifyState, grid: list, mode: str,
                       dim: int, oracle: CutOracle):
    lower = state.achieved
    upper = state.window_hi
    _, gamma_hi = _observed_bounds(oracle, state)
    if gamma_hi is not None and (upper is None or _exp_lt(gamma_hi, upper)):
        upper = gamma_hi  # an unadopted same-side element caps the gap
    if lower is not None and upper is not None:
        if _exp_lt(upper, lower):
            raise OracleFailure("inconsistent level window")
        if not _exp_lt(lower, upper):
            raise BudgetExhausted(
                "stable cut pinched at the achieved level", stage="classify")
    for gamma in grid:
        if lower is not None:
            if state.achieved_strict:
                if not _exp_lt(lower, gamma):
                    continue
            elif _exp_lt(gamma, lower):
                continue
        if upper is not None and not _exp_lt(gamma, upper):
            continue
        raise BudgetExhausted(
            f"stable cut with unresolved grid level {gamma}",
            stage="classify")
    return GroupTranscendental(state.d0, lower, upper, state.direction)


def _field_rank_guard(state: _ClassifyState, basis: SpanBasis, dim: int):
    """Rank of the observed difference valuations must not exceed the
    parameter count (transcendence-degree tripwire)."""
    vectors = []
    for a, b in zip(state.chain, state.chain[1:]):
        diff = subtract(b, a)
        if not diff.is_zero():
            vectors.append(list(make_exp(valuation(diff), dim)))
    rank = _rational_rank(vectors)
    if rank > len(basis.generators):
        raise OracleFailure(
            f"observed value rank {rank} exceeds parameter count "
            f"{len(basis.generators)}")


def _rational_rank(vectors: list) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    pivot_row = 0
    for col in range(cols):
        pivot = None
        for r in range(pivot_row, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        pv = rows[pivot_row][col]
        rows[pivot_row] = [c / pv for c in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r],
                                                     rows[pivot_row])]
        pivot_row += 1
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# realization


def _verify_against_log(witness: Series, oracle: CutOracle):
    """Every logged query must sit on the same side of the witness that the
    oracle reported for the hidden element."""
    for d, s in oracle.log:
        c = compare_series(d, witness)
        if s == Side.BELOW and c >= 0:
            raise OracleFailure(
                f"witness contradicts BELOW query {format_series(d)}")
        if s == Side.ABOVE and c <= 0:
            raise OracleFailure(
                f"witness contradicts ABOVE query {format_series(d)}")
        if s == Side.EQUAL and c != 0:
            raise OracleFailure(
                f"witness contradicts EQUAL query {format_series(d)}")


def _gap_exponent(lower: Optional[tuple], upper: Optional[tuple]) -> tuple:
    if lower is not None and upper is not None:
        return _exp_mid(lower, upper)
    if upper is None and lower is None:
        return (Fraction(0),)
    if upper is None:
        return (Fraction(_first_floor(lower) + 1),)
    return (Fraction(_first_floor(upper) - 1),)


def realize_cut_group(cls: CutClassification, oracle: CutOracle,
                      basis: SpanBasis, budgets: Budgets) -> Series:
    dim = basis.generators[0].dim
    if isinstance(cls, Realized):
        return cls.element
    if isinstance(cls, ResidueTranscendental):
        _require_exact_residue(cls)
        witness = add(cls.d0, scale(cls.scale, cls.residue))
        _verify_against_log(witness, oracle)
        return witness
    if isinstance(cls, GroupTranscendental):
        gamma = _gap_exponent(cls.lower, cls.upper)
        mono = _exp_monomial(gamma, dim)
        witness = add(cls.d0, mono if cls.direction > 0 else negate(mono))
        _verify_against_log(witness, oracle)
        return witness
    raise ValueError(
        "group cuts have finite rank: no immediate-transcendental case")


def realize_cut_field(cls: CutClassification, oracle: CutOracle,
                      basis: SpanBasis, budgets: Budgets) -> Series:
    dim = basis.generators[0].dim
    if isinstance(cls, Realized):
        return cls.element
    if isinstance(cls, GroupTranscendental):
        return realize_cut_group(cls, oracle, basis, budgets)
    if isinstance(cls, ResidueTranscendental):
        return _realize_residue_field(cls, oracle, basis, budgets)
    if isinstance(cls, ImmediateTranscendental):
        return _realize_immediate(cls, oracle, basis, budgets)
    raise TypeError(f"unknown classification {type(cls).__name__}")


def _require_exact_residue(cls: ResidueTranscendental) -> None:
    """Realization installs the residue as a series coefficient, so it must
    be an exact scalar; a bisection approximation cannot be compared exactly
    and only says the candidate rounds ran out."""
    if isinstance(cls.residue, OracleReal):
        raise BudgetExhausted(
            "residue was not certified within the candidate rounds; "
            "raise the candidate budget to pin it to an exact scalar",
            stage="realize")


def _realize_residue_field(cls: ResidueTranscendental, oracle: CutOracle,
                           basis: SpanBasis, budgets: Budgets) -> Series:
    """Install the irrational digit, then keep resolving deeper levels until
    the cut closes or stabilizes."""
    _require_exact_residue(cls)
    dim = basis.generators[0].dim
    d0 = add(cls.d0, scale(cls.scale, cls.residue))
    s = oracle.side(d0)
    if s == Side.EQUAL:
        return d0
    state = _ClassifyState(d0=d0, direction=1 if s == Side.BELOW else -1,
                           chain=[d0])
    state.achieved = tuple(cls.level)
    state.achieved_strict = False
    grid = _field_grid(basis, budgets.exponent_denominator_budget, dim)
    grid = [tuple(make_exp(g, dim)) for g in grid]
    for _ in range(budgets.height_budget):
        state.improved = False
        result = _scan_levels(oracle, state, basis, grid, "field", budgets)
        if isinstance(result, Realized):
            return result.element
        if isinstance(result, ResidueTranscendental):
            d0 = add(result.d0, scale(result.scale, result.residue))
            s = oracle.side(d0)
            if s == Side.EQUAL:
                return d0
            state = _ClassifyState(d0=d0,
                                   direction=1 if s == Side.BELOW else -1,
                                   chain=[d0])
            state.achieved = tuple(result.level)
            continue
        if not state.improved:
            break
    tail = _stable_conclusion(state, grid, "field", dim, oracle)
    return realize_cut_group(tail, oracle, basis, budgets)


def _realize_immediate(cls: ImmediateTranscendental, oracle: CutOracle,
                       basis: SpanBasis, budgets: Budgets) -> Series:
    """Pseudo-limit realization: extract the record subsequence through the
    consistency tree, take its pseudo-limit machinery as certificate, and
    place the witness just past the deepest record inside the logged gap."""
    dim = basis.generators[0].dim
    elements = list(cls.enum_prefix)
    n = len(elements)
    sides = {e: oracle.side(e) for e in elements}
    want = oracle.side(cls.chain[-1])
    if want == Side.EQUAL:
        return cls.chain[-1]
    base = zero_series(dim)

    def raw(sigma: str) -> bool:
        return _case1_node_ok(sigma, elements, sides, want, base)

    tree = TreeOracle(raw)
    path = find_path_bounded(tree, n)
    if path is None:
        raise BudgetExhausted("no admissible record path", stage="realize")
    marks = [elements[i] for i, bit in enumerate(path) if bit == "1"]
    if len(marks) < 3:
        raise BudgetExhausted(
            f"pseudo-sequence too short ({len(marks)} record(s))",
            stage="realize")
    seq = PseudoSequence.explicit(tuple(marks))
    if not check_pseudo_cauchy(seq, len(marks)):
        raise PseudoLimitUnverified(
            "record subsequence is not pseudo-Cauchy",
            query=format_series(marks[-1]))
    limit = pseudo_limit(seq, len(marks))
    gammas = [tuple(valuation(subtract(b, a)))
              for a, b in zip(marks, marks[1:])]
    for a_i, gamma_i in zip(marks, gammas):
        got = valuation(subtract(limit, a_i))
        if got is INFINITY or tuple(got) != gamma_i:
            raise PseudoLimitUnverified(
                "pseudo-limit misses a difference valuation",
                query=format_series(a_i))
    witness = _witness_past_records(oracle, marks, gammas, dim)
    for a_i, gamma_i in zip(marks, gammas):
        got = valuation(subtract(witness, a_i))
        if got is INFINITY or tuple(got) != gamma_i:
            raise PseudoLimitUnverified(
                "witness misses a difference valuation",
                query=format_series(a_i))
    _verify_against_log(witness, oracle)
    return witness


def _case1_node_ok(sigma: str, elements: list, sides: dict, want: Side,
                   base: Series) -> bool:
    """Marked elements must be records among the approximation-side elements
    seen so far; an unmarked element past the last mark (the zero element
    before any mark) forces a mark, an opposite-side element behind it kills
    the node, and marked triples must contract with an n-fold margin."""
    marked = []
    last = base  # stands in for the zero element until the first mark
    best = None  # approximation-side record so far
    for i, bit in enumerate(sigma):
        e = elements[i]
        if bit == "1":
            if sides[e] != want:
                return False
            if best is not None and _cmp_toward(e, best, want) < 0:
                return False  # marking a non-record
            last = e
            marked.append(e)
        elif sides[e] == want and _cmp_toward(e, last, want) > 0:
            return False  # an unmarked record invalidates the path
        if sides[e] not in (want, Side.EQUAL):
            if _cmp_toward(e, last, want) < 0:
                return False  # last mark overshot the opposite side
        if sides[e] == want:
            if best is None or _cmp_toward(e, best, want) > 0:
                best = e
    n = len(sigma)
    for i in range(len(marked) - 2):
        a, b, c = marked[i], marked[i + 1], marked[i + 2]
        d_later = _abs_series(subtract(c, b))
        d_earlier = _abs_series(subtract(b, a))
        if compare_series(scale(d_later, Fraction(n)), d_earlier) >= 0:
            return False
    return True


def _cmp_toward(e: Series, last: Series, want: Side) -> int:
    c = compare_series(e, last)
    return c if want == Side.BELOW else -c


def _abs_series(x: Series) -> Series:
    if x.is_zero():
        return x
    return x if compare_series(x, zero_series(x.dim)) > 0 else negate(x)


def _witness_past_records(oracle: CutOracle, marks: list, gammas: list,
                          dim: int) -> Series:
    want = oracle.side(marks[-1])
    base = marks[-1]
    for e, s in oracle.log:
        if s == want and _cmp_toward(e, base, want) > 0:
            base = e
    opposite = None
    for e, s in oracle.log:
        if s not in (want, Side.EQUAL):
            if opposite is None or _cmp_toward(e, opposite, want) < 0:
                opposite = e
    direction = 1 if want == Side.BELOW else -1
    if opposite is None:
        exp0 = Fraction(_first_floor(gammas[-1]) + 1)
    else:
        gap = subtract(opposite, base)
        exp0 = Fraction(_first_floor(tuple(valuation(gap))) + 1)
    gamma_last = gammas[-1]
    if not _exp_lt(gamma_last, make_exp((exp0,), dim)):
        exp0 = Fraction(_first_floor(gamma_last) + 1)
    step = _exp_monomial((exp0,), dim)
    return add(base, step if direction > 0 else negate(step))


# ---------------------------------------------------------------------------
# type completion


@dataclass(frozen=True)
class Completion:
    """Decided enumeration prefix of a partial type, plus the cut bounds of
    its leftmost surviving interval state."""

    var: str
    signature: Signature
    thetas: tuple  # (emission index, formula) pairs from the input type
    bits: str
    decided: tuple  # the enumerated prefix with polarities applied
    lower: Optional[Series]
    upper: Optional[Series]
    point: Optional[Series]
    interval_states: int  # surviving disjuncts after the decided prefix


def _materialize(tau: PartialType, env: dict, dim: int,
                 budgets: Budgets) -> list:
    """Emissions 0..K-1 with quantifiers eliminated; a false parameter-only
    emission refutes the type outright."""
    thetas = []
    for i in range(budgets.formula_prefix_budget):
        f = tau.emit(i)
        if f is None:
            continue
        if _has_quantifier(f):
            f = doag_qe(f)
        if tau.var not in free_symbols(f):
            if not eval_formula(f, env, dim):
                raise NotFinitelySatisfiable(
                    f"emission {i} fails on the parameters: "
                    f"{format_formula(f)}",
                    witness=(format_formula(f),))
            continue
        thetas.append((i, f))
    return thetas


_STATE_CAP = 64


def _merge_store(a: tuple, b: tuple):
    """Intersect two (lower, upper, point) stores; None when inconsistent."""
    lo, up, pt = a
    lo2, up2, pt2 = b
    if pt is not None and pt2 is not None and compare_series(pt, pt2) != 0:
        return None
    if pt is None:
        pt = pt2
    if lo is None or (lo2 is not None and compare_series(lo2, lo) > 0):
        lo = lo2
    if up is None or (up2 is not None and compare_series(up2, up) < 0):
        up = up2
    if lo is not None and up is not None and compare_series(lo, up) >= 0:
        return None
    if pt is not None:
        if lo is not None and compare_series(lo, pt) >= 0:
            return None
        if up is not None and compare_series(pt, up) >= 0:
            return None
    return (lo, up, pt)


def _extend_states(states: list, constraint, env: dict, var: str) -> list:
    """Conjoin one more formula onto a disjunction of interval stores."""
    world_bounds = []
    for world in iter_worlds(_nnf(constraint)):
        try:
            world_bounds.append(cut_bounds(world, env, var))
        except Unsatisfiable:
            continue
    out: list = []
    seen: set = set()
    for st in states:
        for wb in world_bounds:
            merged = _merge_store(st, wb)
            if merged is None or merged in seen:
                continue
            seen.add(merged)
            out.append(merged)
            if len(out) > _STATE_CAP:
                raise BudgetExhausted(
                    f"more than {_STATE_CAP} interval states",
                    stage="worlds")
    return out


def _check_prefix_satisfiable(thetas: list, env: dict, var: str) -> list:
    """Conjoin emissions in order; on collapse, name a minimal refuting
    subset.  Returns the surviving interval states."""
    states = [(None, None, None)]
    for j, (i_bad, f_bad) in enumerate(thetas):
        new = _extend_states(states, f_bad, env, var)
        if new:
            states = new
            continue
        if not satisfiable(f_bad, env, var):
            raise NotFinitelySatisfiable(
                f"emission {i_bad} alone is unsatisfiable: "
                f"{format_formula(f_bad)}",
                witness=(format_formula(f_bad),))
        for i_prev, f_prev in thetas[:j]:
            if not satisfiable(And(f_prev, f_bad), env, var):
                raise NotFinitelySatisfiable(
                    f"emissions {i_prev} and {i_bad} conflict: "
                    f"{format_formula(f_prev)}  //  {format_formula(f_bad)}",
                    witness=(format_formula(f_prev), format_formula(f_bad)))
        raise NotFinitelySatisfiable(
            f"prefix of length {j + 1} is unsatisfiable",
            witness=tuple(format_formula(f) for _, f in thetas[:j + 1]))
    return states


def complete_type(tau: PartialType, env: dict, mode: str = "group",
                  budgets: Budgets = Budgets()) -> Completion:
    """Decide the first formula_prefix_budget enumerated formulas against the
    type's emissions, leftmost-consistent (negation preferred)."""
    dim = next(iter(env.values())).dim if env else 2
    thetas = _materialize(tau, env, dim, budgets)
    root_states = _check_prefix_satisfiable(thetas, env, tau.var)
    sig = Signature(mode, (tau.var,) + tuple(tau.params))
    k = budgets.formula_prefix_budget
    states_memo: dict = {"": root_states}

    def states_for(sigma: str) -> list:
        if sigma not in states_memo:
            parent = states_for(sigma[:-1])
            f = enumerate_formulas(len(sigma) - 1, sig)
            constraint = f if sigma[-1] == "1" else Not(f)
            states_memo[sigma] = _extend_states(parent, constraint, env,
                                                tau.var)
        return states_memo[sigma]

    path = find_path_bounded(TreeOracle(lambda s: bool(states_for(s))), k)
    if path is None:
        raise BudgetExhausted(
            "no consistent completion of the enumerated prefix",
            stage="complete")
    decided = tuple(
        enumerate_formulas(i, sig) if bit == "1"
        else Not(enumerate_formulas(i, sig))
        for i, bit in enumerate(path))
    final_states = states_for(path)
    lower, upper, point = final_states[0]
    return Completion(tau.var, sig, tuple(thetas), path, decided,
                      lower, upper, point, len(final_states))


def completed_partial_type(completion: Completion,
                           params: tuple) -> PartialType:
    decided = completion.decided

    def emit(i: int):
        return decided[i] if 0 <= i < len(decided) else None

    return PartialType(emit, completion.var, params)


# ---------------------------------------------------------------------------
# the derived oracle and the realization pipeline


_PACE_EMISSIONS = 2  # emitted formulas whose bounds pace in per generation


def _theta_bound_elements(thetas: list, env: dict, var: str,
                          dim: int) -> list:
    """Concrete bound series named by the type's own atoms, batched two
    emissions per generation; these seed the comparison enumeration."""
    batches: list = []
    seen = set()
    for pos, (_, f) in enumerate(thetas):
        if pos % _PACE_EMISSIONS == 0:
            batches.append([])
        for a in iter_atoms(f):
            try:
                coeff, rest = _atom_linear_parts(a, var)
            except NonlinearUnsupported:
                continue
            if coeff == 0:
                continue
            bound = _term_series(rest.scaled(Fraction(-1) / coeff), env, dim)
            if bound not in seen:
                seen.add(bound)
                batches[-1].append(bound)
    return batches


def derived_oracle(completion: Completion, env: dict, basis: SpanBasis,
                   paced: Sequence[Sequence[Series]], dim: int,
                   counters: dict) -> CutOracle:
    """Answer side queries from the completion: the store bounds decide
    outright, anything strictly between them is settled against the
    canonical gap center (a counted free decision)."""
    center_box: dict = {}

    def side(e: Series) -> Side:
        if completion.point is not None:
            c = compare_series(e, completion.point)
            return Side.BELOW if c < 0 else Side.ABOVE if c > 0 \
                else Side.EQUAL
        if completion.lower is not None and \
                compare_series(e, completion.lower) <= 0:
            return Side.BELOW
        if completion.upper is not None and \
                compare_series(e, completion.upper) >= 0:
            return Side.ABOVE
        if "center" not in center_box:
            center_box["center"] = gap_center(completion.lower,
                                              completion.upper, dim)
        counters["free_decisions"] += 1
        c = compare_series(e, center_box["center"])
        return Side.BELOW if c < 0 else Side.ABOVE if c > 0 else Side.EQUAL

    enum = standard_height_enum(basis.generators, paced=paced)
    return CutOracle(side, enum)


@dataclass(frozen=True)
class RealizationResult:
    witness: Series
    classification: CutClassification
    completion: Completion
    verification: tuple  # (formula text, passed) pairs
    report: str


def realize_type(tau: PartialType, env: dict, mode: str = "group",
                 budgets: Budgets = Budgets()) -> RealizationResult:
    """Complete the type, classify the resulting cut through the derived
    oracle, realize it, and verify the witness against every emission."""
    dim = next(iter(env.values())).dim if env else 2
    completion = complete_type(tau, env, mode, budgets)
    generators = [env[p] for p in tau.params] if tau.params \
        else [monomial(make_exp((0,), dim), Fraction(1), dim)]
    basis = valuation_basis(generators)
    paced = _theta_bound_elements(list(completion.thetas), env, tau.var, dim)
    counters = {"free_decisions": 0}
    oracle = derived_oracle(completion, env, basis, paced, dim, counters)
    classification = classify_cut(oracle, basis, budgets, mode)
    if mode == "group":
        witness = realize_cut_group(classification, oracle, basis, budgets)
    else:
        witness = realize_cut_field(classification, oracle, basis, budgets)
    witness, clamped = _clamp_to_store(witness, completion, dim)
    verification = []
    wenv = dict(env)
    wenv[tau.var] = witness
    for _, f in completion.thetas:
        verification.append((format_formula(f), eval_formula(f, wenv, dim)))
    report = _render_report(completion, classification, witness,
                            verification, oracle, counters, budgets, mode,
                            clamped)
    return RealizationResult(witness, classification, completion,
                             tuple(verification), report)


def _clamp_to_store(witness: Series, completion: Completion,
                    dim: int) -> tuple:
    """The decided prefix confines x to the completion store; a witness
    built from a height-truncated probe chain can lag behind theta bounds
    the enumeration never reached, so fold the store back in."""
    if completion.point is not None:
        if compare_series(witness, completion.point) == 0:
            return witness, False
        return completion.point, True
    lo, up = completion.lower, completion.upper
    if (lo is not None and compare_series(witness, lo) <= 0) or \
            (up is not None and compare_series(witness, up) >= 0):
        return gap_center(lo, up, dim), True
    return witness, False


# ---------------------------------------------------------------------------
# report rendering


def _fmt_level(gamma) -> str:
    vals = list(gamma)
    while len(vals) > 1 and vals[-1] == 0:
        vals.pop()
    return "(" + ",".join(str(v) for v in vals) + ")"


def _classification_lines(cls: CutClassification) -> list:
    if isinstance(cls, Realized):
        return ["realized", f"element: {format_series(cls.element)}"]
    if isinstance(cls, ResidueTranscendental):
        return ["residue-transcendental",
                f"d0: {format_series(cls.d0)}",
                f"scale: {format_series(cls.scale)}",
                f"level: {_fmt_level(cls.level)}",
                f"residue: {format_scalar(cls.residue)}"]
    if isinstance(cls, GroupTranscendental):
        lo = _fmt_level(cls.lower) if cls.lower is not None else "none"
        hi = _fmt_level(cls.upper) if cls.upper is not None else "none"
        return ["value-transcendental",
                f"d0: {format_series(cls.d0)}",
                f"window: {lo} .. {hi}",
                f"direction: {'+1' if cls.direction > 0 else '-1'}"]
    if isinstance(cls, ImmediateTranscendental):
        return ["immediate-transcendental",
                f"chain length: {len(cls.chain)}",
                f"deepest: {format_series(cls.chain[-1])}"]
    return [str(cls)]


_CASE_NAMES = {
    Realized: "exact element",
    ResidueTranscendental: "residue fill",
    GroupTranscendental: "value-gap fill",
    ImmediateTranscendental: "pseudo-limit fill",
}


def _render_report(completion: Completion, cls: CutClassification,
                   witness: Series, verification: list, oracle: CutOracle,
                   counters: dict, budgets: Budgets, mode: str,
                   clamped: bool = False) -> str:
    lines = []
    lines.append("== COMPLETION ==")
    lines.append(f"mode: {mode}")
    lines.append(f"emitted: {len(completion.thetas)} formulas")
    lines.append(f"assignment: {completion.bits}")
    store = []
    for label, v in (("lower", completion.lower), ("upper",
                                                   completion.upper),
                     ("point", completion.point)):
        store.append(f"{label}={format_series(v) if v is not None else '-'}")
    lines.append("store: " + " ".join(store))
    lines.append("== CLASSIFICATION ==")
    lines.extend(_classification_lines(cls))
    lines.append("== CASE ==")
    case = _CASE_NAMES.get(type(cls), "inconclusive")
    lines.append(case + (" (clamped to the decided prefix)" if clamped
                         else ""))
    lines.append("== WITNESS ==")
    lines.append(format_series(witness))
    lines.append("== VERIFICATION ==")
    for text, ok in verification:
        lines.append(f"{'PASS' if ok else 'FAIL'}  {text}")
    lines.append("== BUDGETS ==")
    lines.append(f"height: {budgets.height_budget}")
    lines.append(f"denominator: {budgets.exponent_denominator_budget}")
    lines.append(f"prefix: {budgets.formula_prefix_budget}")
    lines.append(f"precision: {budgets.precision_budget}")
    lines.append(f"oracle queries: {len(oracle.log)}")
    lines.append(f"interval states: {completion.interval_states}")
    lines.append(f"free decisions: {counters['free_decisions']}")
    return "\n".join(lines) + "\n"


def render_inconclusive_report(exc: BudgetExhausted, mode: str,
                               budgets: Budgets) -> str:
    lines = ["== COMPLETION ==",
             f"mode: {mode}",
             "== CLASSIFICATION ==",
             "inconclusive",
             f"stage: {getattr(exc, 'stage', None) or 'unknown'}",
             f"detail: {exc}",
             "== CASE ==",
             "inconclusive",
             "== BUDGETS ==",
             f"height: {budgets.height_budget}",
             f"denominator: {budgets.exponent_denominator_budget}",
             f"prefix: {budgets.formula_prefix_budget}",
             f"precision: {budgets.precision_budget}"]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# computable sequence wrapper


class _PrecisionProbe:
    """Interval proxy that records the deepest precision requested."""

    def __init__(self, real, offset: int = 0):
        self._real = real
        self._offset = offset
        self.max_precision = 0

    def interval(self, n: int):
        self.max_precision = max(self.max_precision, n)
        return self._real.interval(n + self._offset)


def sequence_is_computable_in(generator: Callable, r) -> Callable:
    """Wrap an (index, real) -> formula generator as a type emission,
    verifying at the wrap and on every call that the output is stable under
    refining the real's intervals (interval-monotonicity), and logging the
    precision each term actually consumed."""

    def emit_checked(i: int):
        probe = _PrecisionProbe(r)
        f = generator(i, probe)
        replay = _PrecisionProbe(r, offset=1)
        f2 = generator(i, replay)
        same = (f is None and f2 is None) or (
            f is not None and f2 is not None
            and format_formula(f) == format_formula(f2))
        if not same:
            raise OracleFailure(
                f"generator output at index {i} changes under interval "
                f"refinement: not computable in the given real")
        emit_checked.precision_log[i] = probe.max_precision
        return f

    emit_checked.precision_log = {}
    emit_checked(0)
    return emit_checked
