"""Finite-support Hahn series over lexicographically ordered Q^n exponents.

A series is a finite sum of terms c * t^gamma with exact coefficients
(Fraction, RealAlgebraic, or OracleReal) and exponents in Q^n under the
lexicographic order; t^gamma for gamma > 0 is a positive infinitesimal.  A
series may carry a truncation bound: stored exponents are all strictly below
it, and nothing is known at or beyond it.  Arithmetic propagates bounds so
that every stored term of a result is genuine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    ClassMismatch,
    NegativeValuation,
    ParseError,
    TruncationInsufficient,
)
from .scalars import (
    OracleReal,
    RealAlgebraic,
    format_scalar,
    parse_scalar,
    ralg_sign,
    scalar_add,
    scalar_inv,
    scalar_is_zero,
    scalar_mul,
    scalar_neg,
    scalar_sign,
)

Exponent = tuple  # tuple[Fraction, ...], compared lexicographically


class _Infinity:
    """Valuation of the zero series; greater than every exponent."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("hahnsat-infinity")

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def zero_exp(dim: int) -> Exponent:
    return (Fraction(0),) * dim


def exp_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def exp_neg(a: Exponent) -> Exponent:
    return tuple(-x for x in a)


def exp_scale(a: Exponent, q: Fraction) -> Exponent:
    return tuple(x * q for x in a)


def make_exp(values, dim: int) -> Exponent:
    vals = [Fraction(v) for v in values]
    if len(vals) > dim:
        raise ValueError(f"exponent has {len(vals)} coordinates, dimension is {dim}")
    vals.extend([Fraction(0)] * (dim - len(vals)))
    return tuple(vals)


class Series:
    """Finite-support Hahn series; structurally immutable.

    `terms` maps exponents to nonzero coefficients, all strictly below
    `trunc` when a bound is present.  Equality and hashing are structural.
    """

    __slots__ = ("dim", "terms", "trunc", "_hash")

    def __init__(self, terms: dict, dim: int, trunc: Optional[Exponent] = None):
        kept = {}
        for exp, c in terms.items():
            if len(exp) != dim:
                raise ValueError(f"exponent {exp} does not match dimension {dim}")
            if scalar_is_zero(c):
                continue
            if trunc is not None and not exp < trunc:
                continue
            kept[tuple(Fraction(q) for q in exp)] = c
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "terms", kept)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def is_zero(self) -> bool:
        """True only for the exact zero series."""
        return not self.terms and self.trunc is None

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.trunc == other.trunc
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            h = hash((self.dim, self.trunc, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h if self._hash is None else self._hash

    def __repr__(self):
        body = format_series(self)
        if self.trunc is not None:
            return f"<{body} (below {_format_exp(self.trunc)})>"
        return f"<{body}>"


def series(terms: dict, dim: int, trunc: Optional[Exponent] = None) -> Series:
    return Series(terms, dim, trunc)


def zero_series(dim: int) -> Series:
    return Series({}, dim)


def monomial(exponent, coeff, dim: Optional[int] = None) -> Series:
    """The series coeff * t^exponent."""
    if dim is None:
        dim = len(exponent)
    exp = make_exp(exponent, dim)
    if isinstance(coeff, int):
        coeff = Fraction(coeff)
    return Series({exp: coeff}, dim)


def from_scalar(c, dim: int) -> Series:
    if isinstance(c, int):
        c = Fraction(c)
    return Series({zero_exp(dim): c}, dim)


def valuation(x: Series):
    """Least exponent in the support; INFINITY for the exact zero series.

    A series with no stored terms but a truncation bound has unknown
    valuation, so TruncationInsufficient is raised.
    """
    if x.terms:
        return min(x.terms)
    if x.trunc is None:
        return INFINITY
    raise TruncationInsufficient(
        f"no terms below the bound {_format_exp(x.trunc)}; valuation unknown"
    )


def _valuation_floor(x: Series):
    """A certified lower bound on the valuation (INFINITY for exact zero)."""
    if x.terms:
        return min(x.terms)
    return INFINITY if x.trunc is None else x.trunc


def leading_term(x: Series):
    v = valuation(x)
    if v is INFINITY:
        raise ValueError("zero series has no leading term")
    return v, x.terms[v]


def _min_trunc(a: Optional[Exponent], b: Optional[Exponent]) -> Optional[Exponent]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def add(x: Series, y: Series) -> Series:
    if x.dim != y.dim:
        raise ValueError("dimension mismatch")
    out = dict(x.terms)
    for exp, c in y.terms.items():
        if exp in out:
            out[exp] = scalar_add(out[exp], c)
        else:
            out[exp] = c
    return Series(out, x.dim, _min_trunc(x.trunc, y.trunc))


def negate(x: Series) -> Series:
    return Series({e: scalar_neg(c) for e, c in x.terms.items()}, x.dim, x.trunc)


def subtract(x: Series, y: Series) -> Series:
    return add(x, negate(y))


def multiply(x: Series, y: Series) -> Series:
    if x.dim != y.dim:
        raise ValueError("dimension mismatch")
    if (x.is_zero() or y.is_zero()):
        return zero_series(x.dim)
    trunc = None
    if x.trunc is not None:
        vy = _valuation_floor(y)
        trunc = _min_trunc(trunc, None if vy is INFINITY else exp_add(x.trunc, vy))
    if y.trunc is not None:
        vx = _valuation_floor(x)
        trunc = _min_trunc(trunc, None if vx is INFINITY else exp_add(y.trunc, vx))
    out: dict = {}
    for e1, c1 in x.terms.items():
        for e2, c2 in y.terms.items():
            e = exp_add(e1, e2)
            if trunc is not None and not e < trunc:
                continue
            p = scalar_mul(c1, c2)
            if e in out:
                out[e] = scalar_add(out[e], p)
            else:
                out[e] = p
    return Series(out, x.dim, trunc)


def scale(x: Series, c) -> Series:
    """Multiply by an exact nonzero scalar; the bound is unaffected."""
    if isinstance(c, int):
        c = Fraction(c)
    if scalar_is_zero(c):
        return zero_series(x.dim)
    return Series({e: scalar_mul(coef, c) for e, coef in x.terms.items()}, x.dim, x.trunc)


def with_trunc(x: Series, bound: Optional[Exponent]) -> Series:
    return Series(x.terms, x.dim, _min_trunc(x.trunc, bound))


def restrict_exponents(x: Series, bound: Exponent, inclusive: bool = True) -> Series:
    """Exact series made of the stored terms with exponent <= bound
    (< bound when inclusive=False); the truncation bound is discarded."""
    if inclusive:
        kept = {e: c for e, c in x.terms.items() if e <= bound}
    else:
        kept = {e: c for e, c in x.terms.items() if e < bound}
    return Series(kept, x.dim)


def invert(x: Series, order: Optional[Exponent] = None) -> Series:
    """Multiplicative inverse.

    Exact monomials invert exactly whatever the order.  Otherwise `order` is
    required and the result is a geometric expansion carrying the bound
    order - 2*v(x); when the lexicographic order makes the target unreachable
    (the tail valuation is null in a coordinate where the target is not),
    TruncationInsufficient is raised.
    """
    if x.is_zero():
        raise ZeroDivisionError("cannot invert the zero series")
    if not x.terms:
        raise TruncationInsufficient("no terms below the bound; cannot invert")
    v, c = leading_term(x)
    if len(x.terms) == 1 and x.trunc is None:
        return Series({exp_neg(v): scalar_inv(c)}, x.dim)
    if order is None:
        raise ValueError("order is required to invert a non-monomial series")
    order = make_exp(order, x.dim)
    lead_inv = Series({exp_neg(v): scalar_inv(c)}, x.dim)
    eps = subtract(multiply(x, lead_inv), from_scalar(Fraction(1), x.dim))
    out_trunc = exp_add(exp_add(order, exp_neg(v)), exp_neg(v))
    if not eps.terms and eps.trunc is None:
        return with_trunc(lead_inv, None)  # x was exactly its leading term
    target = exp_add(order, exp_neg(v))
    veps = _valuation_floor(eps)
    if veps is INFINITY:
        return with_trunc(lead_inv, out_trunc)
    j = next(i for i, q in enumerate(veps) if q != 0)
    if any(target[i] > 0 for i in range(j)):
        raise TruncationInsufficient(
            f"order {_format_exp(order)} is lexicographically unreachable from "
            f"tail valuation {_format_exp(veps)}"
        )
    k = 0
    while not exp_scale(veps, Fraction(k)) >= target:
        k += 1
    acc = from_scalar(Fraction(1), x.dim)
    power = from_scalar(Fraction(1), x.dim)
    neg_eps = negate(eps)
    for _ in range(k - 1):
        power = multiply(power, neg_eps)
        acc = add(acc, power)
    return with_trunc(multiply(acc, lead_inv), out_trunc)


def compare_series(x: Series, y: Series) -> int:
    """Sign of x - y in the ordered Hahn field.

    Raises TruncationInsufficient when the stored difference is empty but a
    bound prevents certifying equality, and propagates
    ComparisonUndecidedAtPrecision from oracle coefficient signs.
    """
    d = subtract(x, y)
    if d.terms:
        _, c = leading_term(d)
        return scalar_sign(c)
    if d.trunc is None:
        return 0
    raise TruncationInsufficient(
        f"difference has no terms below {_format_exp(d.trunc)}; sign unknown"
    )


def residue(a: Series):
    """Coefficient at exponent zero for a series of nonnegative valuation."""
    zero = zero_exp(a.dim)
    if a.terms and min(a.terms) < zero:
        raise NegativeValuation(
            f"valuation {_format_exp(min(a.terms))} is negative"
        )
    if zero in a.terms:
        return a.terms[zero]
    if a.trunc is not None and not zero < a.trunc:
        raise TruncationInsufficient(
            "bound does not reach exponent zero; residue unknown"
        )
    return Fraction(0)


def arch_ratio(y: Series, x: Series):
    """Leading-coefficient ratio lead(y)/lead(x) for same-valuation series;
    zero y gives 0, otherwise differing valuations raise ClassMismatch."""
    if y.is_zero():
        return Fraction(0)
    vy, vx = valuation(y), valuation(x)
    if vy != vx:
        raise ClassMismatch(
            f"valuations {_format_exp(vy)} and "
            f"{vx if vx is INFINITY else _format_exp(vx)} differ"
        )
    return scalar_mul(y.terms[vy], scalar_inv(x.terms[vx]))


# ---------------------------------------------------------------------------
# literals


def _format_exp(exp) -> str:
    from .scalars import format_rational

    coords = list(exp)
    while coords and coords[-1] == 0:
        coords.pop()
    return "(" + ",".join(format_rational(q) for q in coords) + ")"


def format_series(x: Series) -> str:
    """Canonical literal: terms ascending by exponent, unit coefficients
    omitted, signs folded into the separators, trailing zero exponent
    coordinates dropped; the zero series prints as `0`."""
    if not x.terms:
        return "0"
    parts = []
    for i, (exp, c) in enumerate(x.sorted_terms()):
        if isinstance(c, OracleReal):
            sign, mag = 1, format_scalar(c)
        else:
            s = ralg_sign(c) if isinstance(c, RealAlgebraic) else (1 if c > 0 else -1)
            sign = s
            mag_val = c if s > 0 else scalar_neg(c)
            mag = format_scalar(mag_val)
        stripped = _format_exp(exp)
        if stripped == "()":
            body = mag
        elif mag == "1":
            body = f"t^{stripped}"
        else:
            body = f"{mag}*t^{stripped}"
        if i == 0:
            parts.append(("-" if sign < 0 else "") + body)
        else:
            parts.append((" - " if sign < 0 else " + ") + body)
    return "".join(parts)


def _split_top_level(text: str):
    """Split a series literal into signed term chunks at depth-0 +/-."""
    chunks = []
    depth = 0
    start = 0
    sign = 1
    i = 0
    prev_hat = False
    first = True
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced brackets", i + 1)
        elif ch in "+-" and depth == 0 and not prev_hat:
            if text[start:i].strip():
                chunks.append((sign, text[start:i], start))
                sign = 1
            elif not first and not text[start:i].strip():
                raise ParseError("empty term", i + 1)
            if ch == "-":
                sign = -sign
            start = i + 1
            first = False
        if not ch.isspace():
            prev_hat = ch == "^"
        i += 1
    if depth != 0:
        raise ParseError("unbalanced brackets", len(text))
    if not text[start:].strip():
        raise ParseError("trailing operator", len(text))
    chunks.append((sign, text[start:], start))
    return chunks


def _parse_exponent(text: str, col: int, dim: int) -> Exponent:
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        inner = t[1:-1].strip()
        if not inner:
            return zero_exp(dim)
        coords = inner.split(",")
    else:
        coords = [t]
    if len(coords) > dim:
        raise ParseError(f"exponent has {len(coords)} coordinates, dimension is {dim}",
                         col + 1)
    vals = []
    for c in coords:
        c = c.strip()
        try:
            vals.append(Fraction(c))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad exponent coordinate {c!r}", col + 1) from None
    vals.extend([Fraction(0)] * (dim - len(vals)))
    return tuple(vals)


def _parse_term(sign: int, chunk: str, col: int, dim: int):
    body = chunk.strip()
    if not body:
        raise ParseError("empty term", col + 1)
    coeff_text = None
    t_part = None
    depth = 0
    for i, ch in enumerate(chunk):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "*" and depth == 0:
            coeff_text = chunk[:i]
            t_part = chunk[i + 1:]
            break
    if t_part is None:
        stripped = chunk.strip()
        if stripped == "t" or stripped.startswith("t^"):
            coeff_text, t_part = None, chunk
        else:
            coeff_text, t_part = chunk, None
    coeff = Fraction(1)
    if coeff_text is not None:
        coeff = parse_scalar(coeff_text, col)
    if sign < 0:
        coeff = scalar_neg(coeff)
    if t_part is None:
        return zero_exp(dim), coeff
    tp = t_part.strip()
    t_col = col + (len(chunk) - len(chunk.lstrip())) + (len(chunk.strip()) - len(tp))
    if tp == "t":
        exp = make_exp([Fraction(1)], dim)
    elif tp.startswith("t^"):
        exp = _parse_exponent(tp[2:], col, dim)
    else:
        raise ParseError(f"expected t-power, got {tp!r}", t_col + 1)
    return exp, coeff


def parse_series(text: str, dim: int = 2) -> Series:
    """Parse a series literal; tolerant of whitespace, bare `t`,
    unparenthesized single-coordinate exponents, and partial exponent tuples
    (padded with zeros)."""
    s = text.strip()
    if not s:
        raise ParseError("empty series literal", 1)
    if s == "0":
        return zero_series(dim)
    out: dict = {}
    for sign, chunk, start in _split_top_level(text):
        exp, coeff = _parse_term(sign, chunk, start, dim)
        if exp in out:
            out[exp] = scalar_add(out[exp], coeff)
        else:
            out[exp] = coeff
    return Series(out, dim)
