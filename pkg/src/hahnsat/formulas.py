"""Formula layer for ordered groups and ordered fields over Hahn series.

Terms are rational-coefficient combinations of symbol monomials plus literal
t-power monomials (the identifier `t` is reserved for literals and cannot be
a parameter name).  Atoms canonicalize to integer-scaled `P < N` / `P = N`
with sign-split sides; compound structure is preserved as written.  The
group fragment admits quantifier elimination; one-variable conjunctions
reduce to cuts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import (
    NonlinearUnsupported,
    ParseError,
    Unsatisfiable,
)
from .series import (
    Series,
    add as series_add,
    compare_series,
    make_exp,
    monomial as series_monomial,
    multiply as series_multiply,
    scale as series_scale,
    zero_series,
)

RESERVED = {"and", "or", "not", "exists", "forall", "true", "false", "t"}

Monomial = tuple  # tuple of (symbol, power) pairs, sorted by symbol
CONST: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    powers: dict = {}
    for s, p in a:
        powers[s] = powers.get(s, 0) + p
    for s, p in b:
        powers[s] = powers.get(s, 0) + p
    return tuple(sorted(powers.items()))


@dataclass(frozen=True)
class Term:
    """syms: symbol-monomial coefficients; lits: literal t-power coefficients
    keyed by exponent tuples with trailing zeros stripped."""

    syms: tuple = ()
    lits: tuple = ()

    @classmethod
    def build(cls, syms: dict, lits: dict) -> "Term":
        s = tuple(sorted((m, q) for m, q in syms.items() if q))
        l = tuple(sorted((e, q) for e, q in lits.items() if q))
        return cls(s, l)

    def sym_dict(self) -> dict:
        return dict(self.syms)

    def lit_dict(self) -> dict:
        return dict(self.lits)

    def is_zero(self) -> bool:
        return not self.syms and not self.lits

    def scaled(self, q: Fraction) -> "Term":
        if q == 0:
            return Term()
        return Term.build(
            {m: c * q for m, c in self.syms},
            {e: c * q for e, c in self.lits},
        )

    def plus(self, other: "Term") -> "Term":
        syms = self.sym_dict()
        for m, c in other.syms:
            syms[m] = syms.get(m, Fraction(0)) + c
        lits = self.lit_dict()
        for e, c in other.lits:
            lits[e] = lits.get(e, Fraction(0)) + c
        return Term.build(syms, lits)

    def times(self, other: "Term") -> "Term":
        self_const = not self.lits and all(m == CONST for m, _ in self.syms)
        other_const = not other.lits and all(m == CONST for m, _ in other.syms)
        if self_const:
            return other.scaled(self.sym_dict().get(CONST, Fraction(0)))
        if other_const:
            return self.scaled(other.sym_dict().get(CONST, Fraction(0)))
        if self.lits or other.lits:
            raise ParseError("literal t-powers may only be scaled or added", 1)
        syms: dict = {}
        for m1, c1 in self.syms:
            for m2, c2 in other.syms:
                m = _mono_mul(m1, m2)
                syms[m] = syms.get(m, Fraction(0)) + c1 * c2
        return Term.build(syms, {})

    def free_symbols(self) -> set:
        out = set()
        for m, _ in self.syms:
            for s, _p in m:
                out.add(s)
        return out


def _strip_exp(exp: Sequence[Fraction]) -> tuple:
    coords = list(exp)
    while coords and coords[-1] == 0:
        coords.pop()
    return tuple(coords)


# ---------------------------------------------------------------------------
# formulas


@dataclass(frozen=True)
class TrueF:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class FalseF:
    def __str__(self):
        return "false"


@dataclass(frozen=True)
class Atom:
    """Canonical atom pos REL neg: disjoint supports, positive primitive
    integer coefficients."""

    rel: str  # "<" or "="
    pos: Term
    neg: Term

    def __str__(self):
        return f"{_side_text(self.pos)} {self.rel} {_side_text(self.neg)}"


@dataclass(frozen=True)
class Not:
    body: object

    def __str__(self):
        return f"not ({self.body})"


@dataclass(frozen=True)
class And:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} and {self.right})"


@dataclass(frozen=True)
class Or:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} or {self.right})"


@dataclass(frozen=True)
class Exists:
    var: str
    body: object

    def __str__(self):
        return f"exists {self.var} ({self.body})"


Formula = object


@dataclass(frozen=True)
class Signature:
    """Language fragment marker: `group` (linear, constant-free) or `field`
    (adds integer constants), over the given parameter/variable symbols."""

    kind: str
    symbols: tuple

    def __post_init__(self):
        if self.kind not in ("group", "field"):
            raise ValueError("kind must be 'group' or 'field'")
        for s in self.symbols:
            if s in RESERVED:
                raise ValueError(f"symbol {s!r} is reserved")


@dataclass(frozen=True)
class PartialType:
    """Computably-enumerated one-variable type: emit(i) returns the i-th
    formula, or None for 'not yet determined at this index'."""

    emit: Callable[[int], Optional[Formula]]
    var: str
    params: tuple


def _coeff_iter(t: Term):
    for _, q in t.syms:
        yield q
    for _, q in t.lits:
        yield q


def make_atom(rel: str, left: Term, right: Term):
    """Canonicalize left REL right; returns Atom, TrueF, or FalseF."""
    if rel == ">":
        rel, left, right = "<", right, left
    diff = left.plus(right.scaled(Fraction(-1)))
    if diff.is_zero():
        return TrueF() if rel == "=" else FalseF()
    if not diff.lits and all(m == CONST for m, _ in diff.syms):
        c = diff.sym_dict()[CONST]
        if rel == "=":
            return TrueF() if c == 0 else FalseF()
        return TrueF() if c < 0 else FalseF()
    lcm = 1
    for q in _coeff_iter(diff):
        lcm = lcm * q.denominator // math.gcd(lcm, q.denominator)
    g = 0
    for q in _coeff_iter(diff):
        g = math.gcd(g, abs(q.numerator * (lcm // q.denominator)))
    diff = diff.scaled(Fraction(lcm, g))
    pos_s, neg_s, pos_l, neg_l = {}, {}, {}, {}
    for m, q in diff.syms:
        (pos_s if q > 0 else neg_s)[m] = abs(q)
    for e, q in diff.lits:
        (pos_l if q > 0 else neg_l)[e] = abs(q)
    pos = Term.build(pos_s, pos_l)
    neg = Term.build(neg_s, neg_l)
    if rel == "=" and not _side_text(pos) <= _side_text(neg):
        pos, neg = neg, pos
    if rel == "<":
        # diff < 0 means pos side below neg side
        return Atom("<", pos, neg)
    return Atom("=", pos, neg)


def _format_mono(m: Monomial) -> str:
    parts = []
    for s, p in m:
        parts.append(s if p == 1 else f"{s}^{p}")
    return "*".join(parts)


def _format_lit_exp(e: tuple) -> str:
    from .scalars import format_rational

    if not e:
        return "t^(0)"
    return "t^(" + ",".join(format_rational(q) for q in e) + ")"


def _side_text(t: Term) -> str:
    from .scalars import format_rational

    chunks = []
    for m, q in sorted((m, q) for m, q in t.syms if m != CONST):
        body = _format_mono(m)
        chunks.append(body if q == 1 else f"{format_rational(q)}*{body}")
    for e, q in t.lits:
        body = _format_lit_exp(e)
        chunks.append(body if q == 1 else f"{format_rational(q)}*{body}")
    const = dict(t.syms).get(CONST)
    if const:
        chunks.append(format_rational(const))
    return " + ".join(chunks) if chunks else "0"


def format_formula(f: Formula) -> str:
    return str(f)


# ---------------------------------------------------------------------------
# parser


_KEYWORDS = {"and", "or", "not", "exists", "forall", "true", "false"}


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []  # (kind, value, col 1-based)
        self._scan()
        self.pos = 0

    def _scan(self):
        i, n = 0, len(self.text)
        while i < n:
            ch = self.text[i]
            if ch.isspace():
                i += 1
                continue
            col = i + 1
            if ch.isdigit():
                j = i
                while j < n and self.text[j].isdigit():
                    j += 1
                if j < n and self.text[j] == "/":
                    k = j + 1
                    while k < n and self.text[k].isdigit():
                        k += 1
                    if k > j + 1:
                        self.toks.append(("num", self.text[i:k], col))
                        i = k
                        continue
                self.toks.append(("num", self.text[i:j], col))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < n and (self.text[j].isalnum() or self.text[j] in "_'"):
                    j += 1
                word = self.text[i:j]
                kind = "kw" if word in _KEYWORDS else ("t" if word == "t" else "ident")
                self.toks.append((kind, word, col))
                i = j
                continue
            if ch in "<=>+-*^(),":
                self.toks.append(("op", ch, col))
                i += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", col)

    def peek(self):
        if self.pos < len(self.toks):
            return self.toks[self.pos]
        return ("eof", "", len(self.text) + 1)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value: str):
        kind, val, col = self.peek()
        if val != value:
            raise ParseError(f"expected {value!r}", col)
        return self.next()


def parse_formula(text: str) -> Formula:
    toks = _Tokens(text)
    f = _parse_or(toks)
    kind, val, col = toks.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {val!r}", col)
    return f


def _parse_or(toks) -> Formula:
    left = _parse_and(toks)
    while toks.peek()[1] == "or":
        toks.next()
        left = Or(left, _parse_and(toks))
    return left


def _parse_and(toks) -> Formula:
    left = _parse_not(toks)
    while toks.peek()[1] == "and":
        toks.next()
        left = And(left, _parse_not(toks))
    return left


def _parse_not(toks) -> Formula:
    kind, val, col = toks.peek()
    if val == "not":
        toks.next()
        return Not(_parse_not(toks))
    if val in ("exists", "forall"):
        toks.next()
        vkind, var, vcol = toks.next()
        if vkind != "ident":
            raise ParseError("expected a variable name", vcol)
        toks.expect("(")
        body = _parse_or(toks)
        toks.expect(")")
        if val == "forall":
            return Not(Exists(var, Not(body)))
        return Exists(var, body)
    if val == "true":
        toks.next()
        return TrueF()
    if val == "false":
        toks.next()
        return FalseF()
    if val == "(":
        toks.next()
        body = _parse_or(toks)
        toks.expect(")")
        return body
    return _parse_atom(toks)


def _parse_atom(toks) -> Formula:
    left = _parse_term(toks)
    kind, val, col = toks.peek()
    if val not in ("<", "=", ">"):
        raise ParseError("expected a relation (<, =, >)", col)
    toks.next()
    right = _parse_term(toks)
    return make_atom(val, left, right)


def _parse_term(toks) -> Term:
    sign = Fraction(1)
    while toks.peek()[1] in ("+", "-"):
        if toks.next()[1] == "-":
            sign = -sign
    acc = _parse_product(toks).scaled(sign)
    while toks.peek()[1] in ("+", "-"):
        sign = Fraction(1)
        while toks.peek()[1] in ("+", "-"):
            if toks.next()[1] == "-":
                sign = -sign
        acc = acc.plus(_parse_product(toks).scaled(sign))
    return acc


def _parse_product(toks) -> Term:
    acc = _parse_factor(toks)
    while toks.peek()[1] == "*":
        toks.next()
        acc = acc.times(_parse_factor(toks))
    return acc


def _parse_factor(toks) -> Term:
    kind, val, col = toks.next()
    if kind == "num":
        return Term.build({CONST: Fraction(val)}, {})
    if kind == "t":
        exp = (Fraction(1),)
        if toks.peek()[1] == "^":
            toks.next()
            exp = _parse_lit_exponent(toks)
        return Term.build({}, {_strip_exp(exp): Fraction(1)})
    if kind == "ident":
        power = 1
        if toks.peek()[1] == "^":
            toks.next()
            pkind, pval, pcol = toks.next()
            if pkind != "num" or "/" in pval:
                raise ParseError("expected an integer power", pcol)
            power = int(pval)
            if power < 1:
                raise ParseError("powers must be positive", pcol)
        return Term.build({((val, power),): Fraction(1)}, {})
    raise ParseError(f"unexpected {val!r} in term", col)


def _parse_lit_exponent(toks) -> tuple:
    kind, val, col = toks.peek()
    if val == "(":
        toks.next()
        coords = []
        negate = False
        while True:
            kind, val, col = toks.next()
            if val == "-":
                negate = True
                kind, val, col = toks.next()
            if kind != "num":
                raise ParseError("expected an exponent coordinate", col)
            q = Fraction(val)
            coords.append(-q if negate else q)
            negate = False
            kind, val, col = toks.next()
            if val == ")":
                return tuple(coords)
            if val != ",":
                raise ParseError("expected ',' or ')'", col)
    negate = False
    if val == "-":
        toks.next()
        negate = True
        kind, val, col = toks.peek()
    if kind != "num":
        raise ParseError("expected an exponent", col)
    toks.next()
    q = Fraction(val)
    return ((-q if negate else q),)


# ---------------------------------------------------------------------------
# evaluation


def _term_series(t: Term, env: dict, dim: int) -> Series:
    out = zero_series(dim)
    for m, q in t.syms:
        if m == CONST:
            out = series_add(out, series_monomial([Fraction(0)], q, dim))
            continue
        acc = series_monomial([Fraction(0)], q, dim)
        for s, p in m:
            if s not in env:
                raise KeyError(f"symbol {s!r} is not bound")
            for _ in range(p):
                acc = series_multiply(acc, env[s])
        out = series_add(out, acc)
    for e, q in t.lits:
        out = series_add(out, series_monomial(make_exp(e, dim), q, dim))
    return out


def _infer_dim(f: Formula, env: dict, dim: Optional[int]) -> int:
    if env:
        dims = {v.dim for v in env.values()}
        if len(dims) != 1:
            raise ValueError("environment series have mixed dimensions")
        return dims.pop()
    if dim is not None:
        return dim
    best = 1
    for atom in iter_atoms(f):
        for e, _ in list(atom.pos.lits) + list(atom.neg.lits):
            best = max(best, len(e))
    return best


def iter_atoms(f: Formula) -> Iterable[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Not):
        yield from iter_atoms(f.body)
    elif isinstance(f, (And, Or)):
        yield from iter_atoms(f.left)
        yield from iter_atoms(f.right)
    elif isinstance(f, Exists):
        yield from iter_atoms(f.body)


def free_symbols(f: Formula) -> set:
    if isinstance(f, Atom):
        return f.pos.free_symbols() | f.neg.free_symbols()
    if isinstance(f, Not):
        return free_symbols(f.body)
    if isinstance(f, (And, Or)):
        return free_symbols(f.left) | free_symbols(f.right)
    if isinstance(f, Exists):
        return free_symbols(f.body) - {f.var}
    return set()


def eval_formula(f: Formula, env: dict, dim: Optional[int] = None) -> bool:
    """Truth of f under compare_series semantics; quantifiers are eliminated
    through the group-fragment procedure first."""
    if _has_quantifier(f):
        f = doag_qe(f)
    d = _infer_dim(f, env, dim)
    return _eval_qf(f, env, d)


def _has_quantifier(f: Formula) -> bool:
    if isinstance(f, Exists):
        return True
    if isinstance(f, Not):
        return _has_quantifier(f.body)
    if isinstance(f, (And, Or)):
        return _has_quantifier(f.left) or _has_quantifier(f.right)
    return False


def _eval_qf(f: Formula, env: dict, dim: int) -> bool:
    if isinstance(f, TrueF):
        return True
    if isinstance(f, FalseF):
        return False
    if isinstance(f, Atom):
        lhs = _term_series(f.pos, env, dim)
        rhs = _term_series(f.neg, env, dim)
        c = compare_series(lhs, rhs)
        return c < 0 if f.rel == "<" else c == 0
    if isinstance(f, Not):
        return not _eval_qf(f.body, env, dim)
    if isinstance(f, And):
        return _eval_qf(f.left, env, dim) and _eval_qf(f.right, env, dim)
    if isinstance(f, Or):
        return _eval_qf(f.left, env, dim) or _eval_qf(f.right, env, dim)
    raise TypeError(f"cannot evaluate {type(f).__name__}")


# ---------------------------------------------------------------------------
# quantifier elimination (group fragment)


def _nnf(f: Formula, negated: bool = False) -> Formula:
    if isinstance(f, TrueF):
        return FalseF() if negated else f
    if isinstance(f, FalseF):
        return TrueF() if negated else f
    if isinstance(f, Atom):
        if not negated:
            return f
        if f.rel == "<":
            # not (p < n)  <=>  n < p or n = p
            swapped = Atom("<", f.neg, f.pos)
            eq = make_atom("=", f.neg, f.pos)
            return Or(swapped, eq)
        return Or(Atom("<", f.pos, f.neg), Atom("<", f.neg, f.pos))
    if isinstance(f, Not):
        return _nnf(f.body, not negated)
    if isinstance(f, And):
        l, r = _nnf(f.left, negated), _nnf(f.right, negated)
        return Or(l, r) if negated else And(l, r)
    if isinstance(f, Or):
        l, r = _nnf(f.left, negated), _nnf(f.right, negated)
        return And(l, r) if negated else Or(l, r)
    if isinstance(f, Exists):
        if negated:
            raise ValueError("quantifiers must be eliminated innermost-first")
        return Exists(f.var, _nnf(f.body))
    raise TypeError(f"cannot normalize {type(f).__name__}")


def iter_worlds(f: Formula):
    """Lazily yield the DNF worlds (atom lists) of a quantifier-free formula
    already in negation normal form."""
    if isinstance(f, TrueF):
        yield []
        return
    if isinstance(f, FalseF):
        return
    if isinstance(f, Atom):
        yield [f]
        return
    if isinstance(f, Or):
        yield from iter_worlds(f.left)
        yield from iter_worlds(f.right)
        return
    if isinstance(f, And):
        for lw in iter_worlds(f.left):
            for rw in iter_worlds(f.right):
                yield lw + rw
        return
    raise TypeError(f"cannot expand {type(f).__name__}")


def _atom_linear_parts(a: Atom, var: str):
    """(coeff of var, var-free remainder Term) for diff = pos - neg."""
    diff = a.pos.plus(a.neg.scaled(Fraction(-1)))
    coeff = Fraction(0)
    rest_s: dict = {}
    for m, q in diff.syms:
        if any(s == var for s, _ in m):
            if m == ((var, 1),):
                coeff += q
            else:
                raise NonlinearUnsupported(
                    f"atom is not linear in {var}: {_format_mono(m)}"
                )
        else:
            rest_s[m] = rest_s.get(m, Fraction(0)) + q
    rest = Term.build(rest_s, diff.lit_dict())
    return coeff, rest


def _subst(t: Term, var: str, replacement: Term) -> Term:
    syms: dict = {}
    acc = Term.build({}, t.lit_dict())
    for m, q in t.syms:
        if m == ((var, 1),):
            acc = acc.plus(replacement.scaled(q))
        elif any(s == var for s, _ in m):
            raise NonlinearUnsupported(f"cannot substitute into {_format_mono(m)}")
        else:
            syms[m] = syms.get(m, Fraction(0)) + q
    return acc.plus(Term.build(syms, {}))


def _subst_atom(a: Atom, var: str, replacement: Term):
    diff = a.pos.plus(a.neg.scaled(Fraction(-1)))
    new = _subst(diff, var, replacement)
    return make_atom(a.rel, new, Term())


def _eliminate_one(var: str, world: list) -> Formula:
    """Fourier-Motzkin elimination of var from a conjunction of atoms."""
    lowers: list[Term] = []   # L < var
    uppers: list[Term] = []   # var < U
    points: list[Term] = []   # var = E
    keep: list = []
    for a in world:
        coeff, rest = _atom_linear_parts(a, var)
        if coeff == 0:
            keep.append(a)
            continue
        # coeff*var + rest REL 0
        bound = rest.scaled(Fraction(-1) / coeff)
        if a.rel == "=":
            points.append(bound)
        elif coeff > 0:
            uppers.append(bound)
        else:
            lowers.append(bound)
    out: list = []
    if points:
        e0 = points[0]
        for other in points[1:]:
            out.append(make_atom("=", other, e0))
        for a in keep:
            out.append(a)
        for lo in lowers:
            out.append(make_atom("<", lo, e0))
        for up in uppers:
            out.append(make_atom("<", e0, up))
    else:
        out.extend(keep)
        for lo in lowers:
            for up in uppers:
                out.append(make_atom("<", lo, up))
    return _and_fold(out)


def _and_fold(atoms: list) -> Formula:
    clean = []
    seen = set()
    for a in atoms:
        if isinstance(a, FalseF):
            return FalseF()
        if isinstance(a, TrueF):
            continue
        key = str(a)
        if key not in seen:
            seen.add(key)
            clean.append(a)
    if not clean:
        return TrueF()
    clean.sort(key=str)
    out = clean[0]
    for a in clean[1:]:
        out = And(out, a)
    return out


def _or_fold(disjuncts: list) -> Formula:
    clean = []
    seen = set()
    for d in disjuncts:
        if isinstance(d, TrueF):
            return TrueF()
        if isinstance(d, FalseF):
            continue
        key = str(d)
        if key not in seen:
            seen.add(key)
            clean.append(d)
    if not clean:
        return FalseF()
    clean.sort(key=str)
    out = clean[0]
    for d in clean[1:]:
        out = Or(out, d)
    return out


def doag_qe(f: Formula) -> Formula:
    """Equivalent quantifier-free formula over divisible ordered groups."""
    if isinstance(f, (TrueF, FalseF, Atom)):
        return f
    if isinstance(f, Not):
        return _nnf(Not(doag_qe(f.body)))
    if isinstance(f, And):
        return And(doag_qe(f.left), doag_qe(f.right))
    if isinstance(f, Or):
        return Or(doag_qe(f.left), doag_qe(f.right))
    if isinstance(f, Exists):
        body = _nnf(doag_qe(f.body))
        disjuncts = [_eliminate_one(f.var, w) for w in iter_worlds(body)]
        return _or_fold(disjuncts)
    raise TypeError(f"cannot eliminate quantifiers from {type(f).__name__}")


# ---------------------------------------------------------------------------
# cut extraction


def cut_bounds(constraints, env: dict, var: str = "x"):
    """Reduce a conjunction of one-variable atoms to
    (lower, upper, point) bounds in the model.

    Atoms must be linear in `var`; symbols other than `var` are evaluated
    through `env`.  Var-free atoms are checked outright (a false one raises
    Unsatisfiable); equalities force a point, and conflicting or out-of-range
    points raise Unsatisfiable.
    """
    if env:
        dims = {v.dim for v in env.values()}
        if len(dims) != 1:
            raise ValueError("environment series have mixed dimensions")
        dim = dims.pop()
    else:
        dim = 2
    atoms: list[Atom] = []
    for f in constraints:
        atoms.extend(_conjunct_atoms(f))
    lower = upper = point = None
    for a in atoms:
        coeff, rest = _atom_linear_parts(a, var)
        if coeff == 0:
            if not _eval_qf(a, env, dim):
                raise Unsatisfiable(f"constraint fails outright: {a}")
            continue
        bound_term = rest.scaled(Fraction(-1) / coeff)
        bound = _term_series(bound_term, env, dim)
        if a.rel == "=":
            if point is not None and compare_series(point, bound) != 0:
                raise Unsatisfiable("conflicting point constraints")
            point = bound
        elif coeff > 0:
            if upper is None or compare_series(bound, upper) < 0:
                upper = bound
        else:
            if lower is None or compare_series(bound, lower) > 0:
                lower = bound
    if point is not None:
        if lower is not None and compare_series(lower, point) >= 0:
            raise Unsatisfiable("point constraint below the lower bound")
        if upper is not None and compare_series(point, upper) >= 0:
            raise Unsatisfiable("point constraint above the upper bound")
    return lower, upper, point


def _conjunct_atoms(f: Formula) -> list:
    if isinstance(f, Atom):
        return [f]
    if isinstance(f, TrueF):
        return []
    if isinstance(f, FalseF):
        raise Unsatisfiable("constraint is the false formula")
    if isinstance(f, And):
        return _conjunct_atoms(f.left) + _conjunct_atoms(f.right)
    raise ValueError("cut extraction expects a conjunction of atoms")


def satisfiable(f: Formula, env: dict, var: str = "x", world_cap: int = 64) -> bool:
    """Whether some value of `var` satisfies f under env: lazily scan DNF
    worlds, short-circuiting on the first satisfiable one.  Raises
    BudgetExhausted if no world within the cap is satisfiable and some
    remain unexamined."""
    from .errors import BudgetExhausted

    body = _nnf(f)
    checked = 0
    worlds = iter_worlds(body)
    for world in worlds:
        if checked >= world_cap:
            raise BudgetExhausted(
                f"satisfiability scan exceeded {world_cap} worlds",
                stage="worlds",
            )
        checked += 1
        try:
            lower, upper, point = cut_bounds(world, env, var)
        except Unsatisfiable:
            continue
        if point is not None:
            return True
        if lower is None or upper is None:
            return True
        if compare_series(lower, upper) < 0:
            return True
    return False


# ---------------------------------------------------------------------------
# enumeration


_ENUM_COEFF_CAP = 99  # keeps the enumerated fragment finite


class _Enumeration:
    """Length-lex enumeration of the atomic fragment: true, false, and
    canonical linear atoms whose sides are disjoint-support symbol sums with
    positive integer coefficients (and, for fields, one integer constant),
    all coefficients at most _ENUM_COEFF_CAP, joint gcd 1."""

    def __init__(self, sig: Signature):
        self.sig = sig
        self.by_index: list = []
        self.index_of: dict = {}
        self.complete_len = 0

    def extend_to_length(self, target: int):
        while self.complete_len < target:
            self.complete_len += 1
            self._emit_length(self.complete_len)

    def _emit_length(self, L: int):
        batch = []
        for text, f in (("true", TrueF()), ("false", FalseF())):
            if len(text) == L:
                batch.append((text, f))
        for left_len in range(1, L - 3):
            right_len = L - 3 - left_len
            if right_len < 1:
                continue
            for lp, ls, lc in _sides_of_length(self.sig, left_len):
                for rp, rs, rc in _sides_of_length(self.sig, right_len):
                    if ls & rs:
                        continue
                    if not ls and not rs:
                        continue  # constant-only atoms collapse to true/false
                    lcd, rcd = dict(lc), dict(rc)
                    if CONST in lcd and CONST in rcd:
                        continue
                    g = 0
                    for q in list(lcd.values()) + list(rcd.values()):
                        g = math.gcd(g, q.numerator)
                    if g != 1:
                        continue
                    pos = Term.build(lcd, {})
                    neg = Term.build(rcd, {})
                    batch.append((f"{lp} < {rp}", Atom("<", pos, neg)))
                    if lp <= rp:
                        batch.append((f"{lp} = {rp}", Atom("=", pos, neg)))
        batch.sort(key=lambda kv: kv[0])
        for text, f in batch:
            if text not in self.index_of:
                self.index_of[text] = len(self.by_index)
                self.by_index.append(f)

    @property
    def max_possible_len(self) -> int:
        per_sym = max((len(s) for s in self.sig.symbols), default=1) + 3
        side = len(self.sig.symbols) * (per_sym + 3)
        if self.sig.kind == "field":
            side += 5
        return max(5, 2 * side + 3)


def _sides_of_length(sig: Signature, L: int):
    """All canonical side prints of exact length L as
    (print, support frozenset, coefficient items)."""
    cache = _side_cache.setdefault(sig, {})
    if L in cache:
        return cache[L]
    out = []
    if L == 1:
        out.append(("0", frozenset(), ()))
    symbols = sorted(sig.symbols)

    def chunks_for(sym: str, budget: int):
        res = []
        if len(sym) <= budget:
            res.append((sym, 1))
        for c in range(2, _ENUM_COEFF_CAP + 1):
            text = f"{c}*{sym}"
            if len(text) <= budget:
                res.append((text, c))
        return res

    def build(start_idx, remaining, acc_print, acc_sup, acc_coeffs):
        if remaining == 0 and acc_print:
            out.append((acc_print, frozenset(acc_sup), tuple(acc_coeffs)))
            return
        if sig.kind == "field":
            budget = remaining if not acc_print else remaining - 3
            for c in range(1, _ENUM_COEFF_CAP + 1):
                if len(str(c)) == budget:
                    p = str(c) if not acc_print else f"{acc_print} + {c}"
                    out.append(
                        (p, frozenset(acc_sup),
                         tuple(acc_coeffs) + ((CONST, Fraction(c)),))
                    )
        for i in range(start_idx, len(symbols)):
            sym = symbols[i]
            budget = remaining if not acc_print else remaining - 3
            if budget < 1:
                continue
            for text, coeff in chunks_for(sym, budget):
                p = text if not acc_print else f"{acc_print} + {text}"
                spent = len(text) if not acc_print else len(text) + 3
                build(i + 1, remaining - spent, p, acc_sup | {sym},
                      acc_coeffs + [(((sym, 1),), Fraction(coeff))])

    build(0, L, "", set(), [])
    result = sorted(set(out))
    cache[L] = result
    return result


_side_cache: dict = {}
_enum_cache: dict = {}


def enumerate_formulas(i: int, sig: Signature) -> Formula:
    """The i-th formula of the atomic fragment in length-lex order of
    canonical prints; stable across calls and injective."""
    if i < 0:
        raise ValueError("index must be nonnegative")
    enum = _enum_cache.get(sig)
    if enum is None:
        enum = _Enumeration(sig)
        _enum_cache[sig] = enum
    while len(enum.by_index) <= i:
        if enum.complete_len >= enum.max_possible_len:
            raise ValueError(f"enumeration exhausted below index {i}")
        enum.extend_to_length(enum.complete_len + 1)
    return enum.by_index[i]


def _in_fragment(f: Formula, sig: Signature) -> bool:
    if isinstance(f, (TrueF, FalseF)):
        return True
    if not isinstance(f, Atom):
        return False
    if f.pos.lits or f.neg.lits:
        return False
    const_sides = 0
    for side in (f.pos, f.neg):
        for m, q in side.syms:
            if q.denominator != 1 or not 1 <= q.numerator <= _ENUM_COEFF_CAP:
                return False
            if m == CONST:
                if sig.kind != "field":
                    return False
                const_sides += 1
            elif len(m) != 1 or m[0][1] != 1 or m[0][0] not in sig.symbols:
                return False
    if const_sides > 1:
        return False
    return bool(f.pos.free_symbols() or f.neg.free_symbols())


def formula_index(f: Formula, sig: Signature) -> int:
    """Inverse of enumerate_formulas on formulas of the atomic fragment."""
    f = parse_formula(str(f))  # normalize to the canonical form
    text = str(f)
    if not _in_fragment(f, sig):
        raise ValueError(f"not in the enumerable fragment: {text}")
    enum = _enum_cache.get(sig)
    if enum is None:
        enum = _Enumeration(sig)
        _enum_cache[sig] = enum
    enum.extend_to_length(min(len(text), enum.max_possible_len))
    idx = enum.index_of.get(text)
    if idx is None:
        raise ValueError(f"not in the enumerable fragment: {text}")
    return idx
