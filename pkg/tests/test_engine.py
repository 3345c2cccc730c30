"""Cut classification, realization, type completion, and reports."""

from fractions import Fraction as F

import pytest

from hahnsat.engine import (
    Budgets,
    CutOracle,
    GroupTranscendental,
    ImmediateTranscendental,
    Realized,
    ResidueTranscendental,
    Side,
    classify_cut,
    complete_type,
    completed_partial_type,
    gap_center,
    oracle_from_value,
    realize_cut_field,
    realize_cut_group,
    realize_type,
    render_inconclusive_report,
    sequence_is_computable_in,
    standard_height_enum,
)
from hahnsat.errors import (
    BudgetExhausted,
    NotFinitelySatisfiable,
    OracleFailure,
)
from hahnsat.formulas import PartialType, format_formula, parse_formula
from hahnsat.scalars import OracleReal, format_scalar, real_algebraic
from hahnsat.series import (
    add,
    compare_series,
    format_series,
    from_scalar,
    make_exp,
    monomial,
    negate,
    parse_series,
    scale,
    zero_series,
)
from hahnsat.valbasis import valuation_basis

DIM = 2
SQRT2 = real_algebraic([-2, 0, 1], 1, 2)
SQRT3 = real_algebraic([-3, 0, 1], 1, 2)


def t_pow(q, c=1):
    return monomial([F(q)], c, DIM)


def exp_of(q):
    return tuple(make_exp([F(q)], DIM))


ONE = t_pow(0)
T = t_pow(1)


def tail_series(n):
    """1 + t^(1/2) + t^(2/3) + ... with n fractional terms."""
    acc = ONE
    for j in range(2, n + 2):
        acc = add(acc, t_pow(F(j - 1, j)))
    return acc


class TestBudgets:
    def test_defaults(self):
        b = Budgets()
        assert (b.height_budget, b.exponent_denominator_budget,
                b.formula_prefix_budget, b.precision_budget) == (4, 2, 48, 16)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            Budgets(height_budget=0)
        with pytest.raises(ValueError):
            Budgets(precision_budget=-1)


class TestCutOracle:
    def test_memoized_queries_log_once(self):
        oracle = oracle_from_value(T, standard_height_enum([T]))
        oracle.side(t_pow(1, 2))
        oracle.side(t_pow(1, 2))
        oracle.side(t_pow(2))
        assert len(oracle.log) == 2
        assert [s for _, s in oracle.log] == [Side.ABOVE, Side.BELOW]

    def test_second_distinct_equal_rejected(self):
        oracle = CutOracle(lambda e: Side.EQUAL, standard_height_enum([T]))
        oracle.side(T)
        with pytest.raises(OracleFailure):
            oracle.side(t_pow(2))

    def test_check_monotone(self):
        honest = oracle_from_value(T, standard_height_enum([T]))
        honest.side(t_pow(1, 2))
        honest.side(t_pow(2))
        assert honest.check_monotone() is True
        lying = CutOracle(
            lambda e: Side.ABOVE if compare_series(e, T) < 0 else Side.BELOW,
            standard_height_enum([T]))
        lying.side(t_pow(1, 2))
        lying.side(t_pow(2))
        assert lying.check_monotone() is False


class TestHeightEnum:
    def test_first_generation(self):
        enum = standard_height_enum([T])
        assert [format_series(e) for e in enum(1)] == ["-t^(1)", "t^(1)"]

    def test_no_repeats_across_generations(self):
        enum = standard_height_enum([T, t_pow(2)])
        seen = []
        for h in (1, 2, 3):
            seen.extend(enum(h))
        assert len(seen) == len(set(seen))

    def test_paced_batches_lead_their_generation(self):
        marker = parse_series("t + t^2", DIM)
        enum = standard_height_enum([T], paced=[[marker], [t_pow(3)]])
        gen1 = enum(1)
        assert gen1[0] == marker
        assert enum(2)[0] == t_pow(3)

    def test_paced_duplicates_dropped(self):
        enum = standard_height_enum([T], paced=[[T, T]])
        gen1 = enum(1)
        assert gen1.count(T) == 1


class TestGapCenter:
    def test_no_bounds(self):
        assert gap_center(None, None, DIM).is_zero()

    def test_straddle(self):
        assert gap_center(negate(T), T, DIM).is_zero()

    def test_same_valuation_midpoint(self):
        c = gap_center(T, t_pow(1, 3), DIM)
        assert format_series(c) == "2*t^(1)"

    def test_cross_class(self):
        c = gap_center(t_pow(2), T, DIM)
        assert format_series(c) == "t^(3/2)"

    def test_only_positive_lower(self):
        c = gap_center(t_pow(1, 2), None, DIM)
        assert format_series(c) == "1 + 2*t^(1)"

    def test_only_positive_upper(self):
        assert gap_center(None, t_pow(1, 2), DIM).is_zero()

    def test_only_negative_upper(self):
        c = gap_center(None, negate(T), DIM)
        assert format_series(c) == "-1 - t^(1)"

    def test_zero_lower(self):
        c = gap_center(zero_series(DIM), T, DIM)
        assert format_series(c) == "t^(2)"


class TestClassifyGroup:
    def test_residue_sqrt2(self):
        hidden = monomial([F(1)], SQRT2, DIM)
        oracle = oracle_from_value(hidden, standard_height_enum([T]))
        basis = valuation_basis([T])
        cls = classify_cut(oracle, basis, Budgets(), mode="group")
        assert isinstance(cls, ResidueTranscendental)
        assert format_series(cls.d0) == "t^(1)"
        assert format_series(cls.scale) == "t^(1)"
        assert tuple(cls.level) == exp_of(1)
        assert format_scalar(cls.residue) == "alg[-1,2,1;0,1]"
        w = realize_cut_group(cls, oracle, basis, Budgets())
        assert format_series(w) == "alg[-2,0,1;1,2]*t^(1)"
        assert compare_series(w, hidden) == 0
        assert len(oracle.log) == 24

    def test_value_gap_sqrt_exponent(self):
        hidden = t_pow(F(1, 2))
        oracle = oracle_from_value(hidden, standard_height_enum([ONE, T]))
        basis = valuation_basis([ONE, T])
        cls = classify_cut(oracle, basis, Budgets(), mode="group")
        assert isinstance(cls, GroupTranscendental)
        assert cls.d0.is_zero()
        assert cls.direction == 1
        assert tuple(cls.lower) == exp_of(0)
        assert tuple(cls.upper) == exp_of(1)
        w = realize_cut_group(cls, oracle, basis, Budgets())
        assert format_series(w) == "t^(1/2)"

    def test_realized_from_enumeration(self):
        hidden = t_pow(1, 2)
        oracle = oracle_from_value(hidden, standard_height_enum([T]))
        cls = classify_cut(oracle, valuation_basis([T]), Budgets())
        assert isinstance(cls, Realized)
        assert compare_series(cls.element, hidden) == 0

    def test_realized_at_zero(self):
        oracle = oracle_from_value(zero_series(DIM),
                                   standard_height_enum([T]))
        cls = classify_cut(oracle, valuation_basis([T]), Budgets())
        assert isinstance(cls, Realized)
        assert cls.element.is_zero()

    def test_rational_digit_realizes(self):
        hidden = t_pow(1, F(5, 3))
        oracle = oracle_from_value(hidden, standard_height_enum([T]))
        cls = classify_cut(oracle, valuation_basis([T]), Budgets())
        assert isinstance(cls, Realized)
        assert compare_series(cls.element, hidden) == 0

    def test_negative_residue(self):
        hidden = negate(monomial([F(1)], SQRT2, DIM))
        oracle = oracle_from_value(hidden, standard_height_enum([T]))
        basis = valuation_basis([T])
        cls = classify_cut(oracle, basis, Budgets(), mode="group")
        assert isinstance(cls, ResidueTranscendental)
        w = realize_cut_group(cls, oracle, basis, Budgets())
        assert compare_series(w, hidden) == 0

    def test_uncertified_residue_refuses_realization(self):
        rho = OracleReal(lambda n: (F(0), F(1, 2 ** n)), name="rho")
        cls = ResidueTranscendental(d0=zero_series(DIM), scale=T,
                                    residue=rho, level=exp_of(1))
        oracle = oracle_from_value(T, standard_height_enum([T]))
        for realize in (realize_cut_group, realize_cut_field):
            with pytest.raises(BudgetExhausted) as ei:
                realize(cls, oracle, valuation_basis([T]), Budgets())
            assert ei.value.stage == "realize"


class TestClassifyField:
    def test_exact_algebraic_constant_shift(self):
        hidden = add(from_scalar(SQRT3, DIM), T)
        oracle = oracle_from_value(hidden, standard_height_enum([ONE, T]))
        basis = valuation_basis([ONE, T])
        cls = classify_cut(oracle, basis, Budgets(), mode="field")
        assert isinstance(cls, ResidueTranscendental)
        assert format_series(cls.d0) == "1"
        assert tuple(cls.level) == exp_of(0)
        w = realize_cut_field(cls, oracle, basis, Budgets())
        assert format_series(w) == "alg[-3,0,1;1,2] + t^(1)"
        assert compare_series(w, hidden) == 0

    def test_cube_root_exponent_needs_denominator_budget(self):
        hidden = t_pow(F(1, 3))
        basis = valuation_basis([ONE, T])
        coarse = Budgets(exponent_denominator_budget=1)
        oracle = oracle_from_value(hidden, standard_height_enum([ONE, T]))
        cls = classify_cut(oracle, basis, coarse, mode="field")
        assert isinstance(cls, GroupTranscendental)
        assert format_series(realize_cut_field(cls, oracle, basis,
                                               coarse)) == "t^(1/2)"
        fine = Budgets(exponent_denominator_budget=3)
        oracle2 = oracle_from_value(hidden, standard_height_enum([ONE, T]))
        cls2 = classify_cut(oracle2, basis, fine, mode="field")
        assert isinstance(cls2, Realized)
        assert format_series(cls2.element) == "t^(1/3)"

    def test_immediate_chain_and_pseudo_limit(self):
        hidden = tail_series(40)
        budgets = Budgets(height_budget=5, exponent_denominator_budget=1)

        def enum3(h):
            return [tail_series(h), from_scalar(h, DIM),
                    from_scalar(-h, DIM), from_scalar(F(1, h), DIM),
                    from_scalar(F(-1, h), DIM)]

        oracle = oracle_from_value(hidden, enum3)
        basis = valuation_basis([ONE])
        cls = classify_cut(oracle, basis, budgets, mode="field")
        assert isinstance(cls, ImmediateTranscendental)
        assert len(cls.chain) == 7
        assert format_series(cls.chain[-1]) == (
            "1 + t^(1/2) + t^(2/3) + t^(3/4) + t^(4/5) + t^(5/6)")
        w = realize_cut_field(cls, oracle, basis, budgets)
        assert format_series(w) == (
            "1 + t^(1/2) + t^(2/3) + t^(3/4) + t^(4/5) + t^(5/6) + t^(1)")

    def test_immediate_refused_in_group_mode(self):
        hidden = tail_series(40)
        budgets = Budgets(height_budget=5, exponent_denominator_budget=1)

        def enum3(h):
            return [tail_series(h), from_scalar(h, DIM),
                    from_scalar(-h, DIM), from_scalar(F(1, h), DIM),
                    from_scalar(F(-1, h), DIM)]

        oracle = oracle_from_value(hidden, enum3)
        with pytest.raises(BudgetExhausted):
            classify_cut(oracle, valuation_basis([ONE]), budgets,
                         mode="group")


def beta_type():
    def emit(i):
        k = i // 2
        if i % 2 == 0:
            return parse_formula(f"{k + 1}*g2 < x")
        return parse_formula(f"{k + 1}*x < g1")

    return PartialType(emit, "x", ("g1", "g2"))


BETA_ENV = {"g1": T, "g2": t_pow(2)}


class TestCompleteType:
    def test_beta_completion_store(self):
        comp = complete_type(beta_type(), BETA_ENV)
        assert comp.bits == (
            "110001100000010100010010100000101000001010000010")
        assert format_series(comp.lower) == "24*t^(2)"
        assert format_series(comp.upper) == "1/24*t^(1)"
        assert comp.point is None
        assert comp.interval_states == 1

    def test_completion_is_idempotent(self):
        comp = complete_type(beta_type(), BETA_ENV)
        again = complete_type(completed_partial_type(comp, ("g1", "g2")),
                              BETA_ENV)
        assert again.bits == comp.bits

    def test_conflicting_pair_is_named(self):
        def emit(i):
            return parse_formula("g1 < x" if i == 0 else "x < g1")

        tau = PartialType(emit, "x", ("g1",))
        with pytest.raises(NotFinitelySatisfiable) as info:
            complete_type(tau, {"g1": T})
        assert info.value.witness == ("g1 < x", "x < g1")

    def test_degenerate_emission_alone(self):
        tau = PartialType(lambda i: parse_formula("x < x"), "x", ())
        with pytest.raises(NotFinitelySatisfiable) as info:
            complete_type(tau, {})
        assert info.value.witness == ("false",)

    def test_none_emissions_are_skipped(self):
        def emit(i):
            if i % 3:
                return None
            return parse_formula("g1 < x")

        comp = complete_type(PartialType(emit, "x", ("g1",)), {"g1": T})
        assert len(comp.thetas) == 16
        assert format_series(comp.lower) == "t^(1)"

    def test_quantified_emission_is_eliminated(self):
        def emit(i):
            if i == 0:
                return parse_formula("exists y (g1 < y and y < x)")
            return None

        comp = complete_type(PartialType(emit, "x", ("g1",)), {"g1": T})
        assert format_formula(comp.thetas[0][1]) == "g1 < x"

    def test_point_store(self):
        tau = PartialType(lambda i: parse_formula("x = g1"), "x", ("g1",))
        comp = complete_type(tau, {"g1": T})
        assert format_series(comp.point) == "t^(1)"


class TestRealizeType:
    def test_beta_value_gap(self):
        res = realize_type(beta_type(), BETA_ENV, mode="group")
        assert format_series(res.witness) == "t^(3/2)"
        assert isinstance(res.classification, GroupTranscendental)
        assert all(ok for _, ok in res.verification)
        assert "store: lower=24*t^(2) upper=1/24*t^(1) point=-" in res.report
        assert "value-gap fill" in res.report

    def test_beta_determinism(self):
        first = realize_type(beta_type(), BETA_ENV, mode="group")
        second = realize_type(beta_type(), BETA_ENV, mode="group")
        assert first.report == second.report

    def test_scalar_cut_residue(self):
        from math import isqrt

        def emit(i):
            k = i // 2
            p = isqrt(2 * 4 ** k)
            if i % 2 == 0:
                return parse_formula(f"{p}*g1 < {2 ** k}*x")
            return parse_formula(f"{2 ** k}*x < {p + 1}*g1")

        tau = PartialType(emit, "x", ("g1",))
        res = realize_type(tau, {"g1": T}, mode="group")
        assert format_series(res.witness) == "alg[-2,0,1;1,2]*t^(1)"
        assert all(ok for _, ok in res.verification)
        assert "free decisions: 0" in res.report
        assert "oracle queries: 24" in res.report

    def test_point_type_realized_exactly(self):
        tau = PartialType(lambda i: parse_formula("x = g1"), "x", ("g1",))
        res = realize_type(tau, {"g1": T})
        assert format_series(res.witness) == "t^(1)"
        assert "exact element" in res.report


def tail_type():
    def a_text(k):
        return " + ".join(["1"] + [f"t^({j}/{j + 1})"
                                   for j in range(1, k + 1)])

    def emit(i):
        k = i // 2 + 1
        if i % 2 == 0:
            return parse_formula(f"{a_text(k - 1)} < x")
        return parse_formula(f"x < {a_text(k - 1)} + 2*t^({k}/{k + 1})")

    return PartialType(emit, "x", ())


class TestRealizeTailType:
    def test_pseudo_limit_fill_at_height_four(self):
        res = realize_type(tail_type(), {}, mode="field",
                           budgets=Budgets(height_budget=4,
                                           formula_prefix_budget=10))
        assert format_series(res.witness) == (
            "1 + t^(1/2) + t^(2/3) + t^(3/4) + t^(4/5) + t^(1)")
        assert "pseudo-limit fill" in res.report
        assert all(ok for _, ok in res.verification)

    def test_center_hit_at_height_five(self):
        res = realize_type(tail_type(), {}, mode="field",
                           budgets=Budgets(height_budget=5,
                                           formula_prefix_budget=10))
        assert format_series(res.witness) == (
            "1 + t^(1/2) + t^(2/3) + t^(3/4) + t^(4/5) + t^(5/6)")
        assert "exact element" in res.report

    def test_short_chain_exhausts(self):
        with pytest.raises(BudgetExhausted) as info:
            realize_type(tail_type(), {}, mode="field",
                         budgets=Budgets(height_budget=1,
                                         formula_prefix_budget=10))
        assert info.value.stage == "realize"

    def test_deep_prefix_clamps_witness_into_store(self):
        # At prefix 48 the store reaches a_23 while the height-4 chain stops
        # at a_4; the witness must still satisfy every decided emission.
        res = realize_type(tail_type(), {}, mode="field")
        assert all(ok for _, ok in res.verification)
        assert "pseudo-limit fill (clamped to the decided prefix)" \
            in res.report
        assert format_series(res.witness).endswith("t^(23/24) + t^(24/25)")


class TestInconclusiveReport:
    def test_rendering(self):
        try:
            realize_type(tail_type(), {}, mode="field",
                         budgets=Budgets(height_budget=1,
                                         formula_prefix_budget=10))
        except BudgetExhausted as exc:
            text = render_inconclusive_report(
                exc, "field", Budgets(height_budget=1,
                                      formula_prefix_budget=10))
        assert "inconclusive" in text
        assert "stage: realize" in text
        assert "detail: pseudo-sequence too short (1 record(s))" in text


class TestComputableSequences:
    @staticmethod
    def sqrt2_real():
        rho = real_algebraic([-2, 0, 1], 1, 2)
        return OracleReal(lambda n: rho.interval() if rho.refine(
            F(1, 2 ** n)) or True else None, name="sqrt2")

    def test_constant_generator_needs_no_precision(self):
        emit = sequence_is_computable_in(
            lambda i, r: parse_formula("g1 < x"), self.sqrt2_real())
        emit(3)
        assert emit.precision_log[3] == 0

    def test_quantized_approximant_generator(self):
        def emit_raw(i, r):
            lo, hi = r.interval(2 * i + 4)
            p = (lo * 2 ** i).__floor__()
            return parse_formula(f"{p}*g1 < {2 ** i}*x")

        emit = sequence_is_computable_in(emit_raw, self.sqrt2_real())
        f = emit(4)
        assert format_formula(f) == "11*g1 < 8*x"
        assert emit.precision_log[4] == 12

    def test_raw_endpoint_generator_is_rejected(self):
        def emit_raw(i, r):
            lo, _ = r.interval(i + 2)
            return parse_formula(f"{lo.numerator}*g1 < {lo.denominator}*x")

        with pytest.raises(OracleFailure):
            sequence_is_computable_in(emit_raw, self.sqrt2_real())

    def test_branch_on_half_resolves_at_precision_two(self):
        third = OracleReal(lambda n: (F(1, 3) - F(1, 2 ** (n + 1)),
                                      F(1, 3) + F(1, 2 ** (n + 1))),
                           name="third")

        def emit_raw(i, r):
            n = 0
            while True:
                lo, hi = r.interval(n)
                if hi < F(1, 2):
                    return parse_formula(f"{i} < x")
                if F(1, 2) <= lo:
                    return parse_formula(f"x < {i}")
                n += 1

        emit = sequence_is_computable_in(emit_raw, third)
        assert format_formula(emit(0)) == "0 < x"
        assert emit.precision_log[0] == 2
