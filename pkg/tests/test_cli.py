"""Command-line front end: type files, subcommands, exit codes, goldens."""

from pathlib import Path

import pytest

from hahnsat.cli import load_type_file, main
from hahnsat.errors import ParseError
from hahnsat.formulas import eval_formula, format_formula
from hahnsat.series import parse_series

FIXTURES = Path(__file__).parent / "fixtures"
GOLDENS = Path(__file__).parent / "goldens"


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


class TestTypeFiles:
    def test_params_and_formulas(self):
        tau, params = load_type_file(str(FIXTURES / "contradictory.type"), 2)
        assert tau.var == "x"
        assert tau.params == ("g1",)
        assert format_formula(tau.emit(0)) == "g1 < x"
        assert format_formula(tau.emit(1)) == "x < g1"
        assert tau.emit(2) is None

    def test_generator_emissions_follow_formulas(self, tmp_path):
        p = tmp_path / "mixed.type"
        p.write_text("param g1 = t\n"
                     "formula 0 < x\n"
                     "generator beta g1 g1\n")
        tau, _ = load_type_file(str(p), 2)
        assert format_formula(tau.emit(0)) == "0 < x"
        assert format_formula(tau.emit(1)) == "g1 < x"
        assert format_formula(tau.emit(2)) == "x < g1"

    def test_comments_and_blanks_ignored(self, tmp_path):
        p = tmp_path / "c.type"
        p.write_text("# header\n\nparam g1 = t\n  # indented\nformula g1 < x\n")
        tau, params = load_type_file(str(p), 2)
        assert set(params) == {"g1"}
        assert tau.emit(1) is None

    def test_unknown_construct_names_line(self, tmp_path):
        p = tmp_path / "bad.type"
        p.write_text("param g1 = t\nemit g1 < x\n")
        with pytest.raises(ParseError, match="bad.type:2"):
            load_type_file(str(p), 2)

    def test_unknown_generator(self, tmp_path):
        p = tmp_path / "bad.type"
        p.write_text("generator zeta\n")
        with pytest.raises(ParseError, match="unknown generator"):
            load_type_file(str(p), 2)

    def test_generator_arity_checked(self, tmp_path):
        p = tmp_path / "bad.type"
        p.write_text("param g1 = t\ngenerator beta g1\n")
        with pytest.raises(ParseError, match="beta needs"):
            load_type_file(str(p), 2)

    def test_generator_param_must_exist(self, tmp_path):
        p = tmp_path / "bad.type"
        p.write_text("generator beta g1 g2\n")
        with pytest.raises(ParseError, match="unknown param"):
            load_type_file(str(p), 2)

    def test_second_generator_rejected(self, tmp_path):
        p = tmp_path / "bad.type"
        p.write_text("generator immediate-tail\ngenerator immediate-tail\n")
        with pytest.raises(ParseError, match="only one generator"):
            load_type_file(str(p), 2)

    def test_empty_file_rejected(self, tmp_path):
        p = tmp_path / "empty.type"
        p.write_text("# nothing\n")
        with pytest.raises(ParseError, match="no formulas"):
            load_type_file(str(p), 2)

    def test_scalar_cut_bounds_stay_consistent(self, tmp_path):
        # Every emission holds at sqrt(2)*t exactly -- even at indices where
        # the approximation floor is weak -- so no two prefixes contradict.
        p = tmp_path / "s.type"
        p.write_text("param g1 = t\ngenerator scalar_cut alg[-2,0,1;1,2] g1\n")
        tau, params = load_type_file(str(p), 2)
        env = dict(params)
        env["x"] = parse_series("alg[-2,0,1;1,2]*t^(1)", 2)
        for i in range(48):
            assert eval_formula(tau.emit(i), env, 2)


class TestPinnedOutputs:
    def test_tree_interval(self, capsys):
        rc, out, _ = run(capsys, "tree", "interval", "101")
        assert rc == 0 and out == "[5/8, 3/4)\n"

    def test_tree_interval_root(self, capsys):
        rc, out, _ = run(capsys, "tree", "interval", "")
        assert rc == 0 and out == "[0, 1)\n"

    def test_qe_existential(self, capsys):
        rc, out, _ = run(capsys, "qe", "exists x (a < x and x < b)")
        assert rc == 0 and out == "a < b\n"

    def test_basis(self, capsys):
        rc, out, _ = run(capsys, "basis", "t + t^2, t")
        assert rc == 0 and out == "t^(2), t^(1)\n"

    def test_pseudo_limit(self, capsys):
        rc, out, _ = run(capsys, "pseudo-limit",
                         "1, 1 + t^(1/2), 1 + t^(1/2) + t^(2/3)")
        assert rc == 0 and out == "1 + t^(1/2) + t^(2/3)\n"

    def test_tree_path(self, capsys):
        rc, out, _ = run(capsys, "tree", "path", "full", "1/3", "4")
        assert rc == 0 and out == "0\n01\n010\n0101\n"

    def test_tree_search_single_branch(self, capsys):
        rc, out, _ = run(capsys, "tree", "search", "single:1011", "3")
        assert rc == 0 and out == "101\n"

    def test_tree_search_exhausted(self, capsys):
        rc, out, _ = run(capsys, "tree", "search", "0\n01", "3")
        assert rc == 0 and out == "none\n"


class TestExitCodes:
    def test_realized_type_exits_zero(self, capsys):
        rc, out, _ = run(capsys, "realize",
                         str(FIXTURES / "residue_sqrt2.type"))
        assert rc == 0
        assert "alg[-2,0,1;1,2]*t^(1)" in out

    def test_contradictory_exits_two_naming_pair(self, capsys):
        rc, out, _ = run(capsys, "realize",
                         str(FIXTURES / "contradictory.type"))
        assert rc == 2
        assert out == "== NOT FINITELY SATISFIABLE ==\ng1 < x\nx < g1\n"

    def test_tiny_budget_exits_three(self, capsys):
        rc, out, _ = run(capsys, "realize",
                         str(FIXTURES / "immediate_tail.type"),
                         "--mode", "field", "--height", "1")
        assert rc == 3
        assert "inconclusive" in out
        assert "stage: realize" in out

    def test_missing_file_exits_one(self, capsys):
        rc, _, err = run(capsys, "realize", "/nonexistent/x.type")
        assert rc == 1 and "error:" in err

    def test_bad_formula_exits_one(self, capsys):
        rc, _, err = run(capsys, "qe", "a <")
        assert rc == 1 and "error:" in err

    def test_bad_usage_exits_one(self, capsys):
        rc, _, _ = run(capsys, "tree")
        assert rc == 1

    def test_help_exits_zero(self, capsys):
        rc, _, _ = run(capsys, "--help")
        assert rc == 0

    def test_pseudo_limit_rejects_non_pseudo_cauchy(self, capsys):
        rc, _, err = run(capsys, "pseudo-limit", "1, 2, 3")
        assert rc == 1 and "pseudo-Cauchy" in err

    def test_tree_path_off_tree_exits_one(self, capsys):
        rc, _, err = run(capsys, "tree", "path", "single:000", "3/4", "2")
        assert rc == 1 and "error:" in err


class TestGoldens:
    CASES = (
        ("residue_sqrt2.report",
         ("realize", str(FIXTURES / "residue_sqrt2.type"))),
        ("beta.report",
         ("realize", str(FIXTURES / "beta.type"))),
        ("immediate_tail_field.report",
         ("realize", str(FIXTURES / "immediate_tail.type"),
          "--mode", "field")),
    )

    @pytest.mark.parametrize("golden,argv", CASES,
                             ids=[c[0] for c in CASES])
    def test_byte_identical_to_golden(self, capsys, golden, argv):
        rc, out, _ = run(capsys, *argv)
        assert rc == 0
        assert out == (GOLDENS / golden).read_text(encoding="utf-8")

    def test_two_runs_byte_identical(self, capsys):
        _, first, _ = run(capsys, "realize",
                          str(FIXTURES / "beta.type"))
        _, second, _ = run(capsys, "realize",
                           str(FIXTURES / "beta.type"))
        assert first == second

    def test_out_file_matches_stdout(self, capsys, tmp_path):
        rc, out, _ = run(capsys, "realize",
                         str(FIXTURES / "residue_sqrt2.type"))
        target = tmp_path / "r.txt"
        rc2 = main(["realize", str(FIXTURES / "residue_sqrt2.type"),
                    "--out", str(target)])
        capsys.readouterr()
        assert rc == rc2 == 0
        assert target.read_text(encoding="utf-8") == out


class TestEval:
    def test_witness_round_trip(self, capsys):
        rc, out, _ = run(capsys, "realize",
                         str(FIXTURES / "residue_sqrt2.type"))
        assert rc == 0
        witness = out.split("== WITNESS ==\n")[1].splitlines()[0]
        rc, out, _ = run(capsys, "eval",
                         str(FIXTURES / "residue_sqrt2.type"),
                         "--at", witness, "--prefix", "48")
        assert rc == 0
        lines = out.splitlines()
        assert len(lines) == 48
        assert all(line.startswith("PASS") for line in lines)

    def test_wrong_witness_shows_fail(self, capsys):
        rc, out, _ = run(capsys, "eval",
                         str(FIXTURES / "residue_sqrt2.type"),
                         "--at", "3*t^(1)", "--prefix", "4")
        assert rc == 0
        assert "FAIL  x < 2*g1" in out

    def test_none_emissions_skipped(self, capsys):
        rc, out, _ = run(capsys, "eval",
                         str(FIXTURES / "contradictory.type"),
                         "--at", "2*t^(1)", "--prefix", "10")
        assert rc == 0
        assert out == "PASS  g1 < x\nFAIL  x < g1\n"
