import json

import pytest
from hypothesis import given, settings, strategies as st

from cellkit.cli import main
from cellkit.grammar import GroupSyntaxError, format_group, parse_group
from cellkit.groups import FgAbGroup
from cellkit.symbolic import (PrimeSet, ProdZpHat, ProdZpHatModZ, Prufer,
                              PruferSum, Q, QpHat, SymbolicGroup, ZLocal,
                              ZpHat)

PRIMES = (2, 3, 5, 7)


def run_cli(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        import sys
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


# --------------------------------------------------------------------------
# Grammar

nonempty_finite_sets = st.sets(st.sampled_from(PRIMES), min_size=1).map(PrimeSet.of)
any_sets = st.tuples(st.booleans(), st.sets(st.sampled_from(PRIMES))).map(
    lambda t: PrimeSet(t[0], frozenset(t[1])))
atoms = st.one_of(
    st.just(Q()),
    st.sampled_from(PRIMES).map(Prufer),
    st.sampled_from(PRIMES).map(ZpHat),
    st.sampled_from(PRIMES).map(QpHat),
    nonempty_finite_sets.map(ZLocal),
    st.sets(st.sampled_from(PRIMES)).map(
        lambda s: ZLocal(PrimeSet.complement_of(s))),
    st.sets(st.sampled_from(PRIMES)).map(
        lambda s: PruferSum(PrimeSet.complement_of(s))),
    st.sets(st.sampled_from(PRIMES)).map(
        lambda s: ProdZpHat(PrimeSet.complement_of(s))),
    st.sets(st.sampled_from(PRIMES), min_size=1).map(
        lambda s: ProdZpHatModZ(PrimeSet.of(s))),
)
symbolic_groups = st.tuples(
    st.integers(0, 2),
    st.lists(st.integers(2, 12), max_size=2),
    st.lists(atoms, max_size=3),
).map(lambda t: SymbolicGroup.of(
    FgAbGroup.free(t[0]), FgAbGroup.of_orders(t[1]), *t[2]))


class TestGrammar:
    def test_spec_examples(self):
        g = parse_group("Z + Z/2 + Z/4")
        assert g.fg == FgAbGroup(1, (2, 4))
        assert parse_group("Z/3^inf") == SymbolicGroup.of(Prufer(3))
        assert parse_group("Z/6 + Z/4").fg.invariant_factors == (2, 12)

    def test_zero(self):
        assert parse_group("0").is_zero
        assert format_group(SymbolicGroup.zero()) == "0"

    def test_errors_carry_position(self):
        with pytest.raises(GroupSyntaxError) as err:
            parse_group("Z + what + Q")
        assert err.value.position == 4
        with pytest.raises(GroupSyntaxError):
            parse_group("Z/4^inf")  # 4 is not prime
        with pytest.raises(GroupSyntaxError):
            parse_group("Z/0")
        with pytest.raises(GroupSyntaxError):
            parse_group("")

    @settings(max_examples=150, deadline=None)
    @given(symbolic_groups)
    def test_round_trip(self, g):
        assert parse_group(format_group(g)) == g


# --------------------------------------------------------------------------
# Dispatch


class TestDispatch:
    def test_hom_example(self, capsys):
        code, out = run_cli(capsys, "hom", "--a", "Z/4", "--b", "Z/6")
        assert code == 0
        body = json.loads(out)
        assert body["schema"] == "cellkit/1"
        assert body["result"] == {"rank": 0, "torsion": [2]}

    def test_ext_example(self, capsys):
        code, out = run_cli(capsys, "ext", "--a", "Z/2", "--b", "Z")
        assert code == 0
        assert json.loads(out)["result"] == {"rank": 0, "torsion": [2]}

    def test_acyclization_example(self, capsys):
        code, out = run_cli(capsys, "acyclization", "--target", "HZ",
                            "--outcome", "HZ_P", "--primes", "2,3")
        assert code == 0
        body = json.loads(out)
        assert body["result"] == [{
            "group": {"atom": "PruferSum",
                      "primes": {"list": [2, 3], "mode": "cofinite"}},
            "shift": -1,
        }]
        assert body["convention"].startswith("convention")

    def test_cover_on_zero_complex(self, capsys, monkeypatch):
        payload = json.dumps({"lo": 0, "hi": -1, "ranks": {}, "boundaries": {}})
        code, out = run_cli(capsys, "cover", "--k", "0",
                            stdin=payload, monkeypatch=monkeypatch)
        assert code == 0
        body = json.loads(out)
        assert body["result"]["ranks"] == {}

    def test_snf_payload(self, capsys, monkeypatch):
        payload = json.dumps({"matrix": {"rows": 2, "cols": 2,
                                         "data": [2, 4, 6, 8]}})
        code, out = run_cli(capsys, "snf", stdin=payload, monkeypatch=monkeypatch)
        assert code == 0
        assert json.loads(out)["diagonal"] == [2, 4]

    def test_homology_payload(self, capsys, monkeypatch):
        payload = json.dumps({"complex": {
            "lo": 0, "hi": 1, "ranks": {"0": 1, "1": 1},
            "boundaries": {"1": {"rows": 1, "cols": 1, "data": [2]}}}})
        code, out = run_cli(capsys, "homology", stdin=payload,
                            monkeypatch=monkeypatch)
        assert code == 0
        assert json.loads(out)["homology"] == {"0": {"rank": 0, "torsion": [2]}}

    def test_triangle_check_payload(self, capsys, monkeypatch):
        emz = {"lo": 0, "hi": 0, "ranks": {"0": 1}, "boundaries": {}}
        emz2 = {"lo": 0, "hi": 1, "ranks": {"0": 1, "1": 1},
                "boundaries": {"1": {"rows": 1, "cols": 1, "data": [2]}}}
        payload = json.dumps({
            "map": {"source": emz, "target": emz,
                    "components": {"0": {"rows": 1, "cols": 1, "data": [2]}}},
            "candidate": emz2,
        })
        code, out = run_cli(capsys, "triangle-check", stdin=payload,
                            monkeypatch=monkeypatch)
        assert code == 0
        assert json.loads(out)["verdict"] is True

    def test_em_cellularize_modes(self, capsys):
        code, out = run_cli(capsys, "em-cellularize", "--mode", "primary",
                            "--m", "0", "--k", "1", "--n", "2", "--p", "5")
        assert code == 0
        body = json.loads(out)
        assert body["result"]["object"] == [
            {"group": {"rank": 0, "torsion": [5]}, "shift": 0}]
        code, out = run_cli(capsys, "em-cellularize", "--mode", "shape",
                            "--n", "3", "--group", "Q")
        assert code == 0
        assert json.loads(out)["result"]["constraints"]["b_forced_zero"] is True

    def test_constraint_check(self, capsys):
        code, out = run_cli(capsys, "constraint-check", "--b", "0",
                            "--c", "Z/4", "--g", "Z/8")
        assert code == 0
        assert json.loads(out)["verdict"] is True

    def test_ring_obstruction(self, capsys):
        code, out = run_cli(capsys, "ring-obstruction",
                            "--wedge=-1:Psum_(!2,3)")
        assert code == 0
        assert json.loads(out)["verdict"] is True

    def test_semiexact_demo(self, capsys):
        code, out = run_cli(capsys, "semiexact-demo", "--p", "2")
        assert code == 0
        assert json.loads(out)["verdict"] is True


class TestExitCodes:
    def test_schema_violation(self, capsys, monkeypatch):
        code, _ = run_cli(capsys, "snf", stdin="not json",
                          monkeypatch=monkeypatch)
        assert code == 2

    def test_bad_group_text(self, capsys):
        code, _ = run_cli(capsys, "hom", "--a", "Z/frog", "--b", "Z")
        assert code == 2

    def test_symbolic_group_where_fg_needed(self, capsys):
        code, _ = run_cli(capsys, "hom", "--a", "Q", "--b", "Z")
        assert code == 2

    def test_inadmissible_case(self, capsys):
        code, _ = run_cli(capsys, "acyclization", "--target", "HZ",
                          "--outcome", "SigmaZpHat")
        assert code == 2

    def test_bad_complex_payload(self, capsys, monkeypatch):
        payload = json.dumps({"complex": {
            "lo": 0, "hi": 1, "ranks": {"0": 1, "1": 1},
            "boundaries": {"1": {"rows": 2, "cols": 1, "data": [2, 0]}}}})
        code, _ = run_cli(capsys, "homology", stdin=payload,
                          monkeypatch=monkeypatch)
        assert code == 2


class TestDeterminism:
    def test_same_payload_same_seed_byte_identical(self, capsys):
        _, out1 = run_cli(capsys, "closure-suite", "--k", "0",
                          "--samples", "12", "--seed", "5")
        _, out2 = run_cli(capsys, "closure-suite", "--k", "0",
                          "--samples", "12", "--seed", "5")
        assert out1 == out2

    def test_seed_echoed(self, capsys):
        _, out = run_cli(capsys, "tstructure-check", "--k", "1",
                         "--samples", "6", "--seed", "42")
        assert json.loads(out)["seed"] == 42

    def test_suites_report_verdicts(self, capsys):
        code, out = run_cli(capsys, "nontriangulated-suite", "--k", "0")
        assert code == 0
        body = json.loads(out)
        assert body["verdict"] is True
        assert len(body["report"]["checks"]) == 4


class TestAcceptanceGate:
    def test_exit_zero_and_one_line_per_criterion(self, capsys):
        code, out = run_cli(capsys, "acceptance", "--format", "text")
        assert code == 0
        lines = [l for l in out.splitlines() if l.strip().startswith("[")]
        assert len(lines) == 9
        assert all("PASS" in l for l in lines)

    def test_exit_one_on_failure(self, capsys, monkeypatch):
        from cellkit import acceptance as acc
        from cellkit import cli as cli_mod

        def fake_run_all(seed=0):
            return [acc.CriterionResult("stub", False, "forced failure")]

        monkeypatch.setattr(cli_mod.acceptance_mod, "run_all", fake_run_all)
        code, out = run_cli(capsys, "acceptance")
        assert code == 1
        assert json.loads(out)["verdict"] is False
