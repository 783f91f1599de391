import json

import pytest

from qma import cli
from qma.matfile import InputError, format_matrix, parse_matrix, read_matrix, write_matrix
from qma.ncalgebra import QuantumMatrixAlgebra
from qma.qfield import q, reflect
from qma.rmatrix import ValidationError, builtin, standard_rhat
from qma.symfun import matrix_power, wedge_power
from qma.tensorspace import SparseOp
from qma.verifier import (
    CHECKS,
    SuiteConfig,
    check_cayley_hamilton,
    check_chn,
    check_chn_sym,
    check_commutativity,
    check_inverse_chn,
    check_newton,
    check_wronski,
    cayley_hamilton_residual,
    chn_residual,
    chn_sym_residual,
    default_commutator_pairs,
    run_suite,
    sample_order,
)


# ---------------------------------------------------------------------------
# identities
# ---------------------------------------------------------------------------


def test_chn_k1_is_exact_zero(alg2):
    assert chn_residual(alg2, 1).is_zero()
    assert chn_sym_residual(alg2, 1).is_zero()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_chn(alg2, k):
    assert check_chn(alg2, k) is None
    assert check_chn_sym(alg2, k) is None


def test_chn_free_vs_ideal(alg2):
    # k=2 holds in the free algebra since 2_q A^(2) = q - R; k=3 and CH need the ideal
    assert chn_residual(alg2, 2).is_zero()
    assert not chn_residual(alg2, 3).is_zero()
    assert not cayley_hamilton_residual(alg2).is_zero()


@pytest.mark.parametrize("k", [2, 3])
def test_reflection_maps_chn_to_chn_sym(alg2, k):
    assert chn_residual(alg2, k, reflect(q)) == chn_sym_residual(alg2, k)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_newton_wronski(alg2, k):
    assert check_newton(alg2, k) is None
    assert check_wronski(alg2, k) is None


def test_cayley_hamilton(alg2):
    assert check_cayley_hamilton(alg2) is None


@pytest.mark.parametrize("k", [1, 2])
def test_inverse_chn(alg2, k):
    assert check_inverse_chn(alg2, k) is None


def test_commutativity(alg2):
    pairs = [(("s", 1), ("sigma", 2)), (("sigma", 1), ("sigma", 2)), (("tau", 1), ("s", 2)), (("sigma", 1), ("tau", 2))]
    assert check_commutativity(alg2, pairs) is None
    assert check_commutativity(alg2, [(("sigma", 1), ("sigma", 1))]) is None


def test_commutator_pairs():
    pairs = default_commutator_pairs(3)
    assert (("s", 1), ("sigma", 2)) in pairs
    assert (("tau", 1), ("s", 2)) in pairs
    assert (("s", 1), ("s", 1)) not in pairs
    assert all(a[1] <= b[1] and a[1] + b[1] <= 3 for a, b in pairs)


def test_failure_carries_witness(rtt2):
    full = QuantumMatrixAlgebra(rtt2)
    labels = [r.label for r in full.relations()]
    broken = QuantumMatrixAlgebra(rtt2, labels[:8])
    w = check_cayley_hamilton(broken)
    assert w and w.startswith("entry ") and "M[" in w


def test_wrong_power_is_rejected(alg_rtt2):
    # replacing M^2bar by the wedge power must break CHN at k = 2
    alg = alg_rtt2
    bogus = wedge_power(alg, 2).value - matrix_power(alg, 2).value
    assert alg.op_membership(bogus) is not None


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------


def test_suite_all_pass():
    rep = run_suite(SuiteConfig(family="rtt-standard", N=2, kmax=2))
    assert rep.aggregate["status"] == "pass"
    assert rep.exit_code == 0
    names = [c.name for c in rep.checks]
    assert names[0] == "lemma-a"
    assert names.index("shift") < names.index("chn[k=1]") < names.index("newton[k=1]")
    assert names[-1].startswith("commutativity")
    assert all(c.mode == "exact" and c.elapsed_ms is None for c in rep.checks)


def test_report_field_order():
    doc = json.loads(run_suite(SuiteConfig(checks=["chn"])).to_json())
    assert list(doc) == ["config", "preflight", "checks", "aggregate"]
    assert list(doc["checks"][0]) == ["name", "mode", "status", "witness", "elapsed_ms"]
    assert [p["name"] for p in doc["preflight"]][:4] == ["ybe-R", "ybe-F", "compatible", "hecke"]


def test_deterministic_reports():
    cfg = SuiteConfig(family="re-standard", mode="fast", seed=11, checks=["chn", "newton"])
    assert run_suite(cfg).to_json() == run_suite(cfg).to_json()


def test_timings_opt_in():
    rep = run_suite(SuiteConfig(checks=["chn"], timings=True))
    assert all(isinstance(c.elapsed_ms, float) for c in rep.checks)


def test_fast_mode_probabilistic():
    rep = run_suite(SuiteConfig(family="re-standard", mode="fast", seed=3, checks=["chn", "cayley-hamilton"]))
    assert rep.aggregate["status"] == "pass"
    assert {c.mode for c in rep.checks} == {"probabilistic"}


def test_sample_order():
    a = sample_order(5)
    assert a == sample_order(5)
    assert sorted(a) == list(range(2, 101))
    assert a != sample_order(6)


def test_kmax_beyond_height():
    rep = run_suite(SuiteConfig(kmax=3, checks=["newton", "wronski", "inverse-chn"]))
    names = [c.name for c in rep.checks]
    assert "newton[k=3]" in names and "wronski[k=3]" in names
    # inverse CHN stops at the height
    assert "inverse-chn[k=3]" not in names
    assert rep.aggregate["status"] == "pass"


def test_dropped_relations_fail_exact_and_fast():
    for mode in ("exact", "fast"):
        rep = run_suite(SuiteConfig(mode=mode, drop_relations=8, checks=["cayley-hamilton"]))
        assert rep.aggregate["status"] == "fail"
        assert rep.exit_code == 1
        assert rep.checks[0].witness


def test_bad_config():
    with pytest.raises(InputError):
        run_suite(SuiteConfig(family="nope"))
    with pytest.raises(InputError):
        run_suite(SuiteConfig(checks=["bogus"]))
    with pytest.raises(InputError):
        run_suite(SuiteConfig(kmax=0))
    with pytest.raises(InputError):
        run_suite(SuiteConfig(mode="slow"))


# ---------------------------------------------------------------------------
# matrix files and custom input
# ---------------------------------------------------------------------------


def test_matrix_round_trip(tmp_path):
    R = standard_rhat(3)
    path = tmp_path / "R.txt"
    write_matrix(R, path)
    assert read_matrix(path) == R
    assert parse_matrix(format_matrix(R)) == R


def test_matrix_file_format():
    text = """
    # standard R-matrix, N=2
    dim 2 arity 2
    0 0 0 0 q
    0 1 1 0 1
    1 0 0 1 1   # trailing comment
    0 1 0 1 q - q^-1
    1 1 1 1 q
    """
    assert parse_matrix(text) == standard_rhat(2)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "dim 2\n0 0 0 0 1",
        "dim 2 arity 3\n",
        "dim 2 arity 2\n0 0 0 1",
        "dim 2 arity 2\n0 0 0 2 1",
        "dim 2 arity 2\n0 0 0 x 1",
        "dim 2 arity 2\n0 0 0 0 q^",
        "dim 2 arity 2\n0 0 0 0 1\n0 0 0 0 2",
    ],
)
def test_matrix_file_errors(text):
    with pytest.raises(InputError):
        parse_matrix(text)


def _write_pair(tmp_path, R, F):
    write_matrix(R, tmp_path / "R.txt")
    write_matrix(F, tmp_path / "F.txt")
    return str(tmp_path / "R.txt"), str(tmp_path / "F.txt")


def test_custom_pair_runs(tmp_path):
    pair = builtin("re-standard", 2)
    r, f = _write_pair(tmp_path, pair.Rhat, pair.Fhat)
    rep = run_suite(SuiteConfig(family="custom", N=0, r_matrix=r, f_matrix=f, nmax=3, checks=["chn"]))
    assert rep.aggregate["status"] == "pass"


def test_custom_requires_nmax(tmp_path):
    pair = builtin("rtt-standard", 2)
    r, f = _write_pair(tmp_path, pair.Rhat, pair.Fhat)
    with pytest.raises(InputError):
        run_suite(SuiteConfig(family="custom", r_matrix=r, f_matrix=f))


def test_custom_not_closed(tmp_path):
    R = standard_rhat(2)
    r, f = _write_pair(tmp_path, R, SparseOp.identity(2, 2))
    with pytest.raises(ValidationError) as ei:
        run_suite(SuiteConfig(family="custom", N=2, r_matrix=r, f_matrix=f, nmax=3))
    closed = [p for p in ei.value.report.preflight if p["name"] == "closed"][0]
    assert closed["status"] == "fail" and "reshuffled" in closed["witness"]
    assert ei.value.report.exit_code == 2


def test_missing_file():
    with pytest.raises(InputError):
        read_matrix("/nonexistent/R.txt")


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def test_cli_check_pass(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code = cli.main(["check", "--family", "rtt-standard", "--n", "2", "--checks", "chn,newton", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["aggregate"]["status"] == "pass"
    assert doc["config"]["checks"] == ["chn", "newton"]


def test_cli_stdout(capsys):
    assert cli.main(["check", "--family", "rtt-standard", "--checks", "chn"]) == 0
    assert json.loads(capsys.readouterr().out)["aggregate"]["status"] == "pass"


def test_cli_fail_exit_code(tmp_path):
    out = tmp_path / "rep.json"
    code = cli.main(["check", "--family", "rtt-standard", "--checks", "cayley-hamilton", "--drop-relations", "8", "--out", str(out)])
    assert code == 1
    assert json.loads(out.read_text())["checks"][0]["witness"]


def test_cli_validation_exit_code(tmp_path):
    r, f = _write_pair(tmp_path, standard_rhat(2), SparseOp.identity(2, 2))
    out = tmp_path / "rep.json"
    code = cli.main(["check", "--r-matrix", r, "--f-matrix", f, "--nmax", "3", "--out", str(out)])
    assert code == 2
    assert json.loads(out.read_text())["aggregate"]["status"] == "error"


def test_cli_input_errors(tmp_path, capsys):
    assert cli.main(["check", "--r-matrix", str(tmp_path / "R.txt")]) == 2
    assert cli.main(["check"]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("dim 2 arity 2\n0 0 0 0 ??\n")
    assert cli.main(["check", "--r-matrix", str(bad), "--f-matrix", str(bad), "--nmax", "3"]) == 2
    with pytest.raises(SystemExit):
        cli.main(["check", "--family", "rtt-standard", "--checks", "nope"])


def test_cli_families_and_describe(capsys):
    assert cli.main(["families"]) == 0
    out = capsys.readouterr().out
    assert "rtt-standard" in out and "re-standard" in out
    assert cli.main(["describe", "--family", "re-standard"]) == 0
    out = capsys.readouterr().out
    assert "height:    2" in out and "q^-3" in out


def test_cli_all_checks_listed():
    assert set(cli._parse_checks("all")) == set(CHECKS)
