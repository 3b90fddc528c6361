import functools
import importlib
import json
import math
import subprocess
import sys

import pytest

from eulerlab import cli

MODULES = ["eulerlab.primes", "eulerlab.series", "eulerlab.products", "eulerlab.identities", "eulerlab.goldbach"]

LIBRARY_OPERATIONS = {
    "sieve", "nth_prime", "residue_subsequence", "mobius",
    "dirichlet_eval", "alternating_eval", "zeta_ref", "gamma_ref", "prime_zeta_direct",
    "prime_zeta_mobius", "z_deformed_prime_zeta",
    "euler_product_eval", "general_product_eval", "derive_convergence_params", "continued_product_eval",
    "regularized_exp_identity_residual", "truncation_discrepancy_check", "convergence_scan",
    "split_children", "split_factorization_residual", "even_odd_quotient", "leibniz_div", "assoc_defect",
    "skew_bracket", "jacobi_defect", "interlace_check", "catalan",
    "gk_series", "power_counts", "brute_force_counts", "goldbach_scan", "mellin_residual", "majorization_probe",
}

# one invocation per command family; together they must touch every operation
COVERAGE_RUNS = [
    ["primes", "--limit", "1000", "--nth", "5", "--mobius", "30", "--label", "1,1"],
    ["eval-dirichlet", "--seq", "naturals", "--limit", "1000", "--s-re", "2"],
    ["eval-dirichlet", "--seq", "naturals", "--limit", "1000", "--sign", "alt", "--s-re", "0.5", "--accelerate"],
    ["eval-product", "--limit", "10000", "--sign", "-1"],
    ["eval-product", "--limit", "10000", "--factor", "0,1", "--s-re", "1"],
    ["eval-product", "--limit", "10000", "--sign", "alt", "--continued", "--s-re", "0.8"],
    ["prime-zeta", "--limit", "10000", "--method", "direct"],
    ["prime-zeta", "--method", "mobius", "--s-re", "0.75"],
    ["prime-zeta", "--limit", "10000", "--method", "deformed", "--z", "0.5", "--s-re", "1"],
    ["prime-zeta", "--method", "gamma", "--s-re", "0.5"],
    ["identity", "--name", "exp-factorization", "--limit", "100000"],
    ["identity", "--name", "truncation-bound", "--limit", "100000"],
    ["split", "--limit", "10000", "--depth", "3"],
    ["algebra", "--op", "div", "--a", "6", "--b", "3"],
    ["algebra", "--op", "assoc"],
    ["algebra", "--op", "bracket", "--a", "1", "--b", "2", "--bracket-sign", "+"],
    ["algebra", "--op", "jacobi"],
    ["algebra", "--op", "catalan", "--n", "5"],
    ["algebra", "--op", "interlace", "--limit", "10000", "--label", "1,0", "--label-b", "1,1"],
    ["goldbach", "--n-max", "300", "--oracle"],
    ["goldbach", "--n-max", "1000", "--scan"],
    ["goldbach", "--n-max", "100000", "--probe"],
    ["mellin", "--limit", "1000"],
    ["scan", "--factor", "0,1", "--sigma-grid", "0.75", "--ladder", "1000,2000"],
]


def run_json(args, capsys):
    code = cli.run(args)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def strip_runtime(d):
    d = dict(d)
    d.pop("runtime_ms")
    return d


def test_registry_coverage(monkeypatch, capsys):
    called = set()
    for modname in MODULES + ["eulerlab.cli"]:
        mod = importlib.import_module(modname)
        for name in LIBRARY_OPERATIONS:
            original = getattr(mod, name, None)
            if original is None:
                continue
            base = getattr(original, "__wrapped__", original)

            @functools.wraps(base)
            def spy(*a, _name=name, _base=base, **kw):
                called.add(_name)
                return _base(*a, **kw)

            monkeypatch.setattr(mod, name, spy)
    for argv in COVERAGE_RUNS:
        assert cli.run(argv) == 0, argv
        capsys.readouterr()
    assert LIBRARY_OPERATIONS - called == set()


def test_catalog():
    cat = cli.list_identities()
    assert len(cat) == 9 and "jacobi-defect" in cat
    assert set(cat) == {
        "euler-vs-zeta", "plus-product-quotient", "exp-factorization", "mobius-inversion-pair",
        "split-factorization", "truncation-bound", "assoc-defect", "jacobi-defect", "mellin",
    }
    assert all(isinstance(t, float) and t >= 0 for t in cat.values())


def test_identity_exp_factorization(capsys):
    code, rep = run_json(["identity", "--name", "exp-factorization", "--s-re", "2", "--tol", "1e-9"], capsys)
    assert code == 0 and rep["pass"] is True and rep["residual"] < 1e-9
    for key in ("command", "params", "value", "terms_used", "tail_bound", "residual", "pass", "runtime_ms"):
        assert key in rep
    assert rep["identity_report"]["identity"] == "exp-factorization"


def test_identity_failure_exit_1(capsys):
    code, rep = run_json(["identity", "--name", "euler-vs-zeta", "--limit", "1000", "--no-tail-model", "--tol", "1e-9"], capsys)
    assert code == 1 and rep["pass"] is False


def test_goldbach_oracle_exit(capsys):
    code, rep = run_json(["goldbach", "--k", "1", "--m", "2", "--n-max", "2000", "--oracle"], capsys)
    assert code == 0 and rep["pass"] is True


def test_eval_product_example(capsys):
    code, rep = run_json(["eval-product", "--seq", "primes", "--sign", "-1", "--s-re", "2"], capsys)
    v = rep["value"]["re"]
    assert code == 0 and abs(v - math.pi**2 / 15) <= rep["tail_bound"]


@pytest.mark.parametrize(
    "argv",
    [
        ["identity", "--name", "no-such-identity"],
        ["eval-product", "--s-re", "nan"],
        ["eval-product", "--s-re", "inf"],
        ["goldbach", "--label", "1,5"],
        ["frobnicate"],
        ["identity"],
        ["prime-zeta", "--method", "mobius", "--s-re", "0.3"],
        ["eval-product", "--max-terms", "-1"],
    ],
)
def test_config_errors_exit_2(argv, capsys):
    assert cli.run(argv) == 2
    capsys.readouterr()


def test_resource_limit_exit_3(monkeypatch, capsys):
    monkeypatch.setenv("EULERLAB_MAX_MEMORY", "1M")
    assert cli.run(["primes", "--limit", "100000000"]) == 3
    capsys.readouterr()


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# policy\nmax_terms = 100\ns-re=3\ntail_model = false\n")
    code, rep = run_json(["eval-dirichlet", "--config", str(cfg), "--limit", "1000"], capsys)
    assert code == 0 and rep["terms_used"] == 100 and rep["params"]["s_re"] == 3.0
    code, rep = run_json(["eval-dirichlet", "--config", str(cfg), "--limit", "1000", "--s-re", "2"], capsys)
    assert rep["params"]["s_re"] == 2.0  # explicit flag beats the file
    cfg.write_text("bogus_key = 1\n")
    assert cli.run(["eval-dirichlet", "--config", str(cfg)]) == 2
    cfg.write_text("s_re = nan\n")
    assert cli.run(["eval-dirichlet", "--config", str(cfg)]) == 2
    assert cli.run(["eval-dirichlet", "--config", str(tmp_path / "missing.cfg")]) == 2
    capsys.readouterr()


def test_determinism(tmp_path):
    argv = ["identity", "--name", "split-factorization", "--limit", "100000"]
    texts = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        assert cli.run(argv + ["--output", str(out)]) == 0
        texts.append(out.read_text())
    a, b = (json.loads(t) for t in texts)
    assert strip_runtime(a) == strip_runtime(b)
    canon = [json.dumps(strip_runtime(json.loads(t)), sort_keys=True) for t in texts]
    assert canon[0] == canon[1]
    csv_runs = []
    for k in range(2):
        out = tmp_path / f"s{k}.csv"
        assert cli.run(["scan", "--sigma-grid", "0.75,1.5", "--ladder", "1000,2000", "--format", "csv", "--output", str(out)]) == 0
        csv_runs.append(out.read_bytes())
    assert csv_runs[0] == csv_runs[1]


def test_csv_outputs(capsys):
    assert cli.run(["scan", "--sigma-grid", "0.45,0.75", "--ladder", "1000,2000,4000", "--factor", "0,1", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "sigma,terms,abs_delta,rate,flag" and len(lines) == 7
    assert cli.run(["goldbach", "--n-max", "10", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,count" and lines[11] == "10,3"
    assert cli.run(["identity", "--list", "--format", "csv"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 10


def test_split_and_algebra_reports(capsys):
    code, rep = run_json(["split", "--limit", "100000", "--depth", "6"], capsys)
    assert code == 0 and rep["details"]["partition_ok"] and rep["residual"] < 1e-9
    code, rep = run_json(["algebra", "--op", "jacobi", "--a", "2", "--b", "1", "--c", "3"], capsys)
    assert abs(rep["value"]["re"] + 2.45) < 1e-12
    assert abs(rep["details"]["derived_form"]["re"] + 2.45) < 1e-12
    code, rep = run_json(["algebra", "--op", "jacobi", "--a", "1", "--b", "1", "--c", "2"], capsys)
    assert code == 2


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "eulerlab.cli", "algebra", "--op", "catalan", "--n", "5"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["details"]["catalan"] == 14
