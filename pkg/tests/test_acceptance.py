"""End-to-end acceptance criteria, run through the installed command line tool.

Each criterion appends one summary line (printed at the end of the session).
Items that cannot be met as stated are strict xfails carrying the literal
check; the analysis for each is in the decision ledger.
"""

import csv
import json
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from weylmod.flow import singular_parameters

pytestmark = pytest.mark.acceptance

EXAMPLE_STATE = Path(__file__).resolve().parents[1] / "src" / "weylmod" / "data" / "example_state.json"

RUNTIME_LIMITS = {"spinor": 5.0, "flow": 30.0, "wave": 120.0, "modular": 600.0, "entropy": 600.0}
EXPECTED_FAILURES = {
    "wave": {"weyl_residual_order"},
    "modular": {"support_bound_literal_plus", "forward_order", "central_order"},
    "entropy": {"generator_vs_energy"},
}


def run_cli(args, threads=None, tmp=None):
    env = dict(os.environ)
    if threads is not None:
        env["WEYLMOD_THREADS"] = str(threads)
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "weylmod.cli", "-q", *args],
                          capture_output=True, text=True, env=env)
    return proc, time.perf_counter() - start


def verify(suite, out_dir, threads=None):
    out = Path(out_dir) / f"{suite}-{threads or 'env'}.json"
    proc, elapsed = run_cli(["verify", "--suite", suite, "--seed", "7", "--out", str(out)], threads)
    assert proc.returncode in (0, 1), proc.stderr
    report = json.loads(out.read_text())
    return report, elapsed, proc.returncode


_cache = {}


def suite_result(suite, tmp_path_factory):
    if suite not in _cache:
        _cache[suite] = verify(suite, tmp_path_factory.mktemp(suite))
    return _cache[suite]


def checks_by_name(report):
    return {c["check_name"]: c for c in report["checks"]}


def record(criterion, ok, detail):
    ACCEPTANCE_LINES.setdefault(criterion, []).append((ok, detail))


def assert_suite(criterion, suite, tmp_path_factory):
    report, elapsed, code = suite_result(suite, tmp_path_factory)
    expected = EXPECTED_FAILURES.get(suite, set())
    unexpected = [c["check_name"] for c in report["checks"]
                  if not c["pass"] and c["check_name"] not in expected]
    in_time = elapsed < RUNTIME_LIMITS[suite]
    met = not unexpected and in_time and all(
        c["pass"] for c in report["checks"] if c["check_name"] in expected)
    detail = f"{suite} suite, {len(report['checks'])} checks, {elapsed:.1f} s"
    if expected:
        failed = sorted(c["check_name"] for c in report["checks"] if not c["pass"])
        detail += f"; failing as stated: {', '.join(failed) or 'none'}"
    record(criterion, met, detail)
    assert not unexpected, unexpected
    assert in_time, f"{elapsed:.1f} s over {RUNTIME_LIMITS[suite]} s"
    assert code == (0 if report["passed"] else 1)
    return checks_by_name(report)


# ----------------------------------------------------------------- criterion 1

def test_criterion_1_exact_algebra(tmp_path_factory):
    checks = assert_suite(1, "spinor", tmp_path_factory)
    assert all(c["value"] < 1e-12 for c in checks.values())


# ----------------------------------------------------------------- criterion 2

def test_criterion_2_flow(tmp_path_factory):
    checks = assert_suite(2, "flow", tmp_path_factory)
    assert checks["tau_determinant"]["value"] < 1e-12
    assert checks["nu_group_law"]["value"] < 1e-10
    assert checks["jacobian_fd"]["value"] < 1e-6
    assert checks["mobius_boundary_limit"]["value"] < 1e-8
    assert checks["tau_inverse_sign_mismatch"]["value"] == 0


# ----------------------------------------------------------------- criterion 3

def test_criterion_3_wave(tmp_path_factory):
    checks = assert_suite(3, "wave", tmp_path_factory)
    assert checks["parseval"]["value"] < 1e-10
    assert checks["huygens_exterior"]["value"] < 1e-8
    assert checks["v_isometry"]["value"] < 1e-10
    assert checks["v_inverse"]["value"] < 1e-10
    assert checks["onshell_identity"]["value"] < 1e-10
    assert checks["v_of_test_function"]["value"] < 1e-8
    assert checks["weyl_residual_decreasing"]["pass"]


@pytest.mark.xfail(strict=True, reason="centred differences converge to order 2 from below")
def test_criterion_3_weyl_residual_second_order(tmp_path_factory):
    checks = checks_by_name(suite_result("wave", tmp_path_factory)[0])
    assert checks["weyl_residual_order"]["value"] >= 2.0


# ----------------------------------------------------------------- criterion 4

def test_criterion_4_modular(tmp_path_factory):
    checks = assert_suite(4, "modular", tmp_path_factory)
    assert checks["unitarity_norm"]["value"] < 1e-5
    assert checks["group_law"]["value"] < 1e-4
    assert checks["iota_linearity"]["value"] < 1e-5
    assert checks["support_bound_plus"]["value"] < 1e-6
    assert checks["support_bound_minus"]["value"] < 1e-6
    assert checks["richardson_limit"]["value"] < 1e-4
    assert checks["test_function_route"]["value"] < 1e-4


@pytest.mark.xfail(strict=True, reason="literal bound f_(2 pi lam)(R) is too tight for lam > 0")
def test_criterion_4_literal_support_bound(tmp_path_factory):
    checks = checks_by_name(suite_result("modular", tmp_path_factory)[0])
    assert checks["support_bound_literal_plus"]["value"] < 1e-6


@pytest.mark.xfail(strict=True, reason="observed orders approach 2 from below on this table")
def test_criterion_4_symmetric_difference_order(tmp_path_factory):
    checks = checks_by_name(suite_result("modular", tmp_path_factory)[0])
    assert checks["central_order"]["value"] >= 2.0


# ----------------------------------------------------------------- criterion 5

def test_criterion_5_entropy(tmp_path_factory):
    checks = assert_suite(5, "entropy", tmp_path_factory)
    report = suite_result("entropy", tmp_path_factory)[0]
    assert len(report["extra"]["states"]) >= 5
    assert checks["generator_vs_fourier"]["value"] < 1e-6
    assert checks["positivity"]["value"] >= -1e-6
    assert checks["energy_exterior_ratio"]["value"] < 1e-6
    assert checks["energy_integral"]["value"] < 1e-6
    assert checks["energy_oracle"]["value"] < 1e-6
    assert checks["fourier_improves_on_refinement"]["pass"]


@pytest.mark.xfail(strict=True, reason="energy-density prefactor 1/4 pi^2 is off by 4 pi^3")
def test_criterion_5_energy_route_agreement(tmp_path_factory):
    checks = checks_by_name(suite_result("entropy", tmp_path_factory)[0])
    assert checks["generator_vs_energy"]["value"] < 1e-4


@pytest.mark.xfail(strict=True, reason="energy-density prefactor 1/4 pi^2 is off by 4 pi^3")
def test_entropy_command_example_state_agreement(tmp_path):
    out = tmp_path / "entropy.json"
    proc, _ = run_cli(["entropy", "--state", str(EXAMPLE_STATE), "--out", str(out)])
    assert proc.returncode == 0, proc.stderr
    rep = json.loads(out.read_text())
    assert max(rep["dev_generator_fourier"], rep["dev_generator_energy"],
               rep["dev_fourier_energy"]) < 1e-4


# ----------------------------------------------------------------- criterion 6

LAMBDA_MAX, STEPS = 12.0, 481


def seed_lattice():
    interior = [(a, b, 0.0, 0.0) for a in (-0.4, 0.0, 0.4) for b in (-0.5, 0.0, 0.5)]
    interior += [(0.1, 0.2, 0.3, -0.2), (-0.2, 0.0, 0.0, 0.6)]
    sphere = [(0.0, 1.0, 0.0, 0.0), (0.0, -1.0, 0.0, 0.0), (0.0, 0.6, 0.8, 0.0), (0.0, 0.0, 0.0, 1.0)]
    exterior = [(0.0, 1.5, 0.0, 0.0), (0.5, 2.0, 0.0, 0.0), (-0.3, 0.0, 1.4, 0.0),
                (2.0, 0.0, 0.0, 0.0), (-1.5, 0.3, 0.0, 0.0), (0.9, 0.0, 0.0, 0.6)]
    return interior, sphere, exterior


def sign_changes(seed):
    """Zeros of tau inside the traced window where tau changes sign (double zeros do not)."""
    roots = [lam for lam in singular_parameters(seed) if abs(lam) < LAMBDA_MAX]
    if len(roots) == 2 and np.isclose(roots[0], roots[1], rtol=0, atol=1e-12):
        return []
    return roots


def test_criterion_6_flow_trace_lattice(tmp_path):
    interior, sphere, exterior = seed_lattice()
    seeds = interior + sphere + exterior
    seed_file = tmp_path / "seeds.json"
    seed_file.write_text(json.dumps({"seeds": seeds}))
    out = tmp_path / "trace.csv"
    proc, elapsed = run_cli(["flow-trace", "--lambda-max", str(LAMBDA_MAX), "--steps", str(STEPS),
                             "--seeds", str(seed_file), "--out", str(out)])
    assert proc.returncode == 0, proc.stderr
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    by_seed = {}
    for r in rows:
        by_seed.setdefault(int(r["seed"]), []).append(r)
    step = 2 * LAMBDA_MAX / (STEPS - 1)

    problems = []
    for i in range(len(interior)):
        pts = [r for r in by_seed[i] if not r["marker"]]
        x = np.array([[float(r[k]) for k in ("x0", "x1", "x2", "x3")] for r in pts])
        size = np.abs(x[:, 0]) + np.linalg.norm(x[:, 1:], axis=1)
        if len(pts) != STEPS or size.max() >= 1 or any(int(r["branch"]) != 1 for r in pts):
            problems.append(f"interior seed {i} leaves the double cone")
        # lambda -> -inf approaches (1, 0), lambda -> +inf approaches (-1, 0)
        if np.linalg.norm(x[0] - [1, 0, 0, 0]) > 1e-2 or np.linalg.norm(x[-1] + [1, 0, 0, 0]) > 1e-2:
            problems.append(f"interior seed {i} does not reach the tips")
    for j, s in enumerate(sphere, start=len(interior)):
        x = np.array([[float(r[k]) for k in ("x0", "x1", "x2", "x3")] for r in by_seed[j]])
        if np.abs(x - np.array(s)).max() > 1e-12:
            problems.append(f"sphere seed {j} moves")
    for j, s in enumerate(exterior, start=len(interior) + len(sphere)):
        predicted = sign_changes(s)
        markers = [float(r["lambda"]) for r in by_seed[j] if r["marker"]]
        if len(markers) != len(predicted) or not all(
                min(abs(m - lam) for m in markers) <= step for lam in predicted):
            problems.append(f"exterior seed {j}: markers {markers} vs predicted {predicted}")
    ok = not problems and elapsed < 10.0
    record(6, ok, f"flow-trace, {len(seeds)} seeds x {STEPS} steps, {elapsed:.1f} s"
           + (f"; {problems}" if problems else ""))
    assert not problems, problems
    assert elapsed < 10.0


# ----------------------------------------------------------------- criterion 7

def _numbers(report):
    report = dict(report)
    report.pop("generated_at", None)
    return report


@pytest.mark.parametrize("suite", ["spinor", "wave"])
def test_criterion_7_determinism(suite, tmp_path):
    reports = [verify(suite, tmp_path, threads)[0] for threads in (1, 4, "max")]
    repeat = tmp_path / "repeat"
    repeat.mkdir()
    again = verify(suite, repeat, 4)[0]
    same = all(_numbers(r) == _numbers(reports[0]) for r in reports[1:] + [again])
    record(7, same, f"{suite} suite, threads 1/4/max and a repeat run give identical reports")
    assert same


def test_criterion_7_entropy_command_bytes(tmp_path):
    texts = []
    for threads in (1, 4, "max"):
        out = tmp_path / f"e{threads}.json"
        proc, _ = run_cli(["entropy", "--state", str(EXAMPLE_STATE), "--out", str(out)], threads)
        assert proc.returncode == 0, proc.stderr
        lines = out.read_text().splitlines()
        texts.append([ln for ln in lines if '"generated_at"' not in ln])
    same = texts[0] == texts[1] == texts[2]
    record(7, same, "entropy command output byte-identical apart from generated_at")
    assert same
