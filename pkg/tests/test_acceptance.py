"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from holocalc.chains import homology_basis, verify_homology_compat
from holocalc.generators import random_chain_complex, random_diagonalizable
from holocalc.matfunc import func_calc_series, func_calc_via_measure, oracle_eigen, spectral_norm
from holocalc.measure import pushforward, series_measure
from holocalc.series import PowerSeries, power_ratio_check, ratio_test

from oracles import exact_betti

EXP = PowerSeries.builtin("exp")
SIN = PowerSeries.builtin("sin")
COS = PowerSeries.builtin("cos")
CUBIC = PowerSeries.from_coeffs([0, -2, 0, 1])  # z^3 - 2z


def _report(number: int, label: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    tail = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {number} {label}: {status}{tail}")


def test_criterion_1_nilpotent_exponential():
    t = np.array([[0.0, 1.0], [0.0, 0.0]])
    expected = np.array([[1.0, 1.0], [0.0, 1.0]])
    func_calc_series(EXP, t, 1e-13)  # warm-up: exclude one-time numpy setup from timing
    start = time.perf_counter()
    got, _ = func_calc_series(EXP, t, 1e-13)
    elapsed = time.perf_counter() - start
    err = float(np.max(np.abs(got - expected)))
    ok = err <= 1e-13 and elapsed < 1e-3
    _report(1, "nilpotent exponential", ok, f"err={err:.2e}, {elapsed * 1e6:.0f}us")
    assert err <= 1e-13
    assert elapsed < 1e-3


def test_criterion_2_homology_compatibility_suite():
    rng = np.random.default_rng(2024)
    functions = [EXP, SIN, COS, CUBIC]
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        cx, endo, _ = random_chain_complex(rng, max_degrees=4, max_dim=6)
        for f in functions:
            report = verify_homology_compat(cx, endo, f, tol=1e-8)
            worst = max(worst, report.max_delta)
            assert report.passed, (
                f"{f.name} on dims {cx.dims}: max delta {report.max_delta:.3e}")
    elapsed = time.perf_counter() - start
    ok = elapsed < 30.0
    _report(2, "homology compatibility x200", ok,
            f"worst delta={worst:.2e}, {elapsed:.1f}s")
    assert ok


def test_criterion_3_oracle_agreement():
    rng = np.random.default_rng(515)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        t = random_diagonalizable(rng, 8, cond_cap=100.0, norm_cap=2.0)
        assert spectral_norm(t) <= 2.0 + 1e-9
        for f in (EXP, SIN, COS):
            via_series, _ = func_calc_series(f, t, 1e-12)
            via_oracle = oracle_eigen(f, t)
            err = float(np.linalg.norm(via_series - via_oracle))
            bound = 1e-9 * (1 + float(np.linalg.norm(via_oracle)))
            worst = max(worst, err / bound)
            assert err <= bound
    elapsed = time.perf_counter() - start
    ok = elapsed < 5.0
    _report(3, "oracle agreement x100", ok,
            f"worst err/bound={worst:.2e}, {elapsed:.1f}s")
    assert ok


def test_criterion_4_two_path_identity():
    rng = np.random.default_rng(4096)
    worst = 0.0
    for _ in range(50):
        dim = int(rng.integers(2, 7))
        t = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        t *= rng.uniform(0.3, 1.0) * 2.0 / spectral_norm(t)
        for f in (EXP, SIN):
            via_series, _ = func_calc_series(f, t, 1e-14)
            via_measure = func_calc_via_measure(f, t, p=1.0, depth=64)
            err = float(np.max(np.abs(via_series - via_measure)))
            worst = max(worst, err)
            assert err <= 1e-12
    _report(4, "two-path identity x50", True, f"worst={worst:.2e}")


def test_criterion_5_measure_towers():
    z5 = PowerSeries.from_coeffs([0, 0, 0, 0, 0, 1])
    rng = np.random.default_rng(55)
    worst_excess = -np.inf
    for f in (EXP, COS, z5):
        for p in (0.5, 0.75, 1.0):
            mu = series_measure(f, p, 200)
            assert mu.is_coherent()
            for j in range(1, 201):
                pushed = pushforward(mu.level(j), j - 1)
                assert np.array_equal(pushed.weights, mu.level(j - 1).weights)
            for _ in range(50):  # long-range pushforwards stay exact too
                j = int(rng.integers(1, 201))
                i = int(rng.integers(0, j))
                pushed = pushforward(mu.level(j), i)
                assert np.array_equal(pushed.weights, mu.level(i).weights)
            for norm in mu.level_norms():
                worst_excess = max(worst_excess, norm - mu.bound_c)
                assert norm <= mu.bound_c + 1e-9
    _report(5, "measure towers", True, f"worst norm excess={worst_excess:.2e}")


def test_criterion_6_lemma_checks():
    rep = ratio_test(EXP, 1000)
    assert rep.limit_estimate <= 1e-3
    series_with_limits = [
        PowerSeries.from_recurrence(1.0, [0.5], [1.0]),              # limit 0.5
        PowerSeries.from_recurrence(1.0, [0.0, 0.3], [1.0, 1.0]),    # limit 0.3
        PowerSeries.from_recurrence(2.0, [1.0, 2.0], [4.0, 3.0]),    # limit 2/3
    ]
    for f in series_with_limits:
        for r in (0.3, 0.5, 2.0):
            assert power_ratio_check(f, r, 1500, tol=1e-6)
    _report(6, "ratio-test lemmas", True,
            f"exp ratio limit={rep.limit_estimate:.2e}")


def test_criterion_7_betti_exactness():
    rng = np.random.default_rng(777)
    mismatches = 0
    for _ in range(50):
        cx, _, expected = random_chain_complex(rng, integer_only=True)
        int_diffs = [np.rint(d.real).astype(np.int64) for d in cx.differentials]
        for d, d_int in zip(cx.differentials, int_diffs):
            assert np.array_equal(d, d_int.astype(complex))
        oracle = exact_betti(list(cx.dims), int_diffs)
        got = list(homology_basis(cx).betti)
        if not (got == oracle == expected):
            mismatches += 1
    _report(7, "Betti exactness x50", mismatches == 0, f"mismatches={mismatches}")
    assert mismatches == 0


def test_criterion_8_suite_runtime():
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
         "--deselect", "tests/test_acceptance.py::test_criterion_8_suite_runtime"],
        cwd=str(Path(__file__).resolve().parents[1]),
        capture_output=True,
        text=True,
    )
    elapsed = time.perf_counter() - start
    ok = proc.returncode == 0 and elapsed < 60.0
    _report(8, "full suite runtime", ok, f"{elapsed:.1f}s")
    assert proc.returncode == 0, proc.stdout[-2000:]
    assert elapsed < 60.0
