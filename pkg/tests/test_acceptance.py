"""Acceptance criteria 1-10, each at its stated tolerance and time budget.

Every criterion is a plain function returning ``(ok, detail)``.  The pytest
wrappers assert on it, and the terminal summary prints one PASS/FAIL line per
criterion (see ``conftest.py``).  Running this file directly prints the same
lines without pytest.
"""

import math
import subprocess
import sys
import time

import pytest

from hkorlicz.funcspec import osc_deriv
from hkorlicz.hkint import hk_integrate
from hkorlicz.verifier import (
    check_dominance_equivalence,
    check_holder,
    check_indicator_formula,
    check_lp_consistency,
    check_triangle_weak,
    check_unit_modular,
    check_weak_le_strong,
    check_young_classification,
    default_corpus,
)
from hkorlicz.verifier.checks import NormCache, T_GRID

SIN1 = math.sin(1.0)
CORPUS = default_corpus()
CACHE = NormCache(CORPUS)
RESULTS: dict[int, tuple[bool, str, float]] = {}


def _failures(report, prefix=""):
    return [c.id for c in report.records(prefix) if c.asserted and c.verdict != "pass"]


def _timed(budget=None):
    def wrap(fn):
        def inner():
            t0 = time.perf_counter()
            ok, detail = fn()
            dt = time.perf_counter() - t0
            if budget is not None and dt >= budget:
                ok, detail = False, f"{detail}; took {dt:.1f}s, budget {budget:g}s"
            return ok, detail, dt

        inner.__doc__ = fn.__doc__
        return inner

    return wrap


@_timed(budget=10)
def criterion_1():
    """indicator closed form, 10^-4 relative"""
    r = check_indicator_formula(CORPUS, CACHE)
    bad = _failures(r)
    worst = max(c.slack for c in r.checks if c.slack is not None)
    return not bad and len(r.checks) >= 15, f"{len(r.checks)} cases, worst rel. deviation {worst:.2e}, failures {bad}"


@_timed(budget=30)
def criterion_2():
    """weak <= strong + 3 tol over the corpus"""
    r = check_weak_le_strong(CORPUS, CACHE)
    bad = _failures(r)
    return not bad and len(r.checks) >= 20, f"{len(r.checks)} (f, theta) pairs, failures {bad}"


@_timed(budget=20)
def criterion_3():
    """HK integral of the oscillatory derivative on [0,1]"""
    f = osc_deriv()
    res = hk_integrate(f, None, 1e-3)
    pinned = (0.0,) in f.singular and res.diagnostics.get("core_cells", 0) >= 1
    err = abs(res.value - SIN1)
    return err <= 1e-3 and pinned, f"value {res.value:.6f}, |value - sin 1| = {err:.2e}, cells {res.cells}"


@_timed()
def criterion_4():
    """Luxemburg norm equals the exact L^p norm, 10^-5 relative"""
    r = check_lp_consistency(CORPUS, CACHE)
    bad = _failures(r)
    worst = max(c.slack for c in r.checks if c.slack is not None)
    return not bad and len(r.checks) > 0, f"{len(r.checks)} cases, worst rel. deviation {worst:.2e}, failures {bad}"


@_timed()
def criterion_5():
    """Delta-2 / Delta-prime classification"""
    r = check_young_classification(CORPUS, CACHE)
    bad = _failures(r)
    w = {c.id: c for c in r.checks}["young_classification/delta_prime_witness/log1p"]
    return not bad, f"log1p ratio at t = 1e6: {w.lhs:.4f} (needs >= 0.99); failures {bad}"


@_timed()
def criterion_6():
    """safe Hoelder on all pairs, with the ratio-2 case reported"""
    r = check_holder(CORPUS, CACHE)
    bad = _failures(r)
    sharp = {c.id: c for c in r.checks}.get("holder/chi[0,1]/chi[0,1]/scaled_power(2,1/2)/sharp")
    ratio = sharp.lhs / sharp.rhs if sharp is not None else math.nan
    ok = not bad and sharp is not None and not sharp.asserted and abs(ratio - 2.0) <= 1e-3
    return ok, f"{len(r.checks) // 2} pairs, recorded sharp-form ratio {ratio:.6f}, failures {bad}"


@_timed()
def criterion_7():
    """distribution subadditivity on all pairs and a 64-point t-grid"""
    r = check_triangle_weak(CORPUS, CACHE)
    recs = r.records("triangle_weak/dist/")
    bad = _failures(r, "triangle_weak/dist/")
    ok = not bad and len(recs) == len(CORPUS.pairs) and T_GRID == 64
    return ok, f"{len(recs)} pairs x {T_GRID} t values, failures {bad}"


@_timed()
def criterion_8():
    """unit-modular certificate <= 1.005"""
    r = check_unit_modular(CORPUS, CACHE)
    bad = _failures(r)
    worst = max(c.lhs for c in r.checks)
    return not bad and len(r.checks) > 0, f"{len(r.checks)} (f, theta), largest modular {worst:.6f}, failures {bad}"


@_timed()
def criterion_9():
    """dominance => norm inequality; witness for (t, t^2) at C = 10^3"""
    r = check_dominance_equivalence(CORPUS, CACHE)
    bad = _failures(r)
    constants = r.records("dominance/constant/")
    witness = r.records("dominance/witness/power1/power2")
    ok = not bad and len(constants) >= 5 and len(witness) == 1 and witness[0].verdict == "pass"
    r_w = witness[0].inputs.get("r") if witness else None
    return ok, f"{len(constants)} dominating pairs, witness radius {r_w}, failures {bad}"


@_timed()
def criterion_10():
    """two `verify --suite all` runs give byte-identical JSON"""
    cmd = [sys.executable, "-m", "hkorlicz", "verify", "--suite", "all", "--corpus", "default"]
    outs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(2)]
    same = outs[0].stdout == outs[1].stdout and len(outs[0].stdout) > 0
    codes = [p.returncode for p in outs]
    return same and all(c in (0, 1) for c in codes), f"{len(outs[0].stdout)} bytes each, exit codes {codes}"


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def evaluate(n: int) -> tuple[bool, str, float]:
    if n not in RESULTS:
        RESULTS[n] = CRITERIA[n]()
    return RESULTS[n]


def summary_lines() -> list[str]:
    lines = []
    for n in sorted(RESULTS):
        ok, detail, dt = RESULTS[n]
        lines.append(f"criterion {n:2d} {'PASS' if ok else 'FAIL'} ({dt:5.1f}s) {CRITERIA[n].__doc__}: {detail}")
    return lines


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, detail, _ = evaluate(n)
    assert ok, detail


if __name__ == "__main__":
    for n in CRITERIA:
        evaluate(n)
        print(summary_lines()[-1], flush=True)
    sys.exit(0 if all(ok for ok, _, _ in RESULTS.values()) else 1)
