"""Executable inequality checks over a corpus.

Every check function takes a :class:`Corpus` and returns a
:class:`VerifyReport`.  Records are produced in the corpus' declared order,
so reports are reproducible.  Safe forms of the inequalities are asserted;
sharper forms that are known to fail in general are reported only.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .. import young as Y
from ..funcspec import Box, FuncExpr, exact_integral, exact_lp, indicator
from ..hkint import hk_integrate
from ..measure import ball_volume, dist, distribution
from ..norms import NormResult, luxemburg_norm, strong_modular, weak_norm
from .corpus import Corpus
from .report import CheckRecord, VerifyReport, merge_reports

__all__ = [
    "SUITES",
    "NormCache",
    "check_weak_le_strong",
    "check_unit_modular",
    "check_indicator_formula",
    "check_holder",
    "check_triangle_weak",
    "check_dominance_equivalence",
    "check_l1_embedding",
    "check_convergence_in_measure",
    "check_hk_derivative",
    "check_lp_consistency",
    "check_young_classification",
    "run_suites",
]

SUBADDITIVITY_SLACK = 4e-3
T_GRID = 64
WITNESS_C = 1e3
WITNESS_LEVELS = range(-20, 31)
LP_NORM_TOL = 1e-7
LP_INT_TOL = 1e-7
LP_REL_TOL = 1e-5
INDICATOR_REL_TOL = 1e-4
CONVERGENCE_FACTOR = 1.1
CONVERGENCE_NS = tuple(2**j for j in range(9))
CONVERGENCE_TS = (1e-1, 1e-2)
CERTIFICATE_TOL = 5e-3
CERTIFICATE_POINTS = 4096


class NormCache:
    """Memoises norms within one verification run."""

    def __init__(self, corpus: Corpus):
        self.corpus = corpus
        self._weak: dict = {}
        self._strong: dict = {}
        self._conj: dict = {}

    def weak(self, fname: str, yname: str) -> NormResult:
        key = (fname, yname)
        if key not in self._weak:
            c = self.corpus
            self._weak[key] = weak_norm(c.functions[fname], c.young[yname], tol=c.norm_tol)
        return self._weak[key]

    def strong(self, fname: str, yname: str, theta: Y.YoungFn | None = None) -> NormResult:
        key = (fname, yname)
        if key not in self._strong:
            c = self.corpus
            th = theta if theta is not None else c.young[yname]
            self._strong[key] = luxemburg_norm(c.functions[fname], th, tol=c.norm_tol, int_tol=c.int_tol)
        return self._strong[key]

    def conjugate(self, yname: str) -> Y.YoungFn:
        if yname not in self._conj:
            self._conj[yname] = Y.complementary(self.corpus.young[yname])
        return self._conj[yname]


def _slack(lhs: float, rhs: float) -> float:
    if lhs == rhs:
        return 0.0
    return lhs - rhs


def _record(cid, inputs, lhs, rhs, tolerance, *, slack=None, asserted=True, note="") -> CheckRecord:
    lhs, rhs = float(lhs), float(rhs)
    s = _slack(lhs, rhs) if slack is None else float(slack)
    ok = s <= tolerance  # NaN compares false
    return CheckRecord(cid, inputs, lhs, rhs, s, float(tolerance), "pass" if ok else "fail", asserted, note)


def _error(cid, inputs, exc: Exception, asserted=True) -> CheckRecord:
    return CheckRecord(cid, inputs, None, None, None, None, "error", asserted, f"{type(exc).__name__}: {exc}")


def _guard(out: list, cid: str, inputs: dict, body: Callable[[], list | CheckRecord], asserted=True):
    try:
        res = body()
    except Exception as exc:  # errors are a verdict of their own, never a pass
        out.append(_error(cid, inputs, exc, asserted))
        return
    out.extend(res if isinstance(res, list) else [res])


def _norm_slack(c: Corpus, rhs: float) -> float:
    return 3.0 * (c.norm_tol * max(1.0, abs(rhs)) + c.int_tol)


# ------------------------------------------------------------------------


def check_weak_le_strong(corpus: Corpus, cache: NormCache | None = None) -> VerifyReport:
    """``weak_norm <= luxemburg_norm + 3 tol`` for every (f, theta)."""
    cache = cache or NormCache(corpus)
    out: list[CheckRecord] = []
    for fname in corpus.functions:
        for yname in corpus.norm_young:
            cid = f"weak_le_strong/{fname}/{yname}"
            inputs = {"f": fname, "theta": yname}

            def body(fname=fname, yname=yname, cid=cid, inputs=inputs):
                w = cache.weak(fname, yname).value
                s = cache.strong(fname, yname).value
                return _record(cid, inputs, w, s, _norm_slack(corpus, s))

            _guard(out, cid, inputs, body)
    return VerifyReport("weak_le_strong", tuple(out))


def unit_modular(f: FuncExpr, theta: Y.YoungFn, alpha: float) -> float:
    """``sup_t theta(t / alpha) * dist(f, t)`` on a grid independent of the norm's own.

    The grid is 4096 log-spaced points below the essential sup, plus every
    atom of exact metadata approached from the left.
    """
    d = distribution(f)
    M = d.ess_sup
    if not M > 0:
        return 0.0
    ts = [np.geomspace(1e-7 * M, M, CERTIFICATE_POINTS)]
    jumps, _ = d.atoms()
    if len(jumps):
        ts.append(np.nextafter(jumps, 0.0))
    ts = np.unique(np.concatenate(ts))
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.where(d(ts) > 0, theta(ts / alpha) * d(ts), 0.0)
    return float(np.max(np.nan_to_num(vals, nan=math.inf)))


def check_unit_modular(corpus: Corpus, cache: NormCache | None = None) -> VerifyReport:
    """The weak modular at the computed weak norm is at most ``1 + 5e-3``."""
    cache = cache or NormCache(corpus)
    out: list[CheckRecord] = []
    for fname in corpus.functions:
        for yname in corpus.norm_young:
            cid = f"unit_modular/{fname}/{yname}"
            inputs = {"f": fname, "theta": yname}

            def body(fname=fname, yname=yname, cid=cid, inputs=inputs):
                w = cache.weak(fname, yname).value
                if not (math.isfinite(w) and w > 0):
                    return []
                m = unit_modular(corpus.functions[fname], corpus.young[yname], w)
                return _record(cid, {**inputs, "weak_norm": w}, m, 1.0, CERTIFICATE_TOL)

            _guard(out, cid, inputs, body)
    return VerifyReport("unit_modular", tuple(out))


def indicator_closed_form(theta: Y.YoungFn, volume: float) -> float:
    return 1.0 / Y.y_inverse(theta, 1.0 / volume)


def check_indicator_formula(corpus: Corpus, cache: NormCache | None = None) -> VerifyReport:
    """Weak norm of ``chi_{B(a,r)}`` against ``1 / theta^{-1}(1 / (2r)^n)``."""
    out: list[CheckRecord] = []
    for n, r, yname in corpus.indicator_cases:
        cid = f"indicator_formula/n={n}/r={r:g}/{yname}"
        inputs = {"n": n, "r": r, "theta": yname}

        def body(n=n, r=r, yname=yname, cid=cid, inputs=inputs):
            th = corpus.young[yname]
            a = (0.25,) * n
            ambient = Box.cube(a, 2.0 * r)
            f = indicator(Box.cube(a, r), ambient)
            w = weak_norm(f, th, tol=corpus.norm_tol).value
            exact = indicator_closed_form(th, ball_volume(a, r, n))
            rel = abs(w - exact) / exact
            return _record(cid, inputs, w, exact, INDICATOR_REL_TOL, slack=rel, note="slack is the relative deviation")

        _guard(out, cid, inputs, body)
    return VerifyReport("indicator_formula", tuple(out))


def check_holder(corpus: Corpus, cache: NormCache | None = None) -> VerifyReport:
    """``HK-integral |h m| <= 2 ||h||_theta ||m||_phi`` with ``phi`` the complementary function.

    The constant-free form is reported alongside, with the observed ratio.
    """
    cache = cache or NormCache(corpus)
    out: list[CheckRecord] = []
    for yname in corpus.holder_young:
        for hname, mname in corpus.pairs:
            base = f"holder/{hname}/{mname}/{yname}"
            inputs = {"h": hname, "m": mname, "theta": yname}

            def body(hname=hname, mname=mname, yname=yname, base=base, inputs=inputs):
                h, m = corpus.functions[hname], corpus.functions[mname]
                lhs = hk_integrate(abs(h * m), None, corpus.int_tol).value
                nh = cache.strong(hname, yname).value
                phi = cache.conjugate(yname)
                nm = cache.strong(mname, f"conj({yname})", theta=phi).value
                prod = nh * nm
                tol = 3.0 * (corpus.int_tol + corpus.norm_tol * max(1.0, 2.0 * prod))
                safe = _record(base + "/safe", inputs, lhs, 2.0 * prod, tol)
                ratio = lhs / prod if prod > 0 else (0.0 if lhs <= tol else math.inf)
                sharp = _record(
                    base + "/sharp", inputs, lhs, prod, tol, asserted=False, note=f"ratio {ratio:.6g}"
                )
                return [safe, sharp]

            _guard(out, base, inputs, body)
    return VerifyReport("holder", tuple(out))


def _t_grid(f: FuncExpr, g: FuncExpr) -> np.ndarray:
    top = distribution(f).ess_sup + distribution(g).ess_sup
    if not top > 0:
        return np.zeros(0)
    return np.geomspace(1e-3 * top, top, T_GRID)


def check_triangle_weak(corpus: Corpus, cache: NormCache | None = None) -> VerifyReport:
    """Distribution subadditivity (asserted) and the observed weak triangle constant (reported)."""
    cache = cache or NormCache(corpus)
    out: list[CheckRecord] = []
    k_max, k_arg = -math.inf, None
    for fname, gname in corpus.pairs:
        f, g = corpus.functions[fname], corpus.functions[gname]
        cid = f"triangle_weak/dist/{fname}/{gname}"
        inputs = {"f": fname, "g": gname, "t_points": T_GRID}

        def body(f=f, g=g, cid=cid, inputs=inputs):
            ts = _t_grid(f, g)
            if len(ts) == 0:
                return _record(cid, inputs, 0.0, 0.0, 0.0, note="both functions vanish")
            s = f + g
            lhs = np.array([dist(s, None, t) for t in ts])
            rhs = np.array([dist(f, None, t / 2) + dist(g, None, t / 2) for t in ts])
            i = int(np.argmax(lhs - rhs))
            tol = SUBADDITIVITY_SLACK * f.domain.volume
            return _record(cid, inputs, lhs[i], rhs[i], tol, note=f"worst t = {ts[i]:.6g}")

        _guard(out, cid, inputs, body)
        for yname in corpus.triangle_young:
            kid = f"triangle_weak/K/{fname}/{gname}/{yname}"
            kin = {"f": fname, "g": gname, "theta": yname}

            def kbody(f=f, g=g, fname=fname, gname=gname, yname=yname, kid=kid, kin=kin):
                nonlocal k_max, k_arg
                th = corpus.young[yname]
                nsum = weak_norm(f + g, th, tol=corpus.norm_tol).value
                nf = cache.weak(fname, yname).value
                ng = cache.weak(gname, yname).value
                denom = nf + ng
                K = nsum / denom if denom > 0 else 1.0
                if K > k_max:
                    k_max, k_arg = K, kin
                return _record(kid, kin, nsum, denom, _norm_slack(corpus, denom), asserted=False, note=f"K {K:.6g}")

            _guard(out, kid, kin, kbody, asserted=False)
    if k_arg is not None:
        out.append(
            _record("triangle_weak/K_max", dict(k_arg), k_max, 1.0, 0.0, asserted=False, note="largest observed K")
        )
    return VerifyReport("triangle_weak", tuple(out))


def _witness_search(th1: Y.YoungFn, th2: Y.YoungFn, C: float, tol: float):
    """First radius ``2^k`` at which ``||chi_B||_{th1,w} > C ||chi_B||_{th2,w}``."""
    best = (-math.inf, None)
    for k in WITNESS_LEVELS:
        r = 2.0**k
        B = Box.cube((0.0,), r)
        f = indicator(B, B)
        w1 = weak_norm(f, th1, tol=tol).value
        w2 = weak_norm(f, th2, tol=tol).value
        if w1 > C * w2 * (1 + 3 * tol):
            return r, w1, w2
        ratio = w1 / w2 if w2 > 0 else math.inf
        if ratio > best[0]:
            best = (ratio, (r, w1, w2))
    return None, best


def check_dominance_equivalence(corpus: Corpus, cache: NormCache | None = None) -> VerifyReport:
    """Dominance ``theta1(t) <= theta2(C t)`` against ``||f||_{theta1,w} <= C ||f||_{theta2,w}``."""
    cache = cache or NormCache(corpus)
    out: list[CheckRecord] = []
    for y1, y2, C in corpus.dominating:
        cid = f"dominance/constant/{y1}/{y2}"
        inputs = {"theta1": y1, "theta2": y2, "C": C}

        def cbody(y1=y1, y2=y2, C=C, cid=cid, inputs=inputs):
            found = Y.dominates(corpus.young[y1], corpus.young[y2])
            if found is None:
                return _record(cid, inputs, math.inf, C, 0.0, note="no dominance constant on the grid")
            return _record(cid, inputs, found, C, 1e-12 * C, note="smallest grid constant")

        _guard(out, cid, inputs, cbody)
        for fname in corpus.functions:
            fid = f"dominance/norms/{y1}/{y2}/{fname}"
            fin = {"theta1": y1, "theta2": y2, "C": C, "f": fname}

            def fbody(y1=y1, y2=y2, C=C, fname=fname, fid=fid, fin=fin):
                a = cache.weak(fname, y1).value
                b = C * cache.weak(fname, y2).value
                return _record(fid, fin, a, b, 3.0 * corpus.norm_tol * max(1.0, abs(b)))

            _guard(out, fid, fin, fbody)
    for y1, y2 in corpus.non_dominating:
        cid = f"dominance/grid_constant/{y1}/{y2}"
        inputs = {"theta1": y1, "theta2": y2}

        def gbody(y1=y1, y2=y2, cid=cid, inputs=inputs):
            found = Y.dominates(corpus.young[y1], corpus.young[y2])
            lhs = math.inf if found is None else found
            note = "none on the grid" if found is None else "grid constant; the t-grid stops at 1e-6"
            return _record(cid, inputs, lhs, WITNESS_C, 0.0, asserted=False, note=note)

        _guard(out, cid, inputs, gbody, asserted=False)
        wid = f"dominance/witness/{y1}/{y2}"
        win = {"theta1": y1, "theta2": y2, "C": WITNESS_C}

        def wbody(y1=y1, y2=y2, wid=wid, win=win):
            r, *rest = _witness_search(corpus.young[y1], corpus.young[y2], WITNESS_C, corpus.norm_tol)
            if r is None:
                ratio, data = rest[0]
                r0, w1, w2 = data
                return _record(
                    wid, dict(win, r=r0), w1, WITNESS_C * w2, 0.0, slack=WITNESS_C * w2 - w1,
                    note=f"no witness; best ratio {ratio:.6g}",
                )
            w1, w2 = rest
            margin = 3.0 * corpus.norm_tol * w1
            return _record(
                wid, dict(win, r=r), w1, WITNESS_C * w2, -margin, slack=WITNESS_C * w2 - w1,
                note="indicator norm ratio exceeds C; slack is rhs - lhs",
            )

        _guard(out, wid, win, wbody)
    return VerifyReport("dominance", tuple(out))


def check_l1_embedding(corpus: Corpus, cache: NormCache | None = None) -> VerifyReport:
    """``alpha int|f| <= (1/r)(int theta(alpha |f|) + s vol(K))`` for ``theta(t) >= r t - s``."""
    out: list[CheckRecord] = []
    l1: dict[str, float] = {}
    for yname, (r, s) in corpus.minorants.items():
        th = corpus.young[yname]
        for fname, f in corpus.functions.items():
            for alpha in (0.5, 1.0, 2.0):
                cid = f"l1_embedding/{yname}/{fname}/alpha={alpha:g}"
                inputs = {"theta": yname, "f": fname, "alpha": alpha, "r": r, "s": s}

                def body(f=f, fname=fname, alpha=alpha, r=r, s=s, th=th, cid=cid, inputs=inputs):
                    if fname not in l1:
                        l1[fname] = hk_integrate(abs(f), None, corpus.int_tol).value
                    lhs = alpha * l1[fname]
                    mod = strong_modular(f, th, 1.0 / alpha, None, corpus.int_tol)
                    rhs = (mod + s * f.domain.volume) / r
                    tol = 3.0 * corpus.int_tol * (alpha + max(1.0, abs(mod)) / r)
                    return _record(cid, inputs, lhs, rhs, tol)

                _guard(out, cid, inputs, body)
    return VerifyReport("l1_embedding", tuple(out))


def check_convergence_in_measure(corpus: Corpus, cache: NormCache | None = None) -> VerifyReport:
    """``h_n = h + chi_B / n``: weak norms of ``h_n - h`` scale like ``1/n`` and
    the distribution at ``t`` vanishes once ``1/n < t``."""
    out: list[CheckRecord] = []
    for hname, B, yname in corpus.convergence:
        h = corpus.functions[hname]
        th = corpus.young[yname]
        chi = indicator(B, h.domain)
        tag = f"{hname}/{B}/{yname}"
        diffs = {n: (h + (1.0 / n) * chi) - h for n in CONVERGENCE_NS}
        first: dict = {}
        for n in CONVERGENCE_NS:
            cid = f"convergence_in_measure/norm/{tag}/n={n}"
            inputs = {"h": hname, "B": B.to_pairs(), "theta": yname, "n": n}

            def nbody(n=n, cid=cid, inputs=inputs):
                w = weak_norm(diffs[n], th, tol=corpus.norm_tol).value
                if n == 1:
                    first["w"] = w
                target = first["w"] / n
                dev = abs(math.log(w / target)) if w > 0 and target > 0 else (0.0 if w == target else math.inf)
                return _record(
                    cid, inputs, w, target, math.log(CONVERGENCE_FACTOR), slack=dev,
                    note="slack is |log(lhs/rhs)|",
                )

            _guard(out, cid, inputs, nbody)
            for t in CONVERGENCE_TS:
                did = f"convergence_in_measure/dist/{tag}/n={n}/t={t:g}"
                din = dict(inputs, t=t)

                def dbody(n=n, t=t, did=did, din=din):
                    d = distribution(diffs[n])
                    lhs = float(d(t))
                    expected = B.volume if 1.0 / n > t else 0.0
                    tol = 0.0 if d.mode == "exact" else 2e-3 * h.domain.volume
                    return _record(did, din, lhs, expected, tol, slack=abs(lhs - expected), note=f"{d.mode} distribution")

                _guard(out, did, din, dbody)
    return VerifyReport("convergence_in_measure", tuple(out))


def check_hk_derivative(corpus: Corpus, cache: NormCache | None = None) -> VerifyReport:
    """Gauge integrals against antiderivative metadata."""
    out: list[CheckRecord] = []
    for name, f, exact in corpus.derivative_cases:
        cid = f"hk_derivative/{name}"
        inputs = {"f": name, "tol": 1e-3}

        def body(f=f, exact=exact, cid=cid, inputs=inputs):
            res = hk_integrate(f, None, 1e-3)
            return _record(
                cid, inputs, res.value, exact, 1e-3, slack=abs(res.value - exact),
                note=f"error estimate {res.error:.3g}, {res.cells} cells",
            )

        _guard(out, cid, inputs, body)
    for fname, f in corpus.functions.items():
        exact = exact_integral(f)
        if exact is None:
            continue
        cid = f"hk_derivative/metadata/{fname}"
        inputs = {"f": fname, "tol": corpus.int_tol}

        def mbody(f=f, exact=exact, cid=cid, inputs=inputs):
            res = hk_integrate(f, None, corpus.int_tol)
            tol = res.error + 1e-12 * max(1.0, abs(exact))
            return _record(cid, inputs, res.value, exact, tol, slack=abs(res.value - exact), note="tolerance is the reported error")

        _guard(out, cid, inputs, mbody)
    return VerifyReport("hk_derivative", tuple(out))


def check_lp_consistency(corpus: Corpus, cache: NormCache | None = None) -> VerifyReport:
    """Luxemburg norm for ``theta = t^p`` against the exact ``L^p`` norm."""
    out: list[CheckRecord] = []
    for p in (1, 2, 3):
        th = Y.power(p)
        for fname, f in corpus.functions.items():
            exact = exact_lp(f, p)
            if exact is None:
                continue
            cid = f"lp_consistency/p={p}/{fname}"
            inputs = {"f": fname, "p": p, "norm_tol": LP_NORM_TOL, "int_tol": LP_INT_TOL}

            def body(f=f, exact=exact, th=th, cid=cid, inputs=inputs):
                val = luxemburg_norm(f, th, tol=LP_NORM_TOL, int_tol=LP_INT_TOL).value
                rel = abs(val - exact) / exact if exact > 0 else abs(val)
                return _record(cid, inputs, val, exact, LP_REL_TOL, slack=rel, note="slack is the relative deviation")

            _guard(out, cid, inputs, body)
    return VerifyReport("lp_consistency", tuple(out))


def check_young_classification(corpus: Corpus | None = None, cache: NormCache | None = None) -> VerifyReport:
    """Delta-2 / Delta-prime verdicts and witnesses for the named families."""
    out: list[CheckRecord] = []

    def boolean(cid, inputs, got: bool, want: bool, note=""):
        return _record(cid, inputs, float(got), float(want), 0.0, slack=abs(float(got) - float(want)), note=note)

    for p in (1, 2, 3):
        th = Y.power(p)
        v2 = Y.is_delta2(th)
        vp = Y.is_delta_prime(th)
        inputs = {"theta": th.name}
        out.append(boolean(f"young_classification/delta2/{th.name}", inputs, v2.holds, True))
        out.append(
            _record(
                f"young_classification/delta2_witness/{th.name}", inputs, v2.witness, 2.0**p, 1e-6,
                slack=abs(v2.witness - 2.0**p),
            )
        )
        out.append(boolean(f"young_classification/delta_prime/{th.name}", inputs, vp.holds, True))
    e = Y.expm()
    out.append(boolean("young_classification/delta2/expm", {"theta": "expm"}, Y.is_delta2(e).holds, False))
    out.append(boolean("young_classification/delta_prime/expm", {"theta": "expm"}, Y.is_delta_prime(e).holds, True))
    lg = Y.log1p()
    vp = Y.is_delta_prime(lg)
    out.append(boolean("young_classification/delta2/log1p", {"theta": "log1p"}, Y.is_delta2(lg).holds, True))
    out.append(boolean("young_classification/delta_prime/log1p", {"theta": "log1p"}, vp.holds, False))
    at_top = max(vp.details["ratio_at_t_max"])
    out.append(
        _record(
            "young_classification/delta_prime_witness/log1p", {"theta": "log1p", "t": 1e6}, at_top, 0.99, 0.0,
            slack=0.99 - at_top, note="largest theta(kt)/theta(t) at t = 1e6 over k in 2^-1..2^-20",
        )
    )
    return VerifyReport("young_classification", tuple(out))


SUITES: dict[str, Callable[..., VerifyReport]] = {
    "weak_le_strong": check_weak_le_strong,
    "unit_modular": check_unit_modular,
    "indicator_formula": check_indicator_formula,
    "holder": check_holder,
    "triangle_weak": check_triangle_weak,
    "dominance": check_dominance_equivalence,
    "l1_embedding": check_l1_embedding,
    "convergence_in_measure": check_convergence_in_measure,
    "hk_derivative": check_hk_derivative,
    "lp_consistency": check_lp_consistency,
    "young_classification": check_young_classification,
}


def run_suites(corpus: Corpus, names: list[str] | str = "all") -> VerifyReport:
    """Run the named suites (or ``"all"``) in declared order and merge the records."""
    if names == "all" or names == ["all"]:
        names = list(SUITES)
    elif isinstance(names, str):
        names = [n.strip() for n in names.split(",") if n.strip()]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    cache = NormCache(corpus)
    reports = [SUITES[n](corpus, cache) for n in names]
    if len(reports) == 1:
        return reports[0]
    label = "all" if names == list(SUITES) else ",".join(names)
    return merge_reports(label, reports)
