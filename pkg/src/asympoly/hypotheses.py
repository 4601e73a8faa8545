"""Mechanical hypothesis checking for the asymptotic-polynomial theorems.

Given an equation spec and a simulated trace, runs every hypothesis of the
selected case, then verifies the conclusion (the solution splits into a
polynomial of degree < m plus a remainder certified o(n**s), and in
regular mode additionally passes the iterated-difference checks).  Every
check is a finite-horizon diagnostic with declared thresholds; a failure
verdict names the first failing hypothesis so the tool can be used to
probe counterexamples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import Majorant, RhsFunction
from .decomp import SolutionDecomposition, decompose_solution
from .errors import ConfigError
from .neutral_solver import EquationSpec, SolutionTrace, runtime, start_index
from .seqcore import (
    DEFAULT_THRESHOLDS,
    OrderVerdict,
    Seq,
    Thresholds,
    classify_oscillation,
    csum,
    order_estimate,
    seq_from_function,
    weighted_sum_diagnostic,
)

#: Multiplicative slack of the trailing-half sup in the composed-growth check.
GROWTH_SLACK = 0.1
#: Relative slack of the pointwise (g, p)-boundedness grid check.
GP_GRID_SLACK = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    metric: float
    detail: str = ""


@dataclass(frozen=True)
class GridCheck:
    """Result of a pointwise |f(n, t)| <= g(|t|/n**p) grid scan."""

    passed: bool
    worst_ratio: float
    worst_point: tuple[int, float] | None


@dataclass(frozen=True)
class GrowthCheck:
    """Result of the polynomial-growth (no exponential trend) fit."""

    passed: bool
    exponent: float
    max_residual: float
    allowance: float


@dataclass(frozen=True)
class ConclusionResult:
    """Membership verdict for the asymptotically polynomial conclusion."""

    passed: bool
    s: float
    remainder_kind: str
    metric: float
    regular_passed: bool | None = None


@dataclass(frozen=True)
class HypothesisVerdict:
    """All checks of one theorem case plus the conclusion.

    ``passed`` holds iff every case check passed and the conclusion
    passed; ``failed_check`` names the first failure (or "conclusion").
    """

    case_id: str
    mode: str
    checks: tuple[CheckResult, ...]
    conclusion: ConclusionResult
    passed: bool
    failed_check: str | None
    decomposition: SolutionDecomposition


def _log_grid_n(n_max: int, per_decade: int = 6) -> list[int]:
    count = max(2, int(math.log10(max(n_max, 2)) * per_decade) + 1)
    raw = [round(10.0 ** (i * math.log10(n_max) / (count - 1))) for i in range(count)]
    return sorted({max(1, n) for n in raw})


def _log_grid_t(t_max: float = 1e6, per_decade: int = 2) -> list[float]:
    decades = 12  # 1e-6 .. 1e+6
    mags = [10.0 ** (-6 + i / per_decade) for i in range(decades * per_decade + 1)]
    return [-t for t in reversed(mags)] + [0.0] + mags


def check_g_p_bounded(
    f: RhsFunction, g: Majorant, p: float, n_max: int = 10000
) -> GridCheck:
    """Grid check of |f(n, t)| <= g(|t|/n**p) over log-spaced n and t.

    n runs log-spaced over [1, n_max], t over a symmetric log grid up to
    1e6 plus zero.  Pointwise equality is allowed up to a relative slack
    of 1e-12; the worst ratio and its witness are reported.
    """
    worst = 0.0
    witness = None
    ok = True
    for n in _log_grid_n(n_max):
        np_ = float(n) ** p
        for t in _log_grid_t():
            fv = abs(f(n, t))
            gv = g(abs(t) / np_)
            if gv <= 0.0:
                ratio = 0.0 if fv == 0.0 else math.inf
            else:
                ratio = fv / gv
            if ratio > worst:
                worst = ratio
                witness = (n, t)
            if ratio > 1.0 + GP_GRID_SLACK:
                ok = False
    return GridCheck(ok, worst, witness)


def check_u_rate(
    u: Seq, c: float, e: float, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> OrderVerdict:
    """Order verdict for u - c against n**e (the rate hypothesis on u)."""
    shifted = Seq(u.start, tuple(v - c for v in u.values))
    return order_estimate(shifted, e, thresholds)


def polynomial_growth_check(
    x: Seq, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> GrowthCheck:
    """No-exponential-trend test on the trailing half of the window.

    Fits log(1 + |x_n|) against log n; passes iff the largest residual is
    below 0.5 log(end index), i.e. the data is explained by a power law up
    to sub-polynomial wiggle.  Reports the fitted exponent.
    """
    if len(x) < 64:
        raise ValueError(f"need at least 64 entries, got {len(x)}")
    tail = x.trailing(thresholds.trail_fraction)
    pts = [(math.log(n), math.log1p(abs(v))) for n, v in tail.items() if n >= 1]
    xm = csum(p[0] for p in pts) / len(pts)
    ym = csum(p[1] for p in pts) / len(pts)
    sxx = csum((p[0] - xm) ** 2 for p in pts)
    slope = csum((p[0] - xm) * (p[1] - ym) for p in pts) / sxx
    max_resid = max(abs(p[1] - (ym + slope * (p[0] - xm))) for p in pts)
    allowance = 0.5 * math.log(x.end)
    return GrowthCheck(max_resid < allowance, slope, max_resid, allowance)


def _composed_growth_check(
    trace: SolutionTrace, spec: EquationSpec, p: float
) -> CheckResult:
    """Trailing-half sup of |x_{sigma(n)}|/n**p against the mid-window sup."""
    rt = runtime(spec)
    n0 = trace.start
    ratios = []
    for n in range(n0, trace.z.end + 1):
        ratios.append(abs(trace.x.at(rt.sigma(n))) / float(n) ** p)
    count = len(ratios)
    half = ratios[count - count // 2 :]
    mid = ratios[count // 4 : count - count // 2]
    trail_sup = max(half)
    mid_sup = max(mid) if mid else trail_sup
    if mid_sup == 0.0:
        passed = trail_sup == 0.0
    else:
        passed = trail_sup <= mid_sup * (1.0 + GROWTH_SLACK)
    return CheckResult(
        "x-sigma-growth",
        passed,
        trail_sup,
        f"trailing sup {trail_sup:.6g} vs mid sup {mid_sup:.6g} at p={p}",
    )


def _alternative_check(
    trace: SolutionTrace, spec: EquationSpec, u_window: Seq, thresholds: Thresholds
) -> CheckResult:
    """The three-way alternative: k(|c|-1) >= 0, polynomial growth, or
    (u,k)-nonoscillation; the first satisfied branch is reported."""
    kc = spec.k * (abs(spec.c) - 1.0)
    if kc >= 0.0:
        return CheckResult("alternative", True, kc, f"k(|c|-1) = {kc:.6g} >= 0")
    growth = polynomial_growth_check(trace.x, thresholds)
    if growth.passed:
        return CheckResult(
            "alternative", True, growth.exponent,
            f"polynomial growth, exponent {growth.exponent:.3g}",
        )
    labels = classify_oscillation(trace.x, u_window, spec.k, thresholds)
    if "uk_nonoscillatory" in labels:
        return CheckResult("alternative", True, 0.0, "(u,k)-nonoscillatory")
    return CheckResult(
        "alternative", False, kc,
        "k(|c|-1) < 0, no polynomial-growth certificate, trace oscillates",
    )


def theorem_dispatch(
    spec: EquationSpec,
    trace: SolutionTrace,
    case_id: str,
    mode: str = "plain",
    p: float | None = None,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> HypothesisVerdict:
    """Run every hypothesis check of the selected case and the conclusion.

    ``p`` is the boundedness/growth exponent of case (b); it defaults to
    m - 1, the exponent the case (a) reduction produces.  In regular mode
    the spec must carry q with s == q, the u-rate is checked at exponent
    1 - m, and the conclusion additionally requires the remainder to pass
    the iterated-difference checks.
    """
    if case_id not in ("a", "b", "c"):
        raise ValueError(f"case_id must be one of a, b, c; got {case_id!r}")
    if mode not in ("plain", "regular"):
        raise ValueError(f"mode must be plain or regular, got {mode!r}")
    if mode == "regular":
        if spec.q is None:
            raise ConfigError("field q: regular mode requires q to be set")
        if spec.s != spec.q:
            raise ConfigError(
                f"field s: regular mode requires s == q, got s={spec.s}, q={spec.q}"
            )
    rt = runtime(spec)
    m, s = spec.m, spec.s
    n0 = trace.start
    N = trace.z.end
    p_eff = float(m - 1) if p is None else float(p)

    a_diag = weighted_sum_diagnostic(rt.a.sample(1, N), m - 1 - s, thresholds)
    b_diag = weighted_sum_diagnostic(rt.b.sample(1, N), m - 1 - s, thresholds)
    rate_exp = float(1 - m) if mode == "regular" else s + 1.0 - m
    u_window = rt.u.sample(trace.x.start, len(trace.x))
    u_rate = check_u_rate(rt.u.sample(1, N), spec.c, rate_exp, thresholds)
    checks = [
        CheckResult(
            "a-summability", a_diag.converged, a_diag.tail_estimate,
            f"partial sum {a_diag.partial_sum:.6g} at weight {m - 1 - s:g}",
        ),
        CheckResult(
            "b-summability", b_diag.converged, b_diag.tail_estimate,
            f"partial sum {b_diag.partial_sum:.6g} at weight {m - 1 - s:g}",
        ),
        CheckResult(
            "u-rate", u_rate.is_small_o, u_rate.metric,
            f"u - c against n**{rate_exp:g}: {u_rate.kind}",
        ),
    ]

    if case_id == "a":
        checks.append(CheckResult(
            "g-nondecreasing", rt.g.nondecreasing, 0.0, "catalog guarantee"))
        grid = check_g_p_bounded(rt.f, rt.g, float(m - 1))
        checks.append(CheckResult(
            "f-g-bounded", grid.passed, grid.worst_ratio,
            f"(g, {m - 1})-bounded, worst ratio {grid.worst_ratio:.6g}"))
        sigma_excess = max(rt.sigma(n) - n for n in range(n0, N + 1))
        checks.append(CheckResult(
            "sigma-within-past", sigma_excess <= 0, float(sigma_excess),
            f"max(sigma(n) - n) = {sigma_excess}"))
        checks.append(CheckResult(
            "g-integral-divergent", rt.g.integral_diverges, 0.0,
            "exact catalog primitive"))
        labels = classify_oscillation(trace.x, u_window, spec.k, thresholds)
        checks.append(CheckResult(
            "uk-nonoscillation", "uk_nonoscillatory" in labels, 0.0,
            f"labels: {', '.join(sorted(labels))}"))
    elif case_id == "b":
        checks.append(CheckResult(
            "g-locally-bounded", rt.g.locally_bounded, 0.0, "catalog guarantee"))
        grid = check_g_p_bounded(rt.f, rt.g, p_eff)
        checks.append(CheckResult(
            "f-g-bounded", grid.passed, grid.worst_ratio,
            f"(g, {p_eff:g})-bounded, worst ratio {grid.worst_ratio:.6g}"))
        checks.append(_composed_growth_check(trace, spec, p_eff))
        checks.append(_alternative_check(trace, spec, u_window, thresholds))
    else:
        bound = rt.f.bound if rt.f.bounded else math.inf
        checks.append(CheckResult(
            "f-bounded", rt.f.bounded, bound,
            f"catalog bound {bound:g}" if rt.f.bounded else "f unbounded in catalog"))
        checks.append(_alternative_check(trace, spec, u_window, thresholds))

    decomposition = decompose_solution(trace, spec, thresholds)
    x_rep = decomposition.x_report
    base_ok = x_rep.remainder_verdict.is_small_o
    regular_ok: bool | None = None
    if mode == "regular":
        regular_ok = bool(x_rep.regular_passed)
    conclusion = ConclusionResult(
        passed=base_ok and (regular_ok is not False),
        s=s,
        remainder_kind=x_rep.remainder_verdict.kind,
        metric=x_rep.remainder_verdict.metric,
        regular_passed=regular_ok,
    )

    passed = all(c.passed for c in checks) and conclusion.passed
    failed: str | None = None
    if not passed:
        failed = next((c.name for c in checks if not c.passed), "conclusion")
    return HypothesisVerdict(
        case_id=case_id,
        mode=mode,
        checks=tuple(checks),
        conclusion=conclusion,
        passed=passed,
        failed_check=failed,
        decomposition=decomposition,
    )
