"""Discrete Bihari/Gronwall machinery.

Computes the uniform bound M of the discrete Bihari inequality

    w_n <= lambda + sum_{j=p}^{n-1} a_j g(w_j)   and   sum a_j <= G(M),

where G(t) is the integral of 1/g over [lambda, t], by monotone bracketing
and bisection on G.  Catalog majorants use their exact primitives; a plain
callable g goes through adaptive Simpson quadrature.  The module also
builds the extremal equality sequence (the brute-force oracle the bound is
tested against) and the growth constant L with
|x_n| <= n**(m-1) (L + sum |m-th differences|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .catalog import Majorant
from .errors import BracketRangeError, QuadratureDomainError, WindowLengthError
from .seqcore import CompensatedSum, Seq, delta

#: Absolute tolerance of the adaptive quadrature.
QUAD_TOL = 1e-10
#: Bisection stops when the bracket is narrower than this relative width.
BISECT_RTOL = 1e-12
#: Upper end of the doubling bracket search.
BRACKET_CAP = 1e15
#: Growth per doubling below which G counts as plateaued (integral finite).
PLATEAU_EPS = 1e-14
#: Floor keeping the BHL2 constant strictly positive.
BHL2_EPS = 1e-12


def adaptive_simpson(
    fn: Callable[[float], float], a: float, b: float, tol: float = QUAD_TOL
) -> tuple[float, float]:
    """Adaptive Simpson quadrature of fn over [a, b].

    Returns (value, error_estimate); the estimate is the accumulated
    |S_fine - S_coarse| / 15 over accepted panels.
    """
    if b < a:
        raise ValueError(f"inverted interval [{a}, {b}]")
    if b == a:
        return 0.0, 0.0

    def simpson(lo: float, hi: float, flo: float, fmid: float, fhi: float) -> float:
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    total = CompensatedSum()
    err_total = CompensatedSum()
    mid0 = 0.5 * (a + b)
    stack = [(a, b, fn(a), fn(mid0), fn(b), tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, budget, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lmid = 0.5 * (lo + mid)
        rmid = 0.5 * (mid + hi)
        flm = fn(lmid)
        frm = fn(rmid)
        whole = simpson(lo, hi, flo, fmid, fhi)
        left = simpson(lo, mid, flo, flm, fmid)
        right = simpson(mid, hi, fmid, frm, fhi)
        err = (left + right - whole) / 15.0
        if abs(err) <= budget or depth >= 60:
            total.add(left + right + err)
            err_total.add(abs(err))
        else:
            stack.append((lo, mid, flo, flm, fmid, budget / 2.0, depth + 1))
            stack.append((mid, hi, fmid, frm, fhi, budget / 2.0, depth + 1))
    return total.value, err_total.value


def _recip(g: Callable[[float], float]) -> Callable[[float], float]:
    def integrand(t: float) -> float:
        gv = g(t)
        if gv <= 0.0:
            raise QuadratureDomainError(f"g({t!r}) = {gv!r} is not positive")
        return 1.0 / gv

    return integrand


def integrate_recip_g(
    g: Majorant | Callable[[float], float], lam: float, t: float
) -> float:
    """Integral of 1/g over [lam, t].

    Catalog majorants short-circuit to their exact primitive after a
    positivity check at the lower endpoint (nondecreasing g is then
    positive on the whole interval); a plain callable goes through
    adaptive quadrature, which checks positivity at every sample.
    """
    if t < lam:
        raise ValueError(f"upper limit {t} below lower limit {lam}")
    if isinstance(g, Majorant):
        g_lam = g(lam)
        if g_lam <= 0.0:
            raise QuadratureDomainError(f"g(lambda) = {g_lam!r} is not positive")
        return g.recip_primitive(lam, t)
    value, _ = adaptive_simpson(_recip(g), lam, t, QUAD_TOL)
    return value


@dataclass(frozen=True)
class BihariProblem:
    """Inputs of the discrete Bihari bound.

    ``total_a`` may be the scalar sum of the weights or a window of
    nonnegative weights to be summed (compensated).  ``p`` is the start
    index of the inequality; it does not enter the bound itself but fixes
    where the extremal oracle starts.
    """

    g: Majorant | Callable[[float], float]
    lam: float
    total_a: float | Seq
    p: int = 1

    def __post_init__(self) -> None:
        if self.lam < 0.0:
            raise ValueError(f"lambda must be >= 0, got {self.lam}")
        g_lam = self.g(self.lam)
        if not g_lam > 0.0:
            raise ValueError(f"g(lambda) = {g_lam!r} must be positive")
        if isinstance(self.total_a, Seq):
            for n, v in self.total_a.items():
                if v < 0.0:
                    raise ValueError(f"negative weight a_{n} = {v}")
        elif self.total_a < 0.0:
            raise ValueError(f"total weight must be >= 0, got {self.total_a}")

    @property
    def total(self) -> float:
        if isinstance(self.total_a, Seq):
            acc = CompensatedSum()
            for v in self.total_a.values:
                acc.add(v)
            return acc.value
        return float(self.total_a)


@dataclass(frozen=True)
class BihariBound:
    """Output of the bound computation.

    When ``condition_violated`` is set, the integral of 1/g plateaus below
    the weight sum and no finite M exists; M is then +inf.
    """

    M: float
    G_at_M: float
    quadrature_error: float
    condition_violated: bool = False


def bihari_bound(prob: BihariProblem) -> BihariBound:
    """Least M >= lambda with G(M) >= total, by doubling then bisection.

    G is monotone nondecreasing, so the returned M is on the safe side:
    G(M) >= total up to the bisection width.  condition_violated is
    reported when G plateaus (growth < PLATEAU_EPS per doubling, or the
    exact improper integral is finite) strictly below the weight sum.
    """
    total = prob.total
    lam = prob.lam
    err_seen = 0.0

    if isinstance(prob.g, Majorant):
        g_lam = prob.g(lam)
        if g_lam <= 0.0:
            raise QuadratureDomainError(f"g(lambda) = {g_lam!r} is not positive")

        def G(t: float) -> float:
            return prob.g.recip_primitive(lam, t)

    else:
        integrand = _recip(prob.g)

        def G(t: float) -> float:
            nonlocal err_seen
            value, err = adaptive_simpson(integrand, lam, t, QUAD_TOL)
            err_seen = max(err_seen, err)
            return value

    if total == 0.0:
        return BihariBound(M=lam, G_at_M=0.0, quadrature_error=0.0)

    if isinstance(prob.g, Majorant) and not prob.g.integral_diverges:
        # Exact primitive: the improper integral is its limit at +inf.
        g_limit = prob.g.recip_primitive(lam, BRACKET_CAP)
        if g_limit < total:
            return BihariBound(
                M=math.inf, G_at_M=g_limit, quadrature_error=0.0, condition_violated=True
            )

    lo = lam
    hi = max(2.0 * lam, lam + 1.0)
    g_hi = G(hi)
    while g_hi < total:
        if hi >= BRACKET_CAP:
            raise BracketRangeError(
                f"G({BRACKET_CAP:g}) = {g_hi} still below total {total}; "
                "bound exceeds the supported bracket range"
            )
        nxt = min(hi * 2.0, BRACKET_CAP)
        g_nxt = G(nxt)
        if g_nxt - g_hi < PLATEAU_EPS and g_nxt < total:
            return BihariBound(
                M=math.inf, G_at_M=g_nxt, quadrature_error=err_seen, condition_violated=True
            )
        lo, hi, g_hi = hi, nxt, g_nxt

    for _ in range(64):
        if hi - lo <= BISECT_RTOL * (1.0 + hi):
            break
        mid = 0.5 * (lo + hi)
        if G(mid) >= total:
            hi = mid
        else:
            lo = mid
    return BihariBound(M=hi, G_at_M=G(hi), quadrature_error=err_seen)


def worst_case_w(
    a: Seq, g: Majorant | Callable[[float], float], lam: float, p: int, N: int
) -> Seq:
    """Extremal sequence with equality in the Bihari recursion.

    w_p = lambda and w_{n+1} = lambda + sum_{j=p}^{n} a_j g(w_j), computed
    incrementally with compensated summation.  This is the brute-force
    oracle against which bihari_bound is tested.
    """
    if a.start > p or a.end < N - 1:
        raise WindowLengthError(
            f"weight window [{a.start}, {a.end}] does not cover [{p}, {N - 1}]"
        )
    for n in range(p, N):
        if a.at(n) < 0.0:
            raise ValueError(f"negative weight a_{n} = {a.at(n)}")
    acc = CompensatedSum(lam)
    w = [float(lam)]
    for n in range(p, N):
        acc.add(a.at(n) * g(w[-1]))
        w.append(acc.value)
    return Seq(p, tuple(w))


def bhl2_constant(x: Seq, m: int, n0: int) -> float:
    """Minimal L > 0 with |x_n| <= n**(m-1) (L + sum_{i=n0}^{n-1} |d_i|)
    at every window index, where d is the m-th difference of x.

    L is the max over the window of |x_n|/n**(m-1) minus the running
    difference sum, floored at a tiny epsilon to stay positive.
    """
    if m < 1:
        raise ValueError(f"order m must be >= 1, got {m}")
    if n0 < max(1, x.start):
        raise ValueError(f"n0 must be >= max(1, start index {x.start}), got {n0}")
    dm = delta(x, m)  # indices x.start .. x.end - m
    if n0 > dm.end:
        raise WindowLengthError(f"window too short: no differences at or after n0={n0}")
    best = BHL2_EPS
    running = CompensatedSum()
    for n in range(n0, x.end - m + 2):
        term = abs(x.at(n)) / float(n) ** (m - 1) - running.value
        if term > best:
            best = term
        if n <= dm.end:
            running.add(abs(dm.at(n)))
    return best
