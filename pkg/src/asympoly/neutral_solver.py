"""Build, validate and simulate neutral difference equations.

The equation advanced here is, in terms of the associated sequence
z_n = x_n + u_n x_{n+k},

    (m-th difference of z at n) = a_n f(n, x_{sigma(n)}) + b_n

with u_n -> c, |c| != 1.  The simulator fixes the start at
n0 = max(1, 1 - k, m), requires seeds exactly there, advances z with the
binomial expansion of the m-th difference, and extends x by inverting the
neutral relation.  The inversion is only forward-stable when k <= 0 with
|c| < 1, k >= 0 with |c| > 1, or k == 0; outside those regimes any seed
or rounding error is amplified each step and the run ends in a
DivergenceError - an inherent property of the recursion (x = 2**n with
u = -1/2, k = 1 gives z identically 0), not a solver defect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import (
    CatalogRef,
    DelayMap,
    Majorant,
    RhsFunction,
    SeqGenerator,
    make_f,
    make_g,
    make_generator,
    make_sigma,
)
from .errors import (
    CausalityError,
    ConfigError,
    DivergenceError,
    IndexRangeError,
    SeedError,
    SingularRecoveryError,
    WindowLengthError,
)
from .seqcore import MAX_DIFFERENCE_ORDER, Seq, pascal_row

#: |x| or |z| beyond this aborts a run with DivergenceError.
DIVERGENCE_LIMIT = 1e300
#: |u_n| (k > 0) or |1 + u_n| (k == 0) below this is a singular recovery.
SINGULAR_GUARD = 1e-9
#: ||c| - 1| must exceed this margin.
UNIT_MARGIN = 1e-6
#: Tolerance of the post-simulation z = x + u x_{+k} re-verification.
RELATION_RTOL = 1e-9


@dataclass(frozen=True)
class EquationSpec:
    """Full description of one equation instance.

    All functional ingredients are catalog references; ``s`` is the target
    smallness exponent of the asymptotic decomposition and ``q``, when set,
    selects the regular (iterated-difference) form of the conclusion.
    """

    m: int
    k: int
    c: float
    u: CatalogRef
    a: CatalogRef
    b: CatalogRef
    f: CatalogRef
    g: CatalogRef
    sigma: CatalogRef
    s: float
    q: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise ConfigError(f"field m: difference order must be an integer >= 1, got {self.m!r}")
        if self.m > MAX_DIFFERENCE_ORDER:
            raise ConfigError(f"field m: order {self.m} exceeds supported maximum {MAX_DIFFERENCE_ORDER}")
        if not isinstance(self.k, int):
            raise ConfigError(f"field k: neutral shift must be an integer, got {self.k!r}")
        if abs(abs(self.c) - 1.0) <= UNIT_MARGIN:
            raise ConfigError(f"field c: |c| must differ from 1 by more than {UNIT_MARGIN}, got c={self.c}")
        if self.s > self.m - 1 + 1e-12:
            raise ConfigError(f"field s: need s <= m - 1 = {self.m - 1}, got {self.s}")
        if self.q is not None:
            if not isinstance(self.q, int) or not 0 <= self.q <= self.m - 1:
                raise ConfigError(f"field q: need an integer in [0, {self.m - 1}], got {self.q!r}")
        # Building the catalog entries validates identifiers and parameters.
        u_gen = make_generator(self.u)
        make_generator(self.a)
        make_generator(self.b)
        make_f(self.f)
        make_g(self.g)
        make_sigma(self.sigma)
        if abs(u_gen.limit - self.c) > 1e-12 * (1.0 + abs(self.c)):
            raise ConfigError(
                f"field u: generator limit {u_gen.limit} inconsistent with c={self.c}"
            )


@dataclass(frozen=True)
class Runtime:
    """Concrete callables built from an EquationSpec's catalog references."""

    u: SeqGenerator
    a: SeqGenerator
    b: SeqGenerator
    f: RhsFunction
    g: Majorant
    sigma: DelayMap


def runtime(spec: EquationSpec) -> Runtime:
    return Runtime(
        u=make_generator(spec.u),
        a=make_generator(spec.a),
        b=make_generator(spec.b),
        f=make_f(spec.f),
        g=make_g(spec.g),
        sigma=make_sigma(spec.sigma),
    )


def start_index(spec: EquationSpec) -> int:
    """First z index of a simulation: n0 = max(1, 1 - k, m)."""
    return max(1, 1 - spec.k, spec.m)


def x_start_index(spec: EquationSpec) -> int:
    """First x index of a simulation (n0 + k when k < 0, else n0)."""
    return start_index(spec) + min(spec.k, 0)


@dataclass(frozen=True)
class SolutionTrace:
    """Simulated solution: x, z, the horizon, and the causality audit log.

    Entries of causality_log are (step n, sigma(n), x horizon at that step).
    ``start`` records the n0 the run was seeded at.
    """

    x: Seq
    z: Seq
    horizon: int
    start: int
    causality_log: tuple[tuple[int, int, int], ...]


def z_from_x(x: Seq, u: Seq, k: int) -> Seq:
    """Associated sequence z_n = x_n + u_n x_{n+k} on the largest valid window."""
    lo = max(x.start, u.start, x.start - k, 0, -k)
    hi = min(x.end, u.end, x.end - k)
    if lo > hi:
        raise WindowLengthError(
            f"x window [{x.start}, {x.end}] and u window [{u.start}, {u.end}] "
            f"leave no valid index for shift k={k}"
        )
    return Seq(lo, tuple(x.at(n) + u.at(n) * x.at(n + k) for n in range(lo, hi + 1)))


def x_from_z(z: Seq, u: Seq, k: int, seed: Seq | None = None) -> Seq:
    """Recover x from z = x + u x_{+k} by forward recursion.

    k < 0 needs a seed on [z.start + k, z.start - 1]; k > 0 needs a seed on
    [z.start, z.start + k - 1] and u bounded away from 0; k == 0 needs no
    seed and 1 + u bounded away from 0.  Round-trips z_from_x up to
    floating error on stable configurations.
    """
    if u.start > z.start or u.end < z.end:
        raise WindowLengthError(
            f"u window [{u.start}, {u.end}] does not cover z window [{z.start}, {z.end}]"
        )
    if k == 0:
        if seed is not None:
            raise SeedError("k=0 recovery takes no seed")
        vals = []
        for n, zn in z.items():
            den = 1.0 + u.at(n)
            if abs(den) <= SINGULAR_GUARD:
                raise SingularRecoveryError(f"1 + u_n = {den!r} at index {n} is below the singularity guard")
            vals.append(zn / den)
        return Seq(z.start, tuple(vals))
    if seed is None:
        raise SeedError(f"recovery with k={k} requires a seed window")
    if k < 0:
        r = -k
        if seed.start != z.start + k or len(seed) != r:
            raise SeedError(
                f"k={k} recovery needs seed exactly on [{z.start + k}, {z.start - 1}], "
                f"got [{seed.start}, {seed.end}]"
            )
        out_start = z.start + k
        vals = list(seed.values)
        for n, zn in z.items():
            vals.append(zn - u.at(n) * vals[n - r - out_start])
        return Seq(out_start, tuple(vals))
    # k > 0: x_{n+k} = (z_n - x_n) / u_n
    if seed.start != z.start or len(seed) != k:
        raise SeedError(
            f"k={k} recovery needs seed exactly on [{z.start}, {z.start + k - 1}], "
            f"got [{seed.start}, {seed.end}]"
        )
    vals = list(seed.values)
    out_start = z.start
    for n, zn in z.items():
        un = u.at(n)
        if abs(un) <= SINGULAR_GUARD:
            raise SingularRecoveryError(f"u_n = {un!r} at index {n} is below the singularity guard")
        vals.append((zn - vals[n - out_start]) / un)
    return Seq(out_start, tuple(vals))


def consistent_seeds(spec: EquationSpec, profile: Seq) -> tuple[Seq | None, Seq]:
    """Build (x_seed, z_seed) from an initial stretch of x values.

    The profile must cover exactly the x indices that determine the z
    seeds: [n0 + k, n0 + m - 1] for k <= 0 and [n0, n0 + m + k - 1] for
    k > 0.  The z seeds are computed through the neutral relation, so the
    pair is consistent by construction.
    """
    rt = runtime(spec)
    n0 = start_index(spec)
    m, k = spec.m, spec.k
    lo = n0 + min(k, 0)
    hi = n0 + m - 1 + max(k, 0)
    if profile.start != lo or profile.end != hi:
        raise SeedError(
            f"seed profile must cover exactly [{lo}, {hi}], got [{profile.start}, {profile.end}]"
        )
    z_vals = tuple(
        profile.at(n) + rt.u(n) * profile.at(n + k) for n in range(n0, n0 + m)
    )
    z_seed = Seq(n0, z_vals)
    if k > 0:
        x_seed: Seq | None = profile.window(n0, n0 + k - 1)
    elif k < 0:
        x_seed = profile.window(n0 + k, n0 - 1)
    else:
        x_seed = None
    return x_seed, z_seed


@dataclass(frozen=True)
class CausalityReport:
    """Result of the dry-run index bookkeeping."""

    ok: bool
    step: int | None = None
    sigma_value: int | None = None
    x_horizon: int | None = None
    x_start: int | None = None

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return (
            f"causality violation at step n={self.step}: sigma(n)={self.sigma_value} "
            f"outside realized x range [{self.x_start}, {self.x_horizon}]"
        )


def validate_causality(spec: EquationSpec, N: int) -> CausalityReport:
    """Dry-run the index bookkeeping up to horizon N, no arithmetic.

    Reports the first step at which sigma(n) would leave the realized x
    window (reading the future past the x horizon, or before the window
    start, which also enforces sigma(n) >= 1 on the simulated range).
    """
    rt = runtime(spec)
    n0 = start_index(spec)
    xs = x_start_index(spec)
    shift = max(spec.k, 0)
    for n in range(n0, max(n0, N - spec.m + 1)):
        horizon = n + spec.m - 1 + shift
        sv = rt.sigma(n)
        if sv < xs or sv > horizon:
            return CausalityReport(False, n, sv, horizon, xs)
    return CausalityReport(True)


def _check_finite(value: float, what: str, index: int) -> None:
    if not math.isfinite(value) or abs(value) > DIVERGENCE_LIMIT:
        raise DivergenceError(
            f"{what} exceeded the finite range at index {index}; last valid index {index - 1}"
        )


def simulate(spec: EquationSpec, x_seed: Seq | None, z_seed: Seq, N: int) -> SolutionTrace:
    """Advance the equation from its seeds to z horizon N.

    z_seed must supply z at the m indices [n0, n0 + m - 1]; x_seed must
    cover exactly the indices listed in :func:`consistent_seeds`.  The
    returned trace satisfies the neutral relation on the full overlap
    window (re-verified before returning) and the stepping residual of the
    equation itself is at rounding level.
    """
    rt = runtime(spec)
    m, k = spec.m, spec.k
    n0 = start_index(spec)
    xs = x_start_index(spec)
    if N < n0 + m - 1:
        raise ConfigError(f"field horizon: need N >= {n0 + m - 1}, got {N}")
    if z_seed.start != n0 or len(z_seed) != m:
        raise SeedError(
            f"z seed must cover exactly [{n0}, {n0 + m - 1}], got [{z_seed.start}, {z_seed.end}]"
        )
    if k == 0:
        if x_seed is not None:
            raise SeedError("k=0 takes no x seed (x is determined by z)")
    else:
        lo = n0 + min(k, 0)
        hi = n0 - 1 if k < 0 else n0 + k - 1
        if x_seed is None or x_seed.start != lo or x_seed.end != hi:
            got = "nothing" if x_seed is None else f"[{x_seed.start}, {x_seed.end}]"
            raise SeedError(f"x seed must cover exactly [{lo}, {hi}], got {got}")

    signs = pascal_row(m)
    # z values indexed from n0, x values indexed from xs.
    z_vals = list(z_seed.values)
    x_vals: list[float] = list(x_seed.values) if x_seed is not None else []

    def u_at(n: int) -> float:
        return rt.u(n)

    def extend_x_for_z_index(j: int) -> None:
        """Derive the x value(s) unlocked by knowing z at index j."""
        zj = z_vals[j - n0]
        if k < 0:
            xv = zj - u_at(j) * x_vals[j + k - xs]
            _check_finite(xv, "|x|", j)
            x_vals.append(xv)  # x index j
        elif k == 0:
            den = 1.0 + u_at(j)
            if abs(den) <= SINGULAR_GUARD:
                raise SingularRecoveryError(
                    f"1 + u_n = {den!r} at index {j} is below the singularity guard"
                )
            xv = zj / den
            _check_finite(xv, "|x|", j)
            x_vals.append(xv)  # x index j
        else:
            un = u_at(j)
            if abs(un) <= SINGULAR_GUARD:
                raise SingularRecoveryError(
                    f"u_n = {un!r} at index {j} is below the singularity guard"
                )
            xv = (zj - x_vals[j - xs]) / un
            _check_finite(xv, "|x|", j + k)
            x_vals.append(xv)  # x index j + k

    for j in range(n0, n0 + m):
        extend_x_for_z_index(j)

    log: list[tuple[int, int, int]] = []
    for n in range(n0, N - m + 1):
        x_horizon = xs + len(x_vals) - 1
        sv = rt.sigma(n)
        log.append((n, sv, x_horizon))
        if sv < xs or sv > x_horizon:
            raise CausalityError(
                f"step n={n}: sigma(n)={sv} outside realized x range [{xs}, {x_horizon}]"
            )
        rhs = rt.a(n) * rt.f(n, x_vals[sv - xs]) + rt.b(n)
        acc = rhs
        for i in range(m):
            coeff = signs[i] if (m - i) % 2 == 0 else -signs[i]
            acc -= coeff * z_vals[n + i - n0]
        _check_finite(acc, "|z|", n + m)
        z_vals.append(acc)
        extend_x_for_z_index(n + m)

    x = Seq(xs, tuple(x_vals))
    z = Seq(n0, tuple(z_vals))
    _verify_relation(x, z, rt, k)
    return SolutionTrace(x=x, z=z, horizon=N, start=n0, causality_log=tuple(log))


def _verify_relation(x: Seq, z: Seq, rt: Runtime, k: int) -> None:
    for n, zn in z.items():
        term = rt.u(n) * x.at(n + k)
        scale = 1.0 + abs(zn) + abs(x.at(n)) + abs(term)
        if abs(zn - (x.at(n) + term)) > RELATION_RTOL * scale:
            raise RuntimeError(
                f"internal error: neutral relation violated at index {n} after simulation"
            )
