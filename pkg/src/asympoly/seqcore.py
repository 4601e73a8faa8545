"""Finite-difference calculus on realized sequence windows.

This is the vocabulary the rest of the package speaks: finite windows of
real sequences with an explicit start index, polynomial sequences, exact
binomial coefficients, compensated window sums, and the finite-horizon
order-of-growth diagnostics.  Every operation is a pure function of
immutable inputs, so values can be shared freely between threads.

Conventions fixed once here and reused everywhere:

* "for large n" means: for every n in the trailing half of the realized
  common window;
* a small-o verdict at exponent s requires the trailing-third sup of
  |x_n|/n**s to be below ``tau_small`` *and* to have decreased against the
  middle third;
* window sums accumulate in compensated (Neumaier) summation in index
  order, so diagnostics are reproducible;
* index n = 0 never enters an n**s-weighted diagnostic unless s == 0
  (the weight is undefined or degenerate there); windows built from
  generators start at index 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator

from .errors import IndexRangeError, WindowLengthError

#: Difference orders above this are rejected everywhere in the package.
MAX_DIFFERENCE_ORDER = 20


@dataclass(frozen=True)
class Thresholds:
    """Certification thresholds for the finite-horizon diagnostics.

    tau_small
        trailing-third sup bound for a small-o verdict.
    tau_tail
        relative tail bound below which a weighted sum counts as converged.
    big_o_slack
        allowed relative excess of the trailing sup over the earlier sup
        before a big-O verdict is withheld.
    noise_floor
        relative magnitude below which a decomposition remainder counts
        as zero (pure rounding residue).
    trail_fraction
        fraction of the window that "for large n" refers to.
    coeff_window_fraction
        fraction of the window averaged when estimating polynomial
        coefficients from iterated differences.
    """

    tau_small: float = 0.05
    tau_tail: float = 1e-3
    big_o_slack: float = 0.02
    noise_floor: float = 1e-9
    trail_fraction: float = 0.5
    coeff_window_fraction: float = 0.125


DEFAULT_THRESHOLDS = Thresholds()


@dataclass(frozen=True)
class Seq:
    """A realized window of a real sequence.

    ``values[i]`` is the entry at index ``start + i``.  Entries are finite
    floats; reading outside the window raises :class:`IndexRangeError`
    instead of silently defaulting.
    """

    start: int
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.start, int) or isinstance(self.start, bool):
            raise ValueError(f"start index must be an integer, got {self.start!r}")
        if self.start < 0:
            raise ValueError(f"start index must be >= 0, got {self.start}")
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("sequence window must be non-empty")
        for i, v in enumerate(vals):
            if not math.isfinite(v):
                raise ValueError(f"non-finite value at index {self.start + i}")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> int:
        """Last index of the window, inclusive."""
        return self.start + len(self.values) - 1

    def at(self, n: int) -> float:
        if n < self.start or n > self.end:
            raise IndexRangeError(
                f"index {n} outside realized window [{self.start}, {self.end}]"
            )
        return self.values[n - self.start]

    def items(self) -> Iterator[tuple[int, float]]:
        """Pairs (n, x_n) in index order."""
        start = self.start
        return ((start + i, v) for i, v in enumerate(self.values))

    def window(self, lo: int, hi: int) -> "Seq":
        """Sub-window on [lo, hi], inclusive on both ends."""
        if lo > hi:
            raise IndexRangeError(f"empty sub-window [{lo}, {hi}]")
        if lo < self.start or hi > self.end:
            raise IndexRangeError(
                f"sub-window [{lo}, {hi}] not contained in [{self.start}, {self.end}]"
            )
        return Seq(lo, self.values[lo - self.start : hi - self.start + 1])

    def trailing(self, fraction: float) -> "Seq":
        """Trailing part of the window holding ceil(len * fraction) entries."""
        count = max(1, math.ceil(len(self.values) * fraction))
        return Seq(self.end - count + 1, self.values[-count:])

    def map(self, fn: Callable[[int, float], float]) -> "Seq":
        """Elementwise transform (n, x_n) -> value, same window."""
        return Seq(self.start, tuple(fn(n, v) for n, v in self.items()))


def seq_from_function(fn: Callable[[int], float], start: int = 1, length: int = 1) -> Seq:
    """Materialize fn on the window [start, start + length - 1]."""
    if length < 1:
        raise ValueError("length must be >= 1")
    return Seq(start, tuple(float(fn(start + i)) for i in range(length)))


@dataclass(frozen=True)
class PolyCoeffs:
    """Coefficients of a polynomial sequence; ``coeffs[j]`` multiplies n**j.

    The empty tuple is the zero polynomial.  Evaluation is Horner order,
    highest degree first, which fixes the rounding pattern and keeps
    results bit-for-bit reproducible.
    """

    coeffs: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        vals = tuple(float(c) for c in self.coeffs)
        for j, c in enumerate(vals):
            if not math.isfinite(c):
                raise ValueError(f"non-finite coefficient at degree {j}")
        object.__setattr__(self, "coeffs", vals)

    @property
    def degree(self) -> int:
        """Highest index with a nonzero entry; -1 for the zero polynomial."""
        for j in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[j] != 0.0:
                return j
        return -1

    def __call__(self, n: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def sample(self, start: int, length: int) -> Seq:
        return seq_from_function(self.__call__, start, length)

    def padded(self, degree: int) -> tuple[float, ...]:
        """Coefficients extended with zeros through the given degree."""
        if degree < len(self.coeffs) - 1:
            return self.coeffs[: degree + 1]
        return self.coeffs + (0.0,) * (degree + 1 - len(self.coeffs))


def poly_eval(p: PolyCoeffs, n: float) -> float:
    """Evaluate the polynomial sequence at index n (Horner order)."""
    return p(n)


class CompensatedSum:
    """Neumaier compensated accumulator.

    Adding values in index order gives window sums whose rounding error is
    independent of magnitude ordering, which is what makes the diagnostics
    deterministic and tight.
    """

    __slots__ = ("_s", "_c")

    def __init__(self, value: float = 0.0) -> None:
        self._s = float(value)
        self._c = 0.0

    def add(self, v: float) -> None:
        t = self._s + v
        if abs(self._s) >= abs(v):
            self._c += (self._s - t) + v
        else:
            self._c += (v - t) + self._s
        self._s = t

    @property
    def value(self) -> float:
        return self._s + self._c


def csum(values: Iterable[float]) -> float:
    """Compensated sum of an iterable, consumed in order."""
    acc = CompensatedSum()
    for v in values:
        acc.add(v)
    return acc.value


@lru_cache(maxsize=None)
def pascal_row(m: int) -> tuple[int, ...]:
    """Row m of Pascal's triangle, exact integers, orders capped at 20."""
    if m < 0:
        raise ValueError("binomial row index must be >= 0")
    if m > MAX_DIFFERENCE_ORDER:
        raise ValueError(
            f"difference order {m} exceeds the supported maximum {MAX_DIFFERENCE_ORDER}"
        )
    row = (1,)
    for _ in range(m):
        row = tuple(a + b for a, b in zip((0,) + row, row + (0,)))
    return row


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return pascal_row(n)[k]


def delta(x: Seq, m: int) -> Seq:
    """m-th forward difference of the window.

    Computed by iterating the first difference, so
    ``delta(delta(x, 1), m - 1)`` reproduces ``delta(x, m)`` exactly.
    The result keeps the start index and is shorter by m entries;
    ``delta(x, 0)`` is x itself.
    """
    if m < 0:
        raise ValueError("difference order must be >= 0")
    if m > MAX_DIFFERENCE_ORDER:
        raise ValueError(
            f"difference order {m} exceeds the supported maximum {MAX_DIFFERENCE_ORDER}"
        )
    if len(x) <= m:
        raise WindowLengthError(
            f"window of length {len(x)} too short for difference order {m}"
        )
    if m == 0:
        return x
    vals: tuple[float, ...] | list[float] = x.values
    for _ in range(m):
        vals = [vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    return Seq(x.start, tuple(vals))


@dataclass(frozen=True)
class WeightedSumDiagnostic:
    partial_sum: float
    tail_estimate: float
    converged: bool


def weighted_sum_diagnostic(
    x: Seq, w: float, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> WeightedSumDiagnostic:
    """Partial sum of n**w * |x_n| with a last-quarter tail estimate.

    ``converged`` means the trailing quarter of the window contributes less
    than ``tau_tail * (1 + partial_sum)``.  This is a finite-horizon
    verdict with a declared threshold, not a convergence proof.
    """
    if len(x) < 16:
        raise WindowLengthError(f"need at least 16 entries, got {len(x)}")
    tail_from = x.start + (3 * len(x)) // 4
    total = CompensatedSum()
    tail = CompensatedSum()
    for n, v in x.items():
        if n == 0 and w != 0.0:
            continue
        term = float(n) ** w * abs(v)
        total.add(term)
        if n >= tail_from:
            tail.add(term)
    partial = total.value
    tail_part = tail.value
    return WeightedSumDiagnostic(
        partial, tail_part, tail_part < thresholds.tau_tail * (1.0 + partial)
    )


@dataclass(frozen=True)
class OrderVerdict:
    """Finite-horizon verdict for membership of x in o(n**s) / O(n**s).

    metric is the sup of |x_n|/n**s over the trailing third of the window,
    trend its ratio against the middle-third sup, and bound the sup over
    the first two thirds (the big-O reference level).
    """

    kind: str  # "small_o" | "big_O" | "neither"
    exponent: float
    metric: float
    trend: float
    bound: float
    excluded_zero: bool = False

    @property
    def is_small_o(self) -> bool:
        return self.kind == "small_o"


def order_estimate(
    x: Seq,
    s: float,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
    noise_scale: float | None = None,
) -> OrderVerdict:
    """Order-of-growth verdict for x against the scale n**s.

    small_o: trailing-third sup of |x_n|/n**s below ``tau_small`` and
    decreased versus the middle third.  big_O: trailing sup within
    ``big_o_slack`` of the sup over the first two thirds.  Deterministic
    given the window and thresholds.  Index 0 is skipped (and flagged)
    whenever s != 0.

    ``noise_scale``, when given, is the rounding resolution of the data x
    was derived from: a window whose trailing values sit at or below that
    resolution is certified small_o directly (trend reported as 0), since
    no trend measured on quantization noise is meaningful.
    """
    if len(x) < 32:
        raise WindowLengthError(f"need at least 32 entries, got {len(x)}")
    ratios = []
    raw = []
    excluded = False
    for n, v in x.items():
        if n == 0 and s != 0.0:
            excluded = True
            continue
        ratios.append(abs(v) / float(n) ** s)
        raw.append(abs(v))
    count = len(ratios)
    third = count // 3
    mid = ratios[count - 2 * third : count - third]
    trail = ratios[count - third :]
    early = ratios[: count - third]
    metric = max(trail)
    mid_sup = max(mid)
    early_sup = max(early)
    if (
        noise_scale is not None
        and max(raw[count - third :]) <= noise_scale
        and metric < thresholds.tau_small
    ):
        return OrderVerdict("small_o", s, metric, 0.0, early_sup, excluded)
    if mid_sup > 0.0:
        trend = metric / mid_sup
    elif metric == 0.0:
        trend = 0.0
    else:
        trend = math.inf
    small = metric < thresholds.tau_small and trend < 1.0
    big = metric <= early_sup * (1.0 + thresholds.big_o_slack)
    kind = "small_o" if small else ("big_O" if big else "neither")
    return OrderVerdict(kind, s, metric, trend, early_sup, excluded)


#: Labels classify_oscillation may grant.
OSCILLATION_LABELS = (
    "nonoscillatory",
    "k_nonoscillatory",
    "uk_nonoscillatory",
    "oscillatory",
)


def classify_oscillation(
    x: Seq, u: Seq, k: int, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> frozenset[str]:
    """Sign-pattern labels of x relative to the shift k and weight u.

    Each nonoscillation label is granted iff its defining sign condition
    holds at every n in the trailing half of the common window on which
    x_n, x_{n+1}, x_{n+k} and u_n all exist; ``oscillatory`` is the
    complement of ``nonoscillatory``.
    """
    lo = max(x.start, u.start, x.start - k)
    hi = min(x.end - 1, u.end, x.end - k)
    if lo > hi:
        raise WindowLengthError(
            f"x window [{x.start}, {x.end}] and u window [{u.start}, {u.end}] "
            f"do not overlap sufficiently for shift k={k}"
        )
    count = hi - lo + 1
    tail_lo = hi - max(1, math.ceil(count * thresholds.trail_fraction)) + 1
    non = k_non = uk_non = True
    for n in range(tail_lo, hi + 1):
        xn = x.at(n)
        if xn * x.at(n + 1) < 0.0:
            non = False
        xnk = x.at(n + k)
        if xn * xnk < 0.0:
            k_non = False
        if xn * u.at(n) * xnk < 0.0:
            uk_non = False
    labels = set()
    if non:
        labels.add("nonoscillatory")
    else:
        labels.add("oscillatory")
    if k_non:
        labels.add("k_nonoscillatory")
    if uk_non:
        labels.add("uk_nonoscillatory")
    return frozenset(labels)
