"""Closed-form catalogs for the equation building blocks.

Every right-hand side f(n, t), majorant g, delay map sigma and coefficient
generator used anywhere in the package is drawn from the fixed catalog
below.  There is deliberately no expression interpreter: extending the
catalog is a code change, which keeps runs deterministic and testable.

Identifiers (exact strings):

* f:      sigmoid, arctan, power_sgn, linear, bounded_sin
* g:      identity, power, affine, constant
* sigma:  identity, delay_d, half, floor_log
* u/a/b:  constant, power_offset, power, alt_power, geometric
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import CatalogError
from .seqcore import Seq, seq_from_function


@dataclass(frozen=True)
class CatalogRef:
    """A catalog identifier plus its numeric parameters."""

    id: str
    params: Mapping[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"id": self.id, "params": dict(self.params)}


def _param(ref: CatalogRef, name: str, *, integer: bool = False) -> float:
    if name not in ref.params:
        raise CatalogError(f"catalog entry {ref.id!r} requires parameter {name!r}")
    value = ref.params[name]
    if integer:
        if float(value) != int(value):
            raise CatalogError(
                f"parameter {name!r} of {ref.id!r} must be an integer, got {value!r}"
            )
        return int(value)
    return float(value)


def _check_params(ref: CatalogRef, allowed: tuple[str, ...]) -> None:
    extra = set(ref.params) - set(allowed)
    if extra:
        raise CatalogError(
            f"unknown parameter(s) {sorted(extra)} for catalog entry {ref.id!r}"
        )


@dataclass(frozen=True)
class RhsFunction:
    """Catalog entry for the right-hand side f(n, t)."""

    ref: CatalogRef
    fn: Callable[[int, float], float]
    bounded: bool
    bound: float | None

    def __call__(self, n: int, t: float) -> float:
        return self.fn(n, t)


def make_f(ref: CatalogRef) -> RhsFunction:
    if ref.id == "sigmoid":
        _check_params(ref, ())
        return RhsFunction(ref, lambda n, t: t / (1.0 + t * t), True, 0.5)
    if ref.id == "arctan":
        _check_params(ref, ())
        return RhsFunction(ref, lambda n, t: math.atan(t), True, math.pi / 2)
    if ref.id == "power_sgn":
        _check_params(ref, ("gamma",))
        gamma = _param(ref, "gamma")
        if not 0.0 < gamma <= 1.0:
            raise CatalogError(f"power_sgn needs 0 < gamma <= 1, got {gamma}")
        return RhsFunction(
            ref, lambda n, t: math.copysign(abs(t) ** gamma, t) if t else 0.0, False, None
        )
    if ref.id == "linear":
        _check_params(ref, ())
        return RhsFunction(ref, lambda n, t: t, False, None)
    if ref.id == "bounded_sin":
        _check_params(ref, ())
        return RhsFunction(ref, lambda n, t: math.sin(t), True, 1.0)
    raise CatalogError(f"unknown f identifier {ref.id!r}")


@dataclass(frozen=True)
class Majorant:
    """Catalog entry for the nondecreasing majorant g.

    All catalog majorants are nondecreasing and locally bounded by
    construction.  ``recip_primitive`` is the exact value of
    the integral of 1/g over [lam, t]; ``integral_diverges`` states whether
    that integral diverges as t grows without bound.
    """

    ref: CatalogRef
    fn: Callable[[float], float]
    integral_diverges: bool
    _primitive: Callable[[float, float], float]

    nondecreasing: bool = True
    locally_bounded: bool = True

    def __call__(self, t: float) -> float:
        return self.fn(t)

    def recip_primitive(self, lam: float, t: float) -> float:
        return self._primitive(lam, t)


def make_g(ref: CatalogRef) -> Majorant:
    if ref.id == "identity":
        _check_params(ref, ())
        return Majorant(ref, lambda t: t, True, lambda lam, t: math.log(t / lam))
    if ref.id == "power":
        _check_params(ref, ("gamma",))
        gamma = _param(ref, "gamma")
        if gamma <= 0.0:
            raise CatalogError(f"power majorant needs gamma > 0, got {gamma}")

        def primitive(lam: float, t: float, gamma: float = gamma) -> float:
            if gamma == 1.0:
                return math.log(t / lam)
            return (t ** (1.0 - gamma) - lam ** (1.0 - gamma)) / (1.0 - gamma)

        return Majorant(ref, lambda t: t**gamma, gamma <= 1.0, primitive)
    if ref.id == "affine":
        _check_params(ref, ("alpha", "beta"))
        alpha = _param(ref, "alpha")
        beta = _param(ref, "beta")
        if alpha < 0.0:
            raise CatalogError(f"affine majorant needs alpha >= 0, got {alpha}")

        def primitive(lam: float, t: float, a: float = alpha, b: float = beta) -> float:
            if a == 0.0:
                return (t - lam) / b
            return (math.log(a * t + b) - math.log(a * lam + b)) / a

        return Majorant(ref, lambda t: alpha * t + beta, True, primitive)
    if ref.id == "constant":
        _check_params(ref, ("value",))
        value = _param(ref, "value")
        if value <= 0.0:
            raise CatalogError(f"constant majorant needs value > 0, got {value}")
        return Majorant(ref, lambda t: value, True, lambda lam, t: (t - lam) / value)
    raise CatalogError(f"unknown g identifier {ref.id!r}")


@dataclass(frozen=True)
class DelayMap:
    """Catalog entry for the delay sigma: index -> index."""

    ref: CatalogRef
    fn: Callable[[int], int]

    def __call__(self, n: int) -> int:
        return self.fn(n)


def make_sigma(ref: CatalogRef) -> DelayMap:
    if ref.id == "identity":
        _check_params(ref, ())
        return DelayMap(ref, lambda n: n)
    if ref.id == "delay_d":
        _check_params(ref, ("d",))
        d = _param(ref, "d", integer=True)
        return DelayMap(ref, lambda n: n - d)
    if ref.id == "half":
        _check_params(ref, ())
        return DelayMap(ref, lambda n: n // 2)
    if ref.id == "floor_log":
        _check_params(ref, ())
        return DelayMap(ref, lambda n: int(math.floor(math.log(n))))
    raise CatalogError(f"unknown sigma identifier {ref.id!r}")


@dataclass(frozen=True)
class SeqGenerator:
    """Catalog entry for a coefficient sequence (u, a or b), with its limit."""

    ref: CatalogRef
    fn: Callable[[int], float]
    limit: float

    def __call__(self, n: int) -> float:
        return self.fn(n)

    def sample(self, start: int, length: int) -> Seq:
        return seq_from_function(self.fn, start, length)


def make_generator(ref: CatalogRef) -> SeqGenerator:
    if ref.id == "constant":
        _check_params(ref, ("value",))
        value = _param(ref, "value")
        return SeqGenerator(ref, lambda n: value, value)
    if ref.id == "power_offset":
        _check_params(ref, ("c", "A", "rho"))
        c = _param(ref, "c")
        amp = _param(ref, "A")
        rho = _param(ref, "rho")
        if rho <= 0.0:
            raise CatalogError(f"power_offset needs rho > 0, got {rho}")
        return SeqGenerator(ref, lambda n: c + amp * float(n) ** -rho, c)
    if ref.id == "power":
        _check_params(ref, ("A", "rho"))
        amp = _param(ref, "A")
        rho = _param(ref, "rho")
        if rho <= 0.0:
            raise CatalogError(f"power needs rho > 0, got {rho}")
        return SeqGenerator(ref, lambda n: amp * float(n) ** -rho, 0.0)
    if ref.id == "alt_power":
        _check_params(ref, ("A", "rho"))
        amp = _param(ref, "A")
        rho = _param(ref, "rho")
        if rho <= 0.0:
            raise CatalogError(f"alt_power needs rho > 0, got {rho}")
        return SeqGenerator(
            ref, lambda n: amp * (1.0 if n % 2 == 0 else -1.0) * float(n) ** -rho, 0.0
        )
    if ref.id == "geometric":
        _check_params(ref, ("A", "ratio"))
        amp = _param(ref, "A")
        ratio = _param(ref, "ratio")
        if not 0.0 < ratio < 1.0:
            raise CatalogError(f"geometric needs 0 < ratio < 1, got {ratio}")
        return SeqGenerator(ref, lambda n: amp * ratio**n, 0.0)
    raise CatalogError(f"unknown generator identifier {ref.id!r}")


#: Identifier -> parameter schema, used by validation and the CLI listing.
F_SCHEMAS = {
    "arctan": "",
    "bounded_sin": "",
    "linear": "",
    "power_sgn": "gamma (0 < gamma <= 1)",
    "sigmoid": "",
}
G_SCHEMAS = {
    "affine": "alpha >= 0, beta",
    "constant": "value > 0",
    "identity": "",
    "power": "gamma > 0",
}
SIGMA_SCHEMAS = {
    "delay_d": "d (integer)",
    "floor_log": "",
    "half": "",
    "identity": "",
}
GENERATOR_SCHEMAS = {
    "alt_power": "A, rho > 0",
    "constant": "value",
    "geometric": "A, ratio in (0, 1)",
    "power": "A, rho > 0",
    "power_offset": "c, A, rho > 0",
}


def catalog_listing() -> str:
    """Stable, alphabetically ordered listing of every catalog identifier."""
    lines = []
    for title, schemas in (
        ("f (right-hand side)", F_SCHEMAS),
        ("g (majorant)", G_SCHEMAS),
        ("sigma (delay)", SIGMA_SCHEMAS),
        ("u/a/b (generators)", GENERATOR_SCHEMAS),
    ):
        lines.append(f"{title}:")
        for name in sorted(schemas):
            schema = schemas[name] or "-"
            lines.append(f"  {name:<14} params: {schema}")
    return "\n".join(lines) + "\n"
