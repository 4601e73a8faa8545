"""Shipped equation instances used by the fixtures and the acceptance suite.

The instances cover difference orders m in {1, 2, 3}, shifts k in
{-1, 0, 1}, theorem cases a and b, and smallness exponents s in
{0, m-2, m-1}; two carry an integer q for the regular-mode refinement.
All of them sit in the forward-stable simulation regimes (k <= 0 with
|c| < 1, k >= 0 with |c| > 1, or k == 0) so that traces exist to horizon
10**4; each satisfies the hypotheses of its case by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import CatalogRef
from .neutral_solver import EquationSpec, SolutionTrace, consistent_seeds, simulate
from .seqcore import Seq


@dataclass(frozen=True)
class ShippedInstance:
    name: str
    case_id: str
    mode: str
    spec: EquationSpec
    profile: Seq  # initial x values the seeds are derived from
    note: str = ""


def _ref(id_: str, **params: float) -> CatalogRef:
    return CatalogRef(id_, params)


INSTANCES: tuple[ShippedInstance, ...] = (
    ShippedInstance(
        name="t1_case_a_m1",
        case_id="a",
        mode="plain",
        spec=EquationSpec(
            m=1, k=0, c=0.5,
            u=_ref("power_offset", c=0.5, A=0.25, rho=2.0),
            a=_ref("power", A=1.0, rho=2.0),
            b=_ref("power", A=0.5, rho=3.0),
            f=_ref("sigmoid"),
            g=_ref("constant", value=1.0),
            sigma=_ref("identity"),
            s=0.0,
        ),
        profile=Seq(1, (1.0,)),
        note="first order, convergent solution, case (a)",
    ),
    ShippedInstance(
        name="t1_case_a_m2",
        case_id="a",
        mode="plain",
        spec=EquationSpec(
            m=2, k=1, c=2.0,
            u=_ref("power_offset", c=2.0, A=1.0, rho=2.0),
            a=_ref("power", A=1.0, rho=4.0),
            b=_ref("constant", value=0.0),
            f=_ref("sigmoid"),
            g=_ref("constant", value=1.0),
            sigma=_ref("identity"),
            s=0.0,
        ),
        profile=Seq(2, (1.0, 1.0, 1.0)),
        note="second order with positive shift; |c| > 1 keeps recovery stable",
    ),
    ShippedInstance(
        name="t1_case_a_m1_kneg",
        case_id="a",
        mode="plain",
        spec=EquationSpec(
            m=1, k=-1, c=0.5,
            u=_ref("power_offset", c=0.5, A=0.25, rho=1.0),
            a=_ref("power", A=1.0, rho=2.0),
            b=_ref("alt_power", A=0.5, rho=2.0),
            f=_ref("arctan"),
            g=_ref("constant", value=2.0),
            sigma=_ref("half"),
            s=0.0,
        ),
        profile=Seq(1, (1.0, 1.0)),
        note="negative shift with the halving delay",
    ),
    ShippedInstance(
        name="t1_case_b_m2",
        case_id="b",
        mode="plain",
        spec=EquationSpec(
            m=2, k=0, c=-0.5,
            u=_ref("power_offset", c=-0.5, A=1.0, rho=1.0),
            a=_ref("power", A=1.0, rho=2.0),
            b=_ref("power", A=0.5, rho=2.5),
            f=_ref("sigmoid"),
            g=_ref("constant", value=1.0),
            sigma=_ref("identity"),
            s=1.0,
        ),
        profile=Seq(2, (1.0, 2.0)),
        note="case (b) at s = m - 1; alternative holds via k(|c|-1) = 0",
    ),
    ShippedInstance(
        name="t1_case_b_m3",
        case_id="b",
        mode="plain",
        spec=EquationSpec(
            m=3, k=1, c=2.0,
            u=_ref("power_offset", c=2.0, A=1.0, rho=1.0),
            a=_ref("power", A=1.0, rho=2.0),
            b=_ref("power", A=0.5, rho=3.0),
            f=_ref("bounded_sin"),
            g=_ref("constant", value=1.0),
            sigma=_ref("identity"),
            s=2.0,
        ),
        profile=Seq(3, (9.0, 16.0, 25.0, 36.0)),
        note="third order, quadratic growth, case (b)",
    ),
    ShippedInstance(
        name="t1_case_a_m3",
        case_id="a",
        mode="plain",
        spec=EquationSpec(
            m=3, k=-1, c=0.4,
            u=_ref("power_offset", c=0.4, A=1.0, rho=2.0),
            a=_ref("power", A=1.0, rho=3.0),
            b=_ref("power", A=-0.5, rho=4.0),
            f=_ref("sigmoid"),
            g=_ref("constant", value=1.0),
            sigma=_ref("delay_d", d=1.0),
            s=1.0,
        ),
        profile=Seq(2, (4.0, 9.0, 16.0, 25.0)),
        note="third order at s = m - 2 with a unit delay",
    ),
    ShippedInstance(
        name="t2_regular_m2",
        case_id="b",
        mode="regular",
        spec=EquationSpec(
            m=2, k=1, c=2.0,
            u=_ref("power_offset", c=2.0, A=1.0, rho=2.0),
            a=_ref("power", A=1.0, rho=4.0),
            b=_ref("power", A=0.25, rho=3.0),
            f=_ref("sigmoid"),
            g=_ref("constant", value=1.0),
            sigma=_ref("identity"),
            s=1.0,
            q=1,
        ),
        profile=Seq(2, (1.0, 1.0, 1.0)),
        note="regular refinement, q = 1, u approaches c at rate n**-m",
    ),
    ShippedInstance(
        name="t2_regular_m3",
        case_id="a",
        mode="regular",
        spec=EquationSpec(
            m=3, k=-1, c=0.4,
            u=_ref("power_offset", c=0.4, A=1.0, rho=3.0),
            a=_ref("power", A=1.0, rho=2.0),
            b=_ref("power", A=0.5, rho=3.0),
            f=_ref("sigmoid"),
            g=_ref("constant", value=1.0),
            sigma=_ref("delay_d", d=1.0),
            s=2.0,
            q=2,
        ),
        profile=Seq(2, (4.0, 9.0, 16.0, 25.0)),
        note="regular refinement, q = 2, u approaches c at rate n**-m",
    ),
)

BY_NAME = {inst.name: inst for inst in INSTANCES}

#: The plain-mode instances the main end-to-end criterion runs over.
T1_INSTANCE_NAMES = tuple(i.name for i in INSTANCES if i.mode == "plain")
#: The regular-mode instances of the refinement criterion.
T2_INSTANCE_NAMES = tuple(i.name for i in INSTANCES if i.mode == "regular")


def instance_seeds(inst: ShippedInstance) -> tuple[Seq | None, Seq]:
    return consistent_seeds(inst.spec, inst.profile)


def instance_trace(inst: ShippedInstance, N: int) -> SolutionTrace:
    x_seed, z_seed = instance_seeds(inst)
    return simulate(inst.spec, x_seed, z_seed, N)
