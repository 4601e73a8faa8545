import math

import pytest

from asympoly.catalog import CatalogRef, RhsFunction, make_f, make_g
from asympoly.decomp import extract_polynomial
from asympoly.errors import ConfigError
from asympoly.hypotheses import (
    check_g_p_bounded,
    check_u_rate,
    polynomial_growth_check,
    theorem_dispatch,
)
from asympoly.instances import BY_NAME, INSTANCES
from asympoly.neutral_solver import EquationSpec, consistent_seeds, simulate
from asympoly.seqcore import Seq, seq_from_function

CONST_ONE = make_g(CatalogRef("constant", {"value": 1.0}))
IDENTITY_G = make_g(CatalogRef("identity"))


class TestCheckGPBounded:
    def test_sigmoid_under_constant_one(self):
        f = make_f(CatalogRef("sigmoid"))
        for p in (0.0, 1.0, 2.0):
            res = check_g_p_bounded(f, CONST_ONE, p)
            assert res.passed
            assert res.worst_ratio <= 0.5 + 1e-12

    def test_linear_under_identity(self):
        f = make_f(CatalogRef("linear"))
        assert check_g_p_bounded(f, IDENTITY_G, 0.0).passed
        res = check_g_p_bounded(f, IDENTITY_G, 1.0)
        assert not res.passed
        assert res.worst_ratio > 1.0

    def test_zero_rhs_passes_everything(self):
        zero = RhsFunction(CatalogRef("linear"), lambda n, t: 0.0, True, 0.0)
        for g in (CONST_ONE, IDENTITY_G):
            for p in (0.0, 1.0):
                assert check_g_p_bounded(zero, g, p).passed


class TestCheckURate:
    def test_fast_approach_is_small_o(self):
        u = seq_from_function(lambda n: 0.5 + float(n) ** -2, 1, 2000)
        assert check_u_rate(u, 0.5, -1.0).kind == "small_o"

    def test_borderline_rate_is_not_small_o(self):
        u = seq_from_function(lambda n: 0.5 + 1.0 / n, 1, 2000)
        assert check_u_rate(u, 0.5, -1.0).kind != "small_o"

    def test_constant_u_small_o_at_any_exponent(self):
        u = seq_from_function(lambda n: 0.5, 1, 2000)
        for e in (-2.0, 0.0, 1.0):
            assert check_u_rate(u, 0.5, e).kind == "small_o"


class TestPolynomialGrowthCheck:
    def test_cubic_passes_with_exponent_three(self):
        x = seq_from_function(lambda n: float(n) ** 3, 1, 10_000)
        res = polynomial_growth_check(x)
        assert res.passed
        assert abs(res.exponent - 3.0) <= 0.1

    def test_exponential_fails(self):
        x = seq_from_function(lambda n: math.exp(n), 1, 300)
        assert not polynomial_growth_check(x).passed

    def test_bounded_passes_with_exponent_zero(self):
        x = seq_from_function(lambda n: 2.0 + math.sin(float(n)), 1, 10_000)
        res = polynomial_growth_check(x)
        assert res.passed
        assert abs(res.exponent) <= 0.1


class TestTheoremDispatch:
    def test_case_a_instance_passes(self, traces):
        inst = BY_NAME["t1_case_a_m2"]
        v = theorem_dispatch(inst.spec, traces[inst.name], "a")
        assert v.passed
        assert v.failed_check is None
        assert v.conclusion.remainder_kind == "small_o"
        names = [c.name for c in v.checks]
        assert names == [
            "a-summability", "b-summability", "u-rate", "g-nondecreasing",
            "f-g-bounded", "sigma-within-past", "g-integral-divergent",
            "uk-nonoscillation",
        ]

    def test_broken_b_summability_is_named(self):
        inst = BY_NAME["t1_case_b_m2"]
        spec = EquationSpec(
            m=2, k=0, c=-0.5,
            u=CatalogRef("power_offset", {"c": -0.5, "A": 1.0, "rho": 1.0}),
            a=CatalogRef("power", {"A": 1.0, "rho": 2.0}),
            b=CatalogRef("power", {"A": 1.0, "rho": 1.0}),  # harmonic
            f=CatalogRef("sigmoid"),
            g=CatalogRef("constant", {"value": 1.0}),
            sigma=CatalogRef("identity"),
            s=1.0,
        )
        x_seed, z_seed = consistent_seeds(spec, inst.profile)
        trace = simulate(spec, x_seed, z_seed, 10_000)
        v = theorem_dispatch(spec, trace, "b")
        assert not v.passed
        assert v.failed_check == "b-summability"

    def test_polynomial_solution_passes_every_case(self):
        spec = EquationSpec(
            m=2, k=0, c=0.5,
            u=CatalogRef("constant", {"value": 0.5}),
            a=CatalogRef("constant", {"value": 0.0}),
            b=CatalogRef("constant", {"value": 0.0}),
            f=CatalogRef("sigmoid"),
            g=CatalogRef("constant", {"value": 1.0}),
            sigma=CatalogRef("identity"),
            s=0.0,
        )
        x_seed, z_seed = consistent_seeds(spec, Seq(2, (5.0, 7.0)))
        trace = simulate(spec, x_seed, z_seed, 2000)
        for case_id in ("a", "b", "c"):
            v = theorem_dispatch(spec, trace, case_id)
            assert v.passed, (case_id, v.failed_check)

    def test_soundness_wiring(self, traces):
        # overall pass implies every sub-check and the conclusion passed
        for inst in INSTANCES:
            v = theorem_dispatch(inst.spec, traces[inst.name], inst.case_id, inst.mode)
            if v.passed:
                assert all(c.passed for c in v.checks)
                assert v.conclusion.passed
            else:
                assert v.failed_check is not None

    def test_regular_mode_requires_integer_match(self, traces):
        inst = BY_NAME["t1_case_a_m2"]  # q is None
        with pytest.raises(ConfigError):
            theorem_dispatch(inst.spec, traces[inst.name], "a", mode="regular")

    def test_invalid_case_rejected(self, traces):
        inst = BY_NAME["t1_case_a_m2"]
        with pytest.raises(ValueError):
            theorem_dispatch(inst.spec, traces[inst.name], "d")

    def test_regular_instances_pass(self, traces):
        for name in ("t2_regular_m2", "t2_regular_m3"):
            inst = BY_NAME[name]
            v = theorem_dispatch(inst.spec, traces[name], inst.case_id, "regular")
            assert v.passed, (name, v.failed_check)
            assert v.conclusion.regular_passed is True

    def test_case_c_bounded_f(self, traces):
        # the m=2 case (a) instance also satisfies case (c): sigmoid is
        # bounded and k(|c|-1) = 1 >= 0
        inst = BY_NAME["t1_case_a_m2"]
        v = theorem_dispatch(inst.spec, traces[inst.name], "c")
        assert v.passed
        names = [c.name for c in v.checks]
        assert "f-bounded" in names and "alternative" in names


def test_geometric_forcing_small_at_every_exponent():
    # a and b decaying geometrically: the remainder is certified small at
    # every exponent from m-1 down to -1 (root test: (2^-n)^(1/n) = 1/2 < 1)
    spec = EquationSpec(
        m=2, k=0, c=0.5,
        u=CatalogRef("constant", {"value": 0.5}),
        a=CatalogRef("geometric", {"A": 1.0, "ratio": 0.5}),
        b=CatalogRef("geometric", {"A": 0.5, "ratio": 0.5}),
        f=CatalogRef("sigmoid"),
        g=CatalogRef("constant", {"value": 1.0}),
        sigma=CatalogRef("identity"),
        s=0.0,
    )
    x_seed, z_seed = consistent_seeds(spec, Seq(2, (1.0, 1.5)))
    trace = simulate(spec, x_seed, z_seed, 10_000)
    from asympoly.catalog import make_generator

    gen = make_generator(spec.a)
    roots = [abs(gen(n)) ** (1.0 / n) for n in range(50, 60)]  # root-test sanity
    assert max(roots) < 1.0
    for s in (1.0, 0.0, -1.0):
        rep = extract_polynomial(trace.x, 2, s)
        assert rep.remainder_verdict.kind == "small_o", s
