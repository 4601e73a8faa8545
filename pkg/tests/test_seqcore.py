import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asympoly.errors import IndexRangeError, WindowLengthError
from asympoly.seqcore import (
    CompensatedSum,
    PolyCoeffs,
    Seq,
    Thresholds,
    classify_oscillation,
    csum,
    delta,
    order_estimate,
    pascal_row,
    poly_eval,
    seq_from_function,
    weighted_sum_diagnostic,
)

from conftest import cumsum_window


class TestSeq:
    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Seq(1, ())

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Seq(1, (1.0, math.inf))
        with pytest.raises(ValueError):
            Seq(1, (math.nan,))

    def test_rejects_negative_start(self):
        with pytest.raises(ValueError):
            Seq(-1, (1.0,))

    def test_out_of_range_access_is_an_error(self):
        x = Seq(3, (1.0, 2.0))
        assert x.at(4) == 2.0
        with pytest.raises(IndexRangeError):
            x.at(2)
        with pytest.raises(IndexRangeError):
            x.at(5)

    def test_window_and_trailing(self):
        x = seq_from_function(float, 1, 10)
        assert x.window(3, 5).values == (3.0, 4.0, 5.0)
        assert x.trailing(0.5).values == (6.0, 7.0, 8.0, 9.0, 10.0)
        with pytest.raises(IndexRangeError):
            x.window(0, 4)


class TestPolyCoeffs:
    def test_eval_linear(self):
        assert poly_eval(PolyCoeffs((0.0, 1.0)), 7) == 7.0

    def test_zero_polynomial(self):
        p = PolyCoeffs(())
        assert p.degree == -1
        for n in (0, 3, 100):
            assert poly_eval(p, n) == 0.0

    def test_direct_evaluation(self):
        # 1 - 2*3 + 3**2 = 4
        assert poly_eval(PolyCoeffs((1.0, -2.0, 1.0)), 3) == 4.0

    def test_degree_ignores_trailing_zeros(self):
        assert PolyCoeffs((1.0, 0.0, 0.0)).degree == 0

    def test_kernel_of_delta(self):
        # degree-d polynomials are annihilated by the (d+1)-th difference
        for coeffs in ((3.0,), (1.0, -2.0), (0.5, 1.0, -0.25), (1.0, 0.0, 0.0, 2.0)):
            p = PolyCoeffs(coeffs)
            x = p.sample(1, 200)
            d = delta(x, p.degree + 1)
            scale = max(abs(v) for v in x.values)
            assert max(abs(v) for v in d.values) <= 1e-9 * scale


class TestDelta:
    def test_constant_kernel(self):
        assert delta(Seq(1, (5.0, 5.0, 5.0, 5.0)), 1).values == (0.0, 0.0, 0.0)

    def test_alternating_closed_form(self):
        # m-th difference of (-1)^n is 2^m (-1)^(m+n)
        x = seq_from_function(lambda n: (-1.0) ** n, 1, 40)
        for m in (1, 2, 3, 5):
            d = delta(x, m)
            for n, v in d.items():
                assert v == 2.0**m * (-1.0) ** (m + n)

    def test_quadratic(self):
        x = seq_from_function(lambda n: float(n * n), 1, 20)
        assert set(delta(x, 2).values) == {2.0}

    def test_order_zero_is_identity(self):
        x = seq_from_function(float, 1, 5)
        assert delta(x, 0) is x

    def test_window_too_short(self):
        with pytest.raises(WindowLengthError):
            delta(Seq(1, (1.0, 2.0)), 2)

    def test_order_cap(self):
        with pytest.raises(ValueError):
            delta(seq_from_function(float, 1, 40), 21)
        with pytest.raises(ValueError):
            pascal_row(21)

    def test_composition_exact(self):
        x = seq_from_function(lambda n: math.sin(0.7 * n) * n, 1, 100)
        for m in (2, 3, 4):
            assert delta(delta(x, 1), m - 1) == delta(x, m)

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.floats(-100, 100), min_size=8, max_size=40),
        st.lists(st.floats(-100, 100), min_size=8, max_size=40),
        st.floats(-3, 3),
        st.floats(-3, 3),
        st.integers(0, 4),
    )
    def test_linearity(self, xs, ys, alpha, beta, m):
        length = min(len(xs), len(ys))
        if length <= m:
            return
        x = Seq(1, tuple(xs[:length]))
        y = Seq(1, tuple(ys[:length]))
        combo = Seq(1, tuple(alpha * a + beta * b for a, b in zip(x.values, y.values)))
        lhs = delta(combo, m)
        dx, dy = delta(x, m), delta(y, m)
        scale = 1.0 + max(max(abs(v) for v in dx.values), max(abs(v) for v in dy.values))
        for n, v in lhs.items():
            assert abs(v - (alpha * dx.at(n) + beta * dy.at(n))) <= 1e-12 * scale * (
                1.0 + abs(alpha) + abs(beta)
            )


class TestCompensatedSum:
    def test_cancellation_naive_sum_gets_wrong(self):
        vals = [1e16, 1.0, -1e16]
        assert sum(vals) == 0.0  # naive summation loses the 1.0
        assert csum(vals) == 1.0

    def test_close_to_exact_under_repeated_cancellation(self):
        vals = [1e16, 1.0, -1e16, 1.0, 0.1, -0.2] * 50
        exact = math.fsum(vals)
        assert abs(csum(vals) - exact) <= 1e-12 * abs(exact)

    def test_running(self):
        acc = CompensatedSum(1.0)
        for v in (1e-16,) * 10:
            acc.add(v)
        assert acc.value == 1.0 + 1e-15


class TestWeightedSumDiagnostic:
    def test_zeta_two_partial(self):
        x = seq_from_function(lambda n: float(n) ** -3, 1, 10_000)
        diag = weighted_sum_diagnostic(x, 1.0)
        assert diag.converged
        assert abs(diag.partial_sum - 1.6449340668482264) < 1e-3

    def test_harmonic_not_converged(self):
        x = seq_from_function(lambda n: 1.0 / n, 1, 10_000)
        diag = weighted_sum_diagnostic(x, 0.0)
        assert not diag.converged
        # trailing quarter of the harmonic series contributes ~log(4/3)
        assert abs(diag.tail_estimate - math.log(4.0 / 3.0)) < 2e-2

    def test_zero_sequence(self):
        x = Seq(1, (0.0,) * 32)
        diag = weighted_sum_diagnostic(x, 2.0)
        assert diag == type(diag)(0.0, 0.0, True)

    def test_minimum_length(self):
        with pytest.raises(WindowLengthError):
            weighted_sum_diagnostic(Seq(1, (1.0,) * 15), 0.0)


class TestOrderEstimate:
    def test_sqrt_is_small_o_of_n(self):
        x = seq_from_function(lambda n: float(n) ** 0.5, 1, 10_000)
        assert order_estimate(x, 1.0).kind == "small_o"

    def test_linear_is_big_o_not_small_o(self):
        x = seq_from_function(float, 1, 10_000)
        v = order_estimate(x, 1.0)
        assert v.kind == "big_O"
        assert v.metric == 1.0

    def test_n_log_n_is_neither(self):
        x = seq_from_function(lambda n: n * math.log(n), 1, 10_000)
        assert order_estimate(x, 1.0).kind == "neither"

    def test_zero_skipped_when_weight_undefined(self):
        x = Seq(0, tuple(float(i) for i in range(64)))
        v = order_estimate(x, -1.0)
        assert v.excluded_zero

    def test_minimum_length(self):
        with pytest.raises(WindowLengthError):
            order_estimate(Seq(1, (1.0,) * 31), 0.0)

    def test_power_grid(self):
        # n^t * (bounded, nonvanishing): small_o iff t < s, big_O iff t <= s
        grid = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
        for t in grid:
            x = seq_from_function(lambda n: float(n) ** t * (2.0 + math.sin(n)), 1, 10_000)
            for s in grid:
                v = order_estimate(x, s)
                assert (v.kind == "small_o") == (t < s), (t, s, v)
                assert (v.kind in ("small_o", "big_O")) == (t <= s), (t, s, v)


def test_stolz_cesaro_coefficient_property():
    # if the m-th difference tends to lam, then p! * (m-p)-th difference / n^p
    # approaches lam as well, for every p up to m
    for m in (1, 2, 3, 4):
        for lam in (-10.0, -1.0, 0.5, 10.0):
            d = [lam + 1.0 / n for n in range(1, 10_001)]
            z = cumsum_window(d, 1, m)
            for p in range(m + 1):
                dv = delta(z, m - p)
                n_end = dv.end
                val = math.factorial(p) * dv.at(n_end) / float(n_end) ** p
                assert abs(val - lam) <= 0.05 * abs(lam), (m, lam, p, val)


class TestClassifyOscillation:
    def test_constant_positive_grants_all_nonoscillation_labels(self):
        x = seq_from_function(lambda n: 1.0, 1, 100)
        u = seq_from_function(lambda n: 0.3, 1, 100)
        labels = classify_oscillation(x, u, 3)
        assert {"nonoscillatory", "k_nonoscillatory", "uk_nonoscillatory"} <= labels
        assert "oscillatory" not in labels

    def test_alternating_even_shift(self):
        x = seq_from_function(lambda n: (-1.0) ** n, 1, 100)
        u = seq_from_function(lambda n: 2.0, 1, 100)
        labels = classify_oscillation(x, u, 2)
        assert "k_nonoscillatory" in labels
        assert "uk_nonoscillatory" in labels
        assert "nonoscillatory" not in labels

    def test_alternating_odd_shift_only_oscillatory(self):
        x = seq_from_function(lambda n: (-1.0) ** n, 1, 100)
        u = seq_from_function(lambda n: 2.0, 1, 100)
        assert classify_oscillation(x, u, 1) == frozenset({"oscillatory"})

    def test_insufficient_overlap(self):
        x = seq_from_function(lambda n: 1.0, 1, 5)
        u = seq_from_function(lambda n: 1.0, 1, 5)
        with pytest.raises(WindowLengthError):
            classify_oscillation(x, u, 10)


def test_thresholds_are_data():
    t = Thresholds(tau_small=0.1)
    assert t.tau_small == 0.1
    assert t.tau_tail == 1e-3
