import pytest

from asympoly.instances import INSTANCES, instance_trace

HORIZON = 10_000


@pytest.fixture(scope="session")
def traces():
    """Simulated traces of every shipped instance at the shared horizon."""
    return {inst.name: instance_trace(inst, HORIZON) for inst in INSTANCES}


def cumsum_window(dvals, start, m):
    """m-fold forward cumulative sums with zero initial conditions.

    Given d on [start, start + len - 1], returns z on
    [start, start + len + m - 1] with the m-th difference of z equal to d.
    """
    from asympoly.seqcore import Seq

    vals = list(dvals)
    for _ in range(m):
        acc = 0.0
        out = []
        for v in vals:
            out.append(acc)
            acc += v
        out.append(acc)
        vals = out
    return Seq(start, tuple(vals))


def tail_sum_window(dvals, start, m):
    """m-fold tail sums of a fast-decaying window (converging to zero)."""
    from asympoly.seqcore import Seq

    vals = list(dvals)
    for _ in range(m):
        acc = 0.0
        out = []
        for v in reversed(vals):
            acc += v
            out.append(acc)
        vals = list(reversed(out))
    return Seq(start, tuple(vals))
