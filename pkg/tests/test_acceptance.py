"""The thirteen acceptance criteria at their stated tolerances.

Each test prints the validator's one-line verdict (visible with ``pytest -v``
or ``-s``), so the run doubles as the acceptance report.
"""

import inspect
import math

import pytest

from wignerqfi import validation
from wignerqfi.numerics import integrate_semi_infinite
from wignerqfi.state import xi, xi_rel
from wignerqfi.validation import CHECKS, DEFAULT_TOLERANCES, run_check
from wignerqfi.wigner import PhysicalConfig

XI_LIMIT_REASON = (
    "xi(1 - 1e-10) differs from the v = 1 closed form by sqrt(1 - v^2) <u^2/E^2>, "
    "a relative gap of 1.7e-4 at m*kappa = 0.05 and 7.5e-6 at m*kappa = 1, above the 1e-6 tolerance"
)


def _report(result, capsys):
    with capsys.disabled():
        print("\n" + result.line())


@pytest.mark.parametrize(
    "index",
    [pytest.param(i, marks=pytest.mark.xfail(strict=True, reason=XI_LIMIT_REASON)) if i == 2 else i
     for i, _, _ in CHECKS],
    ids=[name for _, name, _ in CHECKS],
)
def test_criterion(index, capsys):
    result = run_check(index)
    _report(result, capsys)
    assert result.passed, result.line()


def test_xi_limit_gap_is_the_first_order_correction():
    # the failing criterion fails by exactly the analytic next-order term
    v = 1.0 - 1e-10
    s = math.sqrt((1 - v) * (1 + v))
    for mk in (0.05, 1.0, 6.0):
        cfg = PhysicalConfig(mk, 1.0)
        gap = xi(cfg, v) - xi_rel(cfg)
        second = integrate_semi_infinite(lambda u: 2 * u**3 * math.exp(-u * u) / (u * u + mk * mk)).value
        assert gap == pytest.approx(s * second, rel=1e-4)


def test_validator_rejects_a_zero_slack():
    result = run_check(4, {"kappa_eta_slack": 0.0})
    assert not result.passed


def test_validator_rejects_unknown_tolerance_names():
    with pytest.raises(ValueError):
        run_check(1, {"not_a_tolerance": 1.0})


def test_every_tolerance_is_used_by_some_check():
    source = inspect.getsource(validation)
    for name in DEFAULT_TOLERANCES:
        assert source.count(f'"{name}"') >= 2, name
