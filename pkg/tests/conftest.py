import math

import mpmath as mp
import pytest

mp.mp.dps = 25


def sv_float(sv) -> float:
    return sv.to_float()


def sv_relerr(sv, true: float) -> float:
    """Relative error of a ScaledValue against a float-range reference."""
    if true == 0.0:
        return abs(sv.to_float())
    return abs((sv.to_float() - true) / true)


def log_relerr(sv, log_true: float) -> float:
    """Relative error when only the log of the reference fits in a float."""
    return abs(math.expm1(sv.log_abs - log_true))


@pytest.fixture(scope="session")
def mp_dps():
    return mp.mp.dps
