#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" kernels.py
The kernels h1, h2, h3, the reciprocal pair (theta, vartheta), the derivative-magnitude cases and the exponent
inequality behind the case bounds.

For u = e^x the kernels are the moments h1(u) = int (1 - t) u^t dt, h2(u) = int t u^t dt and h3(u) = int u^t dt over
[0, 1], so h1 + h2 = h3 and each has a removable singularity at u = 1.
"""
__author__ = "Anthony Fong"
__copyright__ = "Copyright 2021, Anthony Fong"
__credits__ = ["Anthony Fong"]
__license__ = ""
__version__ = "0.1.0"
__maintainer__ = "Anthony Fong"
__email__ = ""
__status__ = "Beta"

# Default Libraries #
import dataclasses
import enum
import math

# Downloaded Libraries #
import numpy as np

# Local Libraries #
from .exceptions import DomainError
from .functions import ConvexityParams
from .quadrature import Interval


# Definitions #
SERIES_WINDOW = 1e-4
EXPONENT_TOL = 1e-12

# Largest |ln theta| before theta or its reciprocal leaves the double range.
_MAX_LOG_THETA = 700.0

# Window of the atanh expansion of d - ln(1 + d).
_ATANH_WINDOW = 0.25

_SERIES_TERMS = 10
# Taylor coefficients in x = ln u.
_H1_COEFFICIENTS = tuple(1.0 / math.factorial(n + 2) for n in range(_SERIES_TERMS))
_H2_COEFFICIENTS = tuple((n + 1.0) / math.factorial(n + 2) for n in range(_SERIES_TERMS))
_H3_COEFFICIENTS = tuple(1.0 / math.factorial(n + 1) for n in range(_SERIES_TERMS))


# Classes #
@dataclasses.dataclass(frozen=True)
class ThetaPair:
    """The reciprocal parameters of the case bounds.

    Attributes:
        theta (float): (a |f'(a)|^s / (b |f'(b)|^s))^(q/2).
        vartheta (float): 1 / theta.
    """
    theta: float
    vartheta: float


class CaseTag(enum.Enum):
    """Where |f'(a)| and |f'(b)| lie relative to 1, a value of exactly 1 counting as the lower side."""
    BOTH_LE_1 = "both_le_1"
    BOTH_GE_1 = "both_ge_1"
    A_LE_1_LE_B = "a_le_1_le_b"
    B_LE_1_LE_A = "b_le_1_le_a"


# Functions #
def _horner(coefficients, x):
    total = 0.0
    for c in reversed(coefficients):
        total = total * x + c
    return total


def _log_excess(d, log_u):
    """d - ln(1 + d) given ln(1 + d), accurate when d is small.

    Near zero ln(1 + d) = 2 atanh(z) with z = d / (2 + d), so d - ln(1 + d) = d^2 / (2 + d) - 2 (z^3/3 + z^5/5 + ...)
    and no cancellation occurs.
    """
    if abs(d) >= _ATANH_WINDOW:
        return d - log_u
    z = d / (2.0 + d)
    z2 = z * z
    odd = 0.0
    for k in range(12, 0, -1):
        odd = odd * z2 + 1.0 / (2 * k + 1)
    return d * d / (2.0 + d) - 2.0 * z * z2 * odd


def _check_argument(u):
    if not (isinstance(u, (int, float)) and math.isfinite(u)) or u <= 0.0:
        raise DomainError(f"kernels are defined for finite u > 0, got {u!r}")
    return float(u)


def _kernels(u):
    """(h1, h2, h3) at u, sharing one logarithm so that h1 + h2 = h3 up to rounding."""
    u = _check_argument(u)
    d = u - 1.0
    if abs(d) < SERIES_WINDOW:
        x = math.log1p(d)
        return _horner(_H1_COEFFICIENTS, x), _horner(_H2_COEFFICIENTS, x), _horner(_H3_COEFFICIENTS, x)

    log_u = math.log(u)
    square = log_u * log_u
    first = _log_excess(d, log_u)
    second = d * log_u - first
    return first / square, second / square, d / log_u


def h1(u):
    """h1(u) = (u - ln u - 1) / (ln u)^2, with h1(1) = 1/2.

    Args:
        u (float): A positive argument.

    Returns:
        float: The kernel value.
    """
    return _kernels(u)[0]


def h2(u):
    """h2(u) = (u ln u - u + 1) / (ln u)^2, with h2(1) = 1/2.

    Args:
        u (float): A positive argument.

    Returns:
        float: The kernel value.
    """
    return _kernels(u)[1]


def h3(u):
    """h3(u) = (u - 1) / ln u, with h3(1) = 1.

    Args:
        u (float): A positive argument.

    Returns:
        float: The kernel value.
    """
    return _kernels(u)[2]


KERNELS = {1: h1, 2: h2, 3: h3}


def theta_from_magnitudes(a, b, df_a, df_b, s, q):
    """The pair (theta, vartheta) from the endpoint derivative magnitudes, computed in the log domain.

    Args:
        a (float): The left endpoint.
        b (float): The right endpoint.
        df_a (float): |f'(a)|.
        df_b (float): |f'(b)|.
        s (float): The convexity exponent.
        q (float): The power of |f'|.

    Returns:
        ThetaPair: theta = exp((q/2)(ln a + s ln|f'(a)| - ln b - s ln|f'(b)|)) and its reciprocal.
    """
    for name, value in (("|f'(a)|", df_a), ("|f'(b)|", df_b)):
        if not math.isfinite(value) or value <= 0.0:
            raise DomainError(f"theta is degenerate: {name} = {value!r} must be finite and nonzero")

    log_theta = 0.5 * q * (math.log(a) + s * math.log(df_a) - math.log(b) - s * math.log(df_b))
    if abs(log_theta) > _MAX_LOG_THETA:
        raise DomainError(f"theta is degenerate: ln(theta) = {log_theta!r} is out of range")
    return ThetaPair(math.exp(log_theta), math.exp(-log_theta))


def theta_pair(spec, interval, params):
    """The pair (theta, vartheta) of a function on an interval.

    Args:
        spec (:obj:`FunctionSpec`): The function.
        interval (:obj:`Interval` or tuple): The interval [a, b].
        params (:obj:`ConvexityParams`): The exponents s and q.

    Returns:
        ThetaPair: The reciprocal pair.
    """
    interval = Interval.coerce(interval)
    if not isinstance(params, ConvexityParams):
        params = ConvexityParams(*params)
    if not spec.domain.contains_interval(interval.a, interval.b):
        raise DomainError(f"[{interval.a!r}, {interval.b!r}] is not inside the domain {spec.domain} of {spec}")

    df_a = abs(float(spec.derivative(interval.a)))
    df_b = abs(float(spec.derivative(interval.b)))
    return theta_from_magnitudes(interval.a, interval.b, df_a, df_b, params.s, params.q)


def classify_case(df_a, df_b):
    """Assigns the derivative magnitudes to one of the four cases.

    Args:
        df_a (float): |f'(a)|.
        df_b (float): |f'(b)|.

    Returns:
        CaseTag: The case, a value of exactly 1 going to the lower side.
    """
    if df_a <= 1.0 and df_b <= 1.0:
        return CaseTag.BOTH_LE_1
    elif df_a <= 1.0:
        return CaseTag.A_LE_1_LE_B
    elif df_b <= 1.0:
        return CaseTag.B_LE_1_LE_A
    return CaseTag.BOTH_GE_1


def exponent_bound_holds(mu, eta, t, s):
    """Element-wise test of mu^(t^s) <= mu^(ts) and eta^(t^s) <= eta^(ts + 1 - s).

    The comparisons allow a relative slack of 1e-12 for the rounding of the exponents.

    Returns:
        numpy.ndarray: Booleans broadcast over the arguments.
    """
    mu, eta, t, s = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (mu, eta, t, s)))
    power_t = np.power(t, s)
    first = np.power(mu, power_t) <= np.power(mu, t * s) * (1.0 + EXPONENT_TOL)
    second = np.power(eta, power_t) <= np.power(eta, t * s + 1.0 - s) * (1.0 + EXPONENT_TOL)
    return first & second


def exponent_bound_check(mu, eta, t, s):
    """Checks the exponent inequality used to bound the case integrals.

    Scalars and arrays are accepted; arrays are checked at every point.

    Args:
        mu (float): A base in (0, 1].
        eta (float): A base of at least 1.
        t (float): The integration variable in (0, 1].
        s (float): The convexity exponent in (0, 1].

    Returns:
        bool: True when both inequalities hold everywhere.
    """
    ranges = (("mu", mu, lambda v: (v > 0.0) & (v <= 1.0)),
              ("eta", eta, lambda v: v >= 1.0),
              ("t", t, lambda v: (v > 0.0) & (v <= 1.0)),
              ("s", s, lambda v: (v > 0.0) & (v <= 1.0)))
    for name, value, valid in ranges:
        value = np.asarray(value, dtype=float)
        if not np.all(np.isfinite(value) & valid(value)):
            raise DomainError(f"{name} is out of range: {value!r}")
    return bool(np.all(exponent_bound_holds(mu, eta, t, s)))
