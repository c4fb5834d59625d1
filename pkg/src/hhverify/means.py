#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" means.py
Special means of two positive numbers: the arithmetic, geometric, logarithmic and p-logarithmic means.
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
import math

# Downloaded Libraries #

# Local Libraries #
from .exceptions import DomainError


# Definitions #
# Exponent magnitude below which the p-logarithmic mean is evaluated with ordinary powers.
_DIRECT_EXPONENT_LIMIT = 700.0


# Classes #
@dataclasses.dataclass(frozen=True)
class MeanPair:
    """The two positive arguments of a mean.

    The pair does not need to be ordered, every mean is symmetric in its arguments.

    Attributes:
        a (float): The first argument.
        b (float): The second argument.
    """
    a: float
    b: float

    def __post_init__(self):
        for name in ("a", "b"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0.0:
                raise DomainError(f"mean argument {name} must be a finite positive number, got {value!r}")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @property
    def low(self):
        """float: The smaller argument."""
        return min(self.a, self.b)

    @property
    def high(self):
        """float: The larger argument."""
        return max(self.a, self.b)

    @property
    def is_degenerate(self):
        """bool: True when both arguments are equal."""
        return self.a == self.b


# Functions #
def _coerce_pair(p):
    if isinstance(p, MeanPair):
        return p
    a, b = p
    return MeanPair(a, b)


def _clamp(value, low, high):
    return min(max(value, low), high)


def arithmetic_mean(p):
    """The arithmetic mean A(a, b) = (a + b) / 2.

    Args:
        p (:obj:`MeanPair` or tuple): The arguments of the mean.

    Returns:
        float: The arithmetic mean.
    """
    p = _coerce_pair(p)
    return _clamp(0.5 * p.low + 0.5 * p.high, p.low, p.high)


def geometric_mean(p):
    """The geometric mean G(a, b) = sqrt(a * b).

    Args:
        p (:obj:`MeanPair` or tuple): The arguments of the mean.

    Returns:
        float: The geometric mean.
    """
    p = _coerce_pair(p)
    if p.is_degenerate:
        return p.a

    product = p.low * p.high
    if product == 0.0 or math.isinf(product):
        value = math.sqrt(p.low) * math.sqrt(p.high)
    else:
        value = math.sqrt(product)
    return _clamp(value, p.low, p.high)


def logarithmic_mean(p):
    """The logarithmic mean L(a, b) = (b - a) / (ln b - ln a), continued by L(a, a) = a.

    Args:
        p (:obj:`MeanPair` or tuple): The arguments of the mean.

    Returns:
        float: The logarithmic mean.
    """
    p = _coerce_pair(p)
    if p.is_degenerate:
        return p.a

    difference = p.high - p.low
    value = difference / math.log1p(difference / p.low)
    return _clamp(value, p.low, p.high)


def _log_abs_expm1(y):
    """ln|e^y - 1| for y != 0 without overflow."""
    if y > 0.0:
        return y + math.log1p(-math.exp(-y))
    return math.log(-math.expm1(y))


def p_logarithmic_mean(p, exponent):
    """The p-logarithmic mean L_p(a, b) = ((b^(p+1) - a^(p+1)) / ((p + 1)(b - a)))^(1/p).

    With l = ln(b/a) the ratio inside the root is a^p * expm1((p+1) l) / ((p+1) expm1(l)), which is evaluated
    directly while the exponents are moderate and in the log domain otherwise.

    Args:
        p (:obj:`MeanPair` or tuple): The arguments of the mean, which must differ.
        exponent (float): The exponent p, excluding -1 and 0.

    Returns:
        float: The p-logarithmic mean.
    """
    p = _coerce_pair(p)
    if not math.isfinite(exponent) or exponent in (-1.0, 0.0):
        raise DomainError(f"the p-logarithmic mean is undefined for exponent {exponent!r}")
    if p.is_degenerate:
        raise DomainError("the p-logarithmic mean needs two distinct arguments")

    low, high = p.low, p.high
    log_ratio = math.log1p((high - low) / low)
    shifted = (exponent + 1.0) * log_ratio

    value = None
    if abs(shifted) < _DIRECT_EXPONENT_LIMIT and log_ratio < _DIRECT_EXPONENT_LIMIT:
        ratio = math.expm1(shifted) / ((exponent + 1.0) * math.expm1(log_ratio))
        try:
            value = low * ratio ** (1.0 / exponent)
        except OverflowError:
            value = None
        if value is not None and (not math.isfinite(value) or value == 0.0):
            value = None

    if value is None:
        log_ratio_term = _log_abs_expm1(shifted) - math.log(abs(exponent + 1.0)) - _log_abs_expm1(log_ratio)
        value = math.exp(math.log(low) + log_ratio_term / exponent)

    return _clamp(value, low, high)
