#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" quadrature.py
Globally adaptive Gauss-Kronrod integration and the product integral of a function over a positive interval.
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
import heapq
import itertools
import math
import os

# Downloaded Libraries #
import numpy as np

# Local Libraries #
from .exceptions import ConfigurationError, DomainError, IntegrandError
from .means import MeanPair, geometric_mean
from .verifylogging import VerificationLogger


# Definitions #
_logger = VerificationLogger("hhverify.quadrature", module_of_class=__name__)

REL_TOL_ENV = "HHVERIFY_REL_TOL"
ABS_TOL_ENV = "HHVERIFY_ABS_TOL"

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-12
DEFAULT_MAX_DEPTH = 60
DEFAULT_MAX_PANELS = 20000

# 15 point Kronrod rule with its embedded 7 point Gauss rule, abscissae listed from the right end to the center.
_KRONROD_NODES = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_KRONROD_WEIGHTS = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_GAUSS_WEIGHTS = np.array([
    0.0,
    0.129484966168869693270611432679082,
    0.0,
    0.279705391489276667901467771423780,
    0.0,
    0.381830050505118944950369775488975,
    0.0,
    0.417959183673469387755102040816327,
])

# Full stencils on [-1, 1].
_NODES = np.concatenate((-_KRONROD_NODES[:-1], _KRONROD_NODES[::-1]))
_K_WEIGHTS = np.concatenate((_KRONROD_WEIGHTS[:-1], _KRONROD_WEIGHTS[::-1]))
_G_WEIGHTS = np.concatenate((_GAUSS_WEIGHTS[:-1], _GAUSS_WEIGHTS[::-1]))

# Rounding floor of a panel error, as in QUADPACK.
_ROUNDING_FLOOR = 50.0 * np.finfo(float).eps


# Classes #
@dataclasses.dataclass(frozen=True)
class Interval:
    """A closed positive interval [a, b] with 0 < a < b.

    Attributes:
        a (float): The left endpoint.
        b (float): The right endpoint.
    """
    a: float
    b: float

    def __post_init__(self):
        a, b = self.a, self.b
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"interval endpoints must be finite, got ({a!r}, {b!r})")
        if not 0.0 < a < b:
            raise DomainError(f"an interval needs 0 < a < b, got ({a!r}, {b!r})")
        object.__setattr__(self, "a", float(a))
        object.__setattr__(self, "b", float(b))

    @classmethod
    def coerce(cls, obj):
        """Returns obj as an Interval, accepting an (a, b) pair."""
        if isinstance(obj, cls):
            return obj
        a, b = obj
        return cls(a, b)

    @property
    def width(self):
        """float: b - a."""
        return self.b - self.a

    @property
    def geometric_midpoint(self):
        """float: sqrt(a * b), the fixed point of x -> ab / x."""
        return geometric_mean(MeanPair(self.a, self.b))

    @property
    def log_ratio(self):
        """float: ln(b / a), computed without cancellation for nearby endpoints."""
        return math.log1p((self.b - self.a) / self.a)

    def as_mean_pair(self):
        return MeanPair(self.a, self.b)


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """The relative and absolute targets of an integration.

    Attributes:
        rel (float): The relative tolerance.
        abs (float): The absolute tolerance.
    """
    rel: float = DEFAULT_REL_TOL
    abs: float = DEFAULT_ABS_TOL

    def __post_init__(self):
        for name in ("rel", "abs"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0.0:
                raise ConfigurationError(f"{name} tolerance must be a finite positive number, got {value!r}")
        object.__setattr__(self, "rel", float(self.rel))
        object.__setattr__(self, "abs", float(self.abs))

    @classmethod
    def from_environment(cls, environ=None, rel=None, abs=None):
        """Creates tolerances from the HHVERIFY_REL_TOL and HHVERIFY_ABS_TOL variables.

        Explicit arguments take precedence over the environment, which takes precedence over the defaults.

        Args:
            environ (dict, optional): The environment to read, os.environ by default.
            rel (float, optional): An explicit relative tolerance.
            abs (float, optional): An explicit absolute tolerance.

        Returns:
            Tolerances: The resolved tolerances.
        """
        if environ is None:
            environ = os.environ

        values = {}
        for name, key, explicit, default in (("rel", REL_TOL_ENV, rel, DEFAULT_REL_TOL),
                                             ("abs", ABS_TOL_ENV, abs, DEFAULT_ABS_TOL)):
            if explicit is not None:
                values[name] = explicit
            elif environ.get(key, "").strip():
                try:
                    values[name] = float(environ[key])
                except ValueError:
                    raise ConfigurationError(f"{key} is not a number: {environ[key]!r}") from None
            else:
                values[name] = default
        return cls(**values)

    @classmethod
    def coerce(cls, tol):
        """Interprets a tolerance argument.

        None gives the defaults, a number is a relative tolerance paired with an absolute tolerance a hundred times
        smaller, and a Tolerances object is returned unchanged.
        """
        if tol is None:
            return cls()
        if isinstance(tol, cls):
            return tol
        return cls(rel=tol, abs=tol * 1e-2)

    def target(self, value):
        """float: The error allowed for an integral of the given value."""
        return max(self.abs, self.rel * abs(value))


@dataclasses.dataclass(frozen=True)
class QuadratureResult:
    """The outcome of an integration.

    Attributes:
        value (float): The estimate of the integral.
        error_estimate (float): The summed panel error estimates.
        evaluations (int): The number of integrand evaluations.
        converged (bool): True when the error estimate met the requested tolerance.
        tolerance (float): The tolerance the error estimate was compared with.
    """
    value: float
    error_estimate: float
    evaluations: int
    converged: bool
    tolerance: float = math.nan

    def scaled(self, factor):
        """Returns the result multiplied by a positive constant."""
        return dataclasses.replace(self, value=self.value * factor, error_estimate=self.error_estimate * factor,
                                   tolerance=self.tolerance * factor)


@dataclasses.dataclass(frozen=True)
class _Panel:
    lo: float
    hi: float
    depth: int
    value: float
    error: float


# Functions #
def _bounds(interval):
    if isinstance(interval, Interval):
        return interval.a, interval.b
    lo, hi = (float(v) for v in interval)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise DomainError(f"integration bounds need lo < hi, got ({lo!r}, {hi!r})")
    return lo, hi


def _evaluate(g, nodes):
    """Evaluates g on an array of nodes, falling back to pointwise calls for scalar-only integrands."""
    try:
        values = np.asarray(g(nodes), dtype=float)
    except (TypeError, ValueError):
        values = np.array([float(g(float(x))) for x in nodes.ravel()]).reshape(nodes.shape)
    if values.shape != nodes.shape:
        try:
            values = np.broadcast_to(values, nodes.shape)
        except ValueError:
            raise IntegrandError(f"integrand returned shape {values.shape} for {nodes.shape} nodes") from None
    if not np.all(np.isfinite(values)):
        bad = nodes[~np.isfinite(values)]
        raise IntegrandError(f"integrand is not finite at x = {float(bad.flat[0])!r}")
    return values


def _gauss_kronrod(g, los, his, depths):
    """Applies the 7/15 point pair to every panel at once."""
    los = np.asarray(los, dtype=float)
    his = np.asarray(his, dtype=float)
    centers = 0.5 * (los + his)
    halves = 0.5 * (his - los)
    nodes = centers[:, None] + halves[:, None] * _NODES[None, :]
    values = _evaluate(g, nodes)

    kronrod = halves * (values @ _K_WEIGHTS)
    gauss = halves * (values @ _G_WEIGHTS)
    magnitude = halves * (np.abs(values) @ _K_WEIGHTS)
    errors = np.maximum(np.abs(kronrod - gauss), _ROUNDING_FLOOR * magnitude)

    return [_Panel(float(lo), float(hi), depth, float(k), float(e))
            for lo, hi, depth, k, e in zip(los, his, depths, kronrod, errors)]


def integrate(g, interval, rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL, max_depth=DEFAULT_MAX_DEPTH,
              max_panels=DEFAULT_MAX_PANELS):
    """Integrates g over an interval by global adaptive bisection.

    Each panel is integrated with the 15 point Kronrod rule and its error is the difference to the embedded 7 point
    Gauss rule, floored at the rounding level of the panel. The panel with the largest error is bisected, both halves
    in one vectorized call, until the summed error meets max(abs_tol, rel_tol * |value|). Panel values are summed with
    math.fsum in the order of their left endpoints, so results are reproducible.

    Args:
        g: The integrand. It is called with numpy arrays of nodes and must return matching arrays; integrands that only
            accept scalars are evaluated point by point.
        interval (:obj:`Interval` or tuple): The interval or an (lo, hi) pair with lo < hi.
        rel_tol (float, optional): The relative tolerance.
        abs_tol (float, optional): The absolute tolerance.
        max_depth (int, optional): The maximum number of bisections of any panel.
        max_panels (int, optional): The maximum number of panels.

    Returns:
        QuadratureResult: The integral with its error estimate, unconverged results carry the best estimate.
    """
    Tolerances(rel_tol, abs_tol)
    lo, hi = _bounds(interval)

    counter = itertools.count()
    heap = []
    exhausted = []
    first, = _gauss_kronrod(g, [lo], [hi], [0])
    heapq.heappush(heap, (-first.error, next(counter), first))
    evaluations = _NODES.size
    running_value = first.value
    running_error = first.error

    def totals():
        panels = sorted([entry[2] for entry in heap] + exhausted, key=lambda p: p.lo)
        total_value = math.fsum(p.value for p in panels)
        return total_value, math.fsum(p.error for p in panels), max(abs_tol, rel_tol * abs(total_value))

    converged = False
    while True:
        # Running sums only screen candidates; the decision uses exact sums.
        if running_error <= 1.01 * max(abs_tol, rel_tol * abs(running_value)):
            value, error, target = totals()
            running_value, running_error = value, error
            if error <= target:
                converged = True
                break

        while heap and heap[0][2].depth >= max_depth:
            exhausted.append(heapq.heappop(heap)[2])
        if not heap or len(heap) + len(exhausted) >= max_panels:
            break

        worst = heapq.heappop(heap)[2]
        middle = 0.5 * (worst.lo + worst.hi)
        if not worst.lo < middle < worst.hi:
            exhausted.append(worst)
            continue

        depth = worst.depth + 1
        children = _gauss_kronrod(g, [worst.lo, middle], [middle, worst.hi], [depth, depth])
        for child in children:
            heapq.heappush(heap, (-child.error, next(counter), child))
        evaluations += 2 * _NODES.size
        if (evaluations // (2 * _NODES.size)) % 64 == 0:
            running_value, running_error, _ = totals()
        else:
            running_value += children[0].value + children[1].value - worst.value
            running_error += children[0].error + children[1].error - worst.error

    if not converged:
        value, error, target = totals()
        _logger.trace_log("quadrature", "integrate",
                          f"no convergence on [{lo!r}, {hi!r}]: error {error!r} exceeds {target!r}", level="WARNING")

    return QuadratureResult(value=value, error_estimate=error, evaluations=evaluations, converged=converged,
                            tolerance=target)


def _product_integrand(spec, interval):
    ab = interval.a * interval.b

    def integrand(x):
        return spec.value(x) * spec.value(ab / x) / x

    return integrand


def _check_in_domain(spec, interval):
    if not spec.domain.contains_interval(interval.a, interval.b):
        raise DomainError(f"[{interval.a!r}, {interval.b!r}] is not inside the domain {spec.domain} of {spec}")


def product_integral(spec, interval, tol=None):
    """The mean of f(x) f(ab/x) with respect to dx/x, (1 / ln(b/a)) * integral of f(x) f(ab/x) / x over [a, b].

    Args:
        spec (:obj:`FunctionSpec`): The function f.
        interval (:obj:`Interval` or tuple): The interval [a, b] inside the domain of f.
        tol (:obj:`Tolerances` or float, optional): The integration tolerances.

    Returns:
        QuadratureResult: The normalized integral.
    """
    interval = Interval.coerce(interval)
    tol = Tolerances.coerce(tol)
    _check_in_domain(spec, interval)

    log_ratio = interval.log_ratio
    raw = integrate(_product_integrand(spec, interval), interval, rel_tol=tol.rel, abs_tol=tol.abs * log_ratio)
    return raw.scaled(1.0 / log_ratio)


def half_integrals(spec, interval, tol=None):
    """Integrates f(x) f(ab/x) / x over [a, sqrt(ab)] and over [sqrt(ab), b].

    Returns:
        tuple: The two QuadratureResults, left half first.
    """
    interval = Interval.coerce(interval)
    tol = Tolerances.coerce(tol)
    _check_in_domain(spec, interval)

    g = _product_integrand(spec, interval)
    middle = interval.geometric_midpoint
    left = integrate(g, (interval.a, middle), rel_tol=tol.rel, abs_tol=tol.abs)
    right = integrate(g, (middle, interval.b), rel_tol=tol.rel, abs_tol=tol.abs)
    return left, right


def half_integral_symmetry_check(spec, interval, tol=None):
    """Checks that x -> ab/x maps the two halves of the product integral onto each other.

    Args:
        spec (:obj:`FunctionSpec`): The function f.
        interval (:obj:`Interval` or tuple): The interval [a, b] inside the domain of f.
        tol (:obj:`Tolerances` or float, optional): The integration tolerances.

    Returns:
        bool: True when the halves agree within ten times the tolerance.
    """
    tol = Tolerances.coerce(tol)
    left, right = half_integrals(spec, interval, tol)
    allowed = 10.0 * tol.target(max(abs(left.value), abs(right.value)))
    return abs(left.value - right.value) <= allowed
