#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" functions.py
Evaluatable test functions with closed-form derivatives, the sampling convexity checkers and supremum estimation.
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
import threading
from typing import Optional

# Downloaded Libraries #
import numpy as np
from scipy import optimize
from scipy.stats import qmc

# Local Libraries #
from .exceptions import DomainError, SpecificationError
from .quadrature import Interval
from .verifylogging import VerificationLogger


# Definitions #
_logger = VerificationLogger("hhverify.functions", module_of_class=__name__)

DERIVATIVE_CHECK_POINTS = 100
DERIVATIVE_CHECK_STEP = 1e-6
DERIVATIVE_CHECK_TOL = 1e-6

CONVEXITY_SAMPLES = 100_000
CONVEXITY_TOL = 1e-12

SCAN_POINTS = 1025


# Classes #
@dataclasses.dataclass(frozen=True)
class Domain:
    """A positive interval (lo, hi) or (lo, hi] on which a function is defined.

    Attributes:
        lo (float): The open left end.
        hi (float): The right end.
        hi_closed (bool): True when hi itself belongs to the domain.
    """
    lo: float = 0.0
    hi: float = math.inf
    hi_closed: bool = False

    def __str__(self):
        return f"({self.lo:g}, {self.hi:g}{']' if self.hi_closed else ')'}"

    def contains(self, x):
        """bool: True when x belongs to the domain."""
        return self.lo < x < self.hi or (self.hi_closed and x == self.hi)

    def contains_interval(self, a, b):
        """bool: True when the closed interval [a, b] lies inside the domain."""
        return a <= b and self.contains(a) and self.contains(b)


class FunctionFamily:
    """A parametrized family of positive functions with a closed-form derivative.

    Families are the single extension point of the builtin registry: create one and pass it to register_family to
    make it available to FunctionSpec and to the command line.

    Attributes:
        name (str): The identifier used in specification strings.
        parameters (tuple): The names of the real parameters, in their canonical order.
        function: Evaluates f as function(x, params) for numpy arrays x and a parameter dict.
        derivative: Evaluates f' with the same signature.
        domain: The Domain of the family, or a function of the parameter dict returning one.
        validator: A function of the parameter dict that raises SpecificationError for invalid parameters.
        probe (tuple): The range the derivative check samples, clipped to the domain.
        description (str): A one line description.

    Args:
        name (str): The identifier used in specification strings.
        function: Evaluates f.
        derivative: Evaluates f'.
        parameters (tuple, optional): The names of the parameters.
        domain (optional): The domain or a function returning it.
        validator (optional): The parameter validator.
        probe (tuple, optional): The range the derivative check samples.
        description (str, optional): A one line description.
        init (bool, optional): Determines if this object should be initialized.
    """
    # Construction/Destruction
    def __init__(self, name=None, function=None, derivative=None, parameters=(), domain=None, validator=None,
                 probe=(0.05, 4.0), description="", init=True):
        self.name = ""
        self.parameters = ()
        self.function = None
        self.derivative = None
        self.domain = Domain()
        self.validator = None
        self.probe = (0.05, 4.0)
        self.description = ""

        if init:
            self.construct(name, function, derivative, parameters, domain, validator, probe, description)

    def __repr__(self):
        return f"FunctionFamily({self.name!r}, parameters={self.parameters!r})"

    # Methods
    def construct(self, name, function, derivative, parameters=(), domain=None, validator=None, probe=(0.05, 4.0),
                  description=""):
        """Constructs this object.

        Args:
            name (str): The identifier used in specification strings.
            function: Evaluates f.
            derivative: Evaluates f'.
            parameters (tuple, optional): The names of the parameters.
            domain (optional): The domain or a function returning it.
            validator (optional): The parameter validator.
            probe (tuple, optional): The range the derivative check samples.
            description (str, optional): A one line description.
        """
        if not name or ":" in name or "," in name:
            raise SpecificationError(f"invalid family name {name!r}")
        self.name = name
        self.function = function
        self.derivative = derivative
        self.parameters = tuple(parameters)
        self.domain = Domain() if domain is None else domain
        self.validator = validator
        self.probe = tuple(probe)
        self.description = description

    def domain_for(self, params):
        """Domain: The domain for a parameter dict."""
        return self.domain(params) if callable(self.domain) else self.domain

    def validate(self, params):
        """Checks a parameter dict against the family's parameter names and validator."""
        unknown = set(params) - set(self.parameters)
        if unknown:
            raise SpecificationError(f"{self.name} has no parameter(s) {sorted(unknown)}")
        missing = [p for p in self.parameters if p not in params]
        if missing:
            raise SpecificationError(f"{self.name} needs parameter(s) {missing}")
        for key, value in params.items():
            if not math.isfinite(value):
                raise SpecificationError(f"{self.name} parameter {key} must be finite, got {value!r}")
        if self.validator is not None:
            self.validator(params)


@dataclasses.dataclass(frozen=True)
class FunctionSpec:
    """An immutable, hashable reference to one member of a registered family.

    value and derivative accept numpy arrays and do not check the domain, evaluate does.

    Attributes:
        family (str): The family name.
        params (tuple): The (name, value) pairs of the parameters in the family's order.
    """
    family: str
    params: tuple = ()
    definition: FunctionFamily = dataclasses.field(default=None, compare=False, repr=False)

    def __post_init__(self):
        definition = self.definition if self.definition is not None else get_family(self.family)
        params = {name: float(value) for name, value in self.params}
        definition.validate(params)
        object.__setattr__(self, "definition", definition)
        object.__setattr__(self, "params", tuple((name, params[name]) for name in definition.parameters))

    def __str__(self):
        return format_function_spec(self)

    @property
    def parameters(self):
        """dict: The parameters by name."""
        return dict(self.params)

    @property
    def domain(self):
        """Domain: Where f and f' are defined."""
        return self.definition.domain_for(self.parameters)

    def param(self, name):
        return self.parameters[name]

    def value(self, x):
        """f at x, element-wise for arrays."""
        return self.definition.function(np.asarray(x, dtype=float), self.parameters)

    def derivative(self, x):
        """f' at x, element-wise for arrays."""
        return self.definition.derivative(np.asarray(x, dtype=float), self.parameters)


class ConvexityKind(enum.Enum):
    """The four convexity notions that can be checked."""
    CONVEX = "convex"
    S_CONVEX_SECOND_SENSE = "s_convex_second_sense"
    GEOMETRICALLY_CONVEX = "geometrically_convex"
    S_GEOMETRICALLY_CONVEX = "s_geometrically_convex"

    @property
    def needs_s(self):
        return self in (ConvexityKind.S_CONVEX_SECOND_SENSE, ConvexityKind.S_GEOMETRICALLY_CONVEX)


@dataclasses.dataclass(frozen=True)
class ConvexityParams:
    """The exponents of the s-geometric convexity hypothesis on |f'|^q.

    Attributes:
        s (float): The convexity exponent in (0, 1].
        q (float): The power of |f'|, at least 1.
    """
    s: float = 1.0
    q: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.s) and 0.0 < self.s <= 1.0):
            raise DomainError(f"s must lie in (0, 1], got {self.s!r}")
        if not (math.isfinite(self.q) and self.q >= 1.0):
            raise DomainError(f"q must be at least 1, got {self.q!r}")
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "q", float(self.q))


@dataclasses.dataclass(frozen=True)
class Violation:
    """A point where a convexity inequality failed.

    Attributes:
        x (float): The first point.
        y (float): The second point.
        lam (float): The mixing weight.
        lhs (float): The value at the mixed point.
        rhs (float): The mixture of values.
        slack (float): lhs - rhs.
    """
    x: float
    y: float
    lam: float
    lhs: float
    rhs: float
    slack: float


@dataclasses.dataclass(frozen=True)
class ConvexityWitness:
    """The evidence produced by check_convexity.

    Attributes:
        holds (bool): True when no sample violated the inequality beyond tolerance.
        kind (ConvexityKind): The notion that was checked.
        s (float): The exponent used by the s-variants, None otherwise.
        q (float): The power of |f'| that was checked, None when f itself was checked.
        samples (int): The number of sampled triples.
        worst_excess (float): The largest (lhs - rhs) / |rhs| over the samples.
        violation (Violation): The worst violating triple, None when the inequality holds.
    """
    holds: bool
    kind: ConvexityKind
    s: Optional[float]
    q: Optional[float]
    samples: int
    worst_excess: float
    violation: Optional[Violation] = None

    def to_dict(self):
        out = dataclasses.asdict(self)
        out["kind"] = self.kind.value
        return out


@dataclasses.dataclass(frozen=True)
class SupPair:
    """The suprema of |f| on the two halves of [a, b] split at sqrt(ab).

    Attributes:
        m1 (float): The supremum on [a, sqrt(ab)].
        m2 (float): The supremum on [sqrt(ab), b].
    """
    m1: float
    m2: float


# Functions #
# Builtin Families
def _positive_parameter(name):
    def validator(params):
        if params[name] <= 0.0:
            raise SpecificationError(f"parameter {name} must be positive, got {params[name]!r}")
    return validator


def _power_shift_validator(params):
    if not 0.0 < params["s"] <= 1.0:
        raise SpecificationError(f"power_shift needs s in (0, 1], got {params['s']!r}")


_BUILTIN_FAMILIES = (
    FunctionFamily(
        "constant",
        function=lambda x, p: np.full_like(x, p["c"]),
        derivative=lambda x, p: np.zeros_like(x),
        parameters=("c",),
        validator=_positive_parameter("c"),
        description="f(x) = c",
    ),
    FunctionFamily(
        "power",
        function=lambda x, p: np.power(x, p["c"]),
        derivative=lambda x, p: p["c"] * np.power(x, p["c"] - 1.0),
        parameters=("c",),
        description="f(x) = x^c",
    ),
    FunctionFamily(
        "power_shift",
        function=lambda x, p: np.power(x, p["s"]) / p["s"] + 1.0,
        derivative=lambda x, p: np.power(x, p["s"] - 1.0),
        parameters=("s",),
        domain=Domain(0.0, 1.0, hi_closed=True),
        validator=_power_shift_validator,
        description="f(x) = x^s / s + 1 on (0, 1]",
    ),
    FunctionFamily(
        "exponential",
        function=lambda x, p: np.exp(x),
        derivative=lambda x, p: np.exp(x),
        domain=Domain(0.0, 709.0),
        description="f(x) = e^x",
    ),
)

_registry_lock = threading.Lock()
_families = {family.name: family for family in _BUILTIN_FAMILIES}


# Registry
def register_family(family, replace=False):
    """Adds a family to the registry.

    Args:
        family (:obj:`FunctionFamily`): The family to add.
        replace (bool, optional): Allows replacing a registered family of the same name.

    Returns:
        FunctionFamily: The registered family.
    """
    with _registry_lock:
        if family.name in _families and not replace:
            raise SpecificationError(f"a family named {family.name!r} is already registered")
        _families[family.name] = family
    _logger.trace_log("registry", "register_family", f"registered {family.name}")
    return family


def unregister_family(name):
    """Removes a family from the registry and returns it."""
    with _registry_lock:
        try:
            return _families.pop(name)
        except KeyError:
            raise SpecificationError(f"unknown function family {name!r}") from None


def get_family(name):
    """FunctionFamily: The registered family with the given name."""
    with _registry_lock:
        try:
            return _families[name]
        except KeyError:
            known = ", ".join(sorted(_families))
            raise SpecificationError(f"unknown function family {name!r} (known: {known})") from None


def family_names():
    """list: The names of the registered families."""
    with _registry_lock:
        return sorted(_families)


# Specifications
def make_spec(family, check=True, **params):
    """Creates a FunctionSpec and validates its declared derivative.

    Args:
        family (str): The family name.
        check (bool, optional): Runs check_derivative on the new spec.
        **params: The family parameters.

    Returns:
        FunctionSpec: The new specification.
    """
    spec = FunctionSpec(family, tuple(params.items()))
    if check:
        discrepancy = check_derivative(spec)
        if not discrepancy <= DERIVATIVE_CHECK_TOL:
            raise SpecificationError(f"the declared derivative of {spec} disagrees with finite differences "
                                     f"by {discrepancy!r}")
    return spec


def parse_function_spec(text, check=True, **extra):
    """Parses 'family:param=value[,param=value]' into a FunctionSpec.

    Args:
        text (str): The specification string, e.g. 'power_shift:s=0.5' or 'exponential'.
        check (bool, optional): Runs check_derivative on the result.
        **extra: Parameters to supply when the string omits them.

    Returns:
        FunctionSpec: The parsed specification.
    """
    family, _, body = text.strip().partition(":")
    family = family.strip()
    params = {}
    for item in filter(None, (part.strip() for part in body.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise SpecificationError(f"malformed parameter {item!r} in {text!r}, expected name=value")
        if key in params:
            raise SpecificationError(f"parameter {key!r} repeated in {text!r}")
        try:
            params[key] = float(value)
        except ValueError:
            raise SpecificationError(f"parameter {key!r} in {text!r} is not a number: {value!r}") from None

    definition = get_family(family)
    for key, value in extra.items():
        if key in definition.parameters and key not in params:
            params[key] = value
    return make_spec(family, check=check, **params)


def format_function_spec(spec):
    """str: The specification string that parses back to spec."""
    if not spec.params:
        return spec.family
    return spec.family + ":" + ",".join(f"{name}={value!r}" for name, value in spec.params)


def evaluate(spec, x, which="f"):
    """Evaluates f or f' at a point of the domain.

    Args:
        spec (:obj:`FunctionSpec`): The function.
        x (float): The point.
        which (str, optional): 'f' for the function, 'df' (or "f'") for its derivative.

    Returns:
        float: The value.
    """
    if not (isinstance(x, (int, float)) and math.isfinite(x)) or not spec.domain.contains(x):
        raise DomainError(f"x = {x!r} is outside the domain {spec.domain} of {spec}")
    if which == "f":
        return float(spec.value(x))
    elif which in ("df", "f'", "f′"):
        return float(spec.derivative(x))
    raise DomainError(f"which must be 'f' or 'df', got {which!r}")


def check_derivative(spec, points=DERIVATIVE_CHECK_POINTS, step=DERIVATIVE_CHECK_STEP):
    """Compares f' with central differences of f.

    The points are spread over the family's probe range clipped to the domain, each with step h = step * x.

    Args:
        spec (:obj:`FunctionSpec`): The function.
        points (int, optional): The number of points.
        step (float, optional): The relative finite difference step.

    Returns:
        float: The largest |difference quotient - f'(x)| / (1 + |f'(x)|).
    """
    domain = spec.domain
    lo = max(spec.definition.probe[0], domain.lo)
    hi = min(spec.definition.probe[1], domain.hi)
    x = lo + (hi - lo) * (np.arange(points) + 0.5) / points
    h = step * x
    upper, lower = x + h, x - h
    quotient = (spec.value(upper) - spec.value(lower)) / (upper - lower)
    declared = spec.derivative(x)
    return float(np.max(np.abs(quotient - declared) / (1.0 + np.abs(declared))))


# Convexity
def _target(spec, q):
    if q is None:
        return spec.value
    return lambda x: np.power(np.abs(spec.derivative(x)), q)


def _sides(g, kind, x, y, lam, s):
    """The two sides of the defining inequality of a convexity notion."""
    if kind in (ConvexityKind.CONVEX, ConvexityKind.S_CONVEX_SECOND_SENSE):
        lhs = g(lam * x + (1.0 - lam) * y)
    else:
        lhs = g(np.power(x, lam) * np.power(y, 1.0 - lam))

    gx, gy = g(x), g(y)
    if kind is ConvexityKind.CONVEX:
        rhs = lam * gx + (1.0 - lam) * gy
    elif kind is ConvexityKind.S_CONVEX_SECOND_SENSE:
        rhs = np.power(lam, s) * gx + np.power(1.0 - lam, s) * gy
    elif kind is ConvexityKind.GEOMETRICALLY_CONVEX:
        rhs = np.power(gx, lam) * np.power(gy, 1.0 - lam)
    else:
        rhs = np.power(gx, np.power(lam, s)) * np.power(gy, np.power(1.0 - lam, s))
    return lhs, rhs


def _resolve_kind(kind, s):
    kind = ConvexityKind(kind)
    if kind.needs_s:
        if s is None:
            raise DomainError(f"{kind.value} needs the exponent s")
        if not (math.isfinite(s) and 0.0 < s <= 1.0):
            raise DomainError(f"s must lie in (0, 1], got {s!r}")
        s = float(s)
    else:
        s = None
    return kind, s


def defining_gap(spec, kind, x, y, lam, s=None, q=None):
    """Evaluates lhs - rhs of a convexity inequality at one triple, positive values are violations.

    Args:
        spec (:obj:`FunctionSpec`): The function.
        kind (:obj:`ConvexityKind` or str): The notion.
        x (float): The first point.
        y (float): The second point.
        lam (float): The mixing weight in [0, 1].
        s (float, optional): The exponent of the s-variants.
        q (float, optional): Checks |f'|^q instead of f.

    Returns:
        float: lhs - rhs.
    """
    kind, s = _resolve_kind(kind, s)
    lhs, rhs = _sides(_target(spec, q), kind, np.float64(x), np.float64(y), np.float64(lam), s)
    return float(lhs - rhs)


def check_convexity(spec, interval, kind, s=None, samples=CONVEXITY_SAMPLES, q=None):
    """Samples a convexity inequality on a Halton grid over interval x interval x [0, 1].

    A sample violates the inequality when lhs - rhs exceeds 1e-12 * |rhs|.

    Args:
        spec (:obj:`FunctionSpec`): The function.
        interval (:obj:`Interval` or tuple): The interval inside the domain of the function.
        kind (:obj:`ConvexityKind` or str): The notion.
        s (float, optional): The exponent, required by the s-variants.
        samples (int, optional): The number of (x, y, lambda) triples.
        q (float, optional): Checks |f'|^q instead of f.

    Returns:
        ConvexityWitness: The verdict with the worst violating triple, if any.
    """
    kind, s = _resolve_kind(kind, s)
    interval = Interval.coerce(interval)
    if not spec.domain.contains_interval(interval.a, interval.b):
        raise DomainError(f"[{interval.a!r}, {interval.b!r}] is not inside the domain {spec.domain} of {spec}")
    if samples < 1:
        raise DomainError(f"samples must be positive, got {samples!r}")

    points = qmc.Halton(d=3, scramble=False).random(samples)
    x = interval.a + interval.width * points[:, 0]
    y = interval.a + interval.width * points[:, 1]
    lam = points[:, 2]

    with np.errstate(over="ignore", invalid="ignore"):
        lhs, rhs = _sides(_target(spec, q), kind, x, y, lam, s)
    if not (np.all(np.isfinite(lhs)) and np.all(np.isfinite(rhs))):
        raise DomainError(f"{spec} overflows on [{interval.a!r}, {interval.b!r}]")

    slack = lhs - rhs
    scale = np.abs(rhs)
    excess = slack - CONVEXITY_TOL * scale
    worst = int(np.argmax(excess))
    with np.errstate(divide="ignore", invalid="ignore"):
        relative = np.where(scale > 0.0, slack / scale, np.where(slack > 0.0, np.inf, 0.0))

    violation = None
    if excess[worst] > 0.0:
        violation = Violation(float(x[worst]), float(y[worst]), float(lam[worst]),
                              float(lhs[worst]), float(rhs[worst]), float(slack[worst]))
        _logger.trace_log("convexity", "check_convexity",
                          f"{spec} is not {kind.value} on [{interval.a!r}, {interval.b!r}]: {violation}")

    return ConvexityWitness(holds=violation is None, kind=kind, s=s, q=None if q is None else float(q),
                            samples=samples, worst_excess=float(np.max(relative)), violation=violation)


# Suprema
def sup_abs_on(spec, lo, hi):
    """Estimates the supremum of |f| on [lo, hi].

    A 1025 point scan locates the best grid point; when it is a strict interior peak it is refined by golden-section
    search within its neighbouring cells.

    Args:
        spec (:obj:`FunctionSpec`): The function.
        lo (float): The left end, inside the domain.
        hi (float): The right end, inside the domain, at least lo.

    Returns:
        float: The estimate of the supremum.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or not spec.domain.contains_interval(lo, hi):
        raise DomainError(f"[{lo!r}, {hi!r}] is not an interval inside the domain {spec.domain} of {spec}")
    if lo == hi:
        return abs(float(spec.value(lo)))

    grid = np.linspace(lo, hi, SCAN_POINTS)
    values = np.abs(spec.value(grid))
    k = int(np.argmax(values))
    best = float(values[k])
    if 0 < k < SCAN_POINTS - 1 and values[k] > values[k - 1] and values[k] > values[k + 1]:
        left, right = float(grid[k - 1]), float(grid[k + 1])
        try:
            result = optimize.minimize_scalar(lambda t: -abs(float(spec.value(min(max(t, left), right)))),
                                              bracket=(left, float(grid[k]), right), method="golden")
        except ValueError:
            return best
        refined = abs(float(spec.value(min(max(result.x, left), right))))
        best = max(best, refined)
    return best


def sup_pair(spec, interval):
    """SupPair: The suprema M1 on [a, sqrt(ab)] and M2 on [sqrt(ab), b]."""
    interval = Interval.coerce(interval)
    middle = interval.geometric_midpoint
    return SupPair(sup_abs_on(spec, interval.a, middle), sup_abs_on(spec, middle, interval.b))
