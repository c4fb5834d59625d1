#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" bounds.py
The theorem layer: the product integral identities, the two Hermite-Hadamard chains, the H1/H2/H3 case assemblies,
the bounds built on them and their corollary specializations.

Throughout, l = ln(b/a), u(t) = a e^(t l / 2) and v(t) = b e^(-t l / 2), so u v = ab, u(0) = a, v(0) = b and
u(1) = v(1) = sqrt(ab).
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
import functools
import math
import warnings
from typing import Optional

# Downloaded Libraries #
import numpy as np

# Local Libraries #
from .exceptions import DomainError, PreconditionWarning, QuadratureConvergenceError
from .functions import ConvexityKind, ConvexityParams, check_convexity, format_function_spec, sup_pair
from .kernels import KERNELS, CaseTag, classify_case, theta_from_magnitudes
from .quadrature import Interval, Tolerances, integrate, product_integral
from .verifylogging import VerificationLogger


# Definitions #
_logger = VerificationLogger("hhverify.bounds", module_of_class=__name__)

BOUND_SLACK = 1e-8
SHARP_TOL = 1e-10
PRECONDITION_SAMPLES = 4096


# Classes #
class Variant(enum.Enum):
    """Which table of H3 rows to use."""
    PRINTED = "printed"
    DERIVATION_CONSISTENT = "derivation_consistent"

    @classmethod
    def parse(cls, value):
        """Accepts a Variant, its value, or the short name 'derived'."""
        if isinstance(value, cls):
            return value
        if value == "derived":
            return cls.DERIVATION_CONSISTENT
        return cls(value)

    @property
    def other(self):
        return Variant.PRINTED if self is Variant.DERIVATION_CONSISTENT else Variant.DERIVATION_CONSISTENT


class Side(enum.Enum):
    """Which endpoint expression the product integral is compared with."""
    PRODUCT_VS_FAFB = "product_vs_fafb"
    PRODUCT_VS_FSQRT = "product_vs_fsqrt"

    @classmethod
    def parse(cls, value):
        """Accepts a Side, its value, or the short names 'fafb' and 'fsqrt'."""
        if isinstance(value, cls):
            return value
        return {"fafb": cls.PRODUCT_VS_FAFB, "fsqrt": cls.PRODUCT_VS_FSQRT}.get(value) or cls(value)

    @property
    def short_name(self):
        return "fafb" if self is Side.PRODUCT_VS_FAFB else "fsqrt"


class Identity(enum.Enum):
    """The two product integral identities: against f(a)f(b) and against f(sqrt(ab))^2."""
    EQ_2_1 = "eq_2_1"
    EQ_2_2 = "eq_2_2"


class Corollary(enum.Enum):
    """The pinned-parameter specializations of the bounds."""
    THM22_S1 = "thm22_s1"
    THM22_Q1 = "thm22_q1"
    THM23_S1 = "thm23_s1"


@dataclasses.dataclass(frozen=True)
class BoundInputs:
    """Everything a case assembly depends on.

    Attributes:
        a (float): The left endpoint.
        b (float): The right endpoint.
        s (float): The convexity exponent.
        q (float): The power of |f'|.
        df_a (float): |f'(a)|.
        df_b (float): |f'(b)|.
        m1 (float): The supremum of |f| on [a, sqrt(ab)].
        m2 (float): The supremum of |f| on [sqrt(ab), b].
    """
    a: float
    b: float
    s: float
    q: float
    df_a: float
    df_b: float
    m1: float
    m2: float


@dataclasses.dataclass(frozen=True)
class BoundReport:
    """One bound evaluation.

    holds is true when lhs_gap <= rhs_bound + 1e-8 (1 + rhs_bound).

    Attributes:
        theorem (str): 'thm22' or 'thm23'.
        side (Side): The compared endpoint expression.
        variant (Variant): The H3 table used for rhs_bound.
        case_tag (CaseTag): The derivative magnitude case.
        lhs_gap (float): |endpoint expression - product integral|.
        rhs_bound (float): The bound.
        holds (bool): The verdict.
        quadrature_error (float): The error estimate of the product integral.
        spec (str): The function specification string.
        a (float): The left endpoint.
        b (float): The right endpoint.
        s (float): The convexity exponent.
        q (float): The power of |f'|.
        precondition_holds (bool): The sampled convexity hypothesis, None when it was not checked.
        companion_rhs_bound (float): The bound under the other H3 table, None for H1 and H2.
    """
    theorem: str
    side: Side
    variant: Variant
    case_tag: CaseTag
    lhs_gap: float
    rhs_bound: float
    holds: bool
    quadrature_error: float
    spec: str
    a: float
    b: float
    s: float
    q: float
    precondition_holds: Optional[bool] = None
    companion_rhs_bound: Optional[float] = None

    @property
    def slack_ratio(self):
        """float: lhs_gap / rhs_bound."""
        if self.rhs_bound > 0.0:
            return self.lhs_gap / self.rhs_bound
        return math.inf if self.lhs_gap > 0.0 else 0.0

    def to_dict(self):
        out = dataclasses.asdict(self)
        out["side"] = self.side.value
        out["variant"] = self.variant.value
        out["case_tag"] = self.case_tag.value
        return out

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data["side"] = Side(data["side"])
        data["variant"] = Variant(data["variant"])
        data["case_tag"] = CaseTag(data["case_tag"])
        return cls(**data)


@dataclasses.dataclass(frozen=True)
class ChainReport:
    """One three-term chain left <= middle <= right.

    Attributes:
        kind (str): 'geometric' or 'classical'.
        left (float): The midpoint term.
        middle (float): The integral mean.
        right (float): The endpoint term.
        holds (bool): True when both inequalities hold within 1e-8 (1 + |larger term|).
        sharp (bool): True when the three terms agree within 1e-10 (1 + |right|).
        quadrature_error (float): The error estimate of the middle term.
        spec (str): The function specification string.
        a (float): The left endpoint.
        b (float): The right endpoint.
        precondition_holds (bool): The sampled convexity hypothesis, None when it was not checked.
    """
    kind: str
    left: float
    middle: float
    right: float
    holds: bool
    sharp: bool
    quadrature_error: float
    spec: str
    a: float
    b: float
    precondition_holds: Optional[bool] = None

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


# Functions #
def within_slack(smaller, larger, slack=BOUND_SLACK):
    """bool: smaller <= larger + slack * (1 + |larger|)."""
    return bool(smaller <= larger + slack * (1.0 + abs(larger)))


def _coerce(interval, params):
    interval = Interval.coerce(interval)
    if params is not None and not isinstance(params, ConvexityParams):
        params = ConvexityParams(*params)
    return interval, params


def _require_domain(spec, interval):
    if not spec.domain.contains_interval(interval.a, interval.b):
        raise DomainError(f"[{interval.a!r}, {interval.b!r}] is not inside the domain {spec.domain} of {spec}")


def _require_converged(result, what):
    if not result.converged:
        raise QuadratureConvergenceError(f"{what} did not converge: error {result.error_estimate!r} exceeds "
                                         f"{result.tolerance!r}", result)
    return result


@functools.lru_cache(maxsize=4096)
def _sampled_hypothesis(spec, definition, a, b, kind, s, q):
    # definition hashes by identity, so a re-registered family is sampled afresh
    return check_convexity(spec, Interval(a, b), kind, s=s, samples=PRECONDITION_SAMPLES, q=q).holds


def _check_precondition(spec, interval, kind, s=None, q=None, what=""):
    """Samples a convexity hypothesis and warns when it fails."""
    holds = _sampled_hypothesis(spec, spec.definition, interval.a, interval.b, kind, s, q)
    if not holds:
        target = str(spec) if q is None else f"|{spec}'|^{q!r}"
        warnings.warn(f"{what}: {target} is not {kind.value} on [{interval.a!r}, {interval.b!r}]",
                      PreconditionWarning, stacklevel=3)
    return holds


# Identities
def lemma_identity_check(spec, interval, which=Identity.EQ_2_1, tol=None):
    """Evaluates both sides of a product integral identity and returns their difference.

    The left side is f(a)f(b) - P (EQ_2_1) or f(sqrt(ab))^2 - P (EQ_2_2), where P is the product integral. The right
    side is (l/2) times the integral over [0, 1] of w(t) (u f'(u) f(v) - v f(u) f'(v)), with w(t) = t - 1 for EQ_2_1
    and w(t) = t for EQ_2_2.

    Args:
        spec (:obj:`FunctionSpec`): A differentiable positive function.
        interval (:obj:`Interval` or tuple): The interval [a, b].
        which (:obj:`Identity` or str, optional): The identity.
        tol (:obj:`Tolerances` or float, optional): The integration tolerances.

    Returns:
        float: |left side - right side|.
    """
    interval, _ = _coerce(interval, None)
    which = Identity(which)
    tol = Tolerances.coerce(tol)
    _require_domain(spec, interval)

    a, b = interval.a, interval.b
    half_log = 0.5 * interval.log_ratio
    pi = _require_converged(product_integral(spec, interval, tol), "the product integral")

    if which is Identity.EQ_2_1:
        lhs = float(spec.value(a) * spec.value(b)) - pi.value
        shift = -1.0
    else:
        lhs = float(spec.value(interval.geometric_midpoint)) ** 2 - pi.value
        shift = 0.0

    def integrand(t):
        u = a * np.exp(t * half_log)
        v = b * np.exp(-t * half_log)
        combination = u * spec.derivative(u) * spec.value(v) - v * spec.value(u) * spec.derivative(v)
        return (t + shift) * combination

    rhs = _require_converged(integrate(integrand, (0.0, 1.0), rel_tol=tol.rel, abs_tol=tol.abs),
                             "the identity integral")
    residual = float(abs(lhs - half_log * rhs.value))
    _logger.trace_log("identity", "lemma_identity_check", f"{spec} {which.value} residual {residual!r}",
                      name=f"[{a!r}, {b!r}]")
    return residual


# Chains
def _chain(kind, left, middle, right, pi, spec, interval, precondition):
    holds = within_slack(left, middle) and within_slack(middle, right)
    scale = SHARP_TOL * (1.0 + abs(right))
    sharp = bool(abs(left - middle) <= scale and abs(middle - right) <= scale and abs(left - right) <= scale)
    report = ChainReport(kind=kind, left=float(left), middle=float(middle), right=float(right), holds=holds,
                         sharp=sharp, quadrature_error=pi.error_estimate, spec=format_function_spec(spec),
                         a=interval.a, b=interval.b, precondition_holds=precondition)
    _logger.log_report(report)
    return report


def hh_chain_geometric(spec, interval, tol=None, check_preconditions=True):
    """The chain f(sqrt(ab))^2 <= P <= f(a)f(b) for geometrically convex f, P being the product integral.

    Args:
        spec (:obj:`FunctionSpec`): The function.
        interval (:obj:`Interval` or tuple): The interval [a, b].
        tol (:obj:`Tolerances` or float, optional): The integration tolerances.
        check_preconditions (bool, optional): Samples geometric convexity of f and warns when it fails.

    Returns:
        ChainReport: The three terms and the verdict.
    """
    interval, _ = _coerce(interval, None)
    _require_domain(spec, interval)
    precondition = None
    if check_preconditions:
        precondition = _check_precondition(spec, interval, ConvexityKind.GEOMETRICALLY_CONVEX,
                                           what="geometric chain")

    pi = _require_converged(product_integral(spec, interval, tol), "the product integral")
    left = float(spec.value(interval.geometric_midpoint)) ** 2
    right = float(spec.value(interval.a) * spec.value(interval.b))
    return _chain("geometric", left, pi.value, right, pi, spec, interval, precondition)


def hh_chain_classical(spec, interval, tol=None, check_preconditions=True):
    """The chain f((a+b)/2) <= (1/(b-a)) int f <= (f(a)+f(b))/2 for convex f.

    Args:
        spec (:obj:`FunctionSpec`): The function.
        interval (:obj:`Interval` or tuple): The interval [a, b].
        tol (:obj:`Tolerances` or float, optional): The integration tolerances.
        check_preconditions (bool, optional): Samples convexity of f and warns when it fails.

    Returns:
        ChainReport: The three terms and the verdict.
    """
    interval, _ = _coerce(interval, None)
    tol = Tolerances.coerce(tol)
    _require_domain(spec, interval)
    precondition = None
    if check_preconditions:
        precondition = _check_precondition(spec, interval, ConvexityKind.CONVEX, what="classical chain")

    mean = _require_converged(integrate(spec.value, interval, rel_tol=tol.rel, abs_tol=tol.abs * interval.width),
                              "the mean value integral").scaled(1.0 / interval.width)
    left = float(spec.value(0.5 * (interval.a + interval.b)))
    right = 0.5 * float(spec.value(interval.a) + spec.value(interval.b))
    return _chain("classical", left, mean.value, right, mean, spec, interval, precondition)


# Case Assembly
def gather_bound_inputs(spec, interval, params):
    """Collects |f'(a)|, |f'(b)|, M1 and M2 for a case assembly.

    Args:
        spec (:obj:`FunctionSpec`): The function.
        interval (:obj:`Interval` or tuple): The interval [a, b].
        params (:obj:`ConvexityParams`): The exponents s and q.

    Returns:
        BoundInputs: The assembly inputs.
    """
    interval, params = _coerce(interval, params)
    _require_domain(spec, interval)
    sups = sup_pair(spec, interval)
    return BoundInputs(a=interval.a, b=interval.b, s=params.s, q=params.q,
                       df_a=abs(float(spec.derivative(interval.a))), df_b=abs(float(spec.derivative(interval.b))),
                       m1=sups.m1, m2=sups.m2)


def _case_factors(case, inputs, i, variant):
    """The |f'| factors multiplying the M1 and M2 terms of a case row."""
    s = inputs.s
    log_a = math.log(inputs.df_a)
    log_b = math.log(inputs.df_b)

    def power_a(e):
        return math.exp(e * log_a)

    def power_b(e):
        return math.exp(e * log_b)

    if case is CaseTag.BOTH_LE_1:
        return power_b(s), power_a(s)
    elif case is CaseTag.BOTH_GE_1:
        return power_b(1.0) * power_a(1.0 - s), power_a(1.0) * power_b(1.0 - s)
    elif case is CaseTag.A_LE_1_LE_B:
        return power_b(1.0), power_a(s) * power_b(1.0 - s)
    elif i == 3 and variant is Variant.PRINTED:
        # The printed H3 table drops |f'(a)|^(1-s) from the M1 term of this row.
        return power_b(s), power_a(1.0)
    return power_b(s) * power_a(1.0 - s), power_a(1.0)


def assemble_from_inputs(i, inputs, variant=Variant.DERIVATION_CONSISTENT):
    """Evaluates H_i = b A1 M1 h_i(theta)^(1/q) + a A2 M2 h_i(vartheta)^(1/q) from raw inputs.

    A1 and A2 are the products of powers of |f'(a)| and |f'(b)| selected by the case row; the two variants differ
    only for H3 in the row where |f'(b)| <= 1 <= |f'(a)|.

    Args:
        i (int): 1, 2 or 3.
        inputs (:obj:`BoundInputs`): The assembly inputs.
        variant (:obj:`Variant` or str, optional): The H3 table.

    Returns:
        tuple: The value of H_i and its CaseTag.
    """
    if i not in KERNELS:
        raise DomainError(f"H_i is defined for i in 1, 2, 3, got {i!r}")
    variant = Variant.parse(variant)

    pair = theta_from_magnitudes(inputs.a, inputs.b, inputs.df_a, inputs.df_b, inputs.s, inputs.q)
    case = classify_case(inputs.df_a, inputs.df_b)
    kernel = KERNELS[i]
    first, second = _case_factors(case, inputs, i, variant)
    value = (inputs.b * first * inputs.m1 * kernel(pair.theta) ** (1.0 / inputs.q)
             + inputs.a * second * inputs.m2 * kernel(pair.vartheta) ** (1.0 / inputs.q))
    return value, case


def assemble_H(i, spec, interval, params, variant=Variant.DERIVATION_CONSISTENT):
    """Evaluates the case assembly H_i of a function on an interval.

    Args:
        i (int): 1, 2 or 3.
        spec (:obj:`FunctionSpec`): The function.
        interval (:obj:`Interval` or tuple): The interval [a, b].
        params (:obj:`ConvexityParams`): The exponents s and q.
        variant (:obj:`Variant` or str, optional): The H3 table.

    Returns:
        float: H_i.
    """
    return assemble_from_inputs(i, gather_bound_inputs(spec, interval, params), variant)[0]


# Bounds
def _lhs_gap(spec, interval, side, pi):
    if side is Side.PRODUCT_VS_FAFB:
        endpoint = float(spec.value(interval.a) * spec.value(interval.b))
    else:
        endpoint = float(spec.value(interval.geometric_midpoint)) ** 2
    return abs(endpoint - pi.value)


def _bound_report(theorem, spec, interval, params, side, variant, tol, check_preconditions, rhs_of):
    """Shared pipeline of the two bounds; rhs_of maps (inputs, variant) to (rhs, case)."""
    _require_domain(spec, interval)
    precondition = None
    if check_preconditions:
        precondition = _check_precondition(spec, interval, ConvexityKind.S_GEOMETRICALLY_CONVEX, s=params.s,
                                           q=params.q, what=theorem)

    pi = _require_converged(product_integral(spec, interval, tol), "the product integral")
    inputs = gather_bound_inputs(spec, interval, params)
    rhs, case, companion = rhs_of(inputs, variant)
    lhs = _lhs_gap(spec, interval, side, pi)

    report = BoundReport(theorem=theorem, side=side, variant=variant, case_tag=case, lhs_gap=float(lhs),
                         rhs_bound=float(rhs), holds=within_slack(lhs, rhs), quadrature_error=pi.error_estimate,
                         spec=format_function_spec(spec), a=interval.a, b=interval.b, s=params.s, q=params.q,
                         precondition_holds=precondition, companion_rhs_bound=companion)
    _logger.log_report(report, name=f"[{interval.a!r}, {interval.b!r}]")
    return report


def theorem_2_2(spec, interval, params, side=Side.PRODUCT_VS_FAFB, tol=None, check_preconditions=True):
    """Bounds the product integral gaps through H1 and H2, for q >= 1.

    lhs_gap is |f(a)f(b) - P| on the PRODUCT_VS_FAFB side and |f(sqrt(ab))^2 - P| on the other, and
    rhs_bound = l (1/2)^(2 - 1/q) H_i with i = 1 and 2 respectively.

    Args:
        spec (:obj:`FunctionSpec`): The function, with |f'|^q s-geometrically convex on [a, b].
        interval (:obj:`Interval` or tuple): The interval [a, b].
        params (:obj:`ConvexityParams`): The exponents s and q.
        side (:obj:`Side` or str, optional): The compared endpoint expression.
        tol (:obj:`Tolerances` or float, optional): The integration tolerances.
        check_preconditions (bool, optional): Samples the hypothesis on |f'|^q and warns when it fails.

    Returns:
        BoundReport: The evaluation.
    """
    interval, params = _coerce(interval, params)
    side = Side.parse(side)
    i = 1 if side is Side.PRODUCT_VS_FAFB else 2
    factor = interval.log_ratio * 0.5 ** (2.0 - 1.0 / params.q)

    def rhs_of(inputs, variant):
        value, case = assemble_from_inputs(i, inputs, variant)
        return factor * value, case, None

    return _bound_report("thm22", spec, interval, params, side, Variant.DERIVATION_CONSISTENT, tol,
                         check_preconditions, rhs_of)


def theorem_2_3(spec, interval, params, side=Side.PRODUCT_VS_FAFB, variant=Variant.DERIVATION_CONSISTENT, tol=None,
                check_preconditions=True):
    """Bounds the product integral gaps through H3, for q > 1.

    Both sides share rhs_bound = (l/2) ((q - 1)/(2q - 1))^(1 - 1/q) H3; the report also carries the bound under the
    other H3 table.

    Args:
        spec (:obj:`FunctionSpec`): The function, with |f'|^q s-geometrically convex on [a, b].
        interval (:obj:`Interval` or tuple): The interval [a, b].
        params (:obj:`ConvexityParams`): The exponents s and q > 1.
        side (:obj:`Side` or str, optional): The compared endpoint expression.
        variant (:obj:`Variant` or str, optional): The H3 table.
        tol (:obj:`Tolerances` or float, optional): The integration tolerances.
        check_preconditions (bool, optional): Samples the hypothesis on |f'|^q and warns when it fails.

    Returns:
        BoundReport: The evaluation.
    """
    interval, params = _coerce(interval, params)
    if not params.q > 1.0:
        raise DomainError(f"the H3 bound needs q > 1, got {params.q!r}")
    side = Side.parse(side)
    variant = Variant.parse(variant)
    q = params.q
    factor = 0.5 * interval.log_ratio * ((q - 1.0) / (2.0 * q - 1.0)) ** (1.0 - 1.0 / q)

    def rhs_of(inputs, chosen):
        value, case = assemble_from_inputs(3, inputs, chosen)
        other, _ = assemble_from_inputs(3, inputs, chosen.other)
        return factor * value, case, float(factor * other)

    return _bound_report("thm23", spec, interval, params, side, variant, tol, check_preconditions, rhs_of)


def corollary_eval(which, spec, interval, params, tol=None, side=Side.PRODUCT_VS_FAFB,
                   variant=Variant.DERIVATION_CONSISTENT, check_preconditions=True):
    """Evaluates a pinned-parameter specialization by delegating to the general bound.

    Args:
        which (:obj:`Corollary` or str): thm22_s1 and thm23_s1 need s = 1, thm22_q1 needs q = 1.
        spec (:obj:`FunctionSpec`): The function.
        interval (:obj:`Interval` or tuple): The interval [a, b].
        params (:obj:`ConvexityParams`): The exponents, with the pinned one set.
        tol (:obj:`Tolerances` or float, optional): The integration tolerances.
        side (:obj:`Side` or str, optional): The compared endpoint expression.
        variant (:obj:`Variant` or str, optional): The H3 table, used by thm23_s1.
        check_preconditions (bool, optional): Samples the hypothesis on |f'|^q and warns when it fails.

    Returns:
        BoundReport: The report of the general bound at the pinned parameters.
    """
    which = Corollary(which)
    interval, params = _coerce(interval, params)
    if which is Corollary.THM22_Q1:
        if params.q != 1.0:
            raise DomainError(f"{which.value} needs q = 1, got {params.q!r}")
        return theorem_2_2(spec, interval, params, side, tol, check_preconditions)

    if params.s != 1.0:
        raise DomainError(f"{which.value} needs s = 1, got {params.s!r}")
    if which is Corollary.THM22_S1:
        return theorem_2_2(spec, interval, params, side, tol, check_preconditions)
    return theorem_2_3(spec, interval, params, side, variant, tol, check_preconditions)
