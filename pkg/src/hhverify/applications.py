#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" applications.py
Means-form bounds for f(x) = x^s / s + 1 on (0, 1], cross-checked against the theorem evaluations.

On 0 < a < b <= 1 with 0 < s < 1 the derivative magnitudes a^(s-1) > b^(s-1) >= 1 put the function in the
both-above-one case, and with k = (s^2 - s + 1) q / 2 every kernel value reduces to the logarithmic mean
L(a^k, b^k). The printed means-form displays are read with G(a, b) = sqrt(ab), with 2/s^2 where the second display
shows 2/s^s, and with the two bracketed M1 and M2 terms summed.
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
from .bounds import Side, Variant, theorem_2_2, theorem_2_3, within_slack
from .exceptions import DomainError
from .functions import ConvexityParams, make_spec
from .means import MeanPair, arithmetic_mean, geometric_mean, logarithmic_mean, p_logarithmic_mean
from .quadrature import Interval
from .verifylogging import VerificationLogger


# Definitions #
_logger = VerificationLogger("hhverify.applications", module_of_class=__name__)

AGREEMENT_TOL = 1e-6

CORRECTIONS = (
    "geometric mean read as sqrt(ab)",
    "2/s^s read as 2/s^2",
    "bracketed M1 and M2 terms summed",
)


# Classes #
@dataclasses.dataclass(frozen=True)
class PropositionReport:
    """A means-form bound next to the theorem evaluation it should reproduce.

    holds follows the theorem form; disagreements between the forms beyond 1e-6 relative are listed in notes.

    Attributes:
        proposition (str): 'prop31' or 'prop32'.
        side (Side): The compared endpoint expression.
        a (float): The left endpoint.
        b (float): The right endpoint.
        s (float): The exponent of the function and of the convexity hypothesis.
        q (float): The power of |f'|.
        means_form_lhs (float): The gap written with special means.
        means_form_rhs (float): The bound written with special means.
        theorem_form_lhs (float): The gap from the theorem evaluation.
        theorem_form_rhs (float): The bound from the theorem evaluation.
        agreement_lhs (float): |means_form_lhs - theorem_form_lhs|.
        agreement_rhs (float): |means_form_rhs - theorem_form_rhs|.
        holds (bool): theorem_form_lhs <= theorem_form_rhs + 1e-8 (1 + theorem_form_rhs).
        agrees (bool): True when both agreements are within tolerance.
        case_tag (str): The case of the theorem evaluation.
        corrections (tuple): The readings applied to the printed displays.
        notes (tuple): The disagreements found, empty when the forms agree.
    """
    proposition: str
    side: Side
    a: float
    b: float
    s: float
    q: float
    means_form_lhs: float
    means_form_rhs: float
    theorem_form_lhs: float
    theorem_form_rhs: float
    agreement_lhs: float
    agreement_rhs: float
    holds: bool
    agrees: bool
    case_tag: str
    corrections: tuple = CORRECTIONS
    notes: tuple = ()

    def to_dict(self):
        out = dataclasses.asdict(self)
        out["side"] = self.side.value
        out["corrections"] = list(self.corrections)
        out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data["side"] = Side(data["side"])
        data["corrections"] = tuple(data["corrections"])
        data["notes"] = tuple(data["notes"])
        return cls(**data)


# Functions #
def _validate(a, b, s, q, q_strict):
    if not (math.isfinite(a) and math.isfinite(b) and 0.0 < a < b <= 1.0):
        raise DomainError(f"the propositions need 0 < a < b <= 1, got a={a!r}, b={b!r}")
    if not (math.isfinite(s) and 0.0 < s < 1.0):
        raise DomainError(f"the propositions need 0 < s < 1, got {s!r}")
    if q_strict and not q > 1.0:
        raise DomainError(f"the H3 proposition needs q > 1, got {q!r}")
    if not q >= 1.0:
        raise DomainError(f"the propositions need q >= 1, got {q!r}")


def product_integral_means_form(a, b, s):
    """The product integral of x^s / s + 1 written with means.

    (2/s^2) A(G^2(a^s, b^s), s^2) + (2/s) L_{s-1}^{s-1}(a, b) L(a, b).

    Args:
        a (float): The left endpoint.
        b (float): The right endpoint.
        s (float): The exponent in (0, 1).

    Returns:
        float: The closed form of the product integral.
    """
    pair = MeanPair(a, b)
    g_squared = geometric_mean(MeanPair(a ** s, b ** s)) ** 2
    mixed = arithmetic_mean(MeanPair(g_squared, s * s))
    tail = p_logarithmic_mean(pair, s - 1.0) ** (s - 1.0) * logarithmic_mean(pair)
    return 2.0 / (s * s) * mixed + 2.0 / s * tail


def _means_terms(a, b, s, q):
    """The shared pieces of the means-form bounds."""
    pair = MeanPair(a, b)
    k = (s * s - s + 1.0) * q / 2.0
    a_k, b_k = a ** k, b ** k
    sq = (s - 1.0) ** 2
    m1 = geometric_mean(pair) ** s / s + 1.0
    m2 = b ** s / s + 1.0
    common = geometric_mean(pair) ** (-sq)
    p1 = m1 * geometric_mean(MeanPair(a ** (-sq), b ** s))
    p2 = m2 * geometric_mean(MeanPair(b ** (-sq), a ** s))
    l_k = logarithmic_mean(MeanPair(a_k, b_k))
    return {"pair": pair, "a_k": a_k, "b_k": b_k, "l_k": l_k, "common": common, "p1": p1, "p2": p2}


def means_form_h12(a, b, s, q, side=Side.PRODUCT_VS_FAFB):
    """The H1/H2 bound for x^s / s + 1 written with means.

    G(a,b)^(-(s-1)^2) (1/((s^2-s+1) q))^(1/q) ((b-a)/(4 L(a,b)))^(1-1/q) times
    P1 (b^k - L_k)^(1/q) + P2 (L_k - a^k)^(1/q) on the f(a)f(b) side, the two braces being exchanged on the other.
    """
    side = Side.parse(side)
    t = _means_terms(a, b, s, q)
    upper = max(t["b_k"] - t["l_k"], 0.0) ** (1.0 / q)
    lower = max(t["l_k"] - t["a_k"], 0.0) ** (1.0 / q)
    if side is Side.PRODUCT_VS_FSQRT:
        upper, lower = lower, upper
    scale = (t["common"] * (1.0 / ((s * s - s + 1.0) * q)) ** (1.0 / q)
             * ((b - a) / (4.0 * logarithmic_mean(t["pair"]))) ** (1.0 - 1.0 / q))
    return scale * (t["p1"] * upper + t["p2"] * lower)


def means_form_h3(a, b, s, q):
    """The H3 bound for x^s / s + 1 written with means.

    (b-a)/(2 L(a,b)) ((q-1)/(2q-1))^(1-1/q) L_k^(1/q) G(a,b)^(-(s-1)^2) (P1 + P2).
    """
    t = _means_terms(a, b, s, q)
    return ((b - a) / (2.0 * logarithmic_mean(t["pair"])) * ((q - 1.0) / (2.0 * q - 1.0)) ** (1.0 - 1.0 / q)
            * t["l_k"] ** (1.0 / q) * t["common"] * (t["p1"] + t["p2"]))


def means_form_gap(a, b, s, side=Side.PRODUCT_VS_FAFB):
    """The left-hand gap written with means: |G^2(f(a), f(b)) - P| or |(G(a,b)^s / s + 1)^2 - P|."""
    side = Side.parse(side)
    if side is Side.PRODUCT_VS_FAFB:
        endpoint = geometric_mean(MeanPair(a ** s / s + 1.0, b ** s / s + 1.0)) ** 2
    else:
        endpoint = (geometric_mean(MeanPair(a, b)) ** s / s + 1.0) ** 2
    return abs(endpoint - product_integral_means_form(a, b, s))


def _compare(proposition, report, means_lhs, means_rhs, side, a, b, s, q):
    notes = []
    agreements = {}
    for label, means, theorem in (("lhs", means_lhs, report.lhs_gap), ("rhs", means_rhs, report.rhs_bound)):
        difference = abs(means - theorem)
        agreements[label] = difference
        if difference > AGREEMENT_TOL * (1.0 + max(abs(means), abs(theorem))):
            notes.append(f"{label}: means form {means!r} differs from theorem form {theorem!r} by {difference!r}")

    result = PropositionReport(proposition=proposition, side=side, a=a, b=b, s=s, q=q,
                               means_form_lhs=means_lhs, means_form_rhs=means_rhs,
                               theorem_form_lhs=report.lhs_gap, theorem_form_rhs=report.rhs_bound,
                               agreement_lhs=agreements["lhs"], agreement_rhs=agreements["rhs"],
                               holds=within_slack(report.lhs_gap, report.rhs_bound), agrees=not notes,
                               case_tag=report.case_tag.value, notes=tuple(notes))
    _logger.log_report(result)
    return result


def proposition_3_1(a, b, s, q, tol=None, side=Side.PRODUCT_VS_FAFB):
    """The H1/H2 bound for x^s / s + 1 in means form and through the theorem evaluation.

    Args:
        a (float): The left endpoint, 0 < a < b.
        b (float): The right endpoint, at most 1.
        s (float): The exponent in (0, 1).
        q (float): The power of |f'|, at least 1.
        tol (:obj:`Tolerances` or float, optional): The integration tolerances.
        side (:obj:`Side` or str, optional): The compared endpoint expression.

    Returns:
        PropositionReport: Both forms and their agreement.
    """
    _validate(a, b, s, q, q_strict=False)
    side = Side.parse(side)
    spec = make_spec("power_shift", s=s)
    report = theorem_2_2(spec, Interval(a, b), ConvexityParams(s, q), side, tol, check_preconditions=False)
    return _compare("prop31", report, means_form_gap(a, b, s, side), means_form_h12(a, b, s, q, side), side,
                    a, b, s, q)


def proposition_3_2(a, b, s, q, tol=None, side=Side.PRODUCT_VS_FAFB):
    """The H3 bound for x^s / s + 1 in means form and through the theorem evaluation.

    Args:
        a (float): The left endpoint, 0 < a < b.
        b (float): The right endpoint, at most 1.
        s (float): The exponent in (0, 1).
        q (float): The power of |f'|, above 1.
        tol (:obj:`Tolerances` or float, optional): The integration tolerances.
        side (:obj:`Side` or str, optional): The compared endpoint expression.

    Returns:
        PropositionReport: Both forms and their agreement.
    """
    _validate(a, b, s, q, q_strict=True)
    side = Side.parse(side)
    spec = make_spec("power_shift", s=s)
    report = theorem_2_3(spec, Interval(a, b), ConvexityParams(s, q), side, Variant.DERIVATION_CONSISTENT, tol,
                         check_preconditions=False)
    return _compare("prop32", report, means_form_gap(a, b, s, side), means_form_h3(a, b, s, q), side, a, b, s, q)
