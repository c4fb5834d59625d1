#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" exceptions.py
The errors and warnings raised by hhverify.
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

# Downloaded Libraries #

# Local Libraries #


# Definitions #
# Classes #
class HHVerifyError(Exception):
    """The base of every error raised by this package."""


class DomainError(HHVerifyError, ValueError):
    """An argument lies outside the domain where a quantity is defined.

    Raised for invalid means arguments, points outside a function's domain, degenerate theta parameters and
    theorem parameters outside their stated ranges.
    """


class SpecificationError(DomainError):
    """A function specification string or family definition is malformed."""


class ConfigurationError(HHVerifyError, ValueError):
    """A sweep configuration, grid or tolerance override is invalid."""


class IntegrandError(HHVerifyError, ArithmeticError):
    """An integrand produced a value that is not finite."""


class QuadratureConvergenceError(HHVerifyError, ArithmeticError):
    """An integral needed for a verification did not reach its requested tolerance.

    Attributes:
        result: The QuadratureResult holding the best estimate that was reached.

    Args:
        msg (str): The error message.
        result (:obj:`QuadratureResult`, optional): The unconverged result.
    """
    def __init__(self, msg, result=None):
        super().__init__(msg)
        self.result = result


class PreconditionWarning(UserWarning):
    """A convexity hypothesis of a theorem or chain failed its sampling check; the evaluation still proceeds."""
