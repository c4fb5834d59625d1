#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" __init__.py
Numerical verification of Hermite-Hadamard type inequalities for s-geometrically convex functions.
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
from .exceptions import *
from .verifylogging import *
from .means import *
from .quadrature import *
from .functions import *
from .kernels import *
from .bounds import *
from .applications import *
from .sweep import *
