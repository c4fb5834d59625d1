#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" sweep.py
Parameter sweeps of the bounds over Cartesian grids, their summaries and their JSON and CSV reports.
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
import concurrent.futures
import configparser
import csv
import dataclasses
import io
import itertools
import json
import math
import os
import pathlib
import tempfile
from typing import Optional

# Downloaded Libraries #
import numpy as np

# Local Libraries #
from .bounds import Side, Variant, theorem_2_2, theorem_2_3
from .exceptions import ConfigurationError, HHVerifyError
from .functions import ConvexityParams, get_family, parse_function_spec
from .quadrature import Interval, Tolerances
from .verifylogging import ObjectWithLogging, TimingLogger, VerificationLogger


# Definitions #
SCHEMA_VERSION = "1"

THEOREMS = ("thm22", "thm23")
SIDES = ("fafb", "fsqrt", "both")
FORMATS = ("json", "csv")

CONFIG_SECTION = "sweep"
CONFIG_KEYS = ("f", "a", "b", "s", "q", "theorem", "side", "variant", "rel_tol", "abs_tol", "format", "out",
               "workers", "upper_triangle", "check_preconditions")

CSV_COLUMNS = ("index", "theorem", "side", "variant", "case_tag", "spec", "a", "b", "s", "q", "lhs_gap",
               "rhs_bound", "holds", "quadrature_error", "precondition_holds", "companion_rhs_bound")

DISCREPANCY_TOL = 1e-12


# Classes #
@dataclasses.dataclass(frozen=True)
class SweepConfig:
    """A Cartesian sweep of a bound over (a, b, s, q).

    When the family of the function has a parameter named s that the specification string leaves out, it is taken
    from the s grid point, so 'power_shift' sweeps the family together with the exponent.

    Attributes:
        function (str): The function specification string.
        a (tuple): The left endpoints.
        b (tuple): The right endpoints.
        s (tuple): The convexity exponents.
        q (tuple): The powers of |f'|.
        theorem (str): 'thm22' or 'thm23'.
        side (str): 'fafb', 'fsqrt' or 'both'.
        variant (Variant): The H3 table for thm23.
        tolerances (Tolerances): The integration tolerances.
        format (str): 'json' or 'csv'.
        out (str): The report path, None for standard output.
        workers (int): The number of worker threads.
        upper_triangle (bool): Drops (a, b) pairs with a >= b instead of rejecting them.
        check_preconditions (bool): Samples the convexity hypothesis at every point.
    """
    function: str
    a: tuple
    b: tuple
    s: tuple = (1.0,)
    q: tuple = (1.0,)
    theorem: str = "thm22"
    side: str = "both"
    variant: Variant = Variant.DERIVATION_CONSISTENT
    tolerances: Tolerances = Tolerances()
    format: str = "json"
    out: Optional[str] = None
    workers: int = 1
    upper_triangle: bool = False
    check_preconditions: bool = True

    def __post_init__(self):
        for name in ("a", "b", "s", "q"):
            values = tuple(float(v) for v in getattr(self, name))
            if not values:
                raise ConfigurationError(f"the {name} grid is empty")
            if not all(math.isfinite(v) for v in values):
                raise ConfigurationError(f"the {name} grid has a value that is not finite")
            object.__setattr__(self, name, values)
        if self.theorem not in THEOREMS:
            raise ConfigurationError(f"theorem must be one of {THEOREMS}, got {self.theorem!r}")
        if self.side not in SIDES:
            raise ConfigurationError(f"side must be one of {SIDES}, got {self.side!r}")
        if self.format not in FORMATS:
            raise ConfigurationError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be positive, got {self.workers!r}")
        if self.theorem == "thm23" and min(self.q) <= 1.0:
            raise ConfigurationError("thm23 needs every q above 1")
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        if not self.pairs():
            raise ConfigurationError("no (a, b) pair of the grids satisfies a < b")

    def pairs(self):
        """list: The (a, b) pairs of the grid, in order."""
        pairs = list(itertools.product(self.a, self.b))
        invalid = [(a, b) for a, b in pairs if not 0.0 < a < b]
        if invalid and not self.upper_triangle:
            raise ConfigurationError(f"every (a, b) pair needs 0 < a < b, first offending pair {invalid[0]}")
        return [(a, b) for a, b in pairs if 0.0 < a < b]

    def points(self):
        """list: The (a, b, s, q) points in row order."""
        return [(a, b, s, q) for (a, b), s, q in itertools.product(self.pairs(), self.s, self.q)]

    def sides(self):
        """tuple: The Sides evaluated at every point."""
        if self.side == "both":
            return Side.PRODUCT_VS_FAFB, Side.PRODUCT_VS_FSQRT
        return (Side.parse(self.side),)

    def to_dict(self):
        out = dataclasses.asdict(self)
        out["variant"] = self.variant.value
        out["tolerances"] = {"rel": self.tolerances.rel, "abs": self.tolerances.abs}
        for name in ("a", "b", "s", "q"):
            out[name] = list(out[name])
        return out

    @classmethod
    def from_mapping(cls, values, environ=None):
        """Builds a config from string or typed values keyed like the configuration file.

        Tolerances missing from values fall back to the environment and then to the defaults.

        Args:
            values (dict): The settings.
            environ (dict, optional): The environment for tolerance overrides.

        Returns:
            SweepConfig: The validated configuration.
        """
        unknown = set(values) - set(CONFIG_KEYS)
        if unknown:
            raise ConfigurationError(f"unknown sweep setting(s): {sorted(unknown)}")
        for key in ("f", "a", "b"):
            if values.get(key) in (None, ""):
                raise ConfigurationError(f"the sweep setting {key!r} is required")

        kwargs = {"function": str(values["f"])}
        for key in ("a", "b", "s", "q"):
            if values.get(key) is not None:
                kwargs[key] = parse_grid(values[key])
        for key in ("theorem", "side", "format"):
            if values.get(key) is not None:
                kwargs[key] = str(values[key]).strip()
        if values.get("variant") is not None:
            try:
                kwargs["variant"] = Variant.parse(str(values["variant"]).strip())
            except ValueError:
                raise ConfigurationError(f"unknown variant {values['variant']!r}") from None
        if values.get("out") not in (None, ""):
            kwargs["out"] = str(values["out"])
        if values.get("workers") is not None:
            kwargs["workers"] = _parse_int(values["workers"], "workers")
        for key in ("upper_triangle", "check_preconditions"):
            if values.get(key) is not None:
                kwargs[key] = _parse_bool(values[key], key)

        rel = None if values.get("rel_tol") is None else _parse_float(values["rel_tol"], "rel_tol")
        abs_ = None if values.get("abs_tol") is None else _parse_float(values["abs_tol"], "abs_tol")
        kwargs["tolerances"] = Tolerances.from_environment(environ, rel=rel, abs=abs_)
        return cls(**kwargs)


@dataclasses.dataclass(frozen=True)
class SweepResult:
    """The rows of a sweep in input order and their summary.

    Attributes:
        config (SweepConfig): The sweep that was run.
        rows (tuple): The BoundReports.
        summary (dict): Counts, the worst slack ratio and the H3 table discrepancies.
    """
    config: SweepConfig
    rows: tuple
    summary: dict

    @property
    def holds(self):
        return self.summary["failed"] == 0

    def to_dict(self):
        rows = []
        for index, row in enumerate(self.rows):
            entry = row.to_dict()
            entry["index"] = index
            rows.append(entry)
        return {"schema_version": SCHEMA_VERSION, "command": "sweep", "config": self.config.to_dict(),
                "rows": rows, "summary": self.summary}


class SweepRunner(ObjectWithLogging):
    """Evaluates a SweepConfig, optionally on a thread pool, keeping rows in input order.

    Class Attributes:
        class_loggers (dict): The sweep progress logger shared by every runner.

    Attributes:
        config (SweepConfig): The sweep to run.
        loggers (dict): The class loggers plus this runner's own evaluation timing logger.

    Args:
        config (:obj:`SweepConfig`, optional): The sweep to run.
        name (str, optional): The name of this runner in trace logs.
        init (bool, optional): Determines if this object should be initialized.
    """
    class_loggers = {}

    # Class Methods
    @classmethod
    def build_class_loggers(cls):
        """Sets up the sweep progress logger."""
        cls.class_loggers["sweep"] = VerificationLogger("hhverify.sweep", module_of_class=__name__)

    # Construction/Destruction
    def __init__(self, config=None, name="sweep", init=True):
        super().__init__()
        self.config = None
        self._specs = {}

        if init:
            self.construct(config, name)

    # Methods
    def construct(self, config=None, name="sweep"):
        """Constructs this object.

        Args:
            config (:obj:`SweepConfig`, optional): The sweep to run.
            name (str, optional): The name of this runner in trace logs.
        """
        self.name = name
        self.config = config
        self.build_loggers()
        if config is not None:
            self._specs = self._build_specs(config)

    def build_loggers(self):
        """Adds the evaluation timing logger private to this runner."""
        self.loggers["timing"] = TimingLogger("hhverify.sweep.timing", module_of_class=__name__)

    @staticmethod
    def _build_specs(config):
        """Parses the function once per s value, binding s when the string leaves it out."""
        family = get_family(config.function.partition(":")[0].strip())
        if "s" in family.parameters:
            return {s: parse_function_spec(config.function, s=s) for s in config.s}
        spec = parse_function_spec(config.function)
        return {s: spec for s in config.s}

    def evaluate_point(self, index, point):
        """Evaluates every requested side at one grid point.

        Args:
            index (int): The position of the point in the grid.
            point (tuple): (a, b, s, q).

        Returns:
            list: The BoundReports of the point.
        """
        a, b, s, q = point
        config = self.config
        spec = self._specs[s]
        interval = Interval(a, b)
        params = ConvexityParams(s, q)
        timing = self.loggers["timing"]

        timing.pair_begin("evaluation", index)
        reports = []
        for side in config.sides():
            if config.theorem == "thm22":
                report = theorem_2_2(spec, interval, params, side, config.tolerances, config.check_preconditions)
            else:
                report = theorem_2_3(spec, interval, params, side, config.variant, config.tolerances,
                                     config.check_preconditions)
            reports.append(report)
        timing.pair_end("evaluation", index)
        return reports

    def run(self):
        """Runs the sweep.

        Returns:
            SweepResult: The rows and their summary.
        """
        points = self.config.points()
        self.trace_log("sweep", "run", f"{len(points)} points of {self.config.theorem} on {self.config.function} "
                                       f"with {self.config.workers} worker(s)", level="INFO")

        def job(item):
            return self.evaluate_point(*item)

        if self.config.workers == 1:
            groups = [job(item) for item in enumerate(points)]
        else:
            with concurrent.futures.ThreadPoolExecutor(max_workers=self.config.workers) as executor:
                groups = list(executor.map(job, enumerate(points)))

        rows = tuple(report for group in groups for report in group)
        self.loggers["timing"].log_pair_average_difference("evaluation")
        summary = summarize(rows)
        self.trace_log("sweep", "run", f"{summary['holds']} of {summary['count']} rows hold", level="INFO")
        return SweepResult(self.config, rows, summary)


SweepRunner.build_class_loggers()


# Functions #
def _parse_float(value, name):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{name} is not a number: {value!r}") from None


def _parse_int(value, name):
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{name} is not an integer: {value!r}") from None


def _parse_bool(value, name):
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"{name} is not a boolean: {value!r}")


def parse_grid(text):
    """Parses a grid of values.

    Items are separated by commas and are either numbers or inclusive linear ranges 'start:stop:count'.

    Args:
        text (str or sequence): The grid, or an already parsed sequence of numbers.

    Returns:
        tuple: The values in order.
    """
    if not isinstance(text, str):
        return tuple(_parse_float(v, "grid value") for v in text)

    values = []
    for item in filter(None, (part.strip() for part in text.split(","))):
        if ":" in item:
            parts = item.split(":")
            if len(parts) != 3:
                raise ConfigurationError(f"a range needs start:stop:count, got {item!r}")
            start, stop = _parse_float(parts[0], "range start"), _parse_float(parts[1], "range stop")
            count = _parse_int(parts[2], "range count")
            if count < 1:
                raise ConfigurationError(f"a range needs a positive count, got {item!r}")
            values.extend(float(v) for v in np.linspace(start, stop, count))
        else:
            values.append(_parse_float(item, "grid value"))
    if not values:
        raise ConfigurationError(f"the grid {text!r} is empty")
    return tuple(values)


def load_config_file(path):
    """Reads a flat key = value configuration file.

    Keys may use dashes or underscores; '#' and ';' start comments.

    Args:
        path (str or pathlib.Path): The file.

    Returns:
        dict: The settings as strings.
    """
    path = pathlib.Path(path)
    try:
        text = path.read_text()
    except OSError as error:
        raise ConfigurationError(f"cannot read configuration file {str(path)!r}: {error}") from None

    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(f"[{CONFIG_SECTION}]\n{text}", source=str(path))
    except configparser.Error as error:
        raise ConfigurationError(f"malformed configuration file {str(path)!r}: {error}") from None

    if parser.sections() != [CONFIG_SECTION]:
        raise ConfigurationError(f"configuration file {str(path)!r} must not contain section headers")
    values = {key.replace("-", "_"): value for key, value in parser.items(CONFIG_SECTION)}
    unknown = set(values) - set(CONFIG_KEYS)
    if unknown:
        raise ConfigurationError(f"unknown key(s) {sorted(unknown)} in {str(path)!r}")
    return values


def summarize(rows):
    """Summarizes sweep rows.

    Args:
        rows (sequence): The BoundReports in row order.

    Returns:
        dict: The row, holding and failing counts, the precondition failures, the worst slack ratio and the rows
            where the two H3 tables give different bounds.
    """
    worst_index, worst_ratio = None, 0.0
    discrepancies = []
    for index, row in enumerate(rows):
        if worst_index is None or row.slack_ratio > worst_ratio:
            worst_index, worst_ratio = index, row.slack_ratio

        companion = row.companion_rhs_bound
        if companion is None:
            continue
        if abs(companion - row.rhs_bound) > DISCREPANCY_TOL * max(abs(companion), abs(row.rhs_bound)):
            if row.variant is Variant.PRINTED:
                printed, derived = row.rhs_bound, companion
            else:
                printed, derived = companion, row.rhs_bound
            discrepancies.append({
                "index": index, "a": row.a, "b": row.b, "s": row.s, "q": row.q, "side": row.side.value,
                "case_tag": row.case_tag.value, "lhs_gap": row.lhs_gap,
                "printed_rhs_bound": printed, "derived_rhs_bound": derived,
                "printed_holds": row.lhs_gap <= printed + 1e-8 * (1.0 + printed),
                "derived_holds": row.lhs_gap <= derived + 1e-8 * (1.0 + derived),
            })

    holds = sum(1 for row in rows if row.holds)
    return {
        "count": len(rows),
        "holds": holds,
        "failed": len(rows) - holds,
        "precondition_failures": sum(1 for row in rows if row.precondition_holds is False),
        "worst_slack_ratio": worst_ratio,
        "worst_slack_index": worst_index,
        "discrepancies": discrepancies,
    }


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_csv(result):
    """str: The rows as CSV in the CSV_COLUMNS order, floats with 17 significant digits."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for entry in result.to_dict()["rows"]:
        writer.writerow([_csv_cell(entry[column]) for column in CSV_COLUMNS])
    return buffer.getvalue()


def render_json(payload):
    """str: A report payload as indented JSON."""
    return json.dumps(payload, indent=2) + "\n"


def write_atomic(path, text):
    """Writes text to path through a temporary file in the same directory, leaving nothing behind on failure.

    Args:
        path (str or pathlib.Path): The destination.
        text (str): The contents.
    """
    path = pathlib.Path(path)
    handle = tempfile.NamedTemporaryFile("w", dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp",
                                         delete=False, newline="")
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except BaseException:
        try:
            os.unlink(handle.name)
        except OSError:
            pass
        raise


def run_sweep(config):
    """Runs a sweep and returns its SweepResult."""
    try:
        return SweepRunner(config).run()
    except HHVerifyError:
        SweepRunner.class_loggers["sweep"].trace_log(SweepRunner, "run_sweep", "sweep aborted", level="ERROR")
        raise
