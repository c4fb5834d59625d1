#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" verifylogging.py
Loggers for verification runs: a wrapping logger that understands reports, warning capture and evaluation timing.
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
import abc
import datetime
import logging
import statistics
import threading
import time
import warnings

# Downloaded Libraries #
import dynamicwrapper

# Local Libraries #


# Definitions #
DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


# Classes #
class PreciseFormatter(logging.Formatter):
    """A logging Formatter that stamps records to the microsecond.

    Class Attributes:
        converter (:func:): The function that converts the record time to a datetime object.
        default_msec_format (str): The format of the seconds and microseconds.
    """
    converter = datetime.datetime.fromtimestamp
    default_msec_format = "%s.%06d"

    # Methods
    def formatTime(self, record, datefmt=None):
        """Return the creation time of the specified LogRecord with microseconds.

        Args:
            record: The log record.
            datefmt (str, optional): The strftime format to use instead of the default.

        Returns:
            str: The formatted time.
        """
        ct = self.converter(record.created)
        if datefmt:
            return ct.strftime(datefmt)
        return self.default_msec_format % (ct.strftime(self.default_time_format), ct.microsecond)


class VerificationLogger(dynamicwrapper.DynamicWrapper):
    """A logger that wraps a standard logger and adds trace logs and report logs.

    Class Attributes:
        _attributes_as_parents (:obj:'list' of :obj:'str'): The attributes holding the wrapped objects, here the logger.
        default_levels (dict): The logging level names mapped to their numerical values.

    Attributes:
        levels (dict): The logging level names mapped to their numerical values.
        module_of_class (str): The name of module the owner of this logger originates from.

    Args:
        obj: The logger that this object will wrap or the name of the logger to create.
        module_of_class (str, optional): The name of module the owner of this logger originates from.
        init (bool, optional): Determines if this object should be initialized.
    """
    _attributes_as_parents = ["_logger"]
    default_levels = {"DEBUG": logging.DEBUG,
                      "INFO": logging.INFO,
                      "WARNING": logging.WARNING,
                      "ERROR": logging.ERROR,
                      "CRITICAL": logging.CRITICAL}

    # Construction/Destruction
    def __init__(self, obj=None, module_of_class="(Not Given)", init=True):
        self._logger = None

        self.levels = self.default_levels.copy()
        self.module_of_class = "(Not Given)"

        if init:
            self.construct(obj, module_of_class)

    # Methods
    # Constructors/Destructors
    def construct(self, obj=None, module_of_class="(Not Given)"):
        """Constructs this object.

        Args:
            obj: The logger that this object will wrap or the name of the logger to create.
            module_of_class (str): The name of module the owner of this logger originates from.
        """
        self.module_of_class = module_of_class
        if isinstance(obj, logging.Logger):
            self._logger = obj
        else:
            self._logger = logging.getLogger(obj)

    # Levels
    def get_level(self, level):
        """Resolves a level name or number to its number.

        Args:
            level (str or int): The level.

        Returns:
            int: The numerical value of the level.
        """
        if isinstance(level, str):
            return self.levels[level.upper()]
        return level

    def set_level(self, level):
        """Sets the level of the wrapped logger from a name or a number."""
        self._logger.setLevel(self.get_level(level))

    # Handlers
    def _add_formatted_handler(self, handler, level):
        handler.setLevel(self.get_level(level))
        handler.setFormatter(PreciseFormatter(DEFAULT_FORMAT))
        self._logger.addHandler(handler)
        return handler

    def add_default_stream_handler(self, stream=None, level="DEBUG"):
        """Adds a stream handler with the microsecond formatter.

        Args:
            stream: The stream to send the logs to, stderr by default.
            level (str or int, optional): The level of the handler.

        Returns:
            The new handler, so callers can remove it again.
        """
        return self._add_formatted_handler(logging.StreamHandler(stream=stream), level)

    def add_default_file_handler(self, filename, mode='a', encoding=None, delay=False, level="DEBUG"):
        """Adds a file handler with the microsecond formatter.

        Args:
            filename: The path to the log file.
            mode (str): The file mode to open the file with.
            encoding: The encoding of the file.
            delay (bool): Defers opening the file until the first record.
            level (str or int, optional): The level of the handler.

        Returns:
            The new handler.
        """
        return self._add_formatted_handler(logging.FileHandler(filename, mode, encoding, delay), level)

    # Logging
    def log(self, level, msg, *args, **kwargs):
        """Creates a log entry at a level given by name or number."""
        self._logger.log(self.get_level(level), msg, *args, **kwargs)

    def trace_log(self, class_, func, msg, *args, name="", level="DEBUG", **kwargs):
        """Creates a log that names where it was made from.

        Args:
            class_: The class, or a short label, the log is made from.
            func (str): The name of function/method the log is made from.
            msg (str): The message.
            *args: The arguments for the original log method.
            name (str, optional): An additional identifier to trace this log.
            level (str or int, optional): The level of the log entry.
            **kwargs: The keyword arguments for the original log method.
        """
        level = self.get_level(level)
        if self._logger.isEnabledFor(level):
            class_name = class_.__name__ if isinstance(class_, type) else class_
            self._logger.log(level, f"{class_name}({name}) -> {func}: {msg}", *args, **kwargs)

    def log_report(self, report, name=""):
        """Logs one line summarizing a verification report.

        Holding reports are logged at INFO and failing ones at WARNING.

        Args:
            report: Any report with a holds attribute and a to_dict method.
            name (str, optional): An identifier of the evaluation, such as its row index.
        """
        level = logging.INFO if report.holds else logging.WARNING
        if not self._logger.isEnabledFor(level):
            return

        fields = report.to_dict()
        label = fields.get("theorem") or fields.get("kind") or fields.get("proposition") or type(report).__name__
        shown = {key: fields[key] for key in ("side", "case_tag", "lhs_gap", "rhs_bound", "left", "middle", "right",
                                              "theorem_form_lhs", "theorem_form_rhs") if key in fields}
        details = ", ".join(f"{key}={value!r}" for key, value in shown.items())
        verdict = "holds" if report.holds else "FAILS"
        self.trace_log(type(report), label, f"{verdict}: {details}", name=name, level=level)


class WarningsLogger(VerificationLogger):
    """A VerificationLogger which captures the warnings issued through the 'warnings' module.

    Capturing replaces warnings.showwarning globally, so the saved original is kept on the class. Warnings addressed
    to a file are still written to that file by the original function.

    Class Attributes:
        _warnings_showwarning: The original warnings.showwarning while capturing is active.
        capturing (bool): True while warnings are being captured.

    Args:
        obj: The logger that this object will wrap or the name of the logger to create.
        module_of_class (str, optional): The name of module the owner of this logger originates from.
        capture (bool, optional): Determines if capturing starts on initialization.
        init (bool, optional): Determines if this object should be initialized.
    """
    _warnings_showwarning = None
    capturing = False

    # Construction/Destruction
    def __init__(self, obj=None, module_of_class="(Not Given)", capture=False, init=True):
        super().__init__(init=False)

        if init:
            self.construct(obj, module_of_class, capture)

    def __enter__(self):
        self.capture_warnings(True)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.capture_warnings(False)

    # Methods
    def construct(self, obj=None, module_of_class="(Not Given)", capture=False):
        """Constructs this object.

        Args:
            obj: The logger that this object will wrap or the name of the logger to create.
            module_of_class (str, optional): The name of module the owner of this logger originates from.
            capture (bool, optional): Determines if capturing starts now.
        """
        super().construct(obj, module_of_class)
        if capture:
            self.capture_warnings(True)

    def create_warning_handler(self):
        """Creates a function that logs a warning to this logger.

        Returns:
            func: The warning handler.
        """
        def warning_handler(message, category, filename, lineno, line):
            s = warnings.formatwarning(message, category, filename, lineno, line)
            self.warning("%s", s.rstrip())

        return warning_handler

    def create_showwarning(self, warning_handler=None):
        """Creates a replacement for warnings.showwarning that sends warnings to a handler.

        Args:
            warning_handler: The function which handles a captured warning, this logger by default.

        Returns:
            func: The showwarning function.
        """
        if warning_handler is None:
            warning_handler = self.create_warning_handler()
        original = type(self)._warnings_showwarning or warnings.showwarning

        def showwarning(message, category, filename, lineno, file=None, line=None):
            if file is not None:
                original(message, category, filename, lineno, file, line)
            else:
                warning_handler(message, category, filename, lineno, line)

        return showwarning

    def capture_warnings(self, capture=True):
        """Starts or stops sending warnings to this logger.

        Args:
            capture (bool, optional): True to start capturing, False to restore the original showwarning.
        """
        cls = type(self)
        if capture:
            if cls._warnings_showwarning is None:
                cls._warnings_showwarning = warnings.showwarning
            warnings.showwarning = self.create_showwarning()
            cls.capturing = True
        elif cls._warnings_showwarning is not None:
            warnings.showwarning = cls._warnings_showwarning
            cls._warnings_showwarning = None
            cls.capturing = False


class TimingLogger(VerificationLogger):
    """A VerificationLogger that times pairs of begin and end marks, safe to use from worker threads.

    Class Attributes:
        default_timer: The clock used when no timer is given.

    Attributes:
        timer: The clock of this logger.
        pairs (dict): The begin and end times of each pair grouped by type.

    Args:
        obj: The logger that this object will wrap or the name of the logger to create.
        timer (optional): The clock to use.
        module_of_class (str, optional): The name of module the owner of this logger originates from.
        init (bool, optional): Determines if this object should be initialized.
    """
    default_timer = time.perf_counter

    # Construction/Destruction
    def __init__(self, obj=None, timer=None, module_of_class="(Not Given)", init=True):
        super().__init__(init=False)

        self.timer = self.default_timer
        self.pairs = {}
        self._pairs_lock = threading.Lock()

        if init:
            self.construct(obj, timer, module_of_class)

    # Methods
    def construct(self, obj=None, timer=None, module_of_class="(Not Given)"):
        """Constructs this object.

        Args:
            obj: The logger that this object will wrap or the name of the logger to create.
            timer (optional): The clock to use.
            module_of_class (str, optional): The name of module the owner of this logger originates from.
        """
        super().construct(obj, module_of_class)
        if timer is not None:
            self.timer = timer

    # Time Tracking
    def pair_begin(self, type_, name):
        now = self.timer()
        with self._pairs_lock:
            self.pairs.setdefault(type_, {})[name] = {"beginning": now, "ending": None}

    def pair_end(self, type_, name):
        now = self.timer()
        with self._pairs_lock:
            self.pairs[type_][name]["ending"] = now

    def pair_difference(self, type_, name):
        pair = self.pairs[type_][name]
        return pair["ending"] - pair["beginning"]

    def pair_average_difference(self, type_):
        """The mean and standard deviation of the finished pairs of a type.

        Args:
            type_ (str): The type of the pairs.

        Returns:
            tuple: The mean and the standard deviation, which is zero for a single pair.
        """
        with self._pairs_lock:
            differences = [p["ending"] - p["beginning"] for p in self.pairs.get(type_, {}).values()
                           if p["ending"] is not None]
        if not differences:
            return 0.0, 0.0
        if len(differences) == 1:
            return differences[0], 0.0
        return statistics.mean(differences), statistics.stdev(differences)

    def log_pair_average_difference(self, type_, level="DEBUG"):
        mean, std = self.pair_average_difference(type_)
        count = len(self.pairs.get(type_, {}))
        self.log(level, f"{type_} took {mean:.6g} +/- {std:.6g} s over {count} runs.")


class ObjectWithLogging(abc.ABC):
    """Class that has inbuilt logging as an option.

    Class loggers are shared by every object of a class and set up in build_class_loggers; object loggers are
    private to one object and set up in build_loggers.

    Class Attributes:
        class_loggers (dict): The default loggers to include in every object of this class.

    Attributes:
        loggers (dict): The loggers used by this object, keyed by name.
        name (str): The name of this object.
    """
    class_loggers = {}

    # Class Methods
    @classmethod
    def build_class_loggers(cls):
        """Setup class loggers here"""
        pass

    # Construction/Destruction
    def __init__(self):
        self.loggers = self.class_loggers.copy()
        self.name = ""

    # Methods
    def build_loggers(self):
        """Setup object loggers here"""
        pass

    def trace_log(self, logger, func, msg, *args, name=None, level="DEBUG", **kwargs):
        """Creates a trace log on one of this object's loggers.

        Args:
            logger (str): The name of logger to log to.
            func (str): The name of function/method this log is being made from.
            msg (str): The message.
            *args: The arguments for the original log method.
            name (str, optional): An additional identifier, the name of this object by default.
            level (str or int, optional): The level of the log entry.
            **kwargs: The keyword arguments for the original log method.
        """
        if name is None:
            name = self.name
        self.loggers[logger].trace_log(type(self), func, msg, *args, name=name, level=level, **kwargs)
