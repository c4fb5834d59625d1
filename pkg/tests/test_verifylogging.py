#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" test_verifylogging.py
Test for the verification loggers
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
import logging
import warnings

# Downloaded Libraries #
import pytest

# Local Libraries #
import src.hhverify as hhverify


# Definitions #
# Functions #
def make_chain_report(holds):
    return hhverify.ChainReport(kind="geometric", left=1.0, middle=1.5, right=2.0, holds=holds, sharp=False,
                                quadrature_error=0.0, spec="power:c=1.0", a=1.0, b=2.0)


# Classes #
class ClassTest:
    """Default class tests that all classes should pass."""
    class_ = None

    def test_instant_creation(self):
        assert isinstance(self.class_(), self.class_)


class BaseVerificationLoggerTest(ClassTest):
    """All VerificationLogger subclasses need to pass these tests to be considered functional."""
    class_ = None
    logger_name = "hhverify.test.base"

    def get_log_lines(self, tmp_dir):
        path = tmp_dir.joinpath(f"{self.logger_name}.log")
        with path.open() as f_object:
            lines = f_object.readlines()
        return lines

    @pytest.fixture
    def logger(self):
        logger = self.class_(self.logger_name)
        yield logger
        logger.set_level(logging.NOTSET)
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()

    @pytest.fixture
    def get_default_file_handler(self, logger, tmp_dir):
        path = tmp_dir.joinpath(f"{self.logger_name}.log")
        logger.add_default_file_handler(filename=path)
        return logger

    def test_instantiation(self, logger):
        assert logger.name == self.logger_name

    def test_default_file_handler(self, get_default_file_handler, logger):
        assert len(logger.handlers) > 0

    def test_default_file_write(self, get_default_file_handler, logger, tmp_dir):
        log_str = "Test log entry read."
        logger.setLevel("INFO")
        logger.info(log_str)
        lines = self.get_log_lines(tmp_dir)
        count = len(lines)
        assert count == 1
        assert log_str in lines[0]

    def test_named_levels(self, logger):
        logger.set_level("ERROR")
        assert logger.get_level("error") == logger.getEffectiveLevel()


class TestVerificationLogger(BaseVerificationLoggerTest):
    """Tests the VerificationLogger"""
    class_ = hhverify.VerificationLogger
    logger_name = "hhverify.test.full"

    @pytest.mark.parametrize("level", ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"])
    def test_trace_log(self, get_default_file_handler, logger, tmp_dir, level):
        log_class_ = self.class_
        log_func = "test_trace_log"
        log_str = "Test traceback"
        logger.setLevel(level)

        logger.trace_log(log_class_, log_func, log_str, level=level)

        lines = self.get_log_lines(tmp_dir)
        count = len(lines)
        assert count == 1
        assert log_func in lines[0]
        assert level in lines[0]
        assert log_str in lines[0]

    def test_trace_log_below_level(self, get_default_file_handler, logger, tmp_dir):
        logger.setLevel("INFO")
        logger.trace_log(self.class_, "test_trace_log_below_level", "hidden")
        assert self.get_log_lines(tmp_dir) == []

    @pytest.mark.parametrize("holds, level, verdict", [(True, "INFO", "holds"), (False, "WARNING", "FAILS")])
    def test_log_report(self, get_default_file_handler, logger, tmp_dir, holds, level, verdict):
        logger.setLevel("INFO")
        logger.log_report(make_chain_report(holds), name="row 3")

        lines = self.get_log_lines(tmp_dir)
        assert len(lines) == 1
        assert level in lines[0]
        assert verdict in lines[0]
        assert "geometric" in lines[0]
        assert "row 3" in lines[0]


class TestWarningsLogger(BaseVerificationLoggerTest):
    """Tests the WarningsLogger"""
    class_ = hhverify.WarningsLogger
    logger_name = "hhverify.test.warnings"

    def test_capture_warnings(self, get_default_file_handler, logger, tmp_dir):
        logger.setLevel("WARNING")
        original = warnings.showwarning
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            with logger:
                assert logger.capturing
                warnings.warn("Test capture", hhverify.PreconditionWarning)
            assert not logger.capturing
            assert warnings.showwarning is original

        lines = self.get_log_lines(tmp_dir)
        assert "WARNING" in lines[0]
        assert "PreconditionWarning: Test capture" in lines[0]

    def test_not_captured_after_release(self, get_default_file_handler, logger, tmp_dir):
        logger.capture_warnings(True)
        logger.capture_warnings(False)
        with warnings.catch_warnings(record=True):
            warnings.simplefilter("always")
            warnings.warn("Test release")
        assert self.get_log_lines(tmp_dir) == []


class TestTimingLogger(BaseVerificationLoggerTest):
    """Tests the TimingLogger"""
    class_ = hhverify.TimingLogger
    logger_name = "hhverify.test.timing"

    def test_pairs(self):
        ticks = iter([0.0, 1.0, 2.0, 4.0])
        logger = self.class_(self.logger_name, timer=lambda: next(ticks))
        logger.pair_begin("evaluation", 0)
        logger.pair_end("evaluation", 0)
        logger.pair_begin("evaluation", 1)
        logger.pair_end("evaluation", 1)

        assert logger.pair_difference("evaluation", 1) == 2.0
        mean, std = logger.pair_average_difference("evaluation")
        assert mean == 1.5
        assert std == pytest.approx(0.5 ** 0.5)

    def test_no_pairs(self):
        assert self.class_(self.logger_name).pair_average_difference("missing") == (0.0, 0.0)

    def test_log_average(self, get_default_file_handler, logger, tmp_dir):
        logger.setLevel("DEBUG")
        logger.pair_begin("evaluation", "only")
        logger.pair_end("evaluation", "only")
        logger.log_pair_average_difference("evaluation")

        lines = self.get_log_lines(tmp_dir)
        assert len(lines) == 1
        assert "evaluation took" in lines[0]


class TestObjectWithLogging:
    """Tests the ObjectWithLogging mixin"""

    class Traced(hhverify.ObjectWithLogging):
        class_loggers = {"trace": hhverify.VerificationLogger("hhverify.test.object")}

        def __init__(self):
            super().__init__()
            self.name = "traced"

    def test_loggers_copied(self):
        obj = self.Traced()
        assert obj.loggers == self.Traced.class_loggers
        assert obj.loggers is not self.Traced.class_loggers

    def test_trace_log(self, tmp_dir):
        obj = self.Traced()
        logger = obj.loggers["trace"]
        handler = logger.add_default_file_handler(filename=tmp_dir.joinpath("object.log"))
        logger.setLevel("DEBUG")
        try:
            obj.trace_log("trace", "test_trace_log", "traced message")
        finally:
            logger.removeHandler(handler)
            handler.close()

        with tmp_dir.joinpath("object.log").open() as f_object:
            lines = f_object.readlines()
        assert len(lines) == 1
        assert "Traced(traced) -> test_trace_log: traced message" in lines[0]
