#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" test_sweep.py
Tests for the sweep configuration, the runner and the report writers.
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
import csv
import io
import json

# Downloaded Libraries #
import pytest

# Local Libraries #
import src.hhverify as hhverify


# Definitions #
# Functions #
def small_config(**kwargs):
    settings = dict(function="power_shift", a=(0.25, 0.5), b=(0.75, 1.0), s=(0.5,), q=(2.0,),
                    check_preconditions=False)
    settings.update(kwargs)
    return hhverify.SweepConfig(**settings)


# Classes #
class TestParseGrid:
    """Tests the grid syntax."""

    @pytest.mark.parametrize("text, expected", [
        ("0.1,0.2", (0.1, 0.2)),
        (" 0.1 , 0.2 ,", (0.1, 0.2)),
        ("0:1:3", (0.0, 0.5, 1.0)),
        ("0.1, 1:2:2", (0.1, 1.0, 2.0)),
        ("5:5:1", (5.0,)),
        ([1, 2.5], (1.0, 2.5)),
    ])
    def test_valid(self, text, expected):
        assert hhverify.parse_grid(text) == expected

    @pytest.mark.parametrize("text", ["", ",", "1:2", "1:2:0", "1:2:x", "abc", "1:2:3:4"])
    def test_invalid(self, text):
        with pytest.raises(hhverify.ConfigurationError):
            hhverify.parse_grid(text)


class TestConfigFile:
    """Tests the flat configuration file."""

    def test_load(self, tmp_dir):
        path = tmp_dir.joinpath("sweep.cfg")
        path.write_text("; a sweep of the product integral bound\n"
                        "f = power_shift\n"
                        "a = 0.25\n"
                        "b = 0.75, 1.0\n"
                        "rel-tol = 1e-8  # tighter\n"
                        "upper_triangle = yes\n")
        values = hhverify.load_config_file(path)
        assert values == {"f": "power_shift", "a": "0.25", "b": "0.75, 1.0", "rel_tol": "1e-8",
                          "upper_triangle": "yes"}

    @pytest.mark.parametrize("text", ["f = power\ncolor = red\n", "[other]\nf = power\n", "[sweep]\nf = power\n",
                                      "f\n"])
    def test_invalid(self, tmp_dir, text):
        path = tmp_dir.joinpath("sweep.cfg")
        path.write_text(text)
        with pytest.raises(hhverify.ConfigurationError):
            hhverify.load_config_file(path)

    def test_missing(self, tmp_dir):
        with pytest.raises(hhverify.ConfigurationError):
            hhverify.load_config_file(tmp_dir.joinpath("missing.cfg"))


class TestSweepConfig:
    """Tests the validation and parsing of a sweep configuration."""

    @pytest.mark.parametrize("kwargs", [
        {"a": ()},
        {"s": ()},
        {"q": (float("nan"),)},
        {"a": (0.5,), "b": (0.25,)},
        {"a": (0.25, 1.0), "b": (0.75, 1.0)},
        {"theorem": "thm99"},
        {"side": "left"},
        {"format": "xml"},
        {"workers": 0},
        {"theorem": "thm23", "q": (1.0, 2.0)},
        {"a": (0.5,), "b": (0.25,), "upper_triangle": True},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(hhverify.ConfigurationError):
            small_config(**kwargs)

    def test_upper_triangle(self):
        config = small_config(a=(0.25, 0.5, 0.75), b=(0.5, 0.75), upper_triangle=True)
        assert config.pairs() == [(0.25, 0.5), (0.25, 0.75), (0.5, 0.75)]

    def test_points_order(self):
        config = small_config(s=(0.3, 0.6), q=(1.0, 2.0))
        points = config.points()
        assert len(points) == 16
        assert points[:3] == [(0.25, 0.75, 0.3, 1.0), (0.25, 0.75, 0.3, 2.0), (0.25, 0.75, 0.6, 1.0)]
        assert points[-1] == (0.5, 1.0, 0.6, 2.0)

    def test_sides(self):
        assert small_config().sides() == (hhverify.Side.PRODUCT_VS_FAFB, hhverify.Side.PRODUCT_VS_FSQRT)
        assert small_config(side="fsqrt").sides() == (hhverify.Side.PRODUCT_VS_FSQRT,)

    def test_from_mapping(self):
        values = {"f": "power_shift", "a": "0.25", "b": "0.75,1.0", "s": "0.5", "q": "2", "theorem": "thm23",
                  "variant": "printed", "workers": "2", "upper_triangle": "yes", "check_preconditions": "false"}
        config = hhverify.SweepConfig.from_mapping(values, environ={})
        assert config.b == (0.75, 1.0)
        assert config.q == (2.0,)
        assert config.variant is hhverify.Variant.PRINTED
        assert config.workers == 2
        assert config.upper_triangle is True
        assert config.check_preconditions is False
        assert config.tolerances == hhverify.Tolerances()

    def test_tolerance_precedence(self):
        values = {"f": "exponential", "a": "1", "b": "2"}
        environ = {"HHVERIFY_REL_TOL": "1e-8", "HHVERIFY_ABS_TOL": "1e-11"}
        from_environment = hhverify.SweepConfig.from_mapping(values, environ=environ)
        assert (from_environment.tolerances.rel, from_environment.tolerances.abs) == (1e-8, 1e-11)

        explicit = hhverify.SweepConfig.from_mapping(dict(values, rel_tol="1e-6"), environ=environ)
        assert (explicit.tolerances.rel, explicit.tolerances.abs) == (1e-6, 1e-11)

    @pytest.mark.parametrize("values", [
        {"a": "1", "b": "2"},
        {"f": "exponential", "b": "2"},
        {"f": "exponential", "a": "1", "b": "2", "colour": "red"},
        {"f": "exponential", "a": "1", "b": "2", "workers": "many"},
        {"f": "exponential", "a": "1", "b": "2", "upper_triangle": "perhaps"},
        {"f": "exponential", "a": "1", "b": "2", "variant": "novel"},
        {"f": "exponential", "a": "1", "b": "2", "rel_tol": "-1"},
    ])
    def test_invalid_mapping(self, values):
        with pytest.raises(hhverify.ConfigurationError):
            hhverify.SweepConfig.from_mapping(values, environ={})

    def test_to_dict_is_json(self):
        payload = json.loads(json.dumps(small_config(variant="printed").to_dict()))
        assert payload["variant"] == "printed"
        assert payload["a"] == [0.25, 0.5]
        assert payload["tolerances"] == {"rel": 1e-10, "abs": 1e-12}


@pytest.mark.incremental
class TestSweepRunner:
    """Tests running a sweep."""

    @pytest.fixture(scope="class")
    def result(self):
        return hhverify.run_sweep(small_config())

    def test_rows_in_order(self, result):
        assert len(result.rows) == 8
        first, second = result.rows[:2]
        assert (first.a, first.b, first.side) == (0.25, 0.75, hhverify.Side.PRODUCT_VS_FAFB)
        assert (second.a, second.b, second.side) == (0.25, 0.75, hhverify.Side.PRODUCT_VS_FSQRT)
        assert (result.rows[-1].a, result.rows[-1].b) == (0.5, 1.0)

    def test_family_takes_s_from_grid(self):
        result = hhverify.run_sweep(small_config(a=(0.25,), b=(0.75,), s=(0.3, 0.6), side="fafb"))
        assert [row.s for row in result.rows] == [0.3, 0.6]
        assert [hhverify.parse_function_spec(row.spec).parameters["s"] for row in result.rows] == [0.3, 0.6]

    def test_summary(self, result):
        summary = result.summary
        assert result.holds
        assert summary["count"] == 8
        assert summary["holds"] == 8
        assert summary["failed"] == 0
        assert summary["precondition_failures"] == 0
        assert summary["discrepancies"] == []
        worst = result.rows[summary["worst_slack_index"]]
        assert summary["worst_slack_ratio"] == worst.slack_ratio
        assert all(row.slack_ratio <= summary["worst_slack_ratio"] for row in result.rows)

    def test_workers_match_sequential(self, result):
        threaded = hhverify.run_sweep(small_config(workers=3))
        assert threaded.rows == result.rows
        assert threaded.summary == result.summary

    def test_printed_discrepancies(self):
        config = small_config(a=(0.25,), theorem="thm23", side="fafb", variant="printed")
        summary = hhverify.run_sweep(config).summary
        assert [entry["index"] for entry in summary["discrepancies"]] == [1]
        entry = summary["discrepancies"][0]
        assert entry["b"] == 1.0
        assert entry["case_tag"] == "b_le_1_le_a"
        assert entry["derived_rhs_bound"] > entry["printed_rhs_bound"]

    def test_preconditions_checked(self):
        result = hhverify.run_sweep(small_config(a=(0.25,), b=(0.75,), side="fafb", check_preconditions=True))
        assert result.rows[0].precondition_holds is True

    def test_unknown_family(self):
        with pytest.raises(hhverify.SpecificationError):
            hhverify.run_sweep(small_config(function="nonexistent"))

    def test_runner_timing(self):
        runner = hhverify.SweepRunner(small_config(a=(0.25,), b=(0.75,)), name="timed")
        runner.run()
        mean, _ = runner.loggers["timing"].pair_average_difference("evaluation")
        assert mean >= 0.0

    def test_runner_loggers(self):
        first = hhverify.SweepRunner(small_config(a=(0.25,), b=(0.75,)))
        second = hhverify.SweepRunner(small_config(a=(0.25,), b=(0.75,)))
        assert first.loggers["sweep"] is hhverify.SweepRunner.class_loggers["sweep"]
        assert second.loggers["sweep"] is first.loggers["sweep"]
        assert "timing" not in hhverify.SweepRunner.class_loggers
        assert first.loggers["timing"] is not second.loggers["timing"]

        first.run()
        assert len(first.loggers["timing"].pairs["evaluation"]) == 1
        assert "evaluation" not in second.loggers["timing"].pairs


@pytest.mark.incremental
class TestReports:
    """Tests the JSON and CSV renderings and the atomic writer."""

    @pytest.fixture(scope="class")
    def result(self):
        return hhverify.run_sweep(small_config(a=(0.25,), b=(0.75, 1.0)))

    def test_json(self, result):
        payload = json.loads(hhverify.render_json(result.to_dict()))
        assert payload["schema_version"] == "1"
        assert payload["command"] == "sweep"
        assert [row["index"] for row in payload["rows"]] == [0, 1, 2, 3]
        assert payload["rows"][0]["side"] == "product_vs_fafb"
        assert payload["summary"]["count"] == 4

    def test_csv(self, result):
        text = hhverify.render_csv(result)
        rows = list(csv.reader(io.StringIO(text)))
        assert tuple(rows[0]) == hhverify.CSV_COLUMNS
        assert len(rows) == 5

        first = dict(zip(rows[0], rows[1]))
        report = result.rows[0]
        assert first["index"] == "0"
        assert first["lhs_gap"] == format(report.lhs_gap, ".17g")
        assert float(first["rhs_bound"]) == report.rhs_bound
        assert first["holds"] == "true"
        assert first["precondition_holds"] == ""
        assert first["companion_rhs_bound"] == ""

    def test_write_atomic(self, tmp_dir):
        path = tmp_dir.joinpath("report.json")
        hhverify.write_atomic(path, "first\n")
        hhverify.write_atomic(path, "second\n")
        assert path.read_text() == "second\n"
        assert [p.name for p in tmp_dir.iterdir()] == ["report.json"]

    def test_write_atomic_failure(self, tmp_dir):
        path = tmp_dir.joinpath("report.json")
        with pytest.raises(TypeError):
            hhverify.write_atomic(path, 123)
        assert list(tmp_dir.iterdir()) == []
