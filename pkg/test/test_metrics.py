import math

import numpy as np
import pytest

from approxmax.metrics import (
    CSV_FIELDS,
    ErrorReport,
    MeasurementMode,
    MomentAccumulator,
    argmax_agreement,
    average_reports,
    error_moments,
    rmse,
)
from approxmax.utils.exceptions import LengthMismatchError


class TestRmse:
    def test_examples(self):
        v = [0.1, 0.2, 0.7]
        assert rmse(v, v) == 0.0
        assert rmse([1, 0], [0, 0]) == pytest.approx(0.70710678, abs=1e-8)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            rmse([1, 2], [1])
        with pytest.raises(LengthMismatchError):
            rmse([], [])


class TestErrorMoments:
    def test_constant_error(self):
        exact = np.arange(101) / 128
        report = error_moments(exact, exact - 0.25)
        assert report.variance == 0.0
        assert report.rmse == 0.25
        assert report.max_abs_err == 0.25
        assert report.n == 101

    def test_moment_identities(self, rng):
        exact = rng.uniform(0, 1, size=5000)
        approx = exact + rng.normal(1e-3, 2e-3, size=5000)
        report = error_moments(exact, approx)
        errors = exact - approx
        assert report.stddev == pytest.approx(math.sqrt(report.variance), rel=1e-15)
        assert report.rmse ** 2 == pytest.approx(report.variance + np.mean(errors) ** 2, rel=1e-12)
        assert report.rmse ** 2 >= report.variance * (1 - 1e-12)
        assert report.max_abs_err == pytest.approx(np.max(np.abs(errors)))

    def test_labels_pass_through(self):
        report = error_moments([0.5, 0.5], [0.4, 0.6], method="taylor1", config="q16.15",
                               mode=MeasurementMode.METHOD_ERROR, seed=7)
        assert (report.method, report.config, report.seed) == ("taylor1", "q16.15", 7)
        assert report.mode is MeasurementMode.METHOD_ERROR

    def test_needs_two_elements(self):
        with pytest.raises(LengthMismatchError):
            error_moments([1.0], [0.5])
        with pytest.raises(LengthMismatchError):
            error_moments([1.0, 2.0], [0.5])


class TestMomentAccumulator:
    def test_one_pass_matches_two_pass(self, rng):
        errors = rng.normal(3e-5, 1e-4, size=1_000_000)
        acc = MomentAccumulator().update(errors, chunk=4096)
        mean = math.fsum(errors) / errors.size
        variance = math.fsum(((errors - mean) ** 2).tolist()) / errors.size
        assert acc.count == errors.size
        assert acc.mean == pytest.approx(mean, rel=1e-9)
        assert acc.variance == pytest.approx(variance, rel=1e-9)
        assert acc.rmse == pytest.approx(math.sqrt(math.fsum((errors ** 2).tolist()) / errors.size), rel=1e-9)

    def test_merge_equals_single_pass(self, rng):
        errors = rng.normal(0, 1, size=10_000)
        whole = MomentAccumulator().update(errors)
        left = MomentAccumulator().update(errors[:3000])
        right = MomentAccumulator().update(errors[3000:])
        merged = left.merge(right)
        assert merged.count == whole.count
        assert merged.variance == pytest.approx(whole.variance, rel=1e-12)
        assert merged.rmse == pytest.approx(whole.rmse, rel=1e-12)
        assert merged.max_abs == whole.max_abs

    def test_empty(self):
        acc = MomentAccumulator()
        assert acc.variance == 0.0 and acc.rmse == 0.0
        assert acc.merge(MomentAccumulator()).count == 0


class TestArgmaxAgreement:
    def test_counts(self):
        exact = [[0.1, 0.9], [0.8, 0.2], [0.5, 0.5]]
        assert argmax_agreement(exact, [[0.2, 0.8], [0.6, 0.4], [0.5, 0.5]]) == 1.0
        assert argmax_agreement(exact, [1, 1, 0]) == pytest.approx(2 / 3)

    def test_nine_of_ten(self):
        exact = list(range(10))
        approx = list(range(9)) + [0]
        assert argmax_agreement(exact, approx) == 0.9

    def test_mismatch(self):
        with pytest.raises(LengthMismatchError):
            argmax_agreement([0, 1], [0])
        with pytest.raises(LengthMismatchError):
            argmax_agreement([], [])


class TestReports:
    def test_row_layout(self):
        report = ErrorReport(rmse=1e-4, variance=4e-9, stddev=6.3e-5, max_abs_err=2e-3, n=1000,
                             method="lut-linear-64", config="q16.15", seed=42)
        row = report.to_row()
        assert len(row) == len(CSV_FIELDS)
        assert row[:5] == ["lut-linear-64", "q16.15", "quantized", "1000", "42"]
        assert row[5] == "0.0001"
        assert row[-1] == ""

    def test_rejects_negative_metrics(self):
        with pytest.raises(ValueError):
            ErrorReport(rmse=-1.0, variance=0.0, stddev=0.0, max_abs_err=0.0, n=1)

    def test_average(self):
        reports = [
            ErrorReport(rmse=r, variance=r * r, stddev=r, max_abs_err=m, argmax_agreement=a, n=10)
            for r, m, a in ((1e-4, 1e-3, 1.0), (3e-4, 5e-3, 0.0))
        ]
        averaged = average_reports(reports)
        assert averaged.rmse == pytest.approx(2e-4)
        assert averaged.variance == pytest.approx(5e-8)
        assert averaged.stddev == pytest.approx(math.sqrt(averaged.variance), rel=1e-15)
        assert averaged.max_abs_err == 5e-3
        assert averaged.argmax_agreement == 0.5
        assert (averaged.n, averaged.trials) == (20, 2)
        with pytest.raises(LengthMismatchError):
            average_reports([])
