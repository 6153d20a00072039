import math

import mpmath
import numpy as np
import pytest

from approxmax.core.fixed_point import FixedFormat, FixedValue, quantize
from approxmax.kernels import (
    ExactKernel,
    ExpKernelSpec,
    KernelMethod,
    LutDegree,
    LutKernel,
    TaylorKernel,
    TaylorScheme,
    build_lut,
    eval_exact_exp,
    eval_lut_exp,
    eval_taylor_exp,
    locate_segment,
    lut_lookup,
    segment_index,
)
from approxmax.utils.exceptions import (
    CoefficientRangeError,
    ConfigurationError,
    FormatMismatchError,
)


def _lut_spec(fmt, degree="linear", segments=64, **kwargs):
    return ExpKernelSpec(KernelMethod.LUT, fmt, degree=LutDegree(degree), segments=segments, **kwargs)


class TestKernelSpec:
    def test_parse_names(self, q16_15):
        assert ExpKernelSpec.parse("exact", q16_15).method is KernelMethod.EXACT
        taylor = ExpKernelSpec.parse("taylor3", q16_15)
        assert (taylor.order, taylor.scheme) == (3, TaylorScheme.POWER_SUM)
        assert ExpKernelSpec.parse("taylor2-horner", q16_15).scheme is TaylorScheme.HORNER
        lut = ExpKernelSpec.parse("LUT-Quadratic-16", q16_15)
        assert (lut.degree, lut.segments, lut.name) == (LutDegree.QUADRATIC, 16, "lut-quadratic-16")
        assert str(ExpKernelSpec.parse("lut-linear-64", q16_15)) == "lut-linear-64@q16.15"

    @pytest.mark.parametrize("text", ["taylor0", "taylor4", "lut-linear-48", "lut-linear-1", "lut-cubic-8", "softexp"])
    def test_parse_rejects(self, q16_15, text):
        with pytest.raises(ConfigurationError):
            ExpKernelSpec.parse(text, q16_15)

    def test_rejects_empty_domain(self, q16_15):
        with pytest.raises(ConfigurationError):
            ExpKernelSpec.parse("taylor1", q16_15, domain=(1.0, -1.0))

    def test_working_format(self, q16_15, q12_6):
        assert str(ExpKernelSpec.parse("taylor1", q16_15).working_format) == "q16.13"
        assert str(ExpKernelSpec.parse("taylor1", q12_6).working_format) == "q12.9"
        override = FixedFormat(16, 12)
        assert ExpKernelSpec.parse("taylor1", q16_15, work_format=override).working_format == override


class TestExactKernel:
    def test_reference_value(self, q16_15):
        assert eval_exact_exp(FixedValue(-32768, q16_15)).raw == 12055
        assert eval_exact_exp(FixedValue(0, q16_15)).raw == 32767

    def test_kernel_answers_in_working_format(self, factory, q16_15):
        kernel = factory.create("exact", q16_15)
        assert isinstance(kernel, ExactKernel)
        assert kernel.evaluate(FixedValue(0, q16_15)) == FixedValue(8192, FixedFormat(16, 13))
        assert kernel.domain_raw == (q16_15.raw_min, q16_15.raw_max)

    def test_matches_mpmath(self, factory, q12_6):
        kernel = factory.create("exact", q12_6)
        for raw in range(-64, 64):
            expected = quantize(mpmath.exp(mpmath.mpf(raw) / 64), kernel.format).raw
            assert kernel.evaluate(FixedValue(raw, q12_6)).raw == expected


class TestTaylorKernel:
    def test_unity_at_zero(self, q16_15):
        work = FixedFormat(16, 13)
        for order in (1, 2, 3):
            assert eval_taylor_exp(FixedValue(0, q16_15), order, work).raw == 8192

    def test_first_order_near_one(self, q12_6):
        x = FixedValue(63, q12_6)
        result = eval_taylor_exp(x, 1)
        assert result.raw == 127
        assert result.real == 1.984375

    def test_saturates_in_operand_format(self, q16_15):
        assert eval_taylor_exp(quantize(0.5, q16_15), 1).raw == 32767

    @pytest.mark.parametrize("scheme", list(TaylorScheme))
    def test_third_order_at_half(self, q16_15, scheme):
        result = eval_taylor_exp(quantize(0.5, q16_15), 3, FixedFormat(16, 13), scheme)
        assert result.raw == 13483

    def test_real_evaluation(self, factory, q16_15):
        kernel = factory.create("taylor3", q16_15)
        assert kernel.evaluate_real(np.array([0.5]))[0] == pytest.approx(1 + 0.5 + 0.125 + 0.5 ** 3 / 6)

    @pytest.mark.parametrize("fmt", ["q16.15", "q12.6"])
    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_monotone_exhaustive(self, factory, fmt, order):
        fmt = FixedFormat.parse(fmt)
        kernel = factory.create(f"taylor{order}", fmt)
        lo_raw, hi_raw = kernel.domain_raw
        previous = None
        for raw in range(lo_raw, hi_raw + 1):
            value = kernel.evaluate(FixedValue(raw, fmt)).raw
            if previous is not None:
                assert value >= previous, f"taylor{order} decreases at raw {raw}"
            previous = value

    def test_first_order_never_negative(self, factory, q16_15, q12_6):
        wide = factory.create("taylor1", q16_15)
        lo_raw, hi_raw = wide.domain_raw
        assert all(wide.evaluate(FixedValue(r, q16_15)).raw >= 0 for r in range(lo_raw, hi_raw + 1))
        narrow = factory.create("taylor1", q12_6)
        lo_raw, hi_raw = narrow.domain_raw
        assert all(narrow.evaluate(FixedValue(r, q12_6)).raw > 0 for r in range(lo_raw, hi_raw + 1))
        xs = np.linspace(-1, 1, 10001)[1:-1]
        assert np.all(wide.evaluate_real(xs) > 0)

    def test_open_domain_and_clamp(self, factory, q16_15):
        kernel = factory.create("taylor2", q16_15)
        assert isinstance(kernel, TaylorKernel)
        assert kernel.domain_raw == (-32767, 32767)
        clamped, hit = kernel.clamp(FixedValue(-32768, q16_15))
        assert (clamped.raw, hit) == (-32767, True)
        unchanged, hit = kernel.clamp(FixedValue(100, q16_15))
        assert (unchanged.raw, hit) == (100, False)
        values, count = kernel.clamp_real(np.array([-1.0, 0.0, 0.5]))
        assert count == 1
        assert values[0] == -1 + 2 ** -15

    def test_operand_format_checked(self, factory, q16_15, q12_6):
        kernel = factory.create("taylor1", q16_15)
        with pytest.raises(FormatMismatchError):
            kernel.evaluate(FixedValue(0, q12_6))


class TestLutConstruction:
    def test_index_map(self, q16_15):
        table = build_lut(_lut_spec(q16_15, segments=64))
        assert (table.shift_amount, table.bias) == (10, 32768)
        assert segment_index(FixedValue(0, q16_15), table.index_map) == 32
        for raw in q16_15.raw_values():
            assert table.index_map.index(raw) == ((raw + 32768) * 64) // 65536

    def test_index_array_matches_scalar(self, q12_6):
        table = build_lut(_lut_spec(q12_6, segments=16))
        raws = np.arange(q12_6.raw_min, q12_6.raw_max + 1)
        assert list(table.index_map.index_array(raws)) == [table.index_map.index(int(r)) for r in raws]

    def test_first_slope(self, q16_15):
        table = build_lut(_lut_spec(q16_15, segments=8))
        expected = (math.exp(-0.75) - math.exp(-1)) / 0.25
        assert table.coeffs_real[0][0] == pytest.approx(expected, rel=1e-12)
        assert table.segment_bounds(0) == (-1.0, -0.75)

    @pytest.mark.parametrize("degree", ["linear", "quadratic"])
    def test_interpolates_nodes(self, q16_15, degree):
        table = build_lut(_lut_spec(q16_15, degree, segments=16))
        nodes = np.array(table.nodes())
        assert len(nodes) == (17 if degree == "linear" else 33)
        np.testing.assert_allclose(table.eval_real(nodes), np.exp(nodes), rtol=1e-12, atol=0)

    def test_linear_method_error_bound(self, q16_15):
        table = build_lut(_lut_spec(q16_15, segments=64))
        xs = np.linspace(-1, 1, 1_000_001)[:-1]
        h = 2 / 64
        assert np.max(np.abs(table.eval_real(xs) - np.exp(xs))) <= h ** 2 / 8 * math.e

    def test_quadratic_beats_linear(self, q16_15):
        xs = np.linspace(-1, 1, 100_001)[:-1]
        errors = {
            degree: np.max(np.abs(build_lut(_lut_spec(q16_15, degree, 16)).eval_real(xs) - np.exp(xs)))
            for degree in ("linear", "quadratic")
        }
        assert errors["quadratic"] < errors["linear"]

    def test_coefficient_overflow(self, q16_15):
        with pytest.raises(CoefficientRangeError) as info:
            build_lut(_lut_spec(q16_15, segments=8, work_format=q16_15))
        assert info.value.required_int_bits == 2

    @pytest.mark.parametrize("domain", [(-1.0, 0.3), (-1.0, 0.5)])
    def test_unindexable_domain(self, q16_15, domain):
        with pytest.raises(ConfigurationError):
            build_lut(_lut_spec(q16_15, segments=8, domain=domain))

    def test_more_segments_than_raw_values(self):
        with pytest.raises(ConfigurationError):
            build_lut(_lut_spec(FixedFormat(8, 2), segments=16, domain=(-1.0, 1.0)))

    def test_rejects_non_lut_spec(self, q16_15):
        with pytest.raises(ConfigurationError):
            build_lut(ExpKernelSpec.parse("taylor1", q16_15))


class TestLutEvaluation:
    @staticmethod
    def _sweep(kernel, fmt):
        lo_raw, hi_raw = kernel.domain_raw
        return [kernel.evaluate(FixedValue(raw, fmt)).raw for raw in range(lo_raw, hi_raw + 1)]

    @pytest.mark.parametrize("segments", [8, 16, 32, 64])
    def test_linear_strictly_increasing_q12(self, factory, q12_6, segments):
        values = self._sweep(factory.create(f"lut-linear-{segments}", q12_6), q12_6)
        assert all(b > a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("segments", [8, 64])
    def test_anchored_linear_monotone(self, q16_15, segments):
        kernel = LutKernel(_lut_spec(q16_15, segments=segments), anchored=True)
        values = self._sweep(kernel, q16_15)
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_nearest_linear_steps_at_boundaries(self, factory, q16_15):
        # rounded coefficients of neighbouring segments disagree by at most one step
        values = self._sweep(factory.create("lut-linear-64", q16_15), q16_15)
        assert min(b - a for a, b in zip(values, values[1:])) >= -1

    def test_out_of_table_operands_are_flagged(self, q16_15):
        table = build_lut(_lut_spec(q16_15, segments=8, domain=(-0.5, 0.5)))
        inside, clamped = lut_lookup(FixedValue(0, q16_15), table)
        assert (inside.real, clamped) == (1.0, False)
        below, clamped = lut_lookup(quantize(-0.75, q16_15), table)
        assert clamped
        assert below == eval_lut_exp(quantize(-0.75, q16_15), table)
        assert locate_segment(quantize(0.75, q16_15), table.index_map) == (7, True)
        assert locate_segment(quantize(0.49, q16_15), table.index_map) == (7, False)

    def test_domain_is_half_open(self, factory, q16_15):
        kernel = factory.create("lut-linear-64", q16_15)
        assert isinstance(kernel, LutKernel)
        assert kernel.domain_raw == (-32768, 32767)

    @pytest.mark.parametrize("degree", ["linear", "quadratic"])
    def test_fixed_point_tracks_real(self, factory, q16_15, degree):
        kernel = factory.create(f"lut-{degree}-64", q16_15)
        raws = range(-32768, 32768, 37)
        fixed = np.array([eval_lut_exp(FixedValue(r, q16_15), kernel.table).real for r in raws])
        real = kernel.evaluate_real(np.array([r / 32768 for r in raws]))
        assert np.max(np.abs(fixed - real)) <= 2 ** -11

    def test_exact_at_zero(self, factory, q16_15):
        kernel = factory.create("lut-linear-64", q16_15)
        assert kernel.evaluate(FixedValue(0, q16_15)).raw == 8192

    def test_wrong_operand_format(self, q16_15, q12_6):
        table = build_lut(_lut_spec(q16_15, segments=8))
        with pytest.raises(ConfigurationError):
            eval_lut_exp(FixedValue(0, q12_6), table)


class TestErrorOrdering:
    def test_max_method_error(self, factory, q16_15):
        xs = np.linspace(-1, 1, 20_001)[1:-1]
        names = ["lut-quadratic-64", "lut-linear-64", "taylor3", "taylor2", "taylor1"]
        errors = [
            np.max(np.abs(factory.create(name, q16_15).evaluate_real(xs) - np.exp(xs)))
            for name in names
        ]
        assert errors == sorted(errors)

    def test_factory_reuses_kernels(self, factory, q16_15):
        assert factory.create("lut-linear-64", q16_15) is factory.create("lut-linear-64", q16_15)
        assert factory.create("taylor1", q16_15) is not factory.create("taylor2", q16_15)

    def test_factory_needs_format(self, factory):
        with pytest.raises(ConfigurationError):
            factory.create("taylor1")
