import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthcalc import lixnum
from growthcalc.lixnum import DomainError, LIReal


mantissas = st.floats(min_value=0.0, max_value=1.0, exclude_max=True,
                      allow_nan=False)
levels = st.integers(min_value=0, max_value=100)


class TestRepresentation:
    def test_mantissa_range_enforced(self):
        with pytest.raises(DomainError):
            LIReal(2, 1.0)
        with pytest.raises(DomainError):
            LIReal(2, -0.1)

    def test_level_floor_enforced(self):
        with pytest.raises(DomainError):
            LIReal(-3, 0.5)

    def test_from_real_small_values(self):
        v = lixnum.from_real(0.25)
        assert v.level == 0 and v.mantissa == 0.25

    def test_from_real_log_chain(self):
        # 10 -> ln 10 = 2.302.. -> ln(2.302..) = 0.834..: level 2
        v = lixnum.from_real(10.0)
        assert v.level == 2
        assert v.mantissa == pytest.approx(math.log(math.log(10.0)))

    def test_from_real_rejects_negative(self):
        with pytest.raises(DomainError):
            lixnum.from_real(-1.0)

    def test_from_real_any_negative_goes_level_minus_one(self):
        v = lixnum.from_real_any(-2.0)
        assert v.level == -1
        assert lixnum.to_real(v) == pytest.approx(-2.0)

    @given(st.floats(min_value=1e-300, max_value=1e300))
    def test_roundtrip(self, d):
        assert lixnum.to_real(lixnum.from_real(d)) == pytest.approx(d, rel=1e-12)

    def test_to_real_overflow_is_domain_error(self):
        with pytest.raises(DomainError):
            lixnum.to_real(LIReal(7, 0.5))

    def test_formal_level_has_no_value(self):
        with pytest.raises(DomainError):
            lixnum.to_real(LIReal(-2, 0.5))


class TestExpLog:
    @given(levels, mantissas)
    def test_exp_is_exact_level_shift(self, k, m):
        v = LIReal(k, m)
        w = lixnum.exp_li(v)
        assert (w.level, w.mantissa) == (k + 1, m)

    @given(levels, mantissas)
    def test_ln_inverts_exp(self, k, m):
        v = LIReal(k, m)
        assert lixnum.ln_li(lixnum.exp_li(v)) == v

    def test_ln_stops_at_formal_floor(self):
        with pytest.raises(DomainError):
            lixnum.ln_li(LIReal(-2, 0.5))

    def test_exp_matches_float_exp_in_range(self):
        v = lixnum.from_real(3.0)
        assert lixnum.to_real(lixnum.exp_li(v)) == pytest.approx(math.exp(3.0))


class TestXiExact:
    @given(levels, mantissas)
    def test_shift_identity_exact(self, k, m):
        v = LIReal(k, m)
        assert lixnum.xi_exact(lixnum.exp_li(v)) - lixnum.xi_exact(v) == 1

    @given(levels, mantissas)
    def test_xi_inv_roundtrip_exact(self, k, m):
        v = LIReal(k, m)
        assert lixnum.xi_inv_exact(lixnum.xi_exact(v)) == v

    def test_huge_levels_stay_exact(self):
        v = LIReal(10 ** 500, 0.5)
        t = lixnum.xi_exact(v)
        assert t == Fraction(10 ** 500) + Fraction(0.5)
        assert lixnum.xi_inv_exact(t) == v

    def test_value_of_e_is_two(self):
        assert lixnum.xi_exact(lixnum.from_real(math.e)) == 2


class TestOrdering:
    @given(levels, mantissas, levels, mantissas)
    def test_order_is_lexicographic(self, k1, m1, k2, m2):
        a, b = LIReal(k1, m1), LIReal(k2, m2)
        assert (a < b) == ((k1, m1) < (k2, m2))

    def test_compare_against_floats(self):
        assert LIReal(2, 0.5) > 4.0
        assert LIReal(0, 0.25) < 1.0
        assert lixnum.from_real(7.0) <= 7.0


class TestArithmetic:
    def test_small_level_add_is_float_exact(self):
        a, b = lixnum.from_real(5.0), lixnum.from_real(3.0)
        assert lixnum.to_real(lixnum.add(a, b)) == pytest.approx(8.0)
        assert not lixnum.add(a, b).absorbed

    def test_small_level_sub_mul_div(self):
        a, b = lixnum.from_real(12.0), lixnum.from_real(3.0)
        assert lixnum.to_real(lixnum.sub(a, b)) == pytest.approx(9.0)
        assert lixnum.to_real(lixnum.mul(a, b)) == pytest.approx(36.0)
        assert lixnum.to_real(lixnum.div(a, b)) == pytest.approx(4.0)

    def test_sub_below_zero_rejected(self):
        with pytest.raises(DomainError):
            lixnum.sub(lixnum.from_real(1.0), lixnum.from_real(2.0))

    def test_deep_add_absorbs(self):
        big = LIReal(9, 0.3)
        out = lixnum.add(big, lixnum.from_real(1e10))
        assert out.level == 9 and out.mantissa == 0.3
        assert out.absorbed

    def test_tiny_relative_term_absorbs_even_at_low_level(self):
        a = lixnum.from_real(1e40)
        b = lixnum.from_real(1.0)
        out = lixnum.add(a, b)
        assert out.absorbed
        assert lixnum.to_real(out) == pytest.approx(1e40)

    def test_deep_mul_is_log_drop(self):
        # e^1000 * e^5: one log drop adds the exponents exactly in floats
        a = lixnum.exp_li(lixnum.from_real(1000.0))
        b = lixnum.exp_li(lixnum.from_real(5.0))
        out = lixnum.mul(a, b)
        assert lixnum.to_real(lixnum.ln_li(out)) == pytest.approx(1005.0)

    def test_div_by_zero_rejected(self):
        with pytest.raises(DomainError):
            lixnum.div(lixnum.from_real(1.0), lixnum.from_real(0.0))

    def test_arith_dispatch_and_unknown_op(self):
        a = lixnum.from_real(2.0)
        assert lixnum.arith("add", a, a) == lixnum.add(a, a)
        with pytest.raises(ValueError):
            lixnum.arith("pow", a, a)


class TestText:
    @given(levels, mantissas)
    @settings(max_examples=50)
    def test_format_parse_roundtrip(self, k, m):
        v = LIReal(k, m)
        assert lixnum.parse_li(lixnum.format_li(v)) == v

    def test_parse_rejects_garbage(self):
        with pytest.raises(DomainError):
            lixnum.parse_li("3:0.5")
        with pytest.raises(DomainError):
            lixnum.parse_li("Lx:y")
