import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthcalc import lixnum
from growthcalc.lixnum import DomainError, LIReal
from growthcalc.xihier import BASE, BASE_XI, XiHierarchy, default_hierarchy


@pytest.fixture(scope="module")
def hier():
    return default_hierarchy()


class TestLowLevels:
    def test_level_0_1_2(self, hier):
        assert hier.xi_k(0, 10.0) == pytest.approx(10.0 - math.e)
        assert hier.xi_k(1, 10.0) == pytest.approx(10.0 / math.e)
        assert hier.xi_k(2, 10.0) == pytest.approx(math.log(10.0))

    def test_level_3_is_exact_super_logarithm(self, hier):
        assert hier.xi_k(3, LIReal(7, 0.25)) == Fraction(7) + Fraction(0.25)

    def test_inverses_roundtrip(self, hier):
        for k in range(0, 7):
            t = 2.3
            v = hier.xi_k_inv(k, t)
            assert float(hier.xi_k(k, v)) == pytest.approx(t, abs=1e-9)


class TestNormalization:
    def test_base_point(self, hier):
        for k in range(4, 8):
            assert float(hier.xi_k(k, BASE)) == pytest.approx(BASE_XI)

    def test_top_of_fundamental_domain(self, hier):
        # xi_k(e) = 2 for every level >= 4: one pullback step lands on 2
        for k in range(4, 8):
            assert float(hier.xi_k(k, math.e)) == pytest.approx(2.0, abs=1e-12)

    def test_below_base_rejected(self, hier):
        with pytest.raises(DomainError):
            hier.xi_k(4, 1.5)

    def test_strictly_increasing_across_domain_seam(self, hier):
        xs = [2.0 + 0.2 * i for i in range(30)]
        vals = [float(hier.xi_k(4, x)) for x in xs]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_level_5_on_level_4_value(self, hier):
        # xi_5(xi_4^{-1}(t)) = xi_5(x) + ... counts xi_4 steps
        x = hier.xi_k_inv(4, 3.25)
        assert float(hier.xi_k(4, x)) == pytest.approx(3.25, abs=1e-9)

    def test_tower_argument(self, hier):
        v = float(hier.xi_k(4, LIReal(30, 0.5)))
        # xi(tower of level 30) = 30.5, and xi_4 of a value with xi = t
        # is 1 + xi_4 of t pulled down; just pin monotonicity + range
        w = float(hier.xi_k(4, LIReal(60, 0.5)))
        assert w > v > 2.0

    def test_huge_integer_level_argument(self, hier):
        # levels far past the float range flow through the exact branch
        v = float(hier.xi_k(4, LIReal(10 ** 120, 0.5)))
        w = float(hier.xi_k(4, LIReal(10 ** 240, 0.5)))
        assert w > v > 2.0


class TestChi:
    def test_band_value(self, hier):
        assert hier.chi(0.5) == 1.0

    @given(st.floats(min_value=1.2, max_value=500.0))
    @settings(max_examples=60)
    def test_recursion_property(self, x):
        hier = default_hierarchy()
        assert hier.chi(x) == pytest.approx(x * hier.chi(math.log(x)),
                                            rel=1e-12)

    def test_recursion_samples(self, hier):
        for x in (1.5, 3.0, 10.0, 200.0, 1e5, 1e12):
            assert hier.chi(x) == pytest.approx(x * hier.chi(math.log(x)),
                                                rel=1e-12)

    def test_matches_explicit_product(self, hier):
        # chi(x) = x log x log_2 x ... down into [0, 1]
        x = 1e8
        explicit, t = x, math.log(x)
        while t > 1.0:
            explicit *= t
            t = math.log(t)
        assert hier.chi(x) == pytest.approx(explicit, rel=1e-12)

    def test_tower_output_is_li(self, hier):
        out = hier.chi(LIReal(8, 0.5))
        assert isinstance(out, LIReal)

    def test_negative_rejected(self, hier):
        with pytest.raises(DomainError):
            hier.chi(-1.0)


class TestHk:
    def test_h2_is_identity(self, hier):
        assert hier.H_k(2, 17.5) == 17.5

    def test_h3_is_chi(self, hier):
        assert hier.H_k(3, 40.0) == hier.chi(40.0)

    def test_h4_matches_derivative_reciprocal(self, hier):
        x = 50.0
        h = 1e-4 * x
        d = (float(hier.xi_k(4, x + h)) - float(hier.xi_k(4, x - h))) / (2 * h)
        assert hier.H_k(4, x) == pytest.approx(1.0 / d, rel=1e-3)

    def test_below_two_rejected(self, hier):
        with pytest.raises(DomainError):
            hier.H_k(1, 10.0)


class TestConstruction:
    def test_max_level_guard(self):
        with pytest.raises(ValueError):
            XiHierarchy(max_level=2)

    def test_level_out_of_range(self, hier):
        with pytest.raises(DomainError):
            hier.xi_k(99, 5.0)

    def test_default_is_shared(self):
        assert default_hierarchy() is default_hierarchy()
