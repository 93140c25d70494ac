"""Exact quadratic surds: arithmetic, signs, enclosures and text round-trips."""

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gappred.surd import Surd, enclose, exact_sign, format_exact, parse_exact, squarefree_split

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)
radicands = st.integers(min_value=2, max_value=200)


@st.composite
def surds(draw):
    return Surd(draw(rationals), draw(rationals), draw(radicands))


class TestConstruction:
    def test_squarefree_split(self):
        assert squarefree_split(76) == (2, 19)
        assert squarefree_split(16) == (4, 1)
        assert squarefree_split(7) == (1, 7)

    def test_perfect_squares_collapse(self):
        assert Surd.sqrt(16) == 4
        assert Surd.sqrt(F(9, 4)).is_rational
        assert Surd.sqrt(25) - 3 == 2

    def test_radicand_normalised(self):
        s = Surd.sqrt(76)
        assert (s.a, s.b, s.r) == (0, 2, 19)

    def test_rational_hash_matches_fraction(self):
        assert hash(Surd(F(1, 3))) == hash(F(1, 3))
        assert {Surd(F(1, 3)): 1}[F(1, 3)] == 1

    def test_negative_sqrt_rejected(self):
        with pytest.raises(ValueError):
            Surd.sqrt(-1)

    def test_mixed_radicands_rejected(self):
        with pytest.raises(ValueError):
            Surd.sqrt(2) + Surd.sqrt(3)


class TestArithmetic:
    def test_square_of_root(self):
        assert Surd.sqrt(2) * Surd.sqrt(2) == 2

    def test_division_by_conjugate(self):
        x = 1 + Surd.sqrt(2)
        assert x * (1 / x) == 1

    def test_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            Surd(0) / Surd(0)

    @given(surds(), surds())
    @settings(max_examples=200, deadline=None)
    def test_ring_laws(self, x, y):
        if x.r != y.r and not (x.is_rational or y.is_rational):
            return
        assert x + y == y + x
        assert x * y == y * x
        assert (x + y) - y == x

    @given(surds())
    @settings(max_examples=200, deadline=None)
    def test_reciprocal(self, x):
        if not x:
            return
        assert x * x.reciprocal() == 1


class TestSign:
    @given(surds())
    @settings(max_examples=300, deadline=None)
    def test_sign_agrees_with_float_away_from_zero(self, x):
        f = float(x)
        if abs(f) > 1e-9:
            assert exact_sign(x) == (1 if f > 0 else -1)

    def test_close_to_zero(self):
        # 99/70 is a convergent of sqrt(2); the difference is about 7e-5.
        assert exact_sign(Surd.sqrt(2) - F(99, 70)) == -1
        assert exact_sign(Surd.sqrt(2) - F(140, 99)) == 1

    def test_ordering_with_fractions(self):
        assert Surd.sqrt(2) < F(3, 2)
        assert F(7, 5) < Surd.sqrt(2)
        assert max([F(1), Surd.sqrt(3), F(3, 2)]) == Surd.sqrt(3)


class TestInterval:
    @given(surds(), st.integers(min_value=1, max_value=15))
    @settings(max_examples=200, deadline=None)
    def test_enclosure_contains_value(self, x, digits):
        width = F(1, 10**digits)
        lo, hi = enclose(x, width)
        assert hi - lo <= width
        assert lo <= x <= hi

    def test_rational_is_point(self):
        assert enclose(F(2, 3)) == (F(2, 3), F(2, 3))

    def test_matches_math_sqrt(self):
        lo, hi = enclose(Surd.sqrt(2), F(1, 10**12))
        assert float(lo) <= math.sqrt(2) <= float(hi) + 1e-15


class TestText:
    @pytest.mark.parametrize("text", ["3/2", "-1/7", "2*sqrt(19)", "-1/2*sqrt(3)", "1/3+2/5*sqrt(7)", "-2"])
    def test_round_trip_examples(self, text):
        x = Surd.parse(text)
        assert Surd.parse(str(x)) == x

    @given(surds())
    @settings(max_examples=300, deadline=None)
    def test_round_trip(self, x):
        assert Surd.parse(str(x)) == x
        assert parse_exact(format_exact(x)) == x

    def test_no_zero_rational_part(self):
        assert str(Surd.sqrt(2)) == "1*sqrt(2)"
        assert str(Surd(F(1, 2), -1, 3)) == "1/2-1*sqrt(3)"

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            Surd.parse("sqrt(x)")
