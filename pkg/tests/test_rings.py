# Copyright 2026 The novikov-cubes Developers

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#     http://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Tests for coefficient rings and Laurent polynomials"""
from fractions import Fraction

import pytest

from novikov_cubes.exceptions import DomainError, ParseError, StructuralError
from novikov_cubes.rings import CoefficientRing, LaurentPolynomial, LaurentRing, random_points

from conftest import F5, L1, L2, QQ, ZZ, random_element


class TestCoefficientRing:
    """Unit tests for the scalar rings"""

    @pytest.mark.parametrize("text, ring", [("ZZ", ZZ), ("QQ", QQ), ("ZZ/5", F5), (" ZZ/12 ", CoefficientRing.integers_mod(12))])
    def test_parse(self, text, ring):
        """Test that ring names parse"""
        assert CoefficientRing.parse(text) == ring

    @pytest.mark.parametrize("text", ["Z", "ZZ/", "ZZ/x", "RR"])
    def test_parse_rejects(self, text):
        """Test that unknown ring names raise"""
        with pytest.raises(ParseError):
            CoefficientRing.parse(text)

    def test_modulus_bounds(self):
        """Test that moduli below two are rejected"""
        with pytest.raises(ValueError, match="at least 2"):
            CoefficientRing.integers_mod(1)

    @pytest.mark.parametrize("ring, value, unit", [(ZZ, -1, True), (ZZ, 2, False), (QQ, Fraction(2, 3), True), (F5, 3, True), (CoefficientRing.integers_mod(6), 3, False)])
    def test_units(self, ring, value, unit):
        """Test that units are recognised"""
        assert ring.is_unit(value) is unit

    def test_inverse_mod(self):
        """Test that inverses modulo a prime multiply to one"""
        assert F5.inverse(2) * 2 % 5 == 1

    def test_rational_coercion_mod(self):
        """Test that a fraction with invertible denominator reduces modulo m"""
        assert F5(Fraction(1, 2)) == 3
        with pytest.raises(DomainError):
            CoefficientRing.integers_mod(4)(Fraction(1, 2))

    def test_field_and_pid(self):
        """Test that the field and PID flags follow the modulus"""
        assert F5.is_field and F5.is_pid
        assert ZZ.is_pid and not ZZ.is_field
        assert not CoefficientRing.integers_mod(6).is_pid


class TestLaurentPolynomial:
    """Arithmetic of Laurent polynomials"""

    def test_arithmetic(self):
        """Test that (x - 1)(x + 1) = x^2 - 1"""
        x = L1.variable(1)
        assert (x - 1) * (x + 1) == x ** 2 - 1

    def test_negative_power(self):
        """Test that negative powers of monomials invert"""
        x = L1.variable(1)
        assert x ** -2 * x ** 2 == L1.one
        with pytest.raises(DomainError):
            (x - 1) ** -1

    def test_monomial_unit(self):
        """Test that only unit multiples of monomials are units"""
        assert L2.monomial((1, -2), -1).is_monomial_unit() == ((1, -2), -1)
        assert L2.monomial((1, 0), 2).is_monomial_unit() is None
        assert (L2.variable(1) + 1).is_monomial_unit() is None

    @pytest.mark.parametrize("text", ["x1 - 1", "-2*x1^-1 + 3/2*x2", "x1*x2^3 - x1^-1*x2^-1 + 4"])
    def test_parse_print(self, text):
        """Test that printing reproduces a parsed polynomial"""
        ring = LaurentRing(QQ, 2)
        poly = LaurentPolynomial.parse(text, ring)
        assert LaurentPolynomial.parse(str(poly), ring) == poly

    def test_parse_values(self):
        """Test that parsing collects exponents and coefficients"""
        poly = LaurentPolynomial.parse("3*x1^-2*x2 - x2 + 2", L2)
        assert poly.coefficient((-2, 1)) == 3
        assert poly.coefficient((0, 1)) == -1
        assert poly.coefficient((0, 0)) == 2

    @pytest.mark.parametrize("text", ["", "x3", "2*y", "x1^"])
    def test_parse_rejects(self, text):
        """Test that malformed polynomials raise"""
        with pytest.raises(ParseError):
            LaurentPolynomial.parse(text, L2)

    def test_ring_mismatch(self):
        """Test that polynomials over different rings do not mix"""
        with pytest.raises(StructuralError):
            L1.variable(1) + L2.variable(1)

    def test_mod_arithmetic(self):
        """Test that coefficients reduce modulo m"""
        ring = LaurentRing(F5, 1)
        x = ring.variable(1)
        assert (x * 3 + x * 2) == ring.zero


class TestRingMaps:
    """Specialization, substitution and embeddings"""

    def test_specialize_integer_point(self):
        """Test that evaluation at ±1 stays in the integers"""
        poly = LaurentPolynomial.parse("x1^2 - 3*x1^-1 + x2", L2)
        assert poly.specialize((-1, 1)) == 1 + 3 + 1

    def test_specialize_rational(self):
        """Test that evaluation at other points happens over the rationals"""
        poly = L1.variable(1) - 1
        assert poly.specialize((Fraction(1, 2),)) == Fraction(-1, 2)

    def test_specialize_rejects_zero(self):
        """Test that zero is not a unit point"""
        with pytest.raises(DomainError):
            (L1.variable(1) + 1).specialize((0,))

    def test_specialization_is_ring_map(self, rng):
        """Test that evaluation respects products"""
        for point in random_points(2, 10, rng):
            f, g = random_element(L2, rng), random_element(L2, rng)
            assert (f * g).specialize(point) == f.specialize(point) * g.specialize(point)

    def test_evaluate_variables(self):
        """Test that partial evaluation keeps the remaining variables"""
        poly = LaurentPolynomial.parse("x1*x2 + x2^-1", L2)
        result = poly.evaluate_variables({2: 1}, L1)
        assert result == L1.variable(1) + 1

    def test_embed(self):
        """Test that embedding shifts variables"""
        ring = LaurentRing(ZZ, 3)
        assert (L1.variable(1) - 1).embed(ring, 2) == ring.variable(3) - 1

    def test_map_exponents(self):
        """Test that monomial maps collect terms"""
        poly = L2.variable(1) + L2.variable(2)
        collapsed = poly.map_exponents(lambda e: (e[0] + e[1],), L1)
        assert collapsed == L1.variable(1) * 2

    def test_random_points(self, rng):
        """Test that random points avoid zero and excluded values"""
        for point in random_points(3, 30, rng, bound=2, exclude=[1]):
            assert all(v != 0 and v != 1 and abs(v) <= 2 for v in point)
