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
"""
Exact coefficient rings and sparse multivariate Laurent polynomials.

A :class:`LaurentRing` with ``nvars = 0`` is the coefficient ring itself, so
every matrix entry in the package is a :class:`LaurentPolynomial`.
"""
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from sympy import isprime

from .exceptions import DomainError, ParseError, StructuralError

logger = logging.getLogger(__name__)

_KINDS = ("ZZ", "QQ", "ZZ/m")


@dataclass(frozen=True)
class CoefficientRing:
    """One of the integers, the rationals or the integers modulo ``m``.

    Elements are plain Python ``int`` (integers and residues in ``0..m-1``)
    or :class:`fractions.Fraction` (rationals).
    """

    kind: str
    modulus: int = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"Unknown coefficient ring kind {self.kind!r}; expected one of {_KINDS}")
        if self.kind == "ZZ/m" and (self.modulus is None or self.modulus < 2):
            raise ValueError(f"Modulus must be at least 2, got {self.modulus}")
        if self.kind != "ZZ/m" and self.modulus is not None:
            raise ValueError(f"Ring {self.kind} takes no modulus")

    @classmethod
    def integers(cls):
        return cls("ZZ")

    @classmethod
    def rationals(cls):
        return cls("QQ")

    @classmethod
    def integers_mod(cls, m):
        return cls("ZZ/m", int(m))

    @classmethod
    def parse(cls, text):
        """Parse ``"ZZ"``, ``"QQ"`` or ``"ZZ/m"``."""
        text = text.strip()
        if text in ("ZZ", "QQ"):
            return cls(text)
        match = re.fullmatch(r"ZZ/(\d+)", text)
        if match is None:
            raise ParseError(f"Cannot parse coefficient ring {text!r}")
        return cls.integers_mod(int(match.group(1)))

    def __str__(self):
        if self.kind == "ZZ/m":
            return f"ZZ/{self.modulus}"
        return self.kind

    @cached_property
    def is_field(self):
        return self.kind == "QQ" or (self.kind == "ZZ/m" and isprime(self.modulus))

    @property
    def is_pid(self):
        return self.kind == "ZZ" or self.is_field

    @property
    def is_domain(self):
        return self.is_pid

    @property
    def zero(self):
        return Fraction(0) if self.kind == "QQ" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "QQ" else 1

    def __call__(self, value):
        """Coerce ``value`` (int, Fraction or numeric string) into canonical form."""
        if isinstance(value, str):
            try:
                value = Fraction(value.strip())
            except ValueError as exc:
                raise ParseError(f"Cannot parse scalar {value!r}") from exc
        if self.kind == "ZZ":
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise DomainError(f"{value} is not an integer")
                return value.numerator
            return int(value)
        if self.kind == "QQ":
            return Fraction(value)
        m = self.modulus
        if isinstance(value, Fraction):
            if math.gcd(value.denominator, m) != 1:
                raise DomainError(f"Denominator of {value} is not invertible modulo {m}")
            return value.numerator * pow(value.denominator, -1, m) % m
        return int(value) % m

    def reduce(self, value):
        """Canonical representative of a value produced by Python arithmetic."""
        if self.kind == "ZZ/m":
            return value % self.modulus
        return value

    def is_unit(self, value):
        if self.kind == "ZZ":
            return value in (1, -1)
        if self.kind == "QQ":
            return value != 0
        return math.gcd(value, self.modulus) == 1

    def inverse(self, value):
        if not self.is_unit(value):
            raise DomainError(f"{value} is not a unit in {self}")
        if self.kind == "ZZ":
            return value
        if self.kind == "QQ":
            return 1 / Fraction(value)
        return pow(value, -1, self.modulus)

    def is_negative(self, value):
        """Whether the printed form of ``value`` carries a minus sign."""
        return self.kind != "ZZ/m" and value < 0

    def format(self, value):
        return str(value)


@dataclass(frozen=True)
class LaurentRing:
    """The ring ``R[x1^{±1}, ..., xn^{±1}]`` over a :class:`CoefficientRing`."""

    base: CoefficientRing
    nvars: int = 0

    def __post_init__(self):
        if self.nvars < 0:
            raise ValueError(f"Variable count must be nonnegative, got {self.nvars}")

    def __str__(self):
        if not self.nvars:
            return str(self.base)
        names = ",".join(f"x{k}^±" for k in range(1, self.nvars + 1))
        return f"{self.base}[{names}]"

    def __call__(self, value):
        if isinstance(value, LaurentPolynomial):
            if value.ring != self:
                raise StructuralError(f"Polynomial over {value.ring} used where {self} was expected")
            return value
        if isinstance(value, str):
            return LaurentPolynomial.parse(value, self)
        return self.constant(value)

    @property
    def zero_exponent(self):
        return (0,) * self.nvars

    @property
    def zero(self):
        return LaurentPolynomial(self, {})

    @property
    def one(self):
        return self.constant(1)

    def constant(self, value):
        return self.monomial(self.zero_exponent, value)

    def monomial(self, exponent, coefficient=1):
        exponent = tuple(int(a) for a in exponent)
        if len(exponent) != self.nvars:
            raise StructuralError(
                f"Exponent {exponent} has length {len(exponent)}, ring has {self.nvars} variables"
            )
        return LaurentPolynomial(self, {exponent: coefficient})

    def variable(self, k):
        """The variable ``x_k`` (1-based)."""
        if not 1 <= k <= self.nvars:
            raise StructuralError(f"Variable x{k} does not exist in {self}")
        exponent = [0] * self.nvars
        exponent[k - 1] = 1
        return self.monomial(exponent)

    def with_variables(self, nvars):
        return LaurentRing(self.base, nvars)

    def with_base(self, base):
        return LaurentRing(base, self.nvars)


class LaurentPolynomial:
    """Finitely supported map from exponent vectors to nonzero coefficients.

    Instances are immutable; arithmetic returns new polynomials in canonical
    form (no stored zero coefficient).
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms=None):
        base = ring.base
        canonical = {}
        for exponent, coefficient in (terms or {}).items():
            exponent = tuple(exponent)
            if len(exponent) != ring.nvars:
                raise StructuralError(
                    f"Exponent {exponent} does not match the {ring.nvars} variables of {ring}"
                )
            value = base(coefficient)
            if value:
                canonical[exponent] = value
        self.ring = ring
        self.terms = canonical
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        poly = cls.__new__(cls)
        poly.ring = ring
        poly.terms = terms
        poly._hash = None
        return poly

    # ------------------------------------------------------------------
    # basic protocol

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.ring != self.ring:
                raise StructuralError(f"Ring mismatch: {self.ring} and {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"LaurentPolynomial({str(self)!r}, {self.ring})"

    def __str__(self):
        if not self.terms:
            return "0"
        base = self.ring.base
        pieces = []
        for exponent in sorted(self.terms):
            coefficient = self.terms[exponent]
            negative = base.is_negative(coefficient)
            magnitude = -coefficient if negative else coefficient
            monomial = "*".join(
                f"x{k}" if a == 1 else f"x{k}^{a}"
                for k, a in enumerate(exponent, start=1)
                if a != 0
            )
            if not monomial:
                body = base.format(magnitude)
            elif magnitude == 1:
                body = monomial
            else:
                body = f"{base.format(magnitude)}*{monomial}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    # ------------------------------------------------------------------
    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        base = self.ring.base
        terms = dict(self.terms)
        for exponent, coefficient in other.terms.items():
            value = base.reduce(terms.get(exponent, 0) + coefficient)
            if value:
                terms[exponent] = value
            else:
                terms.pop(exponent, None)
        return LaurentPolynomial._raw(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        base = self.ring.base
        return LaurentPolynomial._raw(
            self.ring, {e: base.reduce(-c) for e, c in self.terms.items()}
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        base = self.ring.base
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exponent = tuple(a + b for a, b in zip(e1, e2))
                terms[exponent] = terms.get(exponent, 0) + c1 * c2
        terms = {e: v for e, v in ((e, base.reduce(c)) for e, c in terms.items()) if v}
        return LaurentPolynomial._raw(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one
        for _ in range(k):
            result = result * self
        return result

    def scale(self, scalar):
        base = self.ring.base
        scalar = base(scalar)
        terms = {e: base.reduce(c * scalar) for e, c in self.terms.items()}
        return LaurentPolynomial._raw(self.ring, {e: c for e, c in terms.items() if c})

    def shift(self, exponent):
        """Multiply by the monomial ``x^exponent``."""
        return LaurentPolynomial._raw(
            self.ring,
            {tuple(a + b for a, b in zip(e, exponent)): c for e, c in self.terms.items()},
        )

    def inverse(self):
        unit = self.is_monomial_unit()
        if unit is None:
            raise DomainError(f"{self} is not a unit of {self.ring}")
        exponent, coefficient = unit
        return self.ring.monomial(tuple(-a for a in exponent), self.ring.base.inverse(coefficient))

    # ------------------------------------------------------------------
    # queries

    @property
    def support(self):
        return frozenset(self.terms)

    def coefficient(self, exponent):
        return self.terms.get(tuple(exponent), self.ring.base.zero)

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        """The scalar of a constant polynomial."""
        if not self.is_constant():
            raise DomainError(f"{self} is not constant")
        return self.terms.get(self.ring.zero_exponent, self.ring.base.zero)

    def is_monomial_unit(self):
        """``(exponent, coefficient)`` if this is a unit coefficient times a monomial."""
        if len(self.terms) != 1:
            return None
        (exponent, coefficient), = self.terms.items()
        if not self.ring.base.is_unit(coefficient):
            return None
        return exponent, coefficient

    # ------------------------------------------------------------------
    # ring maps

    def specialize(self, point):
        """Evaluate at a point of units; returns a scalar.

        Over the integers, points with entries other than ±1 evaluate in the
        rationals.
        """
        target = specialization_ring(self.ring, point)
        values = _coerce_point(target, point)
        total = target.zero
        for exponent, coefficient in self.terms.items():
            term = target(coefficient)
            for value, a in zip(values, exponent):
                term = target.reduce(term * _power(target, value, a))
            total = target.reduce(total + term)
        return total

    def evaluate_variables(self, assignment, ring):
        """Substitute the scalars ``assignment[k]`` (1-based keys) for some
        variables and keep the others, in order, as the variables of ``ring``.
        """
        keep = [k for k in range(1, self.ring.nvars + 1) if k not in assignment]
        if len(keep) != ring.nvars:
            raise StructuralError(f"{ring} cannot hold the {len(keep)} remaining variables")
        target = ring.base
        values = {k: target(v) for k, v in assignment.items()}
        for k, v in values.items():
            if not target.is_unit(v):
                raise DomainError(f"x{k} = {v} is not a unit in {target}")
        terms = {}
        for exponent, coefficient in self.terms.items():
            value = target(coefficient)
            for k, v in values.items():
                value = target.reduce(value * _power(target, v, exponent[k - 1]))
            key = tuple(exponent[k - 1] for k in keep)
            terms[key] = target.reduce(terms.get(key, 0) + value)
        return LaurentPolynomial(ring, terms)

    def embed(self, ring, offset=0):
        """Image under ``x_k -> x_{k+offset}`` in a ring with more variables."""
        if ring.base != self.ring.base or offset + self.ring.nvars > ring.nvars:
            raise StructuralError(f"Cannot embed {self.ring} into {ring} at offset {offset}")
        pad_left = (0,) * offset
        pad_right = (0,) * (ring.nvars - offset - self.ring.nvars)
        return LaurentPolynomial._raw(
            ring, {pad_left + e + pad_right: c for e, c in self.terms.items()}
        )

    def map_exponents(self, fn, ring):
        """Monomial ring map ``x^e -> x^fn(e)`` into ``ring``."""
        base = ring.base
        terms = {}
        for exponent, coefficient in self.terms.items():
            key = tuple(fn(exponent))
            terms[key] = base.reduce(terms.get(key, 0) + base(coefficient))
        return LaurentPolynomial._raw(ring, {e: c for e, c in terms.items() if c})

    def change_base(self, ring):
        """Reduce or extend the coefficients into ``ring`` (same variables)."""
        return LaurentPolynomial(ring, self.terms)

    # ------------------------------------------------------------------
    # text form

    _TOKEN = re.compile(r"(?<![\^])\s*([+-])\s*")
    _FACTOR = re.compile(r"x(\d+)(?:\^(-?\d+))?")
    _SCALAR = re.compile(r"\d+(?:/\d+)?")

    @classmethod
    def parse(cls, text, ring):
        """Parse the textual form ``coeff*x1^a1*...*xn^an +/- ...``."""
        source = text.strip()
        if not source:
            raise ParseError("Empty polynomial")
        parts = cls._TOKEN.split(source)
        if parts[0] == "":
            parts = parts[1:]
        else:
            parts = ["+"] + parts
        if len(parts) % 2:
            raise ParseError(f"Cannot parse polynomial {text!r}")
        base = ring.base
        terms = {}
        for sign, body in zip(parts[0::2], parts[1::2]):
            coefficient = Fraction(1)
            exponent = [0] * ring.nvars
            for factor in body.split("*"):
                factor = factor.strip()
                if cls._SCALAR.fullmatch(factor):
                    coefficient *= Fraction(factor)
                    continue
                match = cls._FACTOR.fullmatch(factor)
                if match is None:
                    raise ParseError(f"Cannot parse factor {factor!r} in {text!r}")
                k = int(match.group(1))
                if not 1 <= k <= ring.nvars:
                    raise ParseError(f"Variable x{k} is not in {ring}")
                exponent[k - 1] += int(match.group(2) or 1)
            if sign == "-":
                coefficient = -coefficient
            key = tuple(exponent)
            terms[key] = base.reduce(terms.get(key, 0) + base(coefficient))
        return cls(ring, terms)


def _power(ring, value, exponent):
    if ring.kind == "ZZ/m":
        return pow(value, exponent, ring.modulus)
    if ring.kind == "ZZ":
        # the only integer units are 1 and -1
        return value ** abs(exponent)
    if exponent >= 0:
        return value ** exponent
    return Fraction(1) / Fraction(value) ** (-exponent)


def specialization_ring(ring, point):
    """Coefficient ring in which evaluation at ``point`` takes values."""
    if len(point) != ring.nvars:
        raise StructuralError(f"Point {tuple(point)} has the wrong length for {ring}")
    base = ring.base
    if base.kind == "ZZ" and not all(Fraction(v) in (1, -1) for v in point):
        return CoefficientRing.rationals()
    return base


def _coerce_point(target, point):
    values = []
    for k, v in enumerate(point, start=1):
        value = target(v)
        if not target.is_unit(value):
            raise DomainError(f"Coordinate x{k} = {v} is not a unit in {target}")
        values.append(value)
    return values


def random_points(nvars, count, rng, bound=9, exclude=()):
    """Random points with nonzero rational coordinates in ``[-bound, bound]``.

    Args:
        nvars (int): number of coordinates
        count (int): number of points
        rng (numpy.random.Generator): source of randomness
        bound (int): coordinates lie in ``[-bound, bound]``
        exclude (Iterable): values a coordinate must avoid, such as the roots
            of declared denominators

    Returns:
        list[tuple[Fraction]]: the points
    """
    excluded = {Fraction(v) for v in exclude} | {Fraction(0)}
    points = []
    while len(points) < count:
        denominator = int(rng.integers(1, 4))
        point = []
        while len(point) < nvars:
            value = Fraction(int(rng.integers(-bound * denominator, bound * denominator + 1)), denominator)
            if value not in excluded:
                point.append(value)
        points.append(tuple(point))
    return points
