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
Rational polyhedral cones, fans and truncated Novikov series.

Cones live in ``ℝ^n`` with integer generators; dual cones, faces and fan
checks are exact for ``n <= 3``. A Novikov ring ``R⟪τ⟫`` is attached to a
full-dimensional cone ``τ`` of exponents: its elements are series whose
support lies in a translate of ``τ``, graded by an integer weight ``φ`` that
vanishes on the lineality space of ``τ`` and is positive elsewhere on ``τ``.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from sympy import Matrix, ilcm, igcd

from .exceptions import DomainError, StructuralError, UnsupportedError
from .homalg import SparseMatrix, kernel_basis, matrix_rank, smith_normal_form, solve_linear
from .rings import CoefficientRing, LaurentPolynomial, LaurentRing

logger = logging.getLogger(__name__)

MAX_DIMENSION = 3


# ==========================================================
# integer vectors


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _primitive(vector):
    """Primitive integer vector on the ray of a rational vector."""
    entries = [x for x in vector]
    denominator = 1
    for x in entries:
        denominator = ilcm(denominator, getattr(x, "q", 1))
    ints = [int(x * denominator) for x in entries]
    g = 0
    for x in ints:
        g = igcd(g, x)
    if g == 0:
        return tuple(0 for _ in ints)
    return tuple(x // g for x in ints)


def _neg(v):
    return tuple(-a for a in v)


def _check_rank(n):
    if n > MAX_DIMENSION:
        raise UnsupportedError(f"Cone computations are implemented up to rank {MAX_DIMENSION}, got {n}")


def _dual_generators(generators, n):
    """Generators of ``{x : <x, g> >= 0 for all g}``: facet normals plus a
    ± basis of the orthogonal complement of the span."""
    _check_rank(n)
    if not generators:
        basis = [tuple(int(i == k) for i in range(n)) for k in range(n)]
        return basis + [_neg(v) for v in basis]
    G = Matrix(generators)
    d = G.rank()
    result = []
    for v in G.nullspace():
        p = _primitive(v)
        result.extend([p, _neg(p)])
    B = Matrix.hstack(*G.T.columnspace())
    seen = set()
    for S in itertools.combinations(range(len(generators)), d - 1):
        if S:
            GS = Matrix([generators[i] for i in S])
            if GS.rank() != d - 1:
                continue
            kernel = (GS * B).nullspace()
            if len(kernel) != 1:
                continue
            x = _primitive(B * kernel[0])
        else:
            x = _primitive(B[:, 0])
        pairings = [_dot(x, g) for g in generators]
        if all(p >= 0 for p in pairings):
            normal = x
        elif all(p <= 0 for p in pairings):
            normal = _neg(x)
        else:
            continue
        if normal not in seen:
            seen.add(normal)
            result.append(normal)
    return result


# ==========================================================
# cones


class Cone:
    """``cone{v_1, ..., v_l}``: nonnegative real combinations of integer vectors.

    Args:
        generators (iterable): integer vectors; zero vectors are dropped and
            the rest replaced by their primitive multiples
        n (int): ambient rank, needed when there are no generators
    """

    def __init__(self, generators, n=None):
        vectors = [tuple(int(a) for a in g) for g in generators]
        if n is None:
            if not vectors:
                raise StructuralError("The ambient rank of a cone without generators must be given")
            n = len(vectors[0])
        self.n = n
        gens = []
        for v in vectors:
            if len(v) != n:
                raise StructuralError(f"Generator {v} does not lie in rank {n}")
            if any(v):
                p = _primitive(v)
                if p not in gens:
                    gens.append(p)
        self.generators = tuple(gens)

    @classmethod
    def zero(cls, n):
        return cls([], n)

    @classmethod
    def orthant(cls, signs):
        """The cone spanned by ``s_i e_i`` for the nonzero entries of ``signs``."""
        n = len(signs)
        return cls([tuple(s if i == k else 0 for i in range(n)) for k, s in enumerate(signs) if s], n)

    def __repr__(self):
        return f"Cone({[list(g) for g in self.generators]}, n={self.n})"

    def __eq__(self, other):
        if not isinstance(other, Cone):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    @cached_property
    def dim(self):
        if not self.generators:
            return 0
        return Matrix(self.generators).rank()

    @cached_property
    def dual(self):
        return Cone(_dual_generators(list(self.generators), self.n), self.n)

    def contains(self, vector):
        return all(_dot(x, vector) >= 0 for x in self.dual.generators)

    def equals(self, other):
        return (
            self.n == other.n
            and all(other.contains(g) for g in self.generators)
            and all(self.contains(g) for g in other.generators)
        )

    @cached_property
    def cospan(self):
        return cospan(self)

    @property
    def is_pointed(self):
        return self.cospan[1] == 0

    def intersection(self, other):
        if self.n != other.n:
            raise StructuralError(f"Cones of ranks {self.n} and {other.n} do not meet")
        return Cone(self.dual.generators + other.dual.generators, self.n).dual

    def faces(self):
        """All faces, each once, starting with the cone itself."""
        normals = self.dual.generators
        result = []
        for k in range(len(normals) + 1):
            for T in itertools.combinations(normals, k):
                face = Cone([g for g in self.generators if all(_dot(x, g) == 0 for x in T)], self.n)
                if not any(face.equals(f) for f in result):
                    result.append(face)
        return result

    def facets(self):
        return [f for f in self.faces() if f.dim == self.dim - 1]

    def is_face_of(self, other):
        return any(self.equals(f) for f in other.faces())

    def rays(self):
        """Extreme rays of a pointed cone as primitive vectors."""
        return [f.generators[0] for f in self.faces() if f.dim == 1 and len(f.generators) == 1]

    def to_list(self):
        return [list(g) for g in self.generators]


def cospan(cone):
    """Integer basis of the lineality space ``σ ∩ -σ`` and its dimension."""
    normals = cone.dual.generators
    if not normals:
        basis = [tuple(int(i == k) for i in range(cone.n)) for k in range(cone.n)]
        return basis, cone.n
    kernel = kernel_basis(np.array([list(x) for x in normals], dtype=object), CoefficientRing.integers())
    basis = [tuple(int(a) for a in v) for v in kernel]
    return basis, len(basis)


def dual_cone(cone):
    return cone.dual


def _saturated(vectors, n):
    """Whether the integer vectors are independent and extend to a basis of ``ℤ^n``."""
    snf = smith_normal_form(np.array([list(v) for v in vectors], dtype=object), CoefficientRing.integers())
    return snf.rank == len(vectors) and all(abs(s) == 1 for s in snf.invariants)


def basis_inside_cone(cone, max_radius=12):
    """A basis of ``ℤ^n`` made of lattice points of a pointed full-dimensional cone.

    Candidates are searched by increasing box radius and coordinate sum; a
    partial choice is kept only while it extends to a lattice basis.
    """
    n = cone.n
    if cone.dim != n or not cone.is_pointed:
        raise DomainError(f"{cone} is not pointed and full-dimensional")
    if n == 0:
        return []
    for radius in range(1, max_radius + 1):
        candidates = [
            v
            for v in itertools.product(range(-radius, radius + 1), repeat=n)
            if any(v) and _primitive(v) == v and cone.contains(v)
        ]
        candidates.sort(key=lambda v: (sum(abs(a) for a in v), v))
        found = _extend_basis([], candidates, 0, n)
        if found is not None:
            return found
    raise UnsupportedError(f"No lattice basis inside {cone} with entries up to {max_radius}")


def _extend_basis(chosen, candidates, start, n):
    if len(chosen) == n:
        return chosen
    for index in range(start, len(candidates)):
        trial = chosen + [candidates[index]]
        if _saturated(trial, n):
            found = _extend_basis(trial, candidates, index + 1, n)
            if found is not None:
                return found
    return None


# ==========================================================
# fans


class Fan:
    """A finite collection of cones in ``N_ℝ``."""

    def __init__(self, cones, n=None):
        cones = list(cones)
        if n is None:
            if not cones:
                raise StructuralError("The rank of an empty fan must be given")
            n = cones[0].n
        for c in cones:
            if c.n != n:
                raise StructuralError(f"{c} does not lie in rank {n}")
        self.n = n
        self.cones = cones

    def __repr__(self):
        return f"Fan(n={self.n}, {len(self.cones)} cones)"

    @property
    def nonzero_cones(self):
        return [c for c in self.cones if c.generators]

    def to_dict(self):
        return {"n": self.n, "cones": [c.to_list() for c in self.cones]}

    @classmethod
    def from_dict(cls, data):
        n = int(data["n"])
        return cls([Cone(gens, n) for gens in data["cones"]], n)


def standard_fan(n):
    """Orthants of ``ℝ^n`` with all their faces."""
    cones = []
    for signs in itertools.product((-1, 0, 1), repeat=n):
        cones.append(Cone.orthant(signs))
    return Fan(cones, n)


def ray_fan():
    """``{0, ℝ≥0, ℝ≤0}`` in rank one."""
    return standard_fan(1)


@dataclass
class FanCheck:
    """Outcome of :func:`is_complete_fan` with the problems found."""

    complete: bool
    issues: list = field(default_factory=list)

    def __bool__(self):
        return self.complete

    def to_dict(self):
        return {"complete": self.complete, "issues": list(self.issues)}


def _member(cone, cones):
    return any(cone.equals(c) for c in cones)


def is_complete_fan(fan):
    """Check that a fan is made of pointed cones meeting in common faces and
    that it covers ``N_ℝ``.

    Coverage holds exactly when there is a full-dimensional cone and every
    facet of a full-dimensional cone is a facet of a second one.
    """
    _check_rank(fan.n)
    issues = []
    for c in fan.cones:
        if not c.is_pointed:
            issues.append(f"{c.to_list()} is not pointed")
    for first, second in itertools.combinations(fan.cones, 2):
        meet = first.intersection(second)
        if not (meet.is_face_of(first) and meet.is_face_of(second)):
            issues.append(f"{first.to_list()} and {second.to_list()} do not meet in a common face")
        elif not _member(meet, fan.cones):
            issues.append(f"the intersection {meet.to_list()} of {first.to_list()} and {second.to_list()} is missing")
    if fan.n == 0:
        if not _member(Cone.zero(0), fan.cones):
            issues.append("the zero cone is missing")
        return FanCheck(not issues, issues)
    full = [c for c in fan.cones if c.dim == fan.n]
    if not full:
        issues.append("no full-dimensional cone; N_R is not covered")
    for c in full:
        for facet in c.facets():
            if sum(1 for other in full if facet.is_face_of(other) and facet.dim == fan.n - 1) < 2:
                issues.append(f"the facet {facet.to_list()} of {c.to_list()} lies on the boundary of the support")
    if issues:
        logger.info("fan is not complete: %s", issues[0])
    return FanCheck(not issues, issues)


# ==========================================================
# Novikov rings


class NovikovContext:
    """Data of ``R⟪τ⟫`` for a full-dimensional cone ``τ`` of exponents.

    Args:
        tau (Cone): full-dimensional cone in ``M_ℝ``
        order (int): truncation order in weight degree
        weight (tuple): integer covector ``φ``; by default the sum of the
            generators of the dual cone

    Raises:
        DomainError: if ``τ`` is not full-dimensional or ``weight`` is not
            zero on the lineality space and positive on the rest of ``τ``
    """

    def __init__(self, tau, order=16, weight=None):
        if tau.dim != tau.n:
            raise DomainError(f"{tau} is not full-dimensional; pass the dual of a nonzero fan cone")
        self.tau = tau
        self.n = tau.n
        self.order = order
        self.cospan_basis, self.u = tau.cospan
        default = tuple(sum(g[i] for g in tau.dual.generators) for i in range(self.n))
        if weight is None:
            weight = default
        weight = tuple(int(a) for a in weight)
        if len(weight) != self.n:
            raise DomainError(f"Weight {weight} has length {len(weight)}, expected {self.n}")
        if any(_dot(weight, b) for b in self.cospan_basis):
            raise DomainError(f"Weight {weight} does not vanish on the lineality space of {tau}")
        if any(_dot(weight, g) <= 0 for g in tau.generators if _dot(default, g) > 0):
            raise DomainError(f"Weight {weight} is not positive on {tau} away from its lineality space")
        self.weight = weight

    def __repr__(self):
        return f"NovikovContext({self.tau!r}, order={self.order}, weight={self.weight})"

    def __eq__(self, other):
        if not isinstance(other, NovikovContext):
            return NotImplemented
        return self.tau.equals(other.tau) and self.weight == other.weight

    __hash__ = None

    def degree(self, exponent):
        return _dot(self.weight, exponent)

    @cached_property
    def adapted_basis(self):
        """Unimodular basis whose first ``u`` vectors span the lattice points of
        the lineality space and whose others map into the quotient cone."""
        normals = self.tau.dual.generators
        identity = [tuple(int(i == k) for i in range(self.n)) for k in range(self.n)]
        if self.u == 0:
            return basis_inside_cone(self.tau)
        if self.u == self.n:
            return identity
        snf = smith_normal_form(np.array([list(x) for x in normals], dtype=object), CoefficientRing.integers())
        V = Matrix(snf.V.tolist())
        r = snf.rank
        inverse = V.inv()

        def project(g):
            return tuple(int(a) for a in (inverse * Matrix(g))[:r])

        quotient = Cone([project(g) for g in self.tau.generators], r)
        lifted = [tuple(int(a) for a in V[:, :r] * Matrix(b)) for b in basis_inside_cone(quotient)]
        kernel = [tuple(int(a) for a in V[:, j]) for j in range(r, self.n)]
        return kernel + lifted

    def dominant_term(self, terms):
        """The unique term of least weight as ``(exponent, coefficient)``, or
        ``None`` when the least weight is attained twice."""
        if not terms:
            return None
        lowest = min(self.degree(e) for e in terms)
        minimal = [e for e in terms if self.degree(e) == lowest]
        if len(minimal) != 1:
            return None
        (e,) = minimal
        return e, terms[e]

    def unit_split(self, poly, base):
        found = self.dominant_term(poly.terms)
        if found is None:
            return None
        e, c = found
        if not base.is_unit(c):
            return None
        for other in poly.terms:
            if other != e and not self.tau.contains(tuple(a - b for a, b in zip(other, e))):
                return None
        return e, c


class NovikovSeries:
    """Truncated element of ``R⟪τ⟫``: the terms of weight below ``valid_order``.

    ``valid_order = None`` marks an exact (finite) series.
    """

    __slots__ = ("context", "base", "terms", "valid_order")

    def __init__(self, context, base, terms, valid_order=None):
        self.context = context
        self.base = base
        clean = {}
        for e, c in terms.items():
            e = tuple(int(a) for a in e)
            if len(e) != context.n:
                raise StructuralError(f"Exponent {e} does not lie in rank {context.n}")
            c = base.reduce(base(c))
            if c and (valid_order is None or context.degree(e) < valid_order):
                clean[e] = c
        self.terms = clean
        self.valid_order = valid_order

    @classmethod
    def from_polynomial(cls, context, poly):
        if poly.ring.nvars != context.n:
            raise StructuralError(f"{poly.ring} does not match a rank {context.n} cone")
        return cls(context, poly.ring.base, poly.terms)

    @classmethod
    def one(cls, context, base):
        return cls(context, base, {(0,) * context.n: 1})

    def __repr__(self):
        bound = "exact" if self.valid_order is None else f"weight < {self.valid_order}"
        return f"NovikovSeries({len(self.terms)} terms, {bound})"

    @property
    def is_exact(self):
        return self.valid_order is None

    @property
    def min_degree(self):
        if not self.terms:
            return None
        return min(self.context.degree(e) for e in self.terms)

    def _low(self):
        if self.terms:
            return self.min_degree
        return math.inf if self.valid_order is None else self.valid_order

    def truncated(self, order):
        valid = order if self.valid_order is None else min(order, self.valid_order)
        return NovikovSeries(self.context, self.base, self.terms, valid)

    def congruent(self, other, order):
        """Equality of all terms of weight below ``order``.

        Raises:
            DomainError: if either series is not known up to ``order``
        """
        for s in (self, other):
            if s.valid_order is not None and s.valid_order < order:
                raise DomainError(f"{s} is not known up to weight {order}")
        degree = self.context.degree
        mine = {e: c for e, c in self.terms.items() if degree(e) < order}
        theirs = {e: c for e, c in other.terms.items() if degree(e) < order}
        return mine == theirs

    def __mul__(self, other):
        return nov_mul(self, other)

    def to_polynomial(self, ring):
        """The known terms as a Laurent polynomial."""
        return LaurentPolynomial(ring, self.terms)

    def to_dict(self):
        return {
            "terms": [[list(e), str(c)] for e, c in sorted(self.terms.items())],
            "valid_order": self.valid_order,
        }


def nov_mul(f, g):
    """Product with validity ``min(v_f + low(g), v_g + low(f))``.

    Raises:
        StructuralError: for series of different contexts
    """
    if f.context != g.context or f.base != g.base:
        raise StructuralError("Novikov series of different rings cannot be multiplied")
    vf = math.inf if f.valid_order is None else f.valid_order
    vg = math.inf if g.valid_order is None else g.valid_order
    valid = min(vf + g._low(), vg + f._low())
    base = f.base
    terms = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            terms[e] = terms.get(e, 0) + c1 * c2
    return NovikovSeries(f.context, base, terms, None if valid == math.inf else int(valid))


def nov_invert(f):
    """Inverse of an exact series with a dominant unit term, to the context order.

    ``f = c x^e (1 - h)`` with ``h`` supported in ``τ`` at positive weight;
    the inverse ``c^{-1} x^{-e} Σ h^k`` is summed until the terms reach the
    context order. Returns ``None`` when no dominant unit term exists or
    ``f`` is only known up to a truncation.
    """
    context = f.context
    if not f.is_exact:
        return None
    base = f.base
    poly = LaurentPolynomial(LaurentRing(base, context.n), f.terms)
    split = context.unit_split(poly, base)
    if split is None:
        return None
    e, c = split
    c_inv = base.inverse(c)
    shift = context.degree(e)
    target = context.order + shift
    h_terms = {}
    for e2, c2 in f.terms.items():
        if e2 == e:
            continue
        key = tuple(a - b for a, b in zip(e2, e))
        h_terms[key] = base.reduce(-c2 * c_inv)
    h = NovikovSeries(context, base, h_terms)
    total = NovikovSeries(context, base, {(0,) * context.n: 1}, target)
    power = total
    while power.terms:
        power = NovikovSeries(context, base, nov_mul(power, h).terms, target)
        total = NovikovSeries(
            context,
            base,
            {k: total.terms.get(k, 0) + power.terms.get(k, 0) for k in set(total.terms) | set(power.terms)},
            target,
        )
    terms = {tuple(a - b for a, b in zip(k, e)): base.reduce(v * c_inv) for k, v in total.terms.items()}
    return NovikovSeries(context, base, terms, context.order)


# ==========================================================
# acyclicity


@dataclass
class PivotRecord:
    """A unit pivot of the elimination with its audited inverse."""

    degree: int
    row: int
    col: int
    pivot: object
    exponent: tuple
    coefficient: object
    audit: bool

    def to_dict(self):
        return {
            "degree": self.degree,
            "row": self.row,
            "col": self.col,
            "pivot": str(self.pivot),
            "dominant_exponent": list(self.exponent),
            "coefficient": str(self.coefficient),
            "audit": self.audit,
        }


@dataclass
class AcyclicCertified:
    cone: Cone
    order: int
    weight: tuple
    pivots: list = field(default_factory=list)

    status = "acyclic"

    def to_dict(self):
        return {
            "status": self.status,
            "cone": self.cone.to_list(),
            "order": self.order,
            "weight": list(self.weight),
            "pivots": [p.to_dict() for p in self.pivots],
        }


@dataclass
class NonacyclicCertified:
    """A cocycle with no preimage after collapsing ``x^e -> t^{φ(e)}``.

    The cocycle is a basis vector of the complex left after elimination over
    ``R((t))``, which is homotopy equivalent to the collapsed complex.
    """

    cone: Cone
    order: int
    weight: tuple
    degree: int
    cocycle: int
    leading_exponent: int = None
    system_shape: tuple = (0, 0)
    pivots: list = field(default_factory=list)

    status = "nonacyclic"

    def to_dict(self):
        return {
            "status": self.status,
            "cone": self.cone.to_list(),
            "order": self.order,
            "weight": list(self.weight),
            "degree": self.degree,
            "cocycle": self.cocycle,
            "leading_exponent": self.leading_exponent,
            "system_shape": list(self.system_shape),
            "pivots": [p.to_dict() for p in self.pivots],
        }


@dataclass
class Inconclusive:
    cone: Cone
    order: int
    weight: tuple
    remaining: dict = field(default_factory=dict)
    insufficient_audits: int = 0

    status = "inconclusive"

    def to_dict(self):
        return {
            "status": self.status,
            "cone": self.cone.to_list(),
            "order": self.order,
            "weight": list(self.weight),
            "remaining_ranks": {str(l): r for l, r in sorted(self.remaining.items())},
            "insufficient_audits": self.insufficient_audits,
        }


class _Reduction:
    """Fraction-free Gaussian elimination of a complex along unit entries.

    Eliminating a unit ``u = d^l_{ij}`` drops column ``j`` of ``d^l`` and row
    ``j`` of ``d^{l-1}``, row ``i`` of ``d^l`` and column ``i`` of ``d^{l+1}``,
    and replaces the rest of ``d^l`` by ``u D - c b``, which is ``u`` times the
    Schur complement.
    """

    def __init__(self, ring, ranks, blocks):
        self.ring = ring
        self.ranks = {l: r for l, r in ranks.items() if r}
        self.blocks = {l: b for l, b in blocks.items() if b.nrows and b.ncols}

    @classmethod
    def of(cls, complex_):
        return cls(complex_.ring, dict(complex_.ranks), {l: complex_.d(l) for l in complex_.ranks})

    def is_zero(self):
        return not self.ranks

    def find_pivot(self, split):
        for l in sorted(self.blocks):
            block = self.blocks[l]
            for (i, j), value in sorted(block.entries.items(), key=lambda kv: (len(kv[1].terms), kv[0])):
                found = split(value)
                if found is not None:
                    return l, i, j, value, found
        return None

    def eliminate(self, l, i, j):
        D = self.blocks[l]
        u = D[(i, j)]
        rows = [r for r in range(D.nrows) if r != i]
        cols = [s for s in range(D.ncols) if s != j]
        column = {r: D[(r, j)] for r in rows if (r, j) in D.entries}
        row = {s: D[(i, s)] for s in cols if (i, s) in D.entries}
        reduced = D.submatrix(rows, cols) * u
        row_pos = {r: a for a, r in enumerate(rows)}
        col_pos = {s: b for b, s in enumerate(cols)}
        outer = {(row_pos[r], col_pos[s]): c * b for r, c in column.items() for s, b in row.items()}
        self.blocks[l] = reduced - SparseMatrix(self.ring, reduced.shape, outer)
        if l - 1 in self.blocks:
            below = self.blocks[l - 1]
            self.blocks[l - 1] = below.submatrix([r for r in range(below.nrows) if r != j], list(range(below.ncols)))
        if l + 1 in self.blocks:
            above = self.blocks[l + 1]
            self.blocks[l + 1] = above.submatrix(list(range(above.nrows)), [s for s in range(above.ncols) if s != i])
        for k in (l, l + 1):
            self.ranks[k] -= 1
            if not self.ranks[k]:
                del self.ranks[k]
        self.blocks = {k: b for k, b in self.blocks.items() if b.nrows and b.ncols}

    def run(self, split, on_pivot=None):
        while True:
            found = self.find_pivot(split)
            if found is None:
                return
            l, i, j, value, data = found
            if on_pivot is not None:
                on_pivot(l, i, j, value, data)
            self.eliminate(l, i, j)

    def collapse(self, weight):
        """Push the entries along ``x^e -> t^{<weight, e>}``."""
        ring = LaurentRing(self.ring.base, 1)

        def collapse_entry(p):
            return p.map_exponents(lambda e: (_dot(weight, e),), ring)

        blocks = {l: b.map_entries(collapse_entry, ring) for l, b in self.blocks.items()}
        return _Reduction(ring, dict(self.ranks), blocks)


def _window_unsolvable(incoming, target_rank, s, order, base):
    """Decide that ``e_s`` has no preimage under ``incoming`` over ``R((t))``.

    Returns ``(leading exponent, system shape)`` when the truncated system has
    no solution, else ``None``. The lowest-order coefficient matrix must be
    injective on the nonzero columns; then every preimage has order at least
    ``-j0`` and its first ``order`` coefficients solve the window system.
    """
    if incoming is None or incoming.is_zero():
        return None, (0, 0)
    cols = sorted({j for (_, j) in incoming.entries})
    j0 = min(e[0] for v in incoming.entries.values() for e in v.terms)
    leading = np.full((target_rank, len(cols)), base.zero, dtype=object)
    for (i, j), value in incoming.entries.items():
        leading[i, cols.index(j)] = value.coefficient((j0,))
    if matrix_rank(leading, base) != len(cols):
        return None
    start = -j0
    A = np.full((order * target_rank, order * len(cols)), base.zero, dtype=object)
    for (i, j), value in incoming.entries.items():
        c = cols.index(j)
        for (power,), coefficient in value.terms.items():
            for k in range(order):
                equation = k + power + start
                if 0 <= equation < order:
                    A[equation * target_rank + i, k * len(cols) + c] = coefficient
    y = np.full(order * target_rank, base.zero, dtype=object)
    y[s] = base.one
    if solve_linear(A, y, base) is None:
        return j0, A.shape
    return None


def nov_acyclicity(D, tau, order=16, weight=None):
    """Decide acyclicity of ``D ⊗ R⟪τ⟫`` with a certificate.

    Unit pivots certified by a dominant term are eliminated exactly. If
    something survives, the complex is pushed along ``x^e -> t^{φ(e)}`` to
    ``R((t))``, eliminated again, and basis cocycles are tested for a
    preimage by a window system decided with Smith normal form.
    A pivot whose inverse is only known below weight 1 at this order fails
    its audit, and a reduction relying on it is reported inconclusive.

    Returns:
        AcyclicCertified, NonacyclicCertified or Inconclusive

    Raises:
        DomainError: if ``tau`` is not full-dimensional
        StructuralError: if the variable count of ``D`` differs from the rank of ``tau``
    """
    context = NovikovContext(tau, order, weight)
    if D.ring.nvars != tau.n:
        raise StructuralError(f"{D.ring} has {D.ring.nvars} variables, the cone rank {tau.n}")
    base = D.ring.base
    pivots = []

    def record(l, i, j, value, data):
        e, c = data
        series = NovikovSeries.from_polynomial(context, value)
        product = series * nov_invert(series)
        checked = order if product.valid_order is None else min(order, product.valid_order)
        # a pivot whose inverse is known below weight 1 certifies nothing
        audit = checked >= 1 and product.congruent(NovikovSeries.one(context, base), checked)
        pivots.append(PivotRecord(l, i, j, value, e, c, audit))

    reduction = _Reduction.of(D)
    reduction.run(lambda p: context.unit_split(p, base), record)
    if reduction.is_zero():
        failed = sum(1 for p in pivots if not p.audit)
        if failed:
            logger.debug("%d pivot audits over %r are insufficient at order %d", failed, tau, order)
            return Inconclusive(tau, order, context.weight, {}, failed)
        logger.debug("acyclic over %r after %d pivots", tau, len(pivots))
        return AcyclicCertified(tau, order, context.weight, pivots)
    collapsed = reduction.collapse(context.weight)
    ray = NovikovContext(Cone([(1,)]), order)
    collapsed.run(lambda p: ray.unit_split(p, base))
    if collapsed.is_zero():
        return Inconclusive(tau, order, context.weight, dict(reduction.ranks))
    for l in sorted(collapsed.ranks):
        outgoing = collapsed.blocks.get(l)
        incoming = collapsed.blocks.get(l - 1)
        cycles = set(range(collapsed.ranks[l]))
        if outgoing is not None:
            cycles -= {j for (_, j) in outgoing.entries}
        for s in sorted(cycles):
            found = _window_unsolvable(incoming, collapsed.ranks[l], s, order, base)
            if found is not None:
                j0, shape = found
                logger.debug("non-acyclic over %r: degree %d, cocycle %d", tau, l, s)
                return NonacyclicCertified(tau, order, context.weight, l, s, j0, tuple(shape), pivots)
    return Inconclusive(tau, order, context.weight, dict(reduction.ranks))
