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
Mapping tori of special cubes and the comparison maps between them.

The mapping torus of a special cube over ``R[x_1, ..., x_m]`` lives over the
ring with ``m + n`` variables: the cube's own variables come first and
``x_{m+k}`` is the torus variable of direction ``k``.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cubes import (
    SpecialCubeData,
    _sign,
    check_cochain_map,
    check_homotopy_identity,
    derive_cube,
    elements,
    scalar_map,
    size,
    subsets,
    subsets_of,
    totalise,
    trivial_cube,
    total_incidence,
    verify_special,
)
from .exceptions import ContractViolation, InternalConsistencyError, UnsupportedError
from .homalg import (
    FreeComplex,
    GradedMap,
    MonomialOperator,
    SparseMatrix,
    TensorProduct,
    assemble_graded,
    cohomology,
    is_acyclic,
    is_quasi_iso,
    kron,
    mapping_cone,
    shift,
)
from .rings import CoefficientRing, LaurentRing, random_points, specialization_ring

logger = logging.getLogger(__name__)


# ==========================================================
# mapping tori


@dataclass
class TorusData:
    """A special cube, its extension over the torus ring and the totalisation."""

    base: SpecialCubeData
    extended: SpecialCubeData
    totalisation: object

    @property
    def ring(self):
        return self.extended.ring

    @property
    def complex(self):
        return self.totalisation.complex


def torus_ring(data):
    return LaurentRing(data.ring.base, data.ring.nvars + data.n)


def mapping_torus(data, check=True):
    """Mapping n-torus: ``f̄_k = f_k ⊗ 1 - x_{m+k}``, ``H̄_S = H_S ⊗ 1``.

    Raises:
        ContractViolation: if ``data`` is not a special cube
        InternalConsistencyError: if the extended data fails the cube criterion
    """
    if check:
        report = verify_special(data)
        if not report:
            failure = report.first_failure
            raise ContractViolation(
                f"Not a special cube: {failure.kind} identity fails at {elements(failure.subset)}",
                where=elements(failure.subset),
            )
    ring = torus_ring(data)
    m = data.ring.nvars
    C = data.complex.extend_scalars(ring)
    f = {
        k: fk.extend_scalars(ring, 0, C, C) - scalar_map(C, ring.variable(m + k))
        for k, fk in data.f.items()
    }
    H = {S: HS.extend_scalars(ring, 0, C, C) for S, HS in data.H.items()}
    extended = SpecialCubeData(data.n, C, f, H)
    if check and not verify_special(extended):
        raise InternalConsistencyError("The extended torus data is not a special cube")
    return TorusData(data, extended, totalise(extended))


def pleasant_identity(B, A, z):
    """``[B:B∖z][B∖z:A] + (-1)^(b-a) [B:A⊔z][A⊔z:A]`` for ``z ∈ B∖A``; always zero."""
    zbit = 1 << (z - 1)
    b, a = size(B), size(A)
    first = total_incidence(B, B & ~zbit) * total_incidence(B & ~zbit, A)
    second = total_incidence(B, A | zbit) * total_incidence(A | zbit, A)
    return first + _sign(b - a) * second


# ==========================================================
# comparison maps


@dataclass
class MatherMap:
    """A comparison map between two totalisations, with its checks."""

    kind: str
    map: GradedMap
    source: object
    target: object
    commutes: bool
    diagonal_matches: bool

    def is_quasi_iso(self, points=None):
        return is_quasi_iso(self.map, points, source=self.source.complex, target=self.target.complex)

    def to_dict(self):
        return {"kind": self.kind, "cochain_map": self.commutes, "diagonal_matches": self.diagonal_matches}


def _finite(*maps):
    for m in maps:
        if not isinstance(m, GradedMap):
            raise UnsupportedError(
                f"Comparison maps need matrix data, got {type(m).__name__}; "
                "operators on infinitely generated modules can only be sampled"
            )


def _finish(kind, mm, source, target, expected_diagonal, strict=True):
    commutes = mm @ source.complex.differential == target.complex.differential @ mm
    diagonal = True
    for A in source.index.keys:
        a = size(A)
        for l, block in expected_diagonal.blocks.items():
            rows = list(target.index.span(l + a, A))
            cols = list(source.index.span(l + a, A))
            if mm.block(l + a).submatrix(rows, cols) != block:
                diagonal = False
    logger.debug("%s: cochain map %s, diagonal blocks %s", kind, commutes, diagonal)
    if strict and not commutes:
        raise InternalConsistencyError(f"{kind} is not a cochain map between the totalisations")
    return MatherMap(kind, mm, source, target, commutes, diagonal)


def _diagonal_map(source, target, phi, ring):
    pieces = []
    for A in source.index.keys:
        a = size(A)
        for l, block in phi.blocks.items():
            pieces.append((l + a, A, A, block))
    return assemble_graded(ring, source.index, target.index, 0, pieces)


def _m_blocks(g, G, hs, data):
    n = len(hs)
    pieces = []
    for B in subsets(n):
        b = size(B)
        for A in subsets_of(B):
            a = size(A)
            S = B & ~A
            s = size(S)
            if s == 0:
                MS = g
            elif s == 1:
                MS = G @ hs[elements(S)[0] - 1] @ g
            else:
                MS = G @ data.map_for(S)
            sign = _sign(b) * _sign(a * b) * total_incidence(B, A)
            for l, block in MS.blocks.items():
                pieces.append((l + a, B, A, block * sign))
    return pieces


@dataclass
class _Tot:
    cube: SpecialCubeData
    complex: FreeComplex
    index: object


def _tot(cube):
    total = totalise(cube)
    return _Tot(cube, total.complex, total.index)


def mather_M(D, g, G, hs):
    """``M: Tot Der(D; g, id, G; h) -> Tot Triv(D; h)`` with blocks
    ``(-1)^b (-1)^{ab} [B:A] M_{B∖A}``, ``M_∅ = g``, ``M_k = G h_k g``,
    ``M_S = G H_S``.

    Raises:
        InternalConsistencyError: if ``M`` is not a cochain map
    """
    _finite(g, G, *hs)
    identity = D.identity()
    Y = _tot(derive_cube(D, D, g, identity, G, hs))
    X = _tot(trivial_cube(D, hs))
    mm = assemble_graded(D.ring, Y.index, X.index, 0, _m_blocks(g, G, hs, Y.cube))
    return _finish("M", mm, Y, X, g)


def mather_L(C, D, alpha, beta, G, hs):
    """Diagonal ``β``: ``Tot Der(D; αβ, id, G; h) -> Tot Der(C; α, β, G; h)``."""
    _finite(alpha, beta, G, *hs)
    Y = _tot(derive_cube(D, D, alpha @ beta, D.identity(), G, hs))
    Z = _tot(derive_cube(C, D, alpha, beta, G, hs))
    mm = _diagonal_map(Y, Z, beta, C.ring)
    return _finish("L", mm, Y, Z, beta)


def _torus_tot(cube):
    torus = mapping_torus(cube, check=False)
    return _Tot(torus.extended, torus.complex, torus.totalisation.index)


def mather_K(D, g, G, hs):
    """``K = M ⊗ 1`` between the mapping tori of ``Der(D; g, id, G; h)`` and ``Triv(D; h)``."""
    _finite(g, G, *hs)
    flat = mather_M(D, g, G, hs).map
    Y = _torus_tot(derive_cube(D, D, g, D.identity(), G, hs))
    X = _torus_tot(trivial_cube(D, hs))
    ring = Y.complex.ring
    mm = flat.extend_scalars(ring)
    return _finish("K", mm, Y, X, g.extend_scalars(ring))


def mather_J(C, D, alpha, beta, G, hs):
    """``J`` = diagonal ``β ⊗ 1`` between the mapping tori of ``Der(D; αβ, id, G; h)``
    and ``Der(C; α, β, G; h)``."""
    _finite(alpha, beta, G, *hs)
    Y = _torus_tot(derive_cube(D, D, alpha @ beta, D.identity(), G, hs))
    Z = _torus_tot(derive_cube(C, D, alpha, beta, G, hs))
    ring = Y.complex.ring
    lifted = beta.extend_scalars(ring)
    mm = _diagonal_map(Y, Z, lifted, ring)
    return _finish("J", mm, Y, Z, lifted)


# ==========================================================
# the resolution map ψ and Koszul complexes


def coordinate_maps(D):
    """``x_k · id`` on ``D`` for each variable of its ring."""
    return [scalar_map(D, D.ring.variable(k)) for k in range(1, D.ring.nvars + 1)]


class PsiMap:
    """``ψ: T Triv(D; x_1, ..., x_n) -> Σ^n D``, multiplication ``z ⊗ p -> z p``
    on the top summand and zero elsewhere.

    Source entries live over ``2n`` variables (``D``'s first); ``ψ`` merges
    ``x_k`` and ``x_{n+k}``.
    """

    def __init__(self, D):
        self.D = D
        self.n = D.ring.nvars
        self.torus = mapping_torus(trivial_cube(D, coordinate_maps(D)), check=False)
        self.source = self.torus.totalisation
        self.target = shift(D, -self.n)
        self.top = (1 << self.n) - 1

    def merge(self, poly):
        n = self.n
        return poly.map_exponents(lambda e: tuple(e[k] + e[n + k] for k in range(n)), self.D.ring)

    def projection(self, l):
        """0/1 matrix of ``ψ`` in degree ``l`` over the ring of ``D``."""
        span = self.source.index.span(l, self.top)
        entries = {(i, j): 1 for i, j in enumerate(span)}
        return SparseMatrix(self.D.ring, (self.target.rank(l), self.source.complex.rank(l)), entries)

    def apply(self, l, vector):
        span = self.source.index.span(l, self.top)
        return {j - span.start: self.merge(v) for j, v in vector.items() if j in span}

    def check(self):
        """``ψ d = d ψ``; raises :class:`InternalConsistencyError` otherwise."""
        src = self.source.complex
        for l in sorted(set(src.ranks) | {l - 1 for l in src.ranks}):
            left = self.target.d(l) @ self.projection(l)
            right = self.projection(l + 1) @ src.d(l).map_entries(self.merge, self.D.ring)
            if left != right:
                raise InternalConsistencyError(f"ψ is not a cochain map in degree {l}")
        return True


def build_psi(D):
    psi = PsiMap(D)
    psi.check()
    return psi


def _window(box_dims):
    return list(itertools.product(*[range(lo, hi + 1) for lo, hi in box_dims]))


def _monomial_value(base, point, exponent):
    value = Fraction(1)
    for t, e in zip(point, exponent):
        value *= Fraction(t) ** e
    return base(value)


def psi_spot_check(psi, points, radius=2):
    """Cone of ``ψ`` after specializing the torus variables at each point.

    Specializing ``x_{n+k} = t_k`` turns the source into ``Tot Triv(D; x_k - t_k)``
    over ``R[x]`` and ``ψ`` into evaluation at ``t``. The source is cut to
    monomials ``x^a`` with ``a_k`` in ``[-W, W]`` for ``k ∈ A`` and in
    ``[-W, W-1]`` otherwise, which is closed under the differential when
    ``D`` has scalar entries; the windowed cone is then exactly acyclic.

    Returns:
        bool: whether every windowed cone is acyclic
    """
    D = psi.D
    n = psi.n
    for block in D.differential.blocks.values():
        if any(not v.is_constant() for v in block.entries.values()):
            raise UnsupportedError("The windowed ψ check needs a differential with scalar entries")
    source = psi.source
    for point in points:
        scalars = LaurentRing(specialization_ring(D.ring, point), 0)
        base = scalars.base
        keys = {}
        ranks = {}
        for l in source.complex.degrees:
            keys[l] = []
            for A in source.index.keys_in(l):
                span = source.index.span(l, A)
                box = _window([(-radius, radius) if A >> k & 1 else (-radius, radius - 1) for k in range(n)])
                for local in range(len(span)):
                    for a in box:
                        keys[l].append((span.start + local, a))
            ranks[l] = len(keys[l])
        positions = {l: {key: p for p, key in enumerate(ks)} for l, ks in keys.items()}
        blocks = {}
        for l in source.complex.degrees:
            entries = {}
            matrix = source.complex.d(l)
            by_col = {}
            for (i, j), value in matrix.entries.items():
                by_col.setdefault(j, []).append((i, value))
            for (j, a), col in positions[l].items():
                for i, value in by_col.get(j, ()):
                    for exponent, c in value.terms.items():
                        left = tuple(a[k] + exponent[k] for k in range(n))
                        weight = base(c) * _monomial_value(base, point, exponent[n:])
                        row = positions.get(l + 1, {}).get((i, left))
                        if row is None:
                            raise InternalConsistencyError("The ψ window is not closed under the differential")
                        key = (row, col)
                        entries[key] = entries.get(key, 0) + weight
            blocks[l] = SparseMatrix(scalars, (ranks.get(l + 1, 0), ranks[l]), entries)
        windowed = FreeComplex(scalars, ranks, blocks, check=False)
        target = psi.target.specialize(tuple(point))
        phi_blocks = {}
        for l in source.complex.degrees:
            span = source.index.span(l, psi.top)
            entries = {}
            for (j, a), col in positions[l].items():
                if j in span:
                    value = _monomial_value(base, point, a)
                    entries[(j - span.start, col)] = value
            phi_blocks[l] = SparseMatrix(scalars, (target.rank(l), ranks[l]), entries)
        phi = GradedMap(scalars, 0, windowed.ranks, target.ranks, phi_blocks, source=windowed, target=target)
        if not is_acyclic(mapping_cone(phi)):
            logger.debug("ψ cone not acyclic at %s", point)
            return False
    return True


def koszul_total(n, base=None):
    """``Tot Triv(S; x_1, ..., x_n)`` for ``S = R[x_1, ..., x_n]`` with its summands."""
    if n < 1:
        raise ValueError(f"The Koszul complex needs n >= 1, got {n}")
    ring = LaurentRing(base or CoefficientRing.integers(), n)
    S = FreeComplex(ring, {0: 1})
    return totalise(trivial_cube(S, coordinate_maps(S)))


def koszul(n, base=None):
    """Koszul complex of ``x_1, ..., x_n``: ranks are binomial coefficients, entries ``±x_k``."""
    return koszul_total(n, base).complex


def koszul_slice(n, multidegree, base=None):
    """The multidegree ``m`` part of :func:`koszul` over ``R``.

    The summand of ``A`` contributes ``x^(m - 1_{N∖A}) e_A`` when that
    exponent is nonnegative.
    """
    K = koszul_total(n, base)
    ring = K.ring
    scalars = LaurentRing(ring.base, 0)
    m = tuple(multidegree)
    if len(m) != n:
        raise ValueError(f"Multidegree {m} has the wrong length for n = {n}")

    def exponent(A):
        return tuple(m[k] - (0 if A >> k & 1 else 1) for k in range(n))

    present = [A for A in subsets(n) if min(exponent(A), default=0) >= 0]
    ranks = {}
    for A in present:
        ranks[size(A)] = ranks.get(size(A), 0) + 1
    order = {a: [A for A in present if size(A) == a] for a in ranks}
    blocks = {}
    for a, sources in order.items():
        targets = order.get(a + 1, [])
        entries = {}
        for col, A in enumerate(sources):
            for row, B in enumerate(targets):
                if A & ~B:
                    continue
                value = K.block(a, B, A)[(0, 0)]
                shift_exponent = tuple(x - y for x, y in zip(exponent(B), exponent(A)))
                c = value.coefficient(shift_exponent)
                if c:
                    entries[(row, col)] = c
        if targets:
            blocks[a] = SparseMatrix(scalars, (len(targets), len(sources)), entries)
    return FreeComplex(scalars, ranks, blocks)


# ==========================================================
# domination witnesses


@dataclass
class DominationWitness:
    """Finite ``C`` over ``R`` with cochain maps ``α: C -> D``, ``β: D -> C`` and
    ``dG + Gd = αβ - id_D`` on the complex ``D`` over the Laurent ring."""

    C: FreeComplex
    D: FreeComplex
    alpha: GradedMap
    beta: object
    G: object
    kind: str = "custom"

    @property
    def is_finite(self):
        return all(isinstance(m, GradedMap) for m in (self.alpha, self.beta, self.G))

    def check(self, radius=2):
        """Raises :class:`ContractViolation` if an identity fails."""
        check_cochain_map("α", self.alpha, self.C, self.D, radius)
        check_cochain_map("β", self.beta, self.D, self.C, radius)
        check_homotopy_identity(self.D, self.alpha, self.beta, self.G, radius)
        return True


def cyclic_witness(base):
    """``D = (L --(x-1)--> L)`` in degrees 0, 1 over ``L = R[x^±]``, dominated by
    ``C = R`` in degree 1 with ``β`` evaluation at ``x = 1`` and
    ``G(p) = -(p - p(1)) / (x - 1)``."""
    L = LaurentRing(base, 1)
    R = LaurentRing(base, 0)
    x = L.variable(1)
    D = FreeComplex(L, {0: 1, 1: 1}, {0: SparseMatrix(L, (1, 1), {(0, 0): x - 1})})
    C = FreeComplex(R, {1: 1})
    alpha = GradedMap(L, 0, C.ranks, D.ranks, {1: SparseMatrix(L, (1, 1), {(0, 0): 1})}, source=C, target=D)

    def evaluate(l, i, exponent):
        return {0: R.one} if l == 1 else {}

    def contract(l, i, exponent):
        if l != 1:
            return {}
        (a,) = exponent
        if a > 0:
            value = -sum((L.monomial((j,)) for j in range(a)), L.zero)
        elif a < 0:
            value = sum((L.monomial((j,)) for j in range(a, 0)), L.zero)
        else:
            return {}
        return {0: value}

    beta = MonomialOperator(0, evaluate, R)
    G = MonomialOperator(-1, contract, L)
    return DominationWitness(C, D, alpha, beta, G, kind="cyclic")


class TensorOperator:
    """``φ1 ⊗ φ2`` on a tensor product with the Koszul sign ``(-1)^{|φ2| p}``."""

    def __init__(self, source, target, first, second, ring):
        self.source = source
        self.target = target
        self.first = first
        self.second = second
        self.degree = first.degree + second.degree
        self.ring = ring

    def _split(self, l, vector):
        left_vars = self.source.left.ring.nvars
        L1, L2 = self.source.left.ring, self.source.right.ring
        for index, poly in vector.items():
            p, i, q, j = self.source.split(l, index)
            for exponent, c in poly.terms.items():
                u = L1.monomial(exponent[:left_vars], c)
                v = L2.monomial(exponent[left_vars:])
                yield p, {i: u}, q, {j: v}

    def apply(self, l, vector):
        result = {}
        sign_base = self.second.degree % 2
        for p, u, q, v in self._split(l, vector):
            a = self.first.apply(p, u)
            b = self.second.apply(q, v)
            if not a or not b:
                continue
            image = self.target.tensor_vectors(p + self.first.degree, a, q + self.second.degree, b)
            sign = -1 if sign_base and p % 2 else 1
            for k, value in image.items():
                value = value if sign == 1 else -value
                total = result[k] + value if k in result else value
                if total:
                    result[k] = total
                else:
                    result.pop(k, None)
        return result


class SumOperator:
    def __init__(self, *ops):
        self.ops = ops
        self.degree = ops[0].degree

    def apply(self, l, vector):
        result = {}
        for op in self.ops:
            for k, value in op.apply(l, vector).items():
                total = result[k] + value if k in result else value
                if total:
                    result[k] = total
                else:
                    result.pop(k, None)
        return result


class _Identity:
    degree = 0

    def apply(self, l, vector):
        return dict(vector)


class _Composite:
    def __init__(self, outer, inner):
        self.outer, self.inner = outer, inner
        self.degree = outer.degree + inner.degree

    def apply(self, l, vector):
        return self.outer.apply(l + self.inner.degree, self.inner.apply(l, vector))


def _tensor_graded(source, target, first, second, ring):
    """Matrix of ``φ1 ⊗ φ2`` for degree-0 graded maps."""
    blocks = {}
    for n, pairs in source.layout.items():
        entries = {}
        for p, q in pairs:
            a = first.block(p).extend_scalars(ring, 0)
            b = second.block(q).extend_scalars(ring, target.left.ring.nvars)
            block = kron(a, b)
            row0, col0 = target.offsets.get((p, q)), source.offsets[(p, q)]
            if row0 is None:
                continue
            for (i, j), value in block.entries.items():
                entries[(row0 + i, col0 + j)] = value
        blocks[n] = SparseMatrix(ring, (target.complex.rank(n), source.complex.rank(n)), entries)
    return GradedMap(ring, 0, source.complex.ranks, target.complex.ranks, blocks, source=source.complex, target=target.complex)


def tensor_witness(first, second):
    """Witness for ``D1 ⊗ D2`` from witnesses of the factors:
    ``α = α1 ⊗ α2``, ``β = β1 ⊗ β2`` and ``G = G1 ⊗ 1 + α1β1 ⊗ G2``."""
    TD = TensorProduct(first.D, second.D)
    TC = TensorProduct(first.C, second.C)
    alpha = _tensor_graded(TC, TD, first.alpha, second.alpha, TD.ring)
    beta = TensorOperator(TD, TC, first.beta, second.beta, TC.ring)
    G = SumOperator(
        TensorOperator(TD, TD, first.G, _Identity(), TD.ring),
        TensorOperator(TD, TD, _Composite(first.alpha, first.beta), second.G, TD.ring),
    )
    return DominationWitness(TC.complex, TD.complex, alpha, beta, G, kind="tensor")


def unipotent_witness(base, n):
    """Witness for the n-fold tensor power of ``L --(x-1)--> L``, one variable per factor."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    witness = cyclic_witness(base)
    for _ in range(n - 1):
        witness = tensor_witness(witness, cyclic_witness(base))
    witness.kind = "unipotent"
    return witness


def contractible_witness(D):
    """``C = 0`` and ``G = -d^{-1}`` for a two-term complex whose differential is a
    monomial matrix (one unit monomial in each row and column)."""
    if len(D.degrees) != 2 or D.degrees[1] != D.degrees[0] + 1:
        raise ValueError(f"Expected a complex in two adjacent degrees, got {D.degrees}")
    k = D.degrees[0]
    d = D.d(k)
    if d.nrows != d.ncols or len(d.entries) != d.nrows:
        raise ValueError("The differential is not a monomial matrix")
    inverse = {}
    for (i, j), value in d.entries.items():
        inverse[(j, i)] = -value.inverse()
    if len({i for i, _ in d.entries}) != d.nrows or len({j for _, j in d.entries}) != d.ncols:
        raise ValueError("The differential is not a monomial matrix")
    R = LaurentRing(D.ring.base, 0)
    C = FreeComplex(R, {})
    G = GradedMap(D.ring, -1, D.ranks, D.ranks, {k + 1: SparseMatrix(D.ring, d.shape, inverse)}, source=D, target=D)
    alpha = GradedMap(D.ring, 0, C.ranks, D.ranks, {}, source=C, target=D)
    beta = GradedMap(D.ring, 0, D.ranks, C.ranks, {}, source=D, target=C)
    return DominationWitness(C, D, alpha, beta, G, kind="contractible")


@dataclass
class WitnessTorus:
    """``T Der(C; α, β, G; x_k, k ∈ variables)`` with its checks."""

    torus: TorusData
    variables: tuple
    betti_checked: bool = False
    betti_agree: bool = True
    mather: dict = field(default_factory=dict)
    mather_unchecked: dict = field(default_factory=dict)

    @property
    def complex(self):
        return self.torus.complex

    def to_dict(self):
        return {
            "variables": list(self.variables),
            "ranks": {str(l): r for l, r in sorted(self.complex.ranks.items())},
            "betti_checked": self.betti_checked,
            "betti_agree": self.betti_agree,
            "mather": {k: v.to_dict() for k, v in sorted(self.mather.items())},
            "mather_unchecked": dict(sorted(self.mather_unchecked.items())),
        }


def domination_witness(witness, variables=None, points=20, rng=None, bound=9, radius=2):
    """Finite free complex over ``R[x_k, k ∈ variables]`` homotopy equivalent to
    ``Σ^u D``, built as a mapping torus of the derived cube with ``h_k = x_k``.

    With all variables, Betti numbers are compared with ``Σ^n D`` at random
    points. When the witness is given by matrices the comparison maps ``K`` and
    ``J`` are checked as cochain maps; otherwise ``mather_unchecked`` names the
    maps that were left out and why.
    """
    D = witness.D
    n = D.ring.nvars
    variables = tuple(range(1, n + 1)) if variables is None else tuple(variables)
    if any(not 1 <= k <= n for k in variables):
        raise ValueError(f"Variables {variables} are not among x1..x{n}")
    hs = [scalar_map(D, D.ring.variable(k)) for k in variables]
    cube = derive_cube(witness.C, D, witness.alpha, witness.beta, witness.G, hs, homotopy_radius=radius)
    torus = mapping_torus(cube)
    result = WitnessTorus(torus, variables)
    if variables and not witness.is_finite:
        reason = "the witness is given by operators on infinitely generated modules"
        result.mather_unchecked.update(K=reason, J=reason)
    elif variables:
        result.mather["K"] = mather_K(D, witness.alpha @ witness.beta, witness.G, hs)
        if witness.C.ring == D.ring:
            result.mather["J"] = mather_J(witness.C, D, witness.alpha, witness.beta, witness.G, hs)
        else:
            result.mather_unchecked["J"] = f"C is over {witness.C.ring}, D over {D.ring}"
    for kind, reason in result.mather_unchecked.items():
        logger.info("%s not checked: %s", kind, reason)
    if sorted(variables) == list(range(1, n + 1)) and n:
        rng = rng or np.random.default_rng()
        target = shift(D, -n)
        result.betti_checked = True
        for point in random_points(n, points, rng, bound):
            permuted = tuple(point[variables.index(k)] for k in range(1, n + 1))
            mine = cohomology(torus.complex.specialize(point)).betti()
            theirs = cohomology(target.specialize(permuted)).betti()
            if mine != theirs:
                logger.debug("Betti numbers differ at %s: %s vs %s", point, mine, theirs)
                result.betti_agree = False
                break
    return result
