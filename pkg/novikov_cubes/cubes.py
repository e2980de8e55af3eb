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
Homotopy commutative cubes of cochain complexes.

Subsets of ``N = {1, ..., n}`` are bitmasks: element ``k`` is bit ``k - 1``.
Block matrices list subsets in increasing bitmask order, so for ``n = 2`` the
order is ``∅, {1}, {2}, {1, 2}``.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache

from .exceptions import ContractViolation, StructuralError
from .homalg import (
    FreeComplex,
    GradedMap,
    SparseMatrix,
    SummandIndex,
    TotalisedComplex,
    assemble_graded,
    basis_vector,
    is_acyclic,
    sample_vectors,
    shift,
)

logger = logging.getLogger(__name__)


# ==========================================================
# subsets and incidence numbers


def elements(mask):
    """Elements (1-based, increasing) of a bitmask."""
    result = []
    k = 1
    while mask:
        if mask & 1:
            result.append(k)
        mask >>= 1
        k += 1
    return result


def mask_of(items):
    mask = 0
    for k in items:
        if k < 1:
            raise ValueError(f"Subset elements are 1-based, got {k}")
        mask |= 1 << (k - 1)
    return mask


def size(mask):
    return mask.bit_count()


def subsets(n):
    return range(1 << n)


def subsets_of(mask):
    """All submasks of ``mask`` in increasing order."""
    return [t for t in range(mask + 1) if t & ~mask == 0]


@lru_cache(maxsize=None)
def total_incidence(B, A):
    """The sign ``[B:A]``; zero unless ``A ⊆ B``.

    With ``A`` obtained from ``B`` by deleting the elements at (1-based)
    positions ``i_1 < ... < i_r`` of ``B``, the value is
    ``(-1)^r (-1)^(i_1 + ... + i_r)``.
    """
    if A & ~B:
        return 0
    if A == B:
        return 1
    exponent = 0
    for position, k in enumerate(elements(B), start=1):
        if not A & (1 << (k - 1)):
            exponent += 1 + position
    return -1 if exponent % 2 else 1


def incidence_by_pairs(B, A):
    """``(-1)^κ`` with κ the number of pairs ``(b, x)`` in ``B × (B∖A)`` with ``b < x``."""
    if A & ~B:
        return 0
    kappa = sum(1 for b in elements(B) for x in elements(B & ~A) if b < x)
    return -1 if kappa % 2 else 1


def incidence_of_empty(b):
    """``[B:∅]`` for ``#B = b``."""
    return -1 if (b * (b - 1) // 2) % 2 else 1


def _sign(exponent):
    return -1 if exponent % 2 else 1


# ==========================================================
# diagrams


class NDiagram:
    """Complexes ``F(A)`` and graded maps ``H_{B,A}`` of degree ``a - b + 1``.

    Args:
        n (int): size of ``N``
        complexes (dict[int, FreeComplex]): ``F(A)`` per bitmask ``A``
        maps (dict[tuple[int, int], GradedMap]): ``H_{B,A}`` for ``A ⊊ B``;
            missing maps are zero, ``H_{A,A}`` is the differential of ``F(A)``
    """

    def __init__(self, n, complexes, maps=None):
        if n < 0:
            raise ValueError(f"n must be nonnegative, got {n}")
        self.n = n
        missing = [A for A in subsets(n) if A not in complexes]
        if missing:
            raise StructuralError(f"No complex given for the subsets {missing}")
        self.complexes = dict(complexes)
        rings = {C.ring for C in self.complexes.values()}
        if len(rings) != 1:
            raise StructuralError(f"Complexes of a diagram share one ring, got {sorted(map(str, rings))}")
        (self.ring,) = rings
        self.maps = {}
        for (B, A), H in (maps or {}).items():
            if A & ~B or A == B:
                raise StructuralError(f"H_{{{B},{A}}} needs A ⊊ B")
            expected = size(A) - size(B) + 1
            if H.degree != expected:
                raise StructuralError(
                    f"H_{{{elements(B)},{elements(A)}}} has degree {H.degree}, expected {expected}"
                )
            if not H.is_zero():
                self.maps[(B, A)] = H

    def complex(self, A):
        return self.complexes[A]

    def map(self, B, A):
        if A == B:
            return self.complexes[A].differential
        if (B, A) in self.maps:
            return self.maps[(B, A)]
        return GradedMap.zero(
            self.ring,
            size(A) - size(B) + 1,
            self.complexes[A].ranks,
            self.complexes[B].ranks,
            source=self.complexes[A],
            target=self.complexes[B],
        )


class SpecialCubeData:
    """One complex ``C`` with self-maps ``f_k`` and higher homotopies ``H_S``.

    Args:
        n (int): size of ``N``
        complex_ (FreeComplex): the complex at every vertex
        f (dict[int, GradedMap]): degree-0 maps, keys ``1..n``
        H (dict[int, GradedMap]): maps of degree ``1 - s`` keyed by bitmasks
            ``S`` with ``s >= 2``; missing entries are zero
    """

    def __init__(self, n, complex_, f, H=None):
        self.n = n
        self.complex = complex_
        self.ring = complex_.ring
        if sorted(f) != list(range(1, n + 1)):
            raise StructuralError(f"Expected maps f_1..f_{n}, got keys {sorted(f)}")
        for k, fk in f.items():
            if fk.degree != 0:
                raise StructuralError(f"f_{k} has degree {fk.degree}, expected 0")
        self.f = dict(f)
        self.H = {}
        for S, HS in (H or {}).items():
            s = size(S)
            if s < 2 or S >> n:
                raise StructuralError(f"Homotopies are indexed by subsets of N with at least two elements, got {elements(S)}")
            if HS.degree != 1 - s:
                raise StructuralError(f"H_{elements(S)} has degree {HS.degree}, expected {1 - s}")
            if not HS.is_zero():
                self.H[S] = HS

    def __repr__(self):
        return f"SpecialCubeData(n={self.n}, homotopies={[elements(S) for S in sorted(self.H)]}, {self.complex!r})"

    def map_for(self, S):
        """``d`` for ``S = ∅``, ``f_k`` for ``S = {k}`` and ``H_S`` otherwise."""
        s = size(S)
        if s == 0:
            return self.complex.differential
        if s == 1:
            return self.f[elements(S)[0]]
        if S in self.H:
            return self.H[S]
        return GradedMap.zero(
            self.ring, 1 - s, self.complex.ranks, self.complex.ranks, source=self.complex, target=self.complex
        )

    def map(self, B, A):
        return self.map_for(B & ~A)


def expand_special(data):
    """The special N-diagram of ``data``: ``F(A) = C`` and ``H_{B,A} = H_{B∖A}``."""
    complexes = {A: data.complex for A in subsets(data.n)}
    maps = {}
    for B in subsets(data.n):
        for A in subsets_of(B):
            if A != B:
                maps[(B, A)] = data.map_for(B & ~A)
    return NDiagram(data.n, complexes, maps)


# ==========================================================
# totalisation


def _vertex(F, A):
    if isinstance(F, SpecialCubeData):
        return F.complex
    return F.complex(A)


def totalisation_index(F):
    ranks = {}
    for A in subsets(F.n):
        a = size(A)
        ranks[A] = {l + a: r for l, r in _vertex(F, A).ranks.items()}
    return SummandIndex(list(subsets(F.n)), ranks)


def totalise(F):
    """Totalisation ``Tot(F)^l = ⊕_A F(A)^{l-a}`` with ``D_{B,A} = (-1)^{ab}[B:A] H_{B,A}``.

    Accepts an :class:`NDiagram` or :class:`SpecialCubeData`. ``D∘D = 0`` is
    not checked here; see :func:`d_squared`.
    """
    index = totalisation_index(F)
    pieces = []
    for B in subsets(F.n):
        b = size(B)
        for A in subsets_of(B):
            a = size(A)
            H = F.map(B, A)
            if H.is_zero():
                continue
            sign = _sign(a * b) * total_incidence(B, A)
            for l, block in H.blocks.items():
                pieces.append((l + a, B, A, block * sign))
    D = assemble_graded(F.ring, index, index, 1, pieces)
    return TotalisedComplex(FreeComplex(F.ring, index.totals, D, check=False), index)


def d_squared(F):
    """Nonzero blocks ``(D∘D)_{B,A}`` as graded maps of degree ``a - b + 2``.

    The diagram is a homotopy commutative cube exactly when the result is empty.
    """
    result = {}
    for B in subsets(F.n):
        b = size(B)
        for A in subsets_of(B):
            a = size(A)
            total = None
            for S in subsets_of(B):
                if A & ~S:
                    continue
                s = size(S)
                sign = _sign(b * s + s * a) * total_incidence(B, S) * total_incidence(S, A)
                term = (F.map(B, S) @ F.map(S, A)) * sign
                total = term if total is None else total + term
            if total is not None and not total.is_zero():
                result[(B, A)] = total
    return result


def is_cube(F):
    return not d_squared(F)


_KINDS = {0: "differential", 1: "cochain map", 2: "homotopy"}


@dataclass
class SubsetCheck:
    subset: int
    kind: str
    passed: bool

    def to_dict(self):
        return {"subset": elements(self.subset), "kind": self.kind, "passed": self.passed}


@dataclass
class SpecialReport:
    """Outcome of :func:`verify_special`, one entry per subset ``S ⊆ N``."""

    n: int
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __bool__(self):
        return self.passed

    @property
    def first_failure(self):
        return next((c for c in self.checks if not c.passed), None)

    def to_dict(self):
        failure = self.first_failure
        return {
            "n": self.n,
            "cube": self.passed,
            "first_failure": None if failure is None else failure.to_dict(),
            "checks": [c.to_dict() for c in self.checks],
        }


def special_defect(data, S):
    """``Σ_{T ⊆ S} (-1)^{ts} [S:T][T:∅] · M_{S∖T} ∘ M_T`` with ``M`` from :meth:`SpecialCubeData.map_for`."""
    s = size(S)
    total = None
    for T in subsets_of(S):
        t = size(T)
        sign = _sign(t * s) * total_incidence(S, T) * total_incidence(T, 0)
        term = (data.map_for(S & ~T) @ data.map_for(T)) * sign
        total = term if total is None else total + term
    return total


def verify_special(data):
    """Check the special-cube criterion subset by subset, smallest first.

    For ``s = 0`` this is ``d∘d = 0``, for ``s = 1`` that ``f_k`` is a cochain
    map, for ``s = 2`` that ``dH + Hd = f_k f_l - f_l f_k`` and for larger
    ``S`` the higher homotopy identity.
    """
    report = SpecialReport(data.n)
    for S in sorted(subsets(data.n), key=lambda S: (size(S), S)):
        passed = special_defect(data, S).is_zero()
        kind = _KINDS.get(size(S), "higher homotopy")
        report.checks.append(SubsetCheck(S, kind, passed))
        if not passed:
            logger.debug("special cube identity fails at %s (%s)", elements(S), kind)
    return report


# ==========================================================
# trivial and derived cubes


def trivial_cube(C, maps):
    """``Triv(C; f_1, ..., f_n)``: commuting cochain maps and ``H_S = 0``.

    Raises:
        ContractViolation: if some ``f_k`` is not a cochain map or a pair
            does not commute
    """
    maps = list(maps)
    f = {}
    for k, fk in enumerate(maps, start=1):
        if fk.source is None:
            fk = GradedMap(fk.ring, fk.degree, fk.source_ranks, fk.target_ranks, fk.blocks, source=C, target=C)
        if fk.cochain_defect(C, C) is not None:
            raise ContractViolation(f"f_{k} is not a cochain map", where=k)
        f[k] = fk
    for k in f:
        for l in f:
            if k < l and f[k] @ f[l] != f[l] @ f[k]:
                raise ContractViolation(f"f_{k} and f_{l} do not commute", where=(k, l))
    return SpecialCubeData(len(maps), C, f)


def scalar_map(C, value):
    """Multiplication by a ring element on every degree of ``C``."""
    value = C.ring(value)
    blocks = {l: SparseMatrix.identity(C.ring, r, value) for l, r in C.ranks.items()}
    return GradedMap(C.ring, 0, C.ranks, C.ranks, blocks, source=C, target=C)


def check_homotopy_identity(D, alpha, beta, G, radius=2):
    """Check ``dG + Gd = αβ - id_D``.

    The check is exact when every map is a :class:`GradedMap`; otherwise it
    runs on the monomial basis vectors of ``D`` with exponents in
    ``[-radius, radius]``.

    Raises:
        ContractViolation: with the failing degree and basis index
    """
    if all(isinstance(m, GradedMap) for m in (alpha, beta, G)):
        lhs = D.differential @ G + G @ D.differential
        rhs = alpha @ beta - D.identity()
        for l in sorted(set(lhs.blocks) | set(rhs.blocks)):
            difference = lhs.block(l) - rhs.block(l)
            if not difference.is_zero():
                (i, j), value = next(iter(sorted(difference.entries.items())))
                raise ContractViolation(
                    f"dG + Gd != αβ - id in degree {l}, entry ({i}, {j}) off by {value}", where=(l, i, j)
                )
        return
    for l in D.degrees:
        for v in sample_vectors(D.ring, D.rank(l), radius):
            lhs = D.differential.apply(l - 1, G.apply(l, v))
            via_d = G.apply(l + 1, D.differential.apply(l, v))
            for i, value in via_d.items():
                lhs[i] = lhs[i] + value if i in lhs else value
            rhs = alpha.apply(l, beta.apply(l, v))
            for i, value in v.items():
                rhs[i] = rhs[i] - value if i in rhs else -value
            difference = {i: lhs.get(i, D.ring.zero) - rhs.get(i, D.ring.zero) for i in set(lhs) | set(rhs)}
            difference = {i: x for i, x in difference.items() if x}
            if difference:
                i = min(difference)
                ((j, p),) = v.items()
                raise ContractViolation(
                    f"dG + Gd != αβ - id in degree {l} on {p}*e{j}: entry {i} off by {difference[i]}",
                    where=(l, j),
                )


def check_cochain_map(name, phi, source, target, radius):
    if isinstance(phi, GradedMap):
        defect = phi.cochain_defect(source, target)
        if defect is not None:
            raise ContractViolation(f"{name} is not a cochain map in degree {defect}", where=defect)
        return
    for l in source.degrees:
        for v in sample_vectors(source.ring, source.rank(l), radius):
            left = target.differential.apply(l, phi.apply(l, v))
            right = phi.apply(l + 1, source.differential.apply(l, v))
            if left != right:
                raise ContractViolation(f"{name} is not a cochain map in degree {l}", where=l)


def derive_cube(C, D, alpha, beta, G, hs, homotopy_radius=2):
    """``Der(C; α, β, G; h_1, ..., h_n)``: transport a strictly commutative cube
    on ``D`` to ``C`` along a homotopy equivalence.

    Args:
        C (FreeComplex): finite complex over the ring of the result
        D (FreeComplex): complex the ``h_k`` act on
        alpha (GradedMap): cochain map ``C -> D``
        beta (GradedMap or MonomialOperator): cochain map ``D -> C``
        G (GradedMap or MonomialOperator): degree ``-1`` map on ``D`` with
            ``dG + Gd = αβ - id``
        hs (list[GradedMap]): pairwise commuting cochain maps on ``D``
        homotopy_radius (int): sampling radius when some map is not a matrix

    Returns:
        SpecialCubeData: ``f_k = β h_k α`` and
        ``H_S = β (Σ_σ sgn σ h_σ(z1) G h_σ(z2) ... G h_σ(zs)) α``

    Raises:
        ContractViolation: if a hypothesis fails
    """
    hs = list(hs)
    n = len(hs)
    check_cochain_map("α", alpha, C, D, homotopy_radius)
    check_cochain_map("β", beta, D, C, homotopy_radius)
    for k, h in enumerate(hs, start=1):
        check_cochain_map(f"h_{k}", h, D, D, homotopy_radius)
    for k in range(n):
        for l in range(k + 1, n):
            if hs[k] @ hs[l] != hs[l] @ hs[k]:
                raise ContractViolation(f"h_{k + 1} and h_{l + 1} do not commute", where=(k + 1, l + 1))
    check_homotopy_identity(D, alpha, beta, G, homotopy_radius)

    # W(T) applied to α(e_i), memoized per (T, degree, basis index)
    words = {}

    def word(T, l, i):
        key = (T, l, i)
        if key in words:
            return words[key]
        members = elements(T)
        if len(members) == 1:
            result = hs[members[0] - 1].apply(l, alpha.apply(l, basis_vector(alpha.ring, i)))
        else:
            result = {}
            for position, e in enumerate(members):
                rest = word(T & ~(1 << (e - 1)), l, i)
                if not rest:
                    continue
                inner_degree = l + 2 - len(members)
                image = hs[e - 1].apply(inner_degree - 1, G.apply(inner_degree, rest))
                sign = _sign(position)
                for j, value in image.items():
                    value = value if sign == 1 else -value
                    total = result[j] + value if j in result else value
                    if total:
                        result[j] = total
                    else:
                        result.pop(j, None)
        words[key] = result
        return result

    def collect(T, degree):
        blocks = {}
        for l in C.degrees:
            columns = [beta.apply(l + degree, word(T, l, i)) for i in range(C.rank(l))]
            block = SparseMatrix.from_columns(C.ring, C.rank(l + degree), columns)
            if not block.is_zero():
                blocks[l] = block
        return GradedMap(C.ring, degree, C.ranks, C.ranks, blocks, source=C, target=C)

    f = {k: collect(1 << (k - 1), 0) for k in range(1, n + 1)}
    H = {}
    for S in subsets(n):
        s = size(S)
        if s >= 2:
            H[S] = collect(S, 1 - s)
    logger.debug("derived cube with n=%d, %d nonzero homotopies", n, sum(not h.is_zero() for h in H.values()))
    return SpecialCubeData(n, C, f, H)


# ==========================================================
# filtration


@dataclass
class FiltrationStep:
    """``Tot_k(F)`` with its quotient ``Tot_k / Tot_{k+1}``."""

    k: int
    sub: TotalisedComplex
    quotient: TotalisedComplex
    expected_quotient: FreeComplex

    @property
    def quotient_matches(self):
        return self.quotient.complex == self.expected_quotient


def _require_cube(F):
    if isinstance(F, SpecialCubeData):
        failure = verify_special(F).first_failure
        if failure is not None:
            raise ContractViolation(
                f"Not a special cube: {failure.kind} identity fails at {elements(failure.subset)}",
                where=elements(failure.subset),
            )
    else:
        defects = d_squared(F)
        if defects:
            B, A = min(defects)
            raise ContractViolation(
                f"Not a cube: D∘D has a nonzero block at ({elements(B)}, {elements(A)})",
                where=(elements(B), elements(A)),
            )


def filtration(F, k):
    """Subcomplex of the summands with ``#A >= k``; ``k`` is clamped to ``0..n+1``.

    The quotient by the next step is compared with ``⊕_{#A=k} Σ^k F(A)``.

    Raises:
        ContractViolation: if ``F`` is not a cube
    """
    _require_cube(F)
    k = max(0, min(F.n + 1, k))
    total = totalise(F)
    sub = total.restrict([A for A in subsets(F.n) if size(A) >= k])
    layer = [A for A in subsets(F.n) if size(A) == k]
    quotient = total.restrict(layer)
    expected = FreeComplex(F.ring, {})
    for A in layer:
        expected = expected.direct_sum(shift(_vertex(F, A), -k))
    return FiltrationStep(k, sub, quotient, expected)


def check_trivial_acyclic(C, maps):
    """Totalisation of ``Triv(C; f...)``, and whether it is acyclic; the latter
    is guaranteed when some ``f_k`` is invertible."""
    total = totalise(trivial_cube(C, maps))
    return total, is_acyclic(total.complex)
