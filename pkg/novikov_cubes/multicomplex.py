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
Multicomplexes with ``n + 1`` anticommuting differentials on finite windows.

A position is a tuple ``(a_1, ..., a_n, l)``: the first ``n`` coordinates are
the multidegree ``a`` and the last one the degree in direction ``n + 1``.
Direction ``i`` (1-based) raises coordinate ``i`` by one. Families of vectors
indexed by multidegree, such as cochains of a totalisation in total degree
``m``, are dicts ``a -> sparse vector`` at position ``(a, m - |a|)``.
"""
import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .cubes import size, subsets, total_incidence, totalise, trivial_cube
from .exceptions import (
    InternalConsistencyError,
    PreconditionError,
    StructuralError,
)
from .homalg import (
    FreeComplex,
    SparseMatrix,
    SummandIndex,
    TotalisedComplex,
    add_vectors,
    assemble_graded,
    cohomology,
    solve_linear,
)
from .rings import LaurentRing

logger = logging.getLogger(__name__)


def _step(position, i):
    moved = list(position)
    moved[i - 1] += 1
    return tuple(moved)


def _back(a, j):
    moved = list(a)
    moved[j - 1] -= 1
    return tuple(moved)


def _order_key(a):
    # reversed coordinates: 0/1 multidegrees then follow the bitmask order of subsets
    return tuple(reversed(a))


class MultiComplex:
    """Free modules at finitely many positions with differentials ``d_i``.

    Args:
        ring (LaurentRing): ring of the modules
        n (int): number of multidegree coordinates; there are ``n + 1`` directions
        ranks (dict[tuple, int]): rank per position
        differentials (dict[tuple[int, tuple], SparseMatrix]): ``d_i`` leaving
            a position, keyed by ``(i, position)``; missing blocks are zero
        labels (dict[tuple, list]): optional splitting of a position into
            labelled summands, as ``[(label, rank), ...]`` in block order
        outflow (dict): differentials leaving the window, kept for inspection
        region (iterable): multidegrees on which the multicomplex is known;
            ``None`` means it vanishes away from its positions
    """

    def __init__(self, ring, n, ranks, differentials=None, labels=None, outflow=None, region=None):
        if not isinstance(ring, LaurentRing):
            ring = LaurentRing(ring, 0)
        self.ring = ring
        self.n = n
        self.ranks = {}
        for position, r in ranks.items():
            position = tuple(position)
            if len(position) != n + 1:
                raise StructuralError(f"Position {position} needs {n + 1} coordinates")
            if r:
                self.ranks[position] = r
        self.differentials = {}
        for (i, position), matrix in (differentials or {}).items():
            position = tuple(position)
            if not 1 <= i <= n + 1:
                raise StructuralError(f"Direction {i} outside 1..{n + 1}")
            expected = (self.rank(_step(position, i)), self.rank(position))
            if matrix.shape != expected:
                raise StructuralError(f"d_{i} at {position} has shape {matrix.shape}, expected {expected}")
            if not matrix.is_zero():
                self.differentials[(i, position)] = matrix
        self.labels = {}
        for position, parts in (labels or {}).items():
            position = tuple(position)
            if sum(r for _, r in parts) != self.rank(position):
                raise StructuralError(f"Labels at {position} do not add up to rank {self.rank(position)}")
            self.labels[position] = [(label, r) for label, r in parts if r]
        self.outflow = dict(outflow or {})
        self.region = None if region is None else frozenset(tuple(a) for a in region)

    def __repr__(self):
        return f"MultiComplex(n={self.n}, {len(self.ranks)} positions, ring={self.ring})"

    @property
    def directions(self):
        return self.n + 1

    @property
    def positions(self):
        return sorted(self.ranks, key=lambda p: (_order_key(p[:-1]), p[-1]))

    @property
    def cells(self):
        """Multidegrees ``a`` carrying at least one nonzero module."""
        return sorted({p[:-1] for p in self.ranks}, key=_order_key)

    def rank(self, position):
        return self.ranks.get(tuple(position), 0)

    def d(self, i, position):
        position = tuple(position)
        if (i, position) in self.differentials:
            return self.differentials[(i, position)]
        return SparseMatrix.zeros(self.ring, self.rank(_step(position, i)), self.rank(position))

    def parts(self, position):
        """Labelled summands of a position with their index ranges."""
        parts = self.labels.get(tuple(position), [(None, self.rank(position))])
        result, start = [], 0
        for label, r in parts:
            result.append((label, range(start, start + r)))
            start += r
        return result

    def check_anticommutation(self):
        """First ``(position, i, j)`` with ``d_i d_j + d_j d_i != 0`` (or ``d_i d_i != 0``
        for ``i == j``), or ``None``."""
        for position in self.positions:
            for i in range(1, self.n + 2):
                for j in range(i, self.n + 2):
                    target = _step(_step(position, i), j)
                    if not self.rank(target):
                        continue
                    total = self.d(j, _step(position, i)) @ self.d(i, position)
                    if i != j:
                        total = total + self.d(i, _step(position, j)) @ self.d(j, position)
                    if not total.is_zero():
                        return position, i, j
        return None

    def column(self, a):
        """The complex in direction ``n + 1`` at multidegree ``a``."""
        a = tuple(a)
        levels = [p[-1] for p in self.ranks if p[:-1] == a]
        ranks = {l: self.rank(a + (l,)) for l in levels}
        blocks = {l: self.d(self.n + 1, a + (l,)) for l in levels if self.rank(a + (l + 1,))}
        return FreeComplex(self.ring, ranks, blocks, check=False)

    def cohomology_in_direction(self, a):
        return cohomology(self.column(a))

    def is_exact_in_last_direction(self, cells=None):
        """Whether every column over ``cells`` (default: all) is acyclic."""
        return all(self.cohomology_in_direction(a).is_acyclic for a in (cells or self.cells))

    def apply_total(self, family, m):
        """``d = d_1 + ... + d_{n+1}`` on a family in total degree ``m``,
        restricted to the positions of the window."""
        result = {}
        for a, vector in family.items():
            a = tuple(a)
            position = a + (m - sum(a),)
            for i in range(1, self.n + 2):
                target = _step(position, i)
                if not self.rank(target) or not vector:
                    continue
                image = self.d(i, position).apply(vector)
                if image:
                    key = target[:-1]
                    result[key] = add_vectors(result.get(key, {}), image)
        return {a: v for a, v in result.items() if v}


# ==========================================================
# totalisations


def _summands(E, split):
    """Summand keys with their ranks and the ``(position, index range)`` they occupy."""
    ranks, spans = {}, {}
    for position in E.positions:
        a, degree = position[:-1], sum(position)
        if split:
            for label, span in E.parts(position):
                key = (a, label)
                ranks.setdefault(key, {})[degree] = len(span)
                spans[(key, degree)] = (position, span)
        else:
            ranks.setdefault(a, {})[degree] = E.rank(position)
            spans[(a, degree)] = (position, range(E.rank(position)))
    if split:
        keys = sorted(ranks, key=lambda k: (_order_key(k[0]), k[1]))
    else:
        keys = sorted(ranks, key=_order_key)
    return keys, ranks, spans


def tot_sum(E, split_labels=False, check=True):
    """Direct-sum totalisation ``⊕_a E^{(a, k - |a|)}`` with ``d = d_1 + ... + d_{n+1}``.

    Summands are keyed by the multidegree ``a``, or by ``(a, label)`` when
    ``split_labels`` is set.

    Raises:
        StructuralError: if ``check`` is set and ``d∘d != 0``
    """
    keys, ranks, spans = _summands(E, split_labels)
    index = SummandIndex(keys, ranks)
    by_position = {}
    for (key, degree), (position, span) in spans.items():
        by_position.setdefault(position, []).append((key, span))
    pieces = []
    for (i, position), matrix in E.differentials.items():
        target = _step(position, i)
        degree = sum(position)
        for source_key, source_span in by_position[position]:
            for target_key, target_span in by_position[target]:
                block = matrix.submatrix(list(target_span), list(source_span))
                pieces.append((degree, target_key, source_key, block))
    D = assemble_graded(E.ring, index, index, 1, pieces)
    return TotalisedComplex(FreeComplex(E.ring, index.totals, D, check=check), index)


@dataclass(frozen=True)
class TruncationWindow:
    """Multidegrees ``a`` with ``min(a) >= hook`` and ``|a| <= bound``."""

    n: int
    hook: int
    bound: int

    def contains(self, a):
        a = tuple(a)
        if len(a) != self.n:
            return False
        if self.n == 0:
            return 0 <= self.bound
        return min(a) >= self.hook and sum(a) <= self.bound

    def positions(self):
        """Window multidegrees by increasing ``|a|``."""
        if self.n == 0:
            return [()] if self.bound >= 0 else []
        top = self.bound - (self.n - 1) * self.hook
        if top < self.hook:
            return []
        cells = [
            a for a in itertools.product(range(self.hook, top + 1), repeat=self.n) if sum(a) <= self.bound
        ]
        return sorted(cells, key=lambda a: (sum(a), _order_key(a)))

    def interior(self, a):
        """Whether every ``d_j`` leaving ``a`` stays inside the window."""
        return self.contains(a) and sum(a) < self.bound

    def to_dict(self):
        return {"n": self.n, "hook": self.hook, "bound": self.bound}


def restrict_window(E, window):
    """The multicomplex on the positions whose multidegree lies in ``window``.

    Differentials leaving the window are moved to ``outflow``.
    """
    ranks = {p: r for p, r in E.ranks.items() if window.contains(p[:-1])}
    differentials, outflow = {}, dict(E.outflow)
    for (i, position), matrix in E.differentials.items():
        if position not in ranks:
            continue
        if _step(position, i) in ranks:
            differentials[(i, position)] = matrix
        else:
            outflow[(i, position)] = matrix
    labels = {p: parts for p, parts in E.labels.items() if p in ranks}
    if outflow:
        logger.debug("window %s drops %d outgoing blocks", window, len(outflow) - len(E.outflow))
    region = None if E.region is None else [a for a in E.region if window.contains(a)]
    return MultiComplex(E.ring, E.n, ranks, differentials, labels, outflow, region)


@dataclass
class TruncatedTotal:
    """Finite stand-in for the truncated product totalisation on a window."""

    window: TruncationWindow
    multicomplex: MultiComplex
    total: TotalisedComplex

    @property
    def complex(self):
        return self.total.complex

    @property
    def outflow(self):
        return self.multicomplex.outflow


def tr_tot(E, window):
    """Truncated product totalisation of ``E`` restricted to ``window``.

    Positions of the window are taken as a quotient of the totalisation on
    ``min(a) >= hook``, so the result is a complex; blocks leaving through
    ``|a| = bound`` are recorded as outflow.
    """
    if window.n != E.n:
        raise StructuralError(f"Window has {window.n} coordinates, the multicomplex {E.n}")
    restricted = restrict_window(E, window)
    return TruncatedTotal(window, restricted, tot_sum(restricted))


# ==========================================================
# constructions


def from_trivial_cube(C, maps):
    """The ``(n + 1)``-complex whose totalisation is ``Tot Triv(C; f_1, ..., f_n)``.

    ``C^k`` sits at ``(ε_1, ..., ε_n, k)`` with ``ε_i ∈ {0, 1}``;
    ``d_{n+1} = (-1)^{ε_1 + ... + ε_n} d`` and ``d_k = (-1)^{ε_1 + ... + ε_{k-1}} f_k``.
    """
    data = trivial_cube(C, maps)
    n = data.n
    ranks, differentials = {}, {}
    for eps in itertools.product((0, 1), repeat=n):
        for l in C.degrees:
            position = eps + (l,)
            ranks[position] = C.rank(l)
            d = C.d(l)
            if not d.is_zero():
                differentials[(n + 1, position)] = d * (-1) ** sum(eps)
            for k in range(1, n + 1):
                if eps[k - 1] == 0:
                    fk = data.f[k].block(l)
                    if not fk.is_zero():
                        differentials[(k, position)] = fk * (-1) ** sum(eps[: k - 1])
    return MultiComplex(C.ring, n, ranks, differentials)


def partial_tot_2complex(C, maps):
    """The 2-complex ``D^{p,q} = ⊕_{#A=p} C^q`` with vertical ``(-1)^p d`` and
    horizontal ``[A⊔j:A] f_j``, labelled by the subsets ``A``."""
    data = trivial_cube(C, maps)
    n = data.n
    ranks, differentials, labels = {}, {}, {}
    layers = {p: [A for A in subsets(n) if size(A) == p] for p in range(n + 1)}
    for p, layer in layers.items():
        for q in C.degrees:
            r = C.rank(q)
            position = (p, q)
            ranks[position] = len(layer) * r
            labels[position] = [(A, r) for A in layer]
            vertical = C.d(q)
            if not vertical.is_zero():
                entries = {}
                target_rank = C.rank(q + 1)
                for slot in range(len(layer)):
                    for (i, j), value in vertical.entries.items():
                        entries[(slot * target_rank + i, slot * r + j)] = value * (-1) ** p
                differentials[(2, position)] = SparseMatrix._raw(
                    C.ring, (len(layer) * target_rank, len(layer) * r), entries
                )
            if p == n:
                continue
            upper = layers[p + 1]
            entries = {}
            for slot, A in enumerate(layer):
                for j in range(1, n + 1):
                    if A & (1 << (j - 1)):
                        continue
                    B = A | (1 << (j - 1))
                    sign = total_incidence(B, A)
                    row = upper.index(B) * r
                    for (i, k), value in data.f[j].block(q).entries.items():
                        key = (row + i, slot * r + k)
                        total = entries[key] + value * sign if key in entries else value * sign
                        if total:
                            entries[key] = total
                        else:
                            entries.pop(key)
            if entries:
                differentials[(1, position)] = SparseMatrix._raw(
                    C.ring, (len(upper) * r, len(layer) * r), entries
                )
    return MultiComplex(C.ring, 1, ranks, differentials, labels)


def subset_totalisation(E):
    """``tot_sum`` of a labelled 2-complex with summands renamed to the subsets
    ``A`` in bitmask order, comparable block by block with ``totalise``."""
    return tot_sum(E, split_labels=True).relabel(lambda key: key[1], order=lambda A: A)


def box(n, radius):
    return list(itertools.product(range(-radius, radius + 1), repeat=n))


def realize_L(F, radius=2):
    """The multicomplex ``Ł(F)`` on the box ``[-radius, radius]^n``.

    At multidegree ``a`` the column is ``T = Tot F`` shifted by ``|a|``: the
    position ``(a, l)`` holds ``T^{l + |a|}`` split into the summands ``A``.
    ``d_{n+1}`` is the differential of ``T`` and ``d_k`` sends the summand
    ``A`` with ``k ∉ A`` to ``A⊔k`` by ``-[A⊔k:A]`` times the identity.
    """
    T = totalise(F)
    n = F.n
    cells = box(n, radius)
    inside = set(cells)
    ranks, differentials, labels, outflow = {}, {}, {}, {}
    moves = {}
    for k in T.complex.degrees:
        pieces = {}
        for A in T.index.keys_in(k):
            for j in range(1, n + 1):
                if A & (1 << (j - 1)):
                    continue
                B = A | (1 << (j - 1))
                sign = -total_incidence(B, A)
                for s, t in zip(T.index.span(k, A), T.index.span(k + 1, B)):
                    pieces.setdefault(j, {})[(t, s)] = sign
        for j, entries in pieces.items():
            moves[(j, k)] = SparseMatrix(T.ring, (T.complex.rank(k + 1), T.complex.rank(k)), entries)
    for a in cells:
        for k in T.complex.degrees:
            position = a + (k - sum(a),)
            ranks[position] = T.complex.rank(k)
            labels[position] = [(A, T.index.rank(A, k)) for A in T.index.keys_in(k)]
            d = T.complex.d(k)
            if not d.is_zero() and T.complex.rank(k + 1):
                differentials[(n + 1, position)] = d
            for j in range(1, n + 1):
                if (j, k) not in moves:
                    continue
                if _step(position, j)[:-1] in inside:
                    differentials[(j, position)] = moves[(j, k)]
                else:
                    outflow[(j, position)] = moves[(j, k)]
    E = MultiComplex(T.ring, n, ranks, differentials, labels, outflow, region=cells)
    failure = E.check_anticommutation()
    if failure is not None:
        position, i, j = failure
        raise InternalConsistencyError(f"d_{i} and d_{j} do not anticommute at {position}")
    return E


@dataclass
class TorusComparison:
    """Blockwise comparison of a windowed ``Ł(F)`` with the mapping torus."""

    radius: int
    checked: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def matches(self):
        return not self.mismatches

    def to_dict(self):
        return {
            "radius": self.radius,
            "checked_blocks": self.checked,
            "matches": self.matches,
            "mismatches": [{"degree": k, "cell": list(a), "shift": list(delta)} for k, a, delta in self.mismatches],
        }


def _split_by_torus_exponent(matrix, m, ring):
    """``{δ: matrix}`` with ``matrix = Σ_δ x^δ · matrix_δ`` in the last variables."""
    parts = {}
    for key, value in matrix.entries.items():
        for exponent, coefficient in value.terms.items():
            delta = tuple(exponent[m:])
            entry = ring.monomial(tuple(exponent[:m]), coefficient)
            slot = parts.setdefault(delta, {})
            slot[key] = slot[key] + entry if key in slot else entry
    return {
        delta: SparseMatrix(ring, matrix.shape, entries) for delta, entries in parts.items()
    }


def compare_with_torus(E, torus, radius):
    """Compare ``tot_sum(Ł(F))`` with the mapping torus under ``t·x^a ↔ t at a``.

    The coefficient of ``x^δ`` in the torus differential must equal the block
    from multidegree ``a`` to ``a + δ`` for all window cells where both ends lie
    inside the box, and only ``δ = 0`` and ``δ = e_k`` may occur.
    """
    n = E.n
    m = E.ring.nvars
    total = tot_sum(E, check=False)
    report = TorusComparison(radius)
    allowed = {tuple(0 for _ in range(n))} | {tuple(int(i == k) for i in range(n)) for k in range(n)}
    cells = set(box(n, radius))
    for k in torus.complex.degrees:
        parts = _split_by_torus_exponent(torus.complex.d(k), m, E.ring)
        for delta in set(parts) | allowed:
            expected = parts.get(delta)
            for a in cells:
                target = tuple(x + y for x, y in zip(a, delta))
                if target not in cells:
                    if delta not in allowed and expected is not None and not expected.is_zero():
                        report.mismatches.append((k, a, delta))
                    continue
                block = total.block(k, target, a)
                report.checked += 1
                if expected is None:
                    if not block.is_zero():
                        report.mismatches.append((k, a, delta))
                elif block != expected:
                    report.mismatches.append((k, a, delta))
    if report.mismatches:
        logger.warning("Ł(F) and the mapping torus differ in %d blocks", len(report.mismatches))
    return report


# ==========================================================
# contraction


@dataclass
class ContractionResult:
    """Preimage ``b`` of a cocycle ``c`` of the truncated product on a window."""

    window: TruncationWindow
    degree: int
    preimage: dict
    verified: bool
    interior: list = field(default_factory=list)


def _dense(vector, length, base):
    array = np.full(length, base.zero, dtype=object)
    for i, value in vector.items():
        array[i] = value.constant_value()
    return array


def _sparse(array, ring):
    return {i: ring.constant(v) for i, v in enumerate(array) if v != 0}


def contract_cocycle(E, c, window, m):
    """Solve ``d(b) = c`` for a cocycle ``c`` of total degree ``m`` on ``window``.

    ``b_a`` is zero below the hook; by increasing ``|a|`` each ``b_a`` solves
    ``d_{n+1}(b_a) = c_a - Σ_j d_j(b_{a - e_j})`` over the coefficient ring.

    Raises:
        PreconditionError: if the window leaves ``E``, a column is not exact,
            ``c`` has support outside the window or is not a cocycle there
        InternalConsistencyError: if a step has no solution
    """
    n = E.n
    base = E.ring.base
    cells = window.positions()
    present = set(E.cells)
    missing = [a for a in cells if E.region is not None and a not in E.region]
    if missing:
        raise PreconditionError(f"The window reaches {missing[0]}, outside the multicomplex")
    stray = [a for a, v in c.items() if v and not window.contains(a)]
    if stray:
        raise PreconditionError(f"The cocycle has support at {tuple(stray[0])}, outside the window")
    for a in cells:
        if a in present and not E.cohomology_in_direction(a).is_acyclic:
            raise PreconditionError(f"The column at {a} is not exact")
    c = {tuple(a): v for a, v in c.items() if v}
    boundary = E.apply_total(c, m)
    bad = [a for a, v in boundary.items() if v and window.contains(a)]
    if bad:
        raise PreconditionError(f"The family is not a cocycle at {bad[0]}")
    b = {}
    for a in cells:
        position = a + (m - 1 - sum(a),)
        rhs = dict(c.get(a, {}))
        for j in range(1, n + 1):
            previous = _back(a, j)
            if previous in b:
                rhs = add_vectors(rhs, E.d(j, previous + (m - 1 - sum(previous),)).apply(b[previous]), -1)
        if not rhs:
            continue
        vertical = E.d(n + 1, position)
        if not vertical.ncols:
            raise InternalConsistencyError(f"No preimage at {a}: the column has no module in degree {position[-1]}")
        x = solve_linear(vertical, _dense(rhs, vertical.nrows, base), base)
        if x is None:
            raise InternalConsistencyError(f"The vertical system at {a} has no solution")
        b[a] = _sparse(x, E.ring)
        logger.debug("solved cell %s of total degree %d", a, m)
    image = E.apply_total(b, m - 1)
    verified = all(image.get(a, {}) == c.get(a, {}) for a in cells)
    if not verified:
        raise InternalConsistencyError("d(b) differs from c on the window")
    return ContractionResult(window, m, b, verified, cells)
