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
Finite-domination pipelines over Laurent polynomial rings.

A bounded complex ``D`` of finitely generated free modules over
``L = R[x_1^±, ..., x_n^±]`` is ``R``-finitely dominated if and only if
``D ⊗ R⟪σ^∨⟫`` is acyclic for every nonzero cone ``σ`` of a complete fan.
:class:`FinitenessChecker` runs that test cone by cone and only reports a
conclusion that is backed by certificates.
"""
import json
import logging
import os
import pathlib
import sys
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .exceptions import InternalConsistencyError, ParseError, PreconditionError, StructuralError
from .homalg import FreeComplex
from .tori import DominationWitness, domination_witness
from .toric import Cone, Fan, Inconclusive, NonacyclicCertified, is_complete_fan, nov_acyclicity, ray_fan, standard_fan

logger = logging.getLogger(__name__)

FINITELY_DOMINATED = "FinitelyDominatedCertified"
NOT_FINITELY_DOMINATED = "NotFinitelyDominatedCertified"
INCONCLUSIVE = "Inconclusive"

CONCLUSIONS = (FINITELY_DOMINATED, NOT_FINITELY_DOMINATED, INCONCLUSIVE)


def read_config(path):
    """Read the TOML settings file shipped with the package."""
    with open(path, "rb") as f:
        return tomllib.load(f)


@dataclass
class DominationInput:
    """A complex over a Laurent ring together with the data a test needs.

    Args:
        D (FreeComplex): bounded complex over ``R[x_1^±, ..., x_n^±]``
        fan (Fan): complete fan in rank ``n``; the standard fan when omitted
        witness (DominationWitness): ``(C, α, β, G)`` for the forward direction
        order (int): truncation order; the checker's default when omitted
    """

    D: FreeComplex
    fan: Fan = None
    witness: DominationWitness = None
    order: int = None

    def __post_init__(self):
        n = self.D.ring.nvars
        if self.fan is not None and self.fan.n != n:
            raise StructuralError(f"The fan lives in rank {self.fan.n}, the complex has {n} variables")
        if self.witness is not None and self.witness.D != self.D:
            raise StructuralError("The witness is not a domination of the given complex")


@dataclass
class FindomReport:
    """Per-cone verdicts and the overall conclusion.

    ``verdicts`` holds one dictionary per nonzero fan cone: the cone ``σ``
    under ``"sigma"`` next to the certificate of the test over ``σ^∨``.
    """

    conclusion: str
    verdicts: list = field(default_factory=list)
    fan: dict = None
    fan_check: dict = None
    test: str = "toric"

    def __post_init__(self):
        if self.conclusion not in CONCLUSIONS:
            raise ValueError(f"Unknown conclusion {self.conclusion!r}")

    @property
    def statuses(self):
        return [v["status"] for v in self.verdicts]

    def to_dict(self):
        return {
            "test": self.test,
            "conclusion": self.conclusion,
            "fan": self.fan,
            "fan_check": self.fan_check,
            "verdicts": self.verdicts,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False, indent=2)

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid report: {e}") from e
        try:
            return cls(data["conclusion"], data["verdicts"], data.get("fan"), data.get("fan_check"), data.get("test", "toric"))
        except (KeyError, TypeError) as e:
            raise ParseError(f"Invalid report: missing {e}") from e

    def summary(self):
        counts = {s: self.statuses.count(s) for s in ("acyclic", "nonacyclic", "inconclusive")}
        parts = ", ".join(f"{k} {v}" for k, v in counts.items() if v)
        return f"{self.conclusion} ({len(self.verdicts)} cones: {parts or 'none'})"


def aggregate(statuses):
    """Combine per-cone statuses into a conclusion.

    One non-acyclic cone refutes finite domination; all cones acyclic over a
    complete fan certify it.
    """
    statuses = list(statuses)
    if "nonacyclic" in statuses:
        return NOT_FINITELY_DOMINATED
    if all(s == "acyclic" for s in statuses):
        return FINITELY_DOMINATED
    return INCONCLUSIVE


@dataclass
class ConsequenceReport:
    """Outcome of :meth:`FinitenessChecker.verify_findom_consequences`."""

    witness_kind: str
    torus_ranks: dict
    betti_checked: bool
    mather: dict
    first_orthant: dict
    fan_verdicts: list = field(default_factory=list)
    subspaces: list = field(default_factory=list)
    mather_unchecked: dict = field(default_factory=dict)

    @property
    def certified(self):
        statuses = [self.first_orthant["status"]] + [v["status"] for v in self.fan_verdicts]
        return all(s == "acyclic" for s in statuses)

    def to_dict(self):
        return {
            "witness": self.witness_kind,
            "certified": self.certified,
            "torus_ranks": self.torus_ranks,
            "betti_checked": self.betti_checked,
            "mather": self.mather,
            "mather_unchecked": self.mather_unchecked,
            "first_orthant": self.first_orthant,
            "fan_verdicts": self.fan_verdicts,
            "subspaces": self.subspaces,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False, indent=2)


class FinitenessChecker:
    """Finite-domination tests with configurable truncation and sampling.

    Defaults come from ``NovikovCubesConfig.toml``; the environment variables
    ``NOVIKOV_CUBES_ORDER``, ``NOVIKOV_CUBES_MAX_ORDER`` and
    ``NOVIKOV_CUBES_SEED`` override the file, and keyword options override
    both.

    Keyword Args:
        order (int): initial truncation order of Novikov arithmetic
        max_order (int): inconclusive cones are retried at doubled order up to this bound
        points (int): number of random specialization points
        bound (int): points are drawn from nonzero rationals in ``[-bound, bound]``
        seed (int): seed of the point generator
        radius (int): exponent window of windowed checks
        homotopy_radius (int): monomial window probing homotopy identities
    """

    config_filepath = pathlib.Path(os.path.dirname(sys.modules[__name__].__file__) + "/NovikovCubesConfig.toml")
    _config = read_config(config_filepath)

    order = int(os.environ.get("NOVIKOV_CUBES_ORDER", _config["novikov"]["order"]))
    max_order = int(os.environ.get("NOVIKOV_CUBES_MAX_ORDER", _config["novikov"]["max_order"]))
    points = _config["specialization"]["points"]
    bound = _config["specialization"]["bound"]
    seed = int(os.environ.get("NOVIKOV_CUBES_SEED", _config["specialization"]["seed"]))
    radius = _config["window"]["radius"]
    homotopy_radius = _config["witness"]["homotopy_radius"]

    def __init__(self, **kwargs):
        options = dict(kwargs)
        for key in ("order", "max_order", "points", "bound", "seed", "radius", "homotopy_radius"):
            if key in options:
                setattr(self, key, int(options.pop(key)))
        if options:
            raise ValueError(f"Unknown options: {sorted(options)}")
        if self.order < 1:
            raise ValueError(f"order must be positive, got {self.order}")
        if self.max_order < self.order:
            self.max_order = self.order

    def __repr__(self):
        return f"FinitenessChecker(order={self.order}, max_order={self.max_order}, seed={self.seed})"

    # ==========================================================
    # single cones

    def cone_test(self, D, tau, order=None, weight=None):
        """``nov_acyclicity`` over ``τ``, doubling the order while inconclusive."""
        order = order or self.order
        while True:
            result = nov_acyclicity(D, tau, order, weight)
            if not isinstance(result, Inconclusive) or 2 * order > self.max_order:
                return result
            order *= 2
            logger.debug("inconclusive over %r, retrying at order %d", tau, order)

    def _fan_verdicts(self, D, fan, order):
        verdicts = []
        for sigma in fan.nonzero_cones:
            result = self.cone_test(D, sigma.dual, order)
            verdict = result.to_dict()
            verdict["sigma"] = sigma.to_list()
            verdicts.append(verdict)
            logger.debug("cone %s: %s", sigma.to_list(), result.status)
        return verdicts

    # ==========================================================
    # pipelines

    def ranicki_test(self, D, order=None):
        """One-variable test: ``D`` over ``R[x^±]`` is ``R``-finitely dominated iff
        ``D ⊗ R⟪x⟫`` and ``D ⊗ R⟪x^{-1}⟫`` are acyclic.

        Raises:
            StructuralError: if ``D`` is not over a ring in one variable
        """
        if D.ring.nvars != 1:
            raise StructuralError(f"The one-variable test needs one variable, {D.ring} has {D.ring.nvars}")
        fan = ray_fan()
        verdicts = self._fan_verdicts(D, fan, order)
        report = FindomReport(aggregate(v["status"] for v in verdicts), verdicts, fan.to_dict(), None, "ranicki")
        logger.info("one-variable test: %s", report.conclusion)
        return report

    def toric_findom_test(self, inp):
        """Run the fan criterion on ``inp.D``.

        Raises:
            PreconditionError: if the fan is not complete
        """
        fan = inp.fan if inp.fan is not None else standard_fan(inp.D.ring.nvars)
        check = is_complete_fan(fan)
        if not check:
            raise PreconditionError(f"The fan is not complete: {check.issues[0]}")
        verdicts = self._fan_verdicts(inp.D, fan, inp.order)
        report = FindomReport(aggregate(v["status"] for v in verdicts), verdicts, fan.to_dict(), check.to_dict())
        logger.info("fan test over %d cones: %s", len(verdicts), report.conclusion)
        return report

    def verify_findom_consequences(self, inp, subspaces=()):
        """Check what finite domination implies for a complex with a witness.

        The witness identities are checked first. The mapping torus of the
        derived cube is built for all variables and compared with ``Σ^n D``.
        ``D`` must then be acyclic over power series in the first orthant and
        over ``σ^∨`` for every cone of ``inp.fan``. For each tuple of variables
        in ``subspaces`` the finite complex over those variables is reported.

        Raises:
            PreconditionError: if no witness is given
            ContractViolation: if the witness identities fail
            InternalConsistencyError: if a consequence fails for a valid witness
        """
        witness = inp.witness
        if witness is None:
            raise PreconditionError("Consequences can only be checked for a complex with a domination witness")
        witness.check(self.homotopy_radius)
        D = inp.D
        n = D.ring.nvars
        rng = np.random.default_rng(self.seed)
        torus = domination_witness(witness, points=self.points, rng=rng, bound=self.bound, radius=self.homotopy_radius)
        if torus.betti_checked and not torus.betti_agree:
            raise InternalConsistencyError("The witness torus and the suspension of D have different Betti numbers")
        for kind, mm in torus.mather.items():
            if not mm.commutes:
                raise InternalConsistencyError(f"{kind} is not a cochain map")
        first = self.cone_test(D, Cone.orthant((1,) * n), inp.order) if n else None
        first_orthant = first.to_dict() if first is not None else {"status": "acyclic", "cone": []}
        fan_verdicts = self._fan_verdicts(D, inp.fan, inp.order) if inp.fan is not None else []
        for verdict in [first_orthant] + fan_verdicts:
            if verdict["status"] == NonacyclicCertified.status:
                raise InternalConsistencyError(f"A dominated complex is not acyclic over {verdict['cone']}")
        reports = []
        for variables in subspaces:
            sub = domination_witness(witness, variables=variables, radius=self.homotopy_radius)
            reports.append(sub.to_dict())
        report = ConsequenceReport(
            witness.kind,
            {str(l): r for l, r in sorted(torus.complex.ranks.items())},
            torus.betti_checked,
            {k: v.to_dict() for k, v in sorted(torus.mather.items())},
            first_orthant,
            fan_verdicts,
            reports,
            dict(sorted(torus.mather_unchecked.items())),
        )
        logger.info("consequences of the %s witness: certified %s", witness.kind, report.certified)
        return report


# ==========================================================
# module-level entry points

_default_checker = None


def default_checker():
    global _default_checker
    if _default_checker is None:
        _default_checker = FinitenessChecker()
    return _default_checker


def ranicki_test(D, order=None):
    return default_checker().ranicki_test(D, order)


def toric_findom_test(inp):
    return default_checker().toric_findom_test(inp)


def verify_findom_consequences(inp, subspaces=()):
    return default_checker().verify_findom_consequences(inp, subspaces)
