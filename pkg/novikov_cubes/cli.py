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
Command line interface.

Every subcommand prints a JSON report on standard output and a one-line
summary on standard error. Exit codes: 0 certified positive, 1 certified
negative, 2 inconclusive, 3 input error.
"""
import argparse
import json
import logging
import sys
from fractions import Fraction

from . import formats
from ._version import __version__
from .cubes import derive_cube, elements, totalise, verify_special
from .exceptions import NovikovCubesError, ParseError
from .findom import FINITELY_DOMINATED, INCONCLUSIVE, DominationInput, FinitenessChecker
from .homalg import GradedMap, cohomology
from .multicomplex import TruncationWindow, realize_L, tr_tot
from .tori import mapping_torus, mather_J, mather_K
from .toric import nov_acyclicity

logger = logging.getLogger(__name__)

POSITIVE, NEGATIVE, UNDECIDED, INPUT_ERROR = 0, 1, 2, 3

_STATUS_CODES = {"acyclic": POSITIVE, "nonacyclic": NEGATIVE, "inconclusive": UNDECIDED}


def _emit(data, summary):
    print(formats.dumps(data))
    logger.info(summary)


def _checker(args):
    options = {}
    for key in ("order", "max_order", "seed"):
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return FinitenessChecker(**options)


def _parse_point(text):
    try:
        return tuple(Fraction(v.strip()) for v in text.split(","))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Cannot parse the point {text!r}") from e


# ==========================================================
# subcommands


def check_cube(args):
    report = verify_special(formats.cube_from_dict(formats.load(args.cube)))
    failure = report.first_failure
    summary = "cube" if report else f"not a cube: {failure.kind} identity fails at {elements(failure.subset)}"
    _emit(report.to_dict(), summary)
    return POSITIVE if report else NEGATIVE


def derive(args):
    C, D, alpha, beta, G, hs = formats.derive_input_from_dict(formats.load(args.input))
    cube = derive_cube(C, D, alpha, beta, G, hs, homotopy_radius=args.homotopy_radius)
    report = verify_special(cube)
    _emit({"cube": formats.cube_to_dict(cube), "check": report.to_dict()}, f"derived cube with n = {cube.n}: {'cube' if report else 'not a cube'}")
    return POSITIVE if report else NEGATIVE


def totalise_command(args):
    T = totalise(formats.cube_from_dict(formats.load(args.cube)))
    summands = {str(l): [elements(A) for A in T.index.keys_in(l)] for l in T.complex.degrees}
    _emit({"complex": formats.complex_to_dict(T.complex), "summands": summands}, f"totalisation with ranks {T.complex.ranks}")
    return POSITIVE


def torus(args):
    data = formats.load(args.input)
    mather = {}
    if "witness" in data or "D" in data:
        C, D, alpha, beta, G, hs = formats.derive_input_from_dict(data)
        cube = derive_cube(C, D, alpha, beta, G, hs, homotopy_radius=args.homotopy_radius)
        if args.check_mather:
            if not all(isinstance(m, GradedMap) for m in (alpha, beta, G)):
                raise ParseError("The Mather comparison maps need a witness given by matrices")
            mather["K"] = mather_K(D, alpha @ beta, G, hs)
            if C.ring == D.ring:
                mather["J"] = mather_J(C, D, alpha, beta, G, hs)
    else:
        if args.check_mather:
            raise ParseError("--check-mather needs a derive document with the witness (C, alpha, beta, G)")
        cube = formats.cube_from_dict(data)
    result = mapping_torus(cube)
    passed = all(mm.commutes for mm in mather.values())
    report = {"complex": formats.complex_to_dict(result.complex)}
    if args.check_mather:
        report["mather"] = {k: v.to_dict() for k, v in sorted(mather.items())}
    _emit(report, f"mapping torus over {result.ring} with ranks {result.complex.ranks}")
    return POSITIVE if passed else NEGATIVE


def cohomology_command(args):
    C = formats.complex_from_dict(formats.load(args.complex))
    if args.at:
        C = C.specialize(_parse_point(args.at))
    report = cohomology(C)
    _emit(report.to_dict(), f"{'acyclic' if report.is_acyclic else 'not acyclic'}, Betti numbers {report.betti()}")
    return POSITIVE if report.is_acyclic else NEGATIVE


def tr_tot_command(args):
    checker = _checker(args)
    cube = formats.cube_from_dict(formats.load(args.cube))
    radius = checker.radius if args.radius is None else args.radius
    E = realize_L(cube, radius)
    window = TruncationWindow(cube.n, args.hook, args.bound)
    truncated = tr_tot(E, window)
    report = {
        "region": {"radius": radius},
        "multicomplex": formats.multicomplex_to_dict(truncated.multicomplex, window),
        "complex": formats.complex_to_dict(truncated.complex),
    }
    _emit(report, f"truncated totalisation on {window} with ranks {truncated.complex.ranks}")
    return POSITIVE


def novikov_test(args):
    checker = _checker(args)
    D = formats.complex_from_dict(formats.load(args.complex))
    cone = formats.cone_from_text(args.cone, D.ring.nvars)
    tau = cone.dual if args.dual else cone
    weight = None if args.weight is None else tuple(int(a) for a in args.weight.split(","))
    if weight is None:
        result = checker.cone_test(D, tau)
    else:
        result = nov_acyclicity(D, tau, checker.order, weight)
    _emit(result.to_dict(), f"{result.status} over {tau.to_list()} at order {result.order}")
    return _STATUS_CODES[result.status]


def findom(args):
    checker = _checker(args)
    D = formats.complex_from_dict(formats.load(args.complex))
    fan = formats.fan_from_dict(formats.load(args.fan)) if args.fan else None
    witness = formats.witness_from_dict(formats.load(args.witness), D) if args.witness else None
    inp = DominationInput(D, fan, witness)
    report = checker.toric_findom_test(inp)
    data = report.to_dict()
    if witness is not None:
        subspaces = [tuple(int(k) for k in s.split(",")) for s in args.subspace or []]
        consequences = checker.verify_findom_consequences(inp, subspaces)
        data["consequences"] = consequences.to_dict()
        if report.conclusion != FINITELY_DOMINATED and consequences.certified:
            logger.warning("a valid witness was given but the fan test concluded %s", report.conclusion)
    _emit(data, report.summary())
    if report.conclusion == FINITELY_DOMINATED:
        return POSITIVE
    return UNDECIDED if report.conclusion == INCONCLUSIVE else NEGATIVE


# ==========================================================
# parser


def _add_checker_options(parser):
    parser.add_argument("--order", type=int, help="initial truncation order of Novikov series")
    parser.add_argument("--max-order", dest="max_order", type=int, help="bound for order doubling")
    parser.add_argument("--seed", type=int, help="seed of random specialization points")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="novikov-cubes",
        description="Homotopy commutative cubes, mapping tori and finite-domination tests.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log debug messages to standard error")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-cube", help="check the special-cube identities")
    p.add_argument("cube")
    p.set_defaults(func=check_cube)

    p = sub.add_parser("derive", help="build the derived cube of a domination witness")
    p.add_argument("input")
    p.add_argument("--homotopy-radius", dest="homotopy_radius", type=int, default=FinitenessChecker.homotopy_radius)
    p.set_defaults(func=derive)

    p = sub.add_parser("totalise", help="totalisation of a special cube")
    p.add_argument("cube")
    p.set_defaults(func=totalise_command)

    p = sub.add_parser("torus", help="mapping torus of a cube or of a derived cube")
    p.add_argument("input")
    p.add_argument("--check-mather", dest="check_mather", action="store_true")
    p.add_argument("--homotopy-radius", dest="homotopy_radius", type=int, default=FinitenessChecker.homotopy_radius)
    p.set_defaults(func=torus)

    p = sub.add_parser("cohomology", help="cohomology over a principal ideal domain")
    p.add_argument("complex")
    p.add_argument("--at", help="specialize the variables at a point such as 2,-1/3 first")
    p.set_defaults(func=cohomology_command)

    p = sub.add_parser("tr-tot", help="truncated totalisation of the multicomplex of a cube")
    p.add_argument("cube")
    p.add_argument("--radius", type=int)
    p.add_argument("--hook", type=int, default=FinitenessChecker._config["window"]["hook"])
    p.add_argument("--bound", type=int, default=FinitenessChecker._config["window"]["bound"])
    p.set_defaults(func=tr_tot_command)

    p = sub.add_parser("novikov-test", help="acyclicity over a Novikov ring")
    p.add_argument("complex")
    p.add_argument("--cone", required=True, help="generators such as 1,0;0,1")
    p.add_argument("--dual", action="store_true", help="use the dual of the given cone")
    p.add_argument("--weight", help="integer weight such as 1,1")
    _add_checker_options(p)
    p.set_defaults(func=novikov_test)

    p = sub.add_parser("findom", help="finite-domination test over a complete fan")
    p.add_argument("complex")
    p.add_argument("--fan", help="fan file; the standard fan when omitted")
    p.add_argument("--witness", help="witness file for the consequence checks")
    p.add_argument("--subspace", action="append", help="variables of a subspace such as 1,2")
    _add_checker_options(p)
    p.set_defaults(func=findom)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(message)s" if not args.verbose else "%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (NovikovCubesError, ValueError, OSError, json.JSONDecodeError) as e:
        logger.error("error: %s", e)
        return INPUT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
