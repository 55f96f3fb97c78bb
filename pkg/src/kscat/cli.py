# KSCAT
# Copyright (C) 2025 The kscat authors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.

# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
"""Command-line front end.

Exit codes:
    0: Every verdict passes or holds.
    1: A verdict fails, such as `d^2 != 0` or a violated estimate.
    2: Inconclusive within the caps, or the input could not be parsed.

Reports go to stdout; logs go to stderr.

Copyright (c) The kscat authors
"""

import argparse
import logging
import sys
import time
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from kscat import corpus, invariants, sullivan, utils
from kscat.cohomology import CapError, cohomology
from kscat.config import Caps
from kscat.corpus import AlgebraSpec, GenerationError
from kscat.graded import ParseError
from kscat.modules import LiftError, ModuleError
from kscat.sullivan import StructureError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INCONCLUSIVE = 2

Outcome = Tuple[Dict[str, Any], int]


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--max-degree", type=int, help="Degree cap N.")
    parser.add_argument("--max-wordlength", type=int, help="Wordlength cap M.")
    parser.add_argument("--q-cap", type=int, help="Largest fiber wordlength bound.")
    output = parser.add_mutually_exclusive_group()
    output.add_argument(
        "--json", dest="format", action="store_const", const="json", help="JSON report."
    )
    output.add_argument(
        "--text", dest="format", action="store_const", const="text", help="Text report."
    )
    parser.add_argument(
        "--timing", action="store_true", help="Include wall time in the report."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress.")
    parser.add_argument("-q", "--quiet", action="store_true", help="Log errors only.")
    parser.set_defaults(format="json")
    return parser


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="kscat",
        description="Exact computations with Koszul-Sullivan complexes.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str, with_input: bool = True) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=[common], help=help)
        if with_input:
            sub.add_argument("input", help="Path to an algebra document (JSON).")
        return sub

    command("validate", "Check d^2 = 0, the Sullivan condition and minimality.")
    command("cohomology", "Cohomology dimensions and representatives up to N.")
    toomer = command("toomer", "Toomer invariant relative to a generator subset.")
    toomer.add_argument(
        "--subset", choices=("base", "fiber", "all"), default="all",
        help="Generators whose wordlength is bounded.",
    )
    toomer.add_argument(
        "--assume-concentrated", action="store_true",
        help="Assert there is no cohomology above N.",
    )
    command("fiber", "Toomer invariants of the fiber windows.")
    bound = command("verify-bound", "Compare the total Toomer invariant with the estimate.")
    bound.add_argument(
        "--no-chain", action="store_true", help="Skip the projection chain evidence."
    )
    command("cylinder-demo", "Exercise the mapping cylinder and lifting over the input.")
    run = command("corpus-run", "Run the pipeline over a corpus.", with_input=False)
    run.add_argument("inputs", nargs="*", help="Algebra documents; the built-in corpus if none.")
    run.add_argument("--count", type=int, default=0, help="Number of random instances.")
    run.add_argument("--seed", type=int, help="Seed of the first random instance.")
    run.add_argument("--jobs", type=int, default=1, help="Worker processes.")
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.WARNING
    if args.verbose:
        level = logging.INFO
    if args.quiet:
        level = logging.ERROR
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def _overrides(args: argparse.Namespace) -> Dict[str, Optional[int]]:
    return {
        "max_degree": args.max_degree,
        "max_wordlength": args.max_wordlength,
        "q_cap": args.q_cap,
    }


def _load(args: argparse.Namespace) -> Tuple[AlgebraSpec, Caps]:
    spec = corpus.load_spec(args.input)
    caps = spec.caps(Caps.from_env()).replace(**_overrides(args))
    return spec, caps


# -----------------------------------------------------------------------------
# Commands.
# -----------------------------------------------------------------------------


def _validate(args: argparse.Namespace, spec: AlgebraSpec, caps: Caps) -> Outcome:
    result = corpus.validate(spec)
    return result, EXIT_OK if result["ok"] else EXIT_FAILURE


def _cohomology(args: argparse.Namespace, spec: AlgebraSpec, caps: Caps) -> Outcome:
    complex = corpus.spec_to_complex(spec)
    window = cohomology(complex.cochain_complex(caps.max_degree + 1), 0, caps.max_degree)
    degrees = {}
    for k in range(window.lower, window.upper + 1):
        piece = window[k]
        if piece.dimension:
            degrees[str(k)] = {
                "dimension": piece.dimension,
                "representatives": [
                    str(window.complex.element(r, k)) for r in piece.representatives
                ],
            }
    result = {"dimensions": {str(k): d for k, d in window.dimensions().items()}, "classes": degrees}
    return result, EXIT_OK


def _toomer(args: argparse.Namespace, spec: AlgebraSpec, caps: Caps) -> Outcome:
    extension = corpus.spec_to_extension(spec)
    counted = {
        "base": extension.base_names,
        "fiber": extension.fiber_names,
        "all": None,
    }[args.subset]
    report = invariants.toomer(
        extension.complex,
        counted,
        caps.max_degree,
        caps.max_wordlength,
        assume_concentrated=args.assume_concentrated,
        label=spec.label or "LV",
    )
    return report.to_dict(), EXIT_OK if report.candidate is not None else EXIT_INCONCLUSIVE


def _fiber(args: argparse.Namespace, spec: AlgebraSpec, caps: Caps) -> Outcome:
    extension = corpus.spec_to_extension(spec)
    family = invariants.toomer_fiber_family(
        extension, caps.q_cap, caps.max_degree, caps.max_wordlength
    )
    return family.to_dict(), EXIT_OK if family.n_used is not None else EXIT_INCONCLUSIVE


def _verify_bound(args: argparse.Namespace, spec: AlgebraSpec, caps: Caps) -> Outcome:
    extension = corpus.spec_to_extension(spec)
    verdict = invariants.verify_estimate_e(
        extension,
        caps.max_degree,
        caps.max_wordlength,
        caps.q_cap,
        with_chain=not args.no_chain,
    )
    code = {
        invariants.BoundStatus.HOLDS: EXIT_OK,
        invariants.BoundStatus.VIOLATED: EXIT_FAILURE,
        invariants.BoundStatus.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    }[verdict.status]
    return verdict.to_dict(), code


def _cylinder_demo(args: argparse.Namespace, spec: AlgebraSpec, caps: Caps) -> Outcome:
    extension = corpus.spec_to_extension(spec)
    result = corpus.cylinder_demo(extension, caps.max_degree)
    ok = all(result["checks"].values())
    return result, EXIT_OK if ok else EXIT_FAILURE


_COMMANDS: Dict[str, Callable[[argparse.Namespace, AlgebraSpec, Caps], Outcome]] = {
    "validate": _validate,
    "cohomology": _cohomology,
    "toomer": _toomer,
    "fiber": _fiber,
    "verify-bound": _verify_bound,
    "cylinder-demo": _cylinder_demo,
}


def _corpus_run(args: argparse.Namespace) -> Tuple[Dict[str, Any], int]:
    env = Caps.from_env()
    seed = env.seed if args.seed is None else args.seed
    utils.validate_nonnegative("count", args.count)
    if args.inputs:
        specs: List[AlgebraSpec] = [corpus.load_spec(path) for path in args.inputs]
    else:
        specs = list(corpus.builtin_corpus())
    specs.extend(corpus.random_corpus(seed, args.count))
    records = corpus.run_corpus(specs, env, _overrides(args), jobs=max(args.jobs, 1))
    code = corpus.exit_status(records)
    statuses = [r["status"] for r in records]
    payload = {
        "command": "corpus-run",
        "seed": seed,
        "count": args.count,
        "records": records,
        "summary": {s: statuses.count(s) for s in sorted(set(statuses))},
    }
    return payload, code


# -----------------------------------------------------------------------------
# Output.
# -----------------------------------------------------------------------------


def _format_text(value: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_format_text(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(item)}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}-")
                lines.extend(_format_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
        return lines
    return [f"{pad}{_scalar(value)}"]


def _scalar(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (dict, list)):
        return "none"
    return str(value)


def render(payload: Dict[str, Any], fmt: str) -> str:
    payload = dict(payload, schema=SCHEMA_VERSION)
    if fmt == "text":
        return "\n".join(_format_text(payload))
    return utils.dumps(payload)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Runs the command line and returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args)
    start = time.perf_counter()
    try:
        if args.command == "corpus-run":
            payload, code = _corpus_run(args)
        else:
            spec, caps = _load(args)
            result, code = _COMMANDS[args.command](args, spec, caps)
            payload = {
                "command": args.command,
                "input": {"label": spec.label, "digest": corpus.digest(spec)},
                "caps": caps.to_dict(),
                "result": result,
            }
    except ParseError as err:
        logger.error("Parse error: %s", err)
        return EXIT_INCONCLUSIVE
    except CapError as err:
        logger.error("Cap reached: %s", err)
        return EXIT_INCONCLUSIVE
    except (StructureError, ModuleError, LiftError) as err:
        logger.error("%s", err)
        return EXIT_FAILURE
    except (GenerationError, OSError, ValueError) as err:
        logger.error("%s", err)
        return EXIT_INCONCLUSIVE
    if args.timing:
        payload["wall_time"] = round(time.perf_counter() - start, 6)
    print(render(payload, args.format))
    return code
