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
"""Algebra input documents, the built-in corpus and the random instance generator.

An input document is JSON of the form

    {
      "generators": [{"name": "z", "degree": 2, "role": "base"}, ...],
      "differential": {"w": "z^2"},
      "metadata": {"label": "...", "expected": {...}},
      "caps": {"N": 20, "M": 8}
    }

Generators with role `base` span the base of the extension; when no roles are
given the degree-one generators form the base. The `expected` block is carried
through to reports and compared against computed values, but never used by the
computation.

Copyright (c) The kscat authors
"""

import concurrent.futures
import dataclasses
import hashlib
import itertools
import json
import logging
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from kscat import graded, invariants, linalg, modules, sullivan, utils
from kscat.cohomology import CapError, cohomology
from kscat.config import Caps
from kscat.graded import ParseError
from kscat.sullivan import KSComplex, LambdaExtension, StructureError

logger = logging.getLogger(__name__)

ROLES = ("base", "fiber", "plain")

# Largest generator count and degree accepted by the random generator.
MAX_GENERATORS = 6
MAX_GENERATOR_DEGREE = 6


class GenerationError(ValueError):
    """Raised when the random generator exhausts its rejection budget."""


@dataclasses.dataclass(frozen=True)
class GeneratorSpec:
    """A generator of an input document."""

    name: str
    degree: int
    role: str = "plain"

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(
                f"`role` must be one of {ROLES}, but got {self.role!r} for `{self.name}`."
            )

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "degree": self.degree, "role": self.role}


@dataclasses.dataclass(frozen=True)
class AlgebraSpec:
    """An input document describing a complex and its extension structure.

    Attributes:
        generators: The generators, in filtration order.
        differential: Differential expressions keyed by generator name.
        label: A short description.
        expected: Expected values, used only for comparison in reports.
        max_degree: The degree cap of this instance, if it has its own.
        max_wordlength: The wordlength cap of this instance, if it has its own.
    """

    generators: Tuple[GeneratorSpec, ...]
    differential: Mapping[str, str]
    label: str = ""
    expected: Mapping[str, Any] = dataclasses.field(default_factory=dict)
    max_degree: Optional[int] = None
    max_wordlength: Optional[int] = None

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def base_names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators if g.role == "base")

    @property
    def has_roles(self) -> bool:
        return any(g.role != "plain" for g in self.generators)

    def caps(self, default: Caps) -> Caps:
        """Returns `default` with this instance's own caps applied."""
        return default.replace(
            max_degree=self.max_degree, max_wordlength=self.max_wordlength
        )

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            "generators": [g.to_dict() for g in self.generators],
            "differential": {
                name: self.differential[name]
                for name in self.names
                if name in self.differential
            },
            "metadata": {"label": self.label, "expected": dict(self.expected)},
        }
        caps = {
            key: value
            for key, value in (("N", self.max_degree), ("M", self.max_wordlength))
            if value is not None
        }
        if caps:
            result["caps"] = caps
        return result

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "AlgebraSpec":
        if not isinstance(payload, Mapping):
            raise ParseError("An algebra document must be a JSON object")
        if "generators" not in payload:
            raise ParseError("Missing `generators`")
        generators = []
        for entry in payload["generators"]:
            if not isinstance(entry, Mapping) or not {"name", "degree"} <= set(entry):
                raise ParseError(f"Generators need a name and a degree, got {entry!r}")
            try:
                generators.append(
                    GeneratorSpec(entry["name"], entry["degree"], entry.get("role", "plain"))
                )
            except ValueError as err:
                raise ParseError(str(err)) from err
        differential = payload.get("differential", {})
        if not isinstance(differential, Mapping) or not all(
            isinstance(v, str) for v in differential.values()
        ):
            raise ParseError("`differential` must map generator names to expressions")
        metadata = payload.get("metadata", {})
        caps = payload.get("caps", {})
        return cls(
            tuple(generators),
            dict(differential),
            label=metadata.get("label", ""),
            expected=dict(metadata.get("expected") or {}),
            max_degree=caps.get("N"),
            max_wordlength=caps.get("M"),
        )


def loads_spec(text: str) -> AlgebraSpec:
    """Parses an input document from JSON text.

    Raises:
        ParseError: With the line and column of malformed JSON.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, err.lineno, err.colno) from err
    return AlgebraSpec.from_dict(payload)


def load_spec(path: str) -> AlgebraSpec:
    with open(path, encoding="utf-8") as f:
        return loads_spec(f.read())


def dump_spec(spec: AlgebraSpec) -> str:
    return utils.dumps(spec.to_dict())


def digest(spec: AlgebraSpec) -> str:
    """Returns the SHA-256 of the canonical form of `spec`."""
    return hashlib.sha256(dump_spec(spec).encode("utf-8")).hexdigest()


def spec_to_complex(spec: AlgebraSpec) -> KSComplex:
    """Builds the complex of an input document."""
    algebra = graded.graded_algebra([(g.name, g.degree) for g in spec.generators])
    unknown = sorted(set(spec.differential) - set(algebra.names))
    if unknown:
        raise ParseError(f"Differential given for unknown generators {unknown}")
    images = {}
    for name, text in spec.differential.items():
        try:
            images[name] = graded.parse_element(algebra, text)
        except ParseError as err:
            raise ParseError(
                f"In the differential of `{name}`: {err.message}", err.line, err.column
            ) from err
    return sullivan.ks_complex([(g.name, g.degree) for g in spec.generators], images)


def spec_to_extension(spec: AlgebraSpec) -> LambdaExtension:
    """Builds the extension of an input document.

    Raises:
        StructureError: If the base is not closed under d, or the fiber cannot be
            ordered in stages.
    """
    complex = spec_to_complex(spec)
    if spec.has_roles:
        return sullivan.lambda_extension(complex, spec.base_names)
    return sullivan.degree_split_extension(complex)


# -----------------------------------------------------------------------------
# Built-in corpus.
# -----------------------------------------------------------------------------


def _spec(
    label: str,
    generators: Sequence[Tuple[str, int, str]],
    differential: Mapping[str, str],
    expected: Mapping[str, Any],
    max_degree: Optional[int] = None,
    max_wordlength: Optional[int] = None,
) -> AlgebraSpec:
    return AlgebraSpec(
        tuple(GeneratorSpec(*g) for g in generators),
        dict(differential),
        label,
        dict(expected),
        max_degree,
        max_wordlength,
    )


def _even_cohomology(top: int) -> Dict[str, int]:
    return {str(2 * i): 1 for i in range(top + 1)}


def example1() -> AlgebraSpec:
    """`L(z, w)` with `dw = z`, which is contractible."""
    return _spec(
        "example1",
        [("z", 3, "base"), ("w", 2, "fiber")],
        {"w": "z"},
        {"e": 0, "minimal": False, "cohomology": {"0": 1}},
        max_degree=12,
        max_wordlength=8,
    )


def example2() -> AlgebraSpec:
    """`Q[z]` extended by `w` with `dw = z^2`; the base has infinite category."""
    return _spec(
        "example2",
        [("z", 2, "base"), ("w", 3, "fiber")],
        {"w": "z^2"},
        {"e": 1, "minimal": True, "cohomology": {"0": 1, "2": 1}},
        max_degree=20,
        max_wordlength=8,
    )


def example3(m: int = 1, n: int = 1) -> AlgebraSpec:
    """The extension of `L(x, y)`, `dy = x^(m+1)`, by `L(u, v)`, `dv = u^(n+1) - x`.

    The total complex is quasi-isomorphic to `Q[u]/(u^((m+1)(n+1)))`.
    """
    utils.validate_nonnegative("m", m)
    utils.validate_nonnegative("n", n)
    top = (m + 1) * (n + 1) - 1
    small = (m, n) == (1, 1)
    return _spec(
        f"example3(m={m},n={n})",
        [
            ("x", 2 * (n + 1), "base"),
            ("y", 2 * (m + 1) * (n + 1) - 1, "base"),
            ("u", 2, "fiber"),
            ("v", 2 * (n + 1) - 1, "fiber"),
        ],
        {"y": f"x^{m + 1}", "v": f"u^{n + 1} - x"},
        {"e": top, "minimal": False, "cohomology": _even_cohomology(top)},
        max_degree=8 if small else 12,
        max_wordlength=6 if small else 8,
    )


def odd_sphere(k: int = 1) -> AlgebraSpec:
    """The model `L(a)` of the sphere of dimension `2k + 1`."""
    degree = 2 * k + 1
    return _spec(
        f"odd-sphere({degree})",
        [("a", degree, "plain")],
        {},
        {"e": 1, "minimal": True, "cohomology": {"0": 1, str(degree): 1}},
    )


def even_sphere(k: int = 2) -> AlgebraSpec:
    """The model `L(a, b)`, `db = a^2`, of the sphere of dimension `2k`."""
    return _spec(
        f"even-sphere({2 * k})",
        [("a", 2 * k, "base"), ("b", 4 * k - 1, "fiber")],
        {"b": "a^2"},
        {"e": 1, "minimal": True, "cohomology": {"0": 1, str(2 * k): 1}},
    )


def zero_differential() -> AlgebraSpec:
    """`L(a, b)` on odd generators with zero differential."""
    return _spec(
        "zero-differential",
        [("a", 3, "base"), ("b", 5, "fiber")],
        {},
        {"e": 2, "minimal": True, "cohomology": {"0": 1, "3": 1, "5": 1, "8": 1}},
    )


def builtin_corpus() -> Tuple[AlgebraSpec, ...]:
    return (
        example1(),
        example2(),
        example3(1, 1),
        example3(1, 2),
        example3(2, 1),
        odd_sphere(1),
        even_sphere(2),
        zero_differential(),
    )


# -----------------------------------------------------------------------------
# Random instances.
# -----------------------------------------------------------------------------


def _draw_differential(
    rng: np.random.Generator,
    earlier: KSComplex,
    degree: int,
    max_terms: int,
    max_attempts: int,
    repair: bool,
) -> graded.AlgebraElement:
    """Draws a cocycle of `earlier` in `degree`, by rejection and then repair."""
    algebra = earlier.algebra
    monomials = algebra.basis(degree)
    if not monomials:
        return algebra.zero()
    for _ in range(max_attempts):
        count = int(rng.integers(1, min(max_terms, len(monomials)) + 1))
        chosen = rng.choice(len(monomials), size=count, replace=False)
        coefficients = rng.integers(1, 4, size=count) * rng.choice([-1, 1], size=count)
        candidate = algebra.element(
            {monomials[int(i)]: int(c) for i, c in zip(chosen, coefficients)}
        )
        if earlier.d(candidate).is_zero():
            return candidate
    if not repair:
        raise GenerationError(
            f"No cocycle of degree {degree} found in {max_attempts} attempts."
        )
    # Repair by drawing a combination of the cocycle basis instead.
    window = earlier.cochain_complex(degree + 1)
    cocycles = linalg.kernel_basis(window.differential(degree))
    if not cocycles:
        return algebra.zero()
    weights = [Fraction(int(w)) for w in rng.integers(-2, 3, size=len(cocycles))]
    return window.element(linalg.combine(weights, cocycles, len(monomials)), degree)


def corpus_generate(
    seed: int,
    num_base: Optional[int] = None,
    num_fiber: Optional[int] = None,
    max_generators: int = 4,
    max_degree: int = 5,
    max_terms: int = 3,
    max_attempts: int = 16,
    repair: bool = True,
) -> AlgebraSpec:
    """Generates a random relative Sullivan algebra.

    Each generator's differential is drawn from the subalgebra on earlier
    generators, with base differentials restricted to earlier base generators.
    A draw is rejected unless it is a cocycle there, so `d^2 = 0` holds by
    construction.

    Args:
        seed: The seed; equal seeds give equal documents.
        num_base: The number of base generators, drawn when `None`.
        num_fiber: The number of fiber generators, drawn when `None`.
        max_generators: The bound on the generator count when drawing counts.
        max_degree: The largest generator degree.
        max_terms: The largest number of terms of a drawn differential.
        max_attempts: The rejection budget per generator.
        repair: Whether to fall back to a random cocycle when the budget runs out.

    Returns:
        The `AlgebraSpec`.

    Raises:
        GenerationError: If the budget runs out and `repair` is `False`.
    """
    utils.validate_nonnegative("seed", seed)
    if not 1 <= max_generators <= MAX_GENERATORS:
        raise ValueError(
            f"`max_generators` must be in 1..{MAX_GENERATORS}, but got {max_generators}."
        )
    if not 1 <= max_degree <= MAX_GENERATOR_DEGREE:
        raise ValueError(
            f"`max_degree` must be in 1..{MAX_GENERATOR_DEGREE}, but got {max_degree}."
        )
    if max_terms < 1:
        raise ValueError(f"`max_terms` must be positive, but got {max_terms}.")
    rng = np.random.default_rng(seed)
    if num_base is None:
        num_base = int(rng.integers(0, max_generators + 1))
    if num_fiber is None:
        num_fiber = int(rng.integers(0 if num_base else 1, max_generators - num_base + 1))
    utils.validate_nonnegative("num_base", num_base)
    utils.validate_nonnegative("num_fiber", num_fiber)
    if not 1 <= num_base + num_fiber <= MAX_GENERATORS:
        raise ValueError(
            f"The generator count must be in 1..{MAX_GENERATORS}, but got "
            f"{num_base + num_fiber}."
        )
    base_degrees = sorted(int(d) for d in rng.integers(1, max_degree + 1, size=num_base))
    fiber_degrees = sorted(int(d) for d in rng.integers(1, max_degree + 1, size=num_fiber))
    generators = [
        GeneratorSpec(f"z{i}", d, "base") for i, d in enumerate(base_degrees)
    ] + [GeneratorSpec(f"w{i}", d, "fiber") for i, d in enumerate(fiber_degrees)]

    differential: Dict[str, str] = {}
    for i, g in enumerate(generators):
        pool = [h for h in generators[:i] if g.role == "fiber" or h.role == "base"]
        if not pool:
            continue
        earlier = sullivan.ks_complex(
            [(h.name, h.degree) for h in pool],
            {h.name: differential[h.name] for h in pool if h.name in differential},
        )
        dg = _draw_differential(rng, earlier, g.degree + 1, max_terms, max_attempts, repair)
        if not dg.is_zero():
            differential[g.name] = graded.format_element(dg)
    spec = AlgebraSpec(tuple(generators), differential, label=f"random(seed={seed})")
    logger.debug("Generated %s: %s", spec.label, differential)
    return spec


# -----------------------------------------------------------------------------
# Pipeline.
# -----------------------------------------------------------------------------


def check_filtrations(
    extension: LambdaExtension, degree_cap: int, limit: int = 2
) -> Dict[str, Any]:
    """Builds every interpolating filtration with `m, n <= limit` and checks it.

    Closure under d is checked in degrees up to `degree_cap`, and containment of
    the large-wordlength monomials in `I_0` likewise.
    """
    variants = [False]
    if sullivan.check_minimal(extension.complex).verdict:
        variants.append(True)
    checked = 0
    failures = []
    for m, n, minimal in itertools.product(range(limit + 1), range(limit + 1), variants):
        checked += 1
        try:
            filtration = sullivan.build_interpolating_filtration(
                extension, m, n, minimal, degree_cap + 1
            )
        except StructureError as err:
            failures.append(f"m={m} n={n} minimal={minimal}: {err}")
            continue
        report = sullivan.check_wordlength_containment(filtration, degree_cap)
        if not report.verdict:
            failures.append(
                f"m={m} n={n} minimal={minimal}: {', '.join(report.witnesses)} not in I_0"
            )
    return {"checked": checked, "failures": failures}


def validate(spec: AlgebraSpec) -> Dict[str, Any]:
    """Runs the structural checks of an input document."""
    complex = spec_to_complex(spec)
    reports = {
        "d_squared": sullivan.check_d_squared(complex),
        "sullivan": sullivan.check_sullivan(complex).to_report(),
        "minimal": sullivan.check_minimal(complex),
        "ks_minimal": sullivan.check_ks_minimal(complex),
    }
    result: Dict[str, Any] = {k: r.to_dict() for k, r in reports.items()}
    result["extension"] = None
    if reports["sullivan"].verdict:
        try:
            extension = spec_to_extension(spec)
        except StructureError as err:
            result["extension"] = {"verdict": False, "error": str(err)}
        else:
            result["extension"] = {
                "verdict": True,
                "base": list(extension.base_names),
                "fiber": list(extension.fiber_names),
                "minimal_extension": sullivan.check_minimal_extension(extension).to_dict(),
            }
    # Minimality is reported, not required.
    result["ok"] = (
        reports["d_squared"].verdict
        and reports["sullivan"].verdict
        and bool(result["extension"] and result["extension"]["verdict"])
    )
    return result


def _mismatches(
    expected: Mapping[str, Any], computed: Mapping[str, Any]
) -> List[str]:
    return sorted(
        key for key, value in expected.items() if key in computed and computed[key] != value
    )


def run_instance(spec: AlgebraSpec, caps: Caps, filtration_limit: int = 2) -> Dict[str, Any]:
    """Runs validation, cohomology, the estimate and filtration checks on `spec`.

    The record's `status` is `fail` for a structural defect, a filtration failure
    or a violated estimate; `inconclusive` when a cap prevents a verdict; and
    `pass` otherwise.
    """
    record: Dict[str, Any] = {
        "label": spec.label,
        "digest": digest(spec),
        "caps": caps.to_dict(),
    }
    checks = validate(spec)
    record["validate"] = checks
    if not checks["ok"]:
        record["status"] = "fail"
        return record
    extension = spec_to_extension(spec)
    N, M = caps.max_degree, caps.max_wordlength
    try:
        window = cohomology(extension.complex.cochain_complex(N + 1), 0, N)
        verdict = invariants.verify_estimate_e(extension, N, M, caps.q_cap)
    except CapError as err:
        record["status"] = "inconclusive"
        record["reason"] = str(err)
        return record
    dimensions = {str(k): d for k, d in window.dimensions().items() if d}
    filtrations = check_filtrations(extension, N, filtration_limit)
    computed = {
        "e": verdict.total.exact if verdict.total.exact is not None else verdict.e_candidate,
        "minimal": checks["minimal"]["verdict"],
        "cohomology": dimensions,
    }
    record.update(
        cohomology=dimensions,
        bound={
            "status": verdict.status.value,
            "m_used": verdict.m_used,
            "n_used": verdict.n_used,
            "bound": verdict.bound,
            "e_candidate": verdict.e_candidate,
            "e_certified_lower": verdict.e_certified_lower,
            "flags": list(verdict.flags),
        },
        filtrations=filtrations,
        expected_mismatches=_mismatches(spec.expected, computed),
    )
    if filtrations["failures"] or verdict.status == invariants.BoundStatus.VIOLATED:
        record["status"] = "fail"
    elif verdict.status == invariants.BoundStatus.INCONCLUSIVE:
        record["status"] = "inconclusive"
    else:
        record["status"] = "pass"
    logger.info("%s: %s", spec.label, record["status"])
    return record


def _run(args: Tuple[AlgebraSpec, Caps]) -> Dict[str, Any]:
    return run_instance(*args)


def run_corpus(
    specs: Sequence[AlgebraSpec],
    caps: Caps,
    overrides: Optional[Mapping[str, Optional[int]]] = None,
    jobs: int = 1,
) -> List[Dict[str, Any]]:
    """Runs every instance; records keep the order of `specs`.

    Each instance uses its own caps when it has them, with `overrides` applied
    on top.
    """
    overrides = overrides or {}
    tasks = [(spec, spec.caps(caps).replace(**overrides)) for spec in specs]
    if jobs <= 1:
        return [_run(task) for task in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(_run, tasks))


def random_corpus(seed: int, count: int, **kwargs: Any) -> Tuple[AlgebraSpec, ...]:
    """Returns `count` random documents with seeds `seed, seed + 1, ...`."""
    utils.validate_nonnegative("count", count)
    return tuple(corpus_generate(seed + i, **kwargs) for i in range(count))


def exit_status(records: Sequence[Mapping[str, Any]]) -> int:
    """Returns 1 if any record fails, else 2 if any is inconclusive, else 0."""
    statuses = {r["status"] for r in records}
    if "fail" in statuses:
        return 1
    if "inconclusive" in statuses:
        return 2
    return 0


# -----------------------------------------------------------------------------
# Module fixtures.
# -----------------------------------------------------------------------------


def cylinder_demo(
    extension: LambdaExtension, max_degree: int, resolution_degree: int = 6
) -> Dict[str, Any]:
    """Exercises the cylinder, strictification, lifting and resolution over `extension`.

    The fixture is the projection `f: A -> A/(L^(>=2)_Z A)` of the free module
    onto its quotient by base wordlength at least two, or total wordlength when
    the base is empty.

    Returns:
        Named boolean checks, plus the resolution summary.
    """
    complex = extension.complex
    counted = extension.base_names or complex.algebra.names
    P = modules.free_module(complex, (("e", 0),))
    Q = modules.dg_module(
        complex, [modules.ModuleGenerator("e0", 0, 1)], counted=counted, label="quotient"
    )
    f = modules.ModuleMorphism(P, Q, (Q.generator("e0"),))
    window = (0, max_degree)
    cylinder = modules.mapping_cylinder(f)
    checks: Dict[str, Any] = dict(cylinder.verify((0, max_degree - 1)))

    g = modules.identity(Q)
    homotopy = modules.Homotopy(
        modules.compose(g, f), f, modules.zero_morphism(P, Q, -1)
    )
    checks["strictify"] = modules.strictify(f, g, homotopy, cylinder).report.verdict

    first = modules.lift_through_surjection(f, cylinder.projection, window)
    second = modules.lift_through_surjection(
        f, cylinder.projection, window, reverse_pivots=True
    )
    checks["lift"] = first.report.verdict and second.report.verdict
    try:
        modules.find_lift_homotopy(first.psi, second.psi, cylinder.projection, window)
        checks["lifts_homotopic"] = True
    except modules.LiftError as err:
        logger.warning("No homotopy between lifts: %s", err)
        checks["lifts_homotopic"] = False

    resolution = modules.surjective_resolution(Q, (0, min(max_degree, resolution_degree)))
    checks["resolution_surjective"] = resolution.surjective
    checks["resolution_quasi_isomorphism"] = resolution.quasi_isomorphism
    return {
        "checks": checks,
        "cylinder_rank": cylinder.total.rank,
        "resolution": resolution.to_dict(),
    }
