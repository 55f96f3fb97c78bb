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
"""Toomer invariants, cup length and the estimate for extensions.

All verdicts are relative to a degree cap `N` and a wordlength cap `M`. A
Toomer report gives a certified lower bound (from witnessed failures of
injectivity) and a candidate value (the first wordlength quotient that is
injective in every degree up to `N`).

Copyright (c) The kscat authors
"""

import dataclasses
import enum
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from kscat import graded, linalg, sullivan, utils
from kscat.cohomology import CapError, CohomologyWindow, cohomology, induced_map
from kscat.graded import AlgebraElement, WordlengthFilter
from kscat.linalg import RationalMatrix
from kscat.sullivan import (
    KSComplex,
    LambdaExtension,
    QuotientComplex,
    StructureError,
)

logger = logging.getLogger(__name__)

Subject = Union[KSComplex, QuotientComplex]


@dataclasses.dataclass(frozen=True)
class ToomerRow:
    """Injectivity of the projection onto wordlength at most `m`, in one degree.

    Attributes:
        m: The wordlength bound of the quotient.
        degree: The cohomological degree.
        injective: Whether the induced map is injective in this degree.
        witness: A cocycle whose nonzero class dies in the quotient, if any.
    """

    m: int
    degree: int
    injective: bool
    witness: Optional[AlgebraElement] = None

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            "m": self.m,
            "degree": self.degree,
            "verdict": "injective" if self.injective else "not-injective",
        }
        if self.witness is not None:
            result["witness"] = str(self.witness)
        return result


@dataclasses.dataclass(frozen=True)
class ToomerReport:
    """The Toomer invariant of a subject relative to a subset of generators.

    Attributes:
        subject: A description of the subject complex.
        counted: Names of the generators whose wordlength is bounded.
        max_degree: The degree cap `N`.
        max_wordlength: The wordlength cap `M`.
        rows: One row per `(m, degree)`.
        certified_lower: One more than the largest `m` with a witnessed failure.
        candidate: The least `m` injective in every degree, or `None` beyond `M`.
        exact: The candidate, when the user asserts cohomology vanishes above `N`.
        flags: Warnings about the computation.
    """

    subject: str
    counted: Optional[Tuple[str, ...]]
    max_degree: int
    max_wordlength: int
    rows: Tuple[ToomerRow, ...]
    certified_lower: int
    candidate: Optional[int]
    exact: Optional[int] = None
    flags: Tuple[str, ...] = ()

    def injective_at(self, m: int) -> bool:
        return all(r.injective for r in self.rows if r.m == m)

    def failures(self, m: Optional[int] = None) -> List[ToomerRow]:
        return [r for r in self.rows if not r.injective and (m is None or r.m == m)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "S": None if self.counted is None else list(self.counted),
            "N": self.max_degree,
            "M": self.max_wordlength,
            "rows": [r.to_dict() for r in self.rows],
            "certified_lower": self.certified_lower,
            "candidate": (
                self.candidate if self.candidate is not None else f"> {self.max_wordlength}"
            ),
            "exact": self.exact,
            "flags": list(self.flags),
        }


def _as_window(subject: Subject, degree_cap: int) -> QuotientComplex:
    if isinstance(subject, KSComplex):
        return subject.cochain_complex(degree_cap)
    if subject.degree_cap < degree_cap:
        raise CapError(
            f"Subject is only available to degree {subject.degree_cap}, but degree "
            f"{degree_cap} is needed."
        )
    return subject


def toomer(
    subject: Subject,
    counted: Optional[Sequence[str]] = None,
    max_degree: int = 12,
    max_wordlength: int = 8,
    assume_concentrated: bool = False,
    label: Optional[str] = None,
) -> ToomerReport:
    """Computes the Toomer invariant of `subject` relative to `counted`.

    For each `m` in `0..max_wordlength`, the subject is projected onto the monomials
    of `counted`-wordlength at most `q + m`, where `q` is the subject's own lower
    bound on that wordlength. The projection is tested for injectivity on cohomology
    in degrees `0..max_degree`.

    Args:
        subject: A complex, or a window of one.
        counted: Names of the bounded generators; `None` bounds all generators.
        max_degree: The degree cap `N`.
        max_wordlength: The wordlength cap `M`.
        assume_concentrated: Assert that the subject has no cohomology above
            `max_degree`, which makes the candidate exact.
        label: The subject description used in the report.

    Returns:
        The `ToomerReport`.
    """
    utils.validate_nonnegative("max_degree", max_degree)
    utils.validate_nonnegative("max_wordlength", max_wordlength)
    window = _as_window(subject, max_degree + 1)
    algebra = window.algebra
    subset = None if counted is None else algebra.indices(counted)
    base_lower = max(
        (f.lower for f in window.filters if f.counted == subset), default=0
    )
    source = cohomology(window, 0, max_degree)
    rows: List[ToomerRow] = []
    for m in range(max_wordlength + 1):
        quotient = window.with_filters(
            (WordlengthFilter(subset, 0, base_lower + m),), max_degree + 1
        )
        target = cohomology(quotient, 0, max_degree)
        induced = induced_map(
            source, target, lambda k: quotient.projection(window, k), validate=False
        )
        for k in range(max_degree + 1):
            witness = None
            if not induced.is_injective(k):
                witness = window.element(induced.kernel_cocycles(k)[0], k)
            rows.append(ToomerRow(m, k, induced.is_injective(k), witness))
    report = _summarize(
        label or window.describe(),
        None if subset is None else tuple(algebra.names[i] for i in sorted(subset)),
        max_degree,
        max_wordlength,
        rows,
        assume_concentrated,
    )
    logger.info(
        "Toomer %s: certified_lower=%d candidate=%s",
        report.subject,
        report.certified_lower,
        report.candidate,
    )
    return report


def _summarize(
    subject: str,
    counted: Optional[Tuple[str, ...]],
    max_degree: int,
    max_wordlength: int,
    rows: List[ToomerRow],
    assume_concentrated: bool,
) -> ToomerReport:
    injective = [
        all(r.injective for r in rows if r.m == m) for m in range(max_wordlength + 1)
    ]
    failing = [m for m, ok in enumerate(injective) if not ok]
    certified_lower = 1 + max(failing) if failing else 0
    candidate = next((m for m, ok in enumerate(injective) if ok), None)
    flags = []
    if candidate is not None and any(not ok for ok in injective[candidate:]):
        flags.append("non-monotone-injectivity")
    if candidate is None:
        flags.append("wordlength-cap-reached")
    exact = None
    if assume_concentrated and candidate is not None:
        exact = candidate
        flags.append("user-asserted-concentration")
    return ToomerReport(
        subject,
        counted,
        max_degree,
        max_wordlength,
        tuple(rows),
        certified_lower,
        candidate,
        exact,
        tuple(flags),
    )


def toomer_base(
    extension: LambdaExtension, max_degree: int = 12, max_wordlength: int = 8
) -> ToomerReport:
    """Computes the Toomer invariant of the total complex relative to the base."""
    return toomer(
        extension.complex,
        extension.base_names,
        max_degree,
        max_wordlength,
        label="LV relative to base",
    )


@dataclasses.dataclass(frozen=True)
class FiberFamily:
    """Toomer invariants of the fiber windows `L^{>=q} W` for `q = 0..q_cap`.

    Attributes:
        reports: One report per `q`.
        q_cap: The largest `q` computed.
        populated: The largest fiber wordlength present in degrees up to `N`.
        n_used: The maximum candidate, or `None` if some candidate exceeds `M`.
        flags: Warnings about the computation.
    """

    reports: Tuple[ToomerReport, ...]
    q_cap: int
    populated: int
    n_used: Optional[int]
    flags: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q_cap": self.q_cap,
            "populated": self.populated,
            "n_used": self.n_used,
            "candidates": [r.to_dict()["candidate"] for r in self.reports],
            "certified_lower": [r.certified_lower for r in self.reports],
            "flags": list(self.flags),
        }


def populated_wordlength(complex: KSComplex, max_degree: int) -> int:
    """Returns the largest wordlength of a monomial of degree at most `max_degree`."""
    return max(
        (m.wordlength() for k in range(max_degree + 1) for m in complex.algebra.basis(k)),
        default=0,
    )


def toomer_fiber_family(
    extension: LambdaExtension,
    q_cap: Optional[int] = None,
    max_degree: int = 12,
    max_wordlength: int = 8,
) -> FiberFamily:
    """Computes fiber Toomer invariants for each lower wordlength bound `q`.

    By default `q_cap` is the largest fiber wordlength populated up to `max_degree`,
    beyond which the windows vanish in the degrees considered.
    """
    fiber = sullivan.fiber_differential(extension)
    populated = populated_wordlength(fiber, max_degree)
    if q_cap is None:
        q_cap = populated
    utils.validate_nonnegative("q_cap", q_cap)
    reports = []
    for q in range(q_cap + 1):
        subject = sullivan.quotient_complex(
            fiber, (WordlengthFilter.at_least(q),), max_degree + 1
        )
        reports.append(
            toomer(subject, None, max_degree, max_wordlength, label=f"L^>={q} W")
        )
    candidates = [r.candidate for r in reports]
    n_used = None if any(c is None for c in candidates) else max(candidates, default=0)
    flags = []
    if q_cap < populated:
        flags.append("q-cap-limited")
    return FiberFamily(tuple(reports), q_cap, populated, n_used, tuple(flags))


# -----------------------------------------------------------------------------
# Estimate.
# -----------------------------------------------------------------------------


class BoundStatus(enum.Enum):
    """The outcome of comparing a Toomer invariant with its estimate."""

    #: The certified lower bound does not exceed the estimate.
    HOLDS = "holds"
    #: The certified lower bound exceeds the estimate.
    VIOLATED = "violated"
    #: A hypothesis could not be witnessed within the caps.
    INCONCLUSIVE = "inconclusive"


@dataclasses.dataclass(frozen=True)
class ChainStep:
    """Injectivity of one projection `P/I_(k+1) -> P/I_k`."""

    k: int
    injective: bool
    failing_degrees: Tuple[int, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "injective": self.injective,
            "failing_degrees": list(self.failing_degrees),
        }


@dataclasses.dataclass(frozen=True)
class BoundVerdict:
    """The estimate `e(LV) <= (m+1)(n+2) - 2`, or `(m+1)(n+1) - 1` when minimal.

    Attributes:
        status: The outcome.
        m_used: The base candidate used as `m`.
        n_used: The fiber family maximum used as `n`.
        bound: The estimate, when both hypotheses are witnessed.
        minimal: Whether the minimal estimate applies.
        e_candidate: The candidate for the total complex.
        e_certified_lower: The certified lower bound for the total complex.
        max_degree: The degree cap `N`.
        max_wordlength: The wordlength cap `M`.
        base: The base report.
        fiber: The fiber family.
        total: The total report.
        chain: Projection chain steps, when computed.
        base_algebra: The Toomer invariant of the base algebra itself, as evidence
            for the hypothesis on the base category.
        reason: An explanation for inconclusive verdicts.
        flags: Warnings collected from the reports.
    """

    status: BoundStatus
    m_used: Optional[int]
    n_used: Optional[int]
    bound: Optional[int]
    minimal: bool
    e_candidate: Optional[int]
    e_certified_lower: int
    max_degree: int
    max_wordlength: int
    base: ToomerReport
    fiber: FiberFamily
    total: ToomerReport
    chain: Tuple[ChainStep, ...] = ()
    base_algebra: Optional[ToomerReport] = None
    reason: str = ""
    flags: Tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.status == BoundStatus.HOLDS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "m_used": self.m_used,
            "n_used": self.n_used,
            "bound": self.bound,
            "minimal": self.minimal,
            "e_candidate": self.e_candidate,
            "e_certified_lower": self.e_certified_lower,
            "N": self.max_degree,
            "M": self.max_wordlength,
            "q_cap": self.fiber.q_cap,
            "base": self.base.to_dict(),
            "fiber": self.fiber.to_dict(),
            "total": self.total.to_dict(),
            "chain": [s.to_dict() for s in self.chain],
            "base_algebra": (
                None if self.base_algebra is None else self.base_algebra.to_dict()
            ),
            "reason": self.reason,
            "flags": list(self.flags),
        }


def main_bound(base_category: int, fiber_category: int, minimal: bool) -> int:
    """Returns the estimate for a total category in terms of base and fiber values."""
    return sullivan.estimate_bound(base_category, fiber_category, minimal)


def verify_estimate_e(
    extension: LambdaExtension,
    max_degree: int = 12,
    max_wordlength: int = 8,
    q_cap: Optional[int] = None,
    minimal: Optional[bool] = None,
    assume_concentrated: bool = False,
    with_chain: bool = True,
    with_base_algebra: bool = True,
) -> BoundVerdict:
    """Compares the Toomer invariant of the total complex with its estimate.

    Args:
        extension: The extension.
        max_degree: The degree cap `N`.
        max_wordlength: The wordlength cap `M`.
        q_cap: The largest fiber wordlength bound; see `toomer_fiber_family`.
        minimal: Whether the minimal estimate applies; detected when `None`.
        assume_concentrated: Passed to the total report.
        with_chain: Whether to compute the projection chain as evidence.
        with_base_algebra: Whether to compute the Toomer invariant of the base
            algebra. A cap-limited report is flagged but does not change the status.

    Returns:
        The `BoundVerdict`. A `VIOLATED` status contradicts the estimate within the
        caps and indicates a defect.
    """
    if minimal is None:
        minimal = sullivan.check_minimal(extension.complex).verdict
    base = toomer_base(extension, max_degree, max_wordlength)
    fiber = toomer_fiber_family(extension, q_cap, max_degree, max_wordlength)
    total = toomer(
        extension.complex,
        None,
        max_degree,
        max_wordlength,
        assume_concentrated=assume_concentrated,
        label="LV",
    )
    base_algebra = None
    if with_base_algebra and extension.base:
        base_algebra = toomer(
            sullivan.base_complex(extension),
            None,
            max_degree,
            max_wordlength,
            label="base algebra",
        )
    flags = tuple(
        f"{name}:{flag}"
        for name, report_flags in (
            ("base", base.flags),
            ("fiber", fiber.flags),
            ("total", total.flags),
            ("base-algebra", base_algebra.flags if base_algebra else ()),
        )
        for flag in report_flags
    )
    common = dict(
        minimal=minimal,
        e_candidate=total.candidate,
        e_certified_lower=total.certified_lower,
        max_degree=max_degree,
        max_wordlength=max_wordlength,
        base=base,
        fiber=fiber,
        total=total,
        base_algebra=base_algebra,
    )
    if base.candidate is None or fiber.n_used is None:
        missing = "base" if base.candidate is None else "fiber"
        logger.warning("Estimate inconclusive: %s invariant exceeds the caps", missing)
        return BoundVerdict(
            BoundStatus.INCONCLUSIVE,
            base.candidate,
            fiber.n_used,
            None,
            reason=f"the {missing} Toomer invariant is not witnessed within the caps",
            flags=flags,
            **common,
        )
    bound = main_bound(base.candidate, fiber.n_used, minimal)
    chain: Tuple[ChainStep, ...] = ()
    if with_chain:
        chain = projection_chain(
            extension, base.candidate, fiber.n_used, minimal, max_degree
        )
        flags += tuple(f"chain:step-{s.k}-not-injective" for s in chain if not s.injective)
    status = BoundStatus.HOLDS if total.certified_lower <= bound else BoundStatus.VIOLATED
    if status == BoundStatus.VIOLATED:
        logger.error(
            "Estimate violated: certified lower bound %d exceeds %d",
            total.certified_lower,
            bound,
        )
    return BoundVerdict(
        status,
        base.candidate,
        fiber.n_used,
        bound,
        chain=chain,
        flags=flags,
        **common,
    )


def projection_chain(
    extension: LambdaExtension, m: int, n: int, minimal: bool, max_degree: int
) -> Tuple[ChainStep, ...]:
    """Tests the projections `P -> P/I_(m+1) -> ... -> P/I_0` on cohomology.

    Step `k` projects `P/I_(k+1)` onto `P/I_k`, with `P/I_(m+2) = P`.
    """
    filtration = sullivan.build_interpolating_filtration(
        extension, m, n, minimal, max_degree + 1
    )
    previous = extension.complex.cochain_complex(max_degree + 1)
    previous_window = cohomology(previous, 0, max_degree)
    steps = []
    for k in range(m + 1, -1, -1):
        quotient = sullivan.filtration_quotient(filtration, k, max_degree + 1)
        window = cohomology(quotient, 0, max_degree)
        source = previous
        induced = induced_map(
            previous_window,
            window,
            lambda d, q=quotient, s=source: q.projection(s, d),
            validate=False,
        )
        failing = tuple(d for d in range(max_degree + 1) if not induced.is_injective(d))
        steps.append(ChainStep(k, not failing, failing))
        previous, previous_window = quotient, window
    return tuple(steps)


# -----------------------------------------------------------------------------
# Cup length.
# -----------------------------------------------------------------------------


def cup_length(
    complex: KSComplex, counted: Optional[Sequence[str]] = None, max_degree: int = 12
) -> int:
    """Returns the longest nonzero product of classes from the ideal of `counted`.

    Factors are the classes of `L^{>=1}_S V` pushed into `LV`; products are tested
    in degrees up to `max_degree`.
    """
    full = complex.cochain_complex(max_degree + 1)
    window = cohomology(full, 0, max_degree)
    subset = None if counted is None else complex.algebra.indices(counted)
    ideal = full.with_filters((WordlengthFilter(subset, 1, None),))
    ideal_window = cohomology(ideal, 0, max_degree)
    factors: List[AlgebraElement] = []
    for k in range(1, max_degree + 1):
        elements = [ideal.element(r, k) for r in ideal_window[k].representatives]
        factors.extend(_independent_classes(full, window, k, elements))
    if not factors:
        return 0
    length = 1
    current = factors
    while True:
        products: Dict[int, List[AlgebraElement]] = {}
        for a in current:
            for b in factors:
                k = a.degree() + b.degree()
                if k > max_degree:
                    continue
                products.setdefault(k, []).append(graded.multiply(a, b))
        level = [
            p
            for k in sorted(products)
            for p in _independent_classes(full, window, k, products[k])
        ]
        if not level:
            return length
        length += 1
        current = level


def _independent_classes(
    full: QuotientComplex,
    window: CohomologyWindow,
    degree: int,
    elements: Sequence[AlgebraElement],
) -> List[AlgebraElement]:
    """Returns elements whose classes are independent and span those of `elements`."""
    size = window.dimension(degree)
    kept: List[AlgebraElement] = []
    columns: List[linalg.Vector] = []
    for element in elements:
        coordinates = window.class_coordinates(degree, full.coordinates(element, degree))
        if coordinates is None:
            raise StructureError(f"`{element}` is not a cocycle.")
        if not any(coordinates):
            continue
        candidate = columns + [coordinates]
        if linalg.rank(RationalMatrix.from_columns(candidate, size)) == len(candidate):
            columns = candidate
            kept.append(element)
    return kept
