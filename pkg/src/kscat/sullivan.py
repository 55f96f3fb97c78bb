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
"""Koszul-Sullivan complexes, extensions, windows and filtrations.

Copyright (c) The kscat authors
"""

import dataclasses
import logging
from fractions import Fraction
from typing import (
    Any,
    Dict,
    FrozenSet,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from kscat import graded, utils
from kscat.cohomology import CapError, CochainComplex
from kscat.graded import (
    AlgebraElement,
    GradedAlgebra,
    Monomial,
    WordlengthFilter,
)
from kscat.linalg import RationalMatrix, Vector

logger = logging.getLogger(__name__)


class StructureError(ValueError):
    """Raised when a complex, extension, window or filtration is ill-formed."""


@dataclasses.dataclass(frozen=True)
class StructureReport:
    """The verdict of a structural check.

    Attributes:
        check: The name of the check.
        verdict: Whether the check passed.
        witnesses: Human-readable descriptions of the failures.
    """

    check: str
    verdict: bool
    witnesses: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "verdict": self.verdict,
            "witnesses": list(self.witnesses),
        }


# -----------------------------------------------------------------------------
# Complexes.
# -----------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class KSComplex:
    """A free graded-commutative algebra with a derivation of degree one.

    Attributes:
        algebra: The underlying algebra.
        differentials: The differential of each generator, by generator index.
    """

    algebra: GradedAlgebra
    differentials: Tuple[AlgebraElement, ...]
    _monomial_cache: Dict[Monomial, AlgebraElement] = dataclasses.field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        if len(self.differentials) != len(self.algebra.generators):
            raise ValueError(
                f"Expected {len(self.algebra.generators)} differentials, got "
                f"{len(self.differentials)}."
            )
        for g, dg in zip(self.algebra.generators, self.differentials):
            if dg.algebra.generators != self.algebra.generators:
                raise ValueError(f"Differential of `{g.name}` is over another algebra.")
            if any(k != g.degree + 1 for k in dg.degrees()):
                raise StructureError(
                    f"Differential of `{g.name}` must have degree {g.degree + 1}, "
                    f"got `{dg}`."
                )

    def __hash__(self) -> int:
        return hash((self.algebra, self.differentials))

    @property
    def generators(self) -> Tuple[graded.Generator, ...]:
        return self.algebra.generators

    def differential_of(self, name: str) -> AlgebraElement:
        return self.differentials[self.algebra.index(name)]

    def d(self, element: AlgebraElement) -> AlgebraElement:
        return extend_derivation(self, element)

    def cochain_complex(self, degree_cap: int) -> "QuotientComplex":
        return QuotientComplex(self, (), degree_cap)

    def describe(self) -> str:
        return "; ".join(
            f"d{g.name} = {dg}" for g, dg in zip(self.generators, self.differentials)
        )


def ks_complex(
    generators: Sequence[Tuple[str, int]],
    differential: Mapping[str, Union[str, AlgebraElement]],
) -> KSComplex:
    """Constructs a complex from `(name, degree)` pairs and differential expressions.

    Generators missing from `differential` are cocycles.
    """
    algebra = graded.graded_algebra(generators)
    unknown = set(differential) - set(algebra.names)
    if unknown:
        raise ValueError(f"Differential given for unknown generators {sorted(unknown)}.")
    images = []
    for name in algebra.names:
        image = differential.get(name, algebra.zero())
        if isinstance(image, str):
            image = graded.parse_element(algebra, image)
        images.append(image)
    return KSComplex(algebra, tuple(images))


def extend_derivation(complex: KSComplex, element: AlgebraElement) -> AlgebraElement:
    """Applies the unique derivation extending the generator differentials."""
    if element.algebra.generators != complex.algebra.generators:
        raise ValueError("Element is not over the algebra of the complex.")
    terms: Dict[Monomial, Fraction] = {}
    for m, c in element.terms.items():
        for mm, cc in _d_monomial(complex, m).terms.items():
            terms[mm] = terms.get(mm, 0) + c * cc
    return AlgebraElement(complex.algebra, terms)


def _d_monomial(complex: KSComplex, monomial: Monomial) -> AlgebraElement:
    cache = complex._monomial_cache
    if monomial in cache:
        return cache[monomial]
    algebra = complex.algebra
    if monomial.is_unit:
        result = algebra.zero()
    else:
        # d(x * rest) = dx * rest + (-1)^|x| x * d(rest), with x the first factor.
        (index, exponent), tail = monomial.exponents[0], monomial.exponents[1:]
        rest = Monomial(((index, exponent - 1),) + tail if exponent > 1 else tail)
        x = algebra.monomial(Monomial(((index, 1),)))
        sign = -1 if algebra.generators[index].is_odd else 1
        result = graded.multiply(complex.differentials[index], algebra.monomial(rest))
        result = result + graded.multiply(x, _d_monomial(complex, rest)).scale(sign)
    cache[monomial] = result
    return result


# -----------------------------------------------------------------------------
# Structural checks.
# -----------------------------------------------------------------------------


def check_d_squared(
    complex: KSComplex, degree_cap: Optional[int] = None
) -> StructureReport:
    """Checks `d(d(v)) = 0` on every generator, which implies it on all elements.

    Args:
        complex: The complex to check.
        degree_cap: If given, must reach the degree of every `d(d(v))`.

    Returns:
        A report listing each generator with a nonzero residue.
    """
    top = max((g.degree for g in complex.generators), default=0) + 1
    if degree_cap is not None and degree_cap < top:
        raise CapError(
            f"`degree_cap` must be at least {top} to check d^2, but got {degree_cap}."
        )
    witnesses = []
    for g, dg in zip(complex.generators, complex.differentials):
        ddg = extend_derivation(complex, dg)
        if not ddg.is_zero():
            witnesses.append(f"d(d({g.name})) = {ddg}")
    return StructureReport("d-squared", not witnesses, tuple(witnesses))


def check_d_squared_on_basis(complex: KSComplex, degree_cap: int) -> StructureReport:
    """Checks `d(d(m)) = 0` on every monomial of degree at most `degree_cap - 2`."""
    utils.validate_nonnegative("degree_cap", degree_cap)
    witnesses = []
    for k in range(degree_cap - 1):
        for m in complex.algebra.basis(k):
            ddm = extend_derivation(complex, extend_derivation(complex, complex.algebra.monomial(m)))
            if not ddm.is_zero():
                witnesses.append(
                    f"d(d({graded.format_monomial(complex.algebra, m)})) = {ddm}"
                )
    return StructureReport("d-squared-basis", not witnesses, tuple(witnesses))


@dataclasses.dataclass(frozen=True)
class SullivanFiltration:
    """Greedy stages of generators, each stage closed under d onto earlier ones.

    Attributes:
        stages: Generator names per stage.
        unabsorbed: Generators not reached by any stage.
    """

    stages: Tuple[Tuple[str, ...], ...]
    unabsorbed: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.unabsorbed

    def stage(self, name: str) -> Optional[int]:
        for k, names in enumerate(self.stages):
            if name in names:
                return k
        return None

    def to_report(self) -> StructureReport:
        return StructureReport(
            "sullivan",
            self.ok,
            tuple(f"`{name}` is not reached by the stage filtration" for name in self.unabsorbed),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stages": [list(s) for s in self.stages],
            "unabsorbed": list(self.unabsorbed),
        }


def greedy_stages(
    supports: Sequence[FrozenSet[int]],
    candidates: Sequence[int],
    available: FrozenSet[int] = frozenset(),
) -> Tuple[List[List[int]], List[int]]:
    """Absorbs `candidates` in stages; a candidate joins once its support is available.

    Returns the stages as index lists and the candidates never absorbed.
    """
    reached = set(available)
    remaining = list(candidates)
    stages = []
    while remaining:
        absorbed = [i for i in remaining if supports[i] <= reached]
        if not absorbed:
            break
        stages.append(absorbed)
        reached.update(absorbed)
        remaining = [i for i in remaining if i not in reached]
    return stages, remaining


def check_sullivan(complex: KSComplex) -> SullivanFiltration:
    """Finds the Sullivan stages of `complex`."""
    supports = [dg.support() for dg in complex.differentials]
    stages, remaining = greedy_stages(supports, range(len(supports)))
    names = complex.algebra.names
    return SullivanFiltration(
        tuple(tuple(names[i] for i in s) for s in stages),
        tuple(names[i] for i in remaining),
    )


def check_minimal(complex: KSComplex) -> StructureReport:
    """Checks that no generator differential has a linear term."""
    witnesses = []
    for g, dg in zip(complex.generators, complex.differentials):
        linear = [m for m in dg.monomials() if m.wordlength() == 1]
        if linear:
            part = graded.truncate(dg, WordlengthFilter.exactly(1))
            witnesses.append(f"d{g.name} has linear part {part}")
    return StructureReport("minimal", not witnesses, tuple(witnesses))


def check_ks_minimal(complex: KSComplex) -> StructureReport:
    """Checks that `d(v)` only involves generators of degree at most `|v|`."""
    witnesses = []
    for g, dg in zip(complex.generators, complex.differentials):
        high = sorted(
            complex.algebra.names[i]
            for i in dg.support()
            if complex.generators[i].degree > g.degree
        )
        if high:
            witnesses.append(f"d{g.name} involves {', '.join(high)}")
    return StructureReport("ks-minimal", not witnesses, tuple(witnesses))


# -----------------------------------------------------------------------------
# Extensions.
# -----------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class LambdaExtension:
    """A complex split into a base subalgebra and a fiber.

    Attributes:
        complex: The total complex.
        base: Indices of the base generators.
        fiber: Indices of the fiber generators.
        fiber_stages: The fiber generators by stage.
    """

    complex: KSComplex
    base: FrozenSet[int]
    fiber: FrozenSet[int]
    fiber_stages: Tuple[Tuple[int, ...], ...]

    @property
    def base_names(self) -> Tuple[str, ...]:
        return tuple(self.complex.algebra.names[i] for i in sorted(self.base))

    @property
    def fiber_names(self) -> Tuple[str, ...]:
        return tuple(self.complex.algebra.names[i] for i in sorted(self.fiber))

    def base_wordlength(self, monomial: Monomial) -> int:
        return monomial.wordlength(self.base)

    def fiber_wordlength(self, monomial: Monomial) -> int:
        return monomial.wordlength(self.fiber)


def lambda_extension(complex: KSComplex, base_names: Sequence[str]) -> LambdaExtension:
    """Splits `complex` as an extension of the subalgebra on `base_names`.

    Raises:
        StructureError: If the base is not closed under d or the fiber generators
            cannot be ordered in stages over the base.
    """
    algebra = complex.algebra
    base = algebra.indices(base_names)
    fiber = frozenset(range(len(algebra.generators))) - base
    for i in sorted(base):
        outside = complex.differentials[i].support() - base
        if outside:
            raise StructureError(
                f"Base is not closed under d: d{algebra.names[i]} involves "
                f"{', '.join(algebra.names[j] for j in sorted(outside))}."
            )
    supports = [dg.support() for dg in complex.differentials]
    stages, remaining = greedy_stages(supports, sorted(fiber), base)
    if remaining:
        raise StructureError(
            "Fiber generators "
            f"{', '.join(algebra.names[i] for i in remaining)} cannot be ordered in "
            "stages over the base."
        )
    return LambdaExtension(complex, base, fiber, tuple(tuple(s) for s in stages))


def _sub_complex(
    complex: KSComplex, names: Sequence[str], images: Sequence[AlgebraElement]
) -> KSComplex:
    algebra, index_map = complex.algebra.subalgebra(names)
    return KSComplex(
        algebra, tuple(graded.restrict(image, algebra, index_map) for image in images)
    )


def base_complex(extension: LambdaExtension) -> KSComplex:
    """Returns the base subcomplex `(LZ, d)`."""
    c = extension.complex
    return _sub_complex(
        c, extension.base_names, [c.differentials[i] for i in sorted(extension.base)]
    )


def fiber_differential(extension: LambdaExtension) -> KSComplex:
    """Returns the fiber `(LW, dbar)`, dropping all terms that involve the base."""
    c = extension.complex
    no_base = WordlengthFilter.exactly(0, extension.base)
    return _sub_complex(
        c,
        extension.fiber_names,
        [graded.truncate(c.differentials[i], no_base) for i in sorted(extension.fiber)],
    )


def check_minimal_extension(extension: LambdaExtension) -> StructureReport:
    """Checks that `d(w)` only involves fiber generators of degree at most `|w|`."""
    complex = extension.complex
    witnesses = []
    for i in sorted(extension.fiber):
        g = complex.generators[i]
        high = sorted(
            complex.algebra.names[j]
            for j in complex.differentials[i].support() & extension.fiber
            if complex.generators[j].degree > g.degree
        )
        if high:
            witnesses.append(f"d{g.name} involves fiber generators {', '.join(high)}")
    return StructureReport("minimal-extension", not witnesses, tuple(witnesses))


def degree_split_extension(complex: KSComplex) -> LambdaExtension:
    """Splits a Sullivan algebra with base the degree-one generators."""
    return lambda_extension(
        complex, [g.name for g in complex.generators if g.degree == 1]
    )


# -----------------------------------------------------------------------------
# Windows.
# -----------------------------------------------------------------------------


def _closed_under_d(complex: KSComplex, subset: FrozenSet[int]) -> bool:
    return all(complex.differentials[i].support() <= subset for i in subset)


class QuotientComplex(CochainComplex):
    """The monomials of a complex kept by a window, with the induced differential.

    The induced differential applies d and drops terms outside the window. A window
    is a conjunction of wordlength filters, optionally with the monomials of a
    filtration piece removed.

    A filter counting a subset `S` is accepted when `S` is closed under d, or when
    another filter pins the wordlength of the complement of `S` to a single value
    and that complement is closed under d.
    """

    def __init__(
        self,
        parent: Union[KSComplex, LambdaExtension],
        filters: Sequence[WordlengthFilter],
        degree_cap: int,
        excluded: Optional["FiltrationPiece"] = None,
    ):
        if isinstance(parent, LambdaExtension):
            parent = parent.complex
        self.parent = parent
        self.filters = tuple(filters)
        self.degree_cap = utils.validate_nonnegative("degree_cap", degree_cap)
        self.excluded = excluded
        self._validate()
        self._bases: Dict[int, Tuple[Monomial, ...]] = {}
        self._positions: Dict[int, Dict[Monomial, int]] = {}
        self._differentials: Dict[int, RationalMatrix] = {}

    def _validate(self) -> None:
        everything = frozenset(range(len(self.parent.generators)))
        for f in self.filters:
            if f.counted is None or f.counted >= everything:
                continue
            if _closed_under_d(self.parent, f.counted):
                continue
            complement = everything - f.counted
            pinned = any(
                g.counted == complement and g.is_pinned for g in self.filters
            )
            if pinned and _closed_under_d(self.parent, complement):
                continue
            raise StructureError(
                "Ill-formed window: the filter "
                f"`{f.describe(self.parent.algebra)}` counts generators not closed "
                "under d, and the complementary wordlength is not pinned."
            )

    @property
    def algebra(self) -> GradedAlgebra:
        return self.parent.algebra

    @property
    def min_degree(self) -> int:
        return 0

    @property
    def max_degree(self) -> int:
        return self.degree_cap

    def contains(self, monomial: Monomial) -> bool:
        if not all(f.contains(monomial) for f in self.filters):
            return False
        return self.excluded is None or not self.excluded.contains(monomial)

    def basis(self, degree: int) -> Tuple[Monomial, ...]:
        if degree > self.degree_cap:
            raise CapError(f"Degree {degree} exceeds the degree cap {self.degree_cap}.")
        if degree not in self._bases:
            self._bases[degree] = tuple(
                m for m in self.algebra.basis(degree, self.filters) if self.contains(m)
            )
            self._positions[degree] = {m: n for n, m in enumerate(self._bases[degree])}
        return self._bases[degree]

    def dimension(self, degree: int) -> int:
        return len(self.basis(degree))

    def _differential(self, degree: int) -> RationalMatrix:
        if degree not in self._differentials:
            source = self.basis(degree)
            self.basis(degree + 1)
            positions = self._positions[degree + 1]
            entries = {}
            for j, m in enumerate(source):
                dm = extend_derivation(self.parent, self.algebra.monomial(m))
                for mm, c in dm.terms.items():
                    if mm in positions:
                        entries[(positions[mm], j)] = c
            self._differentials[degree] = RationalMatrix(
                len(positions), len(source), entries
            )
        return self._differentials[degree]

    def coordinates(self, element: AlgebraElement, degree: int) -> Vector:
        """Projects a homogeneous element onto the window and returns coordinates."""
        self.basis(degree)
        positions = self._positions[degree]
        values = [Fraction(0)] * len(positions)
        for m, c in element.terms.items():
            if self.algebra.degree(m) != degree:
                raise ValueError(f"Element `{element}` has a term outside degree {degree}.")
            if m in positions:
                values[positions[m]] = c
        return tuple(values)

    def element(self, coordinates: Vector, degree: int) -> AlgebraElement:
        basis = self.basis(degree)
        return self.algebra.element(dict(zip(basis, coordinates)))

    def projection(self, source: "QuotientComplex", degree: int) -> RationalMatrix:
        """Returns the coordinate projection from `source` onto this window."""
        self.basis(degree)
        positions = self._positions[degree]
        entries = {
            (positions[m], j): Fraction(1)
            for j, m in enumerate(source.basis(degree))
            if m in positions
        }
        return RationalMatrix(self.dimension(degree), source.dimension(degree), entries)

    def with_filters(
        self, filters: Sequence[WordlengthFilter], degree_cap: Optional[int] = None
    ) -> "QuotientComplex":
        """Returns the window further restricted by `filters`."""
        return QuotientComplex(
            self.parent,
            self.filters + tuple(filters),
            self.degree_cap if degree_cap is None else degree_cap,
            self.excluded,
        )

    def describe(self) -> str:
        pieces = [f.describe(self.algebra) for f in self.filters]
        if self.excluded is not None:
            pieces.append(f"not in {self.excluded.describe()}")
        return "LV" if not pieces else "LV | " + ", ".join(pieces)


def quotient_complex(
    parent: Union[KSComplex, LambdaExtension],
    filters: Sequence[WordlengthFilter],
    degree_cap: int,
) -> QuotientComplex:
    return QuotientComplex(parent, filters, degree_cap)


def bigraded_piece(
    extension: LambdaExtension,
    p: int,
    q_lower: int,
    q_upper: Optional[int],
    degree_cap: int,
) -> QuotientComplex:
    """Returns the complex of base wordlength `p` and fiber wordlength in a window.

    With `q_upper` unset the fiber wordlength is only bounded below.

    Its differential only keeps the terms of d that preserve base wordlength.
    """
    return QuotientComplex(
        extension.complex,
        (
            WordlengthFilter.exactly(p, extension.base),
            WordlengthFilter(extension.fiber, q_lower, q_upper),
        ),
        degree_cap,
    )


# -----------------------------------------------------------------------------
# Interpolating filtration.
# -----------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class InterpolatingFiltration:
    """Filtration pieces `I_k` interpolating between `LV` and a power of its ideal.

    A monomial of base wordlength `p` and fiber wordlength `q` lies in `I_k` when
    `p >= j` and `q >= thresholds[j]` for some `j >= k`.

    Attributes:
        extension: The extension whose complex is filtered.
        m: The base category parameter.
        n: The fiber category parameter.
        minimal: Whether the thresholds for minimal complexes are used.
        thresholds: The fiber thresholds for `j = 0..m+1`.
    """

    extension: LambdaExtension
    m: int
    n: int
    minimal: bool
    thresholds: Tuple[int, ...]

    def contains(self, k: int, monomial: Monomial) -> bool:
        p = self.extension.base_wordlength(monomial)
        q = self.extension.fiber_wordlength(monomial)
        return any(
            p >= j and q >= self.thresholds[j] for j in range(max(k, 0), self.m + 2)
        )

    @property
    def wordlength_bound(self) -> int:
        """Every monomial of total wordlength at least this lies in `I_0`."""
        return estimate_bound(self.m, self.n, self.minimal) + 1

    def describe(self, k: int) -> str:
        return " + ".join(
            f"P^(>={j},>={self.thresholds[j]})" for j in range(k, self.m + 2)
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "m": self.m,
            "n": self.n,
            "minimal": self.minimal,
            "thresholds": list(self.thresholds),
            "pieces": {str(k): self.describe(k) for k in range(self.m + 2)},
        }


def estimate_bound(m: int, n: int, minimal: bool) -> int:
    """Returns the upper estimate `(m+1)(n+1) - 1` or `(m+1)(n+2) - 2`."""
    utils.validate_nonnegative("m", m)
    utils.validate_nonnegative("n", n)
    if minimal:
        return (m + 1) * (n + 1) - 1
    return (m + 1) * (n + 2) - 2


def filtration_thresholds(m: int, n: int, minimal: bool) -> Tuple[int, ...]:
    """Returns the fiber thresholds `t_0, ..., t_(m+1)`, with `t_(m+1) = 0`."""
    utils.validate_nonnegative("m", m)
    utils.validate_nonnegative("n", n)
    step = n + 1 if minimal else n + 2
    offset = 0 if minimal else 1
    return tuple((m + 1 - j) * step - offset for j in range(m + 1)) + (0,)


@dataclasses.dataclass(frozen=True)
class FiltrationPiece:
    """The monomials of `I_k` for a filtration."""

    filtration: InterpolatingFiltration
    k: int

    def contains(self, monomial: Monomial) -> bool:
        return self.filtration.contains(self.k, monomial)

    def describe(self) -> str:
        return f"I_{self.k} = {self.filtration.describe(self.k)}"


def build_interpolating_filtration(
    extension: LambdaExtension,
    m: int,
    n: int,
    minimal: bool,
    degree_cap: int,
) -> InterpolatingFiltration:
    """Builds the filtration and certifies each piece is closed under d.

    Closure is checked on every monomial up to degree `degree_cap - 1`, whose
    differential lies in degrees at most `degree_cap`.

    Raises:
        StructureError: If a piece is not closed under d.
    """
    filtration = InterpolatingFiltration(
        extension, m, n, minimal, filtration_thresholds(m, n, minimal)
    )
    complex = extension.complex
    for degree in range(degree_cap):
        for monomial in complex.algebra.basis(degree):
            image = extend_derivation(complex, complex.algebra.monomial(monomial))
            for k in range(m + 2):
                if not filtration.contains(k, monomial):
                    continue
                escaped = [t for t in image.monomials() if not filtration.contains(k, t)]
                if escaped:
                    raise StructureError(
                        f"I_{k} is not closed under d: d("
                        f"{graded.format_monomial(complex.algebra, monomial)}) has term "
                        f"{graded.format_monomial(complex.algebra, escaped[0])} outside it."
                    )
    logger.debug(
        "Certified filtration m=%d n=%d minimal=%s to degree %d",
        m,
        n,
        minimal,
        degree_cap,
    )
    return filtration


def check_wordlength_containment(
    filtration: InterpolatingFiltration, degree_cap: int
) -> StructureReport:
    """Checks that monomials of large wordlength lie in `I_0`, up to `degree_cap`."""
    complex = filtration.extension.complex
    bound = filtration.wordlength_bound
    witnesses = []
    for degree in range(degree_cap + 1):
        for monomial in complex.algebra.basis(degree, (WordlengthFilter.at_least(bound),)):
            if not filtration.contains(0, monomial):
                witnesses.append(graded.format_monomial(complex.algebra, monomial))
    return StructureReport("wordlength-containment", not witnesses, tuple(witnesses))


def filtration_quotient(
    filtration: InterpolatingFiltration, k: int, degree_cap: int
) -> QuotientComplex:
    """Returns `LV / I_k`."""
    return QuotientComplex(
        filtration.extension.complex, (), degree_cap, FiltrationPiece(filtration, k)
    )
