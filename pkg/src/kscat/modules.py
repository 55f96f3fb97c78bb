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
"""Differential graded modules over a Koszul-Sullivan complex.

A module is spanned over the algebra `A` by named generators. A generator may
carry a wordlength cap, which quotients by the monomials of larger wordlength in
a subset of the algebra generators; this realizes modules such as `Q[z]/(z^2)`.
Modules without caps whose generators can be ordered in stages are semifree.

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

from kscat import graded, linalg, sullivan, utils
from kscat.cohomology import CochainComplex, cohomology, induced_map
from kscat.graded import AlgebraElement, Monomial, WordlengthFilter
from kscat.linalg import RationalMatrix, Vector
from kscat.sullivan import KSComplex, StructureReport

logger = logging.getLogger(__name__)


class ModuleError(ValueError):
    """Raised when a module, morphism or homotopy is ill-formed."""


class LiftError(ValueError):
    """Raised when a lift or homotopy cannot be constructed."""


@dataclasses.dataclass(frozen=True)
class ModuleGenerator:
    """A module generator.

    Attributes:
        name: The generator name.
        degree: The generator degree, which may be any integer.
        cap: If set, monomials of counted wordlength above `cap` act as zero.
    """

    name: str
    degree: int
    cap: Optional[int] = None

    def __post_init__(self) -> None:
        if not isinstance(self.degree, int):
            raise ModuleError(f"Degree of `{self.name}` must be an integer.")
        if self.cap is not None:
            utils.validate_nonnegative("cap", self.cap)


@dataclasses.dataclass(frozen=True)
class ModuleElement:
    """An element `sum_j a_j e_j`, stored as the coefficients `a_j`."""

    components: Tuple[AlgebraElement, ...]

    def _check(self, other: "ModuleElement") -> None:
        if len(self.components) != len(other.components):
            raise ModuleError(
                f"Elements have ranks {len(self.components)} and {len(other.components)}."
            )

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        self._check(other)
        return ModuleElement(tuple(a + b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "ModuleElement":
        return ModuleElement(tuple(-a for a in self.components))

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return self + (-other)

    def scale(self, scalar: Union[int, Fraction]) -> "ModuleElement":
        return ModuleElement(tuple(a.scale(scalar) for a in self.components))

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.components)

    def support(self) -> FrozenSet[int]:
        return frozenset(j for j, a in enumerate(self.components) if not a.is_zero())


@dataclasses.dataclass(frozen=True)
class DGModule:
    """A differential graded module over `algebra`.

    Attributes:
        algebra: The complex acting on the module.
        generators: The module generators.
        differentials: The differential of each generator.
        counted: Algebra generator indices counted by caps; `None` counts all.
        label: A description used in reports.
    """

    algebra: KSComplex
    generators: Tuple[ModuleGenerator, ...]
    differentials: Tuple[ModuleElement, ...]
    counted: Optional[FrozenSet[int]] = None
    label: str = ""
    _bases: Dict[int, Tuple[Tuple[int, Monomial], ...]] = dataclasses.field(
        default_factory=dict, compare=False, repr=False
    )
    _complexes: Dict[int, "ModuleComplex"] = dataclasses.field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ModuleError(f"Module generator names must be unique, got {names}.")
        if len(self.differentials) != self.rank:
            raise ModuleError(
                f"Expected {self.rank} differentials, got {len(self.differentials)}."
            )
        if self.counted is not None:
            object.__setattr__(self, "counted", frozenset(self.counted))
            if not sullivan._closed_under_d(self.algebra, self.counted):
                raise ModuleError("Counted generators of the caps are not closed under d.")
        object.__setattr__(
            self, "differentials", tuple(self._checked(x) for x in self.differentials)
        )
        for g, dg in zip(self.generators, self.differentials):
            self._check_terms(dg, g.degree + 1, f"d{g.name}")
            self._check_caps(g.cap, self, dg, f"d{g.name}")
        for g, dg in zip(self.generators, self.differentials):
            ddg = self.d(dg)
            if not ddg.is_zero():
                raise ModuleError(f"d(d{g.name}) = {self.format(ddg)} is not zero.")

    def __hash__(self) -> int:
        return hash((self.algebra, self.generators, self.differentials))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ModuleError(f"Unknown module generator `{name}`.") from None

    def _checked(self, x: ModuleElement) -> ModuleElement:
        if len(x.components) != self.rank:
            raise ModuleError(f"Element has rank {len(x.components)}, expected {self.rank}.")
        for a in x.components:
            if a.algebra.generators != self.algebra.algebra.generators:
                raise ModuleError("Element coefficients are over another algebra.")
        return self.truncate(x)

    def _check_terms(self, x: ModuleElement, degree: int, what: str) -> None:
        for g, a in zip(self.generators, x.components):
            if any(k + g.degree != degree for k in a.degrees()):
                raise ModuleError(f"{what} is not homogeneous of degree {degree}.")

    def _check_caps(
        self, cap: Optional[int], target: "DGModule", x: ModuleElement, what: str
    ) -> None:
        # Monomials killed on the source generator must stay killed in the image.
        if cap is None:
            return
        for g, a in zip(target.generators, x.components):
            if a.is_zero():
                continue
            lowest = min(m.wordlength(target.counted) for m in a.monomials())
            if g.cap is None or g.cap > cap + lowest:
                raise ModuleError(
                    f"{what} is not well defined: the component on `{g.name}` does not "
                    "respect the wordlength caps."
                )

    def truncate(self, x: ModuleElement) -> ModuleElement:
        return ModuleElement(
            tuple(
                a
                if g.cap is None
                else graded.truncate(a, WordlengthFilter.at_most(g.cap, self.counted))
                for g, a in zip(self.generators, x.components)
            )
        )

    def zero(self) -> ModuleElement:
        return ModuleElement(tuple(self.algebra.algebra.zero() for _ in self.generators))

    def generator(self, name: str) -> ModuleElement:
        return self.basis_element(self.index(name), Monomial.unit())

    def basis_element(self, j: int, monomial: Monomial) -> ModuleElement:
        algebra = self.algebra.algebra
        return ModuleElement(
            tuple(
                algebra.monomial(monomial) if i == j else algebra.zero()
                for i in range(self.rank)
            )
        )

    def element(self, components: Mapping[str, Union[str, AlgebraElement]]) -> ModuleElement:
        """Builds an element from coefficient expressions keyed by generator name."""
        algebra = self.algebra.algebra
        values = [algebra.zero() for _ in self.generators]
        for name, value in components.items():
            values[self.index(name)] = (
                graded.parse_element(algebra, value) if isinstance(value, str) else value
            )
        return self._checked(ModuleElement(tuple(values)))

    def act(self, a: AlgebraElement, x: ModuleElement) -> ModuleElement:
        return self.truncate(
            ModuleElement(tuple(graded.multiply(a, c) for c in x.components))
        )

    def d(self, x: ModuleElement) -> ModuleElement:
        """Applies `d(a e) = da e + (-1)^|a| a de`."""
        algebra = self.algebra.algebra
        result = [algebra.zero() for _ in self.generators]
        for j, a in enumerate(x.components):
            for m, c in a.terms.items():
                mono = algebra.monomial(m, c)
                result[j] = result[j] + sullivan.extend_derivation(self.algebra, mono)
                if algebra.degree(m) % 2:
                    mono = -mono
                for i, b in enumerate(self.differentials[j].components):
                    if not b.is_zero():
                        result[i] = result[i] + graded.multiply(mono, b)
        return self.truncate(ModuleElement(tuple(result)))

    def degree_of(self, x: ModuleElement) -> Optional[int]:
        degrees = {
            k + g.degree for g, a in zip(self.generators, x.components) for k in a.degrees()
        }
        if len(degrees) > 1:
            raise ModuleError(f"`{self.format(x)}` is not homogeneous.")
        return next(iter(degrees), None)

    def basis(self, degree: int) -> Tuple[Tuple[int, Monomial], ...]:
        """Returns `(generator index, monomial)` pairs spanning `degree`."""
        if degree not in self._bases:
            pairs = []
            for j, g in enumerate(self.generators):
                filters = (
                    () if g.cap is None else (WordlengthFilter.at_most(g.cap, self.counted),)
                )
                pairs.extend(
                    (j, m) for m in self.algebra.algebra.basis(degree - g.degree, filters)
                )
            self._bases[degree] = tuple(pairs)
        return self._bases[degree]

    def coordinates(self, x: ModuleElement, degree: int) -> Vector:
        positions = {pair: n for n, pair in enumerate(self.basis(degree))}
        values = [Fraction(0)] * len(positions)
        for j, a in enumerate(x.components):
            for m, c in a.terms.items():
                if (j, m) not in positions:
                    raise ModuleError(
                        f"`{self.format(x)}` has a term outside degree {degree}."
                    )
                values[positions[(j, m)]] = c
        return tuple(values)

    def from_coordinates(self, coordinates: Sequence[Fraction], degree: int) -> ModuleElement:
        algebra = self.algebra.algebra
        terms: List[Dict[Monomial, Fraction]] = [{} for _ in self.generators]
        for (j, m), c in zip(self.basis(degree), coordinates):
            if c:
                terms[j][m] = c
        return ModuleElement(tuple(algebra.element(t) for t in terms))

    def complex(self, degree_cap: int) -> "ModuleComplex":
        if degree_cap not in self._complexes:
            self._complexes[degree_cap] = ModuleComplex(self, degree_cap)
        return self._complexes[degree_cap]

    def semifree_stages(self) -> Optional[Tuple[Tuple[int, ...], ...]]:
        """Returns generator stages if the module is semifree, else `None`."""
        if any(g.cap is not None for g in self.generators):
            return None
        supports = [dg.support() for dg in self.differentials]
        stages, remaining = sullivan.greedy_stages(supports, range(self.rank))
        if remaining:
            return None
        return tuple(tuple(s) for s in stages)

    def format(self, x: ModuleElement) -> str:
        pieces = []
        for g, a in zip(self.generators, x.components):
            if a.is_zero():
                continue
            if a == self.algebra.algebra.one():
                pieces.append(g.name)
            else:
                pieces.append(f"({a})*{g.name}")
        return " + ".join(pieces) if pieces else "0"


class ModuleComplex(CochainComplex):
    """The underlying cochain complex of a module, up to a degree cap."""

    def __init__(self, module: DGModule, degree_cap: int):
        self.module = module
        self.degree_cap = degree_cap
        self._differentials: Dict[int, RationalMatrix] = {}

    @property
    def min_degree(self) -> int:
        return min((g.degree for g in self.module.generators), default=0)

    @property
    def max_degree(self) -> int:
        return self.degree_cap

    def dimension(self, degree: int) -> int:
        return len(self.module.basis(degree))

    def _differential(self, degree: int) -> RationalMatrix:
        if degree not in self._differentials:
            columns = [
                self.module.coordinates(
                    self.module.d(self.module.basis_element(j, m)), degree + 1
                )
                for j, m in self.module.basis(degree)
            ]
            self._differentials[degree] = RationalMatrix.from_columns(
                columns, self.dimension(degree + 1)
            )
        return self._differentials[degree]


def dg_module(
    algebra: KSComplex,
    generators: Sequence[Union[ModuleGenerator, Tuple[str, int]]],
    differential: Optional[Mapping[str, Mapping[str, Union[str, AlgebraElement]]]] = None,
    counted: Optional[Sequence[str]] = None,
    label: str = "",
) -> DGModule:
    """Constructs a module from generators and differentials keyed by name.

    `differential[e]` maps generator names to coefficient expressions.
    """
    differential = differential or {}
    gens = tuple(
        g if isinstance(g, ModuleGenerator) else ModuleGenerator(*g) for g in generators
    )
    names = [g.name for g in gens]
    zero = algebra.algebra.zero()
    images = []
    for g in gens:
        components = [zero] * len(gens)
        for name, value in differential.get(g.name, {}).items():
            if name not in names:
                raise ModuleError(f"Unknown module generator `{name}`.")
            components[names.index(name)] = (
                graded.parse_element(algebra.algebra, value) if isinstance(value, str) else value
            )
        images.append(ModuleElement(tuple(components)))
    return DGModule(
        algebra,
        gens,
        tuple(images),
        None if counted is None else algebra.algebra.indices(counted),
        label,
    )


def free_module(
    algebra: KSComplex, generators: Sequence[Tuple[str, int]] = (("e", 0),)
) -> DGModule:
    """Returns the free module on generators with zero differential."""
    return dg_module(algebra, generators, label="free")


# -----------------------------------------------------------------------------
# Morphisms.
# -----------------------------------------------------------------------------


def _apply_images(
    target: DGModule,
    images: Sequence[ModuleElement],
    shift: int,
    x: ModuleElement,
) -> ModuleElement:
    algebra = target.algebra.algebra
    result = [algebra.zero() for _ in target.generators]
    for j, a in enumerate(x.components):
        for m, c in a.terms.items():
            sign = -1 if (shift * algebra.degree(m)) % 2 else 1
            mono = algebra.monomial(m, sign * c)
            for i, b in enumerate(images[j].components):
                if not b.is_zero():
                    result[i] = result[i] + graded.multiply(mono, b)
    return target.truncate(ModuleElement(tuple(result)))


@dataclasses.dataclass(frozen=True)
class ModuleMorphism:
    """An `A`-linear map of degree `shift`, given on generators.

    On `a e` it acts as `(-1)^(shift |a|) a F(e)`.

    Attributes:
        source: The source module.
        target: The target module.
        images: The image of each source generator.
        shift: The degree of the map.
    """

    source: DGModule
    target: DGModule
    images: Tuple[ModuleElement, ...]
    shift: int = 0

    def __post_init__(self) -> None:
        if self.source.algebra != self.target.algebra:
            raise ModuleError("Source and target are modules over different algebras.")
        if len(self.images) != self.source.rank:
            raise ModuleError(
                f"Expected {self.source.rank} generator images, got {len(self.images)}."
            )
        object.__setattr__(
            self, "images", tuple(self.target._checked(x) for x in self.images)
        )
        for g, x in zip(self.source.generators, self.images):
            self.target._check_terms(x, g.degree + self.shift, f"image of `{g.name}`")
            self.source._check_caps(g.cap, self.target, x, f"image of `{g.name}`")

    def apply(self, x: ModuleElement) -> ModuleElement:
        return _apply_images(self.target, self.images, self.shift, x)

    def __call__(self, x: ModuleElement) -> ModuleElement:
        return self.apply(x)

    def matrix(self, degree: int) -> RationalMatrix:
        """Returns the matrix from source degree `degree` to target `degree + shift`."""
        columns = [
            self.target.coordinates(
                self.apply(self.source.basis_element(j, m)), degree + self.shift
            )
            for j, m in self.source.basis(degree)
        ]
        return RationalMatrix.from_columns(
            columns, len(self.target.basis(degree + self.shift))
        )

    def __add__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        _check_parallel(self, other)
        return ModuleMorphism(
            self.source,
            self.target,
            tuple(a + b for a, b in zip(self.images, other.images)),
            self.shift,
        )

    def __neg__(self) -> "ModuleMorphism":
        return ModuleMorphism(
            self.source, self.target, tuple(-a for a in self.images), self.shift
        )

    def __sub__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return self + (-other)

    def scale(self, scalar: Union[int, Fraction]) -> "ModuleMorphism":
        return ModuleMorphism(
            self.source, self.target, tuple(a.scale(scalar) for a in self.images), self.shift
        )

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.images)


def _check_parallel(f: ModuleMorphism, g: ModuleMorphism) -> None:
    if f.source != g.source or f.target != g.target or f.shift != g.shift:
        raise ModuleError("Morphisms do not share source, target and degree.")


def morphism(
    source: DGModule,
    target: DGModule,
    images: Mapping[str, Mapping[str, Union[str, AlgebraElement]]],
    shift: int = 0,
) -> ModuleMorphism:
    """Constructs a morphism from generator images keyed by name."""
    values = [target.zero() for _ in source.generators]
    for name, image in images.items():
        values[source.index(name)] = target.element(image)
    return ModuleMorphism(source, target, tuple(values), shift)


def identity(module: DGModule) -> ModuleMorphism:
    return ModuleMorphism(
        module, module, tuple(module.generator(n) for n in module.names)
    )


def zero_morphism(source: DGModule, target: DGModule, shift: int = 0) -> ModuleMorphism:
    return ModuleMorphism(source, target, tuple(target.zero() for _ in source.generators), shift)


def compose(g: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    """Returns `g o f`."""
    if f.target != g.source:
        raise ModuleError("Cannot compose: the target of f is not the source of g.")
    return ModuleMorphism(
        f.source, g.target, tuple(g.apply(x) for x in f.images), f.shift + g.shift
    )


def check_morphism(f: ModuleMorphism) -> StructureReport:
    """Checks `d F = (-1)^shift F d` on generators."""
    sign = -1 if f.shift % 2 else 1
    witnesses = []
    for name, x, dx in zip(f.source.names, f.images, f.source.differentials):
        defect = f.target.d(x) - f.apply(dx).scale(sign)
        if not defect.is_zero():
            witnesses.append(f"on `{name}`: {f.target.format(defect)}")
    return StructureReport("chain-map", not witnesses, tuple(witnesses))


@dataclasses.dataclass(frozen=True)
class Homotopy:
    """A homotopy `first - second = d theta + theta d`."""

    first: ModuleMorphism
    second: ModuleMorphism
    theta: ModuleMorphism

    def __post_init__(self) -> None:
        _check_parallel(self.first, self.second)
        if self.theta.shift != -1:
            raise ModuleError(f"A homotopy has degree -1, got {self.theta.shift}.")
        if self.theta.source != self.first.source or self.theta.target != self.first.target:
            raise ModuleError("The homotopy does not share source and target.")

    def verify(self) -> StructureReport:
        return check_homotopy(self.first, self.second, self.theta)


def check_homotopy(
    f: ModuleMorphism, g: ModuleMorphism, theta: ModuleMorphism
) -> StructureReport:
    """Checks `f - g = d theta + theta d` on generators."""
    witnesses = []
    for name in f.source.names:
        e = f.source.generator(name)
        defect = (
            f.apply(e)
            - g.apply(e)
            - f.target.d(theta.apply(e))
            - theta.apply(f.source.d(e))
        )
        if not defect.is_zero():
            witnesses.append(f"on `{name}`: {f.target.format(defect)}")
    return StructureReport("homotopy", not witnesses, tuple(witnesses))


def null_homotopic_morphism(h: ModuleMorphism) -> ModuleMorphism:
    """Returns the commutator `d h - (-1)^shift h d`, a chain map of degree `shift + 1`.

    For a homotopy `h` of degree -1 this is `d h + h d`.
    """
    sign = -1 if h.shift % 2 else 1
    images = tuple(
        h.target.d(h.apply(e)) - h.apply(h.source.d(e)).scale(sign)
        for e in (h.source.generator(n) for n in h.source.names)
    )
    return ModuleMorphism(h.source, h.target, images, h.shift + 1)


def injective_in_degrees(f: ModuleMorphism, degrees: Sequence[int]) -> bool:
    return all(linalg.rank(f.matrix(k)) == len(f.source.basis(k)) for k in degrees)


def surjective_in_degrees(f: ModuleMorphism, degrees: Sequence[int]) -> bool:
    return all(
        linalg.rank(f.matrix(k)) == len(f.target.basis(k + f.shift)) for k in degrees
    )


def quasi_isomorphism_in_window(f: ModuleMorphism, window: Tuple[int, int]) -> bool:
    """Checks that `f` induces isomorphisms on cohomology in `window`."""
    lower, upper = utils.validate_window(window)
    source = cohomology(f.source.complex(upper + 1), lower, upper)
    target = cohomology(f.target.complex(upper + 1), lower, upper)
    return induced_map(source, target, f.matrix).isomorphism


def _require_semifree(module: DGModule, what: str) -> Tuple[Tuple[int, ...], ...]:
    stages = module.semifree_stages()
    if stages is None:
        raise ModuleError(f"The {what} must be semifree.")
    return stages


# -----------------------------------------------------------------------------
# Mapping cylinder.
# -----------------------------------------------------------------------------


def _pad(x: ModuleElement, before: int, after: int) -> ModuleElement:
    if not x.components:
        raise ModuleError("Cannot place an element of rank zero.")
    zero = x.components[0].algebra.zero()
    return ModuleElement((zero,) * before + x.components + (zero,) * after)


def _koszul_twist(x: ModuleElement) -> ModuleElement:
    """Returns `sum (-1)^|a_j| a_j e_j`."""
    twisted = []
    for a in x.components:
        algebra = a.algebra
        twisted.append(
            algebra.element(
                {m: (-c if algebra.degree(m) % 2 else c) for m, c in a.terms.items()}
            )
        )
    return ModuleElement(tuple(twisted))


@dataclasses.dataclass(frozen=True)
class Cylinder:
    """The factorization `f = p o F` through the mapping cylinder.

    The total module has generators `v@P`, `a@Q` and `sv@P`, in that order, with
    `D(sv) = v + f(v) - S(dv)` where `S(a v) = (-1)^|a| a sv`.

    Attributes:
        f: The factored morphism `P -> Q`.
        total: The cylinder module.
        inclusion: The inclusion `F: P -> total`.
        projection: The projection `p: total -> Q`, which is `f` on `P`, minus the
            identity on `Q` and zero on the suspended generators.
    """

    f: ModuleMorphism
    total: DGModule
    inclusion: ModuleMorphism
    projection: ModuleMorphism

    @property
    def source(self) -> DGModule:
        return self.f.source

    @property
    def target(self) -> DGModule:
        return self.f.target

    def embed_source(self, x: ModuleElement) -> ModuleElement:
        return _pad(x, 0, self.target.rank + self.source.rank)

    def embed_target(self, x: ModuleElement) -> ModuleElement:
        return _pad(x, self.source.rank, self.source.rank)

    def suspend(self, x: ModuleElement) -> ModuleElement:
        """Returns `S(x)` for `x` in the source."""
        return _pad(_koszul_twist(x), self.source.rank + self.target.rank, 0)

    def verify(self, window: Optional[Tuple[int, int]] = None) -> Dict[str, Any]:
        """Checks the factorization, and the quasi-isomorphism in `window` if given."""
        factorization = compose(self.projection, self.inclusion)
        result: Dict[str, Any] = {
            "chain_map_F": check_morphism(self.inclusion).verdict,
            "chain_map_p": check_morphism(self.projection).verdict,
            "factorization": all(
                a == b for a, b in zip(factorization.images, self.f.images)
            ),
        }
        if window is not None:
            lower, upper = utils.validate_window(window)
            degrees = range(lower, upper + 1)
            result["F_injective"] = injective_in_degrees(self.inclusion, degrees)
            result["p_surjective"] = surjective_in_degrees(self.projection, degrees)
            result["p_quasi_isomorphism"] = quasi_isomorphism_in_window(
                self.projection, (lower, upper)
            )
        return result


def mapping_cylinder(f: ModuleMorphism) -> Cylinder:
    """Builds the mapping cylinder of a chain map out of a semifree module."""
    if f.shift != 0:
        raise ModuleError("Only degree-zero chain maps have a mapping cylinder.")
    _require_semifree(f.source, "source of the cylinder")
    report = check_morphism(f)
    if not report.verdict:
        raise ModuleError(f"Not a chain map: {'; '.join(report.witnesses)}")
    P, Q = f.source, f.target
    p, q = P.rank, Q.rank
    generators = (
        tuple(ModuleGenerator(f"{g.name}@P", g.degree) for g in P.generators)
        + tuple(ModuleGenerator(f"{g.name}@Q", g.degree, g.cap) for g in Q.generators)
        + tuple(ModuleGenerator(f"s{g.name}@P", g.degree - 1) for g in P.generators)
    )

    def from_source(x: ModuleElement) -> ModuleElement:
        return _pad(x, 0, q + p)

    def from_target(x: ModuleElement) -> ModuleElement:
        return _pad(x, p, p)

    def suspend(x: ModuleElement) -> ModuleElement:
        return _pad(_koszul_twist(x), p + q, 0)

    differentials = (
        tuple(from_source(dv) for dv in P.differentials)
        + tuple(from_target(da) for da in Q.differentials)
        + tuple(
            from_source(P.generator(name)) + from_target(f.images[j]) - suspend(dv)
            for j, (name, dv) in enumerate(zip(P.names, P.differentials))
        )
    )
    total = DGModule(
        P.algebra,
        generators,
        differentials,
        Q.counted,
        f"cylinder({P.label or 'P'} -> {Q.label or 'Q'})",
    )
    inclusion = ModuleMorphism(
        P, total, tuple(from_source(P.generator(n)) for n in P.names)
    )
    projection = ModuleMorphism(
        total,
        Q,
        tuple(f.images)
        + tuple(-Q.generator(n) for n in Q.names)
        + tuple(Q.zero() for _ in P.names),
    )
    logger.debug("Built cylinder of rank %d", total.rank)
    return Cylinder(f, total, inclusion, projection)


@dataclasses.dataclass(frozen=True)
class Strictification:
    """A map `G` out of the cylinder with `G o F` equal to a prescribed map."""

    cylinder: Cylinder
    G: ModuleMorphism
    report: StructureReport


def strictify(
    f: ModuleMorphism,
    g: ModuleMorphism,
    homotopy: Homotopy,
    cylinder: Optional[Cylinder] = None,
) -> Strictification:
    """Replaces `g` by `G` on the cylinder of `f` with `G o F = h` on the nose.

    Args:
        f: The map `P -> Q`.
        g: The map `Q -> M`.
        homotopy: A homotopy from `g o f` to `h: P -> M`, with `h` its second map.
        cylinder: A cylinder of `f` to reuse.

    Returns:
        The `Strictification`; `G` is `h` on `P`, `-g` on `Q` and `-theta` on the
        suspended generators.
    """
    if g.source != f.target:
        raise ModuleError("The source of g must be the target of f.")
    composite = compose(g, f)
    if any(a != b for a, b in zip(composite.images, homotopy.first.images)):
        raise ModuleError("The homotopy does not start at g o f.")
    report = homotopy.verify()
    if not report.verdict:
        raise ModuleError(f"Invalid homotopy: {'; '.join(report.witnesses)}")
    if cylinder is None:
        cylinder = mapping_cylinder(f)
    elif cylinder.f != f:
        raise ModuleError("The cylinder does not belong to f.")
    h, theta = homotopy.second, homotopy.theta
    G = ModuleMorphism(
        cylinder.total,
        g.target,
        tuple(h.images)
        + tuple(-x for x in g.images)
        + tuple(-x for x in theta.images),
    )
    checks = [check_morphism(G)]
    factor = compose(G, cylinder.inclusion)
    if any(a != b for a, b in zip(factor.images, h.images)):
        checks.append(StructureReport("factorization", False, ("G o F differs from h",)))
    witnesses = tuple(w for c in checks for w in c.witnesses)
    return Strictification(
        cylinder,
        G,
        StructureReport("strictify", all(c.verdict for c in checks), witnesses),
    )


def strictify_retraction(
    f: ModuleMorphism,
    g: ModuleMorphism,
    homotopy_identity: Homotopy,
    phi: ModuleMorphism,
    homotopy_projection: Homotopy,
) -> Tuple[Strictification, Strictification]:
    """Strictifies a homotopy retraction and a second map over one cylinder.

    Returns `G` with `G o F = id` and `Phi` with `Phi o F` equal to the second map
    of `homotopy_projection`.
    """
    cylinder = mapping_cylinder(f)
    return (
        strictify(f, g, homotopy_identity, cylinder),
        strictify(f, phi, homotopy_projection, cylinder),
    )


# -----------------------------------------------------------------------------
# Lifting.
# -----------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Lift:
    """A lift `psi` with `f o psi = phi`."""

    psi: ModuleMorphism
    order: Tuple[str, ...]
    report: StructureReport


def _stage_order(module: DGModule) -> List[int]:
    return [j for stage in _require_semifree(module, "source module") for j in stage]


def lift_through_surjection(
    phi: ModuleMorphism,
    f: ModuleMorphism,
    window: Tuple[int, int],
    reverse_pivots: bool = False,
) -> Lift:
    """Lifts `phi: P -> N` through a surjective quasi-isomorphism `f: M -> N`.

    Generators are processed in stage order; each image solves
    `d psi(v) = psi(dv)` and `f psi(v) = phi(v)` in one linear system.

    Args:
        phi: The map to lift, out of a semifree module.
        f: The surjection.
        window: Degrees `(lower, upper)`; generators must lie in `lower..upper-1`.
        reverse_pivots: Select the other pivot order for the particular solutions.

    Returns:
        The `Lift`.

    Raises:
        LiftError: If a generator lies outside the window, `f` is not surjective,
            or a generator admits no lift.
    """
    lower, upper = utils.validate_window(window)
    if phi.shift or f.shift or phi.target != f.target:
        raise ModuleError("Expected degree-zero maps phi: P -> N and f: M -> N.")
    P, M = phi.source, f.source
    order = _stage_order(P)
    for g in P.generators:
        if not lower <= g.degree <= upper - 1:
            raise LiftError(f"Generator `{g.name}` lies outside the window {window}.")
    degrees = sorted({g.degree for g in P.generators})
    if not surjective_in_degrees(f, degrees):
        raise LiftError("The map to lift through is not surjective in the window.")
    images = [M.zero() for _ in P.generators]
    for j in order:
        g = P.generators[j]
        k = g.degree
        boundary = _apply_images(M, images, 0, P.differentials[j])
        stacked = linalg.vstack(M.complex(upper).differential(k), f.matrix(k))
        rhs = M.coordinates(boundary, k + 1) + f.target.coordinates(phi.images[j], k)
        result = linalg.preimage(stacked, rhs, reverse=reverse_pivots)
        if not result.solvable:
            raise LiftError(f"Cannot lift generator `{g.name}` in degree {k}.")
        images[j] = M.from_coordinates(result.solution, k)
    psi = ModuleMorphism(P, M, tuple(images))
    checks = [check_morphism(psi)]
    if any(a != b for a, b in zip(compose(f, psi).images, phi.images)):
        checks.append(StructureReport("factorization", False, ("f o psi differs from phi",)))
    return Lift(
        psi,
        tuple(P.names[j] for j in order),
        StructureReport(
            "lift",
            all(c.verdict for c in checks),
            tuple(w for c in checks for w in c.witnesses),
        ),
    )


def find_lift_homotopy(
    psi1: ModuleMorphism,
    psi2: ModuleMorphism,
    f: ModuleMorphism,
    window: Tuple[int, int],
) -> Homotopy:
    """Finds `theta` with `psi1 - psi2 = d theta + theta d` and `f theta = 0`.

    Both lifts must satisfy `f o psi1 = f o psi2`.
    """
    lower, upper = utils.validate_window(window)
    _check_parallel(psi1, psi2)
    P, M = psi1.source, psi1.target
    order = _stage_order(P)
    images = [M.zero() for _ in P.generators]
    for j in order:
        g = P.generators[j]
        k = g.degree
        if not lower <= g.degree <= upper - 1:
            raise LiftError(f"Generator `{g.name}` lies outside the window {window}.")
        e = P.generator(g.name)
        partial = _apply_images(M, images, -1, P.differentials[j])
        residual = psi1.apply(e) - psi2.apply(e) - partial
        stacked = linalg.vstack(M.complex(upper).differential(k - 1), f.matrix(k - 1))
        rhs = M.coordinates(residual, k) + linalg.zero_vector(
            len(f.target.basis(k - 1))
        )
        result = linalg.preimage(stacked, rhs)
        if not result.solvable:
            raise LiftError(f"No homotopy on generator `{g.name}` in degree {k}.")
        images[j] = M.from_coordinates(result.solution, k - 1)
    homotopy = Homotopy(psi1, psi2, ModuleMorphism(P, M, tuple(images), -1))
    report = homotopy.verify()
    if not report.verdict:
        raise LiftError(f"Homotopy check failed: {'; '.join(report.witnesses)}")
    return homotopy


# -----------------------------------------------------------------------------
# Resolutions.
# -----------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Resolution:
    """A semifree module `P` with a surjection `f: P -> M` that is a quasi-iso.

    Attributes:
        module: The semifree module `P`.
        map: The map `f: P -> M`.
        window: The requested window.
        certified: The window where surjectivity and quasi-isomorphism are checked.
        stages: The stage of each generator.
        surjective: Whether `f` is surjective on the certified window.
        quasi_isomorphism: Whether `f` is a quasi-isomorphism on the certified window.
        partial: Whether the stage budget ran out before all defects were killed.
    """

    module: DGModule
    map: ModuleMorphism
    window: Tuple[int, int]
    certified: Tuple[int, int]
    stages: Tuple[int, ...]
    surjective: bool
    quasi_isomorphism: bool
    partial: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "generators": [
                {"name": g.name, "degree": g.degree, "stage": s}
                for g, s in zip(self.module.generators, self.stages)
            ],
            "window": list(self.window),
            "certified": list(self.certified),
            "surjective": self.surjective,
            "quasi_isomorphism": self.quasi_isomorphism,
            "partial": self.partial,
        }


class _ResolutionBuilder:
    def __init__(self, target: DGModule):
        self.target = target
        self.generators: List[ModuleGenerator] = []
        self.differentials: List[Dict[int, AlgebraElement]] = []
        self.images: List[ModuleElement] = []
        self.stages: List[int] = []

    def add(
        self,
        name: str,
        degree: int,
        differential: Dict[int, AlgebraElement],
        image: ModuleElement,
    ) -> None:
        stage = 1 + max((self.stages[i] for i in differential), default=-1)
        self.generators.append(ModuleGenerator(name, degree))
        self.differentials.append(differential)
        self.images.append(image)
        self.stages.append(stage)

    def build(self) -> Tuple[DGModule, ModuleMorphism]:
        algebra = self.target.algebra
        zero = algebra.algebra.zero()
        rank = len(self.generators)
        module = DGModule(
            algebra,
            tuple(self.generators),
            tuple(
                ModuleElement(tuple(d.get(i, zero) for i in range(rank)))
                for d in self.differentials
            ),
            label="resolution",
        )
        return module, ModuleMorphism(module, self.target, tuple(self.images))


def surjective_resolution(
    target: DGModule, window: Tuple[int, int], max_rounds: int = 8
) -> Resolution:
    """Builds a semifree resolution of `target` in `window`.

    Stage zero maps one generator onto each basis cocycle of `target`, and adds a
    contractible pair for each cochain outside the cocycles. Classes in the kernel
    on cohomology are then killed degree by degree, each by a new generator one
    degree lower.
    """
    lower, upper = utils.validate_window(window)
    M = target
    complex = M.complex(upper + 1)
    algebra = M.algebra.algebra
    builder = _ResolutionBuilder(M)
    for k in range(lower, upper + 1):
        cocycles = linalg.kernel_basis(complex.differential(k))
        for i, z in enumerate(cocycles):
            builder.add(f"c{k}_{i}", k, {}, M.from_coordinates(z, k))
        if k == upper:
            continue
        size = complex.dimension(k)
        stacked = RationalMatrix.from_columns(
            list(cocycles) + [tuple(Fraction(int(r == c)) for r in range(size)) for c in range(size)],
            size,
        )
        pivots = linalg.echelon_form(stacked).pivots
        for i, c in enumerate(p - len(cocycles) for p in pivots if p >= len(cocycles)):
            x = M.from_coordinates(
                tuple(Fraction(int(r == c)) for r in range(size)), k
            )
            w = len(builder.generators)
            builder.add(f"b{k + 1}_{i}", k + 1, {}, M.d(x))
            builder.add(f"a{k}_{i}", k, {w: algebra.one()}, x)
    partial = False
    for k in range(lower, upper + 1):
        for attempt in range(max_rounds + 1):
            P, f = builder.build()
            source = cohomology(P.complex(upper + 1), k, k)
            image = cohomology(complex, k, k)
            induced = induced_map(source, image, f.matrix, validate=False)
            kernel = induced.kernel_cocycles(k)
            if not kernel:
                break
            if attempt == max_rounds:
                partial = True
                logger.warning("Resolution stage budget exhausted in degree %d", k)
                break
            for i, c in enumerate(kernel):
                cocycle = P.from_coordinates(c, k)
                pushed = M.coordinates(f.apply(cocycle), k)
                solved = linalg.preimage(complex.differential(k - 1), pushed)
                if not solved.solvable:
                    raise ArithmeticError("A kernel class does not bound in the target.")
                builder.add(
                    f"u{k - 1}_{attempt}_{i}",
                    k - 1,
                    {j: a for j, a in enumerate(cocycle.components) if not a.is_zero()},
                    M.from_coordinates(solved.solution, k - 1),
                )
    P, f = builder.build()
    certified = (lower, max(lower, upper - 1))
    degrees = range(certified[0], certified[1] + 1)
    surjective = surjective_in_degrees(f, degrees)
    quasi = quasi_isomorphism_in_window(f, certified)
    logger.info(
        "Resolution with %d generators, surjective=%s quasi-isomorphism=%s",
        P.rank,
        surjective,
        quasi,
    )
    return Resolution(
        P, f, (lower, upper), certified, tuple(builder.stages), surjective, quasi, partial
    )
