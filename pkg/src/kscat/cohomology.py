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
"""Cohomology of finite-dimensional cochain complexes in a degree window.

Copyright (c) The kscat authors
"""

import abc
import dataclasses
import logging
from typing import Callable, Dict, List, Mapping, Optional, Tuple, Union

from kscat import linalg, utils
from kscat.linalg import RationalMatrix, Vector

logger = logging.getLogger(__name__)


class CapError(ValueError):
    """Raised when a computation needs degrees beyond a complex's degree cap."""


class ChainMapError(ValueError):
    """Raised when a family of matrices does not commute with the differentials."""


class CochainComplex(abc.ABC):
    """A cochain complex with finite-dimensional pieces up to a degree cap.

    `dimension(k)` is zero below `min_degree`; pieces above `max_degree` are not
    available, so `differential(k)` requires `k + 1 <= max_degree`.
    """

    @property
    @abc.abstractmethod
    def min_degree(self) -> int:
        """The smallest degree with a possibly nonzero piece."""

    @property
    @abc.abstractmethod
    def max_degree(self) -> int:
        """The largest degree whose piece is available."""

    @abc.abstractmethod
    def dimension(self, degree: int) -> int:
        """Returns the dimension of the piece in `degree`."""

    @abc.abstractmethod
    def _differential(self, degree: int) -> RationalMatrix:
        """Returns the differential out of `degree`, for `min_degree <= degree`."""

    def differential(self, degree: int) -> RationalMatrix:
        """Returns the matrix of `d: C^degree -> C^(degree + 1)`."""
        if degree + 1 > self.max_degree:
            raise CapError(
                f"The differential out of degree {degree} needs degree {degree + 1}, "
                f"beyond the degree cap {self.max_degree}."
            )
        if degree < self.min_degree:
            return RationalMatrix.zeros(self.dimension(degree + 1), 0)
        return self._differential(degree)


class ExplicitComplex(CochainComplex):
    """A complex given by explicit dimensions and differential matrices."""

    def __init__(
        self,
        dimensions: Mapping[int, int],
        differentials: Mapping[int, RationalMatrix],
    ):
        if not dimensions:
            raise ValueError("An explicit complex needs at least one degree.")
        self._dimensions = dict(dimensions)
        self._differentials = dict(differentials)
        self._min = min(self._dimensions)
        self._max = max(self._dimensions)
        for k in range(self._min, self._max):
            matrix = self._differential(k)
            if matrix.shape != (self.dimension(k + 1), self.dimension(k)):
                raise ValueError(
                    f"Differential out of degree {k} has shape {matrix.shape}, "
                    f"expected {(self.dimension(k + 1), self.dimension(k))}."
                )
            if k + 2 <= self._max and not (self._differential(k + 1) @ matrix).is_zero():
                raise ValueError(f"Differentials out of degrees {k} and {k + 1} do not compose to zero.")

    @property
    def min_degree(self) -> int:
        return self._min

    @property
    def max_degree(self) -> int:
        return self._max

    def dimension(self, degree: int) -> int:
        return self._dimensions.get(degree, 0)

    def _differential(self, degree: int) -> RationalMatrix:
        if degree in self._differentials:
            return self._differentials[degree]
        return RationalMatrix.zeros(self.dimension(degree + 1), self.dimension(degree))


@dataclasses.dataclass(frozen=True)
class DegreeCohomology:
    """Cohomology in a single degree.

    Attributes:
        degree: The degree.
        cochain_dimension: The dimension of the cochains in this degree.
        cocycles: A basis of the cocycles.
        coboundaries: A basis of the coboundaries.
        representatives: Cocycles whose classes form a basis of cohomology.
    """

    degree: int
    cochain_dimension: int
    cocycles: Tuple[Vector, ...]
    coboundaries: Tuple[Vector, ...]
    representatives: Tuple[Vector, ...]

    @property
    def dimension(self) -> int:
        return len(self.representatives)


@dataclasses.dataclass(frozen=True)
class CohomologyWindow:
    """Cohomology of `complex` in degrees `lower..upper`, with representatives."""

    complex: CochainComplex
    lower: int
    upper: int
    degrees: Mapping[int, DegreeCohomology]

    def dimension(self, degree: int) -> int:
        return self[degree].dimension

    def dimensions(self) -> Dict[int, int]:
        return {k: self.dimension(k) for k in range(self.lower, self.upper + 1)}

    def __getitem__(self, degree: int) -> DegreeCohomology:
        if degree not in self.degrees:
            raise CapError(
                f"Degree {degree} is outside the window [{self.lower}, {self.upper}]."
            )
        return self.degrees[degree]

    def class_coordinates(self, degree: int, cocycle: Vector) -> Optional[Vector]:
        """Returns the coordinates of the class of `cocycle` in the representative basis.

        Returns `None` if `cocycle` is not a cocycle.
        """
        piece = self[degree]
        size = piece.cochain_dimension
        columns = list(piece.representatives) + list(piece.coboundaries)
        if not columns:
            return () if not any(cocycle) else None
        result = linalg.preimage(RationalMatrix.from_columns(columns, size), cocycle)
        if not result.solvable:
            return None
        assert result.solution is not None
        return result.solution[: piece.dimension]

    def is_coboundary(self, degree: int, cocycle: Vector) -> bool:
        coordinates = self.class_coordinates(degree, cocycle)
        return coordinates is not None and not any(coordinates)


def cohomology(complex: CochainComplex, lower: int, upper: int) -> CohomologyWindow:
    """Computes cohomology of `complex` in degrees `lower..upper`.

    Representatives are completed greedily against the coboundaries, so they are
    independent modulo coboundaries. The complex must provide degree `upper + 1`.
    """
    if not isinstance(complex, CochainComplex):
        # Algebras provide their own finite truncation.
        complex = complex.cochain_complex(upper + 1)
    lower, upper = utils.validate_window((lower, upper))
    if upper + 1 > complex.max_degree:
        raise CapError(
            f"Cohomology up to degree {upper} needs degree {upper + 1}, beyond the "
            f"degree cap {complex.max_degree}."
        )
    degrees = {}
    for k in range(lower, upper + 1):
        size = complex.dimension(k)
        cocycles = tuple(linalg.kernel_basis(complex.differential(k)))
        coboundaries = tuple(linalg.image_basis(complex.differential(k - 1)))
        representatives: Tuple[Vector, ...] = ()
        if cocycles:
            stacked = RationalMatrix.from_columns(list(coboundaries) + list(cocycles), size)
            pivots = linalg.echelon_form(stacked).pivots
            representatives = tuple(
                cocycles[c - len(coboundaries)] for c in pivots if c >= len(coboundaries)
            )
        degrees[k] = DegreeCohomology(k, size, cocycles, coboundaries, representatives)
    logger.debug(
        "Cohomology dimensions %s",
        {k: d.dimension for k, d in degrees.items()},
    )
    return CohomologyWindow(complex, lower, upper, degrees)


ChainMap = Union[Mapping[int, RationalMatrix], Callable[[int], RationalMatrix]]


@dataclasses.dataclass(frozen=True)
class InducedMap:
    """The map induced on cohomology by a chain map.

    Attributes:
        matrices: Per degree, the matrix from source to target class coordinates.
        kernels: Per degree, a basis of the kernel as source class coordinates.
        source: The source cohomology window.
        target: The target cohomology window.
    """

    matrices: Mapping[int, RationalMatrix]
    kernels: Mapping[int, Tuple[Vector, ...]]
    source: CohomologyWindow
    target: CohomologyWindow

    def is_injective(self, degree: int) -> bool:
        return not self.kernels[degree]

    def is_surjective(self, degree: int) -> bool:
        return linalg.rank(self.matrices[degree]) == self.target.dimension(degree)

    @property
    def injective(self) -> bool:
        return all(self.is_injective(k) for k in self.matrices)

    @property
    def isomorphism(self) -> bool:
        return all(
            self.is_injective(k) and self.is_surjective(k) for k in self.matrices
        )

    def kernel_cocycles(self, degree: int) -> List[Vector]:
        """Returns source cocycles whose classes span the kernel in `degree`."""
        piece = self.source[degree]
        return [
            linalg.combine(c, piece.representatives, piece.cochain_dimension)
            for c in self.kernels[degree]
        ]


def induced_map(
    source: CohomologyWindow,
    target: CohomologyWindow,
    chain_map: ChainMap,
    validate: bool = True,
) -> InducedMap:
    """Computes the map on cohomology induced by `chain_map`.

    Args:
        source: Cohomology of the source complex.
        target: Cohomology of the target complex, over the same window.
        chain_map: The chain map, as matrices `target^k x source^k` by degree.
        validate: If `True`, check that `chain_map` commutes with the differentials
            out of every degree of the window.

    Returns:
        The `InducedMap`.
    """
    if (source.lower, source.upper) != (target.lower, target.upper):
        raise ValueError(
            f"Windows differ, got [{source.lower}, {source.upper}] and "
            f"[{target.lower}, {target.upper}]."
        )
    get = chain_map if callable(chain_map) else chain_map.__getitem__
    if validate:
        for k in range(source.lower, source.upper + 1):
            left = target.complex.differential(k) @ get(k)
            right = get(k + 1) @ source.complex.differential(k)
            if left != right:
                raise ChainMapError(f"Chain map does not commute with d in degree {k}.")
    matrices = {}
    kernels = {}
    for k in range(source.lower, source.upper + 1):
        f = get(k)
        columns = []
        for rep in source[k].representatives:
            coordinates = target.class_coordinates(k, f.apply(rep))
            if coordinates is None:
                raise ChainMapError(f"Image of a cocycle in degree {k} is not a cocycle.")
            columns.append(coordinates)
        matrix = RationalMatrix.from_columns(columns, target.dimension(k))
        matrices[k] = matrix
        kernels[k] = tuple(linalg.kernel_basis(matrix))
    return InducedMap(matrices, kernels, source, target)


def euler_characteristic(complex: CochainComplex, lower: int, upper: int) -> int:
    """Returns the alternating sum of cochain dimensions in degrees `lower..upper`."""
    return sum((-1) ** k * complex.dimension(k) for k in range(lower, upper + 1))


def cohomology_euler_characteristic(window: CohomologyWindow) -> int:
    """Returns the alternating sum of cohomology dimensions of `window`."""
    return sum((-1) ** k * d for k, d in window.dimensions().items())
