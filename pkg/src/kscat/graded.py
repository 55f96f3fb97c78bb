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
"""Free graded-commutative algebras over the rationals.

Copyright (c) The kscat authors
"""

import dataclasses
import functools
import re
from fractions import Fraction
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from kscat import utils

Rational = Union[int, Fraction]

_NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN_PATTERN = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^]))"
)


class ParseError(ValueError):
    """Raised when an expression or input file cannot be parsed.

    Attributes:
        message: The description without the position.
        line: The 1-based line of the offending input.
        column: The 1-based column of the offending input.
    """

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


@dataclasses.dataclass(frozen=True)
class Generator:
    """A generator of a free graded-commutative algebra.

    Attributes:
        name: The identifier used in expressions.
        degree: The positive degree of the generator.
        index: The position of the generator in its algebra.
    """

    name: str
    degree: int
    index: int

    def __post_init__(self) -> None:
        if not _NAME_PATTERN.match(self.name):
            raise ValueError(f"Invalid generator name, got {self.name!r}.")
        if not isinstance(self.degree, int) or self.degree < 1:
            raise ValueError(
                f"Generator degrees must be positive integers, but `{self.name}` "
                f"has degree {self.degree!r}."
            )

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1


@dataclasses.dataclass(frozen=True, order=True)
class Monomial:
    """A product of generators in canonical order.

    Attributes:
        exponents: Sorted `(index, exponent)` pairs with positive exponents.
    """

    exponents: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        indices = [i for i, _ in self.exponents]
        if indices != sorted(set(indices)):
            raise ValueError(
                f"Monomial indices must be strictly increasing, got {self.exponents}."
            )
        if any(e < 1 for _, e in self.exponents):
            raise ValueError(
                f"Monomial exponents must be positive, got {self.exponents}."
            )

    @classmethod
    def unit(cls) -> "Monomial":
        return cls(())

    @classmethod
    def of(cls, exponents: Mapping[int, int]) -> "Monomial":
        return cls(tuple(sorted((i, e) for i, e in exponents.items() if e > 0)))

    @property
    def is_unit(self) -> bool:
        return not self.exponents

    def exponent(self, index: int) -> int:
        for i, e in self.exponents:
            if i == index:
                return e
        return 0

    def indices(self) -> FrozenSet[int]:
        return frozenset(i for i, _ in self.exponents)

    def wordlength(self, counted: Optional[FrozenSet[int]] = None) -> int:
        """Returns the number of generator factors, counting only `counted`."""
        return sum(e for i, e in self.exponents if counted is None or i in counted)


@dataclasses.dataclass(frozen=True)
class WordlengthFilter:
    """Keeps the monomials whose wordlength relative to a subset is in a window.

    Attributes:
        counted: Indices of the counted generators; `None` counts every generator.
        lower: The smallest allowed wordlength.
        upper: The largest allowed wordlength, or `None` for no upper bound.
    """

    counted: Optional[FrozenSet[int]] = None
    lower: int = 0
    upper: Optional[int] = None

    def __post_init__(self) -> None:
        if self.counted is not None:
            object.__setattr__(self, "counted", frozenset(self.counted))
        utils.validate_nonnegative("lower", self.lower)
        if self.upper is not None and self.upper < self.lower:
            raise ValueError(
                f"Wordlength window is empty, got [{self.lower}, {self.upper}]."
            )

    @classmethod
    def at_least(
        cls, lower: int, counted: Optional[Iterable[int]] = None
    ) -> "WordlengthFilter":
        return cls(_frozen(counted), lower, None)

    @classmethod
    def at_most(
        cls, upper: int, counted: Optional[Iterable[int]] = None
    ) -> "WordlengthFilter":
        return cls(_frozen(counted), 0, upper)

    @classmethod
    def exactly(
        cls, wordlength: int, counted: Optional[Iterable[int]] = None
    ) -> "WordlengthFilter":
        return cls(_frozen(counted), wordlength, wordlength)

    @classmethod
    def window(
        cls, lower: int, upper: int, counted: Optional[Iterable[int]] = None
    ) -> "WordlengthFilter":
        return cls(_frozen(counted), lower, upper)

    @property
    def is_pinned(self) -> bool:
        return self.upper is not None and self.upper == self.lower

    def contains(self, monomial: Monomial) -> bool:
        wordlength = monomial.wordlength(self.counted)
        if wordlength < self.lower:
            return False
        return self.upper is None or wordlength <= self.upper

    def describe(self, algebra: Optional["GradedAlgebra"] = None) -> str:
        if self.counted is None:
            subset = "V"
        elif algebra is None:
            subset = "{" + ",".join(str(i) for i in sorted(self.counted)) + "}"
        else:
            subset = "{" + ",".join(algebra.names[i] for i in sorted(self.counted)) + "}"
        upper = "inf" if self.upper is None else str(self.upper)
        return f"wl_{subset} in [{self.lower}, {upper}]"


def _frozen(counted: Optional[Iterable[int]]) -> Optional[FrozenSet[int]]:
    return None if counted is None else frozenset(counted)


@dataclasses.dataclass(frozen=True)
class GradedAlgebra:
    """The free graded-commutative algebra on a finite list of generators.

    Generators are ordered by their index; a monomial stores its factors in that
    order. Odd generators anticommute and square to zero.

    Attributes:
        generators: The generators, with `generators[i].index == i`.
    """

    generators: Tuple[Generator, ...]
    _products: Dict[
        Tuple[Monomial, Monomial], Tuple[int, Optional[Monomial]]
    ] = dataclasses.field(default_factory=dict, compare=False, repr=False)
    _bases: Dict[int, Tuple[Monomial, ...]] = dataclasses.field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"Generator names must be unique, got {names}.")
        for i, g in enumerate(self.generators):
            if g.index != i:
                raise ValueError(
                    f"Generator `{g.name}` has index {g.index} but position {i}."
                )

    def __hash__(self) -> int:
        return hash(self.generators)

    @functools.cached_property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @functools.cached_property
    def odd_indices(self) -> FrozenSet[int]:
        return frozenset(g.index for g in self.generators if g.is_odd)

    @functools.cached_property
    def _index_by_name(self) -> Dict[str, int]:
        return {g.name: g.index for g in self.generators}

    def index(self, name: str) -> int:
        try:
            return self._index_by_name[name]
        except KeyError:
            raise ValueError(f"Unknown generator `{name}`.") from None

    def indices(self, names: Iterable[str]) -> FrozenSet[int]:
        return frozenset(self.index(n) for n in names)

    def degree(self, monomial: Monomial) -> int:
        return sum(self.generators[i].degree * e for i, e in monomial.exponents)

    # -------------------------------------------------------------------------
    # Elements.
    # -------------------------------------------------------------------------

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {Monomial.unit(): Fraction(1)})

    def monomial(self, monomial: Monomial, coefficient: Rational = 1) -> "AlgebraElement":
        return AlgebraElement(self, {monomial: Fraction(coefficient)})

    def generator_element(self, name: str) -> "AlgebraElement":
        return self.monomial(Monomial(((self.index(name), 1),)))

    def element(self, terms: Mapping[Monomial, Rational]) -> "AlgebraElement":
        return AlgebraElement(self, terms)

    def parse(self, text: str) -> "AlgebraElement":
        return parse_element(self, text)

    # -------------------------------------------------------------------------
    # Products and bases.
    # -------------------------------------------------------------------------

    def multiply_monomials(
        self, left: Monomial, right: Monomial
    ) -> Tuple[int, Optional[Monomial]]:
        """Returns `(sign, product)` with `left * right = sign * product`.

        The product is `None` when an odd generator appears twice.
        """
        key = (left, right)
        if key not in self._products:
            self._products[key] = self._multiply_monomials(left, right)
        return self._products[key]

    def _multiply_monomials(
        self, left: Monomial, right: Monomial
    ) -> Tuple[int, Optional[Monomial]]:
        odd = self.odd_indices
        exponents = dict(left.exponents)
        for i, e in right.exponents:
            if i in odd and i in exponents:
                return 0, None
            exponents[i] = exponents.get(i, 0) + e
        # Each odd factor of `right` moves past the larger odd factors of `left`.
        left_odd = [i for i, _ in left.exponents if i in odd]
        swaps = 0
        for i, _ in right.exponents:
            if i in odd:
                swaps += sum(1 for j in left_odd if j > i)
        sign = -1 if swaps % 2 else 1
        return sign, Monomial.of(exponents)

    def basis(
        self, degree: int, filters: Sequence[WordlengthFilter] = ()
    ) -> Tuple[Monomial, ...]:
        """Returns the monomials of `degree` passing all `filters`, in canonical order."""
        if degree < 0:
            return ()
        if degree not in self._bases:
            self._bases[degree] = tuple(sorted(self._enumerate(degree, 0)))
        monomials = self._bases[degree]
        if filters:
            monomials = tuple(
                m for m in monomials if all(f.contains(m) for f in filters)
            )
        return monomials

    def _enumerate(self, degree: int, start: int) -> List[Monomial]:
        if degree == 0:
            return [Monomial.unit()]
        result = []
        for i in range(start, len(self.generators)):
            g = self.generators[i]
            max_exponent = 1 if g.is_odd else degree // g.degree
            for e in range(1, max_exponent + 1):
                remaining = degree - e * g.degree
                if remaining < 0:
                    break
                for rest in self._enumerate(remaining, i + 1):
                    result.append(Monomial(((i, e),) + rest.exponents))
        return result

    def subalgebra(self, names: Iterable[str]) -> Tuple["GradedAlgebra", Dict[int, int]]:
        """Returns the algebra on `names` and the map from old to new indices.

        Generators keep their relative order, so canonical monomials stay canonical.
        """
        keep = sorted(self.indices(names))
        algebra = graded_algebra(
            [(self.generators[i].name, self.generators[i].degree) for i in keep]
        )
        return algebra, {old: new for new, old in enumerate(keep)}


def graded_algebra(generators: Sequence[Tuple[str, int]]) -> GradedAlgebra:
    """Constructs the free graded-commutative algebra on `(name, degree)` pairs."""
    return GradedAlgebra(
        tuple(Generator(name, degree, i) for i, (name, degree) in enumerate(generators))
    )


class AlgebraElement:
    """A finite rational combination of monomials in a `GradedAlgebra`.

    Instances are immutable; terms are kept in canonical monomial order with no
    zero coefficients.
    """

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: GradedAlgebra, terms: Mapping[Monomial, Rational]):
        self.algebra = algebra
        self.terms: Dict[Monomial, Fraction] = {
            m: Fraction(terms[m]) for m in sorted(terms) if terms[m] != 0
        }

    def _check_compatible(self, other: "AlgebraElement") -> None:
        if self.algebra.generators != other.algebra.generators:
            raise ValueError(
                "Cannot combine elements over different generator sets, got "
                f"{self.algebra.names} and {other.algebra.names}."
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (
            self.algebra.generators == other.algebra.generators
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if isinstance(other, int) and other == 0:
            return self
        self._check_compatible(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return AlgebraElement(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __mul__(self, other: Union["AlgebraElement", Rational]) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other: Rational) -> "AlgebraElement":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "AlgebraElement":
        utils.validate_nonnegative("exponent", exponent)
        result = self.algebra.one()
        for _ in range(exponent):
            result = multiply(result, self)
        return result

    def scale(self, scalar: Rational) -> "AlgebraElement":
        return AlgebraElement(
            self.algebra, {m: c * scalar for m, c in self.terms.items()}
        )

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> Tuple[Monomial, ...]:
        return tuple(self.terms)

    def coefficient(self, monomial: Monomial) -> Fraction:
        return self.terms.get(monomial, Fraction(0))

    def degrees(self) -> FrozenSet[int]:
        return frozenset(self.algebra.degree(m) for m in self.terms)

    def homogeneous_degrees(self) -> FrozenSet[int]:
        """Returns the set of degrees present; a singleton for homogeneous elements."""
        return self.degrees()

    def wordlength_range(
        self, counted: Optional[FrozenSet[int]] = None
    ) -> Optional[Tuple[int, int]]:
        """Returns the smallest and largest wordlength of a term, or `None` for zero."""
        lengths = [m.wordlength(counted) for m in self.terms]
        if not lengths:
            return None
        return min(lengths), max(lengths)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> Optional[int]:
        """Returns the degree of a homogeneous element, or `None` for zero."""
        degrees = self.degrees()
        if len(degrees) > 1:
            raise ValueError(f"Element `{self}` is not homogeneous.")
        return next(iter(degrees), None)

    def support(self) -> FrozenSet[int]:
        """Returns the indices of the generators that occur in some term."""
        return frozenset(i for m in self.terms for i in m.indices())

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"AlgebraElement({format_element(self)!r})"


def multiply(left: AlgebraElement, right: AlgebraElement) -> AlgebraElement:
    """Multiplies two elements using the Koszul sign rule."""
    left._check_compatible(right)
    algebra = left.algebra
    terms: Dict[Monomial, Fraction] = {}
    for ml, cl in left.terms.items():
        for mr, cr in right.terms.items():
            sign, product = algebra.multiply_monomials(ml, mr)
            if product is None:
                continue
            terms[product] = terms.get(product, 0) + sign * cl * cr
    return AlgebraElement(algebra, terms)


def truncate(
    element: AlgebraElement,
    filters: Union[WordlengthFilter, Sequence[WordlengthFilter]],
) -> AlgebraElement:
    """Drops the terms of `element` rejected by any of `filters`."""
    if isinstance(filters, WordlengthFilter):
        filters = (filters,)
    return AlgebraElement(
        element.algebra,
        {
            m: c
            for m, c in element.terms.items()
            if all(f.contains(m) for f in filters)
        },
    )


def restrict(
    element: AlgebraElement, target: GradedAlgebra, index_map: Mapping[int, int]
) -> AlgebraElement:
    """Rewrites `element` over `target`, renumbering generators with `index_map`.

    The map must preserve the relative order of the generators it moves.
    """
    terms = {}
    for m, c in element.terms.items():
        try:
            exponents = tuple((index_map[i], e) for i, e in m.exponents)
        except KeyError as exc:
            raise ValueError(
                f"Element `{element}` involves generator "
                f"`{element.algebra.names[exc.args[0]]}` outside the target algebra."
            ) from None
        terms[Monomial(exponents)] = c
    return AlgebraElement(target, terms)


# -----------------------------------------------------------------------------
# Text format.
# -----------------------------------------------------------------------------


def format_monomial(algebra: GradedAlgebra, monomial: Monomial) -> str:
    if monomial.is_unit:
        return "1"
    return "*".join(
        algebra.names[i] if e == 1 else f"{algebra.names[i]}^{e}"
        for i, e in monomial.exponents
    )


def format_element(element: AlgebraElement) -> str:
    """Formats `element` as a sum of terms in canonical monomial order."""
    if element.is_zero():
        return "0"
    pieces = []
    for m, c in element.terms.items():
        magnitude = abs(c)
        if m.is_unit:
            term = utils.format_rational(magnitude)
        elif magnitude == 1:
            term = format_monomial(element.algebra, m)
        else:
            term = f"{utils.format_rational(magnitude)}*{format_monomial(element.algebra, m)}"
        if not pieces:
            pieces.append(f"-{term}" if c < 0 else term)
        else:
            pieces.append(f" - {term}" if c < 0 else f" + {term}")
    return "".join(pieces)


def parse_element(algebra: GradedAlgebra, text: str) -> AlgebraElement:
    """Parses an expression such as `u^2 - 3/2*x*v + 1`.

    Factors of a term may appear in any order; reordering applies the Koszul sign.
    """
    tokens = _tokenize(text)
    position = 0

    def peek() -> Optional[Tuple[str, str, int]]:
        return tokens[position] if position < len(tokens) else None

    def expect_factor() -> Tuple[str, str, int]:
        token = peek()
        if token is None:
            raise ParseError(
                f"Expected a number or generator at end of `{text}`",
                column=len(text) + 1,
            )
        if token[0] == "op":
            raise ParseError(
                f"Expected a number or generator, got `{token[1]}`", column=token[2]
            )
        return token

    result = algebra.zero()
    first = True
    while True:
        sign = 1
        token = peek()
        if token is not None and token[0] == "op" and token[1] in "+-":
            sign = -1 if token[1] == "-" else 1
            position += 1
        elif not first:
            if token is None:
                break
            raise ParseError(f"Expected `+` or `-`, got `{token[1]}`", column=token[2])
        term = algebra.one().scale(sign)
        while True:
            kind, value, column = expect_factor()
            position += 1
            if kind == "number":
                numerator, _, denominator = value.partition("/")
                if denominator and int(denominator) == 0:
                    raise ParseError("Division by zero", column=column)
                term = term.scale(Fraction(int(numerator), int(denominator or 1)))
            else:
                if value not in algebra.names:
                    raise ParseError(f"Unknown generator `{value}`", column=column)
                factor = algebra.generator_element(value)
                token = peek()
                if token is not None and token[1] == "^":
                    position += 1
                    exp_token = peek()
                    if exp_token is None or exp_token[0] != "number" or "/" in exp_token[1]:
                        raise ParseError(
                            "Expected a nonnegative integer exponent",
                            column=len(text) + 1 if exp_token is None else exp_token[2],
                        )
                    position += 1
                    factor = factor ** int(exp_token[1])
                term = multiply(term, factor)
            token = peek()
            if token is not None and token[1] == "*":
                position += 1
                continue
            break
        result = result + term
        first = False
        if peek() is None:
            break
    return result


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    stripped_end = len(text.rstrip())
    while position < stripped_end:
        match = _TOKEN_PATTERN.match(text, position)
        if match is None or match.end() == position:
            column = position + 1 + (len(text[position:]) - len(text[position:].lstrip()))
            raise ParseError(
                f"Unexpected character `{text[column - 1]}` in `{text}`", column=column
            )
        kind = match.lastgroup
        assert kind is not None
        tokens.append((kind, match.group(kind), match.start(kind) + 1))
        position = match.end()
    if not tokens:
        raise ParseError("Empty expression", column=1)
    return tokens
