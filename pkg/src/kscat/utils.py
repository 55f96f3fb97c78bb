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
"""Defines several utility functions.

Copyright (c) The kscat authors
"""

import json
from fractions import Fraction
from typing import Any, Tuple, Union


def validate_nonnegative(name: str, value: int) -> int:
    """Returns `value` after checking that it is a nonnegative integer."""
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ValueError(f"`{name}` must be a nonnegative integer, but got {value!r}.")
    return value


def validate_window(window: Tuple[int, int]) -> Tuple[int, int]:
    """Returns a degree window `(lower, upper)` after checking it is well-ordered."""
    if len(window) != 2:
        raise ValueError(f"A window must have two entries, but got {window}.")
    lower, upper = window
    if not all(isinstance(w, int) and not isinstance(w, bool) for w in window):
        raise ValueError(f"Window bounds must be integers, but got {window}.")
    if lower > upper:
        raise ValueError(f"Window lower bound exceeds upper bound, got {window}.")
    return lower, upper


def format_rational(value: Union[int, Fraction]) -> str:
    """Formats a rational as `p` or `p/q`."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def dumps(payload: Any) -> str:
    """Serializes a report payload with sorted keys, so output is reproducible."""
    return json.dumps(payload, sort_keys=True, indent=2)
