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
"""Default caps for command-line runs.

Library functions take their caps as arguments; only the command-line front end
reads defaults from here.

Copyright (c) The kscat authors
"""

import dataclasses
import os
from typing import Mapping, Optional

from kscat import utils

ENV_MAX_DEGREE = "KSCAT_MAX_DEGREE"
ENV_MAX_WORDLENGTH = "KSCAT_MAX_WORDLENGTH"
ENV_Q_CAP = "KSCAT_Q_CAP"


@dataclasses.dataclass(frozen=True)
class Caps:
    """Truncation caps for a run.

    Attributes:
        max_degree: The degree cap `N`.
        max_wordlength: The wordlength cap `M`.
        q_cap: The largest fiber wordlength bound, or `None` for the default.
        seed: The seed of random corpus generation.
    """

    max_degree: int = 12
    max_wordlength: int = 8
    q_cap: Optional[int] = None
    seed: int = 0

    def __post_init__(self) -> None:
        utils.validate_nonnegative("max_degree", self.max_degree)
        utils.validate_nonnegative("max_wordlength", self.max_wordlength)
        if self.q_cap is not None:
            utils.validate_nonnegative("q_cap", self.q_cap)
        utils.validate_nonnegative("seed", self.seed)

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Caps":
        """Returns caps with defaults overridden by `KSCAT_*` environment variables."""
        environ = os.environ if environ is None else environ
        default = cls()
        return cls(
            max_degree=_read_int(environ, ENV_MAX_DEGREE, default.max_degree),
            max_wordlength=_read_int(environ, ENV_MAX_WORDLENGTH, default.max_wordlength),
            q_cap=_read_int(environ, ENV_Q_CAP, default.q_cap),
            seed=default.seed,
        )

    def replace(self, **overrides: Optional[int]) -> "Caps":
        """Returns a copy with the non-`None` entries of `overrides` applied."""
        return dataclasses.replace(
            self, **{k: v for k, v in overrides.items() if v is not None}
        )

    def to_dict(self) -> dict:
        return {
            "N": self.max_degree,
            "M": self.max_wordlength,
            "q_cap": self.q_cap,
            "seed": self.seed,
        }


def _read_int(environ: Mapping[str, str], key: str, default: Optional[int]) -> Optional[int]:
    value = environ.get(key)
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(
            f"`{key}` must be an integer, but got {value!r}."
        ) from None
