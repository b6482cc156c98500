from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np


def format_number(value: float) -> str:
    """Shortest decimal text that parses back to the same float; integral values drop ".0" """
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


class Solver(str, Enum):
    """Provenance tag of a reliability curve"""

    CTMC = "ctmc"
    EXPM = "expm"
    ANALYTIC = "analytic"
    MONTECARLO = "montecarlo"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ReliabilityCurve:
    """R(t) sampled on a time grid in hours"""

    label: str
    t_grid: Tuple[float, ...]
    values: Tuple[float, ...]
    solver: Solver

    def __post_init__(self):
        if len(self.t_grid) != len(self.values):
            raise ValueError(
                f"{self.label}: {len(self.t_grid)} grid points but {len(self.values)} values"
            )

    def is_nonincreasing(self, slack: float = 1e-10) -> bool:
        return bool(np.all(np.diff(np.asarray(self.values)) <= slack))

