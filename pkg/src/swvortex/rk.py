"""Explicit Runge-Kutta time integration."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Fr

import numpy as np


@dataclass(frozen=True)
class ButcherTableau:
    a: tuple
    b: tuple
    c: tuple
    name: str = ""

    @property
    def stages(self) -> int:
        return len(self.b)

    def as_arrays(self):
        return (
            np.array([[float(x) for x in row] for row in self.a]),
            np.array([float(x) for x in self.b]),
            np.array([float(x) for x in self.c]),
        )


def _tableau(a_rows, b, name):
    s = len(b)
    a = tuple(tuple(Fr(x) for x in row) + (Fr(0),) * (s - len(row)) for row in a_rows)
    c = tuple(sum(row, Fr(0)) for row in a)
    return ButcherTableau(a, tuple(Fr(x) for x in b), c, name)


#: Butcher's six-stage, fifth-order method.
RK65 = _tableau(
    [
        [],
        [Fr(1, 4)],
        [Fr(1, 8), Fr(1, 8)],
        [0, 0, Fr(1, 2)],
        [Fr(3, 16), Fr(-3, 8), Fr(3, 8), Fr(9, 16)],
        [Fr(-3, 7), Fr(8, 7), Fr(6, 7), Fr(-12, 7), Fr(8, 7)],
    ],
    [Fr(7, 90), 0, Fr(16, 45), Fr(2, 15), Fr(16, 45), Fr(7, 90)],
    "RK(6,5)",
)


def integrate_step(f, t, y, dt, tableau: ButcherTableau = RK65):
    """One explicit RK step of ``y' = f(t, y)``."""
    a, b, c = tableau.as_arrays()
    k = []
    for i in range(tableau.stages):
        yi = y
        for j in range(i):
            if a[i, j] != 0.0:
                yi = yi + (dt * a[i, j]) * k[j]
        k.append(f(t + c[i] * dt, yi))
    out = y
    for i in range(tableau.stages):
        if b[i] != 0.0:
            out = out + (dt * b[i]) * k[i]
    return out
