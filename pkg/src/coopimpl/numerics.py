"""Exact rationals and exact linear feasibility.

``lp_feasible`` runs a Phase-I simplex over :class:`fractions.Fraction`
with Bland's rule.  Variables are free (unrestricted in sign); sign
constraints are ordinary ``>=`` rows.  Infeasible systems come back with a
Farkas certificate read off the optimal Phase-I dual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Sequence

from .errors import InputError

Rational = Fraction

GE = ">="
EQ = "="


def parse_rational(value) -> Fraction:
    """Exact conversion of ``"p/q"``, ``"k"``, ``"d.dd"`` strings or ints."""
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, _RationalABC):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational: {value!r}") from None
    raise InputError(f"refusing inexact value {value!r}; pass a string such as '1/3'")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def lcm_of_denominators(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


@dataclass(frozen=True)
class Row:
    coeffs: tuple[Fraction, ...]
    bound: Fraction
    sense: str = GE

    def __post_init__(self):
        if self.sense not in (GE, EQ):
            raise InputError(f"unknown row sense {self.sense!r}")

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = sum((a * xi for a, xi in zip(self.coeffs, x)), Fraction(0))
        return lhs == self.bound if self.sense == EQ else lhs >= self.bound


@dataclass
class LinearSystem:
    n_vars: int
    rows: list[Row] = field(default_factory=list)

    def add(self, coeffs, bound, sense: str = GE) -> None:
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != self.n_vars:
            raise InputError(f"row has {len(coeffs)} coefficients, expected {self.n_vars}")
        self.rows.append(Row(coeffs, Fraction(bound), sense))

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        return len(x) == self.n_vars and all(r.holds(x) for r in self.rows)

    def certifies_infeasible(self, y: Sequence[Fraction]) -> bool:
        """Check a Farkas certificate: y >= 0 on >= rows, yA = 0, yb > 0."""
        if len(y) != len(self.rows):
            return False
        if any(yi < 0 for yi, r in zip(y, self.rows) if r.sense == GE):
            return False
        for j in range(self.n_vars):
            if sum((yi * r.coeffs[j] for yi, r in zip(y, self.rows)), Fraction(0)) != 0:
                return False
        return sum((yi * r.bound for yi, r in zip(y, self.rows)), Fraction(0)) > 0


@dataclass
class Feasibility:
    feasible: bool
    witness: tuple[Fraction, ...] | None = None
    certificate: tuple[Fraction, ...] | None = None


def lp_feasible(system: LinearSystem) -> Feasibility:
    rows = system.rows
    nv = system.n_vars
    if not rows:
        return Feasibility(True, witness=tuple(Fraction(0) for _ in range(nv)))

    m = len(rows)
    ge_rows = [i for i, r in enumerate(rows) if r.sense == GE]
    # columns: x+ (nv) | x- (nv) | surplus per >= row | artificial per row
    n_struct = 2 * nv + len(ge_rows)
    art0 = n_struct
    width = n_struct + m
    signs = []
    tab: list[list[Fraction]] = []
    for i, r in enumerate(rows):
        sign = -1 if r.bound < 0 else 1
        signs.append(sign)
        line = [Fraction(0)] * (width + 1)
        for j, a in enumerate(r.coeffs):
            line[j] = sign * a
            line[nv + j] = -sign * a
        if r.sense == GE:
            line[2 * nv + ge_rows.index(i)] = Fraction(-sign)
        line[art0 + i] = Fraction(1)
        line[width] = sign * r.bound
        tab.append(line)
    basis = [art0 + i for i in range(m)]
    cost = [Fraction(0)] * n_struct + [Fraction(1)] * m

    def reduced_costs():
        red = list(cost)
        for i, bv in enumerate(basis):
            cb = cost[bv]
            if cb:
                line = tab[i]
                for j in range(width):
                    if line[j]:
                        red[j] -= cb * line[j]
        return red

    while True:
        red = reduced_costs()
        entering = next((j for j in range(width) if red[j] < 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            piv = tab[i][entering]
            if piv > 0:
                key = (tab[i][width] / piv, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # phase-I objective is bounded below by 0
            raise AssertionError("unbounded phase-I direction")
        r = best[1]
        piv = tab[r][entering]
        tab[r] = [v / piv for v in tab[r]]
        for i in range(m):
            if i != r and tab[i][entering]:
                f = tab[i][entering]
                src = tab[r]
                tab[i] = [a - f * b for a, b in zip(tab[i], src)]
        basis[r] = entering

    objective = sum((cost[bv] * tab[i][width] for i, bv in enumerate(basis)), Fraction(0))
    if objective == 0:
        values = [Fraction(0)] * width
        for i, bv in enumerate(basis):
            values[bv] = tab[i][width]
        x = tuple(values[j] - values[nv + j] for j in range(nv))
        if not system.satisfied_by(x):
            raise AssertionError("simplex witness failed re-substitution")
        return Feasibility(True, witness=x)

    # y = c_B B^-1; B^-1 sits in the artificial columns
    y = [sum((cost[bv] * tab[i][art0 + k] for i, bv in enumerate(basis)), Fraction(0))
         for k in range(m)]
    cert = tuple(signs[k] * y[k] for k in range(m))
    if not system.certifies_infeasible(cert):
        raise AssertionError("Farkas certificate failed verification")
    return Feasibility(False, certificate=cert)
