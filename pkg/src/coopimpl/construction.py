"""The tag-strategy implementation game of a cooperative game.

Player i's strategies are labels ``i:{T}`` for every coalition T containing
i.  A label is *complete* in a profile when every member of T plays ``T``;
``rho(i)`` is i's tag if complete and the empty coalition otherwise, and
``kappa`` counts complete players.  Payoffs are ``theta * f_i + g_i`` with

    f_i = -n                      if rho(i) is empty
          n - kappa               otherwise
    g_i = v(rho(i), pi_x)/|rho(i)|  if kappa = n (pi_x = {rho(j)})
          |rho(i)|                otherwise
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import combinatorics as cb
from .combinatorics import Partition
from .errors import AmbiguityError, InputError
from .normal_form import (CompositeGame, NormalFormGame, PayoffTable, StrategyLabel,
                          _exact_dtype, tag_registry)
from .numerics import format_rational
from .solvers import NASH, SolutionSet, solve
from .worth import STRICT, PartitionFunctionGame, as_pfg, classify_superadditivity

MAX_VERIFY_PLAYERS = 5


def _tags(n: int, player: int) -> list[int]:
    return [t for t in cb.nonempty_coalitions(n) if t >> player & 1]


def tag_rho(tags: Sequence[int]) -> tuple[int, ...]:
    """rho for a profile given as one tag mask per player."""
    return tuple(t if all(tags[j] == t for j in cb.members(t)) else 0 for t in tags)


def gamma_payoff(worth, theta, profile: Sequence) -> tuple[Fraction, ...]:
    """Payoff vector of the construction at one profile.

    ``profile`` holds one :class:`StrategyLabel` or tag mask per player.
    """
    worth = as_pfg(worth)
    theta = Fraction(theta)
    n = worth.n
    tags = [x.tag if isinstance(x, StrategyLabel) else int(x) for x in profile]
    if len(tags) != n or any(not t >> i & 1 for i, t in enumerate(tags)):
        raise InputError("profile must give each player a tag containing that player")
    rho = tag_rho(tags)
    k = sum(1 for r in rho if r)
    if k == n:
        pi = Partition.of(n, set(rho))
    out = []
    for r in rho:
        f = -n if not r else n - k
        if k == n:
            g = worth(r, pi) / cb.size(r)
        else:
            g = Fraction(cb.size(r))
        out.append(theta * f + g)
    return tuple(out)


@dataclass
class GammaStructure:
    """Theta-independent pieces of the construction as dense integer tensors.

    ``f[i]`` and ``g[i]`` have shape ``(2**(n-1),) * n``; true g values are
    ``g / denom``.
    """

    n: int
    rho: list[np.ndarray]
    kappa: np.ndarray
    f: list[np.ndarray]
    g: list[np.ndarray]
    denom: int

    @classmethod
    def build(cls, worth: PartitionFunctionGame) -> "GammaStructure":
        n = worth.n
        m = 1 << (n - 1)
        tags = [_tags(n, i) for i in range(n)]
        pos = [{t: k for k, t in enumerate(ts)} for ts in tags]
        shape = (m,) * n
        grid = [np.arange(m).reshape([m if a == i else 1 for a in range(n)]) for i in range(n)]

        complete = {}
        for t in cb.nonempty_coalitions(n):
            c = np.ones(shape, dtype=bool)
            for j in cb.members(t):
                c &= grid[j] == pos[j][t]
            complete[t] = c
        rho = []
        for i in range(n):
            r = np.zeros(shape, dtype=np.int64)
            for k, t in enumerate(tags[i]):
                r += np.where((grid[i] == k) & complete[t], t, 0)
            rho.append(r)
        kappa = sum((r != 0).astype(np.int64) for r in rho)

        denom = 1
        for (s, p), v in worth.values.items():
            denom = math.lcm(denom, (v / cb.size(s)).denominator)
        f, g = [], []
        popcount = np.vectorize(cb.size, otypes=[np.int64])
        full_profiles = []
        for p in cb.enumerate_partitions(n):
            idx = tuple(pos[i][p.block_of(i)] for i in range(n))
            full_profiles.append((idx, p))
        for i in range(n):
            f.append(np.where(rho[i] == 0, -n, n - kappa).astype(np.int64))
            gi = (popcount(rho[i]) * denom).astype(object)
            for idx, p in full_profiles:
                s = p.block_of(i)
                gi[idx] = int(worth(s, p) / cb.size(s) * denom)
            bound = max(abs(int(v)) for v in gi.ravel())
            g.append(gi.astype(_exact_dtype(bound * n)))
        return cls(n, rho, kappa, f, g, denom)


class GammaGame(NormalFormGame):
    """The construction for a given worth function and theta (payoffs on demand)."""

    kind = "gamma-construction"

    def __init__(self, worth, theta):
        self.worth = as_pfg(worth)
        self.theta = Fraction(theta)
        if self.theta <= 0:
            raise InputError("theta must be positive")
        self.n = self.worth.n
        self.tags = [_tags(self.n, i) for i in range(self.n)]
        self.strategies = tuple(tuple(StrategyLabel(i, t) for t in ts)
                                for i, ts in enumerate(self.tags))

    def __eq__(self, other):
        return isinstance(other, GammaGame) and self.worth == other.worth and self.theta == other.theta

    def __hash__(self):
        return hash((self.worth, self.theta))

    def tag_profile(self, profile: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.tags[i][k] for i, k in enumerate(profile))

    def rho_map(self, profile: Sequence[int]) -> tuple[int, ...]:
        return tag_rho(self.tag_profile(profile))

    def kappa(self, profile: Sequence[int], coalition: int) -> int:
        r = self.rho_map(profile)
        return sum(1 for i in cb.members(coalition) if r[i])

    def payoff(self, profile):
        return gamma_payoff(self.worth, self.theta, self.tag_profile(profile))

    @cached_property
    def structure(self) -> GammaStructure:
        return GammaStructure.build(self.worth)

    def table(self) -> PayoffTable:
        cached = self.__dict__.get("_table")
        if cached is None:
            st = self.structure
            p, q = self.theta.numerator, self.theta.denominator
            bound = (p * st.denom * self.n
                     + q * max(abs(int(np.max(gi))) + abs(int(np.min(gi))) for gi in st.g)) * self.n
            dtype = _exact_dtype(bound)
            cols = [(p * st.denom) * fi.astype(dtype) + q * gi.astype(dtype)
                    for fi, gi in zip(st.f, st.g)]
            cached = self.__dict__["_table"] = PayoffTable(np.stack(cols, axis=-1), q * st.denom)
        return cached

    def dominant_profile(self, partition: Partition) -> tuple[int, ...]:
        """Every player plays the tag of its own block."""
        return tuple(self.tags[i].index(partition.block_of(i)) for i in range(self.n))


def _coalition_rows(arrs: Sequence[np.ndarray], coalition: int, n: int):
    """Sum over coalition members, reshaped to (joint strategies of S, rest)."""
    mem = list(cb.members(coalition))
    rest = [i for i in range(n) if i not in mem]
    total = sum(arrs[i] for i in mem)
    total = np.transpose(total, mem + rest)
    return total.reshape(int(np.prod(total.shape[:len(mem)])), -1)


def _star_row(n: int, coalition: int) -> int:
    mem = cb.members(coalition)
    m = 1 << (n - 1)
    idx = [_tags(n, i).index(coalition) for i in mem]
    return int(np.ravel_multi_index(idx, (m,) * len(mem)))


def theta_bar(worth) -> Fraction:
    """Smallest theta above which every tag joint strategy is dominant.

    Maximum of (g_S(alt) - g_S(star)) / (f_S(star) - f_S(alt)) over
    coalitions, alternatives and opposing profiles with differing f,
    clamped at 0.
    """
    worth = as_pfg(worth)
    st = GammaStructure.build(worth)
    n = worth.n
    best = Fraction(0)
    for s in cb.nonempty_coalitions(n):
        F = _coalition_rows(st.f, s, n)
        G = _coalition_rows(st.g, s, n)
        star = _star_row(n, s)
        df = F[star][None, :] - F
        dg = G - G[star][None, :]
        # lower bound on the f gap in terms of kappa counts
        k_star = np.transpose(st.kappa, list(cb.members(s)) + [i for i in range(n) if not s >> i & 1])
        k_star = k_star.reshape(F.shape)[star][None, :]
        m_alt = _coalition_rows([(r != 0).astype(np.int64) for r in st.rho], s, n)
        lower = (cb.size(s) - m_alt) * (2 * n - k_star - m_alt)
        if (df < lower).any():
            raise AssertionError(f"f gap below its lower bound for coalition {cb.format_coalition(s)}")
        mask = df != 0
        mask[star] = False
        if not mask.any():
            continue
        dfm, dgm = df[mask], dg[mask]
        for d in np.unique(dfm):
            top = int(dgm[dfm == d].max())
            best = max(best, Fraction(top, st.denom * int(d)))
    return best


def auto_theta(worth) -> Fraction:
    return theta_bar(worth) + 1


def dominance_failures(game: NormalFormGame, limit_per_coalition: int = 1) -> list[dict]:
    """Coalitions whose tag joint strategy is not strictly dominant, with witnesses."""
    table = game.table()
    registry = tag_registry(game)
    n = game.n
    out = []
    for s, joint in sorted(registry.dominant.items()):
        rest = cb.full(n) & ~s
        cg = CompositeGame(game, Partition.of(n, [s, *((1 << i) for i in cb.members(rest))]))
        b = cg.block_index(s)
        rows = np.moveaxis(cg.table.values[..., b], b, 0)
        rows = rows.reshape(rows.shape[0], -1)
        star = cg.members_to_joint(b, [joint[i] for i in cb.members(s)])
        bad = np.argwhere(np.asarray(rows[star][None, :] <= rows, dtype=bool))
        found = 0
        for alt, col in bad:
            if alt == star:
                continue
            opp = np.unravel_index(int(col), tuple(cg.joint_sizes[o] for o in range(len(cg.blocks)) if o != b))
            joint_idx = list(opp)
            joint_idx.insert(b, int(alt))
            alt_prof = cg.to_profile(joint_idx)
            joint_idx[b] = star
            star_prof = cg.to_profile(joint_idx)
            out.append({
                "coalition": list(cb.members(s)),
                "dominant": [str(game.strategies[i][star_prof[i]]) for i in cb.members(s)],
                "alternative": [str(game.strategies[i][alt_prof[i]]) for i in cb.members(s)],
                "opposing": [str(game.strategies[i][alt_prof[i]]) for i in cb.members(rest)],
                "dominant_payoff": format_rational(Fraction(int(rows[star, col]), table.scale)),
                "alternative_payoff": format_rational(Fraction(int(rows[alt, col]), table.scale)),
            })
            found += 1
            if found >= limit_per_coalition:
                break
    return out


# --- verification ---------------------------------------------------------------

PASS = "pass"
FAIL = "fail"
INDETERMINATE = "indeterminate"


@dataclass
class CoalitionCheck:
    coalition: int
    payoff: Fraction | None
    worth: Fraction
    match: bool


@dataclass
class PartitionEntry:
    partition: Partition
    solution: SolutionSet
    checks: list[CoalitionCheck]
    labels: list[tuple]

    @property
    def matched(self) -> bool:
        return bool(self.solution.profiles) and all(c.match for c in self.checks)


@dataclass
class ImplementationReport:
    concept: str
    verdict: str
    entries: list[PartitionEntry]
    witnesses: list[dict] = field(default_factory=list)
    bijection: bool | None = None
    equilibrium_count: int | None = None

    def to_json(self) -> dict:
        return {
            "concept": self.concept,
            "verdict": self.verdict,
            "bijection": self.bijection,
            "equilibrium_count": self.equilibrium_count,
            "partitions": [
                {
                    "partition": e.partition.to_json(),
                    "profiles": [[str(x) for x in lab] for lab in e.labels],
                    "payoff_unique": e.solution.payoff_unique,
                    "coalitions": [
                        {"coalition": list(cb.members(c.coalition)),
                         "payoff": None if c.payoff is None else format_rational(c.payoff),
                         "worth": format_rational(c.worth), "match": c.match}
                        for c in e.checks
                    ],
                }
                for e in self.entries
            ],
            "witnesses": self.witnesses,
        }


def verify_implementation(game: NormalFormGame, worth, concept: str = NASH) -> ImplementationReport:
    """Solve every composite game under ``concept`` and compare block payoffs with v."""
    worth = as_pfg(worth)
    if game.n != worth.n:
        raise InputError("game and worth function have different player counts")
    if game.n > MAX_VERIFY_PLAYERS:
        raise InputError(f"verification is limited to {MAX_VERIFY_PLAYERS} players")
    entries = []
    witnesses = []
    for p in cb.enumerate_partitions(game.n):
        cg = CompositeGame(game, p)
        sol = solve(cg, concept)
        checks = []
        for b, s in enumerate(p.blocks):
            pay = sol.payoffs[0][b] if sol.profiles else None
            ok = sol.payoff_unique and pay is not None and pay == worth(s, p)
            checks.append(CoalitionCheck(s, pay, worth(s, p), ok))
        entries.append(PartitionEntry(p, sol, checks, [game.labels(x) for x in sol.profiles]))
        if not sol.profiles:
            witnesses.append({"partition": p.to_json(), "reason": f"no {concept} solution certified"})
        elif not sol.payoff_unique:
            witnesses.append({"partition": p.to_json(), "reason": "solutions disagree on block payoffs",
                              "solutions": len(sol.profiles)})
        for c in checks:
            if sol.payoff_unique and c.payoff is not None and not c.match:
                witnesses.append({"partition": p.to_json(), "coalition": list(cb.members(c.coalition)),
                                  "payoff": format_rational(c.payoff), "worth": format_rational(c.worth)})

    if any(not e.solution.profiles for e in entries) or any(
            e.solution.payoff_unique and not e.matched for e in entries):
        verdict = FAIL
    elif any(not e.solution.payoff_unique for e in entries):
        verdict = INDETERMINATE
    else:
        verdict = PASS

    report = ImplementationReport(concept, verdict, entries, witnesses)
    report.equilibrium_count = sum(len(e.solution.profiles) for e in entries)
    if concept == NASH and classify_superadditivity(worth).cls == STRICT:
        report.bijection = _bijection_holds(game, entries, witnesses)
        if not report.bijection and verdict == PASS:
            report.verdict = FAIL
    if report.verdict != PASS:
        witnesses.extend({"reason": "tag strategy not strictly dominant", **w}
                         for w in dominance_failures(game))
    return report


def _bijection_holds(game: NormalFormGame, entries, witnesses) -> bool:
    from .solvers import dominance_registry

    registry = dominance_registry(game)
    n = game.n
    ok = len({x for e in entries for x in e.solution.profiles}) == cb.bell(n)
    for e in entries:
        if len(e.solution.profiles) != 1:
            ok = False
            continue
        x = e.solution.profiles[0]
        try:
            rho = registry.rho_map(x)
        except AmbiguityError as exc:
            witnesses.append({"partition": e.partition.to_json(), "reason": str(exc)})
            ok = False
            continue
        if 0 in rho or Partition.of(n, set(rho)) != e.partition:
            witnesses.append({"partition": e.partition.to_json(),
                              "reason": "equilibrium does not map back to its partition"})
            ok = False
    return ok
