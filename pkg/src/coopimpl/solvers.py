"""Solution concepts for composite games.

All comparisons happen on the integer block table of a
:class:`~coopimpl.normal_form.CompositeGame`, so they are exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import combinatorics as cb
from .combinatorics import Partition
from .normal_form import CompositeGame, DominanceRegistry, NormalFormGame
from .numerics import LinearSystem, lp_feasible

NASH = "nash"
RATIONALIZABILITY = "rationalizability"
THP = "thp"
CONCEPTS = (NASH, RATIONALIZABILITY, THP)

STRICT = "strict"
WEAK = "weak"


@dataclass(frozen=True)
class JointStrategy:
    coalition: int
    strategies: tuple[int, ...]  # one index per member, members ascending

    def as_dict(self) -> dict[int, int]:
        return dict(zip(cb.members(self.coalition), self.strategies))

    def labels(self, game: NormalFormGame) -> tuple:
        return tuple(game.strategies[i][k] for i, k in self.as_dict().items())


@dataclass
class SolutionSet:
    concept: str
    profiles: list[tuple[int, ...]]
    payoffs: list[tuple[Fraction, ...]]  # per profile, one entry per block
    payoff_unique: bool


def _solution_set(cg: CompositeGame, concept: str, joints) -> SolutionSet:
    profiles = sorted(cg.to_profile(j) for j in joints)
    payoffs = [cg.block_payoffs(p) for p in profiles]
    return SolutionSet(concept, profiles, payoffs, len(set(payoffs)) <= 1)


def _block_rows(values: np.ndarray, b: int) -> np.ndarray:
    """Block ``b``'s payoffs as (own joint strategies, opposing profiles)."""
    u = np.moveaxis(values[..., b], b, 0)
    return u.reshape(u.shape[0], -1)


def pure_nash(cg: CompositeGame) -> SolutionSet:
    """Every profile where no block has a strictly better joint deviation."""
    v = cg.table.values
    ok = np.ones(cg.joint_sizes, dtype=bool)
    for b in range(len(cg.blocks)):
        ub = v[..., b]
        ok &= np.asarray(ub == ub.max(axis=b, keepdims=True), dtype=bool)
    return _solution_set(cg, NASH, (tuple(int(k) for k in j) for j in np.argwhere(ok)))


def _dominant_rows(rows: np.ndarray, mode: str) -> list[int]:
    best = rows.max(axis=0)
    winners = np.asarray(rows == best, dtype=bool)
    weak = [int(r) for r in np.flatnonzero(winners.all(axis=1))]
    if mode == WEAK:
        return weak
    unique = bool((winners.sum(axis=0) == 1).all())
    return weak if unique else []


def find_dominant(cg: CompositeGame, coalition: int, mode: str = STRICT) -> JointStrategy | None:
    """The coalition's (strictly or weakly) dominant joint strategy, if any.

    In weak mode, payoff-identical duplicates are all weakly dominant; the
    first in index order is returned.
    """
    b = cg.block_index(coalition)
    found = _dominant_rows(_block_rows(cg.table.values, b), mode)
    if not found:
        return None
    return JointStrategy(coalition, cg.joint_to_members(b, found[0]))


def dominance_registry(game: NormalFormGame, mode: str = STRICT) -> DominanceRegistry:
    """Dominant joint strategies of every coalition that has one.

    Dominance of S is tested against all of X_{N\\S}, which is the same
    opposing set in every partition containing S.
    """
    dominant = {}
    for s in cb.nonempty_coalitions(game.n):
        rest = cb.full(game.n) & ~s
        cg = CompositeGame(game, Partition.of(game.n, [s, *((1 << i) for i in cb.members(rest))]))
        js = find_dominant(cg, s, mode)
        if js is not None:
            dominant[s] = js.as_dict()
    return DominanceRegistry(game.n, dominant)


# --- iterated elimination ----------------------------------------------------


def _restricted(values: np.ndarray, keep: list[list[int]]) -> np.ndarray:
    return values[np.ix_(*keep, range(values.shape[-1]))]


def _pure_dominated(rows: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Mask of rows strictly dominated by some other pure row."""
    m, c = rows.shape
    if c == 1:
        col = rows[:, 0]
        return np.asarray(col < col.max(), dtype=bool)
    out = np.zeros(m, dtype=bool)
    for lo in range(0, m, chunk):
        part = rows[lo:lo + chunk]
        beats = np.asarray(rows[None, :, :] > part[:, None, :], dtype=bool).all(axis=2)
        out[lo:lo + chunk] = beats.any(axis=1)
    return out


def mixed_dominated(rows: np.ndarray, r: int) -> bool:
    """Is row ``r`` strictly dominated by a mixture of the other rows?

    Feasibility of sum_k p_k (u_k - u_r) >= 1 per column with p >= 0; any
    solution rescales to a dominating probability vector.
    """
    others = [k for k in range(rows.shape[0]) if k != r]
    if not others:
        return False
    system = LinearSystem(len(others))
    for col in range(rows.shape[1]):
        system.add([int(rows[k, col]) - int(rows[r, col]) for k in others], 1)
    for j in range(len(others)):
        system.add([1 if i == j else 0 for i in range(len(others))], 0)
    return lp_feasible(system).feasible


@dataclass
class IESDSResult:
    survivors: list[list[int]]  # surviving joint strategies per block
    order_independent: bool
    eliminated_by_mixture: list[tuple[int, int]] = field(default_factory=list)

    @property
    def solved(self) -> bool:
        return all(len(s) == 1 for s in self.survivors)


def _eliminate(values: np.ndarray, block_order: list[int], simultaneous: bool):
    keep = [list(range(m)) for m in values.shape[:-1]]
    by_mixture = []
    while True:
        changed = False
        # pure pass to fixpoint
        while True:
            pure_changed = False
            sub = _restricted(values, keep)
            drops = {}
            for b in block_order:
                mask = _pure_dominated(_block_rows(sub, b))
                if mask.any():
                    drops[b] = mask
                    if not simultaneous:
                        break
            for b, mask in drops.items():
                keep[b] = [s for s, dead in zip(keep[b], mask) if not dead]
                pure_changed = True
            if not pure_changed:
                break
            changed = True
        # mixed pass: one elimination, then back to the pure pass
        sub = _restricted(values, keep)
        for b in block_order:
            rows = _block_rows(sub, b)
            hit = next((r for r in range(rows.shape[0]) if rows.shape[0] > 1
                        and mixed_dominated(rows, r)), None)
            if hit is not None:
                by_mixture.append((b, keep[b][hit]))
                del keep[b][hit]
                changed = True
                break
        if not changed:
            return keep, by_mixture


def iesds(cg: CompositeGame) -> IESDSResult:
    """Iterated elimination of strictly dominated joint strategies.

    Runs two elimination orders (all blocks at once, ascending; one block
    at a time, descending) and records whether they agree.
    """
    values = cg.table.values
    k = len(cg.blocks)
    first, mixed = _eliminate(values, list(range(k)), simultaneous=True)
    second, _ = _eliminate(values, list(reversed(range(k))), simultaneous=False)
    same = [sorted(a) for a in first] == [sorted(b) for b in second]
    return IESDSResult(first, same, mixed)


def rationalizable(cg: CompositeGame) -> SolutionSet:
    res = iesds(cg)
    return _solution_set(cg, RATIONALIZABILITY, itertools.product(*res.survivors))


# --- trembling-hand certificate ---------------------------------------------

EPSILONS = (Fraction(1, 100), Fraction(1, 1000))


@dataclass
class THPCertificate:
    certified: bool
    profiles: list[tuple[int, ...]]
    epsilon_check: list[tuple[Fraction, bool]] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)


def _tremble_weights(size: int, star: int, eps: Fraction) -> list[int]:
    # (1 - eps) on star plus eps spread uniformly, scaled to integers
    d = eps.denominator
    num = eps.numerator
    return [(d - num) * size * (k == star) + num for k in range(size)]


def thp_certify(cg: CompositeGame) -> THPCertificate:
    """Certify that the weakly dominant joint strategies form the unique THP profile.

    A one-block game is certified with all of its optimal joint strategies.
    Otherwise each block needs a weakly dominant joint strategy that is strictly
    better than every alternative against at least one opposing profile.
    The epsilon grid re-checks that it is the unique best reply when every
    other block trembles uniformly with weight eps.
    """
    values = cg.table.values
    k = len(cg.blocks)
    if k == 1:
        # no opponents to tremble: the perfect profiles are the optimal joint strategies
        col = values[..., 0]
        best = np.flatnonzero(np.asarray(col == col.max(), dtype=bool))
        return THPCertificate(True, sorted(cg.to_profile([int(j)]) for j in best),
                              [(eps, True) for eps in EPSILONS], [])
    stars = []
    failures = []
    for b in range(k):
        rows = _block_rows(values, b)
        weak = _dominant_rows(rows, WEAK)
        if not weak:
            failures.append({"block": b, "reason": "no weakly dominant joint strategy"})
            stars.append(None)
            continue
        star = weak[0]
        stars.append(star)
        strictly_somewhere = np.asarray(rows[star][None, :] > rows, dtype=bool).any(axis=1)
        for alt in np.flatnonzero(~strictly_somewhere):
            if alt != star:
                failures.append({"block": b, "reason": "never strictly better than alternative",
                                 "alternative": int(alt)})
    if failures:
        return THPCertificate(False, [], [], failures)

    checks = []
    for eps in EPSILONS:
        ok = True
        for b in range(k):
            exp = np.moveaxis(values[..., b], b, 0).astype(object)
            for other in reversed([o for o in range(k) if o != b]):
                w = np.array(_tremble_weights(cg.joint_sizes[other], stars[other], eps), dtype=object)
                axis = 1 + other - (other > b)
                exp = np.tensordot(exp, w, axes=([axis], [0]))
            best = exp[stars[b]]
            if any(exp[r] >= best for r in range(len(exp)) if r != stars[b]):
                ok = False
        checks.append((eps, ok))
    certified = all(ok for _, ok in checks)
    return THPCertificate(certified, [cg.to_profile(stars)], checks, [])


def solve(cg: CompositeGame, concept: str) -> SolutionSet:
    if concept == NASH:
        return pure_nash(cg)
    if concept == RATIONALIZABILITY:
        return rationalizable(cg)
    if concept == THP:
        cert = thp_certify(cg)
        return _solution_set(cg, THP, (cg.to_joint(p) for p in cert.profiles) if cert.certified else ())
    raise ValueError(f"unknown concept {concept!r}")
