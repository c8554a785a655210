"""Exact tools for implementing cooperative games as normal-form games."""

from .combinatorics import Partition, bell, enumerate_partitions
from .construction import GammaGame, gamma_payoff, theta_bar, verify_implementation
from .oligopoly import Market, bertrand_worth, cournot_worth, maximin_worth
from .solutions import check_convexity, core_feasible, shapley
from .worth import CharacteristicFunctionGame, PartitionFunctionGame

__all__ = [
    "CharacteristicFunctionGame", "GammaGame", "Market", "Partition", "PartitionFunctionGame",
    "bell", "bertrand_worth", "check_convexity", "core_feasible", "cournot_worth",
    "enumerate_partitions", "gamma_payoff", "maximin_worth", "shapley", "theta_bar",
    "verify_implementation",
]
