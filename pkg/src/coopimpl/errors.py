"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-range input (bad file, incomplete game, ...)."""


class AmbiguityError(ValueError):
    """A player's strategy completes two different coalitions' dominant strategies."""

    def __init__(self, coalitions, player):
        self.coalitions = tuple(coalitions)
        self.player = player
        super().__init__(
            f"rho is not well-defined for player {player}: "
            f"coalitions {[hex(c) for c in self.coalitions]} all match"
        )


class OracleError(RuntimeError):
    """The numerical Cournot oracle failed to converge."""
