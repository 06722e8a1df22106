"""Exception taxonomy shared by all modules.

The CLI maps these onto process exit codes: InputError -> 1,
NumericalError -> 2, PostSelectionError -> 3.
"""


class InputError(ValueError):
    """Malformed or invalid input: schema violations, bad flags, bad shapes."""


class NumericalError(RuntimeError):
    """Numerical failure: non-SPD matrix, singular system, no crossover."""


class PostSelectionError(RuntimeError):
    """Ancilla post-selection probability too small to condition on."""
