"""Input checks shared by the estimator layer."""
import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import InvalidProbabilities, NotStrictlyPositive
from .probmodel import EPS_POS

CONTEXT_COLUMNS = ("pa_1", "pb_1", "p")


def check_contexts(X):
    """Validate an ``(n, 3)`` array of ``[pa_1, pb_1, p]`` rows.

    Each value must be a probability strictly inside (0, 1) so that every
    derived marginal and transition entry is strictly positive.
    """
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != len(CONTEXT_COLUMNS):
        raise InvalidProbabilities(
            f"expected {len(CONTEXT_COLUMNS)} columns {CONTEXT_COLUMNS}, got {X.shape[1]}"
        )
    if np.any(X < EPS_POS) or np.any(X > 1.0 - EPS_POS):
        raise NotStrictlyPositive("every column must lie strictly inside (0, 1)")
    return X


def split_contexts(X, conditioning):
    """Arrays ``(cond, P, target)`` for the requested conditioning order."""
    from .datagen import doubly_stochastic

    pa = np.stack([X[:, 0], 1.0 - X[:, 0]], -1)
    pb = np.stack([X[:, 1], 1.0 - X[:, 1]], -1)
    P = doubly_stochastic(X[:, 2])
    if conditioning == "b|a":
        return pa, P, pb
    return pb, P, pa
