"""scikit-learn compatible front end.

:class:`QuantumLikeRepresentation` is a stateless transformer mapping rows
``[pa_1, pb_1, p]`` to complex amplitudes; :class:`FrequencyEstimator` fits
marginals and doubly stochastic transition matrices to outcome counts.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_contexts, split_contexts
from .datagen import CountTable, estimate_from_counts
from .engine import amplitudes, born_arrays, build_state
from .exceptions import NotTrigonometric
from .probmodel import (
    EPS_NUM,
    Orientation,
    interference_coefficients,
    interference_lambda,
    is_trigonometric,
    phases_from_lambda,
)


class QuantumLikeRepresentation(TransformerMixin, BaseEstimator):
    """Amplitudes for batches of contexts.

    Parameters
    ----------
    conditioning : {"b|a", "a|b"}
        Conditioning order; column ``p`` is the parameter of that order's
        doubly stochastic transition matrix.
    on_hyperbolic : {"raise", "nan"}
        What :meth:`transform` does with rows whose interference
        coefficients exceed one in magnitude.
    tol : float
        Slack allowed above ``|lambda| = 1`` before a row counts as
        hyperbolic.
    """

    def __init__(self, conditioning="b|a", on_hyperbolic="raise", tol=EPS_NUM):
        self.conditioning = conditioning
        self.on_hyperbolic = on_hyperbolic
        self.tol = tol

    def _check_params(self):
        Orientation(self.conditioning)
        if self.on_hyperbolic not in ("raise", "nan"):
            raise ValueError(f"on_hyperbolic must be 'raise' or 'nan', got {self.on_hyperbolic!r}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def fit(self, X, y=None):
        self._check_params()
        X = check_contexts(X)
        self.n_features_in_ = X.shape[1]
        return self

    def interference(self, X):
        """Return ``(lambda, theta1, trigonometric)`` arrays for the rows of ``X``."""
        check_is_fitted(self, "n_features_in_")
        X = check_contexts(X)
        cond, P, target = split_contexts(X, Orientation(self.conditioning).value)
        lam, _ = interference_lambda(cond, P, target)
        theta1, _ = phases_from_lambda(lam[:, 0], self.tol)
        return lam, theta1, is_trigonometric(lam, self.tol)

    def transform(self, X):
        lam, theta1, trig = self.interference(X)
        if self.on_hyperbolic == "raise" and not np.all(trig):
            bad = np.flatnonzero(~trig)
            raise NotTrigonometric(f"rows {bad.tolist()} are hyperbolic")
        X = check_contexts(X)
        cond, P, _ = split_contexts(X, Orientation(self.conditioning).value)
        psi = amplitudes(cond, P, theta1)
        psi[~trig] = np.nan
        return psi

    def born_residuals(self, X):
        """``(n, 4)`` array: target residuals then conjugate-basis residuals."""
        psi = self.transform(X)
        X = check_contexts(X)
        cond, P, target = split_contexts(X, Orientation(self.conditioning).value)
        r_t, r_c = born_arrays(psi, P, cond, target)
        return np.hstack([r_t, r_c])

    def get_feature_names_out(self, input_features=None):
        return np.array(["psi_1", "psi_2"], dtype=object)


class FrequencyEstimator(BaseEstimator):
    """Maximum-likelihood estimates of the data behind a :class:`CountTable`.

    After :meth:`fit`, ``context_``, ``transition_ba_`` and
    ``transition_ab_`` hold the estimates; :meth:`state` runs the
    representation algorithm on them.
    """

    def __init__(self, tol=EPS_NUM):
        self.tol = tol

    def fit(self, X, y=None):
        table = X if isinstance(X, CountTable) else CountTable(**X)
        self.context_, self.transition_ba_, self.transition_ab_ = estimate_from_counts(table)
        self.n_samples_ = table.N
        return self

    def _transition(self, conditioning):
        check_is_fitted(self, "context_")
        if Orientation(conditioning) is Orientation.B_GIVEN_A:
            return self.transition_ba_
        return self.transition_ab_

    def interference_profile(self, conditioning="b|a"):
        P = self._transition(conditioning)
        return interference_coefficients(self.context_, P, self.tol)

    def state(self, conditioning="b|a"):
        P = self._transition(conditioning)
        return build_state(self.context_, P, tol=self.tol)
