"""scikit-learn style front end: fit a maximal dissociated basis, transform into coefficients."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .basis import decompose, greedy_maximal
from .group import ElementSet, combine
from .validation import check_elements

__all__ = ["DissociatedBasis"]


class DissociatedBasis(TransformerMixin, BaseEstimator):
    """Greedy maximal dissociated subset of the rows of ``X``.

    Every row of the training data is a {-1, 0, 1} combination of the basis,
    so :meth:`transform` maps rows to coefficient vectors and
    :meth:`inverse_transform` maps them back.

    Parameters
    ----------
    group : None, str or GroupSpec
        Ambient group; ``None`` means Z^n_features.  Strings use the CLI
        descriptor syntax (``"free:3"``, ``"mod:4^2"``).
    order : {"input", "lex", "reverse", "random"} or sequence of int
        Scan order of the greedy pass.
    random_state : int
        Seed used when ``order="random"``.

    Attributes
    ----------
    basis_ : ndarray of shape (n_basis, n_features)
    basis_indices_ : ndarray of shape (n_basis,)
        Rows of the training ``X`` that form the basis.
    group_ : GroupSpec
    n_features_in_ : int
    """

    def __init__(self, group=None, order="input", random_state=0):
        self.group = group
        self.order = order
        self.random_state = random_state

    def fit(self, X, y=None):
        elements, rows = check_elements(X, self.group)
        order = self.order
        if not isinstance(order, str):
            # explicit order refers to rows of X; map onto the deduplicated set
            pos = {int(r): i for i, r in enumerate(rows)}
            order = [pos[int(i)] for i in order if int(i) in pos]
        basis = greedy_maximal(elements, order=order, seed=self.random_state)
        self.group_ = elements.group
        self.n_features_in_ = elements.group.dim
        self.basis_set_ = basis
        self.basis_ = basis.array.copy()
        self.basis_indices_ = np.array([rows[elements.index(b)] for b in basis], dtype=np.intp)
        return self

    def transform(self, X):
        check_is_fitted(self, "basis_set_")
        X = self._check_rows(X)
        out = np.zeros((len(X), len(self.basis_set_)), dtype=np.int8)
        for i, row in enumerate(X.tolist()):
            out[i] = decompose(tuple(row), self.basis_set_)
        return out

    def inverse_transform(self, C):
        check_is_fitted(self, "basis_set_")
        C = np.asarray(C)
        if C.ndim != 2 or C.shape[1] != len(self.basis_set_):
            raise ValueError(f"expected coefficients of shape (n, {len(self.basis_set_)})")
        return np.array([combine(self.basis_set_, c) for c in C.tolist()],
                        dtype=np.int64).reshape(len(C), self.n_features_in_)

    def _check_rows(self, X) -> np.ndarray:
        X = np.asarray(X)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[-1]} features, expected {self.n_features_in_}")
        if X.dtype.kind == "f" and not np.all(X == np.round(X)):
            raise ValueError("elements must have integer coordinates")
        return X.astype(np.int64)

    @property
    def n_basis_(self) -> int:
        check_is_fitted(self, "basis_set_")
        return len(self.basis_set_)
