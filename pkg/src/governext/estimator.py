"""scikit-learn style wrapper around the governing-matrix engine.

``fit`` takes the place sets that will be queried and builds one virtual-unit
basis that avoids all of them.  ``transform`` maps a list of places to their
Frobenius vectors; ``predict`` maps a list of sets to existence booleans.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .classgroup import class_group, unit_group
from .fields import Place, make_field, parse_places
from .governing import SymbolNormalization, frobenius_vector, governing_matrix
from .relations import count_full_support_relations, relation_space
from .virtual_units import exact_sequence_report, virtual_unit_basis


def _as_set(F, item):
    if isinstance(item, (str, Place)):
        item = [item]
    return tuple(parse_places(F, item))


class GoverningExtension(BaseEstimator):
    """Decide and count Z/pZ-extensions of K ramified exactly at given sets.

    Parameters
    ----------
    field : str or int
        ``"Q"``, ``"d=-23"`` or a squarefree integer.
    p : int
        The prime.
    generator_index : int
        Which residue-field generator fixes the symbol normalization.
    """

    def __init__(self, field="Q", p=2, generator_index=0):
        self.field = field
        self.p = p
        self.generator_index = generator_index

    def fit(self, X, y=None):
        F = make_field(self.field)
        sets = [_as_set(F, item) for item in X]
        avoid = sorted({v for S in sets for v in S}, key=lambda v: v.sort_key())
        self.field_ = F
        self.basis_ = virtual_unit_basis(F, self.p, avoid)
        self.dimensions_ = exact_sequence_report(self.basis_)
        self.class_group_ = class_group(F)
        self.units_ = unit_group(F)
        self.normalization_ = SymbolNormalization(self.generator_index)
        self.n_features_out_ = self.basis_.d
        return self

    def _sets(self, X):
        check_is_fitted(self, "basis_")
        return [_as_set(self.field_, item) for item in X]

    def transform(self, X):
        """Frobenius vectors of the places in X, shape (len(X), d)."""
        check_is_fitted(self, "basis_")
        places = parse_places(self.field_, list(X))
        rows = [frobenius_vector(v, self.basis_, self.normalization_).raw for v in places]
        return np.array(rows, dtype=np.int64).reshape(len(rows), self.basis_.d)

    def governing_matrix(self, S):
        (S,) = self._sets([S])
        G = governing_matrix(S, self.basis_, self.normalization_)
        return np.array(G.rows, dtype=np.int64).reshape(G.d, len(S))

    def count(self, X):
        """Number of full-support relations for each set in X."""
        out = [
            count_full_support_relations(governing_matrix(S, self.basis_, self.normalization_))
            for S in self._sets(X)
        ]
        return np.array(out, dtype=np.int64)

    def predict(self, X):
        return self.count(X) > 0

    def relation_spaces(self, X):
        return [relation_space(governing_matrix(S, self.basis_, self.normalization_)) for S in self._sets(X)]
