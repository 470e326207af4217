"""The linear matroid on the columns of a rational matrix.

Ground set elements are column names; independence is linear
independence of the corresponding columns. Ranks are memoized by
sorted name tuple because the decomposition search and the module tests
query the same subsets over and over.
"""

from __future__ import annotations

import threading
from collections.abc import Iterable

from . import ratmat
from .ratmat import RationalMatrix


class LinearMatroid:
    """Rank oracle, connectivity function, and separator tests."""

    def __init__(self, matrix: RationalMatrix):
        self.matrix = matrix
        self.ground_set = frozenset(matrix.col_names)
        self._cache: dict[tuple, int] = {}
        self._lock = threading.Lock()

    def rank_of(self, subset: Iterable[str]) -> int:
        """Rank of the column submatrix S_A."""
        names = frozenset(subset)
        if not names <= self.ground_set:
            raise KeyError(f"not ground set elements: {sorted(names - self.ground_set)}")
        key = tuple(sorted(names))
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        value = ratmat.rank(self.matrix.restrict_columns(names))
        with self._lock:
            self._cache[key] = value
        return value

    def connectivity(self, subset: Iterable[str]) -> int:
        """rho(A) = rank(A) + rank(R minus A) - rank(R) + 1."""
        names = frozenset(subset)
        return (
            self.rank_of(names)
            + self.rank_of(self.ground_set - names)
            - self.rank_of(self.ground_set)
            + 1
        )

    def is_k_separator(self, subset: Iterable[str], k: int) -> bool:
        """Whether rank(A) + rank(R minus A) - rank(R) < k, i.e. rho(A) <= k."""
        if k < 1:
            raise ValueError("separator order must be >= 1")
        return self.connectivity(subset) <= k
