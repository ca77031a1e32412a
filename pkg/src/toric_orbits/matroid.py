"""Linear matroids over Q given by weight vectors.

Elements are indexed ``0..r-1``.  Only the line through each vector matters,
so the matroid is built from the lines-only view of a weight system.  Index
sets come back as sorted tuples and all enumerations are lexicographically
sorted, so outputs are stable enough for golden files.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .exact_linalg import IntMatrix, determinant, rational_rank
from .weights import WeightSystem, primitive_line


@dataclass(frozen=True)
class Flat:
    indices: tuple
    flat_rank: int


def _popcount(x: int) -> int:
    return x.bit_count()


def _mask(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _unmask(m: int) -> tuple:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


class LinearMatroid:
    """Independence structure of a list of nonzero rational vectors."""

    def __init__(self, vectors: Sequence[Sequence[int]], dim: int | None = None):
        vecs = [primitive_line(v) for v in vectors]
        if dim is None:
            dim = len(vecs[0]) if vecs else 0
        if any(len(v) != dim for v in vecs):
            raise ValueError("vectors of unequal length")
        self.dim = dim
        self.vectors = tuple(vecs)
        self.size = len(vecs)
        self.ground = tuple(range(self.size))
        self._rank_cache: dict = {0: 0}
        self.rank = self._subset_rank(_mask(self.ground))
        self._bases = self._find_bases()
        self._independent = self._downward_closure() if self.size <= 16 else None

    @classmethod
    def from_weights(cls, ws: WeightSystem) -> "LinearMatroid":
        return cls(ws.weights, ws.lattice_rank)

    def _columns(self, m: int) -> IntMatrix:
        idx = _unmask(m)
        return IntMatrix(self.dim, len(idx),
                         tuple(self.vectors[j][i] for i in range(self.dim) for j in idx))

    def _subset_rank(self, m: int) -> int:
        got = self._rank_cache.get(m)
        if got is None:
            got = rational_rank(self._columns(m))
            self._rank_cache[m] = got
        return got

    def _find_bases(self) -> list:
        k = self.rank
        out = []
        square = k == self.dim
        for combo in combinations(self.ground, k):
            m = _mask(combo)
            if square:
                ok = determinant(self._columns(m)) != 0
            else:
                ok = self._subset_rank(m) == k
            if ok:
                out.append(m)
        return out

    def _downward_closure(self) -> set:
        seen = set(self._bases)
        frontier = list(self._bases)
        while frontier:
            nxt = []
            for m in frontier:
                x = m
                while x:
                    low = x & -x
                    sub = m ^ low
                    if sub not in seen:
                        seen.add(sub)
                        nxt.append(sub)
                    x ^= low
            frontier = nxt
        return seen

    def _check(self, S: Iterable[int]) -> int:
        S = tuple(S)
        for i in S:
            if not isinstance(i, int) or not 0 <= i < self.size:
                raise IndexError(f"element {i!r} not in ground set of size {self.size}")
        return _mask(S)

    def _rank_mask(self, m: int) -> int:
        got = self._rank_cache.get(m)
        if got is not None:
            return got
        if self._independent is None:
            return self._subset_rank(m)
        if m in self._independent:
            got = _popcount(m)
        else:
            # a dependent set has a maximal independent subset missing some element
            got = 0
            x = m
            while x:
                low = x & -x
                got = max(got, self._rank_mask(m ^ low))
                x ^= low
        self._rank_cache[m] = got
        return got

    def matroid_rank(self, S: Iterable[int]) -> int:
        return self._rank_mask(self._check(S))

    def is_independent(self, S: Iterable[int]) -> bool:
        m = self._check(S)
        return self._rank_mask(m) == _popcount(m)

    def closure(self, S: Iterable[int]) -> tuple:
        """All elements whose vectors lie in the span of `S`."""
        m = self._check(S)
        rk = self._rank_mask(m)
        out = m
        for e in self.ground:
            bit = 1 << e
            if not m & bit and self._rank_mask(m | bit) == rk:
                out |= bit
        return _unmask(out)

    def is_flat(self, S: Iterable[int]) -> bool:
        S = tuple(sorted(set(S)))
        return self.closure(S) == S

    def bases(self) -> list:
        return [_unmask(b) for b in self._bases]

    def circuits(self) -> list:
        """Minimal dependent subsets, each sorted, in lexicographic order."""
        out = []
        for size in range(1, min(self.rank + 1, self.size) + 1):
            for combo in combinations(self.ground, size):
                m = _mask(combo)
                if self._rank_mask(m) == size:
                    continue
                if all(self._rank_mask(m & ~(1 << e)) == size - 1 for e in combo):
                    out.append(combo)
        return sorted(out)

    def coloops(self) -> tuple:
        """Elements lying in every basis."""
        if not self._bases:
            return ()
        common = self._bases[0]
        for b in self._bases[1:]:
            common &= b
        return _unmask(common)

    def connected_components(self) -> list:
        """Finest direct-sum decomposition: elements linked by shared circuits."""
        parent = list(self.ground)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for c in self.circuits():
            root = find(c[0])
            for e in c[1:]:
                other = find(e)
                if other != root:
                    parent[max(root, other)] = min(root, other)
                    root = min(root, other)
        groups: dict = {}
        for e in self.ground:
            groups.setdefault(find(e), []).append(e)
        return sorted(tuple(g) for g in groups.values())

    def independent_sets(self) -> list:
        out = []
        for size in range(self.rank + 1):
            for combo in combinations(self.ground, size):
                if self._rank_mask(_mask(combo)) == size:
                    out.append(combo)
        return out

    def flats(self) -> list:
        """All flats, sorted by rank then lexicographically."""
        seen = {}
        for ind in self.independent_sets():
            cl = self.closure(ind)
            if cl not in seen:
                seen[cl] = len(ind)
        return [Flat(ix, rk) for ix, rk in sorted(seen.items(), key=lambda kv: (kv[1], kv[0]))]

    def hyperplanes(self) -> list:
        return [f for f in self.flats() if f.flat_rank == self.rank - 1]

    def restriction(self, S: Iterable[int]) -> "LinearMatroid":
        S = sorted(set(S))
        self._check(S)
        return LinearMatroid([self.vectors[i] for i in S], self.dim)

    def __repr__(self):
        return f"LinearMatroid(rank={self.rank}, vectors={list(self.vectors)})"


def direct_sum(a: WeightSystem, b: WeightSystem) -> WeightSystem:
    """Weights of ``a`` and ``b`` placed in complementary coordinate blocks."""
    ka, kb = a.lattice_rank, b.lattice_rank
    weights = [tuple(w) + (0,) * kb for w in a.weights]
    weights += [(0,) * ka + tuple(w) for w in b.weights]
    return WeightSystem.create(ka + kb, weights, a.trivial_dim + b.trivial_dim)
