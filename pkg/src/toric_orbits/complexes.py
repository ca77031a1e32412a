"""Pure simplicial complexes stored by their facets.

Faces are generated on demand.  Ghost vertices (vertices belonging to no
simplex) are carried explicitly so that joins with ghost complexes are
representable.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from typing import Hashable, Iterable, Sequence

from .exact_linalg import IntMatrix, smith_normal_form


def _key(x):
    return (type(x).__name__, x)


def _sorted(xs) -> tuple:
    return tuple(sorted(xs, key=_key))


@dataclass(frozen=True)
class SimplicialComplex:
    """Complex given by maximal simplices.

    ``facets`` is a sorted tuple of sorted vertex tuples.  An empty facet
    tuple is the void complex; ``((),)`` is the complex ``{emptyset}``.
    """

    vertices: tuple
    facets: tuple
    ghost_vertices: tuple = ()

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[Hashable]], ghosts: Iterable[Hashable] = ()) -> "SimplicialComplex":
        fs = {frozenset(f) for f in facets}
        maximal = [f for f in fs if not any(f < g for g in fs)]
        facet_t = tuple(sorted((_sorted(f) for f in maximal), key=lambda t: (len(t), [_key(x) for x in t])))
        used = set().union(*maximal) if maximal else set()
        ghosts = set(ghosts)
        clash = ghosts & used
        if clash:
            raise ValueError(f"ghost vertices {sorted(clash, key=_key)} appear in facets")
        return cls(_sorted(used | ghosts), facet_t, _sorted(ghosts))

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    @property
    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    @property
    def is_void(self) -> bool:
        return not self.facets

    def faces(self, size: int) -> list:
        """All faces with `size` vertices, sorted."""
        if size < 0:
            return []
        out = set()
        for f in self.facets:
            if len(f) >= size:
                out.update(combinations(f, size))
        return sorted(out, key=lambda t: [_key(x) for x in t])

    def f_vector(self) -> tuple:
        return tuple(len(self.faces(s)) for s in range(self.dim + 2))

    def restrict(self, vertices: Iterable[Hashable]) -> "SimplicialComplex":
        """Full subcomplex on `vertices` (ghosts among them are kept)."""
        vs = set(vertices)
        return SimplicialComplex.from_facets(
            [set(f) & vs for f in self.facets], set(self.ghost_vertices) & vs
        )

    def relabel(self, mapping) -> "SimplicialComplex":
        return SimplicialComplex.from_facets(
            [[mapping[v] for v in f] for f in self.facets],
            [mapping[v] for v in self.ghost_vertices],
        )

    def __contains__(self, simplex) -> bool:
        s = set(simplex)
        return any(s <= set(f) for f in self.facets)


class PseudomanifoldStatus(enum.Enum):
    CLOSED = "Closed"
    WITH_BOUNDARY = "WithBoundary"
    NEITHER = "Neither"


@dataclass(frozen=True)
class RidgeReport:
    ridge: tuple
    containing_facet_count: int


def ridge_counts(K: SimplicialComplex) -> Counter:
    counts: Counter = Counter()
    for f in K.facets:
        for ridge in combinations(f, len(f) - 1):
            counts[ridge] += 1
    return counts


def pseudomanifold_status(K: SimplicialComplex) -> tuple:
    """Classify a pure complex by how many facets contain each ridge.

    Returns ``(status, witness)``.  The witness is the first ridge lying in
    neither one nor two facets (status NEITHER), the first boundary ridge
    (WITH_BOUNDARY), or None (CLOSED).
    """
    if not K.facets:
        raise ValueError("pseudomanifold status of the void complex is undefined")
    if not K.is_pure:
        raise ValueError("complex is not pure")
    if K.dim < 0:
        raise ValueError("the complex {emptyset} has no ridges")
    counts = ridge_counts(K)
    order = sorted(counts, key=lambda t: [_key(x) for x in t])
    bad = next((r for r in order if counts[r] not in (1, 2)), None)
    if bad is not None:
        return PseudomanifoldStatus.NEITHER, RidgeReport(bad, counts[bad])
    boundary = next((r for r in order if counts[r] == 1), None)
    if boundary is not None:
        return PseudomanifoldStatus.WITH_BOUNDARY, RidgeReport(boundary, 1)
    return PseudomanifoldStatus.CLOSED, None


def join(K1: SimplicialComplex, K2: SimplicialComplex) -> SimplicialComplex:
    clash = set(K1.vertices) & set(K2.vertices)
    if clash:
        raise ValueError(f"label collision in join: {_sorted(clash)}")
    facets = [tuple(a) + tuple(b) for a, b in product(K1.facets, K2.facets)]
    return SimplicialComplex.from_facets(facets, set(K1.ghost_vertices) | set(K2.ghost_vertices))


def join_all(complexes: Sequence[SimplicialComplex]) -> SimplicialComplex:
    out = SimplicialComplex((), ((),), ())
    for K in complexes:
        out = join(out, K)
    return out


def boundary_of_simplex(labels: Iterable[Hashable]) -> SimplicialComplex:
    """All proper subsets of `labels`; one label gives a ghost complex."""
    labels = _sorted(set(labels))
    if not labels:
        raise ValueError("empty label set")
    if len(labels) == 1:
        return SimplicialComplex(labels, ((),), labels)
    return SimplicialComplex.from_facets(combinations(labels, len(labels) - 1))


def full_simplex(labels: Iterable[Hashable]) -> SimplicialComplex:
    labels = _sorted(set(labels))
    if not labels:
        raise ValueError("empty label set")
    return SimplicialComplex.from_facets([labels])


def boundary_matrix(K: SimplicialComplex, size: int) -> IntMatrix:
    """Matrix of the boundary map from faces with `size` vertices to faces with ``size-1``.

    ``size=0`` is the augmentation target; the empty face is the single
    generator of the degree -1 chain group.
    """
    src = K.faces(size)
    dst = K.faces(size - 1)
    index = {f: i for i, f in enumerate(dst)}
    entries = [0] * (len(dst) * len(src))
    ncols = len(src)
    for j, f in enumerate(src):
        for i in range(len(f)):
            face = f[:i] + f[i + 1:]
            entries[index[face] * ncols + j] = -1 if i % 2 else 1
    return IntMatrix(len(dst), ncols, tuple(entries))


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    free_rank: int
    torsion: tuple

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion


def reduced_homology(K: SimplicialComplex) -> list:
    """Reduced integral homology in degrees -1 .. dim K.

    Each entry is a :class:`HomologyGroup`; torsion lists the invariant
    factors greater than one.
    """
    if K.is_void:
        return []
    top = K.dim
    sizes = list(range(0, top + 2))  # face size s <-> degree s-1
    chain_dims = {s: len(K.faces(s)) for s in sizes}
    rank_of = {}
    torsion_of = {}
    for s in range(1, top + 2):
        snf = smith_normal_form(boundary_matrix(K, s), transforms=False)
        inv = snf.invariant_factors
        rank_of[s] = len(inv)
        torsion_of[s] = tuple(d for d in inv if d > 1)
    out = []
    for s in sizes:
        out_rank = rank_of.get(s, 0)
        in_rank = rank_of.get(s + 1, 0)
        free = chain_dims[s] - out_rank - in_rank
        out.append(HomologyGroup(s - 1, free, torsion_of.get(s + 1, ())))
    return out


def join_factors(K: SimplicialComplex) -> list:
    """Finest join decomposition of a pure complex, as sorted vertex groups.

    Non-ghost vertices are grouped by the facet exchange relation
    ``F - u + v`` is a facet; the grouping is checked to reproduce K and falls
    back to a single group otherwise.  Ghost vertices are omitted.
    """
    live = [v for v in K.vertices if v not in set(K.ghost_vertices)]
    if not live:
        return []
    parent = {v: v for v in live}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    facet_set = {frozenset(f) for f in K.facets}
    for f in facet_set:
        for u in f:
            base = f - {u}
            for v in live:
                if v not in f and base | {v} in facet_set:
                    ru, rv = find(u), find(v)
                    if ru != rv:
                        parent[ru] = rv
    groups: dict = {}
    for v in live:
        groups.setdefault(find(v), []).append(v)
    parts = sorted((_sorted(g) for g in groups.values()), key=lambda t: [_key(x) for x in t])
    pieces = [{frozenset(set(f) & set(p)) for f in K.facets} for p in parts]
    rebuilt = {frozenset().union(*combo) for combo in product(*pieces)}
    if rebuilt != facet_set:
        return [_sorted(live)]
    return parts
