"""Face posets of torus representations.

The face submanifolds of ``V`` correspond to the flats of the weight
matroid, so ``S(V)`` is the geometric lattice of flats.  For a Leontief
representation of type ``(d, {n_i}, l)`` that lattice is
``B_d x prod Sp_{n_i - 1}``; :func:`product_structure_check` builds that
isomorphism explicitly from the classifier's block assignment.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

from .orbit_classifier import LeontiefType, classify_structural
from .matroid import LinearMatroid
from .weights import WeightSystem, effective_reduction


class PosetIsomorphismError(AssertionError):
    """The flat lattice is not the product predicted by the Leontief type."""


@dataclass(frozen=True)
class GradedPoset:
    elements: tuple  # sorted index tuples
    covers: tuple  # (lower, upper) pairs of element positions
    ranks: tuple

    def __len__(self):
        return len(self.elements)

    @property
    def top(self) -> int:
        return max(range(len(self.elements)), key=lambda i: (self.ranks[i], len(self.elements[i])))

    def leq(self, a: int, b: int) -> bool:
        return set(self.elements[a]) <= set(self.elements[b])

    def to_dict(self, encoding: Optional[dict] = None) -> dict:
        out = {
            "elements": [list(e) for e in self.elements],
            "covers": [list(c) for c in self.covers],
            "ranks": list(self.ranks),
        }
        if encoding is not None:
            out["encoding"] = [[list(part) for part in encoding[e]] for e in self.elements]
        return out


def face_poset(ws: WeightSystem) -> GradedPoset:
    """Lattice of flats of the weight matroid, graded by flat rank."""
    if not ws.is_effective():
        ws, _ = effective_reduction(ws)
    M = LinearMatroid.from_weights(ws)
    flats = M.flats()
    elements = tuple(f.indices for f in flats)
    ranks = tuple(f.flat_rank for f in flats)
    sets = [set(e) for e in elements]
    covers = []
    for i, lo in enumerate(sets):
        for j, hi in enumerate(sets):
            if ranks[j] == ranks[i] + 1 and lo < hi:
                covers.append((i, j))
    return GradedPoset(elements, tuple(covers), ranks)


def poset_cardinality(lt: LeontiefType) -> int:
    """``|B_d x prod Sp_{n_i-1}| = 2^d * prod(2^n_i - n_i)``."""
    out = 2 ** lt.d
    for n in lt.blocks:
        out *= 2 ** n - n
    return out


def _string_rank(lt: LeontiefType, string: tuple) -> int:
    rk = len(string[0])
    for n, part in zip(lt.blocks, string[1:]):
        rk += n - 1 if len(part) == n else len(part)
    return rk


def encode_flat(lt: LeontiefType, flat: Iterable[int]) -> tuple:
    """The string ``(A_0, A_1, ..., A_s)`` of a flat."""
    flat = set(flat)
    return tuple(tuple(i for i in lt.members(label) if i in flat) for label in range(lt.s + 1))


def abstract_product(lt: LeontiefType) -> set:
    """All admissible strings ``(A_0, ..., A_s)`` with ``|A_i| != n_i - 1``."""
    from itertools import combinations, product

    def subsets(items, forbidden=None):
        out = []
        for size in range(len(items) + 1):
            if size == forbidden:
                continue
            out.extend(combinations(items, size))
        return out

    factors = [subsets(lt.members(0))]
    for j, n in enumerate(lt.blocks, start=1):
        factors.append(subsets(lt.members(j), forbidden=n - 1))
    return set(product(*factors))


def product_structure_check(ws: WeightSystem, lt: LeontiefType) -> tuple:
    """Verify ``S(V) = B_d x prod Sp_{n_i-1}`` via the string encoding.

    Returns ``(True, mapping)`` where `mapping` sends each flat to its
    string.  Raises :class:`PosetIsomorphismError` when the encoding is not
    a rank- and order-preserving bijection.
    """
    P = face_poset(ws)
    if len(lt.assignment) != ws.r:
        raise PosetIsomorphismError("assignment does not match the weight count")
    mapping = {e: encode_flat(lt, e) for e in P.elements}
    target = abstract_product(lt)
    image = set(mapping.values())
    if len(image) != len(P.elements):
        raise PosetIsomorphismError("string encoding is not injective on flats")
    if image != target:
        missing = sorted(target - image)[:3]
        extra = sorted(image - target)[:3]
        raise PosetIsomorphismError(f"flats do not match admissible strings; missing {missing}, extra {extra}")
    for e, rk in zip(P.elements, P.ranks):
        if _string_rank(lt, mapping[e]) != rk:
            raise PosetIsomorphismError(f"rank mismatch at flat {e}")
    # order: componentwise inclusion of strings must match inclusion of flats
    strings = [mapping[e] for e in P.elements]
    for a in range(len(strings)):
        for b in range(len(strings)):
            comp = all(set(x) <= set(y) for x, y in zip(strings[a], strings[b]))
            if comp != P.leq(a, b):
                raise PosetIsomorphismError(f"order mismatch between {P.elements[a]} and {P.elements[b]}")
    if len(P.elements) != poset_cardinality(lt):
        raise PosetIsomorphismError("cardinality differs from 2^d * prod(2^n - n)")
    return True, mapping


def face_leontief_type(ws: WeightSystem, lt: LeontiefType, flat: Iterable[int]) -> LeontiefType:
    """Leontief type of the face submanifold indexed by `flat`.

    Blocks met in full survive; blocks met in at most ``n_i - 2`` weights
    join the complexity-zero part.  The assignment is indexed by position
    within the sorted flat, matching ``ws.subsystem(flat)``.
    """
    flat = tuple(sorted(set(flat)))
    M = LinearMatroid.from_weights(ws if ws.is_effective() else effective_reduction(ws)[0])
    if not M.is_flat(flat):
        raise ValueError(f"{list(flat)} is not a flat")
    string = encode_flat(lt, flat)
    coloops = list(string[0])
    blocks = []
    for n, part in zip(lt.blocks, string[1:]):
        if len(part) == n - 1:
            raise AssertionError(f"flat meets a block of size {n} in {n - 1} weights")
        if len(part) == n:
            blocks.append(part)
        else:
            coloops.extend(part)
    pos = {i: p for p, i in enumerate(flat)}
    local = LeontiefType.from_parts([pos[i] for i in coloops], [[pos[i] for i in b] for b in blocks],
                                    lt.l, len(flat))
    return local


def reclassify_flat(ws: WeightSystem, flat: Iterable[int]) -> Optional[LeontiefType]:
    """Brute-force type of a face: classify the flat's weights from scratch."""
    sub = ws.subsystem(sorted(set(flat)))
    return classify_structural(effective_reduction(sub)[0]).leontief


def poset_json(ws: WeightSystem, lt: Optional[LeontiefType] = None) -> str:
    P = face_poset(ws)
    encoding = None
    if lt is not None:
        _, encoding = product_structure_check(ws, lt)
    return json.dumps(P.to_dict(encoding), sort_keys=True)
