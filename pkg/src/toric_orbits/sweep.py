"""Exhaustive and random sweeps used by ``selfcheck`` and the acceptance suite.

Small lattices (k <= 2) are swept system by system through both
classifier routes.  For k = 3 the number of multisets is in the tens of
millions, so enumeration happens in numpy: every multiset is keyed by its
labelled basis set (computed from an independent determinant table), and
the library is run on a few representatives of each key.  Both routes see
a system only through its matroid, so the key determines the answer; the
library's own bases are compared against the key for every representative.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb, gcd
from typing import Callable, Iterator, Optional

import numpy as np

from .orbit_classifier import (Kind, OrbitVerdict, classify, classify_pseudomanifold,
                       classify_structural, independence_complex)
from .complexes import reduced_homology
from .exact_linalg import (IntMatrix, determinant, is_smith_form, rational_rank,
                           smith_normal_form)
from .faces import face_poset
from .matroid import LinearMatroid
from .weights import WeightSystem, normalize_sign


def sign_normalized_vectors(k: int, bound: int) -> list:
    """Nonzero vectors of ``[-bound, bound]^k`` with first nonzero entry positive."""
    out = []
    for v in product(range(-bound, bound + 1), repeat=k):
        if any(v) and normalize_sign(v) == v:
            out.append(v)
    return out


def primitive_lines(k: int, bound: int) -> list:
    out = []
    for v in sign_normalized_vectors(k, bound):
        g = 0
        for x in v:
            g = gcd(g, x)
        if g == 1:
            out.append(v)
    return out


def multiset_count(n: int, r: int) -> int:
    return comb(n + r - 1, r)


def multiset_chunks(n: int, r: int, chunk: int = 1 << 20) -> Iterator[np.ndarray]:
    """All nondecreasing index tuples of length r over ``range(n)``, in lex order."""
    if r == 0:
        yield np.zeros((1, 0), dtype=np.int16)
        return
    if r == 1:
        yield np.arange(n, dtype=np.int16)[:, None]
        return
    for prefix in multiset_chunks(n, r - 1, chunk):
        last = prefix[:, -1].astype(np.int64)
        reps = n - last
        # split large expansions so memory stays bounded
        start = 0
        while start < len(prefix):
            csum = np.cumsum(reps[start:])
            stop = start + max(1, int(np.searchsorted(csum, chunk, side="right")))
            block, rp, lst = prefix[start:stop], reps[start:stop], last[start:stop]
            rows = np.repeat(block, rp, axis=0)
            offsets = np.arange(int(rp.sum())) - np.repeat(np.cumsum(rp) - rp, rp)
            tail = (np.repeat(lst, rp) + offsets).astype(np.int16)
            yield np.concatenate([rows, tail[:, None]], axis=1)
            start = stop


def nonzero_det_table(vectors: list, k: int) -> np.ndarray:
    """Boolean table ``T[i_1..i_k]``: do these k vectors form a basis of Q^k."""
    V = np.array(vectors, dtype=np.int64).reshape(len(vectors), k)
    n = len(vectors)
    if k == 1:
        return V[:, 0] != 0
    if k == 2:
        return (V[:, None, 0] * V[None, :, 1] - V[:, None, 1] * V[None, :, 0]) != 0
    if k == 3:
        cross = np.cross(V[:, None, :], V[None, :, :])  # n x n x 3
        det = np.einsum("abi,ci->abc", cross, V)
        return det != 0
    idx = np.array(list(product(range(n), repeat=k)))
    dets = np.rint(np.linalg.det(V[idx].astype(float))).astype(np.int64)
    return (dets != 0).reshape((n,) * k)


def basis_keys(table: np.ndarray, rows: np.ndarray, k: int) -> np.ndarray:
    """Bitmask over the k-subsets of positions (lex order) marking bases."""
    r = rows.shape[1]
    n = table.shape[0]
    flat_table = table.ravel()
    cols = [rows[:, p].astype(np.int32) for p in range(r)]
    prefix: dict = {(): np.zeros(len(rows), dtype=np.int32)}
    key = np.zeros(len(rows), dtype=np.int64)
    for bit, pos in enumerate(combinations(range(r), k)):
        head = pos[:-1]
        for t in range(1, len(head) + 1):
            if head[:t] not in prefix:
                prefix[head[:t]] = prefix[head[:t - 1]] * n + cols[head[t - 1]]
        hit = flat_table[prefix[head] * n + cols[pos[-1]]]
        key |= hit.astype(np.int64) << bit
    return key


def decode_key(key: int, r: int, k: int) -> list:
    return [c for bit, c in enumerate(combinations(range(r), k)) if key >> bit & 1]


@dataclass
class RouteCheck:
    ws: WeightSystem
    structural: Optional[OrbitVerdict]
    pseudo: Optional[OrbitVerdict]
    error: str = ""

    @property
    def agree(self) -> bool:
        if self.error:
            return False
        a, b = self.structural, self.pseudo
        sig = lambda v: v.leontief.signature if v.leontief else None
        return a.kind is b.kind and a.model_dim == b.model_dim and sig(a) == sig(b)


def check_routes(ws: WeightSystem) -> RouteCheck:
    try:
        return RouteCheck(ws, classify_structural(ws), classify_pseudomanifold(ws))
    except Exception as exc:  # a crash in either route counts as a violation
        return RouteCheck(ws, None, None, f"{type(exc).__name__}: {exc}")


@dataclass
class SweepReport:
    systems: int = 0  # weight systems covered
    library_runs: int = 0
    distinct_matroids: int = 0
    oracle_mismatches: list = field(default_factory=list)
    disagreements: list = field(default_factory=list)
    units_done: int = 0
    units_total: int = 0
    multisets_done: int = 0
    multisets_total: int = 0
    elapsed: float = 0.0
    complexes: dict = field(default_factory=dict)  # (k, r, key) -> a representative system

    @property
    def complete(self) -> bool:
        return self.units_done == self.units_total

    @property
    def coverage(self) -> float:
        if self.multisets_total:
            return self.multisets_done / self.multisets_total
        return self.units_done / self.units_total if self.units_total else 1.0

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.oracle_mismatches

    def to_dict(self) -> dict:
        return {
            "systems": self.systems,
            "library_runs": self.library_runs,
            "distinct_matroids": self.distinct_matroids,
            "oracle_mismatches": len(self.oracle_mismatches),
            "disagreements": [c.ws.to_dict() for c in self.disagreements[:10]],
            "coverage": round(self.coverage, 6),
            "complete": self.complete,
        }


def _sweep_units(k_max: int, r_max: int) -> list:
    return [(k, r) for k in range(1, k_max + 1) for r in range(k, r_max + 1)]


def exhaustive_sweep(k_max: int = 3, r_max: int = 6, bound: int = 2, per_key: int = 3,
                     direct_k: int = 2, deadline: Optional[float] = None) -> SweepReport:
    """Route equivalence over every effective system with entries in ``[-bound, bound]``.

    Lattices with ``k <= direct_k`` are checked system by system; larger
    ones through matroid keys with `per_key` library runs per key.
    """
    t0 = time.perf_counter()
    rep = SweepReport()
    units = _sweep_units(k_max, r_max)
    rep.units_total = len(units)
    sizes = {k: len(sign_normalized_vectors(k, bound)) for k in range(1, k_max + 1)}
    rep.multisets_total = sum(multiset_count(sizes[k], r) for k, r in units)
    late = lambda: deadline is not None and time.perf_counter() > deadline
    for k, r in units:
        if late():
            break
        vectors = sign_normalized_vectors(k, bound)
        table = nonzero_det_table(vectors, k)
        seen: dict = {}
        nbits = comb(r, k)
        # keys already sampled `per_key` times, as a lookup table when it fits
        done = np.zeros(1 << nbits, dtype=bool) if nbits <= 24 else None
        finished = True
        for rows in multiset_chunks(len(vectors), r, chunk=1 << 20 if k > direct_k else 1 << 9):
            if late():
                finished = False
                break
            rep.multisets_done += len(rows)
            keys = basis_keys(table, rows, k)
            eff = keys != 0
            rows, keys = rows[eff], keys[eff]
            rep.systems += len(rows)
            if k <= direct_k:
                for row, key in zip(rows.tolist(), keys.tolist()):
                    ws = WeightSystem.create(k, [vectors[i] for i in row])
                    _run(rep, ws, k, r, key, seen)
                continue
            if done is not None:
                fresh = ~done[keys]
                rows, keys = rows[fresh], keys[fresh]
                if not len(keys):
                    continue
            uniq, first = np.unique(keys, return_index=True)
            _, last = np.unique(keys[::-1], return_index=True)
            last = len(keys) - 1 - last
            for key, i, j in zip(uniq.tolist(), first.tolist(), last.tolist()):
                for pick in dict.fromkeys((i, j)):
                    if seen.get(key, 0) >= per_key:
                        break
                    ws = WeightSystem.create(k, [vectors[x] for x in rows[pick].tolist()])
                    _run(rep, ws, k, r, key, seen)
                if done is not None and seen[key] >= per_key:
                    done[key] = True
        rep.distinct_matroids += len(seen)
        if not finished:
            break
        rep.units_done += 1
    rep.elapsed = time.perf_counter() - t0
    return rep


def _run(rep: SweepReport, ws: WeightSystem, k: int, r: int, key: int, seen: dict) -> None:
    seen[key] = seen.get(key, 0) + 1
    rep.complexes.setdefault((k, r, key), ws)
    bases = LinearMatroid.from_weights(ws).bases()
    if bases != decode_key(key, r, k):
        rep.oracle_mismatches.append(ws)
    check = check_routes(ws)
    rep.library_runs += 1
    if not check.agree:
        rep.disagreements.append(check)


def random_weight_system(rng: random.Random, k_max: int = 4, r_max: int = 7, bound: int = 3,
                         effective: bool = True) -> WeightSystem:
    """A random system; with `effective`, resampled until the weights span."""
    while True:
        k = rng.randint(1, k_max)
        r = rng.randint(k if effective else 1, max(k, r_max))
        weights = []
        while len(weights) < r:
            v = [rng.randint(-bound, bound) for _ in range(k)]
            if any(v):
                weights.append(v)
        ws = WeightSystem.create(k, weights, rng.choice((0, 0, 1, 2)))
        if not effective or ws.is_effective():
            return ws


def random_unimodular(rng: random.Random, n: int, steps: int = 12, bound: int = 2) -> IntMatrix:
    """Product of random elementary row operations, a permutation and sign flips."""
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return IntMatrix.identity(0)
    for _ in range(steps):
        if n > 1:
            i, j = rng.sample(range(n), 2)
            c = rng.choice([x for x in range(-bound, bound + 1) if x])
            M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    rng.shuffle(M)
    for i in range(n):
        if rng.random() < 0.5:
            M[i] = [-x for x in M[i]]
    return IntMatrix.from_rows(M)


def random_route_checks(count: int, seed: int = 0, k_max: int = 4, r_max: int = 7,
                        deadline: Optional[float] = None,
                        on_system: Optional[Callable] = None) -> SweepReport:
    """Route equivalence on `count` random effective systems."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    rep = SweepReport(units_total=count)
    for _ in range(count):
        if deadline is not None and time.perf_counter() > deadline:
            break
        ws = random_weight_system(rng, k_max, r_max)
        check = check_routes(ws)
        rep.systems += 1
        rep.library_runs += 1
        rep.units_done += 1
        if not check.agree:
            rep.disagreements.append(check)
        if on_system is not None:
            on_system(ws, check)
    rep.elapsed = time.perf_counter() - t0
    return rep


def random_int_matrix(rng: random.Random, max_dim: int = 6, bound: int = 9) -> IntMatrix:
    g, f = rng.randint(1, max_dim), rng.randint(1, max_dim)
    density = rng.random()
    rows = [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(f)]
            for _ in range(g)]
    return IntMatrix.from_rows(rows, f)


def snf_contract_violation(M: IntMatrix) -> Optional[str]:
    """None when the Smith form of M satisfies its contract, else a reason."""
    snf = smith_normal_form(M)
    if snf.U @ M @ snf.V != snf.D:
        return "U M V != D"
    if abs(determinant(snf.U)) != 1 or abs(determinant(snf.V)) != 1:
        return "transform not unimodular"
    if not is_smith_form(snf.D):
        return "diagonal fails the divisibility chain"
    if len(snf.invariant_factors) != rational_rank(M):
        return "rank of D differs from rank of M"
    return None


def homology_signature(ws: WeightSystem) -> tuple:
    K = independence_complex(ws)
    return tuple((h.degree, h.free_rank, h.torsion) for h in reduced_homology(K))


def wedge_violation(ws: WeightSystem, kind: Kind) -> Optional[str]:
    """Reduced homology of K(alpha) must be free and sit in degree k-1 only."""
    k = ws.lattice_rank
    for degree, free, torsion in homology_signature(ws):
        if torsion:
            return f"torsion {torsion} in degree {degree}"
        if free and degree != k - 1:
            return f"rank {free} in degree {degree}, expected only degree {k - 1}"
        if degree == k - 1:
            if kind is Kind.CLOSED_MANIFOLD and free != 1:
                return f"closed case has top rank {free}"
            if kind is Kind.MANIFOLD_WITH_BOUNDARY and free != 0:
                return f"boundary case has top rank {free}"
    return None


def invariants(ws: WeightSystem) -> tuple:
    """Data that must survive a unimodular change of coordinates."""
    v = classify(ws)
    sig = v.leontief.signature if v.leontief else None
    return (v.kind, v.model_dim, sig, len(face_poset(ws)), homology_signature(ws))


def transformed_pair(rng: random.Random, k_max: int = 4, r_max: int = 6) -> tuple:
    """A random system and its image under a random unimodular matrix and permutation."""
    ws = random_weight_system(rng, k_max, r_max)
    U = random_unimodular(rng, ws.lattice_rank)
    image = ws.transform(U)
    order = list(range(image.r))
    rng.shuffle(order)
    return ws, U, image.subsystem(order)


def leontief_system(d: int, blocks, l: int = 0) -> WeightSystem:
    """A system of type ``(d, blocks, l)``: basis coloops, then one circuit per block.

    A block of size n lives in its own n-1 coordinates as the basis plus the
    all-ones vector, so its weights are in general position.
    """
    k = d + sum(n - 1 for n in blocks)
    weights = []
    offset = 0

    def unit(i):
        return tuple(int(j == i) for j in range(k))

    for _ in range(d):
        weights.append(unit(offset))
        offset += 1
    for n in blocks:
        span = range(offset, offset + n - 1)
        weights.extend(unit(i) for i in span)
        weights.append(tuple(int(j in span) for j in range(k)))
        offset += n - 1
    return WeightSystem.create(k, weights, l)
