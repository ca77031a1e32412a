"""Decide whether ``V/T`` is a closed manifold, a manifold with boundary, or neither.

Two routes are implemented and expected to agree:

* :func:`classify_structural` splits the weight matroid into connected
  components and reads off coloops (complexity-zero directions) and
  spanning circuits (complexity-one blocks in general position);
* :func:`classify_pseudomanifold` counts, for each ridge of the independence
  complex ``K(alpha)``, the facets containing it.

A Leontief certificate is produced in the manifold cases, and a ridge
witness with its flat closure otherwise.
"""
from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .complexes import (PseudomanifoldStatus, SimplicialComplex, join_factors,
                        pseudomanifold_status)
from .exact_linalg import kernel_basis
from .matroid import LinearMatroid
from .weights import WeightSystem, WeightSystemError, complexity, effective_reduction

log = logging.getLogger(__name__)


class Kind(enum.Enum):
    CLOSED_MANIFOLD = "ClosedManifold"
    MANIFOLD_WITH_BOUNDARY = "ManifoldWithBoundary"
    NOT_MANIFOLD = "NotManifold"


class RouteDisagreement(RuntimeError):
    """The two classification routes returned different answers."""

    def __init__(self, ws: WeightSystem, structural, pseudo):
        self.ws, self.structural, self.pseudo = ws, structural, pseudo
        super().__init__(
            f"routes disagree on {ws.to_json()}: structural={structural.kind.value}/"
            f"{structural.model_dim}, pseudomanifold={pseudo.kind.value}/{pseudo.model_dim}"
        )


class CertificateError(RuntimeError):
    """A complex that passed the ridge test did not factor into simplices and boundaries."""


@dataclass(frozen=True)
class LeontiefType:
    """Type ``(d, {n_1..n_s}, l)`` plus the weight-to-block assignment.

    ``assignment[i]`` is 0 for weights of the complexity-zero part and
    ``j >= 1`` for weights of the j-th complexity-one block, whose size is
    ``blocks[j-1]``.  Blocks are ordered by (size, smallest member).
    """

    d: int
    blocks: tuple
    l: int
    assignment: tuple = field(default=(), compare=True)

    @property
    def s(self) -> int:
        return len(self.blocks)

    @property
    def signature(self) -> tuple:
        """The weak-equivalence data without the labelling."""
        return (self.d, tuple(sorted(self.blocks)), self.l)

    @property
    def totally(self) -> bool:
        return self.d == 0

    def members(self, label: int) -> tuple:
        return tuple(i for i, a in enumerate(self.assignment) if a == label)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "blocks": list(self.blocks),
            "l": self.l,
            "assignment": {str(i): a for i, a in enumerate(self.assignment)},
        }

    @classmethod
    def from_parts(cls, coloops: Sequence[int], blocks: Sequence[Sequence[int]], l: int, r: int) -> "LeontiefType":
        blocks = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: (len(b), b))
        assignment = [None] * r
        for i in coloops:
            assignment[i] = 0
        for j, b in enumerate(blocks, start=1):
            for i in b:
                assignment[i] = j
        if any(a is None for a in assignment):
            raise ValueError("assignment does not cover every weight")
        return cls(len(coloops), tuple(len(b) for b in blocks), l, tuple(assignment))


@dataclass(frozen=True)
class Witness:
    ridge: tuple
    facet_count: int
    flat: tuple

    def to_dict(self) -> dict:
        return {"ridge": list(self.ridge), "facet_count": self.facet_count, "flat": list(self.flat)}


_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def _sup(n: int) -> str:
    return str(n).translate(_SUPERSCRIPTS)


@dataclass(frozen=True)
class OrbitVerdict:
    kind: Kind
    model_dim: int
    leontief: Optional[LeontiefType] = None
    witness: Optional[Witness] = None
    route: str = ""

    @property
    def boundary(self) -> bool:
        return self.kind is Kind.MANIFOLD_WITH_BOUNDARY

    @property
    def model(self) -> str:
        n = self.model_dim
        if self.kind is Kind.CLOSED_MANIFOLD:
            return f"closed manifold ℝ{_sup(n)}"
        if self.kind is Kind.MANIFOLD_WITH_BOUNDARY:
            rest = f" × ℝ{_sup(n - 1)}" if n > 1 else ""
            return f"manifold with boundary, half-space ℝ≥0{rest}"
        return (f"not a topological manifold (not even a homology manifold), "
                f"orbit space of dimension {n}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "model_dim": self.model_dim,
            "model": self.model,
            "boundary": self.boundary,
            "leontief": self.leontief.to_dict() if self.leontief else None,
            "witness": self.witness.to_dict() if self.witness else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


def _prepare(ws: WeightSystem) -> WeightSystem:
    if not ws.is_effective():
        ws, report = effective_reduction(ws)
        log.warning("input is not effective: quotiented a %d-dimensional noneffective kernel",
                    report.kernel_dim)
    return ws


def orbit_dimension(ws: WeightSystem) -> int:
    """``dim V - dim T`` for an effective system."""
    return ws.real_dim - ws.lattice_rank


def _trivial_verdict(ws: WeightSystem, route: str) -> OrbitVerdict:
    return OrbitVerdict(Kind.CLOSED_MANIFOLD, ws.trivial_dim,
                        LeontiefType(0, (), ws.trivial_dim, ()), None, route)


def _hyperplane_witness(M: LinearMatroid) -> Witness:
    """A ridge lying in at least three facets, found through the hyperplanes of M."""
    for H in M.hyperplanes():
        outside = M.size - len(H.indices)
        if outside not in (1, 2):
            ridge = next(b for b in M.restriction(H.indices).bases())
            ridge = tuple(H.indices[i] for i in ridge)
            return Witness(ridge, outside, H.indices)
    raise CertificateError("no hyperplane with more than two complementary elements")


def classify_structural(ws: WeightSystem) -> OrbitVerdict:
    """Classify through the direct-sum decomposition of the weight matroid."""
    ws = _prepare(ws)
    if ws.r == 0:
        return _trivial_verdict(ws, "structural")
    M = LinearMatroid.from_weights(ws)
    coloops, blocks = [], []
    leontief = True
    for comp in M.connected_components():
        n = len(comp)
        if n == 1:
            coloops.append(comp[0])
            continue
        if M.matroid_rank(comp) == n - 1 and all(
            M.is_independent(comp[:i] + comp[i + 1:]) for i in range(n)
        ):
            blocks.append(comp)
            continue
        leontief = False
        break
    if not leontief:
        return OrbitVerdict(Kind.NOT_MANIFOLD, orbit_dimension(ws), None,
                            _hyperplane_witness(M), "structural")
    lt = LeontiefType.from_parts(coloops, blocks, ws.trivial_dim, ws.r)
    block_dim = sum(n + 1 for n in lt.blocks)
    if lt.d == 0:
        return OrbitVerdict(Kind.CLOSED_MANIFOLD, lt.l + block_dim, lt, None, "structural")
    return OrbitVerdict(Kind.MANIFOLD_WITH_BOUNDARY, lt.l + lt.d + block_dim, lt, None, "structural")


def independence_complex(ws: WeightSystem) -> SimplicialComplex:
    """``K(alpha)``: facets are the bases of the weight matroid."""
    M = LinearMatroid.from_weights(ws)
    return SimplicialComplex.from_facets(M.bases())


def leontief_from_complex(K: SimplicialComplex, r: int, l: int) -> LeontiefType:
    """Read a Leontief type off a join of simplices and simplex boundaries."""
    facets = {frozenset(f) for f in K.facets}
    coloops, blocks = [], []
    for part in join_factors(K):
        pieces = {frozenset(f) & set(part) for f in facets}
        n = len(part)
        if n == 1 and pieces == {frozenset(part)}:
            coloops.append(part[0])
        elif n >= 2 and all(len(p) == n - 1 for p in pieces) and len(pieces) == n:
            blocks.append(part)
        else:
            raise CertificateError(f"join factor on {list(part)} is neither a simplex nor a boundary")
    return LeontiefType.from_parts(coloops, blocks, l, r)


def classify_pseudomanifold(ws: WeightSystem) -> OrbitVerdict:
    """Classify through ridge counts of the independence complex."""
    ws = _prepare(ws)
    if ws.r == 0:
        return _trivial_verdict(ws, "pseudomanifold")
    M = LinearMatroid.from_weights(ws)
    K = SimplicialComplex.from_facets(M.bases())
    status, ridge = pseudomanifold_status(K)
    dim = orbit_dimension(ws)
    if status is PseudomanifoldStatus.NEITHER:
        w = Witness(ridge.ridge, ridge.containing_facet_count, M.closure(ridge.ridge))
        return OrbitVerdict(Kind.NOT_MANIFOLD, dim, None, w, "pseudomanifold")
    lt = leontief_from_complex(K, ws.r, ws.trivial_dim)
    closed = status is PseudomanifoldStatus.CLOSED
    if closed != (lt.d == 0):
        raise CertificateError(f"ridge status {status.value} but certificate has d={lt.d}")
    kind = Kind.CLOSED_MANIFOLD if closed else Kind.MANIFOLD_WITH_BOUNDARY
    return OrbitVerdict(kind, dim, lt, None, "pseudomanifold")


def classify(ws: WeightSystem) -> OrbitVerdict:
    """Run both routes and insist that kinds, dimensions and types agree."""
    a = classify_structural(ws)
    b = classify_pseudomanifold(ws)
    same_type = (a.leontief.signature if a.leontief else None) == (
        b.leontief.signature if b.leontief else None)
    if a.kind is not b.kind or a.model_dim != b.model_dim or not same_type:
        raise RouteDisagreement(ws, a, b)
    return a


class CircleQuotient(enum.Enum):
    HALF_LINE = "HalfLine"
    R3 = "R3"
    NOT_HOMOLOGY_MANIFOLD = "NotHomologyManifold"


def circle_classify(exponents: Sequence[int]) -> CircleQuotient:
    """Orbit space type of ``t.z = (t^a_1 z_1, ..., t^a_n z_n)`` on ``C^n``."""
    exps = [int(e) for e in exponents]
    if not exps:
        raise ValueError("need at least one exponent")
    if any(e == 0 for e in exps):
        raise ValueError("zero exponent belongs to the trivial part")
    if len(exps) == 1:
        return CircleQuotient.HALF_LINE
    if len(exps) == 2:
        return CircleQuotient.R3
    return CircleQuotient.NOT_HOMOLOGY_MANIFOLD


class Charge(enum.Enum):
    PLUS = 1
    MINUS = -1
    DISCONNECTED_STABILIZERS = 0


def fixed_point_charge(k: int, l: int) -> Charge:
    """Monopole charge of an isolated fixed point with oriented weights (k, l)."""
    if k == 0 or l == 0:
        raise ValueError("weights must be nonzero")
    if abs(k) > 1 or abs(l) > 1:
        return Charge.DISCONNECTED_STABILIZERS
    return Charge.PLUS if k * l > 0 else Charge.MINUS


@dataclass(frozen=True)
class GeneralPositionRelation:
    coefficients: tuple  # c_i > 0, coprime
    flipped: tuple  # indices whose weight sign was flipped to make c_i positive


def general_position_relation(ws: WeightSystem) -> GeneralPositionRelation:
    """Primitive positive relation ``sum c_i alpha_i = 0`` of a general-position block."""
    c = complexity(ws)
    if c != 1:
        raise WeightSystemError(f"complexity {c}: not a complexity-one block")
    (rel,) = kernel_basis(ws.matrix())
    if any(x == 0 for x in rel):
        raise WeightSystemError("some weight is outside the relation: not in general position")
    flipped = tuple(i for i, x in enumerate(rel) if x < 0)
    return GeneralPositionRelation(tuple(abs(x) for x in rel), flipped)
