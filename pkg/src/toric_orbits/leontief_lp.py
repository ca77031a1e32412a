"""Leontief substitution systems ``Ax = b, x >= 0``.

Polyhedra are handled by exact enumeration of basic solutions, which is
fine for the small systems this package targets and sidesteps pivoting
and degeneracy issues entirely.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

from .complexes import SimplicialComplex
from .exact_linalg import IntMatrix, rational_rank, smith_normal_form, solve_affine
from .weights import WeightSystem, WeightSystemError, _as_int


class DegenerateSystemError(ValueError):
    def __init__(self, vertex, zeros, dim):
        self.vertex = vertex
        super().__init__(
            f"polyhedron is not simple: vertex {[str(x) for x in vertex]} has {zeros} "
            f"vanishing coordinates in a {dim}-dimensional polyhedron"
        )


@dataclass(frozen=True)
class LeontiefSystem:
    A: IntMatrix
    b: tuple

    def __post_init__(self):
        if len(self.b) != self.A.rows:
            raise ValueError(f"A has {self.A.rows} rows but b has length {len(self.b)}")

    @classmethod
    def from_rows(cls, A: Sequence[Sequence[int]], b: Sequence[int]) -> "LeontiefSystem":
        A = IntMatrix.from_rows(A) if A else IntMatrix.zeros(0, 0)
        return cls(A, tuple(int(x) for x in b))

    @property
    def g(self) -> int:
        return self.A.rows

    @property
    def f(self) -> int:
        return self.A.cols

    def to_dict(self) -> dict:
        return {"A": self.A.tolist(), "b": list(self.b)}


def parse_system(raw) -> LeontiefSystem:
    """Read ``{"A": [[...], ...], "b": [...]}``; rational rows are scaled to integers."""
    if isinstance(raw, (str, bytes)):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise WeightSystemError(f"malformed JSON: {exc}") from exc
    if not isinstance(raw, dict) or "A" not in raw or "b" not in raw:
        raise WeightSystemError('LP input must be an object with keys "A" and "b"')
    A, b = raw["A"], raw["b"]
    if not isinstance(A, list) or not isinstance(b, list) or not all(isinstance(r, list) for r in A):
        raise WeightSystemError("A must be a list of rows and b a list")
    if len(A) != len(b):
        raise ValueError(f"A has {len(A)} rows but b has length {len(b)}")
    if len({len(r) for r in A}) > 1:
        raise ValueError("rows of A have different lengths")
    rows, rhs = [], []
    for i, (row, bi) in enumerate(zip(A, b)):
        vals = [_as_int(x, f"row {i}") for x in row] + [_as_int(bi, f"b[{i}]")]
        den = 1
        for x in vals:
            den = den * x.denominator // gcd(den, x.denominator)
        vals = [int(x * den) for x in vals]
        rows.append(vals[:-1])
        rhs.append(vals[-1])
    return LeontiefSystem.from_rows(rows, rhs)


def block_system(k_list: Sequence[int], d: int) -> LeontiefSystem:
    """One all-ones row per block of sizes `k_list`, then `d` free zero columns."""
    if not k_list:
        raise ValueError("need at least one block: a system with g = 0 rows is degenerate")
    if any(k < 1 for k in k_list) or d < 0:
        raise ValueError("block sizes must be >= 1 and d >= 0")
    f = sum(k_list) + d
    rows = []
    start = 0
    for k in k_list:
        rows.append([1 if start <= j < start + k else 0 for j in range(f)])
        start += k
    return LeontiefSystem.from_rows(rows, [1] * len(k_list))


def _basic_solutions(A: IntMatrix, b: Sequence[int]) -> list:
    """Nonnegative basic solutions of ``Ax = b``, deduplicated, in basis order."""
    rho = rational_rank(A) if A.rows and A.cols else 0
    if rho == 0:
        if any(b):
            return []
        return [tuple(Fraction(0) for _ in range(A.cols))]
    out, seen = [], set()
    for basis in combinations(range(A.cols), rho):
        if rational_rank(A.submatrix(range(A.rows), basis)) != rho:
            continue
        rest = [j for j in range(A.cols) if j not in basis]
        x = solve_affine(A, b, rest)
        if x is None or any(v < 0 for v in x):
            continue
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


@dataclass(frozen=True)
class PolyhedronReport:
    feasible: bool
    vertices: tuple
    rays: tuple  # extreme rays, normalized to coordinate sum 1
    bounded: bool
    dim: int
    simple: bool
    implicit_zero: tuple  # coordinates vanishing on all of P

    def to_dict(self) -> dict:
        def fmt(x):
            return int(x) if x.denominator == 1 else str(x)

        return {
            "feasible": self.feasible,
            "vertices": [[fmt(x) for x in v] for v in self.vertices],
            "rays": [[fmt(x) for x in v] for v in self.rays],
            "bounded": self.bounded,
            "dim": self.dim,
            "simple": self.simple,
            "implicit_zero": list(self.implicit_zero),
        }


def enumerate_vertices(sys: LeontiefSystem) -> PolyhedronReport:
    """Vertices, extreme rays, dimension and simplicity of ``P``."""
    A, f = sys.A, sys.f
    vertices = sorted(_basic_solutions(A, sys.b))
    if not vertices:
        return PolyhedronReport(False, (), (), True, -1, False, ())
    # rays of the recession cone are the vertices of {Ax = 0, sum x = 1, x >= 0}
    cone = IntMatrix.from_rows(A.tolist() + [[1] * f], f)
    rays = sorted(_basic_solutions(cone, [0] * A.rows + [1]))
    zero = tuple(i for i in range(f)
                 if all(v[i] == 0 for v in vertices) and all(r[i] == 0 for r in rays))
    hull = IntMatrix.from_rows(A.tolist() + [[int(j == i) for j in range(f)] for i in zero], f)
    dim = f - (rational_rank(hull) if hull.rows else 0)
    simple = all(_free_zeros(v, zero) == dim for v in vertices)
    return PolyhedronReport(True, tuple(vertices), tuple(rays), not rays, dim, simple, zero)


def _free_zeros(v, zero) -> int:
    return sum(1 for i, x in enumerate(v) if x == 0 and i not in zero)


class LeontiefStatus(enum.Enum):
    TOTALLY = "Totally"
    NON_TOTALLY = "NonTotally"
    NOT_LEONTIEF = "NotLeontief"


@dataclass(frozen=True)
class LeontiefCheck:
    status: LeontiefStatus
    reason: str = ""


def check_leontief(sys: LeontiefSystem) -> LeontiefCheck:
    """Sign pattern, feasibility and boundedness of a substitution system."""
    neg = [i for i, x in enumerate(sys.b) if x < 0]
    if neg:
        return LeontiefCheck(LeontiefStatus.NOT_LEONTIEF, f"b has negative entries at rows {neg}")
    for j in range(sys.f):
        pos = [i for i in range(sys.g) if sys.A[i, j] > 0]
        if len(pos) >= 2:
            return LeontiefCheck(LeontiefStatus.NOT_LEONTIEF,
                                 f"column {j} has {len(pos)} positive entries (rows {pos})")
    report = enumerate_vertices(sys)
    if not report.feasible:
        return LeontiefCheck(LeontiefStatus.NOT_LEONTIEF, "polyhedron is empty")
    if report.bounded:
        return LeontiefCheck(LeontiefStatus.TOTALLY)
    return LeontiefCheck(LeontiefStatus.NON_TOTALLY, "polyhedron is unbounded")


def nerve_complex(sys: LeontiefSystem, report: Optional[PolyhedronReport] = None) -> SimplicialComplex:
    """Nerve of the facets ``P ∩ {x_i = 0}`` of a nondegenerate system.

    Vertices are coordinate indices whose face is nonempty and proper; a set
    of them spans a simplex when some vertex of ``P`` vanishes on all of it.
    """
    check = check_leontief(sys)
    if check.status is LeontiefStatus.NOT_LEONTIEF:
        raise ValueError(f"not a Leontief system: {check.reason}")
    report = report or enumerate_vertices(sys)
    zero = set(report.implicit_zero)
    for v in report.vertices:
        nz = _free_zeros(v, zero)
        if nz != report.dim:
            raise DegenerateSystemError(v, nz, report.dim)
    facets = [[i for i, x in enumerate(v) if x == 0 and i not in zero] for v in report.vertices]
    return SimplicialComplex.from_facets(facets)


def restrict_standard_weights(sys: LeontiefSystem) -> WeightSystem:
    """Weights of ``C^f`` restricted to the subtorus ``exp(ker A)``.

    The character lattice of the subtorus is ``Z^f / sat(rowspace A)``; with
    ``U A V = D`` the quotient map is ``x -> (x V)[rho:]`` so the image of
    ``e_i`` is the tail of row i of V.
    """
    f = sys.f
    snf = smith_normal_form(sys.A)
    rho = len(snf.invariant_factors)
    V = snf.V
    weights = [tuple(V[i, j] for j in range(rho, f)) for i in range(f)]
    return WeightSystem.create(f - rho, weights, 0)


def lp_report(sys: LeontiefSystem) -> dict:
    """Everything the ``lp`` command prints."""
    check = check_leontief(sys)
    report = enumerate_vertices(sys)
    out = {"system": sys.to_dict(), "leontief": check.status.value, "reason": check.reason,
           "polyhedron": report.to_dict(), "nerve": None, "nerve_error": None}
    if check.status is not LeontiefStatus.NOT_LEONTIEF:
        try:
            K = nerve_complex(sys, report)
            out["nerve"] = {"vertices": list(K.vertices), "facets": [list(f) for f in K.facets]}
        except DegenerateSystemError as exc:
            out["nerve_error"] = str(exc)
    return out


def bridge_report(sys: LeontiefSystem) -> dict:
    """LP status next to the orbit-space verdict of the restricted representation.

    ``agree`` is True when Totally pairs with ClosedManifold and NonTotally
    with ManifoldWithBoundary.
    """
    from .orbit_classifier import Kind, classify

    check = check_leontief(sys)
    ws = restrict_standard_weights(sys)
    verdict = classify(ws)
    expected = {LeontiefStatus.TOTALLY: Kind.CLOSED_MANIFOLD,
                LeontiefStatus.NON_TOTALLY: Kind.MANIFOLD_WITH_BOUNDARY}.get(check.status)
    return {
        "leontief": check.status.value,
        "reason": check.reason,
        "weights": ws.to_dict(),
        "verdict": verdict.to_dict(),
        "agree": expected is not None and verdict.kind is expected,
    }
