"""Weight systems of compact torus representations.

A representation of ``T^k`` on ``R^m`` is, up to isomorphism, a multiset of
nonzero weights in ``Z^k`` (each defined up to sign) together with the
dimension of the trivial summand.  This module holds that datum, its JSON
form, and the invariants that only need linear algebra: complexity,
effectiveness and the Smith canonical form of complexity-zero systems.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Any, Sequence

from .exact_linalg import IntMatrix, rational_rank, smith_normal_form

log = logging.getLogger(__name__)


class WeightSystemError(ValueError):
    """Raised for malformed or inconsistent weight-system input."""


def normalize_sign(v: Sequence[int]) -> tuple:
    """Flip `v` so that its first nonzero entry is positive."""
    v = tuple(int(x) for x in v)
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


def primitive_line(v: Sequence[int]) -> tuple:
    """Primitive, sign-normalized representative of the line through `v`."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector spans no line")
    return normalize_sign(tuple(x // g for x in v))


@dataclass(frozen=True)
class WeightSystem:
    """Canonical weight datum ``(k, alpha, l)``.

    Weights are stored sign-normalized but *not* scaled to primitive
    vectors; divisibility matters for weak equivalence.
    """

    lattice_rank: int
    weights: tuple
    trivial_dim: int = 0

    def __post_init__(self):
        if self.lattice_rank < 0:
            raise WeightSystemError("lattice_rank must be nonnegative")
        if self.trivial_dim < 0:
            raise WeightSystemError("trivial_dim must be nonnegative")
        for w in self.weights:
            if len(w) != self.lattice_rank:
                raise WeightSystemError(
                    f"weight {list(w)} has length {len(w)}, expected {self.lattice_rank}"
                )
            if not any(w):
                raise WeightSystemError("zero weights must be folded into trivial_dim")
            if normalize_sign(w) != tuple(w):
                raise WeightSystemError(f"weight {list(w)} is not sign-normalized")

    @classmethod
    def create(cls, lattice_rank: int, weights: Sequence[Sequence[int]], trivial_dim: int = 0) -> "WeightSystem":
        """Canonicalize raw weights: fold zero weights, normalize signs."""
        kept = []
        extra = 0
        for w in weights:
            w = tuple(int(x) for x in w)
            if len(w) != lattice_rank:
                raise WeightSystemError(
                    f"inconsistent vector lengths: {list(w)} in a rank-{lattice_rank} lattice"
                )
            if any(w):
                kept.append(normalize_sign(w))
            else:
                extra += 2
        if trivial_dim < 0:
            raise WeightSystemError("trivial_dim must be nonnegative")
        return cls(lattice_rank, tuple(kept), trivial_dim + extra)

    @property
    def r(self) -> int:
        return len(self.weights)

    @property
    def real_dim(self) -> int:
        """Real dimension of the representation space."""
        return 2 * len(self.weights) + self.trivial_dim

    @property
    def primitive_flags(self) -> tuple:
        out = []
        for w in self.weights:
            g = 0
            for x in w:
                g = gcd(g, x)
            out.append(g == 1)
        return tuple(out)

    def lines(self) -> tuple:
        """Lines-only view: primitive representatives of the weights."""
        return tuple(primitive_line(w) for w in self.weights)

    def matrix(self) -> IntMatrix:
        """The k x r matrix whose columns are the weights."""
        k = self.lattice_rank
        return IntMatrix(k, self.r, tuple(w[i] for i in range(k) for w in self.weights))

    def rank(self) -> int:
        return rational_rank(self.matrix()) if self.weights else 0

    def is_effective(self) -> bool:
        return self.rank() == self.lattice_rank

    def subsystem(self, indices) -> "WeightSystem":
        """Weights at `indices` (in order), same lattice and trivial part."""
        return WeightSystem(self.lattice_rank, tuple(self.weights[i] for i in indices),
                            self.trivial_dim)

    def transform(self, U: IntMatrix) -> "WeightSystem":
        """Apply a change of lattice coordinates ``alpha_i -> U alpha_i``."""
        if U.rows != U.cols or U.cols != self.lattice_rank:
            raise ValueError("transform must be square of size lattice_rank")
        new = [tuple(sum(U[i, j] * w[j] for j in range(U.cols)) for i in range(U.rows))
               for w in self.weights]
        return WeightSystem.create(self.lattice_rank, new, self.trivial_dim)

    def to_dict(self) -> dict:
        return {
            "lattice_rank": self.lattice_rank,
            "weights": [list(w) for w in self.weights],
            "trivial_dim": self.trivial_dim,
            "complexity": complexity(self),
            "effective": self.is_effective(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _as_int(x: Any, what: str) -> Fraction:
    if isinstance(x, bool):
        raise WeightSystemError(f"{what}: booleans are not numbers")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise WeightSystemError(f"{what}: cannot parse {x!r}") from exc
    if isinstance(x, float):
        if not x.is_integer():
            raise WeightSystemError(f"{what}: non-integral float {x!r}; pass a fraction string")
        return Fraction(int(x))
    raise WeightSystemError(f"{what}: expected a number, got {type(x).__name__}")


def clear_denominators(v: Sequence[Fraction]) -> tuple:
    """Multiply a rational vector by the lcm of its denominators."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    return tuple(int(x * den) for x in v)


def parse_weights(raw) -> WeightSystem:
    """Build a canonical :class:`WeightSystem` from a JSON document.

    `raw` may be a JSON string or an already-decoded dict with keys
    ``lattice_rank``, ``weights`` and ``trivial_dim``.  Rational entries
    (strings such as ``"1/2"``) are cleared per weight, which keeps the line.
    Serialized output (with ``complexity``/``effective``) parses back.
    """
    if isinstance(raw, (str, bytes)):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise WeightSystemError(f"malformed JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise WeightSystemError("weight system must be a JSON object")
    missing = {"lattice_rank", "weights"} - raw.keys()
    if missing:
        raise WeightSystemError(f"missing keys: {sorted(missing)}")
    k = raw["lattice_rank"]
    l = raw.get("trivial_dim", 0)
    if not isinstance(k, int) or isinstance(k, bool) or k < 0:
        raise WeightSystemError("lattice_rank must be an integer >= 0")
    if not isinstance(l, int) or isinstance(l, bool):
        raise WeightSystemError("trivial_dim must be an integer")
    if l < 0:
        raise WeightSystemError("negative trivial_dim")
    ws = raw["weights"]
    if not isinstance(ws, list):
        raise WeightSystemError("weights must be a list of integer vectors")
    vectors = []
    for n, w in enumerate(ws):
        if not isinstance(w, list):
            raise WeightSystemError(f"weight #{n} is not a list")
        if len(w) != k:
            raise WeightSystemError(
                f"inconsistent vector lengths: weight #{n} has length {len(w)}, lattice_rank is {k}"
            )
        vectors.append(clear_denominators([_as_int(x, f"weight #{n}") for x in w]))
    ws = WeightSystem.create(k, vectors, l)
    for key in ("complexity", "effective"):
        if key in raw:
            expect = complexity(ws) if key == "complexity" else ws.is_effective()
            if raw[key] != expect:
                raise WeightSystemError(f"stated {key}={raw[key]!r} disagrees with computed {expect!r}")
    return ws


def complexity(ws: WeightSystem) -> int:
    """``|alpha| - rank(alpha)``; independent of the trivial summand."""
    return ws.r - ws.rank()


@dataclass(frozen=True)
class EffectiveReport:
    original_rank: int
    effective_rank: int
    kernel_dim: int
    transform: IntMatrix  # unimodular U; the reduced weights are rows [:rank] of U @ W

    @property
    def changed(self) -> bool:
        return self.kernel_dim > 0


def effective_reduction(ws: WeightSystem) -> tuple:
    """Re-express a non-effective system in the saturation of its span.

    Returns ``(system, report)``; the system is unchanged when the weights
    already span ``Q^k``.
    """
    k = ws.lattice_rank
    rho = ws.rank()
    if rho == k:
        return ws, EffectiveReport(k, k, 0, IntMatrix.identity(k))
    snf = smith_normal_form(ws.matrix())
    UW = snf.U @ ws.matrix()
    reduced = [tuple(UW[i, j] for i in range(rho)) for j in range(ws.r)]
    log.debug("weights span a rank-%d sublattice of Z^%d; quotienting a %d-dimensional "
                "noneffective kernel", rho, k, k - rho)
    out = WeightSystem.create(rho, reduced, ws.trivial_dim)
    return out, EffectiveReport(k, rho, k - rho, snf.U)


def snf_canonical_form(ws: WeightSystem) -> tuple:
    """Invariant factors ``d_1 | ... | d_n`` of a complexity-zero system.

    These classify complexity-zero representations up to weak equivalence.
    """
    if not ws.is_effective():
        raise WeightSystemError("system is not effective; run effective_reduction first")
    c = complexity(ws)
    if c != 0:
        raise WeightSystemError(f"positive complexity {c}: no diagonal canonical form")
    return smith_normal_form(ws.matrix(), transforms=False).diagonal
