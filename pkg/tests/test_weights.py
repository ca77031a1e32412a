from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_orbits.sweep import random_unimodular
from toric_orbits.weights import (WeightSystem, WeightSystemError, complexity, effective_reduction,
                                  parse_weights, snf_canonical_form)


def ws(k, weights, l=0):
    return WeightSystem.create(k, weights, l)


@st.composite
def weight_systems(draw, k_max=3, r_max=5, bound=3):
    k = draw(st.integers(1, k_max))
    vec = st.lists(st.integers(-bound, bound), min_size=k, max_size=k)
    weights = draw(st.lists(vec, min_size=0, max_size=r_max))
    return WeightSystem.create(k, weights, draw(st.integers(0, 3)))


class TestParse:
    def test_sign_normalization(self):
        got = parse_weights({"lattice_rank": 2, "weights": [[1, 0], [0, 1], [-1, -1]], "trivial_dim": 0})
        assert got.weights == ((1, 0), (0, 1), (1, 1))
        assert got.trivial_dim == 0

    def test_zero_weight_folds_into_trivial_part(self):
        got = parse_weights('{"lattice_rank": 1, "weights": [[0], [2]], "trivial_dim": 1}')
        assert got.weights == ((2,),)
        assert got.trivial_dim == 3

    def test_inconsistent_lengths(self):
        with pytest.raises(WeightSystemError, match="inconsistent vector lengths"):
            parse_weights({"lattice_rank": 2, "weights": [[1, 0], [0, 1, 1]], "trivial_dim": 0})

    @pytest.mark.parametrize("raw", [
        "{not json",
        '{"weights": []}',
        '{"lattice_rank": 1, "weights": [[1]], "trivial_dim": -1}',
        '{"lattice_rank": 1, "weights": [["x"]]}',
        '{"lattice_rank": 1, "weights": [[0.5]]}',
        '{"lattice_rank": 1, "weights": [[true]]}',
        '[1, 2]',
        '{"lattice_rank": 1, "weights": [[1]], "complexity": 3}',
    ])
    def test_rejects(self, raw):
        with pytest.raises(WeightSystemError):
            parse_weights(raw)

    def test_rational_entries_are_cleared(self):
        got = parse_weights({"lattice_rank": 2, "weights": [["1/2", "1/3"]]})
        assert got.weights == ((3, 2),)

    def test_magnitudes_kept(self):
        got = parse_weights({"lattice_rank": 1, "weights": [[-4]]})
        assert got.weights == ((4,),) and got.primitive_flags == (False,)

    @given(weight_systems())
    @settings(max_examples=60, deadline=None)
    def test_round_trip(self, w):
        assert parse_weights(w.to_json()) == w
        assert parse_weights(json.loads(w.to_json())) == w

    def test_direct_construction_validates(self):
        with pytest.raises(WeightSystemError):
            WeightSystem(1, ((-1,),), 0)
        with pytest.raises(WeightSystemError):
            WeightSystem(1, ((0,),), 0)


class TestComplexity:
    @pytest.mark.parametrize("k, weights, expected", [
        (2, [[1, 0], [0, 1], [1, 1]], 1),
        (1, [[1], [1], [1]], 2),
        (2, [[1, 0], [0, 1]], 0),
    ])
    def test_examples(self, k, weights, expected):
        assert complexity(ws(k, weights)) == expected

    @given(weight_systems(), st.integers(0, 2 ** 32))
    @settings(max_examples=60, deadline=None)
    def test_unimodular_invariance(self, w, seed):
        U = random_unimodular(random.Random(seed), w.lattice_rank)
        assert complexity(w.transform(U)) == complexity(w)


class TestEffectiveReduction:
    def test_collinear_pair(self):
        out, report = effective_reduction(ws(2, [[1, 0], [2, 0]]))
        assert out.lattice_rank == 1
        assert sorted(out.weights) == [(1,), (2,)]
        assert report.kernel_dim == 1 and report.changed

    def test_already_effective(self):
        w = ws(2, [[1, 0], [0, 1]])
        out, report = effective_reduction(w)
        assert out == w and not report.changed

    def test_pure_trivial(self):
        w = ws(0, [], 3)
        out, report = effective_reduction(w)
        assert out == w and report.kernel_dim == 0

    @given(weight_systems())
    @settings(max_examples=60, deadline=None)
    def test_preserves_complexity_and_trivial_part(self, w):
        out, report = effective_reduction(w)
        assert out.is_effective()
        assert complexity(out) == complexity(w)
        assert out.trivial_dim == w.trivial_dim
        assert report.effective_rank == w.rank()


class TestSnfCanonicalForm:
    def test_standard(self):
        assert snf_canonical_form(ws(2, [[1, 0], [0, 1]])) == (1, 1)

    def test_diag(self):
        assert snf_canonical_form(ws(2, [[2, 0], [0, 3]])) == (1, 6)

    def test_positive_complexity(self):
        with pytest.raises(WeightSystemError, match="positive complexity"):
            snf_canonical_form(ws(2, [[1, 0], [0, 1], [1, 1]]))

    def test_non_effective(self):
        with pytest.raises(WeightSystemError):
            snf_canonical_form(ws(2, [[1, 0]]))

    @given(st.integers(0, 2 ** 32))
    @settings(max_examples=40, deadline=None)
    def test_invariant_under_coordinates_and_order(self, seed):
        rng = random.Random(seed)
        k = rng.randint(1, 4)
        while True:
            w = ws(k, [[rng.randint(-4, 4) for _ in range(k)] for _ in range(k)])
            if w.r == k and w.is_effective():
                break
        U = random_unimodular(rng, k)
        order = list(range(k))
        rng.shuffle(order)
        assert snf_canonical_form(w.transform(U).subsystem(order)) == snf_canonical_form(w)
