from __future__ import annotations

import json
import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_orbits import orbit_classifier as clf
from toric_orbits.orbit_classifier import (Charge, CircleQuotient, Kind, LeontiefType, RouteDisagreement,
                                           circle_classify, classify, classify_pseudomanifold,
                                           classify_structural, fixed_point_charge,
                                           general_position_relation, leontief_from_complex)
from toric_orbits.complexes import boundary_of_simplex, full_simplex, join_all
from toric_orbits.exact_linalg import kernel_basis
from toric_orbits.matroid import direct_sum
from toric_orbits.weights import WeightSystem, WeightSystemError

TRIANGLE = WeightSystem.create(2, [(1, 0), (0, 1), (1, 1)])
BASIS = WeightSystem.create(2, [(1, 0), (0, 1)])
U24 = WeightSystem.create(2, [(1, 0), (0, 1), (1, 1), (1, 2)])


def general_position(n):
    """n weights in Z^{n-1}: the basis and the all-ones vector."""
    k = n - 1
    basis = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    return WeightSystem.create(k, basis + [(1,) * k])


@st.composite
def weight_systems(draw, k_max=3, r_max=6, bound=2):
    k = draw(st.integers(1, k_max))
    vec = st.lists(st.integers(-bound, bound), min_size=k, max_size=k).filter(any)
    weights = draw(st.lists(vec, min_size=k, max_size=r_max))
    ws = WeightSystem.create(k, weights, draw(st.integers(0, 2)))
    return ws


class TestStructural:
    def test_general_position_triangle(self):
        v = classify_structural(TRIANGLE)
        assert v.kind is Kind.CLOSED_MANIFOLD and v.model_dim == 4
        assert v.model == "closed manifold ℝ⁴"
        assert v.leontief.signature == (0, (3,), 0)

    def test_standard_is_half_space(self):
        v = classify_structural(BASIS)
        assert v.kind is Kind.MANIFOLD_WITH_BOUNDARY and v.model_dim == 2 and v.boundary
        assert v.leontief.d == 2 and v.leontief.blocks == ()

    def test_uniform_matroid_is_not_a_manifold(self):
        v = classify_structural(U24)
        assert v.kind is Kind.NOT_MANIFOLD and v.leontief is None
        assert v.witness.facet_count >= 3
        assert "not even a homology manifold" in v.model

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_landmark_dimensions(self, n):
        v = classify(general_position(n))
        assert v.kind is Kind.CLOSED_MANIFOLD and v.model_dim == n + 1

    def test_trivial_representation(self):
        v = classify(WeightSystem.create(0, [], 3))
        assert v.kind is Kind.CLOSED_MANIFOLD and v.model_dim == 3

    def test_zero_weights_become_trivial_dimensions(self):
        v = classify(WeightSystem.create(2, [(1, 0), (0, 1), (1, 1), (0, 0)], 1))
        assert v.kind is Kind.CLOSED_MANIFOLD and v.model_dim == 4 + 3
        assert v.leontief.l == 3

    def test_assignment_labels_blocks(self):
        ws = WeightSystem.create(3, [(0, 1, 0), (1, 0, 0), (0, 0, 1), (0, 1, 1)], 2)
        lt = classify(ws).leontief
        assert lt.to_dict()["d"] == 1 and lt.blocks == (3,) and lt.l == 2
        assert lt.assignment == (1, 0, 1, 1)
        assert lt.members(0) == (1,)

    def test_non_effective_input_is_reduced(self, caplog):
        ws = WeightSystem.create(3, [(1, 0, 0), (0, 1, 0), (1, 1, 0)])
        with caplog.at_level(logging.WARNING):
            v = classify(ws)
        assert "not effective" in caplog.text
        assert v.kind is Kind.CLOSED_MANIFOLD and v.model_dim == 4


class TestPseudomanifold:
    def test_examples(self):
        assert classify_pseudomanifold(TRIANGLE).kind is Kind.CLOSED_MANIFOLD
        assert classify_pseudomanifold(BASIS).kind is Kind.MANIFOLD_WITH_BOUNDARY
        v = classify_pseudomanifold(U24)
        assert v.kind is Kind.NOT_MANIFOLD
        assert len(v.witness.ridge) == 1 and v.witness.facet_count == 3

    def test_witness_flat_is_closure(self):
        ws = WeightSystem.create(2, [(1, 0), (2, 0), (0, 1), (1, 1), (1, 2)])
        v = classify_pseudomanifold(ws)
        assert v.kind is Kind.NOT_MANIFOLD
        if v.witness.ridge in ((0,), (1,)):
            assert v.witness.flat == (0, 1)

    def test_certificate_from_join(self):
        K = join_all([boundary_of_simplex([0, 1, 2]), full_simplex([3]), boundary_of_simplex([4, 5])])
        lt = leontief_from_complex(K, 6, 1)
        assert lt.signature == (1, (2, 3), 1)
        assert lt.assignment == (2, 2, 2, 0, 1, 1)

    @given(weight_systems())
    @settings(max_examples=120, deadline=None)
    def test_routes_agree(self, ws):
        a, b = classify_structural(ws), classify_pseudomanifold(ws)
        assert (a.kind, a.model_dim) == (b.kind, b.model_dim)
        if a.leontief:
            assert a.leontief == b.leontief


class TestVerdictInvariants:
    @given(weight_systems())
    @settings(max_examples=80, deadline=None)
    def test_kind_matches_certificate(self, ws):
        v = classify(ws)
        if v.kind is Kind.CLOSED_MANIFOLD:
            assert v.leontief is not None and v.leontief.d == 0 and v.witness is None
        elif v.kind is Kind.MANIFOLD_WITH_BOUNDARY:
            assert v.leontief is not None and v.leontief.d >= 1
        else:
            assert v.witness is not None and v.leontief is None

    @given(weight_systems())
    @settings(max_examples=80, deadline=None)
    def test_dimension_accounting(self, ws):
        v = classify(ws)
        if v.kind is not Kind.NOT_MANIFOLD:
            lt = v.leontief
            assert lt.d + sum(lt.blocks) == ws.r or not ws.is_effective()
            assert v.model_dim == lt.l + lt.d + sum(n + 1 for n in lt.blocks)
        reduced = clf._prepare(ws)
        assert v.model_dim == reduced.real_dim - reduced.lattice_rank

    @given(weight_systems(k_max=2, r_max=4), weight_systems(k_max=2, r_max=4))
    @settings(max_examples=50, deadline=None)
    def test_product_law(self, a, b):
        if not (a.is_effective() and b.is_effective()):
            return
        va, vb, vs = classify(a), classify(b), classify(direct_sum(a, b))
        if Kind.NOT_MANIFOLD in (va.kind, vb.kind):
            assert vs.kind is Kind.NOT_MANIFOLD
            return
        la, lb, ls = va.leontief, vb.leontief, vs.leontief
        assert ls.d == la.d + lb.d
        assert sorted(ls.blocks) == sorted(la.blocks + lb.blocks)
        assert vs.model_dim == va.model_dim + vb.model_dim

    def test_json_schema(self):
        data = json.loads(classify(U24).to_json())
        assert set(data) == {"kind", "model_dim", "model", "boundary", "leontief", "witness"}
        assert set(data["witness"]) == {"ridge", "facet_count", "flat"}
        lt = json.loads(classify(TRIANGLE).to_json())["leontief"]
        assert lt == {"d": 0, "blocks": [3], "l": 0, "assignment": {"0": 1, "1": 1, "2": 1}}

    def test_disagreement_is_raised(self, monkeypatch):
        wrong = clf.OrbitVerdict(Kind.NOT_MANIFOLD, 4, None, None, "pseudomanifold")
        monkeypatch.setattr(clf, "classify_pseudomanifold", lambda ws: wrong)
        with pytest.raises(RouteDisagreement, match="routes disagree"):
            clf.classify(TRIANGLE)

    def test_leontief_type_rejects_partial_assignment(self):
        with pytest.raises(ValueError):
            LeontiefType.from_parts([0], [], 0, 2)


class TestComplexityOneSplitting:
    @given(st.integers(2, 5).flatmap(lambda n: st.tuples(
        st.just(n), st.lists(st.lists(st.integers(-2, 2), min_size=n - 1, max_size=n - 1).filter(any),
                             min_size=n, max_size=n))))
    @settings(max_examples=100, deadline=None)
    def test_one_block_on_relation_support(self, data):
        n, weights = data
        ws = WeightSystem.create(n - 1, weights)
        if ws.rank() != n - 1:
            return
        (rel,) = kernel_basis(ws.matrix())
        support = tuple(i for i, c in enumerate(rel) if c)
        lt = classify(ws).leontief
        assert lt is not None
        assert lt.s == 1 and lt.members(1) == support
        assert lt.members(0) == tuple(i for i in range(n) if i not in support)
        sub = ws.subsystem(support)
        gp = general_position_relation(WeightSystem.create(
            sub.lattice_rank, sub.weights)) if len(support) == n else None
        if gp is not None:
            assert all(c > 0 for c in gp.coefficients)


class TestCircle:
    @pytest.mark.parametrize("exps, expected", [
        ((5,), CircleQuotient.HALF_LINE),
        ((1, -1), CircleQuotient.R3),
        ((1, 1, 2), CircleQuotient.NOT_HOMOLOGY_MANIFOLD),
    ])
    def test_examples(self, exps, expected):
        assert circle_classify(exps) is expected

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            circle_classify([1, 0])
        with pytest.raises(ValueError):
            circle_classify([])

    @given(st.lists(st.integers(-5, 5).filter(bool), min_size=1, max_size=5))
    @settings(max_examples=150, deadline=None)
    def test_agrees_with_classifier(self, exps):
        kind = classify_structural(WeightSystem.create(1, [(e,) for e in exps])).kind
        expected = {CircleQuotient.HALF_LINE: Kind.MANIFOLD_WITH_BOUNDARY,
                    CircleQuotient.R3: Kind.CLOSED_MANIFOLD,
                    CircleQuotient.NOT_HOMOLOGY_MANIFOLD: Kind.NOT_MANIFOLD}
        assert kind is expected[circle_classify(exps)]


class TestCharge:
    def test_examples(self):
        assert fixed_point_charge(1, 1) is Charge.PLUS
        assert fixed_point_charge(-1, -1) is Charge.PLUS
        assert fixed_point_charge(-1, 1) is Charge.MINUS
        assert fixed_point_charge(1, -1) is Charge.MINUS
        assert fixed_point_charge(2, 1) is Charge.DISCONNECTED_STABILIZERS

    def test_zero(self):
        with pytest.raises(ValueError):
            fixed_point_charge(0, 1)


class TestRelation:
    def test_triangle(self):
        rel = general_position_relation(TRIANGLE)
        assert rel.coefficients == (1, 1, 1) and rel.flipped == (2,)

    def test_circle_pair(self):
        rel = general_position_relation(WeightSystem.create(1, [(1,), (1,)]))
        assert rel.coefficients == (1, 1)

    def test_rejects(self):
        with pytest.raises(WeightSystemError, match="complexity 0"):
            general_position_relation(BASIS)
        with pytest.raises(WeightSystemError, match="general position"):
            general_position_relation(WeightSystem.create(2, [(1, 0), (2, 0), (0, 1)]))

    def test_relation_annihilates(self):
        ws = WeightSystem.create(2, [(1, 0), (0, 1), (2, 3)])
        rel = general_position_relation(ws)
        signs = [-1 if i in rel.flipped else 1 for i in range(3)]
        total = [sum(s * c * w[j] for s, c, w in zip(signs, rel.coefficients, ws.weights)) for j in range(2)]
        assert total == [0, 0] and rel.coefficients == (2, 3, 1)
