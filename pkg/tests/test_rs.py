"""Colouring construction, certification, and padded-instance sampling."""

from __future__ import annotations

import itertools
from fractions import Fraction
from types import SimpleNamespace

import pytest

from streammatch.graph import Matching, is_maximal, validate_matching
from streammatch.algorithms import greedy
from streammatch.oracle import maximum_matching_size
from streammatch.rs import (
    ColouringParams,
    RSInstance,
    RSMatching,
    build_family,
    build_matching_pair,
    build_rs_instance,
    certify_rs,
    colour_vertex,
    gen_lambda,
    nearest_valid_params,
    rank_vector,
    unrank_vector,
)
from streammatch.stream import open_stream

DESK = ColouringParams(m=3, k=1)


@pytest.fixture(scope="module")
def certified_desk():
    inst = build_rs_instance(DESK)
    certify_rs(inst)
    return inst


class TestParams:
    def test_desk_scale_derived_values(self):
        assert DESK.delta == Fraction(2)
        assert DESK.w == 4
        assert DESK.shift == 2
        assert DESK.coord_base == 9
        assert DESK.n_side == 729
        assert DESK.family_threshold() == 0

    def test_other_lattice_points(self):
        assert ColouringParams(6, 2).family_threshold() == 1
        assert ColouringParams(9, 1).delta == Fraction(2, 3)
        assert ColouringParams(9, 1).family_threshold() == 0

    @pytest.mark.parametrize("m,k", [(4, 1), (3, 2), (3, 0), (0, 1), (9, 2), (-3, 1)])
    def test_invalid_lattice_rejected(self, m, k):
        with pytest.raises(ValueError, match="nearest valid"):
            ColouringParams(m, k)

    def test_nearest_valid_list(self):
        assert nearest_valid_params(8) == [
            (3, 1), (6, 1), (6, 2), (9, 1), (9, 3), (12, 1), (12, 2), (12, 4),
        ]


class TestColouring:
    def test_strip_layout(self):
        # period 4 at desk scale: red, white, blue, white
        assert [DESK.colour_of_sum(s) for s in range(8)] == [
            "red", "white", "blue", "white"] * 2

    def test_known_vertices(self):
        assert colour_vertex(DESK, (0, 0, 0), {0}) == "red"
        assert colour_vertex(DESK, (1, 0, 0), {0}) == "white"
        assert colour_vertex(DESK, (1, 0, 0), {1}) == "red"
        assert colour_vertex(DESK, (2, 5, 7), {0}) == "blue"

    def test_exact_frequencies(self):
        counts = {"red": 0, "white": 0, "blue": 0}
        for v in itertools.product(range(9), repeat=3):
            counts[colour_vertex(DESK, v, {1})] += 1
        assert counts == {"red": 243, "blue": 162, "white": 324}
        # asymptotically each of red/blue fills 1/(2 + delta) of a side
        asym = 1.0 / (2 + float(DESK.delta))
        assert abs(counts["red"] / 729 - asym) <= 0.1
        assert abs(counts["blue"] / 729 - asym) <= 0.1

    def test_validation(self):
        with pytest.raises(ValueError):
            colour_vertex(DESK, (0, 0, 0), {0, 1})
        with pytest.raises(ValueError):
            colour_vertex(DESK, (0, 0, 0), {5})
        with pytest.raises(ValueError):
            colour_vertex(DESK, (0, 0), {0})
        with pytest.raises(ValueError):
            colour_vertex(DESK, (0, 0, 9), {0})

    def test_rank_round_trip(self):
        assert rank_vector(DESK, (0, 0, 1)) == 1
        assert rank_vector(DESK, (1, 0, 0)) == 81
        for v in [(0, 0, 0), (8, 8, 8), (3, 7, 2), (5, 0, 6)]:
            assert unrank_vector(DESK, rank_vector(DESK, v)) == v
        for r in (0, 1, 100, 728):
            assert rank_vector(DESK, unrank_vector(DESK, r)) == r


class TestMatchingPair:
    def test_desk_sizes(self):
        m_i, m_i_prime = build_matching_pair(DESK, {0})
        assert len(m_i) == len(m_i_prime) == 36
        assert m_i_prime == sorted((b, a) for a, b in m_i)

    def test_endpoint_colours_and_eligibility(self):
        m_i, _ = build_matching_pair(DESK, {1})
        for blue_rank, red_rank in m_i:
            blue_v = unrank_vector(DESK, blue_rank)
            red_v = unrank_vector(DESK, red_rank)
            assert colour_vertex(DESK, blue_v, {1}) == "blue"
            assert colour_vertex(DESK, red_v, {1}) == "red"
            assert all(c > DESK.shift for c in blue_v)
            # partner differs only on the index coordinate, by the shift
            assert red_v[1] == blue_v[1] - DESK.shift
            assert red_v[0] == blue_v[0] and red_v[2] == blue_v[2]

    def test_pair_union_is_one_matching(self):
        m_i, m_i_prime = build_matching_pair(DESK, {2})
        union = Matching(list(m_i) + list(m_i_prime))  # must not raise
        assert len(union) == 72

    def test_materialization_cap(self):
        big = ColouringParams(6, 1)
        with pytest.raises(ValueError, match="desk scale"):
            build_matching_pair(big, {0})

    def test_bad_index_set(self):
        with pytest.raises(ValueError):
            build_matching_pair(DESK, {0, 1})
        with pytest.raises(ValueError):
            build_matching_pair(DESK, {7})


class TestFamily:
    def test_desk_family(self):
        assert build_family(DESK) == [frozenset({0}), frozenset({1}), frozenset({2})]

    def test_threshold_zero_forces_disjoint(self):
        fam = build_family(ColouringParams(9, 1))
        for x, y in itertools.combinations(fam, 2):
            assert not x & y

    def test_k_equals_m_collapses_to_one_set(self):
        # degenerate all-coordinates index set; only the combination
        # itself exists, whatever the intersection bound
        stub = SimpleNamespace(m=3, k=3)
        assert build_family(stub, max_intersection=1) == [frozenset({0, 1, 2})]

    def test_explicit_bound_widens_family(self):
        params = ColouringParams(6, 2)
        strict = build_family(params, max_intersection=0)
        loose = build_family(params, max_intersection=1)
        assert len(strict) == 3  # {0,1},{2,3},{4,5}
        assert len(loose) > len(strict)


class TestCertify:
    def test_desk_instance_passes(self, certified_desk):
        cert = certified_desk.certificate
        assert cert is not None and cert.ok
        assert cert.edge_disjoint and cert.matchings_valid
        assert cert.induced_violations == ()
        assert [s for _, s in cert.matching_sizes] == [36] * 6
        assert [s for _, s, _ in cert.pair_union_sizes] == [72, 72, 72]
        for _, _, fraction in cert.pair_union_sizes:
            assert abs(fraction - 72 / 729) < 1e-12
        assert cert.n_side == 729

    def test_instance_shape(self, certified_desk):
        assert certified_desk.family == (frozenset({0}), frozenset({1}), frozenset({2}))
        labels = [mm.label for mm in certified_desk.matchings]
        assert labels == ["M[0]", "M[0]'", "M[1]", "M[1]'", "M[2]", "M[2]'"]
        assert certified_desk.num_edges() == 216
        g = certified_desk.to_graph()
        assert g.num_edges == 216
        assert (g.n_a, g.n_b) == (729, 729)

    def test_to_text_mentions_verdicts(self, certified_desk):
        text = certified_desk.certificate.to_text()
        assert "certificate pass" in text
        assert "edge_disjoint pass" in text
        assert "near_perfect" in text

    def test_single_matching_trivially_induced(self):
        m_i, _ = build_matching_pair(DESK, {0})
        inst = RSInstance(DESK, (frozenset({0}),),
                          (RSMatching(frozenset({0}), False, tuple(m_i)),))
        cert = certify_rs(inst)
        assert cert.ok

    def test_intruding_edge_reported(self, certified_desk):
        holder = certified_desk.matchings[0]
        (a1, _), (_, b2) = holder.edges[0], holder.edges[1]
        intruder = RSMatching(frozenset({1}), False, ((a1, b2),))
        broken = RSInstance(DESK, certified_desk.family,
                            (holder, intruder))
        cert = certify_rs(broken)
        assert not cert.ok
        assert cert.edge_disjoint and cert.matchings_valid
        assert (holder.label, intruder.label, 1) in cert.induced_violations
        assert "FAIL" in cert.to_text()

    def test_duplicate_edge_breaks_disjointness(self, certified_desk):
        mm = certified_desk.matchings[0]
        dup = RSMatching(frozenset({1}), False, mm.edges[:1])
        cert = certify_rs(RSInstance(DESK, certified_desk.family, (mm, dup)))
        assert not cert.edge_disjoint
        assert not cert.ok

    def test_invalid_matching_flagged_without_throwing(self, certified_desk):
        bad = RSMatching(frozenset({1}), False, ((0, 0), (0, 1)))
        cert = certify_rs(RSInstance(DESK, certified_desk.family,
                                     (certified_desk.matchings[0], bad)))
        assert not cert.matchings_valid
        assert not cert.ok


class TestGenLambda:
    def test_requires_certification(self):
        inst = build_rs_instance(DESK)
        with pytest.raises(ValueError, match="not certified"):
            gen_lambda(inst)

    def test_refuses_failed_certificate(self, certified_desk):
        mm = certified_desk.matchings[0]
        dup = RSMatching(frozenset({1}), False, mm.edges[:1])
        broken = RSInstance(DESK, certified_desk.family, (mm, dup))
        certify_rs(broken)
        with pytest.raises(ValueError, match="refusing"):
            gen_lambda(broken)

    def test_default_subsample_clamps_to_zero(self, certified_desk):
        # (1/2 - 2*delta) is negative at desk scale
        inst = gen_lambda(certified_desk, seed=0)
        assert inst.subsample_size == 0
        assert inst.alice_edges == ()
        assert inst.pad_a == inst.pad_b == 693
        assert inst.mu_witness == 1386
        assert inst.mu == 1386

    def test_override_subsample_size(self, certified_desk):
        inst = gen_lambda(certified_desk, seed=1, subsample_size=18)
        assert inst.subsample_size == 18
        assert len(inst.alice_edges) == 18 * 6
        assert inst.mu_witness == 18 + 693 + 693
        assert inst.mu is not None and inst.mu >= inst.mu_witness
        # each matching contributed exactly the common size
        for mm in certified_desk.matchings:
            own = set(mm.edges) & set(inst.alice_edges)
            assert len(own) == 18

    def test_override_clamps_to_smallest_matching(self, certified_desk):
        inst = gen_lambda(certified_desk, seed=2, subsample_size=50)
        assert inst.subsample_size == 36
        inst = gen_lambda(certified_desk, seed=2, subsample_size=-4)
        assert inst.subsample_size == 0

    def test_pads_attach_to_uncovered_vertices(self, certified_desk):
        inst = gen_lambda(certified_desk, seed=3, subsample_size=12)
        special = certified_desk.matchings[inst.special_index]
        covered_a = {a for a, _ in special.edges}
        covered_b = {b for _, b in special.edges}
        n = certified_desk.n_side
        x_edges = [(a, b) for a, b in inst.bob_edges if a >= n]
        y_edges = [(a, b) for a, b in inst.bob_edges if b >= n]
        assert len(x_edges) == n - len(special.edges)
        assert len(y_edges) == n - len(special.edges)
        assert {b for _, b in x_edges} == set(range(n)) - covered_b
        assert {a for a, _ in y_edges} == set(range(n)) - covered_a
        # pads are perfect matchings on their own vertices
        Matching(x_edges)
        Matching(y_edges)

    def test_stream_order_alice_then_bob(self, certified_desk):
        inst = gen_lambda(certified_desk, seed=4, subsample_size=10)
        edges = inst.graph.edge_list()
        na = len(inst.alice_edges)
        assert tuple(edges[:na]) == inst.alice_edges
        assert tuple(edges[na:]) == inst.bob_edges

    def test_deterministic_per_seed(self, certified_desk):
        a = gen_lambda(certified_desk, seed=5, subsample_size=20)
        b = gen_lambda(certified_desk, seed=5, subsample_size=20)
        c = gen_lambda(certified_desk, seed=6, subsample_size=20)
        assert a.alice_edges == b.alice_edges
        assert a.special_index == b.special_index
        assert a.graph == b.graph
        assert (a.alice_edges, a.special_index) != (c.alice_edges, c.special_index)

    def test_single_matching_forces_special(self):
        m_i, _ = build_matching_pair(DESK, {0})
        inst = RSInstance(DESK, (frozenset({0}),),
                          (RSMatching(frozenset({0}), False, tuple(m_i)),))
        certify_rs(inst)
        lam = gen_lambda(inst, seed=7, subsample_size=9)
        assert lam.special_index == 0
        assert lam.mu is not None and lam.mu >= lam.mu_witness

    def test_skip_oracle_below_cap(self, certified_desk):
        inst = gen_lambda(certified_desk, seed=8, subsample_size=5, oracle_cap=0)
        assert inst.mu is None
        assert inst.mu_witness == 5 + 693 + 693

    def test_witness_never_exceeds_oracle(self, certified_desk):
        for seed in range(5):
            inst = gen_lambda(certified_desk, seed=seed, subsample_size=30)
            assert inst.mu is not None
            assert inst.mu >= inst.mu_witness


class TestGenLambdaPlus:
    def test_overlay_perfect_maximal_and_first(self, certified_desk):
        inst = gen_lambda(certified_desk, plus=True, seed=0, subsample_size=18)
        assert inst.overlay is not None
        assert len(inst.overlay) == 729
        assert is_maximal(inst.graph, inst.overlay)
        head = inst.graph.edge_list()[:729]
        assert head == list(inst.overlay.sorted_edges())

    def test_greedy_recovers_overlay(self, certified_desk):
        for seed in range(3):
            inst = gen_lambda(certified_desk, plus=True, seed=seed, subsample_size=18)
            m = greedy(open_stream(inst.graph))
            assert m == inst.overlay

    def test_designated_pair_left_out_of_alice(self, certified_desk):
        inst = gen_lambda(certified_desk, plus=True, seed=1,
                          subsample_size=36, designated=1)
        left_out = {mm.label for mm in certified_desk.matchings
                    if mm.index_set == frozenset({1})}
        assert left_out == {"M[1]", "M[1]'"}
        alice = set(inst.alice_edges)
        for mm in certified_desk.matchings:
            overlap = alice & set(mm.edges)
            if mm.index_set == frozenset({1}):
                assert not overlap
            else:
                assert len(overlap) == 36

    def test_mu_covers_perfect_overlay(self, certified_desk):
        inst = gen_lambda(certified_desk, plus=True, seed=2, subsample_size=18)
        assert inst.mu is not None and inst.mu >= 729
        assert inst.mu >= inst.mu_witness
        assert maximum_matching_size(inst.graph) == inst.mu

    def test_bad_designated_index(self, certified_desk):
        with pytest.raises(ValueError, match="designated"):
            gen_lambda(certified_desk, plus=True, designated=5)

    def test_graph_edges_validate(self, certified_desk):
        inst = gen_lambda(certified_desk, plus=True, seed=3, subsample_size=18)
        assert validate_matching(inst.graph, inst.overlay)
