from __future__ import annotations

from fractions import Fraction
from math import comb, gcd

import pytest

from src.arraycode import restrict_columns, singleton_census
from src.bounds import upper_g_s, upper_g_st
from src.constructions import (
    best_construction,
    construction1,
    construction2,
    describe_types,
    general_construction,
    general_construction_rational,
    get_construction,
)
from src.constructions.construction1 import construction1_counts
from src.constructions.general import general_counts
from src.constructions.rational import rational_counts
from src.constructions.typed import (
    balance_eta,
    bipartite_graphs,
    multi_type_shapes,
    part_counts,
)
from src.designs import make_steiner
from src.errors import CapacityError, ParameterError, UnsupportedParameters
from src.matching import is_regular, max_matching
from src.verifier import check_certificate, exact_k


def _assert_sound(out):
    assert out.certificate.claimed_k == out.predicted_k
    assert out.code.m == out.predicted_m
    assert check_certificate(out.code, out.certificate) == (True, None)
    assert out.rate < upper_g_s(out.code.s)


class TestConstruction1:
    @pytest.mark.parametrize("t,d,m,k", [(2, 1, 9, 7), (2, 2, 10, 7), (3, 1, 18, 15), (5, 2, 175, 145)])
    def test_counts(self, t, d, m, k):
        _theta, pm, pk = construction1_counts(t, d)
        assert (pm, pk) == (m, k)

    @pytest.mark.parametrize("t,d", [(t, d) for t in (2, 3, 4) for d in range(1, t + 1)])
    def test_meets_upper_bound(self, t, d):
        out = construction1(t, d)
        _assert_sound(out)
        assert out.rate == upper_g_st(t, d)
        assert out.predicted_k == out.predicted_m - comb(t + d - 1, t) * (d * t // gcd(d, t)) // d

    @pytest.mark.parametrize("t,d", [(2, 1), (2, 2)])
    def test_exact_k_equals_prediction(self, t, d):
        out = construction1(t, d)
        assert out.predicted_m <= 14
        report = exact_k(out.code)
        assert report.exact
        assert report.k == out.predicted_k

    @pytest.mark.parametrize("t,rate", [(2, Fraction(7, 10)), (3, Fraction(10, 14)), (4, Fraction(13, 18))])
    def test_s_equals_two(self, t, rate):
        assert construction1(t, t).rate == rate == Fraction(3 * t + 1, 4 * t + 2)

    def test_types(self, c1_small):
        assert describe_types(c1_small) == [
            {"type": "A", "singletons": 2, "sum_size": 0, "eta": 2, "servers": 6},
            {"type": "B", "singletons": 1, "sum_size": 2, "eta": 1, "servers": 3},
        ]

    def test_pure_singleton_census(self, c1_small):
        type_a = restrict_columns(c1_small.code, range(6))
        assert sum(singleton_census(type_a)) == c1_small.code.t * type_a.m

    def test_graphs_balanced(self, c1_small):
        for i in range(c1_small.code.p):
            for g, left, right in bipartite_graphs(3, c1_small.groups, i):
                assert len(left) == len(right) == 2
                assert is_regular(g)[0]

    @pytest.mark.parametrize("t,d", [(1, 1), (2, 3), (3, 0)])
    def test_domain(self, t, d):
        with pytest.raises(ParameterError, match="1 <= d <= t"):
            construction1(t, d)

    def test_capacity(self):
        with pytest.raises(CapacityError, match="m=175"):
            construction1(5, 2, max_servers=100)

    def test_family_metadata(self, c1_small):
        fam = c1_small.code.family
        assert fam["name"] == "c1"
        assert fam["s"] == "3/2"
        assert fam["eta"] == [2, 1]


class TestConstruction2:
    def test_fano(self, fano):
        out = construction2(5, 2, fano)
        _assert_sound(out)
        assert out.predicted_m == 35
        assert out.predicted_k == 29
        assert out.rate == Fraction(29, 35) == upper_g_st(5, 2)

    def test_fewer_servers_than_construction1(self, fano):
        c2 = construction2(5, 2, fano)
        c1 = construction1(5, 2)
        assert c1.predicted_m == 21 * 5 + 35 * 2 == 175
        assert c2.predicted_m < c1.predicted_m
        assert c2.rate == c1.rate

    def test_generated_design(self):
        out = construction2(5, 2)
        assert out.predicted_m == 35
        assert out.code.family["blocks"] == 7

    def test_graphs_regular_of_degree_four(self, fano):
        out = construction2(5, 2, fano)
        for i in range(7):
            [(g, left, right)] = bipartite_graphs(7, out.groups, i)
            assert is_regular(g) == (True, 4, 4)
            assert max_matching(g).is_perfect(g)

    def test_pairs_design(self, c2_small):
        _assert_sound(c2_small)
        assert (c2_small.predicted_m, c2_small.predicted_k) == (6, 5)
        report = exact_k(c2_small.code)
        assert report.k == 5
        assert c2_small.rate == construction1(3, 1).rate == Fraction(5, 6)

    def test_design_mismatch(self):
        with pytest.raises(ParameterError, match="does not match"):
            construction2(5, 2, make_steiner(2, 9))

    def test_no_design(self):
        with pytest.raises(UnsupportedParameters):
            construction2(2, 2)


class TestMultiType:
    def test_shapes(self):
        assert multi_type_shapes(6, 2) == [(2, 0), (1, 3), (1, 5)]
        assert multi_type_shapes(7, 3) == [(3, 0), (2, 4), (2, 5)]
        assert multi_type_shapes(4, 2) == [(2, 0), (1, 3)]

    @pytest.mark.parametrize("p,t,eta", [(6, 2, [3, 1, 4]), (9, 3, [10, 1, 15]), (12, 4, [35, 1, 56]), (7, 3, [3, 1, 1])])
    def test_eta(self, p, t, eta):
        assert balance_eta(p, multi_type_shapes(p, t)) == eta

    @pytest.mark.parametrize("s", [2, 3, 4])
    @pytest.mark.parametrize("t", [2, 3, 4])
    def test_sides_balance(self, s, t):
        p = s * t
        shapes = multi_type_shapes(p, t)
        eta = balance_eta(p, shapes)
        counts = [part_counts(p, sh) for sh in shapes]
        for r in range(len(shapes) - 1):
            assert eta[r] * counts[r]["none"] == eta[r + 1] * counts[r + 1]["sum"]

    def test_s3_t2(self):
        out = general_construction(3, 2)
        _assert_sound(out)
        assert (out.predicted_m, out.predicted_k) == (129, 79)
        assert out.rate == Fraction(79, 129)
        assert out.code.family["beta"] == 29
        assert out.code.family["gamma"] == 50
        for i in range(6):
            graphs = bipartite_graphs(6, out.groups, i)
            assert len(graphs) == 2
            for g, _l, _r in graphs:
                assert is_regular(g)[0]
                assert max_matching(g).is_perfect(g)

    def test_s2_matches_two_type(self):
        out = general_construction(2, 2)
        assert out.rate == Fraction(7, 10)
        assert out.predicted_m == construction1(2, 2).predicted_m

    def test_s3_t3(self):
        out = general_construction(3, 3)
        _assert_sound(out)
        assert (out.predicted_m, out.predicted_k) == (2640, 1660)
        assert out.rate == Fraction(83, 132)

    def test_s4_t2(self):
        out = general_construction(4, 2)
        _assert_sound(out)
        assert out.predicted_m == 2124

    def test_counts_only_for_larger_t(self):
        eta, m, gamma, k = general_counts(3, 4)
        assert eta == [35, 1, 56]
        assert (m, gamma, k) == (57365, 20790, 36575)

    def test_domain(self):
        with pytest.raises(ParameterError):
            general_construction(1, 3)
        with pytest.raises(ParameterError):
            general_construction(3, 1)


class TestRational:
    def test_seven_thirds(self):
        out = general_construction_rational(7, 3, 3)
        _assert_sound(out)
        assert (out.predicted_m, out.predicted_k) == (231, 156)
        assert out.rate == Fraction(52, 77)
        assert out.rate > Fraction(23, 35)
        assert [row["eta"] for row in describe_types(out)] == [3, 1, 1]
        assert out.code.family["name"] == "general-rational"

    def test_seven_thirds_counts_at_six_cells(self):
        _eta, m, _gamma, k = rational_counts(7, 3, 6)
        assert Fraction(k, m) == Fraction(733, 1057)

    def test_below_two_uses_two_type(self):
        out = general_construction_rational(3, 2, 2)
        assert out.code.family["name"] == "c1"
        assert out.rate == Fraction(7, 9)

    def test_non_integral_p(self):
        with pytest.raises(UnsupportedParameters, match="non-integral"):
            general_construction_rational(7, 3, 4)

    def test_integer_rejected(self):
        with pytest.raises(ParameterError, match="non-integer"):
            general_construction_rational(4, 2, 2)


class TestRegistry:
    def test_lookup(self):
        assert get_construction("c2").name == "c2"
        with pytest.raises(ParameterError, match="unknown family"):
            get_construction("nope")

    @pytest.mark.parametrize(
        "s,t,name",
        [
            (Fraction(7, 5), 5, "c2"),
            (Fraction(2), 3, "c1"),
            (Fraction(3), 2, "general"),
            (Fraction(7, 3), 3, "general-rational"),
            (Fraction(5, 2), 3, None),
        ],
    )
    def test_best(self, s, t, name):
        assert best_construction(s, t) == name

    def test_build_through_registry(self):
        out = get_construction("general-rational").build(Fraction(7, 3), 3)
        assert out.rate == Fraction(52, 77)
