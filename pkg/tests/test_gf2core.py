from __future__ import annotations

import numpy as np
import pytest

from src.errors import DimensionError
from src.gf2core import BitVec, Gf2Basis, basis_insert, basis_of, contains, express, rank, spans_unit


def _rank_mod2(rows: np.ndarray) -> int:
    a = rows.copy() % 2
    r = 0
    for c in range(a.shape[1]):
        pivot = next((i for i in range(r, a.shape[0]) if a[i, c]), None)
        if pivot is None:
            continue
        a[[r, pivot]] = a[[pivot, r]]
        for i in range(a.shape[0]):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


class TestBitVec:
    def test_from_parts_and_str(self):
        v = BitVec.from_parts(5, [0, 2])
        assert v.bits == 0b101
        assert v.parts() == (0, 2)
        assert str(v) == "x_1+x_3"
        assert v.weight() == 2

    def test_zero_vector(self):
        z = BitVec.zero(4)
        assert z.is_zero()
        assert z.lead() == -1
        assert str(z) == "0"

    def test_lead_is_lowest_index(self):
        assert BitVec.from_parts(8, [5, 3, 7]).lead() == 3

    def test_xor(self):
        a = BitVec.from_parts(4, [0, 1])
        b = BitVec.from_parts(4, [1, 2])
        assert (a ^ b).parts() == (0, 2)

    def test_width_mismatch(self):
        with pytest.raises(DimensionError, match="width mismatch"):
            BitVec.unit(3, 0) ^ BitVec.unit(4, 0)

    def test_out_of_range_part(self):
        with pytest.raises(DimensionError, match="out of range"):
            BitVec.from_parts(3, [3])

    def test_bits_beyond_width(self):
        with pytest.raises(DimensionError):
            BitVec(3, 0b1000)


class TestBasis:
    def test_insert_reports_dependency(self):
        b = Gf2Basis.empty(4)
        b, ins = basis_insert(b, BitVec.from_parts(4, [0, 1]))
        assert ins
        b, ins = basis_insert(b, BitVec.from_parts(4, [1, 2]))
        assert ins
        b, ins = basis_insert(b, BitVec.from_parts(4, [0, 2]))
        assert not ins
        assert b.rank == 2

    def test_reduced_form_is_canonical(self):
        vs1 = [BitVec.from_parts(5, [0, 1]), BitVec.from_parts(5, [1, 2]), BitVec.unit(5, 4)]
        vs2 = [BitVec.from_parts(5, [0, 2]), BitVec.unit(5, 4), BitVec.from_parts(5, [0, 1])]
        assert basis_of(5, vs1) == basis_of(5, vs2)

    def test_leads_sorted_and_unique(self):
        b = basis_of(6, [BitVec.from_parts(6, [3, 4]), BitVec.from_parts(6, [0, 3]), BitVec.unit(6, 5)])
        leads = b.leads()
        assert list(leads) == sorted(set(leads))

    def test_spans_unit(self):
        b = basis_of(3, [BitVec.from_parts(3, [0, 1]), BitVec.unit(3, 1)])
        assert spans_unit(b, 0)
        assert spans_unit(b, 1)
        assert not spans_unit(b, 2)

    def test_spans_unit_out_of_range(self):
        with pytest.raises(DimensionError):
            spans_unit(Gf2Basis.empty(3), 3)

    def test_contains(self):
        b = basis_of(4, [BitVec.from_parts(4, [0, 1]), BitVec.from_parts(4, [2, 3])])
        assert contains(b, BitVec.from_parts(4, [0, 1, 2, 3]))
        assert not contains(b, BitVec.unit(4, 0))

    def test_rank_matches_numpy_elimination(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            rows = rng.integers(0, 2, size=(int(rng.integers(1, 9)), 10), dtype=np.uint8)
            vecs = [BitVec.from_parts(10, np.flatnonzero(r).tolist()) for r in rows]
            assert rank(vecs) == _rank_mod2(rows)

    def test_rank_counts_insertions_in_any_order(self):
        rng = np.random.default_rng(4)
        for _ in range(40):
            vecs = [BitVec(8, int(x)) for x in rng.integers(0, 1 << 8, size=7)]
            expected = rank(vecs)
            for _ in range(3):
                order = rng.permutation(len(vecs))
                basis, inserted = Gf2Basis.empty(8), 0
                for idx in order:
                    basis, added = basis_insert(basis, vecs[idx])
                    inserted += added
                assert inserted == basis.rank == expected

    def test_spans_unit_iff_rank_unchanged(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            vecs = [BitVec(7, int(x)) for x in rng.integers(0, 1 << 7, size=int(rng.integers(1, 6)))]
            b = basis_of(7, vecs)
            for i in range(7):
                assert spans_unit(b, i) == (rank(list(b.rows) + [BitVec.unit(7, i)]) == b.rank)

    def test_rank_empty(self):
        assert rank([]) == 0


class TestExpress:
    def test_finds_combination(self):
        vecs = [BitVec.from_parts(4, [0, 1]), BitVec.from_parts(4, [1, 2]), BitVec.unit(4, 2)]
        combo = express(vecs, BitVec.unit(4, 0))
        acc = BitVec.zero(4)
        for i in combo:
            acc = acc ^ vecs[i]
        assert acc == BitVec.unit(4, 0)

    def test_none_when_outside_span(self):
        vecs = [BitVec.from_parts(4, [0, 1])]
        assert express(vecs, BitVec.unit(4, 0)) is None

    def test_zero_target(self):
        assert express([BitVec.unit(3, 0)], BitVec.zero(3)) == []
