from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from src.arraycode import (
    EXAMPLE_PATH,
    code_from_parts,
    code_stats,
    column_span,
    load_code,
    normalize_singletons,
    render_array,
    restrict_columns,
    save_code,
    singleton_census,
    singleton_upper_k,
)
from src.errors import DimensionError, FormatError
from src.gf2core import contains, spans_unit


class TestBundledExample:
    def test_shape(self, paper_code):
        assert (paper_code.p, paper_code.t, paper_code.m) == (12, 7, 4)
        assert paper_code.s == Fraction(12, 7)

    def test_bundled_file_matches(self, paper_code):
        with open(EXAMPLE_PATH, "rb") as f:
            assert load_code(f.read()) == paper_code

    def test_sum_cells(self, paper_code):
        assert str(paper_code.cell(6, 0)) == "x_10+x_11+x_12"
        assert str(paper_code.cell(2, 2)) == "x_4+x_5+x_6"
        assert str(paper_code.cell(0, 3)) == "x_1+x_2+x_3"

    def test_span_of_two_columns(self, paper_code):
        span = column_span(paper_code, [2, 3])
        assert spans_unit(span, 4)  # x_5 from servers 3 and 4

    def test_census(self, paper_code):
        assert singleton_census(paper_code) == (2,) * 12
        assert sum(singleton_census(paper_code)) == 6 * paper_code.m

    def test_singleton_upper_k(self, paper_code):
        assert singleton_upper_k(paper_code) == 3

    def test_stats(self, paper_code):
        st = code_stats(paper_code, 3)
        assert st.storage_overhead == Fraction(7, 3)
        assert st.rate == Fraction(3, 4)
        assert st.overhead_ratio == Fraction(9, 7)

    def test_render(self, paper_code):
        rows = render_array(paper_code)
        assert len(rows) == 7 and len(rows[0]) == 4
        assert rows[0][3] == "x_1+x_2+x_3"


class TestNormalize:
    def test_units_first_then_completion(self, paper_code):
        norm = normalize_singletons(paper_code)
        first = [str(c) for c in norm.columns[0]]
        assert first == ["x_1", "x_2", "x_4", "x_5", "x_7", "x_8", "x_10+x_11+x_12"]

    def test_hidden_singleton_surfaces(self):
        code = code_from_parts(3, [[[0, 1], [1]], [[2], [0]]])
        norm = normalize_singletons(code)
        assert [str(c) for c in norm.columns[0]] == ["x_1", "x_2"]
        assert singleton_census(code) == singleton_census(norm) == (2, 1, 1)

    def test_zero_padding(self):
        code = code_from_parts(3, [[[0], [0]], [[1], [2]]])
        norm = normalize_singletons(code)
        assert norm.columns[0][1].is_zero()

    def test_random_codes_keep_spans(self):
        rng = np.random.default_rng(21)
        for _ in range(60):
            p, t, m = int(rng.integers(3, 9)), int(rng.integers(1, 5)), int(rng.integers(1, 6))
            columns = [
                [np.flatnonzero(rng.integers(0, 2, size=p)).tolist() for _ in range(t)]
                for _ in range(m)
            ]
            code = code_from_parts(p, columns)
            norm = normalize_singletons(code)
            assert (norm.t, norm.m) == (t, m)
            for j in range(m):
                before, after = column_span(code, [j]), column_span(norm, [j])
                assert before.rank == after.rank
                assert all(contains(before, cell) for cell in norm.columns[j])
                assert all(contains(after, cell) for cell in code.columns[j])
            alphas = singleton_census(code)
            assert sum(alphas) <= t * m
            assert singleton_census(norm) == alphas


class TestRestrict:
    def test_restrict(self, paper_code):
        sub = restrict_columns(paper_code, [3, 0])
        assert sub.m == 2
        assert sub.columns[0] == paper_code.columns[0]

    def test_restrict_out_of_range(self, paper_code):
        with pytest.raises(DimensionError, match="out of range"):
            restrict_columns(paper_code, [4])


class TestFileFormat:
    def test_save_load(self, paper_code):
        data = save_code(paper_code)
        again = load_code(data)
        assert again == paper_code
        assert again.family == {"name": "example-7x4"}

    def test_one_column_per_line(self, paper_code):
        lines = save_code(paper_code).decode().splitlines()
        assert sum(1 for ln in lines if ln.startswith("  [[")) == 4

    @pytest.mark.parametrize(
        "doc,msg",
        [
            ('{"p": 2, "t": 1, "m": 1, "columns": [[[1, 1]]]}', "repeated"),
            ('{"p": 2, "t": 1, "m": 1, "columns": [[[3]]]}', "outside"),
            ('{"p": 2, "t": 2, "m": 1, "columns": [[[1]]]}', "expected t=2"),
            ('{"p": 2, "t": 1, "m": 2, "columns": [[[1]]]}', "expected m=2"),
            ('{"p": 0, "t": 1, "m": 1, "columns": [[[1]]]}', "must be >= 1"),
            ('[1, 2]', "object"),
            ('{"p": 2', "malformed"),
        ],
    )
    def test_rejects(self, doc, msg):
        with pytest.raises(FormatError, match=msg):
            load_code(doc.encode())

    def test_empty_cell_is_zero(self):
        code = load_code(b'{"p": 2, "t": 2, "m": 1, "columns": [[[1], []]]}')
        assert code.cell(1, 0).is_zero()
