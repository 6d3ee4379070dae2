import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from citecheck.errors import RegressionError, UndefinedCorrelationError, ValidationError
from citecheck.indicators import compute_all
from citecheck.profile import filter_authors
from citecheck.simulate import GeneratorConfig, generate_corpus
from citecheck.stats import (
    IndicatorMatrix,
    average_ranks,
    correlation_matrix,
    ols,
    pearson,
    sample_size_sweep,
    spearman,
    top_n_subset,
)


def textbook_pearson(x, y):
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sx = math.sqrt(sum((a - mx) ** 2 for a in x))
    sy = math.sqrt(sum((b - my) ** 2 for b in y))
    return cov / (sx * sy)


def matrix(columns, authors=None):
    n = len(next(iter(columns.values())))
    return IndicatorMatrix(tuple(authors or [f"a{i}" for i in range(n)]), columns)


class TestPearson:
    def test_identical_and_reversed(self):
        assert pearson([1, 2, 3], [1, 2, 3]) == 1.0
        assert pearson([1, 2, 3], [3, 2, 1]) == -1.0

    def test_matches_textbook_formula(self):
        assert pearson([1, 2, 3, 4], [2, 4, 5, 4]) == pytest.approx(textbook_pearson([1, 2, 3, 4], [2, 4, 5, 4]))

    def test_constant_vector_is_undefined(self):
        with pytest.raises(UndefinedCorrelationError):
            pearson([1, 1, 1], [1, 2, 3])

    def test_needs_two_points(self):
        with pytest.raises(ValidationError):
            pearson([1], [1])

    @given(st.lists(st.integers(min_value=-1000, max_value=1000), min_size=3, max_size=30), st.data(),
           st.sampled_from([0.5, 2.0, 3.7, 100.0]), st.booleans(), st.integers(min_value=-1000, max_value=1000))
    def test_affine_transform_keeps_magnitude(self, x, data, scale, negate, shift):
        y = data.draw(st.lists(st.integers(min_value=-1000, max_value=1000), min_size=len(x), max_size=len(x)))
        assume(len(set(x)) > 1 and len(set(y)) > 1)
        a = -scale if negate else scale
        moved = [a * v + shift for v in x]
        expected = pearson(x, y) * (-1 if negate else 1)
        assert pearson(moved, y) == pytest.approx(expected, abs=1e-9)


class TestSpearman:
    def test_identical(self):
        assert spearman([3, 1, 2], [3, 1, 2]) == 1.0

    def test_monotone_transform(self):
        assert spearman([1, 2, 3], [10, 100, 1000]) == pytest.approx(1.0)

    def test_average_ranks_for_ties(self):
        assert list(average_ranks([1, 2, 2, 3])) == [1.0, 2.5, 2.5, 4.0]
        expected = textbook_pearson([1.0, 2.5, 2.5, 4.0], [1.0, 3.0, 2.0, 4.0])
        assert spearman([1, 2, 2, 3], [1, 3, 2, 4]) == pytest.approx(expected)

    @given(st.lists(st.integers(min_value=0, max_value=50), min_size=3, max_size=40), st.data())
    def test_invariant_under_increasing_transforms(self, x, data):
        y = data.draw(st.lists(st.integers(min_value=0, max_value=50), min_size=len(x), max_size=len(x)))
        assume(len(set(x)) > 1 and len(set(y)) > 1)
        transformed = [math.exp(v / 10.0) + v ** 3 for v in x]
        assert spearman(transformed, y) == pytest.approx(spearman(x, y), abs=1e-12)
        assert spearman(x, [math.sqrt(v) for v in y]) == pytest.approx(spearman(x, y), abs=1e-12)


class TestCorrelationMatrix:
    def test_proportional_columns(self):
        report = correlation_matrix(matrix({'c': [1, 2, 3, 7], 'iota_e': [2, 4, 6, 14]}))
        assert report.value('c', 'iota_e') == pytest.approx(1.0)
        assert report.value('c', 'c') == 1.0

    def test_constant_column_is_flagged(self):
        report = correlation_matrix(matrix({'c': [1, 2, 3], 'h': [2, 2, 2], 'iota_e': [3, 1, 2]}))
        assert report.undefined == ('h',)
        assert report.value('h', 'c') is None
        assert report.value('h', 'h') is None
        assert report.value('c', 'iota_e') is not None

    def test_needs_two_authors(self):
        with pytest.raises(ValidationError):
            correlation_matrix(matrix({'c': [1]}))

    @pytest.mark.parametrize("method", ["pearson", "spearman"])
    def test_cells_match_scalar_recomputation(self, method):
        rng = np.random.default_rng(42)
        scalar = pearson if method == "pearson" else spearman
        for _ in range(20):
            n, k = int(rng.integers(5, 40)), int(rng.integers(2, 6))
            columns = {f"x{j}": list(rng.lognormal(0, 1, size=n)) for j in range(k)}
            report = correlation_matrix(matrix(columns), method)
            for a in columns:
                for b in columns:
                    expected = 1.0 if a == b else scalar(columns[a], columns[b])
                    assert report.value(a, b) == pytest.approx(expected, abs=1e-12)
                    assert report.value(a, b) == report.value(b, a)
                    assert -1.0 <= report.value(a, b) <= 1.0

    def test_workers_do_not_change_results(self):
        rng = np.random.default_rng(5)
        columns = {f"x{j}": list(rng.normal(size=30)) for j in range(6)}
        assert correlation_matrix(matrix(columns), workers=4) == correlation_matrix(matrix(columns), workers=1)


class TestTopN:
    def test_selection(self):
        m = matrix({'iota_e': [5, 9, 7]}, authors=['a', 'b', 'c'])
        assert top_n_subset(m, 'iota_e', 2).authors == ('b', 'c')

    def test_all_rows(self):
        m = matrix({'iota_e': [5, 9, 7]}, authors=['a', 'b', 'c'])
        assert sorted(top_n_subset(m, 'iota_e', 3).authors) == ['a', 'b', 'c']

    def test_boundary_tie_prefers_smaller_author_id(self):
        m = matrix({'iota_e': [5, 5, 3]}, authors=['zed', 'amy', 'bob'])
        assert top_n_subset(m, 'iota_e', 1).authors == ('amy',)

    def test_oversized_n_returns_everything(self):
        m = matrix({'iota_e': [1, 2]})
        assert len(top_n_subset(m, 'iota_e', 10)) == 2

    def test_idempotent(self):
        rng = np.random.default_rng(9)
        m = matrix({'iota_e': list(rng.integers(0, 5, size=30)), 'c': list(rng.normal(size=30))})
        once = top_n_subset(m, 'iota_e', 12)
        assert top_n_subset(once, 'iota_e', 12) == once

    def test_unknown_column(self):
        with pytest.raises(ValidationError):
            top_n_subset(matrix({'c': [1, 2]}), 'iota_e', 1)


class TestSweep:
    def test_cells_equal_spearman_on_top_subset(self):
        corpus = generate_corpus(GeneratorConfig(n_authors=400, seed=3))
        m = IndicatorMatrix.from_vectors(compute_all(profile) for profile in corpus.authors)
        rows = sample_size_sweep(m, 'iota_e', [10, 100, 400], against=['c', 'r', 'p'])
        assert len(rows) == 9
        for row in rows:
            subset = top_n_subset(m, 'iota_e', row.size)
            if row.rho is not None:
                assert row.rho == pytest.approx(spearman(subset.column('iota_e'), subset.column(row.indicator)))

    def test_two_points(self):
        m = matrix({'iota_e': [1, 2, 3], 'c': [3, 5, 4]})
        (row,) = sample_size_sweep(m, 'iota_e', [2], against=['c'])
        assert row.rho in (-1.0, 1.0)

    def test_full_size_matches_all_observations(self):
        m = matrix({'iota_e': [1, 5, 3, 8], 'c': [2, 7, 1, 9]})
        (row,) = sample_size_sweep(m, 'iota_e', [4], against=['c'])
        assert row.rho == pytest.approx(correlation_matrix(m, 'spearman').value('iota_e', 'c'))

    def test_undefined_cell_is_missing(self):
        m = matrix({'iota_e': [1, 2, 3], 'h': [4, 4, 4]})
        (row,) = sample_size_sweep(m, 'iota_e', [3], against=['h'])
        assert row.rho is None

    def test_sizes_must_ascend(self):
        with pytest.raises(ValidationError):
            sample_size_sweep(matrix({'iota_e': [1, 2, 3]}), 'iota_e', [3, 2])


class TestOls:
    def test_exact_line(self):
        summary = ols([1, 2, 3, 4], [3, 5, 7, 9])
        assert summary.slope == pytest.approx(2.0)
        assert summary.intercept == pytest.approx(1.0)
        assert summary.r_squared == pytest.approx(1.0)

    def test_closed_form(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=50)
        y = 0.7 * x + rng.normal(scale=0.3, size=50)
        summary = ols(x, y)
        slope = np.sum((x - x.mean()) * (y - y.mean())) / np.sum((x - x.mean()) ** 2)
        assert summary.slope == pytest.approx(slope)
        assert summary.intercept == pytest.approx(y.mean() - slope * x.mean())
        assert summary.r_squared == pytest.approx(textbook_pearson(list(x), list(y)) ** 2)

    def test_degenerate_inputs(self):
        with pytest.raises(RegressionError):
            ols([1.0], [2.0])
        with pytest.raises(RegressionError):
            ols([1.0, 1.0], [2.0, 3.0])


def test_heavy_tailed_corpus_echoes_reported_correlations():
    corpus = filter_authors(generate_corpus(GeneratorConfig(n_authors=3000, seed=2016)), min_papers=20)
    m = IndicatorMatrix.from_vectors(compute_all(profile) for profile in corpus.authors)
    assert spearman(m.column('iota_e'), m.column('r')) >= 0.95
    assert pearson(m.column('iota_e'), m.column('c')) >= 0.9
