"""
Correlation machinery for inter-indicator analyses.

Pearson's r over all pairs of indicators, Spearman's rho over average-ranked data,
top-N subsets ranked by one indicator, rho as a function of subset size, and an
ordinary-least-squares summary for the stability-range comparison.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import linregress, rankdata

from citecheck.errors import RegressionError, UndefinedCorrelationError, ValidationError
from citecheck.indicators import TABLE_ORDER

logger = logging.getLogger(__name__)

METHODS = ('pearson', 'spearman')


@dataclass(frozen=True)
class IndicatorMatrix:
    authors: Tuple[str, ...]
    columns: Dict[str, Tuple[float, ...]]

    def __post_init__(self):
        object.__setattr__(self, 'authors', tuple(self.authors))
        columns = {name: tuple(float(v) for v in values) for name, values in self.columns.items()}
        for name, values in columns.items():
            if len(values) != len(self.authors):
                raise ValidationError(
                    f"column {name} has {len(values)} values for {len(self.authors)} authors"
                )
        object.__setattr__(self, 'columns', columns)

    @classmethod
    def from_vectors(cls, vectors, names: Optional[Sequence[str]] = None) -> "IndicatorMatrix":
        """Build from IndicatorVectors; normalised columns only when every author has them"""
        vectors = list(vectors)
        if names is None:
            names = [
                name for name in TABLE_ORDER
                if all(vector.get(name) is not None for vector in vectors)
            ]
        return cls(
            authors=tuple(vector.author_id for vector in vectors),
            columns={name: tuple(vector.get(name) for vector in vectors) for name in names},
        )

    @property
    def names(self) -> List[str]:
        return list(self.columns)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise ValidationError(f"no indicator column {name!r}")
        return np.asarray(self.columns[name], dtype=float)

    def take(self, rows: Sequence[int]) -> "IndicatorMatrix":
        return IndicatorMatrix(
            authors=tuple(self.authors[i] for i in rows),
            columns={name: tuple(values[i] for i in rows) for name, values in self.columns.items()},
        )

    def __len__(self) -> int:
        return len(self.authors)


@dataclass(frozen=True)
class CorrelationReport:
    method: str
    names: Tuple[str, ...]
    matrix: Tuple[Tuple[Optional[float], ...], ...]
    n_authors: int
    subset: Dict[str, object] = field(default_factory=lambda: {'kind': 'all'})
    undefined: Tuple[str, ...] = ()

    def value(self, a: str, b: str) -> Optional[float]:
        return self.matrix[self.names.index(a)][self.names.index(b)]


@dataclass(frozen=True)
class SweepRow:
    size: int
    indicator: str
    rho: Optional[float]


@dataclass(frozen=True)
class RegressionSummary:
    x_name: str
    y_name: str
    slope: float
    intercept: float
    r_squared: float
    n_used: int
    n_excluded: int


def _check_pair(x, y) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ValidationError("correlation inputs must be 1-D vectors of equal length")
    if x.size < 2:
        raise ValidationError("correlation needs at least two observations")
    return x, y


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson product-moment coefficient"""
    x, y = _check_pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation is undefined for a constant vector")
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the mean of the ranks they span"""
    return rankdata(np.asarray(values, dtype=float), method='average')


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson's coefficient on average-ranked data"""
    x, y = _check_pair(x, y)
    return pearson(average_ranks(x), average_ranks(y))


CORRELATIONS = {'pearson': pearson, 'spearman': spearman}


def _correlate(method: str):
    try:
        return CORRELATIONS[method]
    except KeyError:
        raise ValidationError(f"unknown method {method!r}; choose from {', '.join(METHODS)}") from None


def correlation_matrix(m: IndicatorMatrix, method: str = 'pearson', workers: int = 1,
                       subset: Optional[Dict[str, object]] = None) -> CorrelationReport:
    """
    Coefficient for every pair of indicator columns

    Constant columns are flagged undefined and their row and column are None;
    the rest of the report is still filled in.
    """
    correlate = _correlate(method)
    if len(m) < 2:
        raise ValidationError("correlation matrix needs at least two authors")

    names = m.names
    data = [m.column(name) for name in names]
    undefined = [name for name, values in zip(names, data) if np.all(values == values[0])]
    for name in undefined:
        logger.warning("indicator %s is constant over %d authors; correlations undefined", name, len(m))

    pairs = [
        (i, j) for i in range(len(names)) for j in range(i + 1, len(names))
        if names[i] not in undefined and names[j] not in undefined
    ]

    def cell(pair):
        i, j = pair
        return correlate(data[i], data[j])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(cell, pairs))
    else:
        values = [cell(pair) for pair in pairs]

    grid: List[List[Optional[float]]] = [[None] * len(names) for _ in names]
    for i, name in enumerate(names):
        if name not in undefined:
            grid[i][i] = 1.0
    for (i, j), value in zip(pairs, values):
        grid[i][j] = grid[j][i] = value

    return CorrelationReport(
        method=method,
        names=tuple(names),
        matrix=tuple(tuple(row) for row in grid),
        n_authors=len(m),
        subset=subset or {'kind': 'all'},
        undefined=tuple(undefined),
    )


def top_n_subset(m: IndicatorMatrix, by: str, n: int) -> IndicatorMatrix:
    """Rows of the n largest values of one column; boundary ties go to the smaller author_id"""
    if n < 1:
        raise ValidationError("n must be >= 1")
    values = m.column(by)
    if n > len(m):
        logger.warning("top-%d requested from %d authors; using all of them", n, len(m))
        n = len(m)
    order = sorted(range(len(m)), key=lambda i: (-values[i], m.authors[i]))
    return m.take(order[:n])


def sample_size_sweep(m: IndicatorMatrix, by: str, sizes: Sequence[int],
                      against: Optional[Sequence[str]] = None) -> List[SweepRow]:
    """Spearman's rho between `by` and each other indicator over growing top-s subsets"""
    sizes = list(sizes)
    if any(s < 2 for s in sizes):
        raise ValidationError("every sweep size must be >= 2")
    if sizes != sorted(sizes):
        raise ValidationError("sweep sizes must be ascending")
    if against is None:
        against = [name for name in m.names if name != by]
    m.column(by)

    rows = []
    for size in sizes:
        subset = top_n_subset(m, by, size)
        ranked_by = subset.column(by)
        for name in against:
            try:
                rho = spearman(ranked_by, subset.column(name))
            except UndefinedCorrelationError:
                logger.warning("rho(%s, %s) undefined over top-%d", by, name, size)
                rho = None
            rows.append(SweepRow(size=size, indicator=name, rho=rho))
    return rows


def ols(x: Sequence[float], y: Sequence[float], x_name: str = 'x', y_name: str = 'y',
        n_excluded: int = 0) -> RegressionSummary:
    """Least-squares line y = intercept + slope * x with its R squared"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        raise RegressionError(f"need at least two points to regress {y_name} on {x_name}, got {x.size}")
    if np.all(x == x[0]):
        raise RegressionError(f"{x_name} is constant; slope undefined")
    fit = linregress(x, y)
    return RegressionSummary(
        x_name=x_name,
        y_name=y_name,
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue) ** 2,
        n_used=int(x.size),
        n_excluded=n_excluded,
    )
