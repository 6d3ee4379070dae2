"""
Bootstrap stability intervals for author-level indicators.

Each author's papers are resampled with replacement and the indicator is recomputed on
every replicate; the interval is the empirical percentile span (linear interpolation
between order statistics) of the replicate values.

Random streams: numpy PCG64 seeded from SeedSequence(seed, spawn_key=(h,)) where h is a
64-bit blake2b hash of the author_id. Every author therefore gets the same stream no
matter which other authors are analysed or how many workers run, and the replicates of
one author are drawn as a single (replications, p) block of integers(0, p).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from citecheck.errors import EmptyProfileError, RegressionError, ValidationError
from citecheck.indicators import batch_indicator, get_indicator
from citecheck.profile import CitationProfile, Corpus, PaperRecord
from citecheck.stats import RegressionSummary, ols
from citecheck.utils import stable_hash64

logger = logging.getLogger(__name__)

DEFAULT_PAIRS = (('iota_e', 'c'), ('iota_e', 'r'))


@dataclass(frozen=True)
class StabilityInterval:
    author_id: str
    indicator_name: str
    point: float
    lo: float
    hi: float
    replications: int
    confidence: float


@dataclass(frozen=True)
class RescaledRange:
    author_id: str
    indicator_name: str
    range: float
    log_range: Optional[float]


@dataclass(frozen=True)
class StabilityComparison:
    intervals: List[StabilityInterval]
    ranges: List[RescaledRange]
    regressions: List[RegressionSummary]
    skipped: List[Dict[str, object]]


def author_rng(seed: int, author_id: str) -> np.random.Generator:
    """Generator dedicated to one author under one master seed"""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(stable_hash64(author_id),))
    return np.random.Generator(np.random.PCG64(sequence))


def draw_indices(rng: np.random.Generator, p: int, replications: int) -> np.ndarray:
    return rng.integers(0, p, size=(replications, p))


def resample_profile(profile: CitationProfile, rng: np.random.Generator) -> CitationProfile:
    """Same number of papers, drawn uniformly with replacement"""
    if not profile.papers:
        raise EmptyProfileError(f"author {profile.author_id}: cannot resample an empty profile")
    picks = draw_indices(rng, profile.p, 1)[0]
    papers = []
    for k, index in enumerate(picks):
        source = profile.papers[int(index)]
        papers.append(PaperRecord(f"{source.paper_id}-r{k}", source.citations, source.field_id, source.pub_year))
    return CitationProfile(profile.author_id, tuple(papers))


def percentile_bounds(values: np.ndarray, confidence: float) -> Tuple[float, float]:
    alpha = (1.0 - confidence) / 2.0
    lo, hi = np.percentile(values, [100.0 * alpha, 100.0 * (1.0 - alpha)], method='linear')
    return float(lo), float(hi)


def replicate_values(profile: CitationProfile, indicator: str, replications: int,
                     rng: np.random.Generator) -> np.ndarray:
    counts = np.asarray(profile.counts)
    indices = draw_indices(rng, profile.p, replications)
    return batch_indicator(indicator, counts[indices])


def bootstrap_indicator(profile: CitationProfile, indicator: str, replications: int = 1000,
                        confidence: float = 0.95, rng_seed: int = 0) -> StabilityInterval:
    """Percentile stability interval of one indicator for one author"""
    if not profile.papers:
        raise EmptyProfileError(f"author {profile.author_id}: cannot bootstrap an empty profile")
    if replications < 1:
        raise ValidationError("replications must be >= 1")
    if not 0.0 < confidence < 1.0:
        raise ValidationError("confidence must lie strictly between 0 and 1")

    point = float(get_indicator(indicator)(profile))
    values = replicate_values(profile, indicator, replications, author_rng(rng_seed, profile.author_id))
    lo, hi = percentile_bounds(values, confidence)
    return StabilityInterval(
        author_id=profile.author_id,
        indicator_name=indicator,
        point=point,
        lo=lo,
        hi=hi,
        replications=replications,
        confidence=confidence,
    )


def bootstrap_corpus(corpus: Corpus, indicators: Sequence[str], replications: int = 1000,
                     confidence: float = 0.95, seed: int = 0, workers: int = 1) -> List[StabilityInterval]:
    """Intervals for every (author, indicator), ordered by author then indicator list"""
    for name in indicators:
        get_indicator(name)

    def one_author(profile: CitationProfile) -> List[StabilityInterval]:
        # each indicator restarts the author's stream, so all indicators see the same replicates
        return [bootstrap_indicator(profile, name, replications, confidence, seed) for name in indicators]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_author = list(pool.map(one_author, corpus.authors))
    else:
        per_author = [one_author(profile) for profile in corpus.authors]
    return [interval for intervals in per_author for interval in intervals]


def rescale_factor(top: float) -> Optional[float]:
    """100 / top, or None when top is not strictly positive"""
    return 100.0 / top if top > 0 else None


def rescale_to_max(values: Dict[str, float]) -> Dict[str, float]:
    """Multiply every value by 100 / max, so the largest becomes exactly 100"""
    if not values:
        raise ValidationError("nothing to rescale")
    top = max(values.values())
    factor = rescale_factor(top)
    if factor is None:
        raise ValidationError("rescaling needs at least one strictly positive value")
    return {key: (100.0 if value == top else value * factor) for key, value in values.items()}


def rescaled_ranges(intervals: Sequence[StabilityInterval]) -> List[RescaledRange]:
    """Interval widths on each indicator's 100 = max(point estimate) axis"""
    by_indicator: Dict[str, List[StabilityInterval]] = {}
    for interval in intervals:
        by_indicator.setdefault(interval.indicator_name, []).append(interval)

    ranges = []
    for name, group in by_indicator.items():
        factor = rescale_factor(max(interval.point for interval in group))
        if factor is None:
            logger.warning("indicator %s is zero for every author; ranges left at 0", name)
            factor = 0.0
        for interval in group:
            width = max(interval.hi * factor - interval.lo * factor, 0.0)
            ranges.append(RescaledRange(
                author_id=interval.author_id,
                indicator_name=name,
                range=width,
                log_range=math.log10(width) if width > 0 else None,
            ))
    return ranges


def regress_ranges(ranges: Sequence[RescaledRange], y_name: str, x_name: str) -> RegressionSummary:
    """OLS of log10 range of y_name on log10 range of x_name, authors with a zero range excluded"""
    y_logs = {r.author_id: r.log_range for r in ranges if r.indicator_name == y_name}
    x_logs = {r.author_id: r.log_range for r in ranges if r.indicator_name == x_name}
    shared = [author for author in y_logs if author in x_logs]
    used = [a for a in shared if y_logs[a] is not None and x_logs[a] is not None]
    excluded = len(shared) - len(used)
    if excluded:
        logger.warning("%d authors with a zero-width %s or %s interval left out of the regression",
                       excluded, y_name, x_name)
    return ols([x_logs[a] for a in used], [y_logs[a] for a in used],
               x_name=x_name, y_name=y_name, n_excluded=excluded)


def stability_comparison(corpus: Corpus, indicators: Sequence[str] = ('iota_e', 'c', 'r'),
                         replications: int = 1000, confidence: float = 0.95, seed: int = 0,
                         pairs: Optional[Sequence[Tuple[str, str]]] = None,
                         workers: int = 1) -> StabilityComparison:
    """
    Bootstrap every author, rescale the intervals and compare log ranges across indicators

    Args:
        corpus: Authors to analyse (usually the >50 papers, >=1 citation subset)
        indicators: Indicator names to bootstrap
        replications: Resamples per author
        confidence: Interval coverage
        seed: Master seed
        pairs: (y, x) indicator pairs to regress; defaults to (iota_e, c) and (iota_e, r)
            when both members were bootstrapped
        workers: Threads used across authors

    Returns:
        Intervals, rescaled ranges, one regression per usable pair and a note per skipped pair
    """
    intervals = bootstrap_corpus(corpus, indicators, replications, confidence, seed, workers)
    ranges = rescaled_ranges(intervals)

    if pairs is None:
        pairs = [pair for pair in DEFAULT_PAIRS if pair[0] in indicators and pair[1] in indicators]

    regressions = []
    skipped = []
    for y_name, x_name in pairs:
        try:
            regressions.append(regress_ranges(ranges, y_name, x_name))
        except RegressionError as e:
            logger.warning("regression of %s on %s skipped: %s", y_name, x_name, e)
            skipped.append({'y': y_name, 'x': x_name, 'reason': str(e)})

    return StabilityComparison(intervals=intervals, ranges=ranges, regressions=regressions, skipped=skipped)
