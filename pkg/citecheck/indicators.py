"""
Author-level citation indicators.

Every function takes a CitationProfile and is pure. The h-family (h, h-core, R, Rm, e)
requires integer counts; total citations, the mean and the Euclidean index accept
real-valued counts too, which is what the scale-invariance checks and the mega-citation
normalisation rely on.

The same indicators are also available in batch form over a 2-D array of citation
counts (one row per profile, columns are papers) for the bootstrap.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np

from citecheck.errors import ValidationError
from citecheck.profile import BaselineTable, CitationProfile, IndicatorVector, ranked_citations

# Column order used for every indicator table and correlation report
TABLE_ORDER = ['c', 'p', 'mc', 'h', 'e', 'r', 'rm', 'ncs', 'mncs', 'iota_e']
FILE_ORDER = ['p', 'c', 'mc', 'h', 'e', 'r', 'rm', 'ncs', 'mncs', 'iota_e']
NORMALIZED = ('ncs', 'mncs')


@dataclass(frozen=True)
class HCore:
    h: int
    core_citations: List[int]
    core_sum: int


def _require_integral(profile: CitationProfile) -> None:
    if not profile.is_integral:
        raise ValidationError(f"author {profile.author_id}: h-family indicators need integer citation counts")


def total_citations(profile: CitationProfile) -> float:
    return sum(profile.counts)


def mean_citations(profile: CitationProfile) -> float:
    if not profile.papers:
        return 0.0
    return total_citations(profile) / profile.p


def h_index(profile: CitationProfile) -> int:
    """Largest h such that the h-th most cited paper has at least h citations"""
    _require_integral(profile)
    h = 0
    for rank, count in enumerate(ranked_citations(profile), 1):
        if count >= rank:
            h = rank
        else:
            break
    return h


def h_core(profile: CitationProfile) -> HCore:
    h = h_index(profile)
    core = [int(c) for c in ranked_citations(profile)[:h]]
    return HCore(h=h, core_citations=core, core_sum=sum(core))


def r_index(profile: CitationProfile) -> float:
    return math.sqrt(h_core(profile).core_sum)


def rm_index(profile: CitationProfile) -> float:
    core = h_core(profile)
    return math.sqrt(math.fsum(math.sqrt(c) for c in core.core_citations))


def e_index(profile: CitationProfile) -> float:
    core = h_core(profile)
    return math.sqrt(core.core_sum - core.h * core.h)


def euclidean_index(profile: CitationProfile) -> float:
    """L2 length of the citation vector over all papers"""
    return math.sqrt(math.fsum(c * c for c in profile.counts))


def ncs(profile: CitationProfile, baselines: BaselineTable) -> float:
    """Sum of citations relative to the expected citations of the paper's (field, year) cell"""
    return math.fsum(
        paper.citations / baselines.expected(paper.field_id, paper.pub_year)
        for paper in profile.papers
    )


def mncs(profile: CitationProfile, baselines: BaselineTable) -> float:
    total = ncs(profile, baselines)
    if not profile.papers:
        return 0.0
    return total / profile.p


def compute_all(profile: CitationProfile, baselines: Optional[BaselineTable] = None) -> IndicatorVector:
    """Every indicator for one author; ncs/mncs stay None without baselines or metadata"""
    core = h_core(profile)
    c = total_citations(profile)
    if isinstance(c, float) and c.is_integer():
        c = int(c)

    normalized = None
    if baselines is not None and profile.has_metadata:
        normalized = ncs(profile, baselines)

    return IndicatorVector(
        author_id=profile.author_id,
        p=profile.p,
        c=c,
        mc=mean_citations(profile),
        h=core.h,
        e=math.sqrt(core.core_sum - core.h * core.h),
        r=math.sqrt(core.core_sum),
        rm=math.sqrt(math.fsum(math.sqrt(x) for x in core.core_citations)),
        iota_e=euclidean_index(profile),
        ncs=normalized,
        mncs=None if normalized is None else (normalized / profile.p if profile.p else 0.0),
    )


def compute_corpus(profiles, baselines: Optional[BaselineTable] = None) -> List[IndicatorVector]:
    return [compute_all(profile, baselines) for profile in profiles]


# Scalar indicators that depend on the profile alone
INDICATORS: Dict[str, Callable[[CitationProfile], float]] = {
    'p': lambda profile: profile.p,
    'c': total_citations,
    'mc': mean_citations,
    'h': h_index,
    'e': e_index,
    'r': r_index,
    'rm': rm_index,
    'iota_e': euclidean_index,
}


def get_indicator(name: str) -> Callable[[CitationProfile], float]:
    try:
        return INDICATORS[name]
    except KeyError:
        raise ValidationError(f"unknown indicator {name!r}; choose from {', '.join(INDICATORS)}") from None


# Batch forms: rows are profiles of equal length, values are citation counts

def _batch_h(ranked: np.ndarray) -> np.ndarray:
    ranks = np.arange(1, ranked.shape[1] + 1)
    # ranked is descending, so ranked >= rank holds on a prefix of each row
    return (ranked >= ranks).sum(axis=1)


def _batch_core_mask(ranked: np.ndarray) -> np.ndarray:
    h = _batch_h(ranked)
    return np.arange(ranked.shape[1]) < h[:, None]


def _batch_core_sum(ranked: np.ndarray) -> np.ndarray:
    return np.where(_batch_core_mask(ranked), ranked, 0).sum(axis=1)


def _descending(counts: np.ndarray) -> np.ndarray:
    return -np.sort(-counts, axis=1)


BATCH_INDICATORS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    'p': lambda counts: np.full(counts.shape[0], counts.shape[1], dtype=float),
    'c': lambda counts: counts.sum(axis=1).astype(float),
    'mc': lambda counts: counts.mean(axis=1) if counts.shape[1] else np.zeros(counts.shape[0]),
    'h': lambda counts: _batch_h(_descending(counts)).astype(float),
    'e': lambda counts: np.sqrt(
        _batch_core_sum(_descending(counts)) - _batch_h(_descending(counts)) ** 2
    ).astype(float),
    'r': lambda counts: np.sqrt(_batch_core_sum(_descending(counts))).astype(float),
    'rm': lambda counts: np.sqrt(
        np.where(_batch_core_mask(_descending(counts)), np.sqrt(_descending(counts)), 0.0).sum(axis=1)
    ),
    'iota_e': lambda counts: np.sqrt((counts.astype(float) ** 2).sum(axis=1)),
}


def batch_indicator(name: str, counts: np.ndarray) -> np.ndarray:
    """Evaluate one indicator on every row of a (rows, papers) count array"""
    if name not in BATCH_INDICATORS:
        raise ValidationError(f"unknown indicator {name!r}; choose from {', '.join(BATCH_INDICATORS)}")
    return BATCH_INDICATORS[name](np.asarray(counts))
