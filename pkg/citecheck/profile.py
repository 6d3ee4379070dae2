"""
Citation records, author profiles, baselines and corpora.

All types are frozen after construction. A CitationProfile is the multiset of per-paper
citation counts of one author, optionally keyed by field and publication year so that
field-normalised scores can be computed against a BaselineTable.
"""

import logging
import math
from dataclasses import dataclass, field
from numbers import Real
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from citecheck.errors import MissingBaselineError, ValidationError

logger = logging.getLogger(__name__)

YearRange = Tuple[int, int]


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    citations: float
    field_id: Optional[str] = None
    pub_year: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.citations, Real) or isinstance(self.citations, bool):
            raise ValidationError(f"paper {self.paper_id}: citations must be a number")
        if not math.isfinite(self.citations) or self.citations < 0:
            raise ValidationError(f"paper {self.paper_id}: citations must be >= 0, got {self.citations}")

    @property
    def has_metadata(self) -> bool:
        return self.field_id is not None and self.pub_year is not None


@dataclass(frozen=True)
class CitationProfile:
    author_id: str
    papers: Tuple[PaperRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'papers', tuple(self.papers))
        seen = set()
        for paper in self.papers:
            if paper.paper_id in seen:
                raise ValidationError(f"author {self.author_id}: duplicate paper_id {paper.paper_id}")
            seen.add(paper.paper_id)

    @classmethod
    def from_counts(cls, author_id: str, counts: Iterable[float]) -> "CitationProfile":
        """Profile with generated paper ids P0, P1, ... and no metadata"""
        return cls(author_id, tuple(PaperRecord(f"P{i}", c) for i, c in enumerate(counts)))

    @property
    def p(self) -> int:
        return len(self.papers)

    @property
    def counts(self) -> List[float]:
        return [paper.citations for paper in self.papers]

    @property
    def is_integral(self) -> bool:
        return all(float(c).is_integer() for c in self.counts)

    @property
    def has_metadata(self) -> bool:
        return all(paper.has_metadata for paper in self.papers)

    @property
    def first_year(self) -> Optional[int]:
        years = [paper.pub_year for paper in self.papers if paper.pub_year is not None]
        return min(years) if years else None


@dataclass(frozen=True)
class BaselineTable:
    entries: Mapping[Tuple[str, int], float] = field(default_factory=dict)

    def __post_init__(self):
        entries = dict(self.entries)
        for key, expected in entries.items():
            if not expected > 0:
                raise ValidationError(f"baseline {key}: expected citations must be > 0, got {expected}")
        object.__setattr__(self, 'entries', entries)

    def expected(self, field_id: Optional[str], pub_year: Optional[int]) -> float:
        try:
            return self.entries[(field_id, pub_year)]
        except KeyError:
            raise MissingBaselineError(field_id, pub_year) from None

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class Corpus:
    authors: Tuple[CitationProfile, ...] = ()
    baselines: Optional[BaselineTable] = None

    def __post_init__(self):
        object.__setattr__(self, 'authors', tuple(self.authors))
        seen = set()
        for profile in self.authors:
            if profile.author_id in seen:
                raise ValidationError(f"duplicate author_id {profile.author_id}")
            seen.add(profile.author_id)

    def __len__(self) -> int:
        return len(self.authors)

    def by_id(self) -> Dict[str, CitationProfile]:
        return {profile.author_id: profile for profile in self.authors}


@dataclass(frozen=True)
class IndicatorVector:
    author_id: str
    p: int
    c: float
    mc: float
    h: int
    e: float
    r: float
    rm: float
    iota_e: float
    ncs: Optional[float] = None
    mncs: Optional[float] = None

    def get(self, name: str) -> Optional[float]:
        return getattr(self, name)


def ranked_papers(profile: CitationProfile) -> List[PaperRecord]:
    """Papers by descending citations, ties by ascending paper_id"""
    return sorted(profile.papers, key=lambda paper: (-paper.citations, paper.paper_id))


def ranked_citations(profile: CitationProfile) -> List[float]:
    return [paper.citations for paper in ranked_papers(profile)]


def _passes_min(value: float, minimum: int, strict: bool) -> bool:
    return value > minimum if strict else value >= minimum


def screen_authors(
    corpus: Corpus,
    min_papers: int = 0,
    min_citations: int = 0,
    first_year_range: Optional[YearRange] = None,
    strict_papers: bool = False,
) -> Tuple[Corpus, int]:
    """
    Apply the author filters and count authors dropped for lacking publication years

    Args:
        corpus: Corpus to filter
        min_papers: Paper-count threshold (>= unless strict_papers, then >)
        min_citations: Total-citation threshold (always >=)
        first_year_range: Inclusive (from, to) bounds on the first publication year
        strict_papers: Use "more than" semantics for min_papers

    Returns:
        The filtered corpus and the number of authors rejected because none of
        their papers carries a publication year
    """
    if min_papers < 0 or min_citations < 0:
        raise ValidationError("min_papers and min_citations must be >= 0")
    if first_year_range is not None and first_year_range[0] > first_year_range[1]:
        raise ValidationError(f"empty year range {first_year_range}")

    kept = []
    missing_year = 0
    for profile in corpus.authors:
        if not _passes_min(profile.p, min_papers, strict_papers):
            continue
        if sum(profile.counts) < min_citations:
            continue
        if first_year_range is not None:
            first = profile.first_year
            if first is None:
                missing_year += 1
                continue
            if not first_year_range[0] <= first <= first_year_range[1]:
                continue
        kept.append(profile)

    return Corpus(tuple(kept), corpus.baselines), missing_year


def filter_authors(
    corpus: Corpus,
    min_papers: int = 0,
    min_citations: int = 0,
    first_year_range: Optional[YearRange] = None,
    strict_papers: bool = False,
) -> Corpus:
    """Keep exactly the authors satisfying every supplied threshold"""
    filtered, missing_year = screen_authors(corpus, min_papers, min_citations, first_year_range, strict_papers)
    if missing_year:
        logger.warning("%d authors rejected: no publication year on any paper", missing_year)
    logger.info("filter kept %d of %d authors", len(filtered), len(corpus))
    return filtered
