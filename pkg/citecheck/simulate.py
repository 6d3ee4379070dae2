"""
Thought experiments on the ordinality of the Euclidean index, plus a synthetic corpus
generator standing in for proprietary citation data.

Two-paper models:
    fixed total:  iota_E(c_b) = sqrt((total - c_b)^2 + c_b^2)
    fixed iota:   total(c_a) = c_a + sqrt(iota^2 - c_a^2)

The fixed-iota curve is sometimes printed with a plus under the root; the minus form
is the one consistent with c_b = sqrt(iota^2 - c_a^2) and with both endpoints equal
to iota, and is what is implemented here.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from citecheck.errors import ConfigError, ValidationError
from citecheck.indicators import euclidean_index
from citecheck.profile import BaselineTable, CitationProfile, Corpus, PaperRecord, filter_authors

logger = logging.getLogger(__name__)

PAPERS_LAWS = ('negbin', 'constant')
CITATIONS_LAWS = ('lognormal', 'constant')


@dataclass(frozen=True)
class CurvePoint:
    x: float
    y: float


@dataclass(frozen=True)
class HistogramBin:
    lo: float
    hi: float
    count: int


@dataclass(frozen=True)
class MegaAuthor:
    author_id: str
    p: int
    c: float
    iota_e: float


@dataclass(frozen=True)
class MegaResult:
    target_total: float
    authors: List[MegaAuthor]
    histogram: List[HistogramBin]


@dataclass(frozen=True)
class GeneratorConfig:
    """
    Synthetic corpus parameters

    Paper counts are 1 + NegativeBinomial(papers_n, papers_p) (or a constant). Each author
    draws one offset u ~ Normal(0, citations_author_sigma), and that author's papers get
    floor(LogNormal(citations_mu + u, citations_sigma)) citations (or a constant).
    The author offset spreads impact between authors; citations_sigma only spreads papers
    within one author. The defaults give a mean of about 39 papers per author and a
    strongly right-skewed pooled citation distribution; they are synthetic and carry no
    empirical provenance.
    """
    n_authors: int = 1000
    papers_law: str = 'negbin'
    papers_n: float = 2.0
    papers_p: float = 0.05
    papers_constant: int = 1
    citations_law: str = 'lognormal'
    citations_mu: float = 1.5
    citations_sigma: float = 0.6
    citations_author_sigma: float = 1.5
    citations_constant: int = 5
    seed: int = 0
    with_metadata: bool = False
    n_fields: int = 10
    year_range: Tuple[int, int] = (2000, 2014)

    def validate(self) -> "GeneratorConfig":
        if self.n_authors < 1:
            raise ConfigError('n_authors', "must be >= 1")
        if self.papers_law not in PAPERS_LAWS:
            raise ConfigError('papers_law', f"must be one of {', '.join(PAPERS_LAWS)}")
        if self.citations_law not in CITATIONS_LAWS:
            raise ConfigError('citations_law', f"must be one of {', '.join(CITATIONS_LAWS)}")
        if self.papers_law == 'negbin':
            if not self.papers_n > 0:
                raise ConfigError('papers_n', "must be > 0")
            if not 0 < self.papers_p <= 1:
                raise ConfigError('papers_p', "must lie in (0, 1]")
        elif self.papers_constant < 1:
            raise ConfigError('papers_constant', "must be >= 1")
        if self.citations_law == 'lognormal':
            if not math.isfinite(self.citations_mu):
                raise ConfigError('citations_mu', "must be finite")
            if not self.citations_sigma >= 0:
                raise ConfigError('citations_sigma', "must be >= 0")
            if not self.citations_author_sigma >= 0:
                raise ConfigError('citations_author_sigma', "must be >= 0")
        elif self.citations_constant < 0:
            raise ConfigError('citations_constant', "must be >= 0")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError('seed', "must be an unsigned 64-bit integer")
        if self.with_metadata:
            if self.n_fields < 1:
                raise ConfigError('n_fields', "must be >= 1")
            if self.year_range[0] > self.year_range[1]:
                raise ConfigError('year_range', "start year is after end year")
        return self


def two_paper_fixed_sum(total: int, step: int = 1) -> List[CurvePoint]:
    """iota_E of a two-paper author as citations shift from paper a to paper b"""
    if total < 0:
        raise ValidationError("total must be >= 0")
    if total == 0:
        return [CurvePoint(0.0, 0.0)]
    if not 1 <= step <= total:
        raise ValidationError("step must lie in [1, total]")
    grid = list(range(0, total + 1, step))
    if grid[-1] != total:
        grid.append(total)
    return [CurvePoint(float(c_b), math.hypot(total - c_b, c_b)) for c_b in grid]


def two_paper_fixed_iota(iota: float, step: float = 1.0) -> List[CurvePoint]:
    """Total citations of a two-paper author whose Euclidean index is held at iota"""
    if not iota > 0:
        raise ValidationError("iota must be > 0")
    if not 0 < step <= iota:
        raise ValidationError("step must lie in (0, iota]")
    n = int(math.floor(iota / step + 1e-9))
    grid = [min(k * step, iota) for k in range(n + 1)]
    if grid[-1] < iota:
        grid.append(iota)
    return [CurvePoint(c_a, c_a + math.sqrt(max(iota * iota - c_a * c_a, 0.0))) for c_a in grid]


def scale_profile(profile: CitationProfile, target_total: float) -> CitationProfile:
    """Real-valued copy of a profile whose citations sum to target_total"""
    total = sum(profile.counts)
    if not total > 0:
        raise ValidationError(f"author {profile.author_id}: cannot scale a profile with no citations")
    factor = target_total / total
    return CitationProfile(
        profile.author_id,
        tuple(PaperRecord(p.paper_id, p.citations * factor, p.field_id, p.pub_year) for p in profile.papers),
    )


def mega_citation_normalization(corpus: Corpus, target_total: float = 1_000_000, min_papers: int = 20,
                                min_citations: int = 100, bins: int = 50) -> MegaResult:
    """
    Give every qualifying author the same total citations and compare Euclidean indices

    Each author's relative distribution is kept; only the scale changes. The histogram
    spans [target/sqrt(max p), target] in equal-width bins.
    """
    if not target_total > 0:
        raise ValidationError("target_total must be > 0")
    if bins < 1:
        raise ValidationError("bins must be >= 1")
    eligible = filter_authors(corpus, min_papers=min_papers, min_citations=max(min_citations, 1))

    authors = []
    for profile in eligible.authors:
        scaled = scale_profile(profile, target_total)
        authors.append(MegaAuthor(profile.author_id, profile.p, sum(profile.counts), euclidean_index(scaled)))

    histogram = []
    if authors:
        max_p = max(author.p for author in authors)
        low = target_total / math.sqrt(max_p)
        # rounding can put an edge case a hair outside the closed range
        values = np.clip([a.iota_e for a in authors], low, target_total)
        counts, edges = np.histogram(values, bins=bins, range=(low, target_total))
        histogram = [HistogramBin(float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(bins)]
    else:
        logger.warning("no author passes P >= %d and C >= %d; histogram is empty", min_papers, min_citations)

    return MegaResult(target_total=target_total, authors=authors, histogram=histogram)


def _draw_paper_counts(config: GeneratorConfig, rng: np.random.Generator) -> np.ndarray:
    if config.papers_law == 'constant':
        return np.full(config.n_authors, config.papers_constant, dtype=np.int64)
    return 1 + rng.negative_binomial(config.papers_n, config.papers_p, size=config.n_authors)


def _draw_citations(config: GeneratorConfig, rng: np.random.Generator, paper_counts: np.ndarray) -> np.ndarray:
    size = int(paper_counts.sum())
    if config.citations_law == 'constant':
        return np.full(size, config.citations_constant, dtype=np.int64)
    # one offset per author, repeated over that author's papers
    offsets = rng.normal(0.0, config.citations_author_sigma, size=config.n_authors)
    means = config.citations_mu + np.repeat(offsets, paper_counts)
    return np.floor(rng.lognormal(means, config.citations_sigma)).astype(np.int64)


def generate_corpus(config: GeneratorConfig) -> Corpus:
    """Deterministic synthetic corpus for a given config and seed"""
    config.validate()
    rng = np.random.default_rng(config.seed)
    paper_counts = _draw_paper_counts(config, rng)
    total_papers = int(paper_counts.sum())
    citations = _draw_citations(config, rng, paper_counts)

    if config.with_metadata:
        start, end = config.year_range
        fields_drawn = rng.integers(0, config.n_fields, size=total_papers)
        first_years = rng.integers(start, end + 1, size=config.n_authors)
        year_offsets = rng.integers(0, end - start + 1, size=total_papers)

    authors = []
    cell_totals: Dict[Tuple[str, int], List[int]] = defaultdict(lambda: [0, 0])
    offset = 0
    for index, n_papers in enumerate(paper_counts):
        author_id = f"A{index:06d}"
        papers = []
        for j in range(int(n_papers)):
            k = offset + j
            if config.with_metadata:
                field_id = f"F{int(fields_drawn[k]):02d}"
                # first paper fixes the author's first year; the rest fall in [first, end]
                first = int(first_years[index])
                pub_year = first if j == 0 else first + int(year_offsets[k]) % (end - first + 1)
                cell = cell_totals[(field_id, pub_year)]
                cell[0] += int(citations[k])
                cell[1] += 1
            else:
                field_id, pub_year = None, None
            papers.append(PaperRecord(f"{author_id}-P{j:04d}", int(citations[k]), field_id, pub_year))
        offset += int(n_papers)
        authors.append(CitationProfile(author_id, tuple(papers)))

    baselines = None
    if config.with_metadata:
        baselines = BaselineTable({
            key: (total / count if total > 0 else 1.0)
            for key, (total, count) in sorted(cell_totals.items())
        })

    logger.info("generated %d authors with %d papers (synthetic)", config.n_authors, total_papers)
    return Corpus(tuple(authors), baselines)
