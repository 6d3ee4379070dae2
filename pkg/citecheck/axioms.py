"""
Randomised probes for the indicator axioms: monotonicity, independence, depth
relevance, scale invariance and directional consistency.

A probe returns True when the indicator behaves as the axiom demands on the given
input. A violation is a counterexample; passing probes prove nothing.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Sequence

import numpy as np

from citecheck.indicators import get_indicator
from citecheck.profile import CitationProfile, PaperRecord

logger = logging.getLogger(__name__)

AXIOMS = ('monotonicity', 'independence', 'depth_relevance', 'scale_invariance',
          'directional_consistency')
PROBED_INDICATORS = ('c', 'mc', 'h', 'e', 'r', 'rm', 'iota_e')

Indicator = Callable[[CitationProfile], float]

# Slack for float comparisons; the h-family returns exact integers or their roots
EPS = 1e-9


@dataclass(frozen=True)
class AxiomTally:
    indicator: str
    axiom: str
    trials: int
    violations: int


def _with_counts(profile: CitationProfile, counts: Sequence[float]) -> CitationProfile:
    return CitationProfile(profile.author_id, tuple(
        PaperRecord(paper.paper_id, count, paper.field_id, paper.pub_year)
        for paper, count in zip(profile.papers, counts)
    ))


def _add_paper(profile: CitationProfile, citations: int) -> CitationProfile:
    return CitationProfile(profile.author_id, profile.papers + (PaperRecord("probe-extra", citations),))


def _strictly_above(x: float, y: float) -> bool:
    return x > y + EPS * max(1.0, abs(y))


def probe_monotonicity(indicator: Indicator, profile: CitationProfile, paper_index: int) -> bool:
    counts = profile.counts
    counts[paper_index] += 1
    return indicator(_with_counts(profile, counts)) >= indicator(profile) - EPS


def probe_independence(indicator: Indicator, a: CitationProfile, b: CitationProfile, extra: int) -> bool:
    """A strict lead must survive both authors adding the same paper"""
    if not _strictly_above(indicator(a), indicator(b)):
        return True
    return _strictly_above(indicator(_add_paper(a, extra)), indicator(_add_paper(b, extra)))


def probe_depth_relevance(indicator: Indicator, profile: CitationProfile, hi: int, lo: int) -> bool:
    """Moving a citation from a less cited paper to a more cited one must not lower the score"""
    counts = profile.counts
    if hi == lo or counts[hi] < counts[lo] or counts[lo] < 1:
        return True
    counts[hi] += 1
    counts[lo] -= 1
    return indicator(_with_counts(profile, counts)) >= indicator(profile) - EPS


def _scaled(profile: CitationProfile, factor: int) -> CitationProfile:
    return _with_counts(profile, [c * factor for c in profile.counts])


def probe_scale_invariance(indicator: Indicator, a: CitationProfile, b: CitationProfile, factor: int) -> bool:
    """A strict lead must survive multiplying every count of both authors by the same factor"""
    if not _strictly_above(indicator(a), indicator(b)):
        return True
    return _strictly_above(indicator(_scaled(a, factor)), indicator(_scaled(b, factor)))


def probe_directional_consistency(indicator: Indicator, a: CitationProfile, b: CitationProfile,
                                  max_factor: int) -> bool:
    """
    Scale both authors by the common factors 1, 2, ..., max_factor and follow who leads.
    Ties are skipped. The strict order may reverse once but must never flip back.
    """
    leaders = []
    for factor in range(1, max_factor + 1):
        x, y = indicator(_scaled(a, factor)), indicator(_scaled(b, factor))
        if _strictly_above(x, y):
            leader = 'a'
        elif _strictly_above(y, x):
            leader = 'b'
        else:
            continue
        if not leaders or leaders[-1] != leader:
            leaders.append(leader)
    return len(leaders) <= 2


def _random_profile(rng: np.random.Generator, author_id: str, max_papers: int, max_citations: int) -> CitationProfile:
    p = int(rng.integers(1, max_papers + 1))
    counts = rng.integers(0, max_citations + 1, size=p)
    return CitationProfile.from_counts(author_id, (int(c) for c in counts))


def axiom_report(indicator_names: Sequence[str] = PROBED_INDICATORS, trials: int = 1000, seed: int = 0,
                 max_papers: int = 12, max_citations: int = 30) -> List[AxiomTally]:
    """Violation counts per (indicator, axiom) over seeded random probes"""
    indicators = [(name, get_indicator(name)) for name in indicator_names]
    rng = np.random.default_rng(seed)
    violations = {(name, axiom): 0 for name, _ in indicators for axiom in AXIOMS}

    for _ in range(trials):
        a = _random_profile(rng, "probe-a", max_papers, max_citations)
        b = _random_profile(rng, "probe-b", max_papers, max_citations)
        paper = int(rng.integers(0, a.p))
        hi, lo = (int(i) for i in rng.integers(0, a.p, size=2))
        if a.counts[hi] < a.counts[lo]:
            hi, lo = lo, hi
        extra = int(rng.integers(0, 2 * max_citations + 1))
        factor = int(rng.integers(2, 11))

        for name, indicator in indicators:
            if not probe_monotonicity(indicator, a, paper):
                violations[(name, 'monotonicity')] += 1
            if not probe_independence(indicator, a, b, extra):
                violations[(name, 'independence')] += 1
            if not probe_depth_relevance(indicator, a, hi, lo):
                violations[(name, 'depth_relevance')] += 1
            if not probe_scale_invariance(indicator, a, b, factor):
                violations[(name, 'scale_invariance')] += 1
            if not probe_directional_consistency(indicator, a, b, factor):
                violations[(name, 'directional_consistency')] += 1

    report = [
        AxiomTally(indicator=name, axiom=axiom, trials=trials, violations=violations[(name, axiom)])
        for name, _ in indicators for axiom in AXIOMS
    ]
    for tally in report:
        if tally.violations:
            logger.info("%s violates %s in %d of %d probes", tally.indicator, tally.axiom,
                        tally.violations, tally.trials)
    return report
