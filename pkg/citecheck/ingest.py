"""
Reading and writing the citecheck file formats.

All files are comma-separated UTF-8 with LF line endings and a header row. Identifiers
are restricted to [A-Za-z0-9_-] so that no quoting is ever needed. Quote characters are
read as literal text, and a blank line is an error reported at its physical line number.

    papers.csv        author_id,paper_id,citations[,field_id,pub_year]
    baselines.csv     field_id,pub_year,mean_citations
    indicators.csv    author_id,p,c,mc,h,e,r,rm,ncs,mncs,iota_e
    intervals.csv     author_id,indicator,point,lo,hi
    ranges.csv        author_id,indicator,range,log_range
    correlations.csv  square matrix, first column 'indicator'
    sweep.csv         size,indicator,rho
    curves.csv        x,y
    histogram.csv     bin_lo,bin_hi,count
    mega_authors.csv  author_id,p,c,iota_e
    axioms.csv        indicator,axiom,trials,violations
"""

import csv
import json
import logging
import math
import re
from dataclasses import asdict
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import pandas as pd

from citecheck.errors import IngestError
from citecheck.indicators import FILE_ORDER, NORMALIZED, TABLE_ORDER
from citecheck.profile import BaselineTable, CitationProfile, Corpus, IndicatorVector, PaperRecord
from citecheck.stats import CorrelationReport, IndicatorMatrix, RegressionSummary, SweepRow
from citecheck.utils import format_real

logger = logging.getLogger(__name__)

IDENTIFIER = re.compile(r'^[A-Za-z0-9_-]+$')
NON_NEGATIVE_INT = re.compile(r'^[0-9]+$')
YEAR = re.compile(r'^-?[0-9]+$')

PAPERS_REQUIRED = ['author_id', 'paper_id', 'citations']
PAPERS_OPTIONAL = ['field_id', 'pub_year']
BASELINES_COLUMNS = ['field_id', 'pub_year', 'mean_citations']
INDICATOR_COLUMNS = ['author_id'] + FILE_ORDER


def _read_table(path, required: Sequence[str], optional: Sequence[str] = ()) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, na_filter=False, encoding='utf-8',
                            skip_blank_lines=False, quoting=csv.QUOTE_NONE)
    except pd.errors.EmptyDataError:
        raise IngestError(path, "file is empty; a header row is required") from None
    except pd.errors.ParserError as e:
        raise IngestError(path, f"malformed CSV: {e}") from None
    except UnicodeDecodeError as e:
        raise IngestError(path, f"not UTF-8: {e}") from None

    columns = list(frame.columns)
    missing = [name for name in required if name not in columns]
    if missing:
        raise IngestError(path, f"missing required column(s): {', '.join(missing)}", row=1)
    unknown = [name for name in columns if name not in required and name not in optional]
    if unknown:
        raise IngestError(path, f"unknown column(s): {', '.join(unknown)}", row=1)
    return frame


def _records(path, frame: pd.DataFrame) -> Iterator[Tuple[int, tuple]]:
    # header is row 1; blank lines are kept by the reader so row numbers stay physical
    for offset, record in enumerate(frame.itertuples(index=False)):
        row_num = offset + 2
        if all(not isinstance(value, str) or value == '' for value in record):
            raise IngestError(path, "blank line", row=row_num)
        yield row_num, record


def _cell(path, row_num: int, column: str, value) -> str:
    if not isinstance(value, str) or value == '':
        raise IngestError(path, "empty value", row=row_num, column=column)
    return value


def _identifier(path, row_num: int, column: str, value) -> str:
    value = _cell(path, row_num, column, value)
    if not IDENTIFIER.match(value):
        raise IngestError(path, f"identifier {value!r} outside [A-Za-z0-9_-]", row=row_num, column=column)
    return value


def _count(path, row_num: int, column: str, value) -> int:
    value = _cell(path, row_num, column, value)
    if not NON_NEGATIVE_INT.match(value):
        raise IngestError(path, f"{value!r} is not a non-negative integer", row=row_num, column=column)
    return int(value)


def _year(path, row_num: int, column: str, value) -> int:
    value = _cell(path, row_num, column, value)
    if not YEAR.match(value):
        raise IngestError(path, f"{value!r} is not a year", row=row_num, column=column)
    return int(value)


def _real(path, row_num: int, column: str, value) -> float:
    value = _cell(path, row_num, column, value)
    try:
        number = float(value)
    except ValueError:
        raise IngestError(path, f"{value!r} is not a number", row=row_num, column=column) from None
    if not math.isfinite(number):
        raise IngestError(path, f"{value!r} is not finite", row=row_num, column=column)
    return number


def load_baselines(path) -> BaselineTable:
    frame = _read_table(path, BASELINES_COLUMNS)
    entries: Dict[Tuple[str, int], float] = {}
    first_seen: Dict[Tuple[str, int], int] = {}
    for row_num, record in _records(path, frame):
        field_id = _identifier(path, row_num, 'field_id', record.field_id)
        pub_year = _year(path, row_num, 'pub_year', record.pub_year)
        expected = _real(path, row_num, 'mean_citations', record.mean_citations)
        if not expected > 0:
            raise IngestError(path, f"mean_citations must be > 0, got {expected}", row=row_num, column='mean_citations')
        key = (field_id, pub_year)
        if key in entries:
            raise IngestError(path, f"duplicate cell {field_id}/{pub_year} (first at row {first_seen[key]})", row=row_num)
        entries[key] = expected
        first_seen[key] = row_num
    return BaselineTable(entries)


def load_corpus(papers_path, baselines_path=None) -> Corpus:
    """Validated corpus from papers.csv and, optionally, baselines.csv"""
    frame = _read_table(papers_path, PAPERS_REQUIRED, PAPERS_OPTIONAL)
    has_field = 'field_id' in frame.columns
    has_year = 'pub_year' in frame.columns

    papers_by_author: Dict[str, List[PaperRecord]] = {}
    first_seen: Dict[Tuple[str, str], int] = {}
    for row_num, record in _records(papers_path, frame):
        author_id = _identifier(papers_path, row_num, 'author_id', record.author_id)
        paper_id = _identifier(papers_path, row_num, 'paper_id', record.paper_id)
        citations = _count(papers_path, row_num, 'citations', record.citations)
        field_id = _identifier(papers_path, row_num, 'field_id', record.field_id) if has_field else None
        pub_year = _year(papers_path, row_num, 'pub_year', record.pub_year) if has_year else None

        key = (author_id, paper_id)
        if key in first_seen:
            raise IngestError(
                papers_path,
                f"duplicate paper {paper_id} for author {author_id} (rows {first_seen[key]} and {row_num})",
                row=row_num,
            )
        first_seen[key] = row_num
        papers_by_author.setdefault(author_id, []).append(PaperRecord(paper_id, citations, field_id, pub_year))

    baselines = load_baselines(baselines_path) if baselines_path else None
    authors = tuple(CitationProfile(author_id, tuple(papers)) for author_id, papers in papers_by_author.items())
    logger.info("loaded %d papers for %d authors from %s", len(frame), len(authors), papers_path)
    return Corpus(authors, baselines)


def _write_frame(rows: Iterable[Sequence[str]], columns: Sequence[str], path) -> None:
    frame = pd.DataFrame(list(rows), columns=list(columns), dtype=object)
    frame.to_csv(path, index=False, lineterminator='\n', encoding='utf-8')


def write_corpus(corpus: Corpus, papers_path, baselines_path=None) -> None:
    """papers.csv in the loader's format; metadata columns only when every paper has them"""
    with_metadata = bool(corpus.authors) and all(profile.has_metadata for profile in corpus.authors)
    columns = PAPERS_REQUIRED + (PAPERS_OPTIONAL if with_metadata else [])
    rows = []
    for profile in corpus.authors:
        for paper in profile.papers:
            row = [profile.author_id, paper.paper_id, str(int(paper.citations))]
            if with_metadata:
                row += [paper.field_id, str(paper.pub_year)]
            rows.append(row)
    _write_frame(rows, columns, papers_path)

    if baselines_path is not None and corpus.baselines is not None:
        baseline_rows = [
            [field_id, str(pub_year), repr(float(expected))]
            for (field_id, pub_year), expected in sorted(corpus.baselines.entries.items())
        ]
        _write_frame(baseline_rows, BASELINES_COLUMNS, baselines_path)


def write_indicators(vectors: Iterable[IndicatorVector], path) -> None:
    rows = [
        [vector.author_id] + [format_real(vector.get(name)) for name in FILE_ORDER]
        for vector in sorted(vectors, key=lambda v: v.author_id)
    ]
    _write_frame(rows, INDICATOR_COLUMNS, path)


def load_indicators(path) -> IndicatorMatrix:
    """Indicator matrix from indicators.csv; ncs/mncs kept only when present for every author"""
    frame = _read_table(path, INDICATOR_COLUMNS)
    authors = []
    columns: Dict[str, List[Optional[float]]] = {name: [] for name in FILE_ORDER}
    for row_num, record in _records(path, frame):
        authors.append(_identifier(path, row_num, 'author_id', record.author_id))
        for name in FILE_ORDER:
            value = getattr(record, name)
            if name in NORMALIZED and value == '':
                columns[name].append(None)
            else:
                columns[name].append(_real(path, row_num, name, value))

    names = []
    for name in TABLE_ORDER:
        values = columns[name]
        if any(v is None for v in values):
            if not all(v is None for v in values):
                logger.warning("%s missing for some authors; column left out", name)
            continue
        names.append(name)
    return IndicatorMatrix(tuple(authors), {name: tuple(columns[name]) for name in names})


def write_intervals(intervals, path) -> None:
    rows = [
        [i.author_id, i.indicator_name, format_real(i.point), format_real(i.lo), format_real(i.hi)]
        for i in intervals
    ]
    _write_frame(rows, ['author_id', 'indicator', 'point', 'lo', 'hi'], path)


def write_ranges(ranges, path) -> None:
    rows = [[r.author_id, r.indicator_name, format_real(r.range), format_real(r.log_range)] for r in ranges]
    _write_frame(rows, ['author_id', 'indicator', 'range', 'log_range'], path)


def write_regressions(regressions: Sequence[RegressionSummary], skipped: Sequence[Dict[str, object]], path) -> None:
    payload = {
        'regressions': [asdict(summary) for summary in regressions],
        'skipped': list(skipped),
    }
    _write_json(payload, path)


def write_correlations(report: CorrelationReport, csv_path, json_path) -> None:
    rows = [
        [name] + [format_real(value) for value in report.matrix[i]]
        for i, name in enumerate(report.names)
    ]
    _write_frame(rows, ['indicator'] + list(report.names), csv_path)
    payload = {
        'method': report.method,
        'subset': report.subset,
        'n_authors': report.n_authors,
        'undefined': list(report.undefined),
        'matrix': {
            name: {other: report.matrix[i][j] for j, other in enumerate(report.names)}
            for i, name in enumerate(report.names)
        },
    }
    _write_json(payload, json_path)


def write_sweep(rows: Sequence[SweepRow], path) -> None:
    _write_frame([[str(r.size), r.indicator, format_real(r.rho)] for r in rows], ['size', 'indicator', 'rho'], path)


def write_curve(points, path) -> None:
    _write_frame([[format_real(pt.x), format_real(pt.y)] for pt in points], ['x', 'y'], path)


def write_histogram(bins, path) -> None:
    _write_frame([[format_real(b.lo), format_real(b.hi), str(b.count)] for b in bins],
                 ['bin_lo', 'bin_hi', 'count'], path)


def write_mega_authors(authors, path) -> None:
    rows = [[a.author_id, str(a.p), format_real(a.c), format_real(a.iota_e)] for a in authors]
    _write_frame(rows, ['author_id', 'p', 'c', 'iota_e'], path)


def write_axioms(tallies, path) -> None:
    rows = [[t.indicator, t.axiom, str(t.trials), str(t.violations)] for t in tallies]
    _write_frame(rows, ['indicator', 'axiom', 'trials', 'violations'], path)


def _write_json(payload, path) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write('\n')
