#!/usr/bin/env python3
"""
CLI interface for citecheck - author-level citation indicators and their validation

Commands:
    compute     papers.csv -> indicators.csv
    correlate   indicators.csv -> correlations.csv/.json (+ rho sweep)
    bootstrap   papers.csv -> intervals.csv, ranges.csv, regression.json
    simulate    two-paper curves and mega-citation normalisation
    generate    synthetic papers.csv (+ baselines.csv)
    axioms      axiom probe report for each indicator

Every command also writes a manifest (<output>.manifest.json) with its parameters,
seed and input digests.
"""

import argparse
import os
import sys
from typing import Callable, Dict, List, Optional

from colorama import just_fix_windows_console

from citecheck.axioms import PROBED_INDICATORS, axiom_report
from citecheck.bootstrap import stability_comparison
from citecheck.config import Settings, load_settings
from citecheck.errors import CitecheckError
from citecheck.indicators import compute_corpus
from citecheck.ingest import (
    load_corpus,
    load_indicators,
    write_axioms,
    write_correlations,
    write_corpus,
    write_curve,
    write_histogram,
    write_indicators,
    write_intervals,
    write_mega_authors,
    write_ranges,
    write_regressions,
    write_sweep,
)
from citecheck.manifest import build_manifest, manifest_path, write_manifest
from citecheck.profile import screen_authors
from citecheck.simulate import (
    GeneratorConfig,
    generate_corpus,
    mega_citation_normalization,
    two_paper_fixed_iota,
    two_paper_fixed_sum,
)
from citecheck.stats import correlation_matrix, sample_size_sweep, top_n_subset
from citecheck.utils import Colors, configure_logging

SCHEMAS = """file schemas (CSV: comma-separated, UTF-8, LF, header row, ids in [A-Za-z0-9_-]):
  papers.csv        author_id,paper_id,citations[,field_id,pub_year]
  baselines.csv     field_id,pub_year,mean_citations
  indicators.csv    author_id,p,c,mc,h,e,r,rm,ncs,mncs,iota_e  (ncs/mncs empty when unavailable)
  intervals.csv     author_id,indicator,point,lo,hi
  ranges.csv        author_id,indicator,range,log_range
  regression.json   {regressions: [{x_name,y_name,slope,intercept,r_squared,n_used,n_excluded}], skipped}
  correlations.csv  indicator,<one column per indicator>  (empty cell = undefined)
  sweep.csv         size,indicator,rho
  curves.csv        x,y
  histogram.csv     bin_lo,bin_hi,count
  mega_authors.csv  author_id,p,c,iota_e
  axioms.csv        indicator,axiom,trials,violations
"""


def seed_type(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def name_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(',') if item.strip()]


def size_list(text: str) -> List[int]:
    try:
        return [int(item) for item in name_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid size list {text!r}") from None


def sibling(path: str, suffix: str, extension: Optional[str] = None) -> str:
    """results/intervals.csv + _ranges -> results/intervals_ranges.csv"""
    root, ext = os.path.splitext(path)
    return f"{root}{suffix}{extension if extension is not None else ext}"


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def _parameters(args: argparse.Namespace) -> Dict[str, object]:
    skip = {'func', 'verbose', 'command', 'command_name'}
    return {key: value for key, value in vars(args).items() if key not in skip}


def _finish(args: argparse.Namespace, inputs: List[Optional[str]], outputs: List[str],
            seed: Optional[int] = None, anchor: Optional[str] = None) -> None:
    manifest = build_manifest(args.command_name, _parameters(args), seed=seed,
                              inputs=[path for path in inputs if path], outputs=outputs)
    path = manifest_path(anchor or outputs[0])
    write_manifest(manifest, path)
    for output in outputs:
        print(f"{Colors.GREEN}✅ Wrote {output}{Colors.RESET}")
    print(f"{Colors.BLUE}📋 Manifest: {path}{Colors.RESET}")


def cmd_compute(args: argparse.Namespace, settings: Settings) -> int:
    corpus = load_corpus(args.input, args.baselines)
    if args.require_normalized:
        if corpus.baselines is None:
            raise CitecheckError("--require-normalized needs --baselines")
        lacking = [p.author_id for p in corpus.authors if not p.has_metadata]
        if lacking:
            raise CitecheckError(f"{len(lacking)} authors lack field/year metadata, e.g. {lacking[0]}")

    year_range = None
    if args.first_year_from is not None or args.first_year_to is not None:
        year_range = (
            args.first_year_from if args.first_year_from is not None else -sys.maxsize,
            args.first_year_to if args.first_year_to is not None else sys.maxsize,
        )
    filtered, missing_year = screen_authors(corpus, args.min_papers, args.min_citations,
                                            year_range, strict_papers=args.strict_papers)
    if missing_year:
        print(f"{Colors.YELLOW}⚠️ {missing_year} authors rejected: no publication year{Colors.RESET}")
    print(f"{Colors.BLUE}📁 {len(filtered)} of {len(corpus)} authors pass the filters{Colors.RESET}")

    _ensure_parent(args.output)
    write_indicators(compute_corpus(filtered.authors, filtered.baselines), args.output)
    _finish(args, [args.input, args.baselines], [args.output])
    return 0


def cmd_correlate(args: argparse.Namespace, settings: Settings) -> int:
    if (args.top_n is not None or args.sweep_sizes) and not args.by:
        raise CitecheckError("--top-n and --sweep-sizes need --by")
    matrix = load_indicators(args.input)

    subset: Dict[str, object] = {'kind': 'all'}
    analysed = matrix
    if args.top_n is not None:
        analysed = top_n_subset(matrix, args.by, args.top_n)
        subset = {'kind': 'top_n', 'by': args.by, 'n': args.top_n}

    report = correlation_matrix(analysed, args.method, workers=args.workers, subset=subset)
    if report.undefined:
        print(f"{Colors.YELLOW}⚠️ Undefined (constant) indicators: {', '.join(report.undefined)}{Colors.RESET}")

    _ensure_parent(args.output)
    json_path = sibling(args.output, '', '.json')
    write_correlations(report, args.output, json_path)
    outputs = [args.output, json_path]

    if args.sweep_sizes:
        sweep_path = sibling(args.output, '_sweep')
        write_sweep(sample_size_sweep(matrix, args.by, args.sweep_sizes, args.against), sweep_path)
        outputs.append(sweep_path)

    _finish(args, [args.input], outputs)
    return 0


def cmd_bootstrap(args: argparse.Namespace, settings: Settings) -> int:
    corpus = load_corpus(args.input)
    subset, _ = screen_authors(corpus, args.min_papers, args.min_citations,
                               strict_papers=not args.inclusive_papers)
    comparison = '>=' if args.inclusive_papers else '>'
    print(f"{Colors.BLUE}📁 {len(subset)} authors with P {comparison} {args.min_papers} "
          f"and C >= {args.min_citations}{Colors.RESET}")
    if not subset.authors:
        raise CitecheckError("no author passes the bootstrap filters")

    result = stability_comparison(subset, args.indicators, args.replications, args.confidence,
                                  args.seed, workers=args.workers)
    for note in result.skipped:
        print(f"{Colors.YELLOW}⚠️ Regression {note['y']} ~ {note['x']} skipped: {note['reason']}{Colors.RESET}")
    for summary in result.regressions:
        print(f"{Colors.CYAN}📈 log range {summary.y_name} ~ {summary.x_name}: "
              f"beta={summary.slope:.3f} R^2={summary.r_squared:.3f} "
              f"(n={summary.n_used}, excluded={summary.n_excluded}){Colors.RESET}")

    _ensure_parent(args.output)
    ranges_path = sibling(args.output, '_ranges')
    write_intervals(result.intervals, args.output)
    write_ranges(result.ranges, ranges_path)
    outputs = [args.output, ranges_path]
    if result.regressions or result.skipped:
        regression_path = sibling(args.output, '_regression', '.json')
        write_regressions(result.regressions, result.skipped, regression_path)
        outputs.append(regression_path)

    _finish(args, [args.input], outputs, seed=args.seed)
    return 0


def cmd_simulate(args: argparse.Namespace, settings: Settings) -> int:
    _ensure_parent(args.output)
    if args.simulation == 'two-paper-sum':
        points = two_paper_fixed_sum(args.total, args.step)
        write_curve(points, args.output)
        _finish(args, [], [args.output])
    elif args.simulation == 'two-paper-iota':
        points = two_paper_fixed_iota(args.iota, args.step)
        write_curve(points, args.output)
        top = max(points, key=lambda pt: pt.y)
        print(f"{Colors.CYAN}📈 max total {top.y:.4f} at c_a = {top.x:.4f}{Colors.RESET}")
        _finish(args, [], [args.output])
    else:
        corpus = load_corpus(args.input)
        result = mega_citation_normalization(corpus, args.target, args.min_papers, args.min_citations, args.bins)
        print(f"{Colors.BLUE}📁 {len(result.authors)} authors with P >= {args.min_papers} "
              f"and C >= {args.min_citations}{Colors.RESET}")
        authors_path = sibling(args.output, '_authors')
        write_histogram(result.histogram, args.output)
        write_mega_authors(result.authors, authors_path)
        _finish(args, [args.input], [args.output, authors_path])
    return 0


def cmd_generate(args: argparse.Namespace, settings: Settings) -> int:
    config = GeneratorConfig(
        n_authors=args.authors,
        papers_law=args.papers_law,
        papers_n=args.papers_n,
        papers_p=args.papers_p,
        papers_constant=args.papers_constant,
        citations_law=args.citations_law,
        citations_mu=args.citations_mu,
        citations_sigma=args.citations_sigma,
        citations_author_sigma=args.citations_author_sigma,
        citations_constant=args.citations_constant,
        seed=args.seed,
        with_metadata=args.with_metadata,
        n_fields=args.fields,
        year_range=(args.year_from, args.year_to),
    )
    corpus = generate_corpus(config)

    os.makedirs(args.output, exist_ok=True)
    papers_path = os.path.join(args.output, 'papers.csv')
    outputs = [papers_path]
    baselines_path = None
    if config.with_metadata:
        baselines_path = os.path.join(args.output, 'baselines.csv')
        outputs.append(baselines_path)
    write_corpus(corpus, papers_path, baselines_path)
    print(f"{Colors.YELLOW}⚠️ Synthetic data: generator defaults carry no empirical provenance{Colors.RESET}")
    _finish(args, [], outputs, seed=args.seed, anchor=args.output)
    return 0


def cmd_axioms(args: argparse.Namespace, settings: Settings) -> int:
    tallies = axiom_report(args.indicators, args.trials, args.seed, args.max_papers, args.max_citations)
    for tally in tallies:
        if tally.violations:
            print(f"  {Colors.RED}{tally.indicator:>7} ✗ {tally.axiom}{Colors.RESET} "
                  f"({tally.violations}/{tally.trials})")
    _ensure_parent(args.output)
    write_axioms(tallies, args.output)
    _finish(args, [], [args.output], seed=args.seed)
    return 0


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='citecheck',
        description='Author-level citation indicators, stability intervals and correlation analyses',
        epilog=SCHEMAS + '\nExample: citecheck generate --authors 1000 --output data\n'
                         'Example: citecheck compute --input data/papers.csv',
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('-v', '--verbose', action='store_true', help='Show detailed progress information')
    commands = parser.add_subparsers(dest='command', required=True)

    def command(name: str, func: Callable, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text, description=help_text)
        sub.set_defaults(func=func, command_name=name)
        return sub

    compute = command('compute', cmd_compute, 'Compute every indicator for each author')
    compute.add_argument('--input', required=True, help='papers.csv')
    compute.add_argument('--baselines', help='baselines.csv (enables ncs/mncs)')
    compute.add_argument('--min-papers', type=int, default=settings.min_papers,
                         help=f'Keep authors with at least this many papers (default: {settings.min_papers})')
    compute.add_argument('--strict-papers', action='store_true',
                         help='Require strictly more than --min-papers papers')
    compute.add_argument('--min-citations', type=int, default=settings.min_citations,
                         help=f'Keep authors with at least this many citations (default: {settings.min_citations})')
    compute.add_argument('--first-year-from', type=int, help='Earliest first-publication year')
    compute.add_argument('--first-year-to', type=int, help='Latest first-publication year')
    compute.add_argument('--require-normalized', action='store_true',
                         help='Fail unless ncs/mncs can be computed for every author')
    compute.add_argument('--output', default='indicators.csv', help='Output file (default: indicators.csv)')

    correlate = command('correlate', cmd_correlate, 'Pearson or Spearman correlations between indicators')
    correlate.add_argument('--input', required=True, help='indicators.csv')
    correlate.add_argument('--method', choices=['pearson', 'spearman'], default='pearson')
    correlate.add_argument('--by', default='iota_e', help='Ranking indicator for --top-n and --sweep-sizes')
    correlate.add_argument('--top-n', type=int, help=f'Restrict to the top N authors (e.g. {settings.top_n})')
    correlate.add_argument('--sweep-sizes', type=size_list, help='Comma-separated top-N sizes for a rho sweep')
    correlate.add_argument('--against', type=name_list, help='Indicators compared with --by in the sweep')
    correlate.add_argument('--workers', type=int, default=settings.workers)
    correlate.add_argument('--output', default='correlations.csv',
                           help='Output CSV; JSON and sweep files are written beside it')

    bootstrap = command('bootstrap', cmd_bootstrap, 'Bootstrap stability intervals and log-range regressions')
    bootstrap.add_argument('--input', required=True, help='papers.csv')
    bootstrap.add_argument('--indicators', type=name_list, default=['iota_e', 'c', 'r'],
                           help='Comma-separated indicators (default: iota_e,c,r)')
    bootstrap.add_argument('--replications', type=int, default=settings.replications)
    bootstrap.add_argument('--confidence', type=float, default=settings.confidence)
    bootstrap.add_argument('--seed', type=seed_type, default=settings.seed)
    bootstrap.add_argument('--min-papers', type=int, default=settings.bootstrap_min_papers,
                           help=f'Keep authors with more than this many papers (default: {settings.bootstrap_min_papers})')
    bootstrap.add_argument('--inclusive-papers', action='store_true', help='Use >= instead of > for --min-papers')
    bootstrap.add_argument('--min-citations', type=int, default=settings.bootstrap_min_citations)
    bootstrap.add_argument('--workers', type=int, default=settings.workers)
    bootstrap.add_argument('--output', default='intervals.csv')

    simulate = command('simulate', cmd_simulate, 'Two-paper thought experiments and mega-citation normalisation')
    simulations = simulate.add_subparsers(dest='simulation', required=True)
    fixed_sum = simulations.add_parser('two-paper-sum', help='iota_E over c_b at a fixed total')
    fixed_sum.add_argument('--total', type=int, default=100)
    fixed_sum.add_argument('--step', type=int, default=1)
    fixed_sum.add_argument('--output', default='curves.csv')
    fixed_iota = simulations.add_parser('two-paper-iota', help='Total citations over c_a at a fixed iota_E')
    fixed_iota.add_argument('--iota', type=float, default=100.0)
    fixed_iota.add_argument('--step', type=float, default=1.0)
    fixed_iota.add_argument('--output', default='curves.csv')
    mega = simulations.add_parser('mega', help='Rescale every author to the same total citations')
    mega.add_argument('--input', required=True, help='papers.csv')
    mega.add_argument('--target', type=int, default=settings.target_total)
    mega.add_argument('--min-papers', type=int, default=settings.mega_min_papers)
    mega.add_argument('--min-citations', type=int, default=settings.mega_min_citations)
    mega.add_argument('--bins', type=int, default=settings.bins)
    mega.add_argument('--output', default='histogram.csv')

    defaults = GeneratorConfig()
    generate = command('generate', cmd_generate, 'Write a seeded synthetic corpus')
    generate.add_argument('--authors', type=int, default=defaults.n_authors)
    generate.add_argument('--seed', type=seed_type, default=settings.seed)
    generate.add_argument('--papers-law', choices=['negbin', 'constant'], default=defaults.papers_law)
    generate.add_argument('--papers-n', type=float, default=defaults.papers_n)
    generate.add_argument('--papers-p', type=float, default=defaults.papers_p)
    generate.add_argument('--papers-constant', type=int, default=defaults.papers_constant)
    generate.add_argument('--citations-law', choices=['lognormal', 'constant'], default=defaults.citations_law)
    generate.add_argument('--citations-mu', type=float, default=defaults.citations_mu)
    generate.add_argument('--citations-sigma', type=float, default=defaults.citations_sigma,
                          help="Spread of citations across one author's papers")
    generate.add_argument('--citations-author-sigma', type=float, default=defaults.citations_author_sigma,
                          help='Spread of the per-author offset on the log scale (0 disables it)')
    generate.add_argument('--citations-constant', type=int, default=defaults.citations_constant)
    generate.add_argument('--with-metadata', action='store_true', help='Add field/year keys and baselines.csv')
    generate.add_argument('--fields', type=int, default=defaults.n_fields)
    generate.add_argument('--year-from', type=int, default=defaults.year_range[0])
    generate.add_argument('--year-to', type=int, default=defaults.year_range[1])
    generate.add_argument('--output', default='.', help='Output directory (default: current directory)')

    axioms = command('axioms', cmd_axioms, 'Probe each indicator for axiom violations')
    axioms.add_argument('--indicators', type=name_list, default=list(PROBED_INDICATORS))
    axioms.add_argument('--trials', type=int, default=1000)
    axioms.add_argument('--seed', type=seed_type, default=settings.seed)
    axioms.add_argument('--max-papers', type=int, default=12)
    axioms.add_argument('--max-citations', type=int, default=30)
    axioms.add_argument('--output', default='axioms.csv')

    # nested simulate subcommands inherit the parent's handler
    for sub in (fixed_sum, fixed_iota, mega):
        sub.set_defaults(func=cmd_simulate, command_name='simulate')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    just_fix_windows_console()
    verbose = False
    try:
        settings = load_settings()
        args = build_parser(settings).parse_args(argv)
        verbose = args.verbose
        configure_logging(verbose)

        print(f"{Colors.CYAN}🔍 citecheck {args.command}{Colors.RESET}")
        return args.func(args, settings)

    except KeyboardInterrupt:
        print(f"\n{Colors.YELLOW}⚠️ Interrupted by user{Colors.RESET}")
        return 130
    except FileNotFoundError as e:
        print(f"{Colors.RED}❌ File not found: {e}{Colors.RESET}")
        return 1
    except (CitecheckError, OSError) as e:
        print(f"{Colors.RED}❌ Error: {e}{Colors.RESET}")
        if verbose:
            import traceback
            traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
