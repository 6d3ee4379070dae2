__version__ = '0.1'

from .indicators import compute_all, euclidean_index, h_index
from .ingest import load_corpus, write_indicators
from .profile import CitationProfile, Corpus, PaperRecord, filter_authors

__all__ = [
    'CitationProfile',
    'Corpus',
    'PaperRecord',
    'compute_all',
    'euclidean_index',
    'filter_authors',
    'h_index',
    'load_corpus',
    'write_indicators',
]
