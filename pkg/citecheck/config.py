"""
Run settings: built-in defaults, then .citecheckrc, then CITECHECK_* environment variables.

The defaults are the parameters the analysis is usually run with: authors with at least
twenty papers, a bootstrap subset of authors with more than fifty papers and at least one
citation, 1,000 replications, 95 percent intervals, a top-10,000 subset and a one-million
citation target for mega normalisation.
"""

import dataclasses
import os
from dataclasses import dataclass, fields
from typing import Any, Dict, List, Optional, Tuple

from citecheck.errors import ConfigError

RC_FILE = '.citecheckrc'
ENV_PREFIX = 'CITECHECK_'


@dataclass(frozen=True)
class Settings:
    min_papers: int = 20
    min_citations: int = 0
    bootstrap_min_papers: int = 50
    bootstrap_min_citations: int = 1
    replications: int = 1000
    confidence: float = 0.95
    top_n: int = 10000
    target_total: int = 1_000_000
    mega_min_papers: int = 20
    mega_min_citations: int = 100
    bins: int = 50
    seed: int = 0
    workers: int = 1

    def validate(self) -> "Settings":
        for name in ('min_papers', 'min_citations', 'bootstrap_min_papers', 'bootstrap_min_citations',
                     'mega_min_papers', 'mega_min_citations'):
            if getattr(self, name) < 0:
                raise ConfigError(name, "must be >= 0")
        for name in ('replications', 'top_n', 'target_total', 'bins', 'workers'):
            if getattr(self, name) < 1:
                raise ConfigError(name, "must be >= 1")
        if not 0.0 < self.confidence < 1.0:
            raise ConfigError('confidence', "must lie strictly between 0 and 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError('seed', "must be an unsigned 64-bit integer")
        return self

    def as_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


def _coerce(name: str, raw: str, source: str) -> Any:
    kinds = {f.name: f.type for f in fields(Settings)}
    if name not in kinds:
        raise ConfigError(name, f"unknown setting (from {source})")
    kind = kinds[name]
    try:
        if kind in (float, 'float'):
            return float(raw)
        return int(raw.replace('_', ''))
    except ValueError:
        raise ConfigError(name, f"cannot parse {raw!r} (from {source})") from None


def load_rc_file(directory: str = '.') -> List[Tuple[str, str]]:
    """Read key = value pairs from .citecheckrc, skipping comments and blank lines"""
    rc_path = os.path.join(directory, RC_FILE)
    pairs = []
    if os.path.exists(rc_path):
        with open(rc_path, 'r', encoding='utf-8') as f:
            for line_num, line in enumerate(f, 1):
                line = line.strip()
                if not line or line.startswith('#'):
                    continue
                if '=' not in line:
                    raise ConfigError(f"{RC_FILE}:{line_num}", "expected 'key = value'")
                key, value = line.split('=', 1)
                pairs.append((key.strip().replace('-', '_'), value.strip()))
    return pairs


def load_settings(directory: str = '.', environ: Optional[Dict[str, str]] = None) -> Settings:
    """Resolve settings from defaults, the rc file and the environment"""
    if environ is None:
        environ = dict(os.environ)
    overrides: Dict[str, Any] = {}

    for key, value in load_rc_file(directory):
        overrides[key] = _coerce(key, value, RC_FILE)

    for f in fields(Settings):
        env_name = ENV_PREFIX + f.name.upper()
        value = environ.get(env_name)
        if value is not None:
            overrides[f.name] = _coerce(f.name, value, env_name)

    return dataclasses.replace(Settings(), **overrides).validate()
