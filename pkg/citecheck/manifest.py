"""
Run manifests: what was run, with which parameters, on which inputs.

A manifest holds no timestamps or host details, so the same command on the same inputs
writes the same manifest byte for byte.
"""

import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from citecheck import __version__
from citecheck.utils import file_digest


@dataclass(frozen=True)
class RunManifest:
    command: str
    parameters: Dict[str, Any]
    seed: Optional[int] = None
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    version: str = __version__

    def as_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'parameters': self.parameters,
            'seed': self.seed,
            'inputs': self.inputs,
            'outputs': self.outputs,
            'version': self.version,
        }


def build_manifest(command: str, parameters: Dict[str, Any], seed: Optional[int] = None,
                   inputs: Optional[List[str]] = None, outputs: Optional[List[str]] = None) -> RunManifest:
    """Manifest with sha256 digests of every input file, keyed by the path as given"""
    digests = {}
    for path in inputs or []:
        if path:
            digests[str(path)] = file_digest(path)
    return RunManifest(
        command=command,
        parameters=dict(sorted(parameters.items())),
        seed=seed,
        inputs=digests,
        outputs=[os.path.basename(path) for path in outputs or []],
    )


def manifest_path(output_path: str) -> str:
    """results/indicators.csv -> results/indicators.manifest.json"""
    if os.path.isdir(output_path):
        return os.path.join(output_path, 'manifest.json')
    root, _ = os.path.splitext(output_path)
    return root + '.manifest.json'


def write_manifest(manifest: RunManifest, path: str) -> None:
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(manifest.as_dict(), f, indent=2, sort_keys=True)
        f.write('\n')
