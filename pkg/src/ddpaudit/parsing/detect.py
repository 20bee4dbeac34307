"""Platform detection by manifest signature paths."""

from __future__ import annotations

import os
from pathlib import Path

from ..errors import AmbiguousPlatformError
from ..model import Platform
from .manifest import known_manifests


def tree_files(root) -> list[str]:
    """All file paths under root, relative, posix-style, sorted."""
    root = Path(root)
    if not root.is_dir():
        raise NotADirectoryError(f"not a readable directory: {root}")
    out = []
    for base, _dirs, files in os.walk(root):
        for name in files:
            rel = Path(base, name).relative_to(root).as_posix()
            out.append(rel)
    return sorted(out)


def detect_platform(root) -> Platform:
    """Pick the platform whose manifest signatures match the most paths.

    Returns GENERIC when nothing matches at least one signature; a tie
    between matching platforms is an explicit ambiguity error rather than
    an arbitrary pick.
    """
    files = set(tree_files(root))
    scores: dict[Platform, int] = {}
    for manifest in known_manifests():
        scores[manifest.platform] = sum(1 for sig in manifest.signatures if sig in files)
    best = max(scores.values(), default=0)
    if best == 0:
        return Platform.GENERIC
    winners = [p for p, s in scores.items() if s == best]
    if len(winners) > 1:
        raise AmbiguousPlatformError(sorted(p.value for p in winners))
    return winners[0]
