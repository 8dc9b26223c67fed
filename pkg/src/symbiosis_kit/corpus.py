"""Manifest for the bundled case-study corpus.

The corpus lives in the repository's top-level `corpus/` directory: model
files, JSON Lines measurement logs, and golden outputs that every release
must regenerate byte-identically (see tests/test_corpus_golden.py).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


class CorpusNotFound(FileNotFoundError):
    pass


@dataclass(frozen=True)
class CorpusEntry:
    """One model plus the logs and golden files that exercise it."""

    model: str
    logs: tuple[str, ...]
    golden: tuple[str, ...]

    def resolve(self, root: Path) -> "CorpusEntry":
        return CorpusEntry(
            model=str(root / self.model),
            logs=tuple(str(root / p) for p in self.logs),
            golden=tuple(str(root / p) for p in self.golden),
        )


_JPMORGAN_LOGS = tuple(
    f"logs/jpmorgan_2014-{month:02d}.jsonl" for month in (1, 2, 3, 4, 5, 6, 7, 8, 9, 11)
)

_ENTRIES = (
    CorpusEntry(
        model="jpmorgan.sym",
        logs=_JPMORGAN_LOGS,
        golden=(
            "golden/jpmorgan_render_BO1.txt",
            "golden/jpmorgan_render_BO1.1.txt",
            "golden/jpmorgan_render_BO1.1.1.txt",
            "golden/jpmorgan_render_MG1.1.1.1.txt",
            "golden/jpmorgan_check.txt",
            "golden/jpmorgan_report_2014.txt",
            "golden/jpmorgan_report_2014.json",
            "golden/jpmorgan_report_2014.svg",
        ),
    ),
    CorpusEntry(
        model="anthem.sym",
        logs=("logs/anthem_2015.jsonl",),
        golden=(
            "golden/anthem_check.txt",
            "golden/anthem_report_2015.txt",
            "golden/anthem_report_2015.json",
        ),
    ),
    CorpusEntry(
        model="heartland_broken.sym",
        logs=(),
        golden=("golden/heartland_broken_check.txt",),
    ),
    CorpusEntry(
        model="heartland_fixed.sym",
        logs=(),
        golden=("golden/heartland_fixed_check.txt",),
    ),
)


def corpus_root(start: Path | None = None) -> Path:
    """Locate the corpus/ directory by walking up from this file (or `start`)."""
    origin = start if start is not None else Path(__file__).resolve()
    for parent in [origin] + list(origin.parents):
        candidate = parent / "corpus"
        if candidate.is_dir():
            return candidate
    raise CorpusNotFound("no corpus/ directory found above " + str(origin))


def corpus_manifest(root: Path | None = None) -> list[CorpusEntry]:
    """Entries with absolute paths, resolved against the located corpus root."""
    base = root if root is not None else corpus_root()
    return [entry.resolve(base) for entry in _ENTRIES]
