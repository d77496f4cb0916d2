"""Embedded dataset fixtures.

Karate plus two synthetic sanity graphs ship with the package. Football
cannot be redistributed here; its loader picks up user-provided files
dropped into the data directory (see data/football.README). Larger
datasets are always ingested from user-supplied paths.
"""

from __future__ import annotations

from pathlib import Path

from .errors import FixtureUnavailable
from .graph import Partition, WeightedGraph
from .io import load_dataset

DATA_DIR = Path(__file__).parent / "data"

FIXTURES = {
    "karate": ("karate.edges", "karate.labels"),
    "football": ("football.edges", "football.labels"),
    "two_triangles": ("two_triangles.edges", "two_triangles.labels"),
    "single_edge": ("single_edge.edges", None),
}


def is_fixture(name) -> bool:
    return isinstance(name, str) and name in FIXTURES


def fixture_available(name: str) -> bool:
    edge_file, _ = FIXTURES[name]
    return (DATA_DIR / edge_file).exists()


def load_fixture(name: str) -> tuple[WeightedGraph, Partition | None]:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; have {sorted(FIXTURES)}")
    edge_file, label_file = FIXTURES[name]
    edge_path = DATA_DIR / edge_file
    if not edge_path.exists():
        raise FixtureUnavailable(
            f"fixture {name!r} has no bundled data; see {DATA_DIR / (name + '.README')}"
        )
    label_path = DATA_DIR / label_file if label_file else None
    if label_path is not None and not label_path.exists():
        label_path = None
    return load_dataset(edge_path, label_path)
