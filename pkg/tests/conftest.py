import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from tagrec.corpus import Interaction, build_graph, filter_by_degree, temporal_split
from tagrec.profiles import build_profiles
from tagrec.synthetic import SyntheticSpec, generate_interactions


def make_graph(rows):
    """Graph from (user, item, tag[, timestamp]) shorthand tuples."""
    records = []
    for i, row in enumerate(rows):
        ts = row[3] if len(row) > 3 else i
        records.append(Interaction(row[0], row[1], row[2], ts))
    return build_graph(records)


@pytest.fixture
def tiny_split():
    """Small deterministic corpus with a proper train/test split."""
    spec = SyntheticSpec(
        n_users=40,
        n_items=200,
        n_tags=80,
        n_communities=4,
        triples_per_user=24,
        in_community_prob=0.9,
        seed=11,
    )
    graph = build_graph(generate_interactions(spec))
    filtered = filter_by_degree(graph, 2)
    split = temporal_split(filtered, 0.8)
    return split, build_profiles(split.train)


@pytest.fixture(scope="session")
def benchmark_corpus():
    """The default benchmark corpus, prepared once per session (slow)."""
    spec = SyntheticSpec()
    graph = build_graph(generate_interactions(spec))
    filtered = filter_by_degree(graph, 5)
    split = temporal_split(filtered, 0.8)
    profiles = build_profiles(split.train)
    return split, profiles
