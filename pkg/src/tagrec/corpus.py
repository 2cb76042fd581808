"""Tripartite interaction corpus: parsing, graph building, filtering, splitting.

Input data is TSV with four columns (user, item, tag, timestamp), one
interaction per line. External string ids are interned to dense integer
indices; the graph keeps the deduplicated triple store plus the two
user-side projections (items per user, tags per user) that the profile
and clustering stages consume.
"""

import math
from collections import defaultdict, deque
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "DataError",
    "Interaction",
    "IdTable",
    "TripartiteGraph",
    "TestSet",
    "SplitCorpus",
    "parse_triples",
    "read_triples",
    "write_triples",
    "build_graph",
    "filter_by_degree",
    "temporal_split",
    "split_summary",
    "write_summary",
]


class DataError(Exception):
    """Malformed or unusable input data (maps to CLI exit code 2)."""


@dataclass(frozen=True, slots=True)
class Interaction:
    """A single user-item-tag annotation event."""

    user: str
    item: str
    tag: str
    timestamp: int


class IdTable:
    """External string ids interned to dense indices in first-appearance order."""

    __slots__ = ("_ids", "_index")

    def __init__(self):
        self._ids: list[str] = []
        self._index: dict[str, int] = {}

    def intern(self, ext: str) -> int:
        idx = self._index.get(ext)
        if idx is None:
            idx = len(self._ids)
            self._index[ext] = idx
            self._ids.append(ext)
        return idx

    def index_of(self, ext: str) -> int:
        return self._index[ext]

    def id_of(self, idx: int) -> str:
        return self._ids[idx]

    def __contains__(self, ext) -> bool:
        return ext in self._index

    def __len__(self) -> int:
        return len(self._ids)

    def __iter__(self):
        return iter(self._ids)

    def __eq__(self, other):
        return isinstance(other, IdTable) and self._ids == other._ids

    def __repr__(self):
        return f"IdTable({len(self._ids)} ids)"


class TripartiteGraph:
    """Interned users/items/tags plus the triple store and user projections.

    ``user_items[u]`` / ``user_tags[u]`` hold the distinct item / tag indices
    occurring in any of user ``u``'s triples. Every dense index is referenced
    by at least one triple; construction guarantees this.
    """

    __slots__ = ("users", "items", "tags", "triples", "user_items", "user_tags")

    def __init__(self, users, items, tags, triples, user_items, user_tags):
        self.users: IdTable = users
        self.items: IdTable = items
        self.tags: IdTable = tags
        self.triples: list[tuple[int, int, int, int]] = triples
        self.user_items: list[set[int]] = user_items
        self.user_tags: list[set[int]] = user_tags

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def n_items(self) -> int:
        return len(self.items)

    @property
    def n_tags(self) -> int:
        return len(self.tags)

    @property
    def n_triples(self) -> int:
        return len(self.triples)

    def interactions(self):
        """Yield the stored triples as externally-identified records, in storage order."""
        for u, r, t, ts in self.triples:
            yield Interaction(self.users.id_of(u), self.items.id_of(r), self.tags.id_of(t), ts)

    def __eq__(self, other):
        return (
            isinstance(other, TripartiteGraph)
            and self.users == other.users
            and self.items == other.items
            and self.tags == other.tags
            and self.triples == other.triples
        )

    def __repr__(self):
        return (
            f"TripartiteGraph(users={self.n_users}, items={self.n_items}, "
            f"tags={self.n_tags}, triples={self.n_triples})"
        )


def parse_triples(lines) -> list[Interaction]:
    """Parse TSV interaction records from an iterable of text lines.

    Blank lines and ``#``-prefixed comment lines are skipped. Raises
    DataError naming the 1-based line number for malformed records
    (wrong field count, empty ids, bad timestamp).
    """
    records = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 4:
            raise DataError(f"line {lineno}: expected 4 tab-separated fields, got {len(fields)}")
        user, item, tag, ts_text = fields
        if not user or not item or not tag:
            raise DataError(f"line {lineno}: empty id field")
        try:
            ts = int(ts_text)
        except ValueError:
            raise DataError(f"line {lineno}: timestamp {ts_text!r} is not an integer") from None
        if ts < 0:
            raise DataError(f"line {lineno}: negative timestamp {ts}")
        records.append(Interaction(user, item, tag, ts))
    return records


def read_triples(path) -> list[Interaction]:
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as fh:
            return parse_triples(fh)
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: {exc}") from None
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_triples(interactions, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for rec in interactions:
            fh.write(f"{rec.user}\t{rec.item}\t{rec.tag}\t{rec.timestamp}\n")


def build_graph(interactions) -> TripartiteGraph:
    """Intern ids in first-appearance order and collapse exact duplicate records.

    Duplicates are records equal in all four fields; binary profiles carry no
    multiplicity, so one copy suffices.
    """
    users, items, tags = IdTable(), IdTable(), IdTable()
    triples = []
    seen = set()
    for rec in interactions:
        quad = (users.intern(rec.user), items.intern(rec.item), tags.intern(rec.tag), rec.timestamp)
        if quad in seen:
            continue
        seen.add(quad)
        triples.append(quad)
    user_items = [set() for _ in range(len(users))]
    user_tags = [set() for _ in range(len(users))]
    for u, r, t, _ in triples:
        user_items[u].add(r)
        user_tags[u].add(t)
    return TripartiteGraph(users, items, tags, triples, user_items, user_tags)


_USER, _ITEM, _TAG = 0, 1, 2


def filter_by_degree(graph: TripartiteGraph, threshold: int, degree_mode: str = "triples") -> TripartiteGraph:
    """Iteratively drop users/items/tags whose degree falls below ``threshold``.

    Degree is the number of surviving triples containing the node (the
    default ``degree_mode="triples"``) or the number of distinct surviving
    neighbor nodes (``degree_mode="neighbors"``). Removing a node removes all
    its triples, which may push other nodes under the threshold; pruning
    repeats until no node is below it. Survivors are re-interned compactly,
    so the result may be the empty graph.
    """
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    if degree_mode not in ("triples", "neighbors"):
        raise ValueError(f"unknown degree_mode {degree_mode!r}")

    n_nodes = (graph.n_users, graph.n_items, graph.n_tags)
    if threshold == 0 or graph.n_triples == 0:
        return build_graph(graph.interactions())

    node_triples = tuple([[] for _ in range(n)] for n in n_nodes)
    for tid, (u, r, t, _) in enumerate(graph.triples):
        node_triples[_USER][u].append(tid)
        node_triples[_ITEM][r].append(tid)
        node_triples[_TAG][t].append(tid)

    if degree_mode == "triples":
        deg = tuple([len(lst) for lst in node_triples[kind]] for kind in (_USER, _ITEM, _TAG))
        pair_counts = None
    else:
        deg = tuple([0] * n for n in n_nodes)
        pair_counts = (defaultdict(int), defaultdict(int), defaultdict(int))  # ur, ut, rt
        for u, r, t, _ in graph.triples:
            for pc, key, a, b in _triple_pairs(pair_counts, u, r, t):
                if pc[key] == 0:
                    deg[a[0]][a[1]] += 1
                    deg[b[0]][b[1]] += 1
                pc[key] += 1

    removed = tuple([False] * n for n in n_nodes)
    alive = [True] * graph.n_triples
    queue = deque(
        (kind, idx)
        for kind in (_USER, _ITEM, _TAG)
        for idx in range(n_nodes[kind])
        if deg[kind][idx] < threshold
    )
    while queue:
        kind, idx = queue.popleft()
        if removed[kind][idx]:
            continue
        removed[kind][idx] = True
        for tid in node_triples[kind][idx]:
            if not alive[tid]:
                continue
            alive[tid] = False
            u, r, t, _ = graph.triples[tid]
            if pair_counts is None:
                for kind2, idx2 in ((_USER, u), (_ITEM, r), (_TAG, t)):
                    deg[kind2][idx2] -= 1
                    if deg[kind2][idx2] < threshold and not removed[kind2][idx2]:
                        queue.append((kind2, idx2))
            else:
                for pc, key, a, b in _triple_pairs(pair_counts, u, r, t):
                    pc[key] -= 1
                    if pc[key] == 0:
                        for kind2, idx2 in (a, b):
                            deg[kind2][idx2] -= 1
                            if deg[kind2][idx2] < threshold and not removed[kind2][idx2]:
                                queue.append((kind2, idx2))

    survivors = (
        Interaction(graph.users.id_of(u), graph.items.id_of(r), graph.tags.id_of(t), ts)
        for tid, (u, r, t, ts) in enumerate(graph.triples)
        if alive[tid]
    )
    return build_graph(survivors)


def _triple_pairs(pair_counts, u, r, t):
    ur, ut, rt = pair_counts
    return (
        (ur, (u, r), (_USER, u), (_ITEM, r)),
        (ut, (u, t), (_USER, u), (_TAG, t)),
        (rt, (r, t), (_ITEM, r), (_TAG, t)),
    )


@dataclass(frozen=True)
class TestSet:
    """Held-out items for one user.

    ``items`` are indices in the training graph's item table; ``unreachable``
    are external ids of test items with no training occurrence at all (they
    can never be recommended but still count toward the set size).
    """

    items: frozenset[int]
    unreachable: frozenset[str]

    def __len__(self) -> int:
        return len(self.items) + len(self.unreachable)


@dataclass
class SplitCorpus:
    """A temporal train/test split.

    ``test_sets`` is keyed by training-graph user index; ``test_triples``
    keeps the raw held-out records (external ids) for persistence.
    """

    train: TripartiteGraph
    test_sets: dict[int, TestSet]
    test_triples: list[Interaction]
    split_ratio: float
    realized_train_fraction: float


def temporal_split(graph: TripartiteGraph, ratio: float) -> SplitCorpus:
    """Per-user temporal split: each user's latest interactions are held out.

    For each user the latest ``ceil((1-ratio) * n_u)`` triples (ordered by
    timestamp, ties by item then tag index) go to test, the rest to train,
    clamped so every user keeps at least one triple on each side. A user's
    test item set is their distinct test items minus their training items;
    when that subtraction empties the set, the raw distinct test items are
    used so the set is never empty.
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError("ratio must be strictly between 0 and 1")
    if graph.n_triples == 0:
        raise DataError("cannot split an empty graph")

    per_user = [[] for _ in range(graph.n_users)]
    for tid, (u, _, _, _) in enumerate(graph.triples):
        per_user[u].append(tid)

    test_ids = set()
    for u, tids in enumerate(per_user):
        if len(tids) < 2:
            raise DataError(
                f"user {graph.users.id_of(u)!r} has {len(tids)} triple(s); need at least 2 to split"
            )
        order = sorted(tids, key=lambda tid: (graph.triples[tid][3], graph.triples[tid][1], graph.triples[tid][2]))
        n_test = math.ceil((1.0 - ratio) * len(order))
        n_test = max(1, min(n_test, len(order) - 1))
        test_ids.update(order[len(order) - n_test :])

    train_inter, test_inter = [], []
    for tid, rec in enumerate(graph.interactions()):
        (test_inter if tid in test_ids else train_inter).append(rec)

    train = build_graph(train_inter)

    test_items_ext = defaultdict(set)
    for rec in test_inter:
        test_items_ext[rec.user].add(rec.item)

    test_sets = {}
    for ext_user, ext_items in test_items_ext.items():
        u = train.users.index_of(ext_user)
        reachable, unreachable = set(), set()
        for ext in ext_items:
            if ext in train.items:
                reachable.add(train.items.index_of(ext))
            else:
                unreachable.add(ext)
        fresh = reachable - train.user_items[u]
        if fresh or unreachable:
            test_sets[u] = TestSet(frozenset(fresh), frozenset(unreachable))
        else:
            # every test item was already trained on; keep them so the set is non-empty
            test_sets[u] = TestSet(frozenset(reachable), frozenset())

    realized = len(train_inter) / graph.n_triples
    return SplitCorpus(train, test_sets, test_inter, ratio, realized)


def split_summary(graph: TripartiteGraph, split: SplitCorpus) -> dict:
    """Node/triple counts for the pre-split graph and both subsets."""
    test_users = {rec.user for rec in split.test_triples}
    test_items = {rec.item for rec in split.test_triples}
    test_tags = {rec.tag for rec in split.test_triples}
    return {
        "total_users": graph.n_users,
        "total_items": graph.n_items,
        "total_tags": graph.n_tags,
        "total_triples": graph.n_triples,
        "train_users": split.train.n_users,
        "train_items": split.train.n_items,
        "train_tags": split.train.n_tags,
        "train_triples": split.train.n_triples,
        "test_users": len(test_users),
        "test_items": len(test_items),
        "test_tags": len(test_tags),
        "test_triples": len(split.test_triples),
        "requested_train_fraction": split.split_ratio,
        "realized_train_fraction": round(split.realized_train_fraction, 5),
    }


def write_summary(summary: dict, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for key, value in summary.items():
            fh.write(f"{key}={value}\n")
