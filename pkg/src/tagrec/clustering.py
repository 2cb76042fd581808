"""Coarse user clustering that powers the accelerated recommender.

A k-means-style procedure over the binary user profiles, run for a small
fixed number of batch rounds (no convergence check, two rounds by default):
compute all cluster centroids from the current assignment, then reassign
every user to the most similar centroid. Users end up partitioned into
non-overlapping clusters; each cluster's item pool is the union of its
members' item sets, so item pools may overlap across clusters.

Centroid squared norms are cached at construction, so one user-to-centroid
similarity costs O(profile size) lookups.
"""

import math
import random
from dataclasses import dataclass
from pathlib import Path

from .profiles import UserProfile

__all__ = [
    "Centroid",
    "Clustering",
    "choose_k",
    "init_assignment",
    "compute_centroid",
    "user_centroid_similarity",
    "coarse_cluster",
    "cluster_tag_count",
    "write_clustering",
]


class Centroid:
    """Sparse mean of a cluster's binary item and tag vectors.

    Coordinates are kept in ascending index order; each value is the fraction
    of members containing that index, so it lies in (0, 1].
    """

    __slots__ = ("item_part", "tag_part", "item_norm_sq", "tag_norm_sq")

    def __init__(self, item_part: dict[int, float], tag_part: dict[int, float]):
        self.item_part = item_part
        self.tag_part = tag_part
        self.item_norm_sq = _norm_sq_ordered(item_part)
        self.tag_norm_sq = _norm_sq_ordered(tag_part)

    def __eq__(self, other):
        return (
            isinstance(other, Centroid)
            and self.item_part == other.item_part
            and self.tag_part == other.tag_part
        )

    def __repr__(self):
        return f"Centroid(items={len(self.item_part)}, tags={len(self.tag_part)})"


def _norm_sq_ordered(vec: dict[int, float]) -> float:
    total = 0.0
    for v in vec.values():  # insertion order is ascending by construction
        total += v * v
    return total


def choose_k(n_users: int, avg_cluster_size: int) -> int:
    """Cluster count giving roughly ``avg_cluster_size`` users per cluster."""
    if n_users < 1 or avg_cluster_size < 1:
        raise ValueError("n_users and avg_cluster_size must be positive")
    return max(1, min(n_users, round(n_users / avg_cluster_size)))


def init_assignment(users, k: int, seed: int) -> dict[int, int]:
    """Random balanced initial assignment.

    The user list is shuffled by ``random.Random(seed)`` and dealt
    round-robin: position ``i`` of the shuffled order goes to cluster
    ``i % k``. Cluster sizes therefore differ by at most one, and the
    result is a pure function of (users, k, seed).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    order = list(users)
    random.Random(seed).shuffle(order)
    return {u: i % k for i, u in enumerate(order)}


def compute_centroid(cluster, profiles) -> Centroid | None:
    """Sparse mean of the members' binary vectors; None for an empty cluster."""
    members = list(cluster)
    if not members:
        return None
    n = len(members)
    item_counts: dict[int, int] = {}
    tag_counts: dict[int, int] = {}
    for u in members:
        prof = profiles[u]
        for i in prof.item_set:
            item_counts[i] = item_counts.get(i, 0) + 1
        for t in prof.tag_set:
            tag_counts[t] = tag_counts.get(t, 0) + 1
    item_part = {i: item_counts[i] / n for i in sorted(item_counts)}
    tag_part = {t: tag_counts[t] / n for t in sorted(tag_counts)}
    return Centroid(item_part, tag_part)


def user_centroid_similarity(profile: UserProfile, centroid: Centroid | None, gamma: float) -> float:
    """Convex combination of item-side and tag-side user/centroid cosines.

    An absent centroid (empty cluster) scores -1, below any real similarity,
    so no user is ever pulled into an empty cluster.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must be in [0, 1]")
    if centroid is None:
        return -1.0

    denom_sq = len(profile.item_set) * centroid.item_norm_sq
    if denom_sq == 0.0:
        cos_items = 0.0
    else:
        dot = 0.0
        part = centroid.item_part
        for i in profile.items_sorted:
            w = part.get(i)
            if w is not None:
                dot += w
        cos_items = dot / math.sqrt(denom_sq)

    denom_sq = len(profile.tag_set) * centroid.tag_norm_sq
    if denom_sq == 0.0:
        cos_tags = 0.0
    else:
        dot = 0.0
        part = centroid.tag_part
        for t in profile.tags_sorted:
            w = part.get(t)
            if w is not None:
                dot += w
        cos_tags = dot / math.sqrt(denom_sq)

    return gamma * cos_items + (1.0 - gamma) * cos_tags


@dataclass(frozen=True)
class Clustering:
    """Result of the coarse clustering pass.

    ``user_clusters`` partition all users; ``item_clusters[j]`` is the exact
    union of cluster ``j``'s members' item sets (sorted). ``centroids`` are
    recomputed from the final partition so they describe the clusters as
    returned. ``coordinate_ops`` counts sparse coordinate touches, for cost
    accounting.
    """

    k: int
    assignment: tuple[int, ...]
    user_clusters: tuple[tuple[int, ...], ...]
    item_clusters: tuple[tuple[int, ...], ...]
    centroids: tuple[Centroid | None, ...]
    iterations_run: int
    coordinate_ops: int

    def nonempty_clusters(self) -> int:
        return sum(1 for members in self.user_clusters if members)


def _group(assignment, k):
    clusters = [[] for _ in range(k)]
    for u, j in enumerate(assignment):
        clusters[j].append(u)  # u ascending, so member lists come out sorted
    return clusters


def coarse_cluster(train, profiles, k: int, iterations: int, gamma: float, seed: int) -> Clustering:
    """Run the fixed-round clustering pass over all training users.

    Each round recomputes every centroid from the current assignment, then
    reassigns each user to the centroid with the highest similarity (ties go
    to the lowest cluster index). There is no convergence check; the point is
    a cheap coarse partition, not a converged one. Empty clusters persist
    with absent centroids and are never re-seeded.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    n = train.n_users
    amap = init_assignment(range(n), k, seed)
    assignment = [amap[u] for u in range(n)]
    ops = 0

    for _ in range(iterations):
        clusters = _group(assignment, k)
        centroids = []
        for members in clusters:
            for u in members:
                prof = profiles[u]
                ops += len(prof.item_set) + len(prof.tag_set)
            centroids.append(compute_centroid(members, profiles))
        new_assignment = []
        for u in range(n):
            prof = profiles[u]
            cost = len(prof.item_set) + len(prof.tag_set)
            best_j, best_sim = 0, -math.inf
            for j in range(k):
                cent = centroids[j]
                if cent is not None:
                    ops += cost
                sim = user_centroid_similarity(prof, cent, gamma)
                if sim > best_sim:
                    best_j, best_sim = j, sim
            new_assignment.append(best_j)
        assignment = new_assignment

    clusters = _group(assignment, k)
    final_centroids = tuple(compute_centroid(members, profiles) for members in clusters)
    item_clusters = tuple(
        tuple(sorted(set().union(*(profiles[u].item_set for u in members)))) if members else ()
        for members in clusters
    )
    return Clustering(
        k=k,
        assignment=tuple(assignment),
        user_clusters=tuple(tuple(members) for members in clusters),
        item_clusters=item_clusters,
        centroids=final_centroids,
        iterations_run=iterations,
        coordinate_ops=ops,
    )


def cluster_tag_count(clustering: Clustering, train, j: int) -> int:
    """Number of distinct tags used by cluster ``j``'s members."""
    members = clustering.user_clusters[j]
    if not members:
        return 0
    return len(set().union(*(train.user_tags[u] for u in members)))


def write_clustering(clustering: Clustering, train, path) -> None:
    """Dump ``user_external_id<TAB>cluster_index`` lines for inspection/diffing."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for u, j in enumerate(clustering.assignment):
            fh.write(f"{train.users.id_of(u)}\t{j}\n")
