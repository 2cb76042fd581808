"""Top-k item ranking by user-based collaborative filtering.

An item's score for a target user is the summed similarity of every
neighbor who has that item; items the target already trained on are
excluded from the candidates (their score would be the -1 sentinel, which
can never reach a top-k slot, so skipping them is both equivalent and
cheaper). Two candidate/neighbor pools are offered:

* ``rank_ucf``: neighbors are all users, candidates all items (the exact
  baseline, evaluated straightforwardly);
* ``rank_fcum``: per cluster, neighbors are the cluster's members and
  candidates its item pool.

Both accumulate neighbor contributions in ascending user-index order, so a
single-cluster clustering reproduces the baseline bit for bit. Entries are
ordered by descending score, ties by ascending item index; the list at a
smaller k is always a prefix of the list at a larger k.
"""

import heapq
from dataclasses import dataclass
from pathlib import Path

from .clustering import Clustering
from .profiles import user_similarity

__all__ = ["RankList", "score", "rank_ucf", "rank_fcum", "write_ranklists"]


@dataclass(frozen=True)
class RankList:
    """Ordered (item index, score) recommendations for one user."""

    user: int
    entries: tuple[tuple[int, float], ...]


def score(target: int, item: int, neighbors, profiles, beta: float) -> float:
    """Direct evaluation of one candidate's score for one target user.

    Returns -1 if the target already has the item. The target's own term is
    skipped: it is structurally zero, since a target reaching the summation
    branch cannot have the item.
    """
    target_prof = profiles[target]
    if item in target_prof.item_set:
        return -1.0
    total = 0.0
    for v in sorted(neighbors):
        if v == target:
            continue
        neighbor_prof = profiles[v]
        if item in neighbor_prof.item_set:
            total += user_similarity(target_prof, neighbor_prof, beta)
    return total


def _top_k(scores, candidates, k):
    # (-score, item) ascending == score descending, ties by item index
    best = heapq.nsmallest(k, ((-scores[r], r) for r in candidates))
    return tuple((r, -neg) for neg, r in best)


def rank_ucf(train, profiles, beta: float, k: int, drop_zero_scores: bool = False) -> dict[int, RankList]:
    """Rank every item against every other user, per target user.

    Zero-score items are kept as deterministic tail entries unless
    ``drop_zero_scores`` is set, so ranklists have predictable length.
    """
    n_users, n_items = train.n_users, train.n_items
    out = {}
    for u in range(n_users):
        target_prof = profiles[u]
        scores = [0.0] * n_items
        for v in range(n_users):
            if v == u:
                continue
            sim = user_similarity(target_prof, profiles[v], beta)
            if sim == 0.0:
                continue
            for r in profiles[v].items_sorted:
                scores[r] += sim
        trained = target_prof.item_set
        if drop_zero_scores:
            candidates = (r for r in range(n_items) if r not in trained and scores[r] > 0.0)
        else:
            candidates = (r for r in range(n_items) if r not in trained)
        out[u] = RankList(u, _top_k(scores, candidates, k))
    return out


def rank_fcum(clustering: Clustering, train, profiles, beta: float, k: int,
              drop_zero_scores: bool = False) -> dict[int, RankList]:
    """Rank cluster item pools against cluster members, per target user.

    For a user in cluster ``j`` the neighbors are the other members of ``j``
    and the candidates are ``j``'s item pool minus the user's own items.
    Similarities are computed once per (target, neighbor) pair.
    """
    out = {}
    scores = [0.0] * train.n_items  # shared buffer; only pool indices are touched
    for j, members in enumerate(clustering.user_clusters):
        pool = clustering.item_clusters[j]
        for u in members:
            target_prof = profiles[u]
            for v in members:
                if v == u:
                    continue
                sim = user_similarity(target_prof, profiles[v], beta)
                if sim == 0.0:
                    continue
                for r in profiles[v].items_sorted:
                    scores[r] += sim
            trained = target_prof.item_set
            if drop_zero_scores:
                candidates = (r for r in pool if r not in trained and scores[r] > 0.0)
            else:
                candidates = (r for r in pool if r not in trained)
            out[u] = RankList(u, _top_k(scores, candidates, k))
            for r in pool:
                scores[r] = 0.0
    return out


def write_ranklists(ranklists: dict[int, RankList], train, path) -> None:
    """Dump ``user<TAB>rank<TAB>item<TAB>score`` lines, scores at 6 decimals."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for u in sorted(ranklists):
            ext_user = train.users.id_of(u)
            for rank, (r, s) in enumerate(ranklists[u].entries, start=1):
                fh.write(f"{ext_user}\t{rank}\t{train.items.id_of(r)}\t{s:.6f}\n")
