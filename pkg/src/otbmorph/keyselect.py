"""Key-face selection strategies for one-time morph verification.

Four strategies over a shared key pool:

* ``random_key``: uniform over the whole pool.
* ``distance_key``: the entry farthest (Euclidean) from the anchor
  embedding; exact distance ties fall back to the smallest id.
* ``sfdistance_key``: farthest entry restricted to the demographic group
  opposite the anchor's.
* ``sfrandom_key``: uniform over the opposite demographic group.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, EmptyCohortError, EmptyPoolError

GROUPS = ("A", "B")

RANDOM_KEY = "random_key"
DISTANCE_KEY = "distance_key"
SFDISTANCE_KEY = "sfdistance_key"
SFRANDOM_KEY = "sfrandom_key"
STRATEGIES = (RANDOM_KEY, DISTANCE_KEY, SFDISTANCE_KEY, SFRANDOM_KEY)


def opposite_group(group: str) -> str:
    if group not in GROUPS:
        raise ValueError(f"unknown demographic group {group!r}, expected one of {GROUPS}")
    return "B" if group == "A" else "A"


@dataclass(frozen=True, eq=False)
class KeyPoolEntry:
    """One candidate key face: identifier, face asset, embedding, group."""

    id: str
    face: object
    embedding: np.ndarray
    group: str

    def __post_init__(self):
        if self.group not in GROUPS:
            raise ValueError(f"entry {self.id!r} has unknown group {self.group!r}")
        e = np.asarray(self.embedding, dtype=np.float64)
        if e.ndim != 1:
            raise DimensionMismatchError(
                f"entry {self.id!r} embedding must be 1-D, got shape {e.shape}"
            )
        e.setflags(write=False)
        object.__setattr__(self, "embedding", e)


class KeyPool:
    """An ordered key-face pool with cached arrays for vectorized selection."""

    def __init__(self, entries):
        self.entries = tuple(entries)
        if self.entries:
            dims = {e.embedding.shape[0] for e in self.entries}
            if len(dims) != 1:
                raise DimensionMismatchError(
                    f"pool mixes embedding dimensions {sorted(dims)}"
                )
            self.embeddings = np.stack([e.embedding for e in self.entries])
        else:
            self.embeddings = np.empty((0, 0), dtype=np.float64)
        self.ids = tuple(e.id for e in self.entries)
        if len(set(self.ids)) != len(self.ids):
            seen, dupes = set(), set()
            for i in self.ids:
                (dupes if i in seen else seen).add(i)
            raise ValueError(f"pool contains duplicate ids: {sorted(dupes)}")
        groups = np.array([e.group for e in self.entries], dtype=object)
        self._group_indices = {
            g: np.flatnonzero(groups == g) for g in GROUPS
        }

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i) -> KeyPoolEntry:
        return self.entries[i]

    def indices_for_group(self, group: str) -> np.ndarray:
        if group not in GROUPS:
            raise ValueError(f"unknown demographic group {group!r}")
        return self._group_indices[group]


def _as_pool(pool) -> KeyPool:
    return pool if isinstance(pool, KeyPool) else KeyPool(pool)


def _farthest(pool: KeyPool, candidate_indices, anchor) -> int:
    anchor = np.asarray(anchor, dtype=np.float64)
    rows = pool.embeddings[candidate_indices]
    if anchor.shape != (rows.shape[1],):
        raise DimensionMismatchError(
            f"anchor dimension {anchor.shape} does not match pool "
            f"dimension {rows.shape[1]}"
        )
    diff = rows - anchor
    dist = np.sqrt(np.sum(diff * diff, axis=1))
    top = dist.max()
    tied = candidate_indices[np.flatnonzero(dist == top)]
    if len(tied) == 1:
        return int(tied[0])
    return int(min(tied, key=lambda i: pool.ids[i]))


def select_key(strategy, anchor, anchor_group, pool, rng) -> KeyPoolEntry:
    """Pick one key-pool entry per the strategy.

    Deterministic given (strategy, anchor, pool order, rng state): the two
    random strategies consume exactly one integer draw from ``rng``; the
    distance strategies consume none.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}, expected one of {STRATEGIES}")
    pool = _as_pool(pool)
    if len(pool) == 0:
        raise EmptyPoolError("key pool is empty")

    if strategy == RANDOM_KEY:
        return pool[int(rng.integers(len(pool)))]

    if strategy == DISTANCE_KEY:
        return pool[_farthest(pool, np.arange(len(pool)), anchor)]

    cohort = pool.indices_for_group(opposite_group(anchor_group))
    if len(cohort) == 0:
        raise EmptyCohortError(
            f"pool has no entries in group {opposite_group(anchor_group)!r} "
            f"opposite to anchor group {anchor_group!r}"
        )
    if strategy == SFDISTANCE_KEY:
        return pool[_farthest(pool, cohort, anchor)]
    return pool[int(cohort[int(rng.integers(len(cohort)))])]
