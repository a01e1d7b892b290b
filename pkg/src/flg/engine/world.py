"""Relation storage: append-only rows, generation offsets, lazy hash indexes."""
from __future__ import annotations

import threading
from bisect import bisect_left
from typing import Iterable, Iterator

from ..kernels import sort_key


class RelStore:
    __slots__ = ("name", "arity", "rows", "members", "indexes", "_lock")

    def __init__(self, name: str, arity: int):
        self.name = name
        self.arity = arity
        self.rows: list[tuple] = []
        self.members: set[tuple] = set()
        self.indexes: dict[tuple[int, ...], dict[tuple, list[int]]] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.rows)

    def __contains__(self, tup: tuple) -> bool:
        return tup in self.members

    def add(self, tup: tuple) -> bool:
        """Insert; returns False if already present.  Not safe to call during reads."""
        if tup in self.members:
            return False
        rid = len(self.rows)
        self.rows.append(tup)
        self.members.add(tup)
        for pos, idx in self.indexes.items():
            key = tuple([tup[i] for i in pos])
            idx.setdefault(key, []).append(rid)
        return True

    def _index(self, pos: tuple[int, ...]) -> dict:
        idx = self.indexes.get(pos)
        if idx is None:
            with self._lock:
                idx = self.indexes.get(pos)
                if idx is None:
                    idx = {}
                    for rid, tup in enumerate(self.rows):
                        idx.setdefault(tuple([tup[i] for i in pos]), []).append(rid)
                    self.indexes[pos] = idx
        return idx

    def scan(self, lo: int = 0, hi: int | None = None, pos: tuple = (), key: tuple = ()
             ) -> Iterator[tuple]:
        """Rows with id in [lo, hi) whose positions ``pos`` equal ``key``."""
        rows = self.rows
        if hi is None:
            hi = len(rows)
        if not pos:
            for rid in range(lo, hi):
                yield rows[rid]
            return
        if len(pos) == self.arity:
            # fully bound: membership test, then locate the row id
            if key in self.members:
                ids = self._index(pos).get(key, ())
                for rid in ids:
                    if lo <= rid < hi:
                        yield rows[rid]
            return
        ids = self._index(pos).get(key)
        if not ids:
            return
        start = bisect_left(ids, lo) if lo else 0
        for j in range(start, len(ids)):
            rid = ids[j]
            if rid >= hi:
                break
            yield rows[rid]

    def sorted_rows(self) -> list[tuple]:
        return sorted(self.rows, key=lambda t: tuple(sort_key(v) for v in t))


class World:
    """Map from predicate name to a set of ground tuples."""

    def __init__(self, arities: dict[str, int]):
        self.rels = {n: RelStore(n, a) for n, a in arities.items()}

    def __getitem__(self, name: str) -> RelStore:
        return self.rels[name]

    def __contains__(self, name: str) -> bool:
        return name in self.rels

    def add(self, name: str, tup: tuple) -> bool:
        return self.rels[name].add(tup)

    def add_all(self, name: str, tuples: Iterable[tuple]) -> int:
        store = self.rels[name]
        return sum(1 for t in tuples if store.add(t))

    def as_sets(self) -> dict[str, frozenset]:
        return {n: frozenset(r.members) for n, r in self.rels.items()}

    def sizes(self) -> dict[str, int]:
        return {n: len(r) for n, r in sorted(self.rels.items())}
