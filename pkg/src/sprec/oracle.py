"""Shortest-path distance oracle over a hidden graph, with query accounting.

The oracle answers d(u, v) exactly and charges one distinct-query credit per
unordered pair, no matter how often the pair is re-asked. Every charged query
is attributed to a phase so budgets can be checked per algorithm stage.

One oracle serves one reconstruction run; concurrent runs each get their own.
"""

from __future__ import annotations

import io
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import numpy as np

from .graph import Graph, is_connected

# Below this size a plain deque BFS beats the vectorized one.
_NUMPY_MIN_N = 1024
# Memory budget for memoized per-source distance rows; answers stay exact
# under eviction, only recomputation cost is affected.
_ROW_CACHE_BYTES = 128 << 20


class QueryPhase(Enum):
    ROOT_BFS = "root-bfs"
    BOOTSTRAP = "bootstrap"
    ANCESTOR_SEARCH = "ancestor-search"
    NEIGHBOR_SEARCH = "neighbor-search"
    BASELINE = "baseline"


@dataclass
class QueryLedger:
    """Counts distinct unordered pairs asked, total raw calls, and per-phase splits."""

    distinct_queries: int = 0
    raw_calls: int = 0
    per_phase: dict[QueryPhase, int] = field(
        default_factory=lambda: {p: 0 for p in QueryPhase}
    )
    log: list[tuple[int, int, int, str]] | None = None

    def snapshot(self) -> "QueryLedger":
        return QueryLedger(
            distinct_queries=self.distinct_queries,
            raw_calls=self.raw_calls,
            per_phase=dict(self.per_phase),
            log=None if self.log is None else list(self.log),
        )


class DistanceOracle:
    """Simulates shortest-path distance queries against a hidden graph.

    Answers are memoized per unordered pair; distances are produced by
    per-source BFS rows memoized per source vertex (never a precomputed
    all-pairs table). The first argument of query() is the BFS side, so
    callers that reuse one endpoint across many queries should pass it first.
    """

    def __init__(self, hidden: Graph, log_queries: bool = False):
        if hidden.n < 1:
            raise ValueError("hidden graph must have at least one vertex")
        if not is_connected(hidden):
            raise ValueError("hidden graph must be connected")
        self.hidden = hidden
        self.n = hidden.n
        self.ledger = QueryLedger(log=[] if log_queries else None)
        self._pair_cache: dict[tuple[int, int], int] = {}
        self._rows: OrderedDict[int, object] = OrderedDict()
        self._max_rows = max(64, _ROW_CACHE_BYTES // max(1, 4 * hidden.n))
        self._use_numpy = hidden.n >= _NUMPY_MIN_N
        if self._use_numpy:
            deg_cap = max((len(a) for a in hidden.adj), default=0)
            self._padded = deg_cap <= 32
            if self._padded:
                # Row v holds v's neighbors padded with v itself; a visited
                # vertex never re-enters a frontier, so pads filter out free.
                pad = np.empty((hidden.n, max(deg_cap, 1)), dtype=np.int32)
                for v in range(hidden.n):
                    pad[v, :] = v
                    a = hidden.adj[v]
                    pad[v, : len(a)] = a
                self._pad_adj = pad
                self._claim = np.empty(hidden.n, dtype=np.int64)
            else:
                indptr = np.zeros(hidden.n + 1, dtype=np.int64)
                for v in range(hidden.n):
                    indptr[v + 1] = indptr[v] + len(hidden.adj[v])
                indices = np.empty(int(indptr[-1]), dtype=np.int32)
                pos = 0
                for v in range(hidden.n):
                    a = hidden.adj[v]
                    indices[pos : pos + len(a)] = a
                    pos += len(a)
                self._indptr = indptr
                self._indices = indices

    # -- query surface ----------------------------------------------------

    def query(self, u: int, v: int, phase: QueryPhase) -> int:
        if not isinstance(phase, QueryPhase):
            raise TypeError(f"phase must be a QueryPhase, got {phase!r}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"vertex pair ({u},{v}) out of range for n={self.n}")
        ledger = self.ledger
        ledger.raw_calls += 1
        key = (u, v) if u <= v else (v, u)
        cached = self._pair_cache.get(key)
        if cached is not None:
            return cached
        d = 0 if u == v else self._distance(u, v)
        self._pair_cache[key] = d
        ledger.distinct_queries += 1
        ledger.per_phase[phase] += 1
        if ledger.log is not None:
            ledger.log.append((u, v, d, phase.value))
        return d

    def batch_distances_from(
        self, s: int, targets: Iterable[int], phase: QueryPhase
    ) -> dict[int, int]:
        """Distances from s to each target; accounting identical to a query loop."""
        targets = sorted(set(targets))
        if targets:
            self._ensure_row(s)
        return {t: self.query(s, t, phase) for t in targets}

    def assert_budget(self, phase: QueryPhase, limit: int | float) -> bool:
        return self.ledger.per_phase[phase] <= limit

    def distinct_queries(self) -> int:
        return self.ledger.distinct_queries

    def write_query_log(self, out: io.TextIOBase) -> None:
        """Dump charged queries as CSV lines "u,v,distance,phase"."""
        if self.ledger.log is None:
            raise ValueError("oracle was created with log_queries=False")
        for u, v, d, phase in self.ledger.log:
            out.write(f"{u},{v},{d},{phase}\n")

    # -- hidden-side distance computation ---------------------------------

    def _distance(self, u: int, v: int) -> int:
        row = self._rows.get(u)
        if row is not None:
            self._rows.move_to_end(u)
            return int(row[v])
        row = self._rows.get(v)
        if row is not None:
            self._rows.move_to_end(v)
            return int(row[u])
        return int(self._ensure_row(u)[v])

    def _ensure_row(self, s: int):
        row = self._rows.get(s)
        if row is not None:
            self._rows.move_to_end(s)
            return row
        row = self._bfs_numpy(s) if self._use_numpy else self._bfs_python(s)
        self._rows[s] = row
        if len(self._rows) > self._max_rows:
            self._rows.popitem(last=False)
        return row

    def _bfs_python(self, s: int) -> list[int]:
        dist = [-1] * self.n
        dist[s] = 0
        queue = deque([s])
        adj = self.hidden.adj
        while queue:
            x = queue.popleft()
            dx = dist[x] + 1
            for w in adj[x]:
                if dist[w] < 0:
                    dist[w] = dx
                    queue.append(w)
        return dist

    def _bfs_numpy(self, s: int) -> np.ndarray:
        if self._padded:
            return self._bfs_padded(s)
        indptr, indices = self._indptr, self._indices
        dist = np.full(self.n, -1, dtype=np.int32)
        dist[s] = 0
        frontier = np.array([s], dtype=np.int64)
        d = 0
        while frontier.size:
            starts = indptr[frontier]
            counts = indptr[frontier + 1] - starts
            total = int(counts.sum())
            if total == 0:
                break
            rel = np.arange(total, dtype=np.int64) - np.repeat(
                np.cumsum(counts) - counts, counts
            )
            nbrs = indices[np.repeat(starts, counts) + rel]
            fresh = nbrs[dist[nbrs] < 0]
            if fresh.size == 0:
                break
            fresh = np.unique(fresh).astype(np.int64)
            d += 1
            dist[fresh] = d
            frontier = fresh
        return dist

    def _bfs_padded(self, s: int) -> np.ndarray:
        pad = self._pad_adj
        claim = self._claim
        dist = np.full(self.n, -1, dtype=np.int32)
        dist[s] = 0
        frontier = np.array([s], dtype=np.int64)
        d = 0
        while frontier.size:
            cand = pad[frontier].reshape(-1)
            fresh = cand[dist[cand] < 0]
            if fresh.size == 0:
                break
            # Deduplicate without sorting: last writer wins, and every read
            # position was written in this level, so stale values are inert.
            order = np.arange(fresh.size, dtype=np.int64)
            claim[fresh] = order
            frontier = fresh[claim[fresh] == order]
            d += 1
            dist[frontier] = d
        return dist
