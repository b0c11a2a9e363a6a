"""Exact graph reconstruction from shortest-path distance queries.

The strategy: one distance scan from a root vertex fixes the BFS layers.
All edges among the shallow layers are found by brute-force pair queries.
From there the graph is completed one layer at a time; for each new vertex a
logarithmic descent through a capped tree of layer parts locates the small
region that can contain its neighbors, and only pairs inside that region are
queried. With a valid part-diameter bound the output equals the hidden graph
and the distinct-query total stays within an explicit per-phase budget.

A single run is sequential (later queries depend on earlier answers);
independent runs can execute concurrently, each with its own oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain

from .base import ParamsMixin, check_is_fitted
from .graph import Graph, GraphBuilder, components_masked, neighbors_of_set
from .layering import (
    Layering,
    LayeringTree,
    centroid,
    layering_from_depths,
)
from .oracle import DistanceOracle, QueryLedger, QueryPhase

GraphLike = Graph | GraphBuilder


class ReconstructionError(RuntimeError):
    """Base class for failures during a reconstruction run."""


class InvariantViolation(ReconstructionError):
    """A structural bound failed mid-run; the configured bound is suspect."""


class BudgetExceeded(ReconstructionError):
    """A query-budget assertion failed under strict accounting."""


def _ceil_log2(n: int) -> int:
    return (n - 1).bit_length() if n >= 1 else 0


@dataclass(frozen=True)
class ReconstructionConfig:
    """Run parameters.

    tau is the promised treelength bound; the effective part-diameter bound
    is 3 * tau unless ell overrides it directly. Strict budget checks need
    max_degree (the hidden graph's degree bound) because every budget is a
    power of it; the benchmark harness passes the true value.
    """

    tau: int = 1
    ell: int | None = None
    strict_budget: bool = False
    max_degree: int | None = None

    @property
    def effective_ell(self) -> int:
        return self.ell if self.ell is not None else 3 * self.tau

    def validate(self) -> None:
        if self.ell is None and self.tau < 1:
            raise ValueError("tau must be a positive integer")
        if self.ell is not None and self.ell < 0:
            raise ValueError("ell must be nonnegative")
        if self.max_degree is not None and self.max_degree < 1:
            raise ValueError("max_degree must be positive when given")
        if self.strict_budget and self.max_degree is None:
            raise ValueError(
                "strict_budget requires max_degree: all budgets are powers of it"
            )


@dataclass(frozen=True)
class KnownPrefix:
    """The reconstructed graph induced by the first `known_layers` layers."""

    known_layers: int
    graph: Graph
    layering: Layering

    @classmethod
    def from_graph(cls, g: Graph, layering: Layering, known_layers: int) -> "KnownPrefix":
        """Induced prefix of a fully known graph (test and harness helper)."""
        depth = layering.depth
        edges = [
            (u, v)
            for u, v in g.edges()
            if depth[u] < known_layers and depth[v] < known_layers
        ]
        return cls(known_layers, Graph(g.n, edges), layering)


@dataclass(frozen=True)
class LayerTrace:
    """Distinct-query accounting for one layer extension."""

    layer: int
    layer_size: int
    ancestor_queries: int
    neighbor_queries: int
    max_ancestor_call_queries: int
    max_ancestor_rounds: int
    max_neighbor_queries_per_vertex: int
    max_candidate_set: int


@dataclass(frozen=True)
class ReconstructionResult:
    graph: Graph
    ledger: QueryLedger
    trace: tuple[LayerTrace, ...]
    ell: int
    root: int


class _SearchNode:
    __slots__ = ("part_ids", "cap_count", "sole_cap_part", "pivot",
                 "pivot_neighbors", "child_by_part")

    def __init__(self, part_ids: set[int], cap_count: int, sole_cap_part: int):
        self.part_ids = part_ids
        self.cap_count = cap_count
        self.sole_cap_part = sole_cap_part
        self.pivot: int | None = None
        self.pivot_neighbors: list[int] | None = None
        self.child_by_part: dict[int, "_SearchNode"] | None = None


class _AncestorSearch:
    """Shared pivot tree for locating capped-layer ancestors of new vertices.

    Pivots are centroids, so each descent halves the candidate part set; the
    pivot tree is materialized lazily and shared by every vertex of a layer,
    which keeps the per-vertex work proportional to the queries it issues.
    """

    def __init__(self, tree: LayeringTree, prefix_graph: GraphLike):
        self.tree = tree
        self.prefix_graph = prefix_graph
        self.cap = tree.cap
        cap_parts = tree.parts_at(self.cap)
        self._root = _SearchNode(
            set(range(len(tree.parts))),
            len(cap_parts),
            cap_parts[0] if len(cap_parts) == 1 else -1,
        )

    def locate(self, x: int, oracle: DistanceOracle) -> tuple[int, int, int]:
        """Capped-layer ancestor part of x, plus (distinct queries, rounds)."""
        tree = self.tree
        ledger = oracle.ledger
        before = ledger.distinct_queries
        rounds = 0
        node = self._root
        while node.cap_count != 1:
            if node.cap_count == 0:
                raise InvariantViolation(
                    "descent reached a subtree with no capped-layer part; "
                    "the configured diameter bound is likely too small"
                )
            if len(node.part_ids) < 3:
                raise InvariantViolation(
                    "two capped-layer parts without a connecting internal part"
                )
            self._ensure_pivot(node)
            rounds += 1
            best_w = -1
            best_d = -1
            for w in node.pivot_neighbors:
                # w first: every vertex of the layer probes the same pivot
                # neighborhoods, so the oracle's per-source rows get reused.
                d = oracle.query(w, x, QueryPhase.ANCESTOR_SEARCH)
                if best_w < 0 or d < best_d:
                    best_w, best_d = w, d
            if best_w < 0:
                raise InvariantViolation("pivot part has an empty neighborhood")
            wp = tree.vertex_to_part[best_w]
            if wp < 0:
                raise InvariantViolation(
                    f"nearest pivot neighbor {best_w} lies outside the capped tree"
                )
            self._ensure_split(node)
            child = node.child_by_part.get(wp)
            if child is None:
                raise InvariantViolation(
                    "nearest pivot neighbor points outside the current subtree"
                )
            node = child
        return node.sole_cap_part, ledger.distinct_queries - before, rounds

    def _ensure_pivot(self, node: _SearchNode) -> None:
        if node.pivot is not None:
            return
        pid = centroid(self.tree, node.part_ids)
        node.pivot = pid
        w = neighbors_of_set(self.prefix_graph, self.tree.parts[pid].vertices)
        node.pivot_neighbors = sorted(w)

    def _ensure_split(self, node: _SearchNode) -> None:
        if node.child_by_part is not None:
            return
        tree = self.tree
        cap = self.cap
        remaining = node.part_ids - {node.pivot}
        child_by_part: dict[int, _SearchNode] = {}
        visited: set[int] = set()
        for start in sorted(remaining):
            if start in visited:
                continue
            comp: list[int] = [start]
            visited.add(start)
            stack = [start]
            while stack:
                q = stack.pop()
                for r in tree.tree_neighbors(q):
                    if r in remaining and r not in visited:
                        visited.add(r)
                        comp.append(r)
                        stack.append(r)
            cap_parts = [q for q in comp if tree.parts[q].layer == cap]
            child = _SearchNode(
                set(comp),
                len(cap_parts),
                cap_parts[0] if len(cap_parts) == 1 else -1,
            )
            for q in comp:
                child_by_part[q] = child
        node.child_by_part = child_by_part


def find_ancestor_part(
    x: int,
    k: int,
    tree: LayeringTree,
    prefix: KnownPrefix,
    oracle: DistanceOracle,
    *,
    search: _AncestorSearch | None = None,
    max_degree: int | None = None,
    strict_budget: bool = False,
) -> int:
    """Capped-layer ancestor part of a vertex beyond the known prefix.

    Repeatedly pivots on a centroid of the remaining part subtree, queries
    the distances from x to the pivot's graph neighborhood (all inside the
    prefix), and keeps the subtree on the near side; ties go to the smallest
    vertex id. Stops as soon as a single capped-layer part remains.
    """
    if tree.cap != k:
        raise ValueError(f"tree is capped at {tree.cap}, expected {k}")
    if prefix.known_layers < k + 2:
        raise ValueError("prefix must cover at least two layers beyond the cap")
    if prefix.layering.depth[x] <= k:
        raise ValueError(f"vertex {x} is not below the capped layer {k}")
    if search is None:
        search = _AncestorSearch(tree, prefix.graph)
    pid, cost, _rounds = search.locate(x, oracle)
    if strict_budget:
        if max_degree is None:
            raise ValueError("strict_budget requires max_degree")
        ell = prefix.known_layers - 2 - k
        limit = max_degree ** (ell + 2) * _ceil_log2(oracle.n)
        if cost > limit:
            raise BudgetExceeded(
                f"ancestor search for {x} used {cost} queries, limit {limit}"
            )
    return pid


def extend_one_layer(
    prefix: KnownPrefix,
    tree: LayeringTree,
    oracle: DistanceOracle,
    *,
    max_degree: int | None = None,
    strict_budget: bool = False,
) -> KnownPrefix:
    """Grow the known prefix by one layer, discovering all its new edges.

    The tree must be capped exactly diameter_bound + 2 layers above the
    prefix edge. New edges (inside the new layer and to the previous one) are
    found by querying each new vertex against the candidate set hanging below
    its capped-layer ancestor part.
    """
    i = prefix.known_layers
    ell = i - 2 - tree.cap
    if ell < 0:
        raise ValueError("tree cap is too deep for this prefix")
    if i >= prefix.layering.num_layers:
        raise ValueError("prefix already covers every layer")
    new_edges, _trace = _extend_layer(
        prefix.graph,
        prefix.layering,
        i,
        ell,
        tree,
        oracle,
        max_degree=max_degree,
        strict=strict_budget,
    )
    merged = list(prefix.graph.edges()) + new_edges
    return KnownPrefix(i + 1, Graph(prefix.graph.n, merged), prefix.layering)


def _extend_layer(
    prefix_graph: GraphLike,
    layering: Layering,
    i: int,
    ell: int,
    tree: LayeringTree,
    oracle: DistanceOracle,
    *,
    max_degree: int | None = None,
    strict: bool = False,
    labels: dict[int, int] | None = None,
    search: _AncestorSearch | None = None,
) -> tuple[list[tuple[int, int]], LayerTrace]:
    """Find the edges incident to layer i given the prefix below it."""
    k = i - ell - 2
    if tree.cap != k:
        raise ValueError(f"tree is capped at {tree.cap}, expected {k}")
    if strict and max_degree is None:
        raise ValueError("strict budget checks require max_degree")
    layers = layering.layers
    n = len(layering.depth)
    if labels is None:
        window = [v for layer in layers[k:i] for v in layer]
        labels = components_masked(prefix_graph, window)

    label_to_part: dict[int, int] = {}
    for pid in tree.parts_at(k):
        label_to_part[labels[tree.parts[pid].vertices[0]]] = pid
    anc: dict[int, int] = {}
    try:
        for layer in layers[k:i]:
            for u in layer:
                anc[u] = label_to_part[labels[u]]
    except KeyError:
        raise InvariantViolation(
            "a prefix vertex is disconnected from every capped-layer part"
        ) from None

    if search is None:
        search = _AncestorSearch(tree, prefix_graph)
    ledger = oracle.ledger
    anc_limit = (
        max_degree ** (ell + 2) * _ceil_log2(n) if max_degree is not None else None
    )
    anc_before = ledger.distinct_queries
    max_call = 0
    max_rounds = 0
    for x in layers[i]:
        pid, cost, rounds = search.locate(x, oracle)
        if strict and cost > anc_limit:
            raise BudgetExceeded(
                f"ancestor search for {x} used {cost} queries, limit {anc_limit}"
            )
        anc[x] = pid
        max_call = max(max_call, cost)
        max_rounds = max(max_rounds, rounds)
    anc_total = ledger.distinct_queries - anc_before

    prev_by_part: dict[int, list[int]] = {}
    for u in layers[i - 1]:
        prev_by_part.setdefault(anc[u], []).append(u)
    cur_by_part: dict[int, list[int]] = {}
    for x in layers[i]:
        cur_by_part.setdefault(anc[x], []).append(x)

    cand_limit = max_degree ** (2 * ell + 4) if max_degree is not None else None
    seen_pairs: set[tuple[int, int]] = set()
    new_edges: list[tuple[int, int]] = []
    nb_before = ledger.distinct_queries
    max_vertex = 0
    max_cand = 0
    for v in layers[i]:
        a = anc[v]
        cand_prev = prev_by_part.get(a, ())
        cand_cur = cur_by_part[a]
        csize = len(cand_prev) + len(cand_cur)
        max_cand = max(max_cand, csize)
        if cand_limit is not None and csize > cand_limit:
            raise InvariantViolation(
                f"candidate set of size {csize} for vertex {v} exceeds the "
                f"part-growth bound {cand_limit}; the diameter bound is "
                "likely too small"
            )
        v_before = ledger.distinct_queries
        for u in chain(cand_prev, cand_cur):
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen_pairs:
                continue
            seen_pairs.add(key)
            if oracle.query(v, u, QueryPhase.NEIGHBOR_SEARCH) == 1:
                new_edges.append(key)
        v_used = ledger.distinct_queries - v_before
        if strict and v_used > cand_limit:
            raise BudgetExceeded(
                f"neighbor search for {v} used {v_used} queries, limit {cand_limit}"
            )
        max_vertex = max(max_vertex, v_used)
    nb_total = ledger.distinct_queries - nb_before

    trace = LayerTrace(
        layer=i,
        layer_size=len(layers[i]),
        ancestor_queries=anc_total,
        neighbor_queries=nb_total,
        max_ancestor_call_queries=max_call,
        max_ancestor_rounds=max_rounds,
        max_neighbor_queries_per_vertex=max_vertex,
        max_candidate_set=max_cand,
    )
    return new_edges, trace


def reconstruct(
    oracle: DistanceOracle, config: ReconstructionConfig | None = None
) -> ReconstructionResult:
    """Reconstruct the oracle's hidden graph exactly.

    Correct whenever the effective diameter bound is at least the true
    largest intra-part distance of the root's layering tree (guaranteed when
    tau bounds the treelength). With a bound that is too small the run either
    trips an invariant and raises, or returns a wrong graph that downstream
    verification must catch.
    """
    cfg = config if config is not None else ReconstructionConfig()
    cfg.validate()
    ell = cfg.effective_ell
    strict = cfg.strict_budget
    delta = cfg.max_degree
    n = oracle.n
    root = 0
    fresh = oracle.ledger.raw_calls == 0

    depth_map = oracle.batch_distances_from(root, range(1, n), QueryPhase.ROOT_BFS)
    if strict and fresh and oracle.ledger.per_phase[QueryPhase.ROOT_BFS] != n - 1:
        raise BudgetExceeded(
            f"root scan charged {oracle.ledger.per_phase[QueryPhase.ROOT_BFS]} "
            f"queries, expected exactly {n - 1}"
        )
    depth = [0] * n
    for v, d in depth_map.items():
        depth[v] = d
    layering = layering_from_depths(root, depth)

    builder = GraphBuilder(n)
    hi = min(ell + 1, layering.num_layers - 1)
    ball = sorted(v for layer in layering.layers[: hi + 1] for v in layer)
    boot_before = oracle.ledger.distinct_queries
    for idx, a in enumerate(ball):
        for b, d in oracle.batch_distances_from(
            a, ball[idx + 1 :], QueryPhase.BOOTSTRAP
        ).items():
            if d == 1:
                builder.add_edge(a, b)
    if strict:
        boot_used = oracle.ledger.distinct_queries - boot_before
        boot_limit = delta ** (2 * (ell + 2))
        if boot_used > boot_limit:
            raise BudgetExceeded(
                f"bootstrap charged {boot_used} queries, limit {boot_limit}"
            )

    tree = LayeringTree(n)
    trace: list[LayerTrace] = []
    part_limit = delta ** (ell + 1) if delta is not None else None
    for i in range(ell + 2, layering.num_layers):
        k = i - ell - 2
        window = [v for layer in layering.layers[k:i] for v in layer]
        labels = components_masked(builder, window)
        new_parts = tree.append_layer(k, labels, layering, builder)
        if part_limit is not None:
            for pid in new_parts:
                if len(tree.parts[pid].vertices) > part_limit:
                    raise InvariantViolation(
                        f"part at layer {k} has {len(tree.parts[pid].vertices)} "
                        f"vertices, above the bound {part_limit}; the diameter "
                        "bound is likely too small"
                    )
        search = _AncestorSearch(tree, builder)
        new_edges, row = _extend_layer(
            builder,
            layering,
            i,
            ell,
            tree,
            oracle,
            max_degree=delta,
            strict=strict,
            labels=labels,
            search=search,
        )
        for u, v in new_edges:
            builder.add_edge(u, v)
        trace.append(row)

    return ReconstructionResult(
        graph=builder.to_graph(),
        ledger=oracle.ledger.snapshot(),
        trace=tuple(trace),
        ell=ell,
        root=root,
    )


def reconstruct_naive(oracle: DistanceOracle) -> Graph:
    """Baseline: query every unordered pair; edge iff distance one."""
    n = oracle.n
    builder = GraphBuilder(n)
    for u in range(n - 1):
        for v, d in oracle.batch_distances_from(
            u, range(u + 1, n), QueryPhase.BASELINE
        ).items():
            if d == 1:
                builder.add_edge(u, v)
    return builder.to_graph()


class _ReconstructorBase(ParamsMixin):
    """Shared fit/predict surface for the reconstruction estimators."""

    @staticmethod
    def _as_oracle(X) -> DistanceOracle:
        if isinstance(X, Graph):
            return DistanceOracle(X)
        if isinstance(X, DistanceOracle):
            return X
        if all(hasattr(X, a) for a in ("n", "query", "batch_distances_from")):
            return X
        raise TypeError(
            "fit expects a DistanceOracle (or a Graph to wrap in one), "
            f"got {type(X).__name__}"
        )

    def predict(self, pairs) -> list[bool]:
        """Edge membership in the reconstructed graph for (u, v) pairs."""
        check_is_fitted(self, "graph_")
        return [self.graph_.has_edge(u, v) for u, v in pairs]


class GraphReconstructor(_ReconstructorBase):
    """Estimator wrapper around reconstruct().

    Parameters mirror ReconstructionConfig. fit(X) accepts a DistanceOracle
    or a Graph (wrapped in a fresh oracle). Fitted attributes: graph_,
    ledger_, trace_, n_queries_, ell_, oracle_, result_.
    """

    def __init__(
        self,
        tau: int = 1,
        ell: int | None = None,
        strict_budget: bool = False,
        max_degree: int | None = None,
    ):
        self.tau = tau
        self.ell = ell
        self.strict_budget = strict_budget
        self.max_degree = max_degree

    def fit(self, X, y=None) -> "GraphReconstructor":
        oracle = self._as_oracle(X)
        cfg = ReconstructionConfig(
            tau=self.tau,
            ell=self.ell,
            strict_budget=self.strict_budget,
            max_degree=self.max_degree,
        )
        result = reconstruct(oracle, cfg)
        self.oracle_ = oracle
        self.result_ = result
        self.graph_ = result.graph
        self.ledger_ = result.ledger
        self.trace_ = result.trace
        self.ell_ = result.ell
        self.n_queries_ = result.ledger.distinct_queries
        return self


class NaiveReconstructor(_ReconstructorBase):
    """Estimator wrapper around the all-pairs baseline."""

    def fit(self, X, y=None) -> "NaiveReconstructor":
        oracle = self._as_oracle(X)
        self.oracle_ = oracle
        self.graph_ = reconstruct_naive(oracle)
        self.ledger_ = oracle.ledger.snapshot()
        self.n_queries_ = self.ledger_.distinct_queries
        return self
