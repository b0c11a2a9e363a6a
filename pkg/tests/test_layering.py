import random

import pytest

from sprec import (
    Graph,
    PartialTreeError,
    anc_by_connectivity,
    build_layering,
    build_layering_tree,
    centroid,
    comp_vertices,
    extend_partial_tree,
    layering_from_depths,
    max_degree,
    tree_length,
)
from sprec.reconstruct import KnownPrefix

from .conftest import brute_components, random_graph


def path(n):
    return Graph(n, [(v, v + 1) for v in range(n - 1)])


def cycle(n):
    return Graph(n, [(v, (v + 1) % n) for v in range(n)])


def star(leaves):
    return Graph(leaves + 1, [(0, v) for v in range(1, leaves + 1)])


C6 = cycle(6)
C6_LAY = build_layering(C6, 0)


def random_tree(rng, n):
    return Graph(n, [(rng.randrange(v), v) for v in range(1, n)])


class TestLayering:
    def test_c6(self):
        assert C6_LAY.layers == ((0,), (1, 5), (2, 4), (3,))
        assert C6_LAY.depth == (0, 1, 2, 3, 2, 1)

    def test_star_from_center(self):
        lay = build_layering(star(4), 0)
        assert lay.layers == ((0,), (1, 2, 3, 4))

    def test_path_singletons(self):
        lay = build_layering(path(5), 0)
        assert lay.layers == tuple((v,) for v in range(5))

    def test_disconnected_rejected(self):
        with pytest.raises(ValueError):
            build_layering(Graph(3, [(0, 1)]), 0)

    def test_from_depths_rejects_gap(self):
        with pytest.raises(ValueError, match="empty layer"):
            layering_from_depths(0, [0, 2])


class TestLayeringTree:
    def test_c6_is_a_path_of_four_parts(self):
        tree = build_layering_tree(C6, C6_LAY)
        assert [(p.layer, p.vertices) for p in tree.parts] == [
            (0, (0,)),
            (1, (1, 5)),
            (2, (2, 4)),
            (3, (3,)),
        ]
        assert tree.parent == [-1, 0, 1, 2]

    def test_tree_graph_parts_are_singletons(self):
        rng = random.Random(4)
        for n in (2, 9, 40):
            g = random_tree(rng, n)
            for root in range(0, n, max(1, n // 3)):
                lay = build_layering(g, root)
                tree = build_layering_tree(g, lay)
                assert all(len(p.vertices) == 1 for p in tree.parts)
                assert len(tree.parts) == n

    def test_path_rooted_in_middle_splits_layer(self):
        lay = build_layering(path(5), 2)
        tree = build_layering_tree(path(5), lay)
        layer1 = [p.vertices for p in tree.parts if p.layer == 1]
        assert sorted(layer1) == [(1,), (3,)]

    def test_format_tree_golden_c6(self):
        tree = build_layering_tree(C6, C6_LAY)
        assert tree.format_tree() == (
            "P0 layer=0 [0]\n"
            "  P1 layer=1 [1 5]\n"
            "    P2 layer=2 [2 4]\n"
            "      P3 layer=3 [3]"
        )

    def test_structural_invariants_on_random_graphs(self):
        rng = random.Random(11)
        for _ in range(60):
            n = rng.randint(2, 50)
            g = random_graph(rng, n, rng.randint(0, n))
            lay = build_layering(g, rng.randrange(n))
            tree = build_layering_tree(g, lay)
            # parts partition each layer
            for j, layer in enumerate(lay.layers):
                shards = [p.vertices for p in tree.parts if p.layer == j]
                flat = sorted(v for vs in shards for v in vs)
                assert flat == sorted(layer)
            # connected tree over parts
            assert sum(1 for pid in range(len(tree.parts)) if tree.parent[pid] >= 0) == len(tree.parts) - 1
            # every tree edge spans consecutive layers
            for pid, par in enumerate(tree.parent):
                if par >= 0:
                    assert tree.parts[pid].layer == tree.parts[par].layer + 1
            # every graph edge stays inside a part or joins part and parent
            for u, v in g.edges():
                pu, pv = tree.vertex_to_part[u], tree.vertex_to_part[v]
                if pu != pv:
                    assert tree.parent[pu] == pv or tree.parent[pv] == pu


class TestTreeLength:
    def test_tree_graphs_have_zero_length(self):
        rng = random.Random(21)
        for n in (2, 17, 60):
            g = random_tree(rng, n)
            lay = build_layering(g, 0)
            assert tree_length(g, build_layering_tree(g, lay)) == 0

    def test_c6_rooted_at_zero(self):
        assert tree_length(C6, build_layering_tree(C6, C6_LAY)) == 2

    def test_complete_graph(self):
        k4 = Graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
        lay = build_layering(k4, 0)
        assert tree_length(k4, build_layering_tree(k4, lay)) == 1


class TestExtendPartialTree:
    def test_full_prefix_equals_truncation_c6(self):
        full = build_layering_tree(C6, C6_LAY)
        for k in range(2):
            part = extend_partial_tree(C6, C6_LAY, k, 2, prefix_layers=6)
            assert part.describe() == full.describe(up_to_layer=k)

    def test_c6_cap_one(self):
        tree = extend_partial_tree(C6, C6_LAY, 1, 2, prefix_layers=5)
        assert [(p.layer, p.vertices) for p in tree.parts] == [(0, (0,)), (1, (1, 5))]
        assert tree.parent == [-1, 0]

    def test_cap_zero(self):
        tree = extend_partial_tree(C6, C6_LAY, 0, 2, prefix_layers=4)
        assert [(p.layer, p.vertices) for p in tree.parts] == [(0, (0,))]

    def test_precondition_rejected(self):
        with pytest.raises(PartialTreeError):
            extend_partial_tree(C6, C6_LAY, 2, 2, prefix_layers=5)

    def test_truncation_equivalence_from_real_prefixes(self):
        rng = random.Random(3)
        for _ in range(40):
            n = rng.randint(4, 60)
            g = random_graph(rng, n, rng.randint(0, n // 2))
            root = rng.randrange(n)
            lay = build_layering(g, root)
            full = build_layering_tree(g, lay)
            ell = tree_length(g, full)
            for i in range(ell + 2, lay.num_layers + 1):
                k = i - ell - 2
                prefix = KnownPrefix.from_graph(g, lay, i)
                got = extend_partial_tree(prefix.graph, lay, k, ell, prefix_layers=i)
                assert got.describe() == full.describe(up_to_layer=k)

    def test_incremental_extension_matches_fresh_build(self):
        rng = random.Random(9)
        g = random_graph(rng, 40, 10)
        lay = build_layering(g, 0)
        full = build_layering_tree(g, lay)
        ell = tree_length(g, full)
        max_k = lay.num_layers - ell - 2
        if max_k < 1:
            pytest.skip("instance too shallow for an incremental walk")
        base = None
        for k in range(0, max_k):
            base = extend_partial_tree(g, lay, k, ell, base=base)
            assert base.describe() == full.describe(up_to_layer=k)


class TestCentroid:
    def test_path_of_three_parts(self):
        tree = build_layering_tree(C6, C6_LAY)
        assert centroid(tree, [0, 1, 2]) == 1

    def test_single_part(self):
        tree = build_layering_tree(C6, C6_LAY)
        assert centroid(tree, [2]) == 2

    def test_star_center_wins_exhaustively(self):
        g = star(4)
        lay = build_layering(g, 0)
        tree = build_layering_tree(g, lay)
        subset = list(range(len(tree.parts)))
        got = centroid(tree, subset)
        # exhaustive check: the winner minimizes the worst component size
        def worst(pid):
            rest = set(subset) - {pid}
            sizes = []
            while rest:
                seed = min(rest)
                comp = {seed}
                stack = [seed]
                while stack:
                    q = stack.pop()
                    for r in tree.tree_neighbors(q):
                        if r in rest and r not in comp:
                            comp.add(r)
                            stack.append(r)
                sizes.append(len(comp))
                rest -= comp
            return max(sizes)

        scores = {pid: worst(pid) for pid in subset}
        assert got == 0
        assert scores[got] == min(scores.values()) <= len(subset) // 2

    def test_halving_and_internality_on_random_trees(self):
        rng = random.Random(33)
        for _ in range(50):
            n = rng.randint(3, 60)
            g = random_tree(rng, n)
            lay = build_layering(g, 0)
            tree = build_layering_tree(g, lay)
            subset = list(range(len(tree.parts)))
            pid = centroid(tree, subset)
            rest = set(subset) - {pid}
            # component sizes after removal, brute force
            sizes = []
            while rest:
                seed = min(rest)
                comp = {seed}
                stack = [seed]
                while stack:
                    q = stack.pop()
                    for r in tree.tree_neighbors(q):
                        if r in rest and r not in comp:
                            comp.add(r)
                            stack.append(r)
                sizes.append(len(comp))
                rest -= comp
            assert max(sizes) <= len(subset) // 2
            if len(subset) >= 3:
                deg = sum(1 for q in tree.tree_neighbors(pid) if q in subset)
                assert deg >= 2

    def test_disconnected_subset_rejected(self):
        tree = build_layering_tree(C6, C6_LAY)
        with pytest.raises(ValueError, match="not connected"):
            centroid(tree, [0, 2])

    def test_empty_subset_rejected(self):
        tree = build_layering_tree(C6, C6_LAY)
        with pytest.raises(ValueError):
            centroid(tree, [])


class TestCompAndAnc:
    def test_comp_c6(self):
        tree = extend_partial_tree(C6, C6_LAY, 1, 2, prefix_layers=5)
        pid = tree.parts_at(1)[0]
        assert comp_vertices(tree, pid, C6, C6_LAY, 3) == {1, 5, 2, 4}

    def test_comp_single_layer_range(self):
        tree = extend_partial_tree(C6, C6_LAY, 1, 2, prefix_layers=5)
        pid = tree.parts_at(1)[0]
        assert comp_vertices(tree, pid, C6, C6_LAY, 2) == {1, 5}

    def test_comp_tree_graph_subtree(self):
        # caterpillar-ish tree: 0-1-2-3 spine, 4 hangs off 1, 5 off 2
        g = Graph(6, [(0, 1), (1, 2), (2, 3), (1, 4), (2, 5)])
        lay = build_layering(g, 0)
        tree = extend_partial_tree(g, lay, 1, 0, prefix_layers=3)
        pid = tree.vertex_to_part[1]
        assert comp_vertices(tree, pid, g, lay, 3) == {1, 2, 4}

    def test_comp_requires_cap_layer_part(self):
        tree = extend_partial_tree(C6, C6_LAY, 1, 2, prefix_layers=5)
        with pytest.raises(ValueError, match="cap"):
            comp_vertices(tree, 0, C6, C6_LAY, 3)

    def test_anc_at_cap_is_own_part(self):
        tree = extend_partial_tree(C6, C6_LAY, 1, 2, prefix_layers=5)
        assert anc_by_connectivity(5, tree, C6, C6_LAY) == tree.vertex_to_part[5]

    def test_anc_c6_vertex_three(self):
        tree = extend_partial_tree(C6, C6_LAY, 1, 2, prefix_layers=5)
        pid = anc_by_connectivity(3, tree, C6, C6_LAY)
        assert tree.parts[pid].vertices == (1, 5)

    def test_anc_path_chain(self):
        g = path(5)
        lay = build_layering(g, 0)
        tree = extend_partial_tree(g, lay, 2, 0, prefix_layers=4)
        pid = anc_by_connectivity(4, tree, g, lay)
        assert tree.parts[pid].vertices == (2,)

    def test_anc_agrees_with_brute_components(self):
        rng = random.Random(8)
        for _ in range(30):
            n = rng.randint(6, 48)
            g = random_graph(rng, n, rng.randint(0, n // 2))
            lay = build_layering(g, 0)
            full = build_layering_tree(g, lay)
            ell = tree_length(g, full)
            for k in range(0, max(0, lay.num_layers - ell - 2)):
                tree = extend_partial_tree(g, lay, k, ell)
                alive = {v for v in range(n) if lay.depth[v] >= k}
                labels = brute_components(g, alive)
                for u in range(n):
                    if lay.depth[u] >= k:
                        pid = anc_by_connectivity(u, tree, g, lay)
                        assert labels[tree.parts[pid].vertices[0]] == labels[u]


class TestStructureBounds:
    def test_part_size_bound(self):
        rng = random.Random(44)
        for _ in range(40):
            n = rng.randint(2, 64)
            g = random_graph(rng, n, rng.randint(0, n))
            lay = build_layering(g, 0)
            tree = build_layering_tree(g, lay)
            ell = tree_length(g, tree)
            cap = max_degree(g) ** (ell + 1)
            assert all(len(p.vertices) <= cap for p in tree.parts)

    def test_window_connectivity(self):
        rng = random.Random(45)
        for _ in range(40):
            n = rng.randint(2, 64)
            g = random_graph(rng, n, rng.randint(0, n))
            lay = build_layering(g, 0)
            tree = build_layering_tree(g, lay)
            ell = tree_length(g, tree)
            for p in tree.parts:
                window = {
                    v
                    for v in range(n)
                    if p.layer <= lay.depth[v] <= p.layer + ell + 1
                }
                labels = brute_components(g, window)
                roots = {labels[v] for v in p.vertices}
                assert len(roots) == 1
