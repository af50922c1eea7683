"""Assignment graphs, supervision trees, peg assignments, hierarchies."""

import dataclasses
import random

import pytest

from supervise import (
    AssignmentGraph,
    SizingError,
    SuperviseError,
    SupervisionHierarchy,
    SupervisionTree,
    build_peg_assignment,
    build_supervision_hierarchy,
    build_supervision_tree,
    build_supervision_tree_over,
)

from _oracles import brute_force_cover


class TestAssignmentGraph:
    def g(self, **kw):
        base = dict(
            workers=("u0", "u1"),
            tasks=("t0", "t1"),
            edges=(("u0", "t0"), ("u1", "t0"), ("u1", "t1")),
            k=2,
        )
        base.update(kw)
        return AssignmentGraph(**base)

    def test_valid_graph_and_lookups(self):
        g = self.g()
        assert g.worker_tasks["u1"] == ("t0", "t1")
        assert set(g.task_workers["t0"]) == {"u0", "u1"}

    def test_rejects_duplicates_and_unknowns(self):
        with pytest.raises(SuperviseError):
            self.g(workers=("u0", "u0"))
        with pytest.raises(SuperviseError):
            self.g(edges=(("u0", "t0"), ("u0", "t0"), ("u1", "t0")))
        with pytest.raises(SuperviseError):
            self.g(edges=(("u0", "tX"), ("u1", "t0")))
        with pytest.raises(SuperviseError):
            self.g(tasks=("t0", "u0"))  # namespaces must not overlap

    def test_rejects_idle_and_overloaded_workers(self):
        with pytest.raises(SuperviseError, match="input error"):
            self.g(edges=(("u1", "t0"),))  # u0 performs nothing
        with pytest.raises(SuperviseError):
            self.g(k=1)  # u1 has two tasks

    def test_json_round_trip_infers_k(self):
        g = self.g()
        obj = g.to_json_dict()
        assert set(obj) == {"workers", "tasks", "edges"}
        g2 = AssignmentGraph.from_json_dict(obj)
        assert g2.k == 2  # max degree
        assert g2.to_json_dict() == obj


class TestTreeConstruction:
    @pytest.mark.parametrize(
        "n,k,sizes",
        [(4, 2, [1, 2, 4]), (9, 3, [1, 3, 9]), (1, 2, [1, 1, 1]), (5, 2, [1, 2, 3, 5]), (100, 4, [1, 2, 7, 25, 100])],
    )
    def test_level_shapes(self, n, k, sizes):
        tree = build_supervision_tree(n, k, seed=0)
        assert [len(lv) for lv in tree.levels] == sizes
        assert tree.equilibrium_depth == len(sizes) - 2
        assert tree.depth == len(sizes)

    def test_many_random_trees_validate(self):
        rng = random.Random(2024)
        for _ in range(60):
            n = rng.randint(1, 60)
            k = rng.randint(2, 6)
            tree = build_supervision_tree(n, k, seed=rng.randint(0, 10**6))
            tree.validate()
            assert set(tree.task_ids) == {f"t{i}" for i in range(n)}
            for w, ts in tree.worker_tasks.items():
                assert 1 <= len(ts) <= k

    def test_determinism_and_json_round_trip(self):
        a = build_supervision_tree(17, 3, seed=9)
        b = build_supervision_tree(17, 3, seed=9)
        assert a.to_json_dict() == b.to_json_dict()
        back = SupervisionTree.from_json_dict(a.to_json_dict())
        back.validate()
        assert back.to_json_dict() == a.to_json_dict()
        assert {w: set(ts) for w, ts in back.worker_tasks.items()} == {
            w: set(ts) for w, ts in a.worker_tasks.items()
        }
        assert back.k <= a.k

    def test_worker_views_hide_structure(self):
        tree = build_supervision_tree(9, 3, seed=1)
        views = tree.worker_views()
        assert {v["worker"] for v in views} == {n for lv in tree.levels[:-1] for n in lv}
        for v in views:
            assert set(v) == {"worker", "level", "tasks"}
            assert v["tasks"] == sorted(v["tasks"])

    def test_custom_ids_and_clashes(self):
        tree = build_supervision_tree_over(["a", "b", "w0"], 2, seed=0)
        tree.validate()
        # the task named like a default worker must not collide with one
        workers = {n for lv in tree.levels[:-1] for n in lv}
        assert "w0" not in workers

    def test_rejects_bad_input(self):
        with pytest.raises(SizingError):
            build_supervision_tree(4, 1, seed=0)
        with pytest.raises(SizingError):
            build_supervision_tree(0, 2, seed=0)
        with pytest.raises(SuperviseError):
            build_supervision_tree_over(["a", "a"], 2, seed=0)

    def test_validate_catches_tampering(self):
        tree = build_supervision_tree(4, 2, seed=0)
        # shared pick pointing at a task the child does not perform
        (p, c, _t), *rest = tree.shared
        other = next(t for t in tree.task_ids if t not in tree.worker_tasks[c])
        bad = dataclasses.replace(tree, shared=((p, c, other), *rest))
        with pytest.raises(SuperviseError):
            bad.validate()
        # an edge skipping a level
        bad2 = dataclasses.replace(tree, edges=tree.edges + ((tree.supervisor, tree.task_ids[0]),))
        with pytest.raises(SuperviseError):
            bad2.validate()


class TestPegAssignment:
    def test_anchor_two_pegs(self):
        peg = build_peg_assignment(6, 5, 3, seed=0)
        assert peg.peg_tasks == ("t0", "t1")
        assert set(peg.graph.task_workers["t0"]) == {"u0", "u1", "u2"}
        assert set(peg.graph.task_workers["t1"]) == {"u3", "u4", "u5"}

    def test_fill_edges_avoid_pegs(self):
        peg = build_peg_assignment(9, 8, 4, seed=5)
        groups = {t: set(peg.graph.task_workers[t]) for t in peg.peg_tasks}
        for w, t in peg.graph.edges:
            if t in groups:
                assert w in groups[t]

    def test_remainder_group(self):
        peg = build_peg_assignment(5, 6, 3, seed=1)
        assert peg.peg_tasks == ("t0", "t1")
        assert len(peg.graph.task_workers["t1"]) == 2  # 5 - 3 leftover workers

    def test_k_one_degenerates_to_one_peg_per_worker(self):
        peg = build_peg_assignment(3, 3, 1, seed=0)
        assert len(peg.peg_tasks) == 3
        assert all(len(ts) == 1 for ts in peg.graph.worker_tasks.values())

    def test_redundancy_honored(self):
        peg = build_peg_assignment(8, 6, 3, seed=2, redundancy=2)
        fill = [t for t in peg.graph.tasks if t not in set(peg.peg_tasks)]
        for t in fill:
            assert len(peg.graph.task_workers[t]) >= 2

    def test_sizing_errors(self):
        with pytest.raises(SizingError):
            build_peg_assignment(6, 1, 3, seed=0)  # fewer tasks than pegs
        with pytest.raises(SizingError):
            build_peg_assignment(6, 3, 3, seed=0)  # no room for k-1 fill tasks
        with pytest.raises(SizingError):
            build_peg_assignment(6, 5, 3, seed=0, redundancy=4)  # pegs cap at k workers
        with pytest.raises(SizingError):
            build_peg_assignment(3, 9, 3, seed=0, redundancy=3)  # not enough fill edges

    def test_determinism(self):
        a = build_peg_assignment(10, 9, 4, seed=77)
        b = build_peg_assignment(10, 9, 4, seed=77)
        assert a.graph.to_json_dict() == b.graph.to_json_dict()
        assert a.peg_tasks == b.peg_tasks


class TestHierarchy:
    def build(self, seed=3, mode="greedy"):
        peg = build_peg_assignment(6, 5, 3, seed=seed)
        return build_supervision_hierarchy(peg.graph, k=2, seed=seed, mode=mode)

    def test_valid_and_depth(self):
        h = self.build()
        h.validate()
        assert h.equilibrium_depth == h.tree.equilibrium_depth + 1

    def test_coverage_points_into_the_tree(self):
        h = self.build()
        edge_set = set(h.graph.edges)
        for w in h.graph.workers:
            t = h.coverage[w]
            assert t in set(h.tree_tasks)
            assert (w, t) in edge_set

    def test_exact_mode_matches_brute_force(self):
        peg = build_peg_assignment(6, 5, 3, seed=3)
        h = build_supervision_hierarchy(peg.graph, k=2, seed=3, mode="exact")
        want = brute_force_cover({w: set(ts) for w, ts in peg.graph.worker_tasks.items()})
        assert len(h.tree_tasks) == len(want)

    def test_json_round_trip(self):
        h = self.build()
        obj = h.to_json_dict()
        back = SupervisionHierarchy.from_json_dict(obj)
        back.validate()
        assert back.to_json_dict() == obj

    def test_tree_names_avoid_graph_names(self):
        g = AssignmentGraph(
            workers=("supervisor", "h0"),
            tasks=("x", "y"),
            edges=(("supervisor", "x"), ("h0", "x"), ("h0", "y")),
            k=2,
        )
        h = build_supervision_hierarchy(g, k=2, seed=0)
        h.validate()
        tree_workers = {n for lv in h.tree.levels[:-1] for n in lv}
        assert not (tree_workers & (set(g.workers) | set(g.tasks)))

    def test_orphan_task_rejected(self):
        g = AssignmentGraph(
            workers=("u0",), tasks=("t0", "t1"), edges=(("u0", "t0"),), k=1
        )
        with pytest.raises(SuperviseError, match="input error"):
            build_supervision_hierarchy(g, k=2, seed=0)

    def test_unknown_mode(self):
        peg = build_peg_assignment(6, 5, 3, seed=3)
        with pytest.raises(SuperviseError):
            build_supervision_hierarchy(peg.graph, k=2, seed=0, mode="bogus")
