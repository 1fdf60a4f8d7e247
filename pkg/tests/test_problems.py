import pytest

from htollga import oracles, problems
from htollga.problems import (BitString, InitMode, MstInstance,
                              ParseError, PartitionInstance)

from conftest import make_rng


class TestBitString:
    def test_from01_roundtrip(self):
        for text in ("0", "1", "1010", "1" * 65, "0" * 64 + "1"):
            x = BitString.from01(text)
            assert x.to01() == text
            assert len(x) == len(text)

    def test_leftmost_is_index_zero(self):
        x = BitString.from01("100")
        assert x.get(0) == 1 and x.get(1) == 0 and x.get(2) == 0

    def test_complement_and_padding(self):
        x = BitString.from01("10" * 40)
        c = x.complement()
        assert c.to01() == "01" * 40
        assert c.count() == 40

    def test_hamming(self):
        a = BitString.from01("10101")
        b = BitString.from01("00111")
        assert a.hamming(b) == 2
        with pytest.raises(ValueError):
            a.hamming(BitString.from01("10"))

    def test_copy_is_independent(self):
        a = BitString.from01("1111")
        b = a.copy()
        b.flip(0)
        assert a.to01() == "1111" and b.to01() == "0111"


class TestEvaluators:
    def test_onemax_examples(self):
        assert problems.evaluate_onemax(BitString.from01("1111")) == 4
        assert problems.evaluate_onemax(BitString.from01("0000")) == 0
        assert problems.evaluate_onemax(BitString.from01("1010")) == 2

    def test_leadingones_examples(self):
        assert problems.evaluate_leadingones(BitString.from01("1101")) == 2
        assert problems.evaluate_leadingones(BitString.from01("0111")) == 0
        assert problems.evaluate_leadingones(BitString.from01("1111")) == 4

    def test_leadingones_bounded_by_onemax(self):
        rng = make_rng(1)
        for _ in range(200):
            n = int(rng.integers(1, 150))
            x = BitString.from01("".join(
                "1" if rng.random() < 0.5 else "0" for _ in range(n)))
            assert (problems.evaluate_leadingones(x)
                    <= problems.evaluate_onemax(x))

    def test_jump_examples(self):
        assert problems.evaluate_jump(BitString.from01("11111111"), 2) == 10
        assert problems.evaluate_jump(BitString.from01("11111110"), 2) == 1
        assert problems.evaluate_jump(BitString.from01("11111100"), 2) == 8

    def test_jump_optimum_iff_all_ones(self):
        problem = problems.make_jump(12, 3)
        rng = make_rng(2)
        for _ in range(300):
            x = problems.init_point(problems.UNIFORM, problem, rng)
            val = problems.evaluate_jump(x, 3)
            assert problem.is_optimal(x) == (x.count() == 12) == (val == 15)

    def test_mst_triangle_examples(self):
        inst = MstInstance(3, ((0, 1, 1), (0, 2, 2), (1, 2, 3)))
        assert inst.w_max == 6
        assert problems.evaluate_mst(BitString.from01("111"), inst) == 49 + 21 + 6
        assert problems.evaluate_mst(BitString.from01("110"), inst) == 49 + 14 + 3
        assert problems.evaluate_mst(BitString.from01("000"), inst) == 49 * 3

    def test_partition_examples(self):
        inst = PartitionInstance((3, 2, 2))
        assert problems.evaluate_partition(BitString.from01("100"), inst) == 4
        assert problems.evaluate_partition(BitString.from01("111"), inst) == 7
        assert problems.evaluate_partition(BitString.from01("011"), inst) == 4

    def test_partition_complement_symmetry(self):
        rng = make_rng(3)
        inst = problems.gen_random_partition_instance(11, 30, rng)
        for _ in range(100):
            x = BitString.from01("".join(
                "1" if rng.random() < 0.5 else "0" for _ in range(11)))
            assert (problems.evaluate_partition(x, inst)
                    == problems.evaluate_partition(x.complement(), inst))

    def test_partition_equal_bins_returns_half(self):
        inst = PartitionInstance((5, 5))
        assert problems.evaluate_partition(BitString.from01("10"), inst) == 5


def _subgraph_stats(inst, mask):
    parent = list(range(inst.n_v))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    edges = 0
    for e, (a, b, w) in enumerate(inst.edges):
        if mask >> e & 1:
            edges += 1
            parent[find(a)] = find(b)
    cc = len({find(v) for v in range(inst.n_v)})
    return cc, edges


class TestMstFitnessOrdering:
    def test_connected_beats_disconnected_and_trees_beat_cycles(self):
        rng = make_rng(4)
        for rep in range(6):
            n_v = int(rng.integers(3, 6))
            max_m = n_v * (n_v - 1) // 2
            m = int(rng.integers(n_v - 1, max_m + 1))
            inst = problems.gen_random_mst_instance(n_v, m, 10, rng)
            fitness = {}
            for mask in range(1 << m):
                x = BitString(m)
                for e in range(m):
                    if mask >> e & 1:
                        x.set(e, 1)
                fitness[mask] = problems.evaluate_mst(x, inst)
            best_disconnected = min(
                (fitness[mk] for mk in fitness
                 if _subgraph_stats(inst, mk)[0] > 1), default=None)
            worst_connected = max(
                (fitness[mk] for mk in fitness
                 if _subgraph_stats(inst, mk)[0] == 1), default=None)
            if best_disconnected is not None and worst_connected is not None:
                assert worst_connected < best_disconnected
            trees = [mk for mk in fitness
                     if _subgraph_stats(inst, mk) == (1, n_v - 1)]
            nontree_connected = [mk for mk in fitness
                                 if _subgraph_stats(inst, mk)[0] == 1
                                 and mk not in trees]
            if trees and nontree_connected:
                assert (max(fitness[mk] for mk in trees)
                        < min(fitness[mk] for mk in nontree_connected))


class TestInitPoint:
    def test_jump_local_optimum(self):
        problem = problems.make_jump(6 * 4, 2)
        rng = make_rng(5)
        seen_positions = set()
        for _ in range(50):
            x = problems.init_point(problems.JUMP_LOCAL_OPTIMUM, problem, rng)
            assert x.count() == 24 - 2
            seen_positions.add(x.to01())
        assert len(seen_positions) > 5  # the zero positions vary

    def test_fixed_distance(self):
        problem = problems.make_onemax(10)
        rng = make_rng(6)
        x = problems.init_point(InitMode(problems.FIXED_DISTANCE, 0), problem, rng)
        assert x.to01() == "1" * 10
        x = problems.init_point(InitMode(problems.FIXED_DISTANCE, 3), problem, rng)
        assert x.count() == 7

    def test_uniform_concentration(self):
        problem = problems.make_onemax(10**4)
        x = problems.init_point(problems.UNIFORM, problem, make_rng(7))
        assert abs(x.count() - 5000) <= 200  # 4 sigma

    def test_mode_problem_mismatch(self):
        rng = make_rng(8)
        with pytest.raises(ValueError, match="jump"):
            problems.init_point(problems.JUMP_LOCAL_OPTIMUM,
                                problems.make_onemax(8), rng)
        inst = problems.gen_random_partition_instance(5, 9, rng)
        with pytest.raises(ValueError, match="all-ones"):
            problems.init_point(InitMode(problems.FIXED_DISTANCE, 1),
                                problems.make_partition_problem(inst), rng)

    def test_jump_params_range(self):
        with pytest.raises(ValueError):
            problems.make_jump(8, 1)
        with pytest.raises(ValueError):
            problems.make_jump(8, 3)  # 3 > 8/4
        problems.make_jump(8, 2)


class TestGenerators:
    def test_tree_instance(self):
        inst = problems.gen_random_mst_instance(4, 3, 5, make_rng(9))
        assert inst.m == 3
        # with m = n_v - 1 the full edge set is the unique spanning tree
        assert oracles.kruskal_mst_weight(inst) == inst.w_max

    def test_infeasible_edge_counts(self):
        rng = make_rng(10)
        with pytest.raises(ValueError, match="exceeds"):
            problems.gen_random_mst_instance(4, 7, 5, rng)
        with pytest.raises(ValueError, match="connect"):
            problems.gen_random_mst_instance(4, 2, 5, rng)

    def test_mst_generator_validity(self):
        rng = make_rng(11)
        for rep in range(30):
            n_v = int(rng.integers(2, 9))
            max_m = n_v * (n_v - 1) // 2
            m = int(rng.integers(n_v - 1, max_m + 1))
            inst = problems.gen_random_mst_instance(n_v, m, 10, rng)
            assert inst.m == m
            assert all(1 <= w <= 10 for _, _, w in inst.edges)

    def test_partition_generator(self):
        inst = problems.gen_random_partition_instance(5, 1, make_rng(12))
        assert inst.weights == (1, 1, 1, 1, 1)
        assert oracles.partition_optimum(inst) == 3
        inst = problems.gen_random_partition_instance(40, 100, make_rng(13))
        assert all(a >= b for a, b in zip(inst.weights, inst.weights[1:]))


class TestInstanceValidation:
    def test_loop_rejected(self):
        with pytest.raises(ValueError, match="loop"):
            MstInstance(3, ((0, 0, 1), (0, 1, 1), (1, 2, 1)))

    def test_parallel_rejected(self):
        with pytest.raises(ValueError, match="parallel"):
            MstInstance(3, ((0, 1, 1), (1, 0, 2), (1, 2, 1)))

    def test_disconnected_rejected(self):
        with pytest.raises(ValueError, match="not connected"):
            MstInstance(4, ((0, 1, 1), (2, 3, 1)))

    def test_partition_sortedness(self):
        with pytest.raises(ValueError, match="non-increasing"):
            PartitionInstance((2, 3, 1))
        with pytest.raises(ValueError, match=">= 1"):
            PartitionInstance((3, 0))


class TestInstanceFiles:
    def test_mst_roundtrip(self, tmp_path):
        rng = make_rng(14)
        inst = problems.gen_random_mst_instance(6, 9, 12, rng)
        path = tmp_path / "g.mst"
        problems.save_instance(inst, path)
        loaded = problems.load_instance(path)
        assert loaded.kind == problems.MST
        assert loaded.mst == inst
        assert loaded.optimum_raw is not None

    def test_partition_roundtrip(self, tmp_path):
        inst = problems.gen_random_partition_instance(9, 40, make_rng(15))
        path = tmp_path / "p.txt"
        problems.save_instance(inst, path)
        loaded = problems.load_instance(path)
        assert loaded.kind == problems.PARTITION
        assert loaded.partition == inst
        assert loaded.optimum_raw == oracles.partition_optimum(inst)

    def test_problem_instance_save_roundtrip(self, tmp_path):
        inst = problems.gen_random_mst_instance(5, 7, 8, make_rng(17))
        problem = problems.make_mst_problem(inst)
        path = tmp_path / "wrapped.mst"
        problems.save_instance(problem, path)
        assert problems.load_instance(path).mst == inst
        with pytest.raises(ValueError, match="no instance file"):
            problems.save_instance(problems.make_onemax(4), tmp_path / "x")

    def test_loop_edge_parse_error(self, tmp_path):
        path = tmp_path / "bad.mst"
        path.write_text("3 3\n1 2 1\n2 2 5\n1 3 1\n")
        with pytest.raises(ParseError, match="line 3"):
            problems.load_instance(path)

    def test_duplicate_edge_parse_error(self, tmp_path):
        path = tmp_path / "dup.mst"
        path.write_text("3 3\n1 2 1\n1 2 5\n1 3 1\n")
        with pytest.raises(ParseError, match="line 3.*duplicate"):
            problems.load_instance(path)

    def test_malformed_counts(self, tmp_path):
        path = tmp_path / "short.mst"
        path.write_text("4 3\n1 2 1\n2 3 1\n")
        with pytest.raises(ParseError, match="expected 3 edge lines"):
            problems.load_instance(path)

    def test_partition_unsorted_parse_error(self, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("3\n1 5 2\n")
        with pytest.raises(ParseError, match="line 2"):
            problems.load_instance(path)

    def test_large_partition_has_no_stored_optimum(self, tmp_path):
        inst = problems.gen_random_partition_instance(30, 10**7, make_rng(16))
        path = tmp_path / "big.txt"
        problems.save_instance(inst, path)
        loaded = problems.load_instance(path)
        assert loaded.optimum_raw is None
        x = BitString(30)
        assert not loaded.is_optimal(x)
