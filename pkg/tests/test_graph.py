import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapbench import (
    DirectedGraph,
    GraphFormatError,
    ScaleFreeParams,
    dump_edge_list,
    load_edge_list,
    read_edge_list,
    scale_free_graph,
    uniform_random_graph,
    worst_case_graph,
    write_edge_list,
)


class TestLoadEdgeList:
    def test_two_cycle(self):
        g = load_edge_list("n 2\n0 1\n1 0")
        assert (g.n, g.m) == (2, 2)
        assert g.edges == [(0, 1), (1, 0)]

    def test_self_loop_allowed(self):
        g = load_edge_list("n 3\n0 0")
        assert g.m == 1
        assert g.edges == [(0, 0)]

    def test_index_out_of_range_reports_line(self):
        with pytest.raises(GraphFormatError, match="index out of range, line 2") as exc:
            load_edge_list("n 2\n0 5")
        assert exc.value.line == 2

    def test_comments_and_blank_lines_skipped(self):
        g = load_edge_list("# made by hand\n\nn 3\n# edge follows\n0 2\n")
        assert g.edges == [(0, 2)]

    def test_duplicate_rejected(self):
        with pytest.raises(GraphFormatError, match="duplicate edge.*line 4"):
            load_edge_list("n 3\n0 1\n1 2\n0 1\n")

    @pytest.mark.parametrize(
        "text, line",
        [
            ("n 3\n0 1 2\n", 2),
            ("n 3\n0 x\n", 2),
            ("0 1\n", 1),
            ("n -2\n", 1),
            ("n 3\n0 1\n2 -1\n", 3),
        ],
    )
    def test_malformed(self, text, line):
        with pytest.raises(GraphFormatError) as exc:
            load_edge_list(text)
        assert exc.value.line == line

    def test_missing_header(self):
        with pytest.raises(GraphFormatError, match="missing header"):
            load_edge_list("# nothing here\n")

    def test_header_only_gives_empty_graph(self):
        g = load_edge_list("n 5\n")
        assert (g.n, g.m) == (5, 0)


class TestSerialization:
    def test_writer_sorts_and_round_trips(self, tmp_path):
        g = DirectedGraph.from_edges(4, [(3, 1), (0, 2), (1, 1), (0, 1)])
        text = dump_edge_list(g)
        assert text == "n 4\n0 1\n0 2\n1 1\n3 1\n"
        path = tmp_path / "g.txt"
        write_edge_list(g, path, header=["provenance line"])
        assert path.read_text().startswith("# provenance line\nn 4\n")
        assert read_edge_list(path) == g

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))))
    def test_round_trip_property(self, case):
        n, edges = case
        g = DirectedGraph.from_edges(n, sorted(edges))
        assert load_edge_list(dump_edge_list(g)) == g

    def test_edge_order_does_not_matter(self):
        a = DirectedGraph.from_edges(3, [(2, 0), (0, 1)])
        b = DirectedGraph.from_edges(3, [(0, 1), (2, 0)])
        assert a == b and hash(a) == hash(b)

    def test_constructor_rejects_duplicates_and_bad_indices(self):
        with pytest.raises(ValueError, match="duplicate"):
            DirectedGraph.from_edges(3, [(0, 1), (0, 1)])
        with pytest.raises(ValueError, match="out of range"):
            DirectedGraph.from_edges(3, [(0, 3)])

    def test_immutable_arrays(self):
        g = worst_case_graph(4)
        with pytest.raises(ValueError):
            g.sources[0] = 2


class TestWorstCaseGraph:
    def test_n4(self):
        assert worst_case_graph(4).edges == [(0, 0), (1, 0), (2, 3), (3, 3)]

    def test_n2_is_identity(self):
        assert worst_case_graph(2).edges == [(0, 0), (1, 1)]

    def test_n5_odd_split(self):
        assert worst_case_graph(5).edges == [(0, 0), (1, 0), (2, 4), (3, 4), (4, 4)]

    @pytest.mark.parametrize("n", [2, 3, 7, 16, 33, 100])
    def test_structure(self, n):
        g = worst_case_graph(n)
        assert g.m == n
        assert np.all(g.out_degree() == 1)
        indeg = g.in_degree()
        assert indeg[0] == n // 2 and indeg[n - 1] == n - n // 2
        assert (0, 0) in g.edges and (n - 1, n - 1) in g.edges

    def test_rejects_small(self):
        with pytest.raises(ValueError):
            worst_case_graph(1)


class TestScaleFree:
    def test_heavy_tailed_in_degree(self):
        g = scale_free_graph(64, seed=1)
        indeg = g.in_degree()
        assert indeg.max() >= 5 * max(np.median(indeg), 1)

    def test_out_degree_also_skewed(self):
        g = scale_free_graph(512, seed=1)
        out = g.out_degree()
        assert out.max() >= 10 * max(np.median(out), 1)
        assert np.any(out == 0)  # dangling pages exist

    def test_deterministic(self):
        assert scale_free_graph(64, seed=1) == scale_free_graph(64, seed=1)
        assert scale_free_graph(64, seed=1) != scale_free_graph(64, seed=2)

    def test_simple_digraph(self):
        g = scale_free_graph(300, seed=4)
        assert g.n == 300
        assert not np.any(g.sources == g.targets)
        assert load_edge_list(dump_edge_list(g)) == g

    def test_rejects_n1(self):
        with pytest.raises(ValueError):
            scale_free_graph(1)

    @pytest.mark.parametrize(
        "params",
        [
            ScaleFreeParams(0.5, 0.5, 0.5),
            ScaleFreeParams(-0.1, 1.0, 0.1),
            ScaleFreeParams(0.0, 1.0, 0.0),
            ScaleFreeParams(delta_in=-1.0),
        ],
    )
    def test_invalid_params(self, params):
        with pytest.raises(ValueError):
            scale_free_graph(10, params)

    def test_custom_params_denser(self):
        dense = ScaleFreeParams(0.10, 0.86, 0.04)
        g_default = scale_free_graph(400, seed=0)
        g_dense = scale_free_graph(400, dense, seed=0)
        assert g_dense.m / g_dense.n > 1.5 * g_default.m / g_default.n


class TestUniformRandom:
    def test_saturated(self):
        g = uniform_random_graph(4, 16, seed=3)
        assert sorted(g.edges) == [(i, j) for i in range(4) for j in range(4)]

    def test_empty(self):
        g = uniform_random_graph(10, 0)
        assert g.m == 0 and np.all(g.out_degree() == 0)

    def test_deterministic(self):
        assert uniform_random_graph(10, 20, seed=7) == uniform_random_graph(10, 20, seed=7)

    def test_distinct_edges(self):
        g = uniform_random_graph(30, 400, seed=1)
        assert len(set(g.edges)) == 400

    def test_too_many_edges(self):
        with pytest.raises(ValueError):
            uniform_random_graph(3, 10)
