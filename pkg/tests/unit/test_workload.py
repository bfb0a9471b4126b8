import math

import pytest

from diffhw.errors import CycleDetected, ParseError, Unsplittable
from diffhw.hwmodel import CompUnit, MemUnit
from diffhw.workload import (
    Workload,
    cnn,
    compute_merge,
    dump_workload,
    load_workload,
    parse_workload,
    random_dag,
    save_workload,
    split_vertex,
    transformer,
    workload_optimize,
)

SA, VEC = CompUnit.SYSTOLIC_ARRAY, CompUnit.VECTOR
GB, MM = MemUnit.GLOBAL_BUF, MemUnit.MAIN_MEM

SMALL = """
# deux sommets, une arête
v a comp=systolicArray:16 alloc=64 read=globalBuf:64
v b kind=relu comp=vector:8 alloc=32 write=mainMem:8
e a b 32
"""


def test_parse_small_file():
    w = parse_workload(SMALL)
    assert len(w) == 2
    assert w.edges == (("a", "b", 32),)
    assert w.vertex("a").stats.comp == {SA: 16}
    assert w.vertex("b").kind == "relu"
    assert w.vertex("b").stats.write == {MM: 8}


def test_edge_to_unknown_vertex():
    with pytest.raises(ParseError) as exc:
        parse_workload(SMALL + "e b zz 4\n")
    assert exc.value.line == 6


@pytest.mark.parametrize(
    "line",
    [
        "v c alloc=1 junk",
        "v c alloc=1 comp=gpu:4",
        "v c alloc=-1",
        "v c comp=vector:4",
        "e a b 32 extra",
        "x a b",
    ],
)
def test_rejects_malformed_lines(line):
    with pytest.raises(ParseError):
        parse_workload(SMALL + line + "\n")


def test_cycle_detected():
    with pytest.raises(CycleDetected):
        parse_workload(SMALL + "e b a 4\n")


def test_generator_roundtrip(tmp_path):
    for w in (cnn(layers=2), transformer(seq=16, d_model=32, heads=2, d_ff=64)):
        path = save_workload(w, tmp_path / "w.dfg")
        assert load_workload(path) == w
        assert dump_workload(load_workload(path)) == dump_workload(w)


def test_merge_parallel_small_vertices(vertex):
    w = Workload((vertex("p", {SA: 2}, alloc=4), vertex("q", {SA: 3}, alloc=4)))
    merged = compute_merge(w, hvth=10)
    assert len(merged) == 1
    assert merged.vertices[0].stats.comp == {SA: 5}
    assert merged.totals() == w.totals()


def test_merge_inside_diamond(vertex):
    big = {SA: 100}
    w = Workload(
        (vertex("a", big), vertex("p", {SA: 2}, alloc=1), vertex("q", {SA: 3}, alloc=1), vertex("d", big)),
        (("a", "p", 8), ("a", "q", 8), ("p", "d", 4), ("q", "d", 4)),
    )
    merged = compute_merge(w, hvth=10)
    assert merged.ids == ["a", "p+q", "d"]
    assert set(merged.edges) == {("a", "p+q", 16), ("p+q", "d", 8)}


def test_merge_threshold_zero_is_identity():
    w = random_dag(n=12, seed=1)
    assert compute_merge(w, 0) is w


def test_merge_conserves_totals_on_random_dags():
    for seed in range(10):
        w = random_dag(n=20, seed=seed)
        merged = compute_merge(w, hvth=5000)
        assert merged.totals() == w.totals()
        assert len(merged) <= len(w)


def test_split_halves(vertex):
    a, b = split_vertex(vertex("v", read={GB: 100}, alloc=10))
    assert (a.stats.read[GB], b.stats.read[GB]) == (50, 50)
    a, b = split_vertex(vertex("v", read={GB: 101}, alloc=10))
    assert (a.stats.read[GB], b.stats.read[GB]) == (51, 50)
    assert a.stats + b.stats == vertex("v", read={GB: 101}, alloc=10).stats


def test_split_unsplittable(vertex):
    with pytest.raises(Unsplittable):
        split_vertex(vertex("v", {SA: 1}, alloc=1))


def test_workload_split_rewires_edges(chain):
    w = chain.split("b")
    assert w.ids == ["a", "b/0", "b/1", "c"]
    assert ("a", "b/0", 32) in w.edges
    assert ("b/1", "c", 32) in w.edges
    assert ("b/0", "b/1", 128) in w.edges
    assert w.totals() == chain.totals()


@pytest.mark.parametrize("alloc,capacity", [(150, 100), (1000, 100), (4097, 64), (65536, 3)])
def test_repeated_split_terminates(vertex, alloc, capacity):
    v = vertex("v", {SA: alloc}, alloc=alloc)
    splits = 0
    while v.stats.alloc > capacity:
        v, _ = split_vertex(v)
        splits += 1
    assert splits <= math.ceil(math.log2(alloc / capacity)) + 1


def test_order_chain_and_diamond(chain, vertex):
    order, _ = workload_optimize(chain, hvth=0)
    assert [v.id for v in order] == ["a", "b", "c"]
    w = Workload(
        tuple(vertex(i, {SA: 64}) for i in "dcba"),
        (("a", "b", 1), ("a", "c", 1), ("b", "d", 1), ("c", "d", 1)),
    )
    order, _ = workload_optimize(w, hvth=0)
    assert [v.id for v in order] == ["a", "b", "c", "d"]


@pytest.mark.parametrize("hvth", [0, 2000])
def test_order_is_topological_on_random_dags(hvth):
    for seed in range(100):
        w = random_dag(n=5 + seed % 30, seed=seed)
        order, edges = workload_optimize(w, hvth)
        position = {v.id: i for i, v in enumerate(order)}
        assert all(position[s] < position[d] for s, d, _ in edges)
        assert order == workload_optimize(w, hvth)[0]


def test_workload_optimize_requires_threshold(chain):
    with pytest.raises(TypeError):
        workload_optimize(chain)
