"""Générateurs de workloads synthétiques (statistiques de DFG uniquement)."""
from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np

from diffhw.hwmodel import CompUnit, MemUnit
from diffhw.workload.graph import Edge, Vertex, VertexStats, Workload

SA, VEC, TREE, FPU = CompUnit.SYSTOLIC_ARRAY, CompUnit.VECTOR, CompUnit.MAC_TREE, CompUnit.FPU
LM, GB, MM = MemUnit.LOCAL_MEM, MemUnit.GLOBAL_BUF, MemUnit.MAIN_MEM


def cnn(
    layers: int = 4,
    height: int = 32,
    width: int = 32,
    channels: int = 16,
    kernels: int = 16,
    kernel_size: int = 3,
    elem_bytes: int = 1,
) -> Workload:
    """Pile de convolutions, chacune suivie d'une activation sur l'unité vectorielle."""
    vertices: List[Vertex] = []
    edges: List[Edge] = []
    c_in = channels
    prev: Optional[str] = None
    for i in range(layers):
        ifmap = height * width * c_in * elem_bytes
        weights = c_in * kernels * kernel_size * kernel_size * elem_bytes
        ofmap = height * width * kernels * elem_bytes
        macs = height * width * c_in * kernels * kernel_size * kernel_size
        conv = Vertex(
            f"conv{i}",
            VertexStats({SA: macs}, {GB: ifmap + weights, MM: weights}, {GB: ofmap}, ifmap + weights + ofmap),
            "conv",
            {"x": width, "y": height, "c": c_in, "k": kernels, "r": kernel_size, "s": kernel_size},
        )
        relu = Vertex(
            f"relu{i}",
            VertexStats({VEC: height * width * kernels}, {GB: ofmap}, {GB: ofmap}, ofmap),
            "relu",
        )
        vertices += [conv, relu]
        if prev is not None:
            edges.append((prev, conv.id, ifmap))
        edges.append((conv.id, relu.id, ofmap))
        prev = relu.id
        c_in = kernels
    return Workload(tuple(vertices), tuple(edges))


def mlp(sizes: Sequence[int] = (256, 256, 10), batch: int = 1, elem_bytes: int = 1) -> Workload:
    vertices: List[Vertex] = []
    edges: List[Edge] = []
    for i, (n_in, n_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        weights = n_in * n_out * elem_bytes
        acts_in, acts_out = batch * n_in * elem_bytes, batch * n_out * elem_bytes
        vertices.append(
            Vertex(
                f"fc{i}",
                VertexStats({SA: batch * n_in * n_out}, {GB: acts_in + weights, MM: weights}, {GB: acts_out}, acts_in + weights + acts_out),
                "matmul",
            )
        )
        if i:
            edges.append((f"fc{i - 1}", f"fc{i}", acts_in))
    return Workload(tuple(vertices), tuple(edges))


def dot(n: int = 1024, chunks: int = 4, elem_bytes: int = 1) -> Workload:
    """Produit scalaire découpé : produits partiels parallèles puis réduction."""
    size = -(-n // chunks)
    vertices: List[Vertex] = []
    edges: List[Edge] = []
    for i in range(chunks):
        length = min(size, n - i * size)
        if length <= 0:
            break
        nbytes = 2 * length * elem_bytes
        vertices.append(Vertex(f"mul{i}", VertexStats({VEC: length}, {MM: nbytes}, {GB: elem_bytes}, nbytes), "dot"))
    reduce = Vertex(
        "reduce",
        VertexStats({FPU: len(vertices)}, {GB: len(vertices) * elem_bytes}, {MM: elem_bytes}, len(vertices) * elem_bytes),
        "reduce",
    )
    edges = [(v.id, reduce.id, elem_bytes) for v in vertices]
    return Workload(tuple(vertices) + (reduce,), tuple(edges))


def transformer(seq: int = 128, d_model: int = 256, heads: int = 4, d_ff: int = 1024, elem_bytes: int = 1) -> Workload:
    """Squelette d'un bloc d'encodeur : projections, attention par tête, MLP."""
    e = elem_bytes
    d_head = d_model // heads
    x = seq * d_model * e
    vertices: List[Vertex] = []
    edges: List[Edge] = []

    def add(vid: str, stats: VertexStats, kind: str, parents: Sequence[str] = (), nbytes: int = x) -> None:
        vertices.append(Vertex(vid, stats, kind))
        edges.extend((p, vid, nbytes) for p in parents)

    w_qkv = 3 * d_model * d_model * e
    add("qkv", VertexStats({SA: 3 * seq * d_model * d_model}, {GB: x + w_qkv, MM: w_qkv}, {GB: 3 * x}, 4 * x + w_qkv), "matmul")
    concat_parents = []
    for h in range(heads):
        q = seq * d_head * e
        scores = seq * seq * e
        add(f"score{h}", VertexStats({SA: seq * seq * d_head}, {GB: 2 * q}, {GB: scores}, 2 * q + scores), "matmul", ["qkv"], 2 * q)
        add(f"softmax{h}", VertexStats({FPU: 3 * seq * seq}, {GB: scores}, {GB: scores}, scores), "softmax", [f"score{h}"], scores)
        add(f"av{h}", VertexStats({SA: seq * seq * d_head}, {GB: scores + q}, {GB: q}, scores + 2 * q), "matmul", [f"softmax{h}"], scores)
        concat_parents.append(f"av{h}")
    w_o = d_model * d_model * e
    add("proj", VertexStats({SA: seq * d_model * d_model}, {GB: x + w_o, MM: w_o}, {GB: x}, 2 * x + w_o), "matmul", concat_parents, seq * d_head * e)
    add("norm1", VertexStats({FPU: 4 * seq * d_model}, {GB: x}, {GB: x}, x), "layernorm", ["proj"])
    w1 = d_model * d_ff * e
    h_ff = seq * d_ff * e
    add("ff1", VertexStats({SA: seq * d_model * d_ff}, {GB: x + w1, MM: w1}, {GB: h_ff}, x + w1 + h_ff), "matmul", ["norm1"])
    add("gelu", VertexStats({VEC: seq * d_ff}, {GB: h_ff}, {GB: h_ff}, h_ff), "gelu", ["ff1"], h_ff)
    add("ff2", VertexStats({SA: seq * d_ff * d_model}, {GB: h_ff + w1, MM: w1}, {GB: x}, h_ff + w1 + x), "matmul", ["gelu"], h_ff)
    add("norm2", VertexStats({FPU: 4 * seq * d_model}, {GB: x}, {GB: x}, x), "layernorm", ["ff2"])
    return Workload(tuple(vertices), tuple(edges))


def random_dag(
    n: int = 20,
    seed: int = 0,
    edge_prob: float = 0.2,
    max_ops: int = 4096,
    max_bytes: int = 8192,
) -> Workload:
    """DAG aléatoire : arêtes i → j seulement pour i < j."""
    rng = np.random.default_rng(seed)
    width = len(str(max(n - 1, 0)))
    ids = [f"v{i:0{width}d}" for i in range(n)]
    vertices: List[Vertex] = []
    for vid in ids:
        comp = {u: int(rng.integers(1, max_ops + 1)) for u in CompUnit if rng.random() < 0.4}
        read = {m: int(rng.integers(1, max_bytes + 1)) for m in MemUnit if rng.random() < 0.5}
        write = {m: int(rng.integers(1, max_bytes + 1)) for m in MemUnit if rng.random() < 0.3}
        if not comp and not read:
            comp = {SA: int(rng.integers(1, max_ops + 1))}
        alloc = int(rng.integers(0, max_bytes + 1))
        vertices.append(Vertex(vid, VertexStats(comp, read, write, alloc), "op"))
    edges: List[Edge] = []
    for j in range(n):
        for i in range(j):
            if rng.random() < edge_prob:
                edges.append((ids[i], ids[j], int(rng.integers(1, max_bytes + 1))))
    return Workload(tuple(vertices), tuple(edges))


GENERATORS = {"cnn": cnn, "mlp": mlp, "dot": dot, "transformer": transformer, "random": random_dag}
