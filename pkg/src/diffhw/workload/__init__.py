"""Workloads : graphe de flot de données, format fichier, optimisations."""
from diffhw.workload.fileformat import dump_workload, load_workload, parse_workload, save_workload
from diffhw.workload.generators import GENERATORS, cnn, dot, mlp, random_dag, transformer
from diffhw.workload.graph import Edge, Vertex, VertexStats, Workload, split_vertex
from diffhw.workload.optimize import compute_merge, default_hvth, workload_optimize

__all__ = [
    "dump_workload", "load_workload", "parse_workload", "save_workload", "GENERATORS", "cnn",
    "dot", "mlp", "random_dag", "transformer", "Edge", "Vertex", "VertexStats", "Workload",
    "split_vertex", "compute_merge", "default_hvth", "workload_optimize",
]
