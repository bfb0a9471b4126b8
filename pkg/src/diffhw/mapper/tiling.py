"""Recherche du découpage en tuiles (x, y, c, k) d'une convolution."""
from __future__ import annotations

from typing import Dict, Tuple, Union

import numpy as np

from diffhw.errors import ValidationError
from diffhw.hwmodel import ConcreteHardwareModel, MemUnit, Metric
from diffhw.workload import Vertex

ArrayLike = Union[int, float, np.ndarray]
Tiling = Tuple[int, int, int, int]


def tile_factors(extent: int) -> np.ndarray:
    """Puissances de deux strictement inférieures à l'étendue, plus l'étendue."""
    powers = [1 << i for i in range(max(int(extent), 1).bit_length()) if (1 << i) < extent]
    return np.array(sorted(set(powers) | {max(int(extent), 1)}), dtype=np.int64)


def tile_footprint(x: ArrayLike, y: ArrayLike, c: ArrayLike, k: ArrayLike, r: int, s: int) -> ArrayLike:
    """Octets résidents : tuile d'entrée (avec halo), de poids et de sortie."""
    return (x + r - 1) * (y + s - 1) * c + c * k * r * s + x * y * k


def tiling_energy(
    x: ArrayLike,
    y: ArrayLike,
    c: ArrayLike,
    k: ArrayLike,
    extents: Dict[str, int],
    e_inner: float,
    e_outer: float,
) -> ArrayLike:
    """Énergie de transfert d'un découpage sur deux niveaux de mémoire.

    Le niveau externe fournit chaque tuile autant de fois qu'elle est
    rechargée ; chaque MAC lit entrée et poids dans le niveau interne.
    """
    X, Y, C, K = extents["x"], extents["y"], extents["c"], extents["k"]
    r, s = extents.get("r", 1), extents.get("s", 1)
    nx_, ny_ = np.ceil(X / x), np.ceil(Y / y)
    nc_, nk_ = np.ceil(C / c), np.ceil(K / k)
    spatial = nx_ * ny_
    inputs = (x + r - 1) * (y + s - 1) * c * spatial * nc_ * nk_
    weights = c * k * r * s * nc_ * nk_ * spatial
    outputs = x * y * k * spatial * nk_ * nc_
    outer = inputs + weights + outputs
    macs = X * Y * C * K * r * s
    return e_outer * outer + e_inner * (outer + 2.0 * macs)


def tiling_grid(extents: Dict[str, int]) -> Tuple[np.ndarray, ...]:
    axes = [tile_factors(extents[d]) for d in ("x", "y", "c", "k")]
    return tuple(g.ravel() for g in np.meshgrid(*axes, indexing="ij"))


def search_tiling(extents: Dict[str, int], capacity: float, e_inner: float, e_outer: float) -> Tiling:
    """Minimum d'énergie sous contrainte de capacité ; à égalité, la plus grande tuile."""
    x, y, c, k = tiling_grid(extents)
    r, s = extents.get("r", 1), extents.get("s", 1)
    fits = tile_footprint(x, y, c, k, r, s) <= capacity
    if not fits.any():
        return (1, 1, 1, 1)
    energy = tiling_energy(x, y, c, k, extents, e_inner, e_outer)[fits]
    x, y, c, k = x[fits], y[fits], c[fits], k[fits]
    volume = x * y * c * k
    # np.lexsort : dernière clé prioritaire
    best = np.lexsort((-k, -c, -y, -x, -volume, energy))[0]
    return int(x[best]), int(y[best]), int(c[best]), int(k[best])


def tiling_search(v: Vertex, c: ConcreteHardwareModel) -> Tiling:
    """Découpage d'un sommet de convolution portant ses étendues de boucles."""
    if not v.loops or any(d not in v.loops for d in ("x", "y", "c", "k")):
        raise ValidationError(f"{v.id}: étendues de boucles x, y, c, k requises")
    extents = {d: int(e) for d, e in v.loops.items()}
    levels = c.mem_units
    inner = next((m for m in (MemUnit.GLOBAL_BUF, MemUnit.LOCAL_MEM) if m in levels), None)
    if inner is None or MemUnit.MAIN_MEM not in levels:
        return extents["x"], extents["y"], extents["c"], extents["k"]
    return search_tiling(
        extents,
        c.lookup(inner, Metric.CAPACITY),
        c.lookup(inner, Metric.READ_ENERGY),
        c.lookup(MemUnit.MAIN_MEM, Metric.READ_ENERGY),
    )
