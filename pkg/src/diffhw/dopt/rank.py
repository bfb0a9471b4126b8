"""Classement des cibles technologiques par sensibilité normalisée |g·p|."""
from __future__ import annotations

from typing import List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from diffhw.dopt.backward import BipartiteGraph


def rank_technology_targets(
    grads: Mapping[str, float],
    values: Mapping[str, float],
    names: Optional[Sequence[str]] = None,
    graph: Optional[BipartiteGraph] = None,
    include_soc: bool = False,
) -> List[Tuple[str, float]]:
    """Paramètres triés par |g[p]·p| décroissant ; ordre d'entrée conservé à égalité.

    Sans `include_soc`, les paramètres qui ne touchent que le SoC (fréquence)
    sont écartés du classement.
    """
    names = list(names if names is not None else values)
    if graph is not None and not include_soc:
        names = [n for n in names if not graph.only_soc(n)]
    scored = [(n, abs(grads.get(n, 0.0) * values.get(n, 0.0))) for n in names]
    return sorted(scored, key=lambda item: -item[1])


def ranking_frame(ranking: Sequence[Tuple[str, float]], grads: Mapping[str, float]) -> pd.DataFrame:
    rows = [
        {"rank": i + 1, "param": name, "score": score, "gradient": grads.get(name, 0.0)}
        for i, (name, score) in enumerate(ranking)
    ]
    return pd.DataFrame(rows, columns=["rank", "param", "score", "gradient"])
