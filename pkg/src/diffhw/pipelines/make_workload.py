"""Pipeline: génération d'un workload synthétique."""
from __future__ import annotations

import inspect
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from diffhw.errors import ValidationError
from diffhw.workload import GENERATORS, Workload, save_workload

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def generator_options(kind: str, options: Mapping[str, float], seed: Optional[int] = None) -> Dict[str, Any]:
    """Valide les options `--set` contre la signature du générateur (entiers / flottants)."""
    if kind not in GENERATORS:
        raise ValidationError(f"générateur inconnu {kind!r} ({', '.join(GENERATORS)})")
    params = inspect.signature(GENERATORS[kind]).parameters
    unknown = [k for k in options if k not in params]
    if unknown:
        raise ValidationError(f"options inconnues pour {kind}", missing=unknown)
    kwargs: Dict[str, Any] = {}
    for name, value in options.items():
        default = params[name].default
        if isinstance(default, int) and not isinstance(default, bool):
            if float(value) != int(value):
                raise ValidationError(f"{name} doit être entier, reçu {value!r}")
            kwargs[name] = int(value)
        elif isinstance(default, float):
            kwargs[name] = float(value)
        else:
            raise ValidationError(f"{name} ne peut pas être fixé en ligne de commande")
    if seed is not None and "seed" in params:
        kwargs["seed"] = seed
    return kwargs


def run(
    kind: str,
    output_path: PathLike,
    options: Optional[Mapping[str, float]] = None,
    seed: Optional[int] = None,
) -> Workload:
    """
    Pipeline de génération de workload.

    Args:
        kind: cnn, mlp, dot, transformer ou random
        output_path: Fichier workload de sortie (.dfg)
        options: Paramètres du générateur (name → valeur)
        seed: Graine des générateurs aléatoires
    """
    kwargs = generator_options(kind, options or {}, seed)
    w = GENERATORS[kind](**kwargs)
    save_workload(w, output_path)
    logger.info(f"Workload {kind} ({len(w)} sommets) sauvegardé: {output_path}")
    return w


def main() -> None:
    from diffhw.cli import main as cli_main

    raise SystemExit(cli_main(["gen-workload", *sys.argv[1:]]))


if __name__ == "__main__":
    main()
