"""Utilitaires pour la lecture/écriture de fichiers."""
import json
import os
import tempfile
from io import StringIO
from pathlib import Path
from typing import Any, Union

import pandas as pd

from diffhw.settings import settings


def ensure_dir(path: Union[str, Path]) -> Path:
    """Créer le dossier parent d'un fichier si besoin."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def atomic_write_text(file_path: Union[str, Path], text: str) -> Path:
    """Écrit via un fichier temporaire puis os.replace (pas d'écriture partielle)."""
    path = ensure_dir(file_path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def read_text(file_path: Union[str, Path]) -> str:
    path = Path(file_path)
    if not path.exists():
        raise FileNotFoundError(f"Fichier non trouvé: {path}")
    return path.read_text(encoding="utf-8")


def frame_to_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, float_format=settings.FLOAT_FORMAT, lineterminator="\n")


def load_data(file_path: Union[str, Path]) -> Union[pd.DataFrame, dict]:
    """Relit une sortie : CSV (trace, rapport, historique, sweep) ou résultat JSON."""
    path = Path(file_path)
    text = read_text(path)
    if path.suffix == ".csv":
        return pd.read_csv(StringIO(text))
    if path.suffix == ".json":
        return json.loads(text)
    raise ValueError(f"Format non supporté: {path.suffix}")


def save_data(data: Union[pd.DataFrame, dict, str], file_path: Union[str, Path]) -> Path:
    """Sauvegarde des données vers un fichier (écriture atomique)."""
    path = Path(file_path)

    if isinstance(data, pd.DataFrame):
        if path.suffix == '.csv':
            return atomic_write_text(path, frame_to_csv(data))
        raise ValueError(f"Format non supporté pour DataFrame: {path.suffix}")
    elif isinstance(data, dict):
        if path.suffix == '.json':
            return atomic_write_text(path, json.dumps(data, indent=2, sort_keys=True) + "\n")
        raise ValueError(f"Format non supporté pour dict: {path.suffix}")
    elif isinstance(data, str):
        return atomic_write_text(path, data)
    else:
        raise ValueError(f"Type de données non supporté: {type(data)}")


def format_float(value: Any) -> str:
    return settings.FLOAT_FORMAT % float(value)
