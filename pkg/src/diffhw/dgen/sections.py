"""Lecture des fichiers texte à sections `[nom]` et lignes `clé = valeur`."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

from diffhw.errors import ParseError

_SECTION = re.compile(r"^\[([A-Za-z_][A-Za-z0-9_.]*)\]$")
_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")


@dataclass(frozen=True)
class Entry:
    key: str
    value: str
    line: int


@dataclass
class Section:
    name: str
    line: int
    entries: Dict[str, Entry] = field(default_factory=dict)

    def get(self, key: str) -> Optional[Entry]:
        return self.entries.get(key)

    def number(self, key: str) -> Optional[float]:
        entry = self.entries.get(key)
        return None if entry is None else parse_number(entry.value, entry.line)


def parse_number(text: str, line: Optional[int] = None) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"nombre attendu, reçu {text!r}", line) from None


def parse_sections(text: str, path: Optional[Union[str, Path]] = None) -> List[Section]:
    """Découpe le texte en sections ; les commentaires commencent par `#`."""
    sections: List[Section] = []
    names: set[str] = set()
    current: Optional[Section] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            m = _SECTION.match(line)
            if not m:
                raise ParseError(f"en-tête de section invalide: {line!r}", lineno, path)
            name = m.group(1)
            if name in names:
                raise ParseError(f"section dupliquée: [{name}]", lineno, path)
            names.add(name)
            current = Section(name, lineno)
            sections.append(current)
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ParseError(f"ligne `clé = valeur` attendue: {line!r}", lineno, path)
        if not _KEY.match(key):
            raise ParseError(f"clé invalide: {key!r}", lineno, path)
        if current is None:
            raise ParseError("entrée hors de toute section", lineno, path)
        if key in current.entries:
            raise ParseError(f"clé dupliquée dans [{current.name}]: {key}", lineno, path)
        current.entries[key] = Entry(key, value, lineno)
    return sections
