"""Format texte des workloads : lignes `v ...` et `e ...`."""
from __future__ import annotations

import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Type, TypeVar, Union

from diffhw.errors import ParseError, ValidationError
from diffhw.hwmodel import CompUnit, MemUnit
from diffhw.utils.io import atomic_write_text, read_text
from diffhw.workload.graph import Edge, Vertex, VertexStats, Workload

PathLike = Union[str, Path]
E = TypeVar("E", CompUnit, MemUnit)

_ID = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_./+~:-]*$")
_INT = re.compile(r"^\d+$")
_LOOP_KEYS = ("x", "y", "c", "k", "r", "s")
_VERTEX_KEYS = ("kind", "comp", "alloc", "read", "write", "loops")


def _int(text: str, what: str) -> int:
    if not _INT.match(text):
        raise ParseError(f"{what}: entier naturel attendu, reçu {text!r}")
    return int(text)


def _unit_map(text: str, enum: Type[E], what: str) -> Dict[E, int]:
    out: Dict[E, int] = {}
    if not text:
        return out
    for item in text.split(","):
        name, sep, count = item.partition(":")
        if not sep:
            raise ParseError(f"{what}: `unité:nombre` attendu, reçu {item!r}")
        try:
            unit = enum(name)
        except ValueError:
            raise ParseError(f"{what}: unité inconnue {name!r}") from None
        if unit in out:
            raise ParseError(f"{what}: unité répétée {name!r}")
        out[unit] = _int(count, f"{what}.{name}")
    return out


def _loops(text: str) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for item in text.split(","):
        name, sep, extent = item.partition(":")
        if not sep or name not in _LOOP_KEYS or name in out:
            raise ParseError(f"loops: entrée invalide {item!r}")
        out[name] = _int(extent, f"loops.{name}")
    return out


def _parse_vertex(tokens: List[str]) -> Vertex:
    if len(tokens) < 2 or not _ID.match(tokens[1]):
        raise ParseError("identifiant de sommet invalide")
    fields: Dict[str, str] = {}
    for tok in tokens[2:]:
        key, sep, value = tok.partition("=")
        if not sep or key not in _VERTEX_KEYS:
            raise ParseError(f"contenu inattendu: {tok!r}")
        if key in fields:
            raise ParseError(f"champ répété: {key}")
        fields[key] = value
    if "alloc" not in fields:
        raise ParseError("champ alloc= manquant")
    stats = VertexStats(
        _unit_map(fields.get("comp", ""), CompUnit, "comp"),
        _unit_map(fields.get("read", ""), MemUnit, "read"),
        _unit_map(fields.get("write", ""), MemUnit, "write"),
        _int(fields["alloc"], "alloc"),
    )
    if stats.total_comp == 0 and stats.total_read == 0 and stats.total_write == 0 and stats.alloc == 0:
        raise ParseError("sommet sans aucune statistique non nulle")
    loops = _loops(fields["loops"]) if fields.get("loops") else None
    return Vertex(tokens[1], stats, fields.get("kind") or "op", loops)


def parse_workload(text: str, path: Optional[PathLike] = None) -> Workload:
    vertices: List[Vertex] = []
    edges: List[Edge] = []
    edge_lines: List[Tuple[int, Edge]] = []
    ids: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] == "v":
                v = _parse_vertex(tokens)
                if v.id in ids:
                    raise ParseError(f"sommet dupliqué: {v.id} (ligne {ids[v.id]})")
                ids[v.id] = lineno
                vertices.append(v)
            elif tokens[0] == "e":
                if len(tokens) != 4:
                    raise ParseError("attendu: e <src> <dst> <octets>")
                edge = (tokens[1], tokens[2], _int(tokens[3], "octets"))
                edge_lines.append((lineno, edge))
            else:
                raise ParseError(f"type de ligne inconnu: {tokens[0]!r}")
        except ParseError as exc:
            raise ParseError(exc.reason, lineno, path) from None

    seen: set[Tuple[str, str]] = set()
    for lineno, (src, dst, nbytes) in edge_lines:
        for end in (src, dst):
            if end not in ids:
                raise ParseError(f"arête vers un sommet inconnu: {end}", lineno, path)
        if (src, dst) in seen:
            raise ParseError(f"arête dupliquée: {src} -> {dst}", lineno, path)
        seen.add((src, dst))
        edges.append((src, dst, nbytes))
    try:
        return Workload(tuple(vertices), tuple(edges))
    except ValidationError as exc:
        raise ParseError(str(exc), None, path) from None


def _fmt_map(values: Dict) -> str:
    return ",".join(f"{k.value}:{v}" for k, v in values.items())


def dump_workload(w: Workload) -> str:
    lines = []
    for v in w.vertices:
        parts = ["v", v.id, f"kind={v.kind}"]
        s = v.stats
        if s.comp:
            parts.append(f"comp={_fmt_map(s.comp)}")
        parts.append(f"alloc={s.alloc}")
        if s.read:
            parts.append(f"read={_fmt_map(s.read)}")
        if s.write:
            parts.append(f"write={_fmt_map(s.write)}")
        if v.loops:
            parts.append("loops=" + ",".join(f"{k}:{x}" for k, x in v.loops.items()))
        lines.append(" ".join(parts))
    for src, dst, nbytes in w.edges:
        lines.append(f"e {src} {dst} {nbytes}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_workload(path: PathLike) -> Workload:
    return parse_workload(read_text(path), path)


def save_workload(w: Workload, path: PathLike) -> Path:
    return atomic_write_text(path, dump_workload(w))
