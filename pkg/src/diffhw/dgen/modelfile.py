"""Sérialisation texte du modèle matériel (`[params]` puis `[metrics]`)."""
from __future__ import annotations

from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from diffhw.errors import ParseError
from diffhw.expr import Expr, ParamId, ParamKind, ValueDomain, dump, parse
from diffhw.expr.text import format_number
from diffhw.dgen.sections import parse_sections
from diffhw.hwmodel import HardwareModel, Lattice, Metric, ParamSpec, Unit, metric_key, parse_metric_key
from diffhw.utils.io import atomic_write_text, read_text

PathLike = Union[str, Path]
HEADER = "# diffhw hardware model"


def dump_model(h: HardwareModel) -> str:
    lines = [HEADER, "[params]"]
    for name, s in h.param_table.items():
        lines.append(
            f"{name} = {s.pid.kind.value} {s.pid.domain.value} "
            f"{format_number(s.seed)} {format_number(s.lower)} {format_number(s.upper)} {s.lattice.value}"
        )
    lines.append("[metrics]")
    for (unit, metric), e in h.entries.items():
        lines.append(f"{metric_key(unit, metric)} = {dump(e)}")
    return "\n".join(lines) + "\n"


def parse_model(text: str, path: Optional[PathLike] = None) -> HardwareModel:
    sections = {s.name: s for s in parse_sections(text, path)}
    unknown = set(sections) - {"params", "metrics"}
    if unknown:
        name = sorted(unknown)[0]
        raise ParseError(f"section inconnue: [{name}]", sections[name].line, path)

    table: Dict[str, ParamSpec] = {}
    if "params" in sections:
        for name, entry in sections["params"].entries.items():
            fields = entry.value.split()
            if len(fields) != 6:
                raise ParseError("attendu: kind domain seed lower upper lattice", entry.line, path)
            try:
                pid = ParamId(name, ParamKind(fields[0]), ValueDomain(fields[1]))
                seed, lower, upper = (float(x) for x in fields[2:5])
                lattice = Lattice(fields[5])
            except ValueError as exc:
                raise ParseError(str(exc), entry.line, path) from None
            table[name] = ParamSpec(pid, seed, lower, upper, lattice)

    def resolve(name: str) -> ParamId:
        spec = table.get(name)
        if spec is None:
            raise ParseError(f"paramètre non déclaré dans [params]: {name}")
        return spec.pid

    entries: Dict[Tuple[Unit, Metric], Expr] = {}
    if "metrics" in sections:
        for key, entry in sections["metrics"].entries.items():
            try:
                unit_metric = parse_metric_key(key)
            except ValueError as exc:
                raise ParseError(str(exc), entry.line, path) from None
            try:
                entries[unit_metric] = parse(entry.value, resolve)
            except ParseError as exc:
                raise ParseError(exc.reason, entry.line, path) from None
    return HardwareModel(entries, table)


def save_model(h: HardwareModel, path: PathLike) -> Path:
    return atomic_write_text(path, dump_model(h))


def load_model(path: PathLike) -> HardwareModel:
    return parse_model(read_text(path), path)
