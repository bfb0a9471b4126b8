"""Erreurs du domaine et conversion en rapport d'erreur / code de sortie.

Codes : 0 succès, 1 usage, 2 entrée invalide, 3 non-convergence. Une exception inattendue
(hors `DiffHWError` et fichiers absents) est journalisée avec sa trace puis rapportée
`internal_error` avec le code 1 : la plage 0..3 reste fermée, le type d'erreur du rapport JSON
distingue un crash d'une erreur d'usage.
"""
from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NONCONVERGENCE = 3


class DiffHWError(Exception):
    """Base de toutes les erreurs attendues (entrées invalides, contraintes)."""

    error_type = "input_error"
    exit_code = EXIT_INPUT

    def details(self) -> Dict[str, Any]:
        return {}


class UnboundParameter(DiffHWError, KeyError):
    error_type = "unbound_parameter"

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Paramètre non assigné: {name}")

    def __str__(self) -> str:
        return self.args[0]

    def details(self) -> Dict[str, Any]:
        return {"param": self.name}


class OutOfBounds(DiffHWError, ValueError):
    error_type = "out_of_bounds"

    def __init__(self, param: str, value: float, bounds: tuple[float, float]):
        self.param, self.value, self.bounds = param, value, bounds
        super().__init__(f"{param} = {value!r} hors bornes [{bounds[0]!r}, {bounds[1]!r}]")

    def details(self) -> Dict[str, Any]:
        return {"param": self.param, "value": self.value, "bounds": list(self.bounds)}


class MissingMetric(DiffHWError, KeyError):
    error_type = "missing_metric"

    def __init__(self, unit: Any, metric: Any):
        self.unit, self.metric = unit, metric
        super().__init__(f"Métrique absente: {unit}.{metric}")

    def __str__(self) -> str:
        return self.args[0]


class UnsupportedMemType(DiffHWError):
    error_type = "unsupported_mem_type"


class UnsupportedTemplate(DiffHWError):
    error_type = "unsupported_template"


class ParseError(DiffHWError):
    error_type = "parse_error"

    def __init__(self, reason: str, line: Optional[int] = None, path: Optional[str | Path] = None):
        self.reason, self.line, self.path = reason, line, str(path) if path is not None else None
        where = ":".join(str(p) for p in (self.path, self.line) if p is not None)
        super().__init__(f"{where}: {reason}" if where else reason)

    def located(self, path: str | Path) -> "ParseError":
        return ParseError(self.reason, self.line, path)

    def details(self) -> Dict[str, Any]:
        return {"path": self.path, "line": self.line, "reason": self.reason}


class ValidationError(DiffHWError):
    error_type = "validation_error"

    def __init__(self, message: str, missing: Iterable[str] = ()):
        self.missing = sorted(missing)
        suffix = f" (manquant: {', '.join(self.missing)})" if self.missing else ""
        super().__init__(message + suffix)

    def details(self) -> Dict[str, Any]:
        return {"missing": self.missing}


class CycleDetected(DiffHWError):
    error_type = "cycle_detected"

    def __init__(self, cycle: list[str]):
        self.cycle = cycle
        super().__init__(f"Le graphe contient un cycle: {' -> '.join(cycle)}")


class Unsplittable(DiffHWError):
    error_type = "unsplittable"


class InfeasibleVertex(DiffHWError):
    error_type = "infeasible_vertex"


class GridTooLarge(DiffHWError):
    error_type = "grid_too_large"


class MapperInvariantError(RuntimeError):
    """Violation interne (capacité dépassée) : bug, pas une erreur d'entrée."""


class NonConvergence(DiffHWError):
    error_type = "non_convergence"
    exit_code = EXIT_NONCONVERGENCE

    def __init__(self, message: str, result: Any = None):
        self.result = result
        super().__init__(message)


def from_pydantic(exc: Any, prefix: str = "") -> ValidationError:
    """Convertit une pydantic.ValidationError en ValidationError du domaine."""
    where = []
    reasons = []
    for err in exc.errors():
        loc = ".".join(str(p) for p in err.get("loc", ()) if p != "__root__")
        where.append(f"{prefix}{loc}" if loc else prefix.rstrip(".") or "entrée")
        reasons.append(err.get("msg", ""))
    return ValidationError("entrée invalide: " + "; ".join(r for r in reasons if r), missing=where)


def error_report(exc: BaseException) -> Dict[str, Any]:
    """Crée un rapport d'erreur standardisé (affiché sur stderr par la CLI)."""
    if isinstance(exc, DiffHWError):
        report: Dict[str, Any] = {"error": exc.error_type, "message": str(exc)}
        details = exc.details()
        if details:
            report["details"] = details
        return report
    if isinstance(exc, FileNotFoundError):
        return {"error": "file_not_found", "message": str(exc)}
    return {"error": "internal_error", "message": "Erreur interne", "details": {"type": type(exc).__name__}}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, DiffHWError):
        return exc.exit_code
    if isinstance(exc, (FileNotFoundError, IsADirectoryError)):
        return EXIT_INPUT
    logger.error(f"Erreur interne: {exc}", exc_info=exc)
    return EXIT_USAGE
