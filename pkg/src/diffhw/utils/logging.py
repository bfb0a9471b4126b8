import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def setup_logging(level: str | int = "INFO") -> None:
    """Installe un handler unique sur stderr pour le logger racine du paquet."""
    root = logging.getLogger("diffhw")
    root.setLevel(level if isinstance(level, int) else level.upper())
    if not any(getattr(h, "_diffhw", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT))
        handler._diffhw = True  # type: ignore[attr-defined]
        root.addHandler(handler)

