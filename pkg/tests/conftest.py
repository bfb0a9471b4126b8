import os
from pathlib import Path
from typing import Dict, Mapping, Optional

# Niveau de log fixé AVANT l'import des settings
os.environ.setdefault("DIFFHW_LOG_LEVEL", "INFO")

import pytest

from diffhw.dgen import generate
from diffhw.hwmodel import (
    COMPUTE_METRICS,
    MEMORY_METRICS,
    CompUnit,
    ConcreteHardwareModel,
    HardwareModel,
    MemUnit,
    Metric,
    SocUnit,
    specialize,
)
from diffhw.workload import Vertex, VertexStats, Workload

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

MEM_DEFAULTS: Dict[Metric, float] = {q: 0.0 for q in MEMORY_METRICS}
MEM_DEFAULTS.update({Metric.CAPACITY: 1e9, Metric.BANDWIDTH: 1e9})
COMP_DEFAULTS: Dict[Metric, float] = {q: 0.0 for q in COMPUTE_METRICS}
COMP_DEFAULTS.update({Metric.THROUGHPUT: 1.0})


def _concrete(
    mem: Optional[Mapping[MemUnit, Mapping[Metric, float]]] = None,
    comp: Optional[Mapping[CompUnit, Mapping[Metric, float]]] = None,
    frequency: float = 1e9,
    arch: Optional[Mapping[str, float]] = None,
) -> ConcreteHardwareModel:
    values = {}
    for unit, metrics in (mem or {}).items():
        for q, v in {**MEM_DEFAULTS, **metrics}.items():
            values[(unit, q)] = float(v)
    for unit, metrics in (comp or {}).items():
        for q, v in {**COMP_DEFAULTS, **metrics}.items():
            values[(unit, q)] = float(v)
    values[(SocUnit.SOC, Metric.FREQUENCY)] = float(frequency)
    return ConcreteHardwareModel(values, arch=dict(arch or {}))


@pytest.fixture
def make_concrete():
    """Modèle concret écrit à la main ; métriques absentes = neutres."""
    return _concrete


@pytest.fixture
def vertex():
    def build(vid, comp=None, read=None, write=None, alloc=0, kind="op"):
        return Vertex(vid, VertexStats(comp or {}, read or {}, write or {}, alloc), kind)

    return build


@pytest.fixture
def chain(vertex):
    """a → b → c, chacun 64 MACs et 256 octets lus dans le tampon global."""
    vs = [vertex(v, {CompUnit.SYSTOLIC_ARRAY: 64}, {MemUnit.GLOBAL_BUF: 256}, alloc=256) for v in "abc"]
    return Workload(tuple(vs), (("a", "b", 32), ("b", "c", 32)))


@pytest.fixture(scope="session")
def arch_path() -> Path:
    return CONFIGS / "arch_example.cfg"


@pytest.fixture(scope="session")
def tech_path() -> Path:
    return CONFIGS / "tech_40nm.cfg"


@pytest.fixture(scope="session")
def model(arch_path, tech_path) -> HardwareModel:
    """Modèle généré depuis les fichiers de configs/ et la table 40nm embarquée."""
    return generate(arch_path, tech_path)


@pytest.fixture(scope="session")
def seed_assignment(model) -> Dict[str, float]:
    tech, arch = model.seed_assignment()
    return {**tech, **arch}


@pytest.fixture(scope="session")
def concrete(model) -> ConcreteHardwareModel:
    return specialize(model, *model.seed_assignment())


@pytest.fixture
def model_file(tmp_path, model) -> Path:
    from diffhw.dgen import save_model

    return save_model(model, tmp_path / "model.hw")
