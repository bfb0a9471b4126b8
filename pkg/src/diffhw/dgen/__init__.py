"""Génération du modèle matériel (architecture + bibliothèques → H)."""
from diffhw.dgen.derive import (
    build_model,
    derive_compute_model,
    derive_memory_model,
    generate,
    primitive_expr,
)
from diffhw.dgen.library import (
    AccelTemplateLib,
    DeviceMemLib,
    DevicePrimLib,
    load_device_library,
    load_template_library,
)
from diffhw.dgen.modelfile import dump_model, load_model, parse_model, save_model
from diffhw.dgen.schemas import ArchSpec, ComputeSpec, MemorySpec, TechSpec, load_arch, load_tech, parse_arch, parse_tech

__all__ = [
    "build_model", "derive_compute_model", "derive_memory_model", "generate", "primitive_expr",
    "AccelTemplateLib", "DeviceMemLib", "DevicePrimLib", "load_device_library",
    "load_template_library", "dump_model", "load_model", "parse_model", "save_model",
    "ArchSpec", "ComputeSpec", "MemorySpec", "TechSpec", "load_arch", "load_tech",
    "parse_arch", "parse_tech",
]
