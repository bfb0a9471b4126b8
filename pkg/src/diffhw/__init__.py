"""diffhw : modèles matériels différentiables, simulation et optimisation."""

__version__ = "0.1.0"
