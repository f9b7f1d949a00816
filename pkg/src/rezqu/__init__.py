"""Memory-qubit-bus dynamics, MOVE design and error budgets for resonator-zero-qubit architectures."""

__version__ = "0.1.0"
