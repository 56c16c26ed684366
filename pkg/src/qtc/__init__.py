"""qtc: hybrid classical/quantum text classification on a statevector simulator."""

__version__ = "0.1.0"
