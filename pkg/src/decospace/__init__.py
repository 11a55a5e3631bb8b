"""decospace: layered combinatorial structures as truncated decomposition
spaces, with machine-checked simplicial axioms and exact incidence
coalgebras."""

from ._kernel import IMPLEMENTATION as kernel_implementation

__version__ = "0.1.0"
__all__ = ["kernel_implementation", "__version__"]
