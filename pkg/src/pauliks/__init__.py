"""pauliks: nonclassical structures of the N-qubit Pauli group.

Construction, exhaustive enumeration, and verification of identity products,
kernels, composite kernel structures, observable-based Kochen-Specker proofs,
ray/basis sets, parity proofs, the 600-cell ray system, and pentagon
inequalities.
"""

__version__ = "0.1.0"

from .pauli import (  # noqa: F401
    PauliObservable,
    commutes,
    format_observable,
    parse_observable,
    product,
)
