"""Exact verification of Cayley-Hamilton-Newton identities in quantum matrix algebras."""

from .qfield import QRat, q, qnum, parse_qrat
from .rmatrix import RMatrixPair, builtin, validate
from .ncalgebra import QuantumMatrixAlgebra
from .verifier import CheckResult, SuiteConfig, run_suite

__all__ = [
    "QRat", "q", "qnum", "parse_qrat",
    "RMatrixPair", "builtin", "validate",
    "QuantumMatrixAlgebra",
    "CheckResult", "SuiteConfig", "run_suite",
]
__version__ = "0.1.0"
