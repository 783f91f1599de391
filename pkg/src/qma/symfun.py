"""Power sums, elementary and complete symmetric functions of the quantum
matrix, the ordinary/wedge/symmetric matrix powers, the zeroth power and
the braid shift operator used in the commutativity argument.

All values are free-algebra representatives; nothing here reduces modulo
the relation ideal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .ncalgebra import NCPoly, OpPoly, QuantumMatrixAlgebra, partial_qtrace_poly
from .qfield import qnum
from .rmatrix import ProjectorTower, RMatrixPair
from .tensorspace import NotInvertible, SparseOp, chain, embed, inverse, partial_qtrace

KINDS = ("power_sum", "elementary", "complete")
POWER_KINDS = ("ordinary", "wedge", "symmetric")


class DNotInvertible(ArithmeticError):
    pass


@dataclass
class CharElement:
    kind: str
    k: int
    value: NCPoly


@dataclass
class MatrixPower:
    kind: str
    k: int
    value: OpPoly


def kernel(alg: QuantumMatrixAlgebra, kind: str, k: int, tower: Optional[ProjectorTower] = None) -> SparseOp:
    """The scalar operator contracted against M_1bar...M_kbar.

    ``R_{1->k-1}`` for power sums, ``A^(k)`` / ``S^(k)`` otherwise.  A
    ``tower`` argument overrides the pair's own projectors.
    """
    pair = alg.pair
    if kind in ("power_sum", "ordinary"):
        if k == 1:
            return SparseOp.identity(pair.N, 1)
        return chain(pair.Rhat, 1, k - 1, k)
    if tower is None:
        tower = pair.antisym(k) if kind in ("elementary", "wedge") else pair.sym(k)
    return tower[k]


def _contract(alg: QuantumMatrixAlgebra, Y: SparseOp, k: int, first: int):
    return partial_qtrace_poly(Y @ alg.mprod(1, k, k), alg.pair.D, range(first, k + 1))


def char_element(alg: QuantumMatrixAlgebra, kind: str, k: int, tower: Optional[ProjectorTower] = None) -> CharElement:
    if kind not in KINDS:
        raise ValueError(f"unknown symmetric function kind {kind!r}")
    key = ("char", kind, k)
    if tower is None and key in alg._sym:
        return alg._sym[key]
    if k == 0:
        val = NCPoly.one(alg.N)
    else:
        val = _contract(alg, kernel(alg, kind, k, tower), k, 1)
    out = CharElement(kind, k, val)
    if tower is None:
        alg._sym[key] = out
    return out


def power_sum(alg: QuantumMatrixAlgebra, k: int) -> CharElement:
    """s_k = Tr_F(1..k)(R_1 R_2 ... R_{k-1} M_1bar ... M_kbar)."""
    return char_element(alg, "power_sum", k)


def elementary(alg: QuantumMatrixAlgebra, k: int, tower: Optional[ProjectorTower] = None) -> CharElement:
    """sigma_k = Tr_F(1..k)(A^(k) M_1bar ... M_kbar)."""
    return char_element(alg, "elementary", k, tower)


def complete(alg: QuantumMatrixAlgebra, k: int, tower: Optional[ProjectorTower] = None) -> CharElement:
    """tau_k = Tr_F(1..k)(S^(k) M_1bar ... M_kbar)."""
    return char_element(alg, "complete", k, tower)


def _power(alg: QuantumMatrixAlgebra, kind: str, k: int, tower=None) -> MatrixPower:
    if k < 1:
        raise ValueError("matrix powers start at k = 1; use zeroth_power for k = 0")
    key = ("pow", kind, k)
    if tower is None and key in alg._sym:
        return alg._sym[key]
    if k == 1:
        val = alg.M
    else:
        val = _contract(alg, kernel(alg, kind, k, tower), k, 2)
    out = MatrixPower(kind, k, val)
    if tower is None:
        alg._sym[key] = out
    return out


def matrix_power(alg: QuantumMatrixAlgebra, k: int) -> MatrixPower:
    """M^kbar = Tr_F(2..k)(R_{1->k-1} M_1bar ... M_kbar)."""
    return _power(alg, "ordinary", k)


def wedge_power(alg: QuantumMatrixAlgebra, k: int, tower: Optional[ProjectorTower] = None) -> MatrixPower:
    return _power(alg, "wedge", k, tower)


def sym_power(alg: QuantumMatrixAlgebra, k: int, tower: Optional[ProjectorTower] = None) -> MatrixPower:
    return _power(alg, "symmetric", k, tower)


def zeroth_power_matrix(pair: RMatrixPair, D: Optional[SparseOp] = None) -> SparseOp:
    """q^-n n_q Tr_(2..n)(A^(n)) D^-1 with the ordinary (D-free) inner trace."""
    n = pair.height
    if n is None:
        raise ValueError("height unknown: validate the pair first")
    D = pair.D if D is None else D
    try:
        D_inv = inverse(D)
    except NotInvertible:
        raise DNotInvertible("the quantum trace matrix D is singular") from None
    qv = pair.q_param
    A = pair.antisym(n)[n]
    T = A if n == 1 else partial_qtrace(A, None, range(2, n + 1))
    return (T @ D_inv).scale(qv ** (-n) * qnum(n, qv))


def zeroth_power(alg: QuantumMatrixAlgebra) -> MatrixPower:
    return MatrixPower("ordinary", 0, OpPoly.from_scalar(zeroth_power_matrix(alg.pair)))


def power_by_index(alg: QuantumMatrixAlgebra, k: int) -> OpPoly:
    """M^kbar with M^0bar the normalized scalar matrix."""
    return zeroth_power(alg).value if k == 0 else matrix_power(alg, k).value


# ---------------------------------------------------------------------------
# the braid shift operator
# ---------------------------------------------------------------------------


def shift_conjugator(pair: RMatrixPair, i: int, k: int) -> SparseOp:
    """U = R_{i->i+k-1} ... R_{2->k+1} R_{1->k} on arity i+k."""
    total = i + k
    U = None
    for j in range(i, 0, -1):
        c = chain(pair.Rhat, j, j + k - 1, total)
        U = c if U is None else U @ c
    return U


def shift_conjugator_inverse(pair: RMatrixPair, i: int, k: int) -> SparseOp:
    total = i + k
    R_inv = pair.R_inv
    out = None
    for j in range(1, i + 1):
        # (R_j ... R_{j+k-1})^-1 = R_{j+k-1}^-1 ... R_j^-1
        for m in range(j + k - 1, j - 1, -1):
            f = embed(R_inv, m, total)
            out = f if out is None else out @ f
    return out


def check_shift(pair: RMatrixPair, Y: SparseOp, i: int, Z: Optional[SparseOp] = None):
    """Y^(k) = U^-1 Y^(i+1,k) U and Z^(k+1,i) = U^-1 Z^(i) U.

    ``Y`` has arity k and ``Z`` arity i (defaults to R_{1->i-1}, or the
    identity when i = 1).  Returns None on success, else a witness string.
    """
    k = Y.arity
    total = i + k
    if Z is None:
        Z = SparseOp.identity(pair.N, 1) if i == 1 else chain(pair.Rhat, 1, i - 1, i)
    if Z.arity != i:
        raise ValueError("Z must have arity i")
    U = shift_conjugator(pair, i, k)
    U_inv = shift_conjugator_inverse(pair, i, k)
    lhs, rhs = embed(Y, 1, total), U_inv @ embed(Y, i + 1, total) @ U
    if lhs != rhs:
        return "Y: " + str(lhs.first_difference(rhs))
    lhs, rhs = embed(Z, k + 1, total), U_inv @ embed(Z, 1, total) @ U
    if lhs != rhs:
        return "Z: " + str(lhs.first_difference(rhs))
    return None
