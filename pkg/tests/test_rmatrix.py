from fractions import Fraction

import pytest

from qma.qfield import q, qnum, reflect
from qma.rmatrix import (
    NotClosed,
    NotEvenHecke,
    RMatrixPair,
    UnknownFamily,
    ValidationError,
    antisymmetrizers,
    builtin,
    check_compatible,
    check_D_properties,
    check_hecke,
    check_twist_square,
    check_ybe,
    height,
    skew_inverse,
    standard_rhat,
    symmetrizers,
    twist,
    validate,
)
from qma.tensorspace import SparseOp, embed, inverse, partial_qtrace, rank_exact

P2 = SparseOp.permutation(2)
I2 = SparseOp.identity(2, 2)
R2 = standard_rhat(2)
R3 = standard_rhat(3)


def test_standard_entries():
    assert R2.get((0, 0), (0, 0)) == q
    assert R2.get((0, 1), (1, 0)) == 1
    assert R2.get((1, 0), (0, 1)) == 1
    assert R2.get((0, 1), (0, 1)) == q - q ** -1
    assert R2.get((1, 0), (1, 0)) == 0
    assert R2.nnz() == 5


def test_ybe_examples():
    assert check_ybe(P2)
    assert check_ybe(R2)
    assert check_ybe(R3)
    # a diagonal d(a,b): X1 X2 X1 gives d(a,b)^2 d(b,c), X2 X1 X2 gives d(a,b) d(b,c)^2
    diag = SparseOp.from_entries(2, 2, {((a, b), (a, b)): 2 * a + b + 1 for a in range(2) for b in range(2)})
    assert not check_ybe(diag)
    assert check_ybe(I2.scale(q))
    dense = SparseOp.from_function(2, 2, lambda r, c: 1 + r[0] + 2 * r[1] + 3 * c[0] * c[1] + (r == c))
    assert not check_ybe(dense)


def test_compatible_examples():
    assert check_compatible(R2, P2)
    assert check_compatible(R2, R2)
    assert check_compatible(R2, inverse(R2))
    assert check_compatible(R3, SparseOp.permutation(3))
    assert not check_compatible(R2, I2)


def test_hecke_examples():
    assert check_hecke(R2)
    assert check_hecke(R3)
    assert not check_hecke(P2)
    # q I is Hecke: (qI)^2 = q^2 I = I + (q - q^-1) q I
    assert check_hecke(I2.scale(q))
    assert not check_hecke(I2.scale(2))
    assert check_hecke(P2, Fraction(1))


def test_tower_levels():
    A = antisymmetrizers(R2, 3)
    S = symmetrizers(R2, 3)
    assert A[1] == SparseOp.identity(2, 1)
    assert S[1] == SparseOp.identity(2, 1)
    assert A[2] == (I2.scale(q) - R2).scale(1 / (q + q ** -1))
    assert S[2] == (I2.scale(q ** -1) + R2).scale(1 / (q + q ** -1))
    assert A[2] + S[2] == I2
    assert A[3].is_zero()
    assert not S[3].is_zero()


def test_classical_antisymmetrizer():
    A = antisymmetrizers(P2, 2, Fraction(1))
    assert A[2] == (I2 - P2).scale(Fraction(1, 2))


@pytest.mark.parametrize("R, N", [(R2, 2), (R3, 3)])
def test_towers_idempotent(R, N):
    for T in (antisymmetrizers(R, N + 1), symmetrizers(R, N + 1)):
        for k in range(1, N + 2):
            assert T[k] @ T[k] == T[k]
    A = antisymmetrizers(R, N + 1)
    assert A[N + 1].is_zero()
    assert rank_exact(A[N]) == 1


@pytest.mark.parametrize("R, N", [(R2, 2), (R3, 3)])
def test_reflection_maps_a_tower_to_s_tower(R, N):
    Ar = antisymmetrizers(R, N + 1, reflect(q))
    S = symmetrizers(R, N + 1)
    for k in range(1, N + 2):
        assert Ar[k] == S[k]


def test_height():
    assert height(R2, 3) == 2
    assert height(R3, 4) == 3
    with pytest.raises(NotEvenHecke):
        height(R2, 1)


def test_skew_inverse_of_P():
    psi, D = skew_inverse(P2)
    assert psi == P2
    assert D == SparseOp.identity(2, 1)


def test_skew_inverse_of_R():
    psi, D = skew_inverse(R2)
    assert D == SparseOp.from_entries(2, 1, {((0,), (0,)): q ** -3, ((1,), (1,)): q ** -1})
    assert partial_qtrace(embed(R2, 1, 2), D, {2}) == SparseOp.identity(2, 1)
    # defining equation Psi^{af}_{cg} F^{gb}_{fd} = delta^a_d delta^b_c
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    s = sum(
                        psi.get((a, f), (c, g)) * R2.get((g, b), (f, d)) for f in range(2) for g in range(2)
                    )
                    assert s == (1 if (a == d and b == c) else 0)


def test_not_closed():
    # the identity is invertible but its (a,c)-reshuffle has rank N
    with pytest.raises(NotClosed):
        skew_inverse(I2)


def test_D_properties(pair2):
    assert all(r.ok for r in check_D_properties(pair2))


def test_corrupted_D_detected(re2):
    bad = re2.D + SparseOp.from_entries(2, 1, {((0,), (0,)): 1})
    res = check_D_properties(re2, bad)
    failed = [r for r in res if not r.ok]
    assert failed
    assert all(r.witness for r in failed)


def test_twist_examples():
    assert twist(R2, P2) == P2 @ R2 @ P2
    assert twist(R2, R2) == R2
    for F in (P2, R2, inverse(R2)):
        RF = twist(R2, F)
        assert check_ybe(RF)
        assert check_compatible(RF, F)


def test_twist_square(pair2):
    assert check_twist_square(pair2)


def test_builtin_families():
    with pytest.raises(UnknownFamily):
        builtin("nope", 2)
    with pytest.raises(UnknownFamily):
        builtin("custom", 2)
    c = builtin("rtt-classical", 2)
    assert c.numeric and c.q_param == 1
    validate(c)
    assert c.D == SparseOp.identity(2, 1)
    assert c.height == 2


@pytest.mark.parametrize("family, N", [("rtt-standard", 2), ("re-standard", 2), ("inverse-twist-standard", 2),
                                        ("rtt-standard", 3), ("re-standard", 3)])
def test_validate_builtins(family, N):
    pair = builtin(family, N)
    res = validate(pair)
    assert all(r.ok for r in res)
    assert pair.height == N
    assert pair.D is not None and pair.Psi is not None


def test_inverse_twist_D():
    pair = builtin("inverse-twist-standard", 2)
    validate(pair)
    assert pair.D == SparseOp.from_entries(2, 1, {((0,), (0,)): q, ((1,), (1,)): q ** 3})


def test_validation_error_lists_failures():
    pair = RMatrixPair(2, R2, I2)
    with pytest.raises(ValidationError) as ei:
        validate(pair)
    names = {r.name for r in ei.value.results if not r.ok}
    assert "closed" in names
    assert "compatible" in names
    res = validate(RMatrixPair(2, R2, I2), strict=False)
    assert any(not r.ok and r.witness for r in res)


def test_specialize_validates():
    pair = builtin("re-standard", 2).specialize(3)
    validate(pair)
    assert pair.numeric
    assert pair.D.get((0,), (0,)) == Fraction(1, 27)


def test_qnumbers_nonzero_in_towers():
    # the tower denominators are q-numbers, nonzero over formal q
    for k in range(1, 6):
        assert qnum(k) != 0
