import pytest

from qma.ncalgebra import NCPoly, OpPoly, partial_qtrace_poly
from qma.qfield import q, reflect
from qma.rmatrix import antisymmetrizers, symmetrizers
from qma.symfun import (
    DNotInvertible,
    check_shift,
    complete,
    elementary,
    kernel,
    matrix_power,
    power_by_index,
    power_sum,
    shift_conjugator,
    shift_conjugator_inverse,
    sym_power,
    wedge_power,
    zeroth_power,
    zeroth_power_matrix,
)
from qma.tensorspace import SparseOp


def test_degree_zero_elements(alg2):
    one = NCPoly.one(2)
    assert power_sum(alg2, 0).value == one
    assert elementary(alg2, 0).value == one
    assert complete(alg2, 0).value == one


def test_first_elements(alg2):
    D = alg2.pair.D
    s1 = power_sum(alg2, 1).value
    assert s1 == partial_qtrace_poly(alg2.M, D, [1])
    assert elementary(alg2, 1).value == s1
    assert complete(alg2, 1).value == s1


def test_s1_is_trace_for_P(alg_rtt2):
    assert power_sum(alg_rtt2, 1).value == NCPoly.gen(2, 0, 0) + NCPoly.gen(2, 1, 1)


def test_first_powers(alg2):
    for f in (matrix_power, wedge_power, sym_power):
        assert f(alg2, 1).value == alg2.M
    with pytest.raises(ValueError):
        matrix_power(alg2, 0)


def test_homogeneity(alg2):
    for k in range(1, 4):
        for f in (power_sum, elementary, complete):
            v = f(alg2, k).value
            assert v.is_zero() or v.is_homogeneous(k)
        for f in (matrix_power, wedge_power, sym_power):
            for _, _, p in f(alg2, k).value.entries():
                assert p.is_homogeneous(k)


def test_trace_consistency(alg2):
    D = alg2.pair.D
    for k in range(1, 4):
        for pw, ch in ((matrix_power, power_sum), (wedge_power, elementary), (sym_power, complete)):
            assert partial_qtrace_poly(pw(alg2, k).value, D, [1]) == ch(alg2, k).value


def test_vanishing_above_height(alg2):
    assert elementary(alg2, 3).value.is_zero()
    assert wedge_power(alg2, 3).value.is_zero()
    assert not complete(alg2, 3).value.is_zero()


def test_re_powers_are_ordinary_products(alg_re2):
    M = alg_re2.M
    Mk = M
    for k in range(2, 4):
        Mk = Mk @ M
        diff = matrix_power(alg_re2, k).value - Mk
        assert alg_re2.op_membership(diff) is None


def test_rtt_powers_differ_from_products(alg_rtt2):
    # for F = P the R-twisted power is not the naive product
    diff = matrix_power(alg_rtt2, 2).value - alg_rtt2.M @ alg_rtt2.M
    assert alg_rtt2.op_membership(diff) is not None


def test_reflected_tower_gives_complete(alg2):
    R = alg2.pair.Rhat
    for k in range(1, 4):
        T = antisymmetrizers(R, k, reflect(q))
        assert elementary(alg2, k, T).value == complete(alg2, k).value
        assert wedge_power(alg2, k, T).value == sym_power(alg2, k).value
        T = symmetrizers(R, k, reflect(q))
        assert complete(alg2, k, T).value == elementary(alg2, k).value


def test_kernel(alg_rtt2):
    assert kernel(alg_rtt2, "power_sum", 1) == SparseOp.identity(2, 1)
    assert kernel(alg_rtt2, "elementary", 2) == alg_rtt2.pair.antisym(2)[2]


def test_zeroth_power_classical(alg_classical2):
    assert zeroth_power(alg_classical2).value == OpPoly.from_scalar(SparseOp.identity(2, 1))


def test_zeroth_power_standard(rtt2, re2):
    # diagonal scalar matrices
    for pair in (rtt2, re2):
        Z = zeroth_power_matrix(pair)
        assert all(rw == cw for (rw, cw) in Z.entries)
    # Tr_2 A^(2) = diag(q^-1, q) / 2_q by hand, D = I, so q^-2 2_q Tr_2 A^(2) = diag(q^-3, q^-1)
    assert zeroth_power_matrix(rtt2) == SparseOp.from_entries(2, 1, {((0,), (0,)): q ** -3, ((1,), (1,)): q ** -1})


def test_zeroth_power_singular_D(rtt2):
    with pytest.raises(DNotInvertible):
        zeroth_power_matrix(rtt2, SparseOp.zero(2, 1))


def test_power_by_index(alg2):
    assert power_by_index(alg2, 2) == matrix_power(alg2, 2).value
    assert power_by_index(alg2, 0) == zeroth_power(alg2).value


def test_shift_conjugator_inverse(pair2):
    for i, k in ((1, 1), (1, 2), (2, 1), (2, 2)):
        U = shift_conjugator(pair2, i, k)
        assert U @ shift_conjugator_inverse(pair2, i, k) == SparseOp.identity(2, i + k)


def test_shift_examples(pair2):
    R = pair2.Rhat
    assert check_shift(pair2, SparseOp.identity(2, 1), 1) is None
    assert check_shift(pair2, R, 1) is None
    assert check_shift(pair2, pair2.antisym(2)[2], 2) is None
    assert check_shift(pair2, pair2.sym(2)[2], 2) is None


def test_shift_rejects_non_braid_Y(rtt2):
    # a Y outside the algebra generated by R_1 is not moved correctly
    Y = SparseOp.from_entries(2, 2, {((0, 1), (0, 1)): 1})
    assert check_shift(rtt2, Y, 1) is not None


def test_shift_needs_matching_Z(rtt2):
    with pytest.raises(ValueError):
        check_shift(rtt2, rtt2.Rhat, 2, SparseOp.identity(2, 1))
