import pytest

from qma.ncalgebra import QuantumMatrixAlgebra
from qma.rmatrix import builtin, validate


def _validated(family, N):
    pair = builtin(family, N)
    validate(pair)
    return pair


@pytest.fixture(scope="session")
def rtt2():
    return _validated("rtt-standard", 2)


@pytest.fixture(scope="session")
def re2():
    return _validated("re-standard", 2)


@pytest.fixture(scope="session")
def inv2():
    return _validated("inverse-twist-standard", 2)


@pytest.fixture(scope="session")
def classical2():
    return _validated("rtt-classical", 2)


@pytest.fixture(scope="session")
def rtt3():
    return _validated("rtt-standard", 3)


@pytest.fixture(scope="session")
def re3():
    return _validated("re-standard", 3)


@pytest.fixture(scope="session", params=["rtt-standard", "re-standard", "inverse-twist-standard"])
def pair2(request):
    return _validated(request.param, 2)


@pytest.fixture(scope="session")
def alg_rtt2(rtt2):
    return QuantumMatrixAlgebra(rtt2)


@pytest.fixture(scope="session")
def alg_re2(re2):
    return QuantumMatrixAlgebra(re2)


@pytest.fixture(scope="session")
def alg2(pair2):
    return QuantumMatrixAlgebra(pair2)


@pytest.fixture(scope="session")
def alg_classical2(classical2):
    return QuantumMatrixAlgebra(classical2)
