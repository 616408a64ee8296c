import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import stabtherm as st


@pytest.fixture(scope="session")
def model_1q():
    return st.parse_model("qubits 1\nterm 1 Z\n")


@pytest.fixture(scope="session")
def model_2q():
    return st.parse_model("qubits 2\nterm 1 ZZ\n")


@pytest.fixture(scope="session")
def chain3():
    return st.build_ising(1, 3, periodic=False)


@pytest.fixture(scope="session")
def torus2():
    return st.build_ising(2, 2, periodic=True)


@pytest.fixture(scope="session")
def ising2d():
    return st.build_ising(2, 3, periodic=True)


@pytest.fixture(scope="session")
def toric2():
    return st.build_toric(2)


@pytest.fixture(scope="session")
def small_models(model_1q, model_2q, chain3, torus2):
    return {"1q": model_1q, "2q": model_2q, "chain3": chain3, "torus2": torus2}
