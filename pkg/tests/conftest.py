import sys

import pytest

from ainfty.algebras import acyclic_example, example_e1, massey_quiver, matrix_algebra
from ainfty.dga import cohomology
from ainfty.fields import GF, QQ
from ainfty.transfer import canonical_minimal_model


@pytest.fixture(scope="session")
def e1():
    return example_e1(QQ)


@pytest.fixture(scope="session")
def e1_t(e1):
    return cohomology(e1)


@pytest.fixture(scope="session")
def e1_model(e1, e1_t):
    return canonical_minimal_model(e1, e1_t, 4)


@pytest.fixture(scope="session")
def e1_f2():
    return example_e1(GF(2))


@pytest.fixture(scope="session")
def e1_f2_t(e1_f2):
    return cohomology(e1_f2)


@pytest.fixture(scope="session")
def mat2():
    return matrix_algebra(QQ, 2)


@pytest.fixture(scope="session")
def acyclic():
    return acyclic_example(QQ)


@pytest.fixture(scope="session")
def quiver():
    return massey_quiver(GF(2), (1, 2, 2, 1))


def cls(T, label):
    return {T.homology.index(label): 1}


def vec(A, *terms):
    """``vec(A, "av", "ua")`` or with coefficients ``vec(A, ("u", -1))``."""
    out = {}
    for t in terms:
        name, c = (t, 1) if isinstance(t, str) else t
        i = A.space.index(name)
        out[i] = A.field.red(out.get(i, 0) + c)
    return {k: v for k, v in out.items() if v}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
