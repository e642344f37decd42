import pytest

from bideform import builtin_example


@pytest.fixture(scope="session")
def kz2():
    return builtin_example("group_algebra_cyclic", n=2)


@pytest.fixture(scope="session")
def h4():
    return builtin_example("taft", n=2, q=-1)


@pytest.fixture(scope="session")
def taft3():
    return builtin_example("taft", n=3, q=2, p=7)


@pytest.fixture(scope="session")
def rpoly3():
    return builtin_example("restricted_poly", p=3)


@pytest.fixture(scope="session")
def rpoly2():
    return builtin_example("restricted_poly", p=2)


@pytest.fixture(scope="session")
def acceptance_examples(kz2, h4, taft3, rpoly3):
    return [("KZ2", kz2), ("H4", h4), ("taft3_F7", taft3), ("rpoly3_F3", rpoly3)]
