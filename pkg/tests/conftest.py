import pytest

import regret_forge as rf


@pytest.fixture(scope="session")
def kuhn():
    return rf.build_kuhn()


@pytest.fixture(scope="session")
def kuhn_flat(kuhn):
    return rf.build_flat(kuhn)


@pytest.fixture(scope="session")
def leduc():
    return rf.build_leduc()


@pytest.fixture(scope="session")
def leduc_flat(leduc):
    return rf.build_flat(leduc)


@pytest.fixture(scope="session")
def goofspiel():
    return rf.build_goofspiel5()


@pytest.fixture(scope="session")
def goofspiel_flat(goofspiel):
    return rf.build_flat(goofspiel)


@pytest.fixture(scope="session")
def matrix22():
    return rf.build_matrix_game([[1.0, 0.9], [-0.7, 1.0]], name="matrix22")


@pytest.fixture(scope="session")
def pennies():
    return rf.build_matrix_game([[1, -1], [-1, 1]], name="pennies")
