import pytest

from stringar import knit, parse_presentation
from stringar.families import make_family
from stringar.radical import RadicalTable

W3_SOURCE = """\
algebra W3
vertices 1 2 3 4
arrow a 1 -> 1
arrow b1 1 -> 2
arrow b2 2 -> 3
arrow b3 3 -> 4
relation a a
relation b1 b2
"""

# one shortcut arrow next to a two-arrow route, the shortcut continuation dies
EX3_SOURCE = """\
algebra EX3
vertices 1 2 3 4
arrow g1 1 -> 2
arrow g2 2 -> 3
arrow al 1 -> 3
arrow be 3 -> 4
relation al be
"""

# loop with an incoming bridge: the translate-periodic pattern
LOOP_IN_SOURCE = """\
algebra LOOPIN
vertices 1 2
arrow a 1 -> 1
arrow b 2 -> 1
relation a a
"""


@pytest.fixture(scope="session")
def w3():
    return parse_presentation(W3_SOURCE)


@pytest.fixture(scope="session")
def ex3():
    return parse_presentation(EX3_SOURCE)


@pytest.fixture(scope="session")
def loop_in():
    return parse_presentation(LOOP_IN_SOURCE)


@pytest.fixture(scope="session")
def u21():
    return make_family("U", m=2, n=2).presentation


@pytest.fixture(scope="session")
def u22():
    return make_family("U", m=2, n=3).presentation


@pytest.fixture(scope="session")
def u31():
    return make_family("U", m=3, n=2).presentation


@pytest.fixture(scope="session")
def v21():
    return make_family("V", m=2, n=3).presentation


@pytest.fixture(scope="session")
def w3_quiver(w3):
    return knit(w3)


@pytest.fixture(scope="session")
def w3_table(w3_quiver):
    return RadicalTable(w3_quiver)


@pytest.fixture(scope="session")
def u21_quiver(u21):
    return knit(u21)


@pytest.fixture(scope="session")
def u21_table(u21_quiver):
    return RadicalTable(u21_quiver)
