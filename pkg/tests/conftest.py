import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "oracles"))

from toposlab import builtin, Topos


@pytest.fixture(scope="session")
def delta1():
    return Topos(builtin("delta1"))


@pytest.fixture(scope="session")
def sets():
    return Topos(builtin("one"))


@pytest.fixture(scope="session")
def irreflexive():
    return Topos(builtin("parallel_pair"))


@pytest.fixture(scope="session")
def gfx(delta1):
    """The standard reflexive-graph objects used across the tests."""
    t = delta1
    one = t.terminal()
    I = t.yoneda(1).relabel("I")
    om = t.omega().presheaf
    return {
        "zero": t.initial(),
        "one": one,
        "two": t.coproduct(one, one).presheaf.relabel("two"),
        "I": I,
        "Omega": om,
        "IxI": t.product(I, I).presheaf.relabel("IxI"),
    }


@pytest.fixture(scope="session")
def gfx_family(gfx):
    return list(gfx.items())
