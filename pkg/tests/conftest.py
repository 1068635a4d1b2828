import pytest

from weildescent.fields import RATIONAL, field_make
from weildescent.finite import SymplecticSpace, fq_field, psi_standard
from weildescent.weil import even_odd_split, heisenberg_rep, weil_rep


@pytest.fixture(scope="session")
def model3():
    "q = 3, m = 1: psi, space, heisenberg rep, weil rep, even, odd."
    fq = fq_field(3, 1)
    space = SymplecticSpace(fq, 1)
    psi = psi_standard(fq, field_make(RATIONAL, 3))
    w = weil_rep(psi, space)
    even, odd = even_odd_split(w)
    return {
        "psi": psi,
        "space": space,
        "heis": heisenberg_rep(psi, space),
        "weil": w,
        "even": even,
        "odd": odd,
    }


@pytest.fixture(scope="session")
def model5():
    fq = fq_field(5, 1)
    space = SymplecticSpace(fq, 1)
    psi = psi_standard(fq, field_make(RATIONAL, 5))
    w = weil_rep(psi, space)
    even, odd = even_odd_split(w)
    return {
        "psi": psi,
        "space": space,
        "heis": heisenberg_rep(psi, space),
        "weil": w,
        "even": even,
        "odd": odd,
    }


@pytest.fixture(scope="session")
def model9():
    fq = fq_field(3, 2)
    space = SymplecticSpace(fq, 1)
    psi = psi_standard(fq, field_make(RATIONAL, 3))
    w = weil_rep(psi, space)
    even, odd = even_odd_split(w)
    return {
        "psi": psi,
        "space": space,
        "heis": heisenberg_rep(psi, space),
        "weil": w,
        "even": even,
        "odd": odd,
    }
