"""Finite fields, characters, symplectic machinery, factorization."""

import random

import pytest

from weildescent.errors import TooLarge, ZeroTwist
from weildescent.fields import GaloisAut, MODULAR, RATIONAL, field_make
from weildescent.finite import (
    HeisElem,
    SpElement,
    SymplecticSpace,
    TOKEN_W,
    char_galois,
    char_twist,
    eval_word,
    fq_field,
    heis_enumerate,
    legendre,
    psi_standard,
    sp_act_heis,
    sp_enumerate,
    sp_factor,
    sp_order,
    token_m,
    token_n,
    token_to_sp,
)
from weildescent.linalg import Matrix


def test_fq_modulus_deterministic():
    assert fq_field(3, 1).modulus == (0, 1)  # X itself
    assert fq_field(3, 2).modulus == (1, 0, 1)  # X^2 + 1
    assert fq_field(5, 1).q == 5
    f9 = fq_field(3, 2)
    x = f9.gen()
    assert x * x == -f9.one()


def test_fq_field_axioms_spot():
    fq = fq_field(3, 2)
    rng = random.Random(0)
    els = fq.elements()
    for _ in range(100):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert a * (b + c) == a * b + a * c
        if not a.is_zero():
            assert a * a.inv() == fq.one()
    assert fq.from_int(1).trace_to_prime() == 2  # Tr(1) = f * 1 = 2 mod 3


def test_legendre_examples():
    f5 = fq_field(5, 1)
    assert legendre(f5.one()) == 1
    assert legendre(f5.from_int(2)) == -1  # squares mod 5 are {1, 4}
    assert legendre(f5.from_int(4)) == 1
    f9 = fq_field(3, 2)
    for e in f9.elements():
        if not e.is_zero():
            assert legendre(e * e) == 1
    with pytest.raises(ZeroTwist):
        legendre(f5.zero())


def test_legendre_multiplicative():
    f9 = fq_field(3, 2)
    rng = random.Random(1)
    nz = [e for e in f9.elements() if not e.is_zero()]
    for _ in range(50):
        a, b = rng.choice(nz), rng.choice(nz)
        assert legendre(a * b) == legendre(a) * legendre(b)


def test_char_twist_examples():
    fq = fq_field(5, 1)
    K = field_make(RATIONAL, 5)
    psi = psi_standard(fq, K)
    assert char_twist(psi, fq.one()) == psi
    g = fq.from_int(2)
    assert char_twist(char_twist(psi, g), g.inv()) == psi
    assert char_twist(psi, g)(fq.one()) == K.zeta_pow(2)
    with pytest.raises(ZeroTwist):
        char_twist(psi, fq.zero())
    for x, y in [(fq.from_int(2), fq.from_int(4)), (fq.one(), fq.from_int(3))]:
        assert psi(x + y) == psi(x) * psi(y)


def test_char_galois_examples():
    fq = fq_field(5, 1)
    K = field_make(RATIONAL, 5)
    psi = psi_standard(fq, K)
    s = GaloisAut(K, 2)
    assert char_galois(GaloisAut(K, 1), psi) == psi
    psis = char_galois(s, psi)
    assert psis.twist == fq.from_int(2)
    for t in fq.elements():
        from weildescent.fields import apply_aut

        assert psis(t) == apply_aut(s, psi(t))
    # q = 9: the exponent reduces into F_3 inside F_9
    f9 = fq_field(3, 2)
    K3 = field_make(RATIONAL, 3)
    psi9 = psi_standard(f9, K3)
    psis9 = char_galois(GaloisAut(K3, 2), psi9)
    assert psis9.twist == f9.from_int(2)


def test_modular_character():
    fq = fq_field(5, 1)
    Km = field_make(MODULAR, 5, 7)
    psi = psi_standard(fq, Km)
    assert psi(fq.one()) == Km.zeta()
    assert psi(fq.from_int(2)) == Km.zeta_pow(2)


def test_heisenberg_group_axioms():
    fq = fq_field(3, 1)
    sp = SymplecticSpace(fq, 1)
    els = heis_enumerate(sp)
    assert len(els) == 27
    rng = random.Random(2)
    for _ in range(60):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * a.inverse() == HeisElem(sp, sp.zero_vector(), fq.zero())
    center = HeisElem(sp, sp.zero_vector(), fq.one())
    assert all(center * h == h * center for h in els)


def test_symplectic_closure_and_invariance():
    fq = fq_field(3, 1)
    sp = SymplecticSpace(fq, 1)
    els = list(sp_enumerate(sp, 100))
    rng = random.Random(3)
    for _ in range(40):
        g, h = rng.choice(els), rng.choice(els)
        SpElement(sp, (g * h).mat)  # recheck the symplectic relation
        SpElement(sp, g.inverse().mat)
        v, w = rng.choice(els).mat.col(0), rng.choice(els).mat.col(1)
        assert sp.pairing(g.apply(v), g.apply(w)) == sp.pairing(v, w)


def test_sp_action_on_heisenberg_is_automorphism():
    fq = fq_field(3, 1)
    sp = SymplecticSpace(fq, 1)
    els = list(sp_enumerate(sp, 100))
    H = heis_enumerate(sp)
    rng = random.Random(4)
    for _ in range(40):
        g = rng.choice(els)
        a, b = rng.choice(H), rng.choice(H)
        assert sp_act_heis(g, a * b) == sp_act_heis(g, a) * sp_act_heis(g, b)


@pytest.mark.parametrize("p,count", [(3, 24), (5, 120)])
def test_sp_enumerate_sl2(p, count):
    sp = SymplecticSpace(fq_field(p, 1), 1)
    els = list(sp_enumerate(sp, 10**6))
    assert len(els) == count == sp_order(1, p)
    assert len({g.mat.to_key() for g in els}) == count


def test_sp_enumerate_too_large():
    sp = SymplecticSpace(fq_field(5, 1), 1)
    with pytest.raises(TooLarge):
        list(sp_enumerate(sp, 10))


def test_sp_factor_identity_and_generators():
    fq = fq_field(5, 1)
    sp = SymplecticSpace(fq, 1)
    ident = SpElement(sp, Matrix.identity(fq, 2))
    assert sp_factor(ident) == []
    a = Matrix(fq, [[fq.from_int(2)]])
    g = token_to_sp(sp, token_m(a))
    assert sp_factor(g) == [token_m(a)]
    b = Matrix(fq, [[fq.from_int(3)]])
    n = token_to_sp(sp, token_n(b))
    assert sp_factor(n) == [token_n(b)]


@pytest.mark.parametrize("p", [3, 5])
def test_sp_factor_roundtrip_exhaustive(p):
    sp = SymplecticSpace(fq_field(p, 1), 1)
    for g in sp_enumerate(sp, 10**6):
        assert eval_word(sp, sp_factor(g)) == g


def test_sp_factor_roundtrip_sp4():
    sp = SymplecticSpace(fq_field(3, 1), 2)
    els = list(sp_enumerate(sp, 10**5))
    assert len(els) == 51840  # q^4 (q^2-1)(q^4-1)
    rng = random.Random(5)
    for g in rng.sample(els, 25):
        assert eval_word(sp, sp_factor(g)) == g
    # W0 is involutive up to the centre
    w0 = token_to_sp(sp, TOKEN_W)
    assert (w0 * w0).mat == -Matrix.identity(sp.fq, 4)


def test_q9_roundtrip_exhaustive():
    sp = SymplecticSpace(fq_field(3, 2), 1)
    for g in sp_enumerate(sp, 10**3):
        assert eval_word(sp, sp_factor(g)) == g


def test_word_json_roundtrip():
    from weildescent.finite import word_from_json, word_to_json

    fq = fq_field(3, 1)
    sp = SymplecticSpace(fq, 1)
    for g in sp_enumerate(sp, 100):
        word = sp_factor(g)
        back = word_from_json(fq, word_to_json(word))
        assert back == word
        assert eval_word(sp, back) == g


def test_sp_factor_singular_c_repair_path():
    # an element of Sp(4, F_3) with nonzero singular C-block exercises the
    # lower-unipotent repair N'(s) = M(-I) W0 N(-s) W0
    fq = fq_field(3, 1)
    sp = SymplecticSpace(fq, 2)
    z, o = fq.zero(), fq.one()
    # C = diag(1, 0) with A = diag(0, 1): columns (e1 -> f1, e2 -> e2)
    rows = [
        [z, z, z, z],
        [z, o, z, z],
        [o, z, z, z],
        [z, z, z, z],
    ]
    # complete to a symplectic matrix: f1 -> -e1, f2 -> f2
    rows[0][2] = -o
    rows[3][3] = o
    from weildescent.linalg import Matrix

    g = SpElement(sp, Matrix(fq, rows))
    A, B, C, D = g.blocks()
    assert not C.is_zero() and C.det().is_zero()
    word = sp_factor(g)
    assert eval_word(sp, word) == g
