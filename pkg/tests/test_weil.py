"""The Schroedinger model: exact Heisenberg matrices, Weil generator
images, the measured metaplectic cocycle, even/odd split, and the twisting
identities."""

import random

import pytest

from weildescent.errors import IdentityFailure
from weildescent.fields import GaloisAut, field_make, MODULAR, RATIONAL
from weildescent.finite import (
    HeisElem,
    SymplecticSpace,
    TOKEN_W,
    char_twist,
    fq_field,
    psi_standard,
    sp_enumerate,
    token_m,
)
from weildescent.linalg import Matrix, intertwiner_space
from weildescent.weil import (
    cocycle_certificate,
    cocycle_value,
    even_odd_split,
    heisenberg_hom_check,
    heisenberg_rep,
    intertwining_check,
    parity_matrix,
    rho_matrix,
    semilinearity_check,
    weil_op,
    weil_rep,
    weil_twist_check,
)


def test_heisenberg_exhaustive_q3(model3):
    pairs = heisenberg_hom_check(model3["heis"], exhaustive=True)
    assert pairs == 27 * 27


def test_heisenberg_random_q5(model5):
    rng = random.Random(0)
    heisenberg_hom_check(model5["heis"], exhaustive=False, rng=rng, samples=150)


def test_rho_translation_is_cyclic_shift(model3):
    # rho(f1, 0) permutes the three Y-points cyclically
    sp, psi = model3["space"], model3["psi"]
    fq = sp.fq
    h = HeisElem(sp, (fq.zero(), fq.one()), fq.zero())
    m = rho_matrix(psi, sp, h)
    for row in m.rows:
        nz = [e for e in row if not e.is_zero()]
        assert len(nz) == 1 and nz[0] == psi.coeff.one()
    assert not m.is_identity() and (m * m * m).is_identity()


def test_rho_modulation_is_diagonal(model3):
    sp, psi = model3["space"], model3["psi"]
    fq = sp.fq
    h = HeisElem(sp, (fq.one(), fq.zero()), fq.zero())
    m = rho_matrix(psi, sp, h)
    diag = [m.rows[i][i] for i in range(3)]
    assert all(
        m.rows[i][j].is_zero() for i in range(3) for j in range(3) if i != j
    )
    assert sorted(str(d) for d in diag) == sorted(
        str(psi.coeff.zeta_pow(k)) for k in range(3)
    )


def test_rho_central_character(model5):
    sp, psi = model5["space"], model5["psi"]
    fq = sp.fq
    for t in fq.elements():
        h = HeisElem(sp, sp.zero_vector(), t)
        assert rho_matrix(psi, sp, h) == Matrix.identity(psi.coeff, 5).scale(psi(t))


def test_m_image_examples(model3):
    w = model3["weil"]
    sp = model3["space"]
    fq = sp.fq
    eye = w.image(token_m(Matrix(fq, [[fq.one()]])))
    assert eye.is_identity()
    m2 = w.image(token_m(Matrix(fq, [[fq.from_int(2)]])))
    # legendre(2 mod 3) = -1: signed permutation with sign -1
    nz = [e for row in m2.rows for e in row if not e.is_zero()]
    assert all(e == -w.field.one() for e in nz)


def test_w_image_squared_is_center_up_to_sign(model5):
    w = model5["weil"]
    sp = model5["space"]
    fq = sp.fq
    w0 = w.image(TOKEN_W)
    minus = w.image(token_m(Matrix(fq, [[fq.from_int(-1)]])))
    sq = w0 * w0
    assert sq == minus or sq == minus.scale(w.field.from_int(-1))


@pytest.mark.parametrize("fixture", ["model3", "model5", "model9"])
def test_intertwining(fixture, request):
    model = request.getfixturevalue(fixture)
    assert intertwining_check(model["weil"], model["heis"])


def test_stone_von_neumann_commutant(model3, model5, model9):
    for model in (model3, model5, model9):
        rep = model["heis"]
        comm = intertwiner_space(rep.gens_images(), rep.gens_images())
        assert len(comm) == 1


def test_cocycle_exhaustive_sp2f3(model3):
    sp = model3["space"]
    els = list(sp_enumerate(sp, 100))
    cert = cocycle_certificate(model3["weil"], [(a, b) for a in els for b in els])
    assert cert.all_pm_one()
    assert cert.summary()["pairs"] == 576


def test_cocycle_seeded_sp2f5(model5):
    sp = model5["space"]
    els = list(sp_enumerate(sp, 1000))
    rng = random.Random(0)
    pairs = [(rng.choice(els), rng.choice(els)) for _ in range(200)]
    cert = cocycle_certificate(model5["weil"], pairs)
    assert cert.all_pm_one()


def test_cocycle_inverse_pairs(model5):
    sp = model5["space"]
    w = model5["weil"]
    els = list(sp_enumerate(sp, 1000))
    rng = random.Random(1)
    K = w.field
    for g in rng.sample(els, 10):
        lam = cocycle_value(w, g, g.inverse())
        assert lam in (1, -1)
        prod = weil_op(w, g) * weil_op(w, g.inverse())
        assert prod == Matrix.identity(K, w.dim).scale(K.from_int(lam))


def test_cocycle_deterministic(model5):
    sp = model5["space"]
    els = list(sp_enumerate(sp, 1000))
    rng1, rng2 = random.Random(5), random.Random(5)
    p1 = [(rng1.choice(els), rng1.choice(els)) for _ in range(30)]
    p2 = [(rng2.choice(els), rng2.choice(els)) for _ in range(30)]
    c1 = cocycle_certificate(model5["weil"], p1)
    c2 = cocycle_certificate(model5["weil"], p2)
    assert [x[2] for x in c1.pairs] == [x[2] for x in c2.pairs]


@pytest.mark.parametrize(
    "fixture,dims",
    [("model3", (2, 1)), ("model5", (3, 2)), ("model9", (5, 4))],
)
def test_even_odd_dims(fixture, dims, request):
    model = request.getfixturevalue(fixture)
    assert (model["even"].dim, model["odd"].dim) == dims


def test_even_odd_projectors(model5):
    w = model5["weil"]
    sp = model5["space"]
    K = w.field
    S = parity_matrix(sp, K)
    half = K.from_fraction("1/2")
    Pp = (Matrix.identity(K, 5) + S).scale(half)
    Pm = (Matrix.identity(K, 5) - S).scale(half)
    assert (Pp + Pm).is_identity()
    assert Pp * Pp == Pp and Pm * Pm == Pm
    for tok in w.gen_names:
        img = w.image(tok)
        assert Pp * img == img * Pp
        assert Pm * img == img * Pm


def test_block_images_respect_products(model5):
    # block of a product = product of blocks, on a sample of words
    sp = model5["space"]
    w, even, odd = model5["weil"], model5["even"], model5["odd"]
    els = list(sp_enumerate(sp, 1000))
    rng = random.Random(2)
    for _ in range(5):
        g, h = rng.choice(els), rng.choice(els)
        for block in (even, odd):
            lhs = weil_op(block, g) * weil_op(block, h)
            lam = cocycle_value(w, g, h)
            rhs = weil_op(block, g * h).scale(block.field.from_int(lam))
            assert lhs == rhs


@pytest.mark.parametrize("fixture", ["model3", "model5", "model9"])
def test_semilinearity(fixture, request):
    model = request.getfixturevalue(fixture)
    psi, sp = model["psi"], model["space"]
    K = psi.coeff
    for u in K.galois_exponents():
        if u != 1:
            assert semilinearity_check(psi, sp, GaloisAut(K, u))


def test_twist_identities_q5(model5):
    psi, sp = model5["psi"], model5["space"]
    fq = sp.fq
    for c in (2, 3, 4):
        report = weil_twist_check(psi, sp, fq.from_int(c))
        assert all(report.values())


def test_twist_identity_gamma_one(model3):
    psi, sp = model3["psi"], model3["space"]
    report = weil_twist_check(psi, sp, sp.fq.one())
    assert all(report.values())


def test_square_twist_is_conjugation_by_m2(model5):
    # omega_{psi^4} = omega_psi conjugated by the M(2)-image, exactly
    psi, sp = model5["psi"], model5["space"]
    fq = sp.fq
    w = model5["weil"]
    w4 = weil_rep(char_twist(psi, fq.from_int(4)), sp)
    m2 = w.image(token_m(Matrix(fq, [[fq.from_int(2)]])))
    for tok in w.gen_names:
        assert w4.image(tok) * m2 == m2 * w.image(tok)


def test_modular_model_q5_ell7():
    fq = fq_field(5, 1)
    sp = SymplecticSpace(fq, 1)
    Km = field_make(MODULAR, 5, 7)
    psi = psi_standard(fq, Km)
    w = weil_rep(psi, sp)
    h = heisenberg_rep(psi, sp)
    assert intertwining_check(w, h)
    els = list(sp_enumerate(sp, 1000))
    rng = random.Random(3)
    pairs = [(rng.choice(els), rng.choice(els)) for _ in range(40)]
    assert cocycle_certificate(w, pairs).all_pm_one()
    even, odd = even_odd_split(w)
    assert (even.dim, odd.dim) == (3, 2)


def test_weil_m2_small():
    # dim q^m = 9 model on Sp(4, F_3): dims, intertwining, sample cocycle
    fq = fq_field(3, 1)
    sp = SymplecticSpace(fq, 2)
    psi = psi_standard(fq, field_make(RATIONAL, 3))
    w = weil_rep(psi, sp)
    assert w.dim == 9
    h = heisenberg_rep(psi, sp)
    assert intertwining_check(w, h)
    even, odd = even_odd_split(w)
    assert (even.dim, odd.dim) == (5, 4)
    els = []
    gen = sp_enumerate(sp, 10**5)
    for _ in range(40):
        els.append(next(gen))
    rng = random.Random(4)
    pairs = [(rng.choice(els), rng.choice(els)) for _ in range(10)]
    assert cocycle_certificate(w, pairs).all_pm_one()


def test_marked_rep_images_invertible(model5):
    for rep in (model5["weil"], model5["heis"], model5["even"], model5["odd"]):
        for tok in rep.gen_names:
            assert rep.image(tok).is_invertible()


def test_intertwining_detects_wrong_model(model3):
    # breaking the character wrecks the intertwining relation
    sp, psi = model3["space"], model3["psi"]
    fq = sp.fq
    w = weil_rep(psi, sp)
    wrong = weil_rep(char_twist(psi, fq.from_int(2)), sp)
    w._images[TOKEN_W] = wrong.image(TOKEN_W)
    with pytest.raises(IdentityFailure):
        intertwining_check(w, model3["heis"])


def test_bfs_matches_canonical_up_to_sign(model5):
    from weildescent.weil import bfs_matrices

    w = model5["weil"]
    mats = bfs_matrices(w, 10**4)
    rng = random.Random(9)
    keys = rng.sample(list(mats), 12)  # BFS insertion order is deterministic
    K = w.field
    for key in keys:
        g, bfs_mat = mats[key]
        canonical = weil_op(w, g)
        assert bfs_mat == canonical or bfs_mat == canonical.scale(K.from_int(-1))
