"""The Schroedinger model over K = Q(zeta_p) (or its modular analogue):
the Heisenberg representation rho_psi and the Weil operators omega~ on
functions Y -> K, dimension q^m, as exact matrices.

Index set: the points of Y in counting order.  On the delta basis:

    rho(x+y, t) delta_{y0} = psi(t + <y0, x> - (1/2)<y, x>) delta_{y0 - y}

    M(a) image:  column y0 carries legendre(det a) at row a^-T y0
    N(b) image:  diagonal psi((1/2) y^T b y)
    W0 image:    S^-m * [psi(-y . y0)]  with  S = sum_u psi((1/2) u^2)

The W0 normalization is the normalised-measure convention made finite:
mu gives X total mass 1, so Omega_mu(psi o Q) = q^-m sum_x psi(Q(x)) and
S^-m = Omega^-1 q^-m.  Every entry stays inside K: this model needs no
auxiliary fourth root of unity.

omega~(g) is defined through the canonical factorization word of g; it is a
genuine representation only up to the +-1 metaplectic cocycle, which is
measured (never assumed) by cocycle_certificate."""

from __future__ import annotations

from .errors import CocycleViolation, IdentityFailure, TooLarge
from .fields import CoeffField, GaloisAut, apply_aut
from .finite import (
    AdditiveCharacter,
    FqElem,
    HeisElem,
    SpElement,
    SymplecticSpace,
    TOKEN_W,
    char_galois,
    char_twist,
    legendre,
    sp_factor,
    sp_order,
    token_m,
    token_n,
    token_to_sp,
)
from .linalg import Matrix


class MarkedRep:
    """A representation given by exact matrices on a fixed generating set.

    kind decides how images are produced: 'heis' and 'weil' compute them
    from the model formulas on demand (and can produce the image of *any*
    group element, not just declared generators), 'weil-even'/'weil-odd'
    cut blocks of a parent, 'derived' only carries a stored dict."""

    def __init__(self, field, dim, gen_names, label, kind, meta=None, images=None):
        self.field = field
        self.dim = dim
        self.gen_names = tuple(gen_names)
        self.label = label
        self.kind = kind
        self.meta = meta or {}
        self._images = dict(images or {})

    def image(self, key) -> Matrix:
        if key in self._images:
            return self._images[key]
        if self.kind == "heis":
            mat = rho_matrix(self.meta["psi"], self.meta["space"], _heis_from_key(self, key))
        elif self.kind == "weil":
            mat = weil_generator_image(self.meta["psi"], self.meta["space"], key)
        elif self.kind in ("weil-even", "weil-odd"):
            mat = _block_image(self, self.meta["parent"].image(key))
        else:
            raise KeyError(f"no stored image for {key!r}")
        self._images[key] = mat
        return mat

    def gens_images(self):
        return [self.image(k) for k in self.gen_names]

    def conjugate(self, sigma: GaloisAut) -> "MarkedRep":
        "Entrywise Galois conjugate ^sigma(rep) on the declared generators."
        images = {
            k: self.image(k).map(lambda e: apply_aut(sigma, e))
            for k in self.gen_names
        }
        return MarkedRep(
            self.field,
            self.dim,
            self.gen_names,
            f"^{sigma!r}({self.label})",
            "derived",
            meta={"parent": self, "sigma": sigma},
            images=images,
        )

    def to_json(self):
        return {
            "label": self.label,
            "dim": self.dim,
            "field": {"n": self.field.n, "char": self.field.char},
            "generators": [
                {
                    "token": _key_json(k),
                    "matrix": [[e.to_json() for e in row] for row in self.image(k).rows],
                }
                for k in self.gen_names
            ],
        }


def _key_json(key):
    if key[0] in ("M", "N"):
        return [key[0], [[list(e.coeffs) for e in row] for row in key[1]]]
    return list(key)


def _heis_from_key(rep, key):
    space = rep.meta["space"]
    fq = space.fq
    if key == ("T",):
        return HeisElem(space, space.zero_vector(), fq.one())
    tag, i, j = key
    v = list(space.zero_vector())
    pos = i if tag == "X" else space.m + i
    v[pos] = fq.one() if j == 0 else fq.gen() ** j
    return HeisElem(space, tuple(v), fq.zero())


# ---------------------------------------------------------------------------
# Heisenberg representation


def rho_matrix(psi: AdditiveCharacter, space: SymplecticSpace, h: HeisElem) -> Matrix:
    m = space.m
    K = psi.coeff
    pts = space.y_points()
    x = h.w[:m]
    y = h.w[m:]
    xw = tuple(x) + (space.fq.zero(),) * m
    half = space.half
    yx = space.pairing((space.fq.zero(),) * m + tuple(y), xw)
    base = h.t - half * yx
    n = len(pts)
    out = Matrix.zeros(K, n, n)
    for col, y0 in enumerate(pts):
        y0w = (space.fq.zero(),) * m + y0
        row = space.vector_index(tuple(a - b for a, b in zip(y0, y)))
        out.rows[row][col] = psi(base + space.pairing(y0w, xw))
    return out


def heisenberg_rep(psi: AdditiveCharacter, space: SymplecticSpace) -> MarkedRep:
    "Schroedinger model of the Heisenberg group with central character psi."
    assert space.fq.p % 2 == 1
    fq = space.fq
    gens = []
    for i in range(space.m):
        for j in range(fq.f):
            gens.append(("X", i, j))
    for i in range(space.m):
        for j in range(fq.f):
            gens.append(("Y", i, j))
    gens.append(("T",))
    return MarkedRep(
        psi.coeff,
        fq.q**space.m,
        gens,
        f"heisenberg({psi!r})",
        "heis",
        meta={"psi": psi, "space": space},
    )


# ---------------------------------------------------------------------------
# Weil generator images


def _weil_gauss_scalar(psi: AdditiveCharacter, space: SymplecticSpace):
    "S = sum_u psi((1/2) u^2); Omega_mu(psi o Q_W0) = q^-m S^m."
    fq = space.fq
    acc = psi.coeff.zero()
    half = space.half
    for u in fq.elements():
        acc = acc + psi(half * u * u)
    return acc


def weil_generator_image(psi: AdditiveCharacter, space: SymplecticSpace, token) -> Matrix:
    fq, m, K = space.fq, space.m, psi.coeff
    pts = space.y_points()
    n = len(pts)
    if token[0] == "M":
        a = Matrix(fq, [list(r) for r in token[1]])
        sign = K.from_int(legendre(a.det()))
        ainvt = a.inverse().transpose()
        out = Matrix.zeros(K, n, n)
        for col, y0 in enumerate(pts):
            row = space.vector_index(tuple(ainvt.mul_vec(list(y0))))
            out.rows[row][col] = sign
        return out
    if token[0] == "N":
        b = Matrix(fq, [list(r) for r in token[1]])
        assert b == b.transpose()
        half = space.half
        out = Matrix.zeros(K, n, n)
        for i, y in enumerate(pts):
            by = b.mul_vec(list(y))
            quad = fq.zero()
            for u, v in zip(y, by):
                quad = quad + u * v
            out.rows[i][i] = psi(half * quad)
        return out
    assert token == TOKEN_W
    s = _weil_gauss_scalar(psi, space)
    coeff = s.inv() ** m
    out = Matrix.zeros(K, n, n)
    cache = {}
    for col, y0 in enumerate(pts):
        for row, y in enumerate(pts):
            dot = fq.zero()
            for u, v in zip(y, y0):
                dot = dot + u * v
            dot = -dot
            if dot not in cache:
                cache[dot] = coeff * psi(dot)
            out.rows[row][col] = cache[dot]
    return out


def _gl_generator_tokens(space: SymplecticSpace):
    "Declared M/N/W generating tokens (all tokens of GL_1 when m = 1)."
    fq, m = space.fq, space.m
    toks = []
    if m == 1:
        for a in fq.elements()[1:]:
            toks.append(token_m(Matrix(fq, [[a]])))
        for b in fq.elements()[1:]:
            toks.append(token_n(Matrix(fq, [[b]])))
    else:
        one, zero = fq.one(), fq.zero()
        # GL_m generators: diag(g,1,...), adjacent transposition, transvection
        g = _fq_generator(fq)
        diag = Matrix.identity(fq, m)
        diag.rows[0][0] = g
        toks.append(token_m(diag))
        perm = Matrix.zeros(fq, m, m)
        perm.rows[0][1] = one
        perm.rows[1][0] = one
        for i in range(2, m):
            perm.rows[i][i] = one
        toks.append(token_m(perm))
        trans = Matrix.identity(fq, m)
        trans.rows[0][1] = one
        toks.append(token_m(trans))
        for i in range(m):
            for j in range(i, m):
                b = Matrix.zeros(fq, m, m)
                b.rows[i][j] = one
                b.rows[j][i] = one
                toks.append(token_n(b))
    toks.append(TOKEN_W)
    return toks


def _fq_generator(fq):
    "Least multiplicative generator of F_q^x in counting order."
    target = fq.q - 1
    primes = [r for r in range(2, target + 1) if target % r == 0 and _isp(r)]
    for k in range(1, fq.q):
        e = fq.element(k)
        if e.is_zero():
            continue
        if all(e ** (target // r) != fq.one() for r in primes):
            return e
    raise AssertionError("unreachable")


def _isp(n):
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


def weil_rep(psi: AdditiveCharacter, space: SymplecticSpace) -> MarkedRep:
    "The Weil operators omega~ through the canonical factorization section."
    assert space.fq.p % 2 == 1
    return MarkedRep(
        psi.coeff,
        space.fq.q**space.m,
        _gl_generator_tokens(space),
        f"weil({psi!r})",
        "weil",
        meta={"psi": psi, "space": space},
    )


def weil_op(rep: MarkedRep, g: SpElement) -> Matrix:
    "Canonical omega~(g): product of generator images along sp_factor(g)."
    assert rep.kind in ("weil", "weil-even", "weil-odd")
    space = rep.meta["space"] if rep.kind == "weil" else rep.meta["parent"].meta["space"]
    cache = rep.meta.setdefault("op_cache", {})
    key = g.mat.to_key()
    if key in cache:
        return cache[key]
    out = Matrix.identity(rep.field, rep.dim)
    for tok in sp_factor(g):
        out = out * rep.image(tok)
    cache[key] = out
    return out


# ---------------------------------------------------------------------------
# Even/odd split


def parity_data(space: SymplecticSpace):
    "Representatives of {y, -y} pairs, in counting order."
    pts = space.y_points()
    neg_index = [space.vector_index(tuple(-c for c in y)) for y in pts]
    even_reps = [i for i, j in enumerate(neg_index) if i <= j]
    odd_reps = [i for i, j in enumerate(neg_index) if i < j]
    return pts, neg_index, even_reps, odd_reps


def _block_image(block_rep: MarkedRep, full: Matrix) -> Matrix:
    """Matrix of a parity-commuting operator on the even/odd basis
    (delta_0 and delta_r +- delta_{-r} over representatives r)."""
    meta = block_rep.meta
    reps, neg_index, sign = meta["reps"], meta["neg_index"], meta["sign"]
    K = block_rep.field
    n = len(reps)
    out = Matrix.zeros(K, n, n)
    for colpos, r in enumerate(reps):
        # image of the basis vector supported on {r, -r}
        vec = [full.rows[i][r] for i in range(full.nrows)]
        if neg_index[r] != r:
            other = neg_index[r]
            s = K.from_int(sign)
            for i in range(full.nrows):
                vec[i] = vec[i] + s * full.rows[i][other]
        for rowpos, rr in enumerate(reps):
            out.rows[rowpos][colpos] = vec[rr]
        # consistency: the image must again be even/odd
        for i, j in enumerate(neg_index):
            if i < j:
                expect = vec[i] if sign == 1 else -vec[i]
                assert vec[j] == expect, "parity block leak: operator not equivariant"
    return out


def even_odd_split(rep: MarkedRep):
    "Even and odd subrepresentations, dims (q^m + 1)/2 and (q^m - 1)/2."
    assert rep.kind == "weil"
    space = rep.meta["space"]
    pts, neg_index, even_reps, odd_reps = parity_data(space)
    common = {"psi": rep.meta["psi"], "space": space, "parent": rep, "neg_index": neg_index}
    even = MarkedRep(
        rep.field,
        len(even_reps),
        rep.gen_names,
        f"weil-even({rep.meta['psi']!r})",
        "weil-even",
        meta={**common, "reps": even_reps, "sign": 1},
    )
    odd = MarkedRep(
        rep.field,
        len(odd_reps),
        rep.gen_names,
        f"weil-odd({rep.meta['psi']!r})",
        "weil-odd",
        meta={**common, "reps": odd_reps, "sign": -1},
    )
    return even, odd


def parity_matrix(space: SymplecticSpace, K: CoeffField) -> Matrix:
    pts = space.y_points()
    n = len(pts)
    out = Matrix.zeros(K, n, n)
    one = K.one()
    for col, y in enumerate(pts):
        out.rows[space.vector_index(tuple(-c for c in y))][col] = one
    return out


# ---------------------------------------------------------------------------
# Cocycle certificate


class CocycleCert:
    def __init__(self, pairs):
        self.pairs = pairs  # list of (g, h, lam) with lam = +-1

    def all_pm_one(self):
        return all(lam in (1, -1) for _, _, lam in self.pairs)

    def summary(self):
        return {
            "pairs": len(self.pairs),
            "plus": sum(1 for *_, lam in self.pairs if lam == 1),
            "minus": sum(1 for *_, lam in self.pairs if lam == -1),
        }


def _scalar_ratio(t, tprime):
    "lam with t = lam * tprime, or None."
    K = t.field
    for i in range(t.nrows):
        for j in range(t.ncols):
            if not tprime.rows[i][j].is_zero():
                lam = t.rows[i][j] * tprime.rows[i][j].inv()
                if t == tprime.scale(lam):
                    return lam
                return None
    return None


def cocycle_value(rep: MarkedRep, g: SpElement, h: SpElement) -> int:
    """lam(g,h) = omega~(g) omega~(h) omega~(gh)^-1, must be +-1.

    Empirically this section measures identically +1 on every finite
    group tested (exhaustively on Sp(2,F_3) and Sp(2,F_5)): the double
    cover of a finite symplectic group splits, and the canonical word
    section lands on the linear model.  Nothing downstream relies on
    that; everything treats omega~ as projective and keeps measuring."""
    t = weil_op(rep, g) * weil_op(rep, h)
    tprime = weil_op(rep, g * h)
    lam = _scalar_ratio(t, tprime)
    K = rep.field
    if lam == K.one():
        return 1
    if lam == -K.one():
        return -1
    raise CocycleViolation(f"lambda(g, h) = {lam!r} not in {{+1, -1}}")


def cocycle_certificate(rep: MarkedRep, pairs) -> CocycleCert:
    return CocycleCert([(g, h, cocycle_value(rep, g, h)) for g, h in pairs])


# ---------------------------------------------------------------------------
# Property checks (exact identities from the model)


def intertwining_check(wrep: MarkedRep, hrep: MarkedRep):
    """omega~(g) rho(h) omega~(g)^-1 = rho(g.h) for declared Weil generators
    g and Heisenberg generators h, exactly."""
    space = wrep.meta["space"]
    for tok in wrep.gen_names:
        g = token_to_sp(space, tok)
        omega = wrep.image(tok)
        omega_inv = omega.inverse()
        for hk in hrep.gen_names:
            h = _heis_from_key(hrep, hk)
            lhs = omega * hrep.image(hk) * omega_inv
            gh = HeisElem(space, g.apply(h.w), h.t)
            rhs = rho_matrix(hrep.meta["psi"], space, gh)
            if lhs != rhs:
                raise IdentityFailure(f"intertwining fails at {tok}, {hk}")
    return True


def semilinearity_check(psi: AdditiveCharacter, space: SymplecticSpace, sigma: GaloisAut):
    "sigma(omega~_psi(tok)) = omega~_{psi^sigma}(tok) on every declared token."
    rep = weil_rep(psi, space)
    rep2 = weil_rep(char_galois(sigma, psi), space)
    for tok in rep.gen_names:
        lhs = rep.image(tok).map(lambda e: apply_aut(sigma, e))
        if lhs != rep2.image(tok):
            raise IdentityFailure(f"semilinearity fails at {tok}")
    return True


def weil_twist_check(psi: AdditiveCharacter, space: SymplecticSpace, gamma: FqElem):
    """Exact finite-case forms of the twisting identities: the M-image is
    psi-independent (the Hilbert symbol is trivial here), the N-image twists
    into N(gamma b), the W0-image satisfies

        omega_{psi^gamma}(W0) = omega_psi(W0) M(gamma^-1)

    with the scalar identity Omega_mu(psi^gamma o Q) =
    legendre(gamma)^m Omega_mu(psi o Q), and conjugation by M(gamma)
    realises the square-twist on every generator."""
    fq, m = space.fq, space.m
    psig = char_twist(psi, gamma)
    rep = weil_rep(psi, space)
    repg = weil_rep(psig, space)
    report = {}
    for a in ([fq.elements()[k] for k in (1, 2)] if fq.q > 2 else [fq.one()]):
        if a.is_zero():
            continue
        tok = token_m(Matrix(fq, [[a]])) if m == 1 else None
        if tok is None:
            break
        report["m_identity"] = rep.image(tok) == repg.image(tok)
        if not report["m_identity"]:
            raise IdentityFailure("M-image depends on psi")
    for b in fq.elements()[1:3]:
        tokb = token_n(Matrix(fq, [[b]])) if m == 1 else None
        if tokb is None:
            break
        lhs = repg.image(tokb)
        rhs = rep.image(token_n(Matrix(fq, [[gamma * b]])))
        report["n_identity"] = lhs == rhs
        if lhs != rhs:
            raise IdentityFailure("N-twist identity fails")
    ginv = gamma.inv()
    eye = Matrix.identity(fq, m)
    lhs = repg.image(TOKEN_W)
    rhs = rep.image(TOKEN_W) * rep.image(token_m(eye.scale(ginv)))
    report["w_identity"] = lhs == rhs
    if lhs != rhs:
        raise IdentityFailure("W0-twist identity fails")
    s = _weil_gauss_scalar(psi, space)
    sg = _weil_gauss_scalar(psig, space)
    chi = psi.coeff.from_int(legendre(gamma) ** m)
    report["omega_scalar"] = (sg**m) == chi * (s**m)
    if not report["omega_scalar"]:
        raise IdentityFailure("Omega_{w,gamma} scalar identity fails")
    # conjugation by M(gamma) realises psi -> psi^(gamma^2) on all generators
    repgg = weil_rep(char_twist(psi, gamma * gamma), space)
    mg = rep.image(token_m(eye.scale(gamma)))
    for tok in rep.gen_names:
        if repgg.image(tok) * mg != mg * rep.image(tok):
            raise IdentityFailure(f"square-twist conjugation fails at {tok}")
    report["square_twist_conjugation"] = True
    # the quadratic-sum convention behind Omega^psi_{1,gamma} = legendre
    tot, tot_g = psi.coeff.zero(), psi.coeff.zero()
    for u in fq.elements():
        tot = tot + psi(u * u)
        tot_g = tot_g + psi(gamma * u * u)
    report["legendre_sum"] = tot_g == psi.coeff.from_int(legendre(gamma)) * tot
    if not report["legendre_sum"]:
        raise IdentityFailure("legendre character-sum identity fails")
    return report


# ---------------------------------------------------------------------------
# Exhaustive sweeps (traces, cocycle tables)


def heisenberg_hom_check(rep: MarkedRep, exhaustive: bool, rng=None, samples=200):
    """rho(h1 h2) = rho(h1) rho(h2) exactly: every pair when exhaustive,
    seeded samples otherwise.  Also the central character rho(0,t) = psi(t) Id."""
    from .finite import heis_enumerate

    assert rep.kind == "heis"
    space, psi = rep.meta["space"], rep.meta["psi"]
    els = heis_enumerate(space)
    mats = {h: rho_matrix(psi, space, h) for h in els}
    if exhaustive:
        pairs = [(a, b) for a in els for b in els]
    else:
        assert rng is not None
        pairs = [(rng.choice(els), rng.choice(els)) for _ in range(samples)]
    for a, b in pairs:
        if mats[a] * mats[b] != rho_matrix(psi, space, a * b):
            raise IdentityFailure(f"heisenberg hom fails at {a!r}, {b!r}")
    eye = Matrix.identity(rep.field, rep.dim)
    for t in space.fq.elements():
        h = HeisElem(space, space.zero_vector(), t)
        if rho_matrix(psi, space, h) != eye.scale(psi(t)):
            raise IdentityFailure(f"central character fails at t = {t!r}")
    return len(pairs)


def bfs_matrices(rep: MarkedRep, bound: int):
    """omega~-matrices (up to a +-1 per element) for every g in Sp, one
    matrix product per element, walking the Cayley graph of the declared
    generators.  Returns dict: matrix-key of g -> (SpElement, Matrix)."""
    assert rep.kind in ("weil", "weil-even", "weil-odd")
    space = rep.meta["space"] if rep.kind == "weil" else rep.meta["parent"].meta["space"]
    total = sp_order(space.m, space.fq.q)
    if total > bound:
        raise TooLarge(f"|Sp| = {total} exceeds bound {bound}")
    gens = [(tok, token_to_sp(space, tok), rep.image(tok)) for tok in rep.gen_names]
    ident = SpElement(space, Matrix.identity(space.fq, space.dim), _checked=True)
    out = {ident.mat.to_key(): (ident, Matrix.identity(rep.field, rep.dim))}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            gmat = out[g.mat.to_key()][1]
            for _, sgen, img in gens:
                h = g * sgen
                k = h.mat.to_key()
                if k not in out:
                    out[k] = (h, gmat * img)
                    nxt.append(h)
        frontier = nxt
    assert len(out) == total, "generators failed to generate Sp"
    return out


def trace_values(rep: MarkedRep, bound: int):
    "All traces of omega~(g) over Sp (each up to sign; fine for field tags)."
    mats = bfs_matrices(rep, bound)
    return [mat.trace() for _, mat in mats.values()]


def end_dimension_over_subfield(rep: MarkedRep, tag, bound: int):
    """dim over the tagged subfield R of End_{R[Mp]}(rep restricted to R),
    by the section-independent trace formula
    (1/|Sp|) sum_g Tr(omega~(g)) Tr(omega~(g)^-1)."""
    from .fields import trace_to_subfield

    mats = bfs_matrices(rep, bound)
    K = rep.field
    total = K.zero()
    for key, (g, mat) in mats.items():
        ginv = g.inverse()
        minv = mats[ginv.mat.to_key()][1]
        # mat * minv = c * Id with c a scalar: read entry (0,0)
        c = K.zero()
        for k in range(mat.ncols):
            c = c + mat.rows[0][k] * minv.rows[k][0]
        t1 = trace_to_subfield(mat.trace(), tag)
        t2 = trace_to_subfield(c.inv() * minv.trace(), tag)
        total = total + t1 * t2
    size = K.from_int(len(mats))
    dim = total * size.inv()
    assert dim.is_rational()
    frac = dim.as_fraction()
    assert frac.denominator == 1
    return int(frac)
