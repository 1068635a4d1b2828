"""Character fields, isomorphism testing, restriction of scalars,
endomorphism algebras and Galois-orbit decompositions for the exact matrix
representations built by this package.

The endomorphism algebra of a restriction V|_R (V absolutely irreducible
over a cyclotomic K) is computed through its semilinear decomposition

    End_{R[G]}(V|_R)  =  (+)_{sigma in Gal(K/R)}  Hom_K(^sigma V, V) . sigma

each summand being a small exact intertwiner solve, instead of one dense
nullspace in (dim . [K:Q])^2 unknowns.  Completeness of the resulting basis
is certified independently by the character dimension formula
dim End = (1/|G|) sum tr(g) tr(g^-1), evaluated exactly (in its
section-independent form for the metaplectic sweeps)."""

from __future__ import annotations

from .errors import NotIrreducible, TooLarge
from .fields import (
    GaloisAut,
    SubfieldTag,
    apply_aut,
    subfield_membership,
    subfield_of_values,
    trace_to_subfield,
)
from .linalg import Matrix, intertwiner_space, invertible_element, ldl_psd
from .weil import MarkedRep, end_dimension_over_subfield, trace_values
from .finite import heis_enumerate


DEFAULT_SP_BOUND = 10**5


class TraceProfile:
    "Exact traces over an enumerated group (or its metaplectic section)."

    def __init__(self, rep, values, exhaustive):
        self.rep = rep
        self.values = values
        self.exhaustive = exhaustive

    def field_tag(self) -> SubfieldTag:
        return subfield_of_values(list(self.values) + [self.rep.field.one()])


def trace_profile(rep: MarkedRep, bound: int = DEFAULT_SP_BOUND) -> TraceProfile:
    if rep.kind in ("weil", "weil-even", "weil-odd"):
        return TraceProfile(rep, trace_values(rep, bound), True)
    assert rep.kind == "heis"
    space = rep.meta["space"]
    psi = rep.meta["psi"]
    vals = []
    for h in heis_enumerate(space):
        vals.append(_heis_trace(psi, space, h))
    return TraceProfile(rep, vals, True)


def _heis_trace(psi, space, h):
    "tr rho(w,t): q^m psi(t) at w in the centre direction, else 0."
    m = space.m
    x, y = h.w[:m], h.w[m:]
    if any(not c.is_zero() for c in y):
        return psi.coeff.zero()
    xw = tuple(x) + (space.fq.zero(),) * m
    acc = psi.coeff.zero()
    for y0 in space.y_points():
        y0w = (space.fq.zero(),) * m + y0
        acc = acc + psi(h.t + space.pairing(y0w, xw))
    return acc


def character_field(rep: MarkedRep, bound: int = DEFAULT_SP_BOUND) -> SubfieldTag:
    """Subfield generated by the trace values.  For the Weil section the
    per-element sign ambiguity is harmless: both +-tr occur as traces of the
    two metaplectic preimages, and sign flips do not move the stabilizer.

    Groups larger than the bound fall back to seeded random words plus an
    exact certification of every Galois exponent by iso_test (which, for
    the absolutely simple parts built here, computes the same field).  The
    fallback itself refuses when the matrices are too big for its dense
    intertwiner solves: exactness at desk scale is the contract."""
    try:
        return trace_profile(rep, bound).field_tag()
    except TooLarge:
        if rep.dim > 32:
            raise
        return _character_field_sampled(rep)


def _character_field_sampled(rep: MarkedRep, seed: int = 0, words: int = 200):
    import random

    from .weil import weil_op
    from .finite import token_to_sp

    rng = random.Random(seed)
    space = rep.meta["space"] if "space" in rep.meta else rep.meta["parent"].meta["space"]
    gens = [token_to_sp(space, t) for t in rep.gen_names]
    traces = [rep.field.one()]
    for _ in range(words):
        g = gens[rng.randrange(len(gens))]
        for _ in range(rng.randrange(1, 6)):
            g = g * gens[rng.randrange(len(gens))]
        traces.append(weil_op(rep, g).trace())
    sampled = subfield_of_values(traces)
    K = rep.field
    fixing = [
        u
        for u in K.galois_exponents()
        if iso_test(rep.conjugate(GaloisAut(K, u)), rep) is not None
    ]
    certified = SubfieldTag(K, fixing)
    # sampled traces only ever see a subfield of the certified one
    assert certified.stabilizer <= sampled.stabilizer
    return certified


def iso_test(rep1: MarkedRep, rep2: MarkedRep):
    """Invertible T with T rho1(g) = rho2(g) T on the declared generators,
    or None.  Both reps must be marked on the same generating set; for Weil
    sections that makes the test sign-free (token images carry no cocycle)."""
    assert rep1.gen_names == rep2.gen_names, "reps marked on different generators"
    assert rep1.field == rep2.field
    if rep1.dim != rep2.dim:
        return None
    basis = intertwiner_space(rep1.gens_images(), rep2.gens_images())
    if not basis:
        return None
    return invertible_element(basis)


# ---------------------------------------------------------------------------
# Restriction of scalars


class RestrictionBasis:
    "Power basis theta^k of K over the tagged subfield, with the resolvent solver."

    def __init__(self, tag: SubfieldTag, shifted: bool = False):
        K = tag.field
        self.tag = tag
        self.K = K
        self.exps = sorted(tag.stabilizer)
        self.d = len(self.exps)
        theta = K.zeta()
        if shifted:
            theta = theta + K.one()
        self.theta = theta
        self.powers = [theta**k for k in range(self.d)]
        self.auts = [GaloisAut(K, u) for u in self.exps]
        V = Matrix(
            K,
            [[apply_aut(s, self.powers[k]) for k in range(self.d)] for s in self.auts],
        )
        self.Vinv = V.inverse()

    def expand(self, x):
        "Coefficients r_k in the subfield with x = sum r_k theta^k."
        vec = [apply_aut(s, x) for s in self.auts]
        r = self.Vinv.mul_vec(vec)
        for c in r:
            assert subfield_membership(c, self.tag)
        return r


def restrict_scalars(
    rep: MarkedRep, tag: SubfieldTag, shifted_basis: bool = False
) -> MarkedRep:
    """View the K-representation as a representation over the tagged
    subfield R: dimension multiplies by [K:R], entries stay in R (as
    elements of K passing the membership test)."""
    K = rep.field
    assert tag.field == K
    rb = RestrictionBasis(tag, shifted=shifted_basis)
    d = rb.d
    n = rep.dim

    def restricted(mat):
        out = Matrix.zeros(K, n * d, n * d)
        for j in range(n):
            for i in range(n):
                a = mat.rows[i][j]
                if a.is_zero():
                    continue
                for k in range(d):
                    r = rb.expand(a * rb.powers[k])
                    for l in range(d):
                        out.rows[i * d + l][j * d + k] = r[l]
        return out

    images = {k: restricted(rep.image(k)) for k in rep.gen_names}
    return MarkedRep(
        K,
        n * d,
        rep.gen_names,
        f"{rep.label}|_{tag!r}",
        "derived",
        meta={"parent": rep, "tag": tag, "restriction": rb},
        images=images,
    )


# ---------------------------------------------------------------------------
# Endomorphism algebras


class EndAlgebra:
    """End_{R[G]}(V|_R) presented by semilinear basis elements
    (sigma_u, theta^j A): n = centre dimension, m^2 n = total dimension."""

    def __init__(self, rep, tag, hom_bases, rb):
        self.rep = rep
        self.tag = tag
        self.rb = rb
        self.hom_bases = hom_bases  # u -> list of Hom_K(^u V, V) basis matrices
        self.basis_index = [
            (u, t, j)
            for u in sorted(hom_bases)
            for t in range(len(hom_bases[u]))
            for j in range(rb.d)
        ]
        self.dim = len(self.basis_index)
        self._structure = None
        self._center = None
        self.division_certificate = None

    # an element is a dict u -> K-matrix, meaning sum M_u . sigma_u

    def basis_element(self, idx):
        u, t, j = self.basis_index[idx]
        return {u: self.hom_bases[u][t].scale(self.rb.powers[j])}

    def multiply(self, e1, e2):
        out = {}
        K = self.rep.field
        for u, M in e1.items():
            su = GaloisAut(K, u)
            for v, N in e2.items():
                w = (u * v) % K.n
                term = M * N.map(lambda c: apply_aut(su, c))
                out[w] = out[w] + term if w in out else term
        return out

    def expand(self, elem):
        "Coordinates of an algebra element over the basis (entries in R)."
        K = self.rep.field
        for w, M in elem.items():
            if w not in self.hom_bases:
                assert M.is_zero(), "product escaped the Hom support"
        coords = [K.zero()] * self.dim
        pos = 0
        for u in sorted(self.hom_bases):
            homs = self.hom_bases[u]
            M = elem.get(u)
            if M is None:
                pos += len(homs) * self.rb.d
                continue
            cs = _expand_in_span(homs, M)
            for t, c in enumerate(cs):
                r = self.rb.expand(c)
                for j in range(self.rb.d):
                    coords[pos + t * self.rb.d + j] = r[j]
            pos += len(homs) * self.rb.d
        return coords

    def structure_constants(self):
        if self._structure is None:
            n = self.dim
            self._structure = [
                [
                    self.expand(
                        self.multiply(self.basis_element(i), self.basis_element(k))
                    )
                    for k in range(n)
                ]
                for i in range(n)
            ]
        return self._structure

    def is_commutative(self):
        s = self.structure_constants()
        return all(s[i][k] == s[k][i] for i in range(self.dim) for k in range(self.dim))

    def center_basis(self):
        "Basis (coordinate vectors over R) of the centre."
        if self._center is None:
            s = self.structure_constants()
            K = self.rep.field
            rows = []
            for k in range(self.dim):
                for coord in range(self.dim):
                    rows.append(
                        [s[i][k][coord] - s[k][i][coord] for i in range(self.dim)]
                    )
            self._center = Matrix(K, rows).nullspace()
        return self._center

    @property
    def n(self):
        return len(self.center_basis())

    @property
    def m(self):
        m2 = self.dim // self.n
        m = 1
        while m * m < m2:
            m += 1
        assert m * m == m2, "dimension is not m^2 n"
        return m

    def to_json(self):
        return {
            "field_tag": self.tag.to_json(),
            "dim_over_R": self.dim,
            "n": self.n,
            "m": self.m,
            "center_dim": self.n,
            "commutative": self.is_commutative(),
            "is_division": self.division_certificate,
        }


def _expand_in_span(basis_mats, M):
    "Coordinates of M in the K-span of the given matrices."
    K = M.field
    cols = [
        [b.rows[i][j] for i in range(b.nrows) for j in range(b.ncols)]
        for b in basis_mats
    ]
    rhs = [M.rows[i][j] for i in range(M.nrows) for j in range(M.ncols)]
    aug = Matrix(K, [list(col) + [r] for col, r in zip(zip(*cols), rhs)])
    red, pivots = aug.rref()
    k = len(basis_mats)
    assert k not in pivots, "matrix outside the span"
    out = [K.zero()] * k
    for r, p in enumerate(pivots):
        out[p] = red.rows[r][k]
    return out


def endomorphism_algebra(
    rep: MarkedRep, tag: SubfieldTag, bound: int = DEFAULT_SP_BOUND, certify_dim=True
) -> EndAlgebra:
    "End of rep restricted to the tagged subfield, with certified dimension."
    K = rep.field
    rb = RestrictionBasis(tag)
    hom_bases = {}
    for u in sorted(tag.stabilizer):
        conj = rep.conjugate(GaloisAut(K, u))
        basis = intertwiner_space(conj.gens_images(), rep.gens_images())
        if basis:
            hom_bases[u] = basis
    alg = EndAlgebra(rep, tag, hom_bases, rb)
    if certify_dim:
        if rep.kind in ("weil", "weil-even", "weil-odd"):
            expected = end_dimension_over_subfield(rep, tag, bound)
        else:
            expected = _heis_end_dimension(rep, tag)
        assert alg.dim == expected, (
            f"semilinear basis dim {alg.dim} != character-formula dim {expected}"
        )
    return alg


def _heis_end_dimension(rep, tag):
    space, psi = rep.meta["space"], rep.meta["psi"]
    K = rep.field
    total = K.zero()
    els = heis_enumerate(space)
    for h in els:
        t1 = trace_to_subfield(_heis_trace(psi, space, h), tag)
        t2 = trace_to_subfield(_heis_trace(psi, space, h.inverse()), tag)
        total = total + t1 * t2
    dim = total * K.from_int(len(els)).inv()
    assert dim.is_rational()
    frac = dim.as_fraction()
    assert frac.denominator == 1
    return int(frac)


def quaternion_scalar(alg: EndAlgebra):
    """For a rank-4 algebra (K/R quadratic, one Hom line at the nontrivial
    sigma): the scalar c with (A . sigma)^2 = c Id, whose norm class decides
    division vs split."""
    nontrivial = [u for u in alg.hom_bases if u != 1]
    assert len(nontrivial) == 1 and len(alg.hom_bases[nontrivial[0]]) == 1
    u = nontrivial[0]
    A = alg.hom_bases[u][0]
    K = alg.rep.field
    su = GaloisAut(K, u)
    sq = A * A.map(lambda c: apply_aut(su, c))
    c = sq.rows[0][0]
    assert sq == Matrix.identity(K, sq.nrows).scale(c), "square is not scalar"
    return u, c


def certify_division_quaternion(alg: EndAlgebra, norm_searcher=None):
    """Attach a division/split certificate to a quaternion-shaped End
    algebra: split constructively when the norm equation N(lambda) = c has a
    (bounded-search) solution; division when c fails exact total
    positivity while every norm from the CM extension is totally positive."""
    u, c = quaternion_scalar(alg)
    K = alg.rep.field
    if norm_searcher is not None:
        lam = norm_searcher(u, c)
        if lam is not None:
            prod = lam * apply_aut(GaloisAut(K, u), lam)
            assert prod == c
            alg.division_certificate = False
            return False, ("split", lam)
    if u == (K.n - 1) % K.n and not _totally_positive(c, alg.tag):
        # sigma_u is complex conjugation: norms lambda sigma(lambda) are
        # totally positive, c is not, so c is not a norm
        alg.division_certificate = True
        return True, ("cm-positivity", c)
    alg.division_certificate = None
    return None, ("undetermined", c)


def _totally_positive(c, tag):
    """Exact total positivity of c in the tagged (totally real) subfield:
    the rational trace form z -> Tr_{R/Q}(c z^2) is PSD iff c is totally
    nonnegative."""
    K = tag.field
    basis = _subfield_q_basis(tag)
    n = len(basis)
    qtag = SubfieldTag(K, K.galois_exponents())
    gram = []
    for i in range(n):
        row = []
        for j in range(n):
            val = trace_to_subfield(c * basis[i] * basis[j], qtag)
            assert val.is_rational()
            row.append(val.as_fraction())
        gram.append(row)
    return ldl_psd(gram)


def _subfield_q_basis(tag):
    "Deterministic Q-basis of the tagged subfield, by exact fixed-space solve."
    K = tag.field
    from .fields import prime_field

    P = prime_field(K.char)
    deg = K.degree
    rows = []
    for u in sorted(tag.stabilizer):
        if u == 1:
            continue
        s = GaloisAut(K, u)
        smat = _aut_matrix(K, s, P)
        for i in range(deg):
            rows.append(
                [smat.rows[i][j] - (P.one() if i == j else P.zero()) for j in range(deg)]
            )
    if not rows:
        rows = [[P.zero()] * deg]
    basis = []
    for v in Matrix(P, rows).nullspace():
        coeffs = [e.as_fraction() if K.char == 0 else e.nums[0] for e in v]
        basis.append(K.from_coeffs(coeffs))
    assert len(basis) == tag.degree_over_prime()
    return basis


def _aut_matrix(K, sigma, P):
    "Matrix of sigma on the power basis, over the prime field."
    cols = []
    for j in range(K.degree):
        img = apply_aut(sigma, K.zeta_pow(j))
        if K.char == 0:
            cols.append([P.from_fraction(f) for f in img.as_fractions()])
        else:
            cols.append([P.from_int(c) for c in img.nums])
    return Matrix.from_cols(P, cols)


# ---------------------------------------------------------------------------
# Orbit decomposition of a restriction of scalars


class OrbitDecomposition:
    def __init__(self, rep, tag, m, n, classes, idempotents, transcript):
        self.rep = rep
        self.tag = tag
        self.m = m
        self.n = n
        self.classes = classes  # list of lists of exponents u
        self.idempotents = idempotents
        self.transcript = transcript

    def to_json(self):
        return {
            "m": self.m,
            "n": self.n,
            "classes": self.classes,
            "checks": self.transcript,
        }


def orbit_decomposition(
    rep: MarkedRep, tag: SubfieldTag, bound: int = DEFAULT_SP_BOUND
) -> OrbitDecomposition:
    """Multiplicity m, orbit size n, and explicit central idempotents
    cutting the isotypic blocks of (rep|_R) tensored back up to K.

    rep must be absolutely irreducible over K (commutant = K, checked);
    the idempotents come from the explicit semilinear component maps of the
    restriction, not from factoring polynomials."""
    K = rep.field
    end_K = intertwiner_space(rep.gens_images(), rep.gens_images())
    if len(end_K) != 1:
        raise NotIrreducible(f"commutant has dimension {len(end_K)} over K")
    exps = sorted(tag.stabilizer)
    # stabilizer H = {u : ^u rep ~ rep} and its cosets = iso classes
    H = []
    for u in exps:
        conj = rep.conjugate(GaloisAut(K, u))
        if iso_test(conj, rep) is not None:
            H.append(u)
    classes = []
    seen = set()
    for u in exps:
        if u in seen:
            continue
        cls = sorted((u * h) % K.n for h in H)
        seen.update(cls)
        classes.append(cls)
    n = len(classes)
    m = len(H)
    assert m * n == len(exps)

    restricted = restrict_scalars(rep, tag)
    rb = restricted.meta["restriction"]
    d, N = rb.d, rep.dim
    # component maps Phi_u : V|_R (x) K -> ^u V,  theta^l e_i -> sigma_u(theta^l) e_i
    phis = {}
    for u in exps:
        su = GaloisAut(K, u)
        out = Matrix.zeros(K, N, N * d)
        for i in range(N):
            for l in range(d):
                out.rows[i][i * d + l] = apply_aut(su, rb.powers[l])
        phis[u] = out
    stacked = Matrix(K, [row for u in exps for row in phis[u].rows])
    stacked_inv = stacked.inverse()
    transcript = {}
    # equivariance Phi_u rho|_R = ^u rho Phi_u
    for u in exps:
        su = GaloisAut(K, u)
        for g in rep.gen_names:
            lhs = phis[u] * restricted.image(g)
            rhs = rep.image(g).map(lambda c: apply_aut(su, c)) * phis[u]
            assert lhs == rhs, "component map not equivariant"
    transcript["component_maps_equivariant"] = True
    idempotents = []
    total = Matrix.zeros(K, N * d, N * d)
    for cls in classes:
        P = Matrix.zeros(K, N * d, N * d)
        for u in cls:
            pos = exps.index(u)
            inj = Matrix.zeros(K, N * len(exps), N)
            for i in range(N):
                inj.rows[pos * N + i][i] = K.one()
            P = P + stacked_inv * inj * phis[u]
        idempotents.append(P)
        total = total + P
        assert P * P == P
        for g in rep.gen_names:
            assert P * restricted.image(g) == restricted.image(g) * P
    assert total.is_identity()
    transcript["idempotents"] = "sum to identity, central, idempotent"
    # multiplicity: dim Hom(^u V, V|_R over K) = m for each class member
    for cls in classes:
        u = cls[0]
        conj = rep.conjugate(GaloisAut(K, u))
        hom = intertwiner_space(conj.gens_images(), restricted.gens_images())
        assert len(hom) == m, f"multiplicity {len(hom)} != m = {m}"
    transcript["block_multiplicities"] = m
    return OrbitDecomposition(rep, tag, m, n, classes, idempotents, transcript)
