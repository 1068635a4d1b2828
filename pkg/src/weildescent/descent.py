"""Semilinear descent data and the explicit realisations of the Weil
representation and its even/odd parts over their predicted fields.

A descent datum on a representation V over K assigns to each sigma in a
subgroup Gamma of Gal(K/target) a matrix R_sigma; the semilinear action is
v -> R_sigma . sigma(v).  Validity means exactly:

    cocycle        R_{sigma tau} = R_sigma . sigma(R_tau)
    equivariance   R_sigma . sigma(rho(g)) = rho(g) . R_sigma

Fixed points are extracted by one exact nullspace computation over the
prime field (restriction of scalars), never by Galois averaging: the
solve works for any valid datum and certifies itself through the rank.

The odd part carries the quaternionic obstruction: r_tau^(2^k_a) = -Id,
so descending past the CM field needs lambda with N(lambda) = -1, which a
totally-positive norm form rules out exactly (the bounded search plus the
PSD certificate are the two honest outcomes)."""

from __future__ import annotations

from fractions import Fraction

from .errors import DatumInvalid, NotFoundWithinBound, RankDeficiency
from .fields import (
    GaloisAut,
    SubfieldTag,
    apply_aut,
    embed,
    field_make,
    gauss_sum,
    prime_field,
    subfield_membership,
    trace_to_subfield,
    MODULAR,
    RATIONAL,
)
from .finite import SymplecticSpace, fq_field, psi_standard, token_m
from .linalg import Matrix, ldl_psd
from .rationality import (
    _aut_matrix,
    _subfield_q_basis,
    iso_test,
)
from .weil import MarkedRep, even_odd_split, weil_rep


class DescentDatum:
    "Family {R_u} over the stabilizer exponents of the target tag."

    def __init__(self, rep: MarkedRep, entries, target: SubfieldTag):
        self.rep = rep
        self.entries = dict(entries)  # exponent u -> Matrix over rep.field
        self.target = target
        K = rep.field
        if 1 not in self.entries:
            self.entries[1] = Matrix.identity(K, rep.dim)
        assert set(self.entries) == set(target.stabilizer)

    def validate(self):
        K = self.rep.field
        n = K.n
        for u, Ru in self.entries.items():
            su = GaloisAut(K, u)
            for v, Rv in self.entries.items():
                lhs = self.entries[(u * v) % n]
                rhs = Ru * Rv.map(lambda c: apply_aut(su, c))
                if lhs != rhs:
                    raise DatumInvalid(f"cocycle fails at ({u}, {v})")
            for g in self.rep.gen_names:
                img = self.rep.image(g)
                if Ru * img.map(lambda c: apply_aut(su, c)) != img * Ru:
                    raise DatumInvalid(f"equivariance fails at sigma_{u}, {g}")
        return {
            "semilinearity": "structural (matrix composed with entrywise sigma)",
            "cocycle_pairs": len(self.entries) ** 2,
            "equivariance_checks": len(self.entries) * len(self.rep.gen_names),
        }


class DescentResult:
    def __init__(self, rep, target, basis, images, transcript):
        self.rep = rep
        self.target = target
        self.basis = basis  # N x N over K, columns = fixed vectors
        self.images = images  # generator key -> matrix over K with entries in target
        self.transcript = transcript

    def to_marked_rep(self) -> MarkedRep:
        return MarkedRep(
            self.rep.field,
            self.rep.dim,
            self.rep.gen_names,
            f"{self.rep.label} over {self.target!r}",
            "derived",
            meta={"parent": self.rep, "subfield": self.target},
            images=self.images,
        )

    def to_json(self):
        return {
            "label": self.rep.label,
            "dim": self.rep.dim,
            "target": self.target.to_json(),
            "generators": [
                {
                    "token": str(k),
                    "matrix": [[e.to_json() for e in row] for row in self.images[k].rows],
                }
                for k in self.rep.gen_names
            ],
            "transcript": self.transcript,
        }


def fixed_points(datum: DescentDatum, validate=True) -> DescentResult:
    """Solve for the simultaneous fixed vectors of all R_u . sigma_u over
    the prime field, extract a K-basis of the fixed space, and conjugate
    the generator images into the target subfield."""
    transcript = {}
    if validate:
        transcript["datum"] = datum.validate()
    rep = datum.rep
    K = rep.field
    P = prime_field(K.char)
    dk = K.degree
    N = rep.dim
    mulmats = {}

    def mulmat(c):
        if c not in mulmats:
            cols = []
            for j in range(dk):
                prod = c * K.zeta_pow(j) if j else c
                if K.char == 0:
                    cols.append([P.from_fraction(f) for f in prod.as_fractions()])
                else:
                    cols.append([P.from_int(x) for x in prod.nums])
            mulmats[c] = Matrix.from_cols(P, cols)
        return mulmats[c]

    rows = []
    for u, Ru in datum.entries.items():
        if u == 1:
            continue
        smat = _aut_matrix(K, GaloisAut(K, u), P)
        block = Matrix.zeros(P, N * dk, N * dk)
        for i in range(N):
            for j in range(N):
                c = Ru.rows[i][j]
                if c.is_zero():
                    continue
                piece = mulmat(c) * smat
                for a in range(dk):
                    for b in range(dk):
                        block.rows[i * dk + a][j * dk + b] = piece.rows[a][b]
        eye = Matrix.identity(P, N * dk)
        rows.extend((block - eye).rows)
    if rows:
        null = Matrix(P, rows).nullspace()
    else:
        null = Matrix.identity(P, N * dk).rows
    dt = datum.target.degree_over_prime()
    if len(null) != N * dt:
        raise RankDeficiency(
            f"fixed space has prime dimension {len(null)}, expected {N * dt}"
        )
    transcript["fixed_space_prime_dim"] = len(null)

    def fold(vec):
        out = []
        for i in range(N):
            chunk = vec[i * dk : (i + 1) * dk]
            if K.char == 0:
                out.append(K.from_coeffs([e.as_fraction() for e in chunk]))
            else:
                out.append(K.from_coeffs([e.nums[0] for e in chunk]))
        return out

    selected = []
    for vec in null:
        cand = fold(vec)
        trial = selected + [cand]
        if Matrix.from_cols(K, trial).rank() == len(trial):
            selected.append(cand)
            if len(selected) == N:
                break
    if len(selected) != N:
        raise RankDeficiency("fixed space does not span over K")
    U = Matrix.from_cols(K, selected)
    Uinv = U.inverse()
    images = {}
    for g in rep.gen_names:
        img = Uinv * rep.image(g) * U
        for row in img.rows:
            for e in row:
                assert subfield_membership(e, datum.target), (
                    "descended entry escapes the target subfield"
                )
        images[g] = img
    transcript["entries_in_target"] = True
    descended = DescentResult(rep, datum.target, U, images, transcript)
    T = iso_test(descended.to_marked_rep(), rep)
    assert T is not None and T.is_invertible()
    transcript["round_trip_isomorphism"] = True
    return descended


# ---------------------------------------------------------------------------
# The descent data


def _odd_part_exponents(K):
    "Odd-order elements of the Galois group (the 2' part)."
    out = []
    for u in K.galois_exponents():
        order = 1
        x = u
        while x != 1:
            x = (x * u) % K.n
            order += 1
        if order % 2 == 1:
            out.append(u)
    return out


def descent_datum_weil(rep: MarkedRep) -> DescentDatum:
    """Datum of the unconditional descent: Gamma = 2'-part of Gal(K/Q);
    for sigma_u the unique odd-order gamma with gamma^2 u = 1 in F_p gives
    R_u = omega~(m_gamma), and the token-level twisting identities make the
    cocycle and equivariance exact (no sign repair needed)."""
    space = _space_of(rep)
    K = rep.field
    p = space.fq.p
    gamma_tokens = {}
    for u in _odd_part_exponents(K):
        uinv = pow(u, -1, p)
        order = 1
        x = uinv
        while x != 1:
            x = (x * uinv) % p
            order += 1
        assert order % 2 == 1
        gamma = pow(uinv, (order + 1) // 2, p)
        assert (gamma * gamma) % p == uinv
        a = Matrix.identity(space.fq, space.m).scale(space.fq.from_int(gamma))
        gamma_tokens[u] = rep.image(token_m(a))
    target = SubfieldTag(K, list(gamma_tokens))
    return DescentDatum(rep, gamma_tokens, target)


def _space_of(rep):
    meta = rep.meta
    return meta["space"] if "space" in meta else meta["parent"].meta["space"]


def _square_stabilizer(rep):
    "{u in Gal : u, embedded in F_q, is a square} -- the character-field stabilizer."
    space = _space_of(rep)
    fq = space.fq
    K = rep.field
    out = []
    for u in K.galois_exponents():
        e = fq.from_int(u % fq.p)
        if fq.sqrt(e) is not None:
            out.append(u)
    return out


def descent_datum_even(rep: MarkedRep) -> DescentDatum:
    """Even-part datum for q = 1 mod 4: Gamma is the square part of the
    Galois group, gamma(sigma) any square root (least in counting order);
    sign discrepancies die on even functions."""
    assert rep.kind == "weil-even"
    space = _space_of(rep)
    fq = space.fq
    assert fq.q % 4 == 1, "q = 3 mod 4 needs no further descent"
    K = rep.field
    entries = {}
    for u in _square_stabilizer(rep):
        uinv_fq = fq.from_int(pow(u % fq.p, -1, fq.p))
        gamma = fq.sqrt(uinv_fq)
        assert gamma is not None
        a = Matrix.identity(fq, space.m).scale(gamma)
        entries[u] = rep.image(token_m(a))
    target = SubfieldTag(K, list(entries))
    return DescentDatum(rep, entries, target)


# ---------------------------------------------------------------------------
# Odd-part obstruction


def _primitive_root(p):
    for g in range(2, p):
        order = 1
        x = g % p
        while x != 1:
            x = (x * g) % p
            order += 1
        if order == p - 1:
            return g
    raise AssertionError("no primitive root")


def odd_obstruction_check(rep_odd: MarkedRep, bound: int = 20):
    """The CM obstruction of the odd part (q = 1 mod 4): constructs r_tau,
    verifies r_tau^(2^k_a) = -Id exactly, certifies that L = K^(2'-part) is
    CM, and that the bounded search for N(lambda) = -1 in the CM tower
    L / L_0 fails (with the definite-form certificate when available)."""
    space = _space_of(rep_odd)
    fq = space.fq
    K = rep_odd.field
    p, f = fq.p, fq.f
    assert fq.q % 4 == 1, "obstruction concerns the q = 1 mod 4 case"
    k = 0
    t = p - 1
    while t % 2 == 0:
        t //= 2
        k += 1
    g0 = _primitive_root(p)
    sigma_gen = pow(g0, (p - 1) // 2**k, p)  # generates the 2-Sylow
    a = 1 if f % 2 == 0 else 2
    tau = pow(sigma_gen, a, p)
    k_a = k - a + 1
    order = 2**k_a
    assert pow(tau, order, p) == 1 and (order == 1 or pow(tau, order // 2, p) != 1)
    alpha = fq.sqrt(fq.from_int(pow(tau, -1, p)))
    assert alpha is not None
    amat = Matrix.identity(fq, space.m).scale(alpha)
    r = rep_odd.image(token_m(amat))
    power = Matrix.identity(K, rep_odd.dim)
    for _ in range(order):
        power = power * r
    minus_id = Matrix.identity(K, rep_odd.dim).scale(K.from_int(-1))
    assert power == minus_id, "r_tau^(2^k_a) != -Id"
    # L = fixed field of the odd part; CM since -1 acts on it nontrivially
    odd_exps = _odd_part_exponents(K)
    L_tag = SubfieldTag(K, odd_exps)
    cm = (K.n - 1) % K.n not in L_tag.stabilizer
    assert cm, "L must be CM for odd p"
    L0_tag = SubfieldTag(K, odd_exps + [K.n - 1])
    search = None
    try:
        solve_norm_equation(K, L_tag, L0_tag, K.from_int(-1), bound)
        raise DatumInvalid("norm -1 found in a CM tower (impossible)")
    except NotFoundWithinBound as exc:
        search = exc.args[0]
    return {
        "p": p,
        "f": f,
        "k": k,
        "a": a,
        "k_a": k_a,
        "tau": tau,
        "alpha": list(alpha.coeffs),
        "r_tau_power_is_minus_id": True,
        "L_tag": L_tag.to_json(),
        "cm_field": True,
        "norm_search": search,
        "obstruction_present": True,
        "schur_index": 2,
    }


# ---------------------------------------------------------------------------
# Norm equations


def _quotient_generator(K, top_stab, bottom_stab):
    "Least exponent generating the cyclic quotient bottom/top."
    n = K.n
    size = len(bottom_stab) // len(top_stab)

    def coset(u):
        return frozenset((u * t) % n for t in top_stab)

    for u in sorted(bottom_stab):
        seen = {coset(1)}
        x = u
        while coset(x) != coset(1):
            seen.add(coset(x))
            x = (x * u) % n
        if len(seen) == size:
            return u
    raise AssertionError("quotient not cyclic")


def solve_norm_equation(
    K, top_tag: SubfieldTag, bottom_tag: SubfieldTag, target, bound: int = 20
):
    """lambda in the top field with N_{top/bottom}(lambda) = target, by
    deterministic bounded search over the top field's basis.  Raises
    NotFoundWithinBound (with a transcript; definite_obstruction = True when
    the exact PSD certificate already excludes every lambda).  Modular
    towers are searched exhaustively, where the norm is surjective."""
    assert top_tag.field == K and bottom_tag.field == K
    assert top_tag.stabilizer <= bottom_tag.stabilizer, "not a subfield tower"
    gen = _quotient_generator(K, sorted(top_tag.stabilizer), sorted(bottom_tag.stabilizer))
    ord_ = len(bottom_tag.stabilizer) // len(top_tag.stabilizer)

    def norm(lam):
        acc = lam
        x = lam
        e = gen
        for _ in range(ord_ - 1):
            x = apply_aut(GaloisAut(K, e), lam)
            acc = acc * x
            e = (e * gen) % K.n
        return acc

    transcript = {"tower_generator": gen, "degree": ord_, "bound": bound}
    basis = _subfield_q_basis(top_tag)
    if K.char:
        count = 0
        ell = K.char
        dim = len(basis)
        for idx in range(ell**dim):
            lam = K.zero()
            for i in range(dim):
                c = (idx // ell**i) % ell
                if c:
                    lam = lam + K.from_int(c) * basis[i]
            if lam.is_zero():
                continue
            count += 1
            if norm(lam) == target:
                transcript["tried"] = count
                return lam, transcript
        transcript["tried"] = count
        raise NotFoundWithinBound(transcript)

    if ord_ == 2 and _definitely_unsolvable(K, basis, gen, bottom_tag, target):
        transcript["definite_obstruction"] = True
        transcript["tried"] = 0
        raise NotFoundWithinBound(transcript)

    tried = 0
    dim = len(basis)
    for support in _support_patterns(dim, bound):
        lam = K.zero()
        den = support[-1]
        for i, c in support[0]:
            lam = lam + K.from_fraction(Fraction(c, den)) * basis[i]
        if lam.is_zero():
            continue
        tried += 1
        if norm(lam) == target:
            transcript["tried"] = tried
            return lam, transcript
    transcript["tried"] = tried
    transcript["search"] = "supports of size <= 2, heights and denominators <= bound"
    raise NotFoundWithinBound(transcript)


def _support_patterns(dim, bound):
    "Deterministic stream of (coefficient support, denominator) shells."
    for h in range(1, bound + 1):
        for d in range(1, h + 1):
            for i in range(dim):
                for c in range(-h, h + 1):
                    if abs(c) == h or d == h:
                        if c:
                            yield ([(i, c)], d)
            for i in range(dim):
                for j in range(i + 1, dim):
                    for c1 in range(-h, h + 1):
                        for c2 in range(-h, h + 1):
                            if c1 and c2 and (max(abs(c1), abs(c2)) == h or d == h):
                                yield ([(i, c1), (j, c2)], d)


def _definitely_unsolvable(K, basis, gen, bottom_tag, target):
    """PSD certificate for quadratic towers: if the rational form
    Tr(N(lambda)) is PSD and Tr(target) < 0, no lambda at any height works."""
    tg = trace_to_subfield(target, K.full_tag())
    if not tg.is_rational():
        return False
    # Tr_{bottom/Q}(target) differs from Tr_{K/Q}(target) by a positive
    # factor, so only the sign matters
    if tg.as_fraction() >= 0:
        return False
    sigma = GaloisAut(K, gen)
    n = len(basis)
    gram = []
    full = K.full_tag()
    for i in range(n):
        row = []
        for j in range(n):
            x = basis[i] * apply_aut(sigma, basis[j]) + basis[j] * apply_aut(
                sigma, basis[i]
            )
            t = trace_to_subfield(x, full)
            assert t.is_rational()
            row.append(t.as_fraction() / 2)
        gram.append(row)
    return ldl_psd(gram)


def solve_norm_minus_one(K, top_tag, bottom_tag, bound: int = 20):
    return solve_norm_equation(K, top_tag, bottom_tag, K.from_int(-1), bound)


# ---------------------------------------------------------------------------
# Realisation drivers


def build_weil(p, f, m, twist=1, ell=None):
    "Convenience: (psi, space, full Weil rep) for the given parameters."
    fq = fq_field(p, f)
    space = SymplecticSpace(fq, m)
    K = field_make(RATIONAL, p) if ell is None else field_make(MODULAR, p, ell)
    psi = psi_standard(fq, K)
    if twist != 1:
        from .finite import char_twist

        psi = char_twist(psi, fq.from_int(twist))
    return psi, space, weil_rep(psi, space)


def realise_full(p, f, m, twist=1) -> DescentResult:
    "Model of the full Weil representation over L (the 2'-part descent)."
    _, _, rep = build_weil(p, f, m, twist)
    return fixed_points(descent_datum_weil(rep))


def realise_even(p, f, m, twist=1) -> DescentResult:
    "Model of the even part over its character field."
    _, _, rep = build_weil(p, f, m, twist)
    even, _ = even_odd_split(rep)
    q = p**f
    if q % 4 == 3:
        datum = descent_datum_weil(even)
    else:
        datum = descent_datum_even(even)
    return fixed_points(datum)


def _embed_rep(rep: MarkedRep, big) -> MarkedRep:
    images = {
        k: rep.image(k).map(lambda c: embed(c, big), field=big)
        for k in rep.gen_names
    }
    return MarkedRep(
        big,
        rep.dim,
        rep.gen_names,
        rep.label + f" over {big!r}",
        "derived",
        meta={"parent": rep},
        images=images,
    )


def sqrt_minus_p(big, p):
    "sqrt(-p) inside Q(zeta_4p): the Gauss sum times i when p = 1 mod 4."
    g = embed(gauss_sum(p), big)
    if p % 4 == 3:
        return g
    i = big.zeta_pow(p)  # zeta_4 inside zeta_4p
    assert i * i == big.from_int(-1)
    return i * g


def realise_odd(p, f, m, twist=1, bound: int = 20):
    """Model of the odd part over the predicted realisation field:
    the character field itself when p = 3 mod 4 and f odd (Schur index 1),
    otherwise char-field adjoined sqrt(-p) (Schur index 2), via the
    norm-equation repair of the tau-datum inside Q(zeta_4p)."""
    q = p**f
    _, space, rep = build_weil(p, f, m, twist)
    _, odd = even_odd_split(rep)
    if q % 4 == 3:
        result = fixed_points(descent_datum_weil(odd))
        return result, {"schur_index": 1, "norm_lambda": None, "obstruction": None}
    obstruction = odd_obstruction_check(odd, bound)
    K = rep.field
    big = field_make(RATIONAL, 4 * p)
    odd_big = _embed_rep(odd, big)
    char_stab_small = _square_stabilizer(odd)
    root = sqrt_minus_p(big, p)
    target_stab = [
        w
        for w in big.galois_exponents()
        if (w % p) in char_stab_small
        and apply_aut(GaloisAut(big, w), root) == root
    ]
    target = SubfieldTag(big, target_stab)
    gen = _cyclic_generator(big, sorted(target.stabilizer))
    ord_ = len(target.stabilizer)
    fq = space.fq
    u = gen % p
    alpha = fq.sqrt(fq.from_int(pow(u, -1, p)))
    assert alpha is not None
    amat = Matrix.identity(fq, space.m).scale(alpha)
    r0 = odd_big.image(token_m(amat))
    power = Matrix.identity(big, odd.dim)
    for _ in range(ord_):
        power = power * r0
    lam = big.one()
    norm_transcript = None
    if power == Matrix.identity(big, odd.dim).scale(big.from_int(-1)):
        lam, norm_transcript = solve_norm_minus_one(
            big, big.top_tag(), target, bound
        )
    else:
        assert power.is_identity(), "r0^ord is not a sign"
    # R_{gen^(j+1)} = R_{gen^j} . sigma_{gen^j}(R_gen), exact by construction
    entries = {}
    rgen = r0.scale(lam)
    power_exp = gen
    Rcur = rgen
    while power_exp != 1:
        entries[power_exp] = Rcur
        Rcur = Rcur * rgen.map(lambda c, _e=power_exp: apply_aut(GaloisAut(big, _e), c))
        power_exp = (power_exp * gen) % big.n
    datum = DescentDatum(odd_big, entries, target)
    result = fixed_points(datum)
    return result, {
        "schur_index": 2,
        "norm_lambda": lam.to_json() if norm_transcript else None,
        "norm_transcript": norm_transcript,
        "obstruction": obstruction,
    }


def _cyclic_generator(K, stab):
    "Least exponent generating the subgroup (assert it is cyclic)."
    for u in sorted(stab):
        seen = {1}
        x = u
        while x != 1:
            seen.add(x)
            x = (x * u) % K.n
        if len(seen) == len(stab):
            return u
    raise AssertionError("stabilizer is not cyclic")


def realise_modular(p, f, m, ell, part="odd", twist=1, bound: int = 20):
    """Modular even or odd part over its character field F_ell[sqrt(p*)]:
    the same tau-datum as in characteristic 0, except the norm equation is
    always solvable (every finite-field norm is surjective)."""
    _, space, rep = build_weil(p, f, m, twist, ell=ell)
    even, odd = even_odd_split(rep)
    block = odd if part == "odd" else even
    K = rep.field
    char_stab = _square_stabilizer(block)
    target = SubfieldTag(K, char_stab)
    gen = _cyclic_generator(K, sorted(target.stabilizer))
    ord_ = len(target.stabilizer)
    fq = space.fq
    lam = K.one()
    norm_transcript = None
    if ord_ > 1:
        u = gen % p
        alpha = fq.sqrt(fq.from_int(pow(u, -1, p)))
        assert alpha is not None
        amat = Matrix.identity(fq, space.m).scale(alpha)
        r0 = block.image(token_m(amat))
        power = Matrix.identity(K, block.dim)
        for _ in range(ord_):
            power = power * r0
        if power == Matrix.identity(K, block.dim).scale(K.from_int(-1)):
            lam, norm_transcript = solve_norm_minus_one(K, K.top_tag(), target, bound)
        else:
            assert power.is_identity()
        entries = {}
        rgen = r0.scale(lam)
        power_exp = gen
        Rcur = rgen
        while power_exp != 1:
            entries[power_exp] = Rcur
            Rcur = Rcur * rgen.map(
                lambda c, _e=power_exp: apply_aut(GaloisAut(K, _e), c)
            )
            power_exp = (power_exp * gen) % K.n
        datum = DescentDatum(block, entries, target)
    else:
        datum = DescentDatum(block, {}, target)
    result = fixed_points(datum)
    return result, {"norm_lambda": lam.to_json(), "norm_transcript": norm_transcript}


def realise_odd_modular(p, f, m, ell, twist=1, bound: int = 20):
    return realise_modular(p, f, m, ell, "odd", twist, bound)
