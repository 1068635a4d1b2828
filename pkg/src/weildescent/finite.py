"""Finite fields F_q of odd characteristic, additive characters valued in a
cyclotomic coefficient field, symplectic spaces with the standard
polarisation, the Heisenberg group, and factorization of symplectic
matrices into the Siegel-parabolic generators M(a), N(b) and the fixed
Weyl element W0.

Coordinates: W = X + Y with X = span(e_1..e_m), Y = span(f_1..f_m) and
<e_i, f_j> = delta_ij.  A vector is a length-2m tuple of FqElem, X-part
first.  The standard generators, as 2m x 2m block matrices acting on
column vectors:

    M(a) = [[a, 0], [0, a^-T]]     a in GL_m
    N(b) = [[I, b], [0, I]]        b symmetric
    W0   = [[0, -I], [I, 0]]       e_i -> f_i, f_i -> -e_i
"""

from __future__ import annotations

from functools import lru_cache

from ._kernel import lpoly_mul, lpoly_rem
from .errors import TooLarge, ZeroTwist
from .fields import CoeffField, GaloisAut, is_prime
from .linalg import Matrix


class FqField:
    "F_q, q = p^f with p odd, on a deterministic irreducible modulus."

    def __init__(self, p: int, f: int):
        assert is_prime(p) and p % 2 == 1, "characteristic must be an odd prime"
        assert f >= 1
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = _least_irreducible(p, f)

    def __repr__(self):
        return f"F_{self.q}"

    def __eq__(self, other):
        return isinstance(other, FqField) and (self.p, self.f) == (other.p, other.f)

    def __hash__(self):
        return hash(("Fq", self.p, self.f))

    def zero(self):
        return FqElem(self, (0,) * self.f)

    def one(self):
        return self.from_int(1)

    def from_int(self, k: int):
        v = [0] * self.f
        v[0] = k % self.p
        return FqElem(self, tuple(v))

    def gen(self):
        "The class of X (a root of the modulus); only meaningful for f > 1."
        assert self.f > 1
        v = [0] * self.f
        v[1] = 1
        return FqElem(self, tuple(v))

    def element(self, index: int):
        "index-th element in counting order: digits of index base p."
        return FqElem(
            self, tuple((index // self.p**i) % self.p for i in range(self.f))
        )

    def elements(self):
        return [self.element(k) for k in range(self.q)]

    def sqrt(self, a):
        "Least square root in counting order, or None."
        for k in range(self.q):
            e = self.element(k)
            if e * e == a:
                return e
        return None


@lru_cache(maxsize=None)
def fq_field(p: int, f: int) -> FqField:
    return FqField(p, f)


@lru_cache(maxsize=None)
def _least_irreducible(p: int, f: int) -> tuple:
    "First monic irreducible of degree f over F_p in counting order."
    if f == 1:
        return (0, 1)  # X itself
    for k in range(p**f):
        cand = [(k // p**i) % p for i in range(f)] + [1]
        if _is_irreducible_mod(cand, p):
            return tuple(cand)
    raise AssertionError("unreachable: irreducibles exist in every degree")


def _is_irreducible_mod(poly, p):
    d = len(poly) - 1

    def powx(e):
        acc, b = [1], [0, 1]
        while e:
            if e & 1:
                acc = lpoly_rem(lpoly_mul(acc, b, p), poly, p)
            b = lpoly_rem(lpoly_mul(b, b, p), poly, p)
            e >>= 1
        return (acc + [0] * d)[:d]

    x = ([0, 1] + [0] * d)[:d]
    if powx(p**d) != x:
        return False
    for r in {r for r in range(2, d + 1) if d % r == 0 and is_prime(r)}:
        diff = [(a - b) % p for a, b in zip(powx(p ** (d // r)), x)]
        if not _coprime_mod(diff, poly, p):
            return False
    return True


def _coprime_mod(a, b, p):
    def deg(v):
        for i in range(len(v) - 1, -1, -1):
            if v[i] % p:
                return i
        return -1

    a, b = [c % p for c in a], [c % p for c in b]
    while deg(b) >= 0:
        da, db = deg(a), deg(b)
        if da < db:
            a, b = b, a
            continue
        c = (a[da] * pow(b[db], -1, p)) % p
        for j in range(db + 1):
            a[da - db + j] = (a[da - db + j] - c * b[j]) % p
    return deg(a) == 0


class FqElem:
    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __add__(self, o):
        p = self.field.p
        return FqElem(
            self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs))
        )

    def __neg__(self):
        p = self.field.p
        return FqElem(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if isinstance(o, int):
            o = self.field.from_int(o)
        f = self.field
        v = lpoly_rem(
            lpoly_mul(list(self.coeffs), list(o.coeffs), f.p), list(f.modulus), f.p
        )
        return FqElem(f, tuple(v))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        acc, b = self.field.one(), self
        while e:
            if e & 1:
                acc = acc * b
            b = b * b
            e >>= 1
        return acc

    def inv(self):
        assert not self.is_zero()
        return self ** (self.field.q - 2)

    def __truediv__(self, o):
        return self * o.inv()

    def __eq__(self, o):
        return (
            isinstance(o, FqElem) and self.field == o.field and self.coeffs == o.coeffs
        )

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.field.f == 1:
            return str(self.coeffs[0])
        return "Fq" + str(list(self.coeffs))

    def index(self) -> int:
        "Position in the field's counting order."
        return sum(c * self.field.p**i for i, c in enumerate(self.coeffs))

    def trace_to_prime(self) -> int:
        "Tr_{F_q/F_p} as an integer in [0, p)."
        acc = self
        x = self
        for _ in range(self.field.f - 1):
            x = x ** self.field.p
            acc = acc + x
        assert all(c == 0 for c in acc.coeffs[1:])
        return acc.coeffs[0]

    def in_prime_subfield(self):
        return all(c == 0 for c in self.coeffs[1:])


def legendre(gamma: FqElem) -> int:
    "Quadratic character of F_q^x: +1 on squares, -1 otherwise."
    if gamma.is_zero():
        raise ZeroTwist("legendre symbol of zero")
    s = gamma ** ((gamma.field.q - 1) // 2)
    if s == gamma.field.one():
        return 1
    assert s == -gamma.field.one()
    return -1


class AdditiveCharacter:
    """psi_c(x) = zeta_p^(Tr(c x)), valued in a coefficient field containing
    zeta_p.  Every nontrivial character of F_q is one of these."""

    def __init__(self, fq: FqField, coeff: CoeffField, twist: FqElem):
        if twist.is_zero():
            raise ZeroTwist("additive character must be nontrivial")
        assert coeff.n % fq.p == 0, "coefficient field must contain zeta_p"
        self.fq = fq
        self.coeff = coeff
        self.twist = twist

    def __call__(self, x: FqElem):
        e = (self.twist * x).trace_to_prime()
        return self.coeff.zeta_pow((self.coeff.n // self.fq.p) * e)

    def __eq__(self, o):
        return (
            isinstance(o, AdditiveCharacter)
            and (self.fq, self.coeff, self.twist) == (o.fq, o.coeff, o.twist)
        )

    def __hash__(self):
        return hash(("psi", self.fq.p, self.fq.f, self.twist))

    def __repr__(self):
        return f"psi_{self.twist!r}"


def psi_standard(fq: FqField, coeff: CoeffField) -> AdditiveCharacter:
    return AdditiveCharacter(fq, coeff, fq.one())


def char_twist(psi: AdditiveCharacter, gamma: FqElem) -> AdditiveCharacter:
    "psi^gamma(t) = psi(gamma t)."
    if gamma.is_zero():
        raise ZeroTwist("twist by zero")
    return AdditiveCharacter(psi.fq, psi.coeff, psi.twist * gamma)


def char_galois(sigma: GaloisAut, psi: AdditiveCharacter) -> AdditiveCharacter:
    "psi^sigma(t) = sigma(psi(t)), realised as the twist by sigma's exponent."
    assert sigma.field == psi.coeff
    u = sigma.exponent % psi.fq.p
    return char_twist(psi, psi.fq.from_int(u))


# ---------------------------------------------------------------------------
# Symplectic space, Sp(W), Heisenberg group


class SymplecticSpace:
    "W = F_q^2m with the standard form; X-part coordinates first."

    def __init__(self, fq: FqField, m: int):
        assert m >= 1
        self.fq = fq
        self.m = m
        self.dim = 2 * m
        self.half = fq.from_int(pow(2, -1, fq.p))

    def __repr__(self):
        return f"W(dim {self.dim} over {self.fq!r})"

    def __eq__(self, o):
        return isinstance(o, SymplecticSpace) and (self.fq, self.m) == (o.fq, o.m)

    def __hash__(self):
        return hash(("W", self.fq.p, self.fq.f, self.m))

    def pairing(self, v, w):
        "<v, w> = sum x_i y'_i - y_i x'_i."
        m = self.m
        acc = self.fq.zero()
        for i in range(m):
            acc = acc + v[i] * w[m + i] - v[m + i] * w[i]
        return acc

    def gram(self):
        z, o = self.fq.zero(), self.fq.one()
        m = self.m
        rows = []
        for i in range(m):
            rows.append([z] * m + [o if j == i else z for j in range(m)])
        for i in range(m):
            rows.append([-o if j == i else z for j in range(m)] + [z] * m)
        return Matrix(self.fq, rows)

    def zero_vector(self):
        return (self.fq.zero(),) * self.dim

    def basis_vector(self, i):
        v = [self.fq.zero()] * self.dim
        v[i] = self.fq.one()
        return tuple(v)

    def y_points(self):
        "All of Y = F_q^m in counting order (the model's index set)."
        q, m = self.fq.q, self.m
        pts = []
        for k in range(q**m):
            pts.append(tuple(self.fq.element((k // q**i) % q) for i in range(m)))
        return pts

    def vector_index(self, pt):
        "Inverse of y_points ordering."
        q = self.fq.q
        return sum(c.index() * q**i for i, c in enumerate(pt))


class SpElement:
    "Element of Sp(W); the symplectic relation is checked on construction."

    def __init__(self, space: SymplecticSpace, mat: Matrix, _checked=False):
        self.space = space
        self.mat = mat
        if not _checked:
            J = space.gram()
            assert mat.transpose() * J * mat == J, "matrix is not symplectic"

    def __mul__(self, o):
        assert self.space == o.space
        return SpElement(self.space, self.mat * o.mat, _checked=True)

    def inverse(self):
        return SpElement(self.space, self.mat.inverse(), _checked=True)

    def apply(self, v):
        return tuple(self.mat.mul_vec(list(v)))

    def __eq__(self, o):
        return isinstance(o, SpElement) and self.space == o.space and self.mat == o.mat

    def __hash__(self):
        return hash(self.mat.to_key())

    def __repr__(self):
        return f"Sp{[[e for e in r] for r in self.mat.rows]!r}"

    def blocks(self):
        m = self.space.m
        idx = list(range(m)), list(range(m, 2 * m))
        A = self.mat.submatrix(idx[0], idx[0])
        B = self.mat.submatrix(idx[0], idx[1])
        C = self.mat.submatrix(idx[1], idx[0])
        D = self.mat.submatrix(idx[1], idx[1])
        return A, B, C, D

    def is_identity(self):
        return self.mat.is_identity()


class HeisElem:
    "(w, t) with (w,t)(w',t') = (w + w', t + t' + (1/2)<w, w'>)."

    def __init__(self, space: SymplecticSpace, w, t: FqElem):
        self.space = space
        self.w = tuple(w)
        self.t = t

    def __mul__(self, o):
        assert self.space == o.space
        s = self.space
        w = tuple(a + b for a, b in zip(self.w, o.w))
        t = self.t + o.t + s.half * s.pairing(self.w, o.w)
        return HeisElem(s, w, t)

    def inverse(self):
        return HeisElem(self.space, tuple(-a for a in self.w), -self.t)

    def __eq__(self, o):
        return (
            isinstance(o, HeisElem)
            and self.space == o.space
            and self.w == o.w
            and self.t == o.t
        )

    def __hash__(self):
        return hash((self.w, self.t))

    def __repr__(self):
        return f"H({list(self.w)!r}, {self.t!r})"


def heis_enumerate(space: SymplecticSpace):
    q = space.fq.q
    pts = []
    for k in range(q**space.dim):
        w = tuple(space.fq.element((k // q**i) % q) for i in range(space.dim))
        for t in space.fq.elements():
            pts.append(HeisElem(space, w, t))
    return pts


def sp_act_heis(g: SpElement, h: HeisElem) -> HeisElem:
    "g . (w, t) = (g w, t); an automorphism of H since the form is invariant."
    return HeisElem(h.space, g.apply(h.w), h.t)


# ---------------------------------------------------------------------------
# Generators and factorization


def token_m(a: Matrix):
    return ("M", a.to_key())


def token_n(b: Matrix):
    return ("N", b.to_key())


TOKEN_W = ("W",)


def _mat_from_key(fq, key):
    return Matrix(fq, [list(r) for r in key])


def token_to_sp(space: SymplecticSpace, token) -> SpElement:
    fq, m = space.fq, space.m
    z = fq.zero()
    if token[0] == "M":
        a = _mat_from_key(fq, token[1])
        ainvt = a.inverse().transpose()
        rows = []
        for i in range(m):
            rows.append(list(a.rows[i]) + [z] * m)
        for i in range(m):
            rows.append([z] * m + list(ainvt.rows[i]))
        return SpElement(space, Matrix(fq, rows), _checked=True)
    if token[0] == "N":
        b = _mat_from_key(fq, token[1])
        assert b == b.transpose()
        eye = Matrix.identity(fq, m)
        rows = []
        for i in range(m):
            rows.append(list(eye.rows[i]) + list(b.rows[i]))
        for i in range(m):
            rows.append([z] * m + list(eye.rows[i]))
        return SpElement(space, Matrix(fq, rows), _checked=True)
    assert token == TOKEN_W
    eye = Matrix.identity(fq, m)
    rows = []
    for i in range(m):
        rows.append([z] * m + [-e for e in eye.rows[i]])
    for i in range(m):
        rows.append(list(eye.rows[i]) + [z] * m)
    return SpElement(space, Matrix(fq, rows), _checked=True)


def word_to_json(word):
    "GeneratorWord as a token list: M/N carry coefficient-vector matrices."
    out = []
    for tok in word:
        if tok == TOKEN_W:
            out.append(["W0"])
        else:
            out.append([tok[0], [[list(e.coeffs) for e in row] for row in tok[1]]])
    return out


def word_from_json(fq, data):
    out = []
    for item in data:
        if item[0] == "W0":
            out.append(TOKEN_W)
        else:
            mat = Matrix(fq, [[FqElem(fq, tuple(c)) for c in row] for row in item[1]])
            out.append((item[0], mat.to_key()))
    return out


def eval_word(space: SymplecticSpace, word) -> SpElement:
    g = SpElement(space, Matrix.identity(space.fq, space.dim), _checked=True)
    for tok in word:
        g = g * token_to_sp(space, tok)
    return g


def _symmetric_matrices(fq, m):
    "All symmetric m x m matrices in counting order of the upper triangle."
    slots = [(i, j) for i in range(m) for j in range(i, m)]
    for k in range(fq.q ** len(slots)):
        ent = {}
        for idx, (i, j) in enumerate(slots):
            ent[(i, j)] = fq.element((k // fq.q**idx) % fq.q)
            ent[(j, i)] = ent[(i, j)]
        yield Matrix(fq, [[ent[(i, j)] for j in range(m)] for i in range(m)])


def sp_factor(g: SpElement):
    """Canonical word in M(a), N(b), W0 evaluating to g exactly.

    C = 0 gives the parabolic word M(A) N(A^-1 B); invertible C gives
    N(A C^-1) W0 M(C) N(C^-1 D); a singular nonzero C is first repaired by
    the least symmetric s with det(C - sA) != 0, pulled out as the lower
    unipotent N'(s) = M(-I) W0 N(-s) W0."""
    space = g.space
    fq, m = space.fq, space.m
    A, B, C, D = g.blocks()
    word = []
    if C.is_zero():
        if not A.is_identity():
            word.append(token_m(A))
        b = A.inverse() * B
        if not b.is_zero():
            word.append(token_n(b))
        return word
    if not C.det().is_zero():
        cinv = C.inverse()
        b1 = A * cinv
        if not b1.is_zero():
            word.append(token_n(b1))
        word.append(TOKEN_W)
        word.append(token_m(C))
        b2 = cinv * D
        if not b2.is_zero():
            word.append(token_n(b2))
        return word
    for s in _symmetric_matrices(fq, m):
        if not (C - s * A).det().is_zero():
            eye = Matrix.identity(fq, m)
            word.append(token_m(-eye))
            word.append(TOKEN_W)
            if not s.is_zero():
                word.append(token_n(-s))
            word.append(TOKEN_W)
            lower = eval_word(space, word)  # this is N'(s)
            rest = sp_factor(lower.inverse() * g)
            return word + rest
    raise AssertionError("no symmetric repair found; q >= 3 guarantees one")


def sp_order(m: int, q: int) -> int:
    order = q ** (m * m)
    for i in range(1, m + 1):
        order *= q ** (2 * i) - 1
    return order


def sp_enumerate(space: SymplecticSpace, bound: int):
    """Every element of Sp(W) exactly once, in the deterministic order given
    by enumerating symplectic bases (e'_1, f'_1, e'_2, f'_2, ...)."""
    total = sp_order(space.m, space.fq.q)
    if total > bound:
        raise TooLarge(f"|Sp| = {total} exceeds bound {bound}")
    fq = space.fq
    dim = space.dim

    def pairing_row(v):
        "Coefficients of w -> <v, w>."
        m = space.m
        row = []
        for j in range(m):
            row.append(-v[m + j])
        for j in range(m):
            row.append(v[j])
        return row

    def span_enum(kernel_basis, particular=None):
        k = len(kernel_basis)
        for idx in range(fq.q**k):
            v = list(particular) if particular else [fq.zero()] * dim
            for i in range(k):
                c = fq.element((idx // fq.q**i) % fq.q)
                if not c.is_zero():
                    v = [a + c * b for a, b in zip(v, kernel_basis[i])]
            yield tuple(v)

    def rec(chosen):
        if len(chosen) == dim:
            m = space.m
            cols = [chosen[2 * i] for i in range(m)] + [
                chosen[2 * i + 1] for i in range(m)
            ]
            mat = Matrix(fq, [[c[i] for c in cols] for i in range(dim)])
            yield SpElement(space, mat, _checked=True)
            return
        constraints = [pairing_row(v) for v in chosen]
        if not constraints:
            kernel = [list(space.basis_vector(i)) for i in range(dim)]
        else:
            kernel = [
                list(v) for v in Matrix(fq, constraints).nullspace()
            ]
        for e in span_enum(kernel):
            if all(c.is_zero() for c in e):
                continue
            rowsys = constraints + [pairing_row(e)]
            rhs = [fq.zero()] * len(constraints) + [fq.one()]
            part, ker2 = _solve_affine(fq, rowsys, rhs)
            assert part is not None
            for f in span_enum(ker2, part):
                yield from rec(chosen + [e, f])

    yield from rec([])


def _solve_affine(fq, rows, rhs):
    "One solution of rows . x = rhs plus a kernel basis (None if unsolvable)."
    aug = Matrix(fq, [list(r) + [b] for r, b in zip(rows, rhs)])
    red, pivots = aug.rref()
    ncols = len(rows[0])
    if ncols in pivots:
        return None, []
    part = [fq.zero()] * ncols
    for r, p in enumerate(pivots):
        part[p] = red.rows[r][ncols]
    kernel = [list(v) for v in Matrix(fq, rows).nullspace()]
    return part, kernel
