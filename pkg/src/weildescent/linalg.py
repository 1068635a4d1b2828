"""Exact dense linear algebra over the package's field elements.

A Matrix is rows of field elements (CycloNum or FqElem); the field handle
supplies zero()/one() and elements do their own exact arithmetic.  Pivoting
is deterministic (leftmost column, topmost row), so ranks, nullspace bases
and inverses are reproducible.

Intertwiner systems T*A_i = B_i*T get a dedicated solver: when every
generator is monomial (exactly one nonzero per row and column, which covers
all Heisenberg images and the M-type Weil images) the system is solved by
weighted union-find over entry positions instead of dense elimination --
the q^2m x q^2m commutant systems of the Stone-von Neumann checks would be
far too big for Gauss."""

from __future__ import annotations

from fractions import Fraction
from itertools import product


class Matrix:
    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        assert all(len(r) == self.ncols for r in self.rows)

    # --- constructors

    @staticmethod
    def identity(field, n):
        z, o = field.zero(), field.one()
        return Matrix(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(field, nrows, ncols):
        z = field.zero()
        return Matrix(field, [[z] * ncols for _ in range(nrows)])

    @staticmethod
    def from_fn(field, nrows, ncols, fn):
        return Matrix(field, [[fn(i, j) for j in range(ncols)] for i in range(nrows)])

    def copy(self):
        return Matrix(self.field, self.rows)

    # --- basics

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and all(
                self.rows[i][j] == other.rows[i][j]
                for i in range(self.nrows)
                for j in range(self.ncols)
            )
        )

    def to_key(self):
        return tuple(tuple(r) for r in self.rows)

    def __hash__(self):
        return hash(self.to_key())

    def __repr__(self):
        return "Matrix(%d x %d over %r)" % (self.nrows, self.ncols, self.field)

    def is_zero(self):
        return all(e.is_zero() for r in self.rows for e in r)

    def is_identity(self):
        if self.nrows != self.ncols:
            return False
        o = self.field.one()
        return all(
            (self.rows[i][j] == o) if i == j else self.rows[i][j].is_zero()
            for i in range(self.nrows)
            for j in range(self.ncols)
        )

    def is_monomial(self):
        "Exactly one nonzero entry in every row and every column."
        if self.nrows != self.ncols:
            return False
        col_seen = [0] * self.ncols
        for r in self.rows:
            nz = [j for j, e in enumerate(r) if not e.is_zero()]
            if len(nz) != 1:
                return False
            col_seen[nz[0]] += 1
        return all(c == 1 for c in col_seen)

    # --- arithmetic

    def __add__(self, other):
        assert (self.nrows, self.ncols) == (other.nrows, other.ncols)
        return Matrix(
            self.field,
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def __sub__(self, other):
        return self + other.scale(self.field.from_int(-1))

    def __neg__(self):
        return self.scale(self.field.from_int(-1))

    def scale(self, c):
        return Matrix(self.field, [[c * e for e in r] for r in self.rows])

    def __mul__(self, other):
        assert self.ncols == other.nrows
        z = self.field.zero()
        brows = other.rows
        out = []
        for ra in self.rows:
            nz = [(k, a) for k, a in enumerate(ra) if not a.is_zero()]
            row = [z] * other.ncols
            for k, a in nz:
                rb = brows[k]
                for j, b in enumerate(rb):
                    if not b.is_zero():
                        row[j] = row[j] + a * b
            out.append(row)
        return Matrix(self.field, out)

    def mul_vec(self, v):
        assert self.ncols == len(v)
        z = self.field.zero()
        out = []
        for r in self.rows:
            acc = z
            for a, x in zip(r, v):
                if not a.is_zero() and not x.is_zero():
                    acc = acc + a * x
            out.append(acc)
        return out

    def transpose(self):
        return Matrix(
            self.field,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
        )

    def trace(self):
        assert self.nrows == self.ncols
        acc = self.field.zero()
        for i in range(self.nrows):
            acc = acc + self.rows[i][i]
        return acc

    def map(self, fn, field=None):
        return Matrix(field or self.field, [[fn(e) for e in r] for r in self.rows])

    def hstack(self, other):
        assert self.nrows == other.nrows
        return Matrix(
            self.field, [ra + rb for ra, rb in zip(self.rows, other.rows)]
        )

    def col(self, j):
        return [self.rows[i][j] for i in range(self.nrows)]

    def submatrix(self, row_idx, col_idx):
        return Matrix(
            self.field, [[self.rows[i][j] for j in col_idx] for i in row_idx]
        )

    @staticmethod
    def from_cols(field, cols):
        n = len(cols[0])
        return Matrix(field, [[c[i] for c in cols] for i in range(n)])

    # --- elimination

    def rref(self):
        "Reduced row echelon form; returns (rref matrix, pivot column list)."
        m = [list(r) for r in self.rows]
        nr, nc = self.nrows, self.ncols
        pivots = []
        row = 0
        for col in range(nc):
            sel = None
            for i in range(row, nr):
                if not m[i][col].is_zero():
                    sel = i
                    break
            if sel is None:
                continue
            m[row], m[sel] = m[sel], m[row]
            inv = m[row][col].inv()
            m[row] = [inv * e for e in m[row]]
            for i in range(nr):
                if i != row and not m[i][col].is_zero():
                    c = m[i][col]
                    m[i] = [a - c * b for a, b in zip(m[i], m[row])]
            pivots.append(col)
            row += 1
            if row == nr:
                break
        return Matrix(self.field, m), pivots

    def rank(self):
        return len(self.rref()[1])

    def nullspace(self):
        "Deterministic basis of the right kernel, as a list of vectors."
        red, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        z, o = self.field.zero(), self.field.one()
        basis = []
        for f in free:
            v = [z] * self.ncols
            v[f] = o
            for r, p in enumerate(pivots):
                v[p] = -red.rows[r][f]
            basis.append(v)
        return basis

    def inverse(self):
        assert self.nrows == self.ncols
        n = self.nrows
        aug = self.hstack(Matrix.identity(self.field, n))
        red, pivots = aug.rref()
        assert pivots == list(range(n)), "matrix not invertible"
        return Matrix(self.field, [r[n:] for r in red.rows])

    def det(self):
        assert self.nrows == self.ncols
        m = [list(r) for r in self.rows]
        n = self.nrows
        acc = self.field.one()
        sign = 1
        for col in range(n):
            sel = None
            for i in range(col, n):
                if not m[i][col].is_zero():
                    sel = i
                    break
            if sel is None:
                return self.field.zero()
            if sel != col:
                m[col], m[sel] = m[sel], m[col]
                sign = -sign
            piv = m[col][col]
            acc = acc * piv
            inv = piv.inv()
            for i in range(col + 1, n):
                if not m[i][col].is_zero():
                    c = m[i][col] * inv
                    m[i] = [a - c * b for a, b in zip(m[i], m[col])]
        return acc if sign == 1 else -acc

    def is_invertible(self):
        return self.nrows == self.ncols and not self.det().is_zero()

    def kron(self, other):
        rows = []
        for ra in self.rows:
            for rb in other.rows:
                row = []
                for a in ra:
                    row.extend(a * b for b in rb)
                rows.append(row)
        return Matrix(self.field, rows)


# ---------------------------------------------------------------------------
# Intertwiner systems


def _monomial_data(m: Matrix):
    "For monomial m: (pi, alpha) with column j nonzero at row pi[j], value alpha[j]."
    pi = [None] * m.ncols
    alpha = [None] * m.ncols
    for i, r in enumerate(m.rows):
        for j, e in enumerate(r):
            if not e.is_zero():
                pi[j] = i
                alpha[j] = e
    return pi, alpha


def intertwiner_space(gens_a, gens_b):
    """Basis of {T : T A_i = B_i T} for invertible generator images A_i of a
    source rep and B_i of a target rep (T maps source to target).  Uses the
    monomial fast path when possible."""
    assert len(gens_a) == len(gens_b) and gens_a
    na, nb = gens_a[0].nrows, gens_b[0].nrows
    field = gens_a[0].field
    if all(g.is_monomial() for g in gens_a) and all(
        g.is_monomial() for g in gens_b
    ):
        return _monomial_intertwiners(gens_a, gens_b, na, nb, field)
    return _dense_intertwiners(gens_a, gens_b, na, nb, field)


def _monomial_intertwiners(gens_a, gens_b, na, nb, field):
    # T[tau(r), pi(c)] = (beta_r / alpha_c) T[r, c] for each generator pair,
    # where A columns are (pi, alpha) and B columns are (tau, beta).
    parent = {}
    weight = {}
    dead = set()

    def findw(p):
        root = p
        w = field.one()
        while parent.get(root, root) != root:
            w = weight[root] * w
            root = parent[root]
        return root, w

    def union(a, b, w):
        # meaning T[b] = w * T[a]
        ra, wa = findw(a)
        rb, wb = findw(b)
        if ra == rb:
            if wb != w * wa:
                dead.add(ra)
            return
        # T[rb] = wb^-1 w wa * T[ra]
        parent[rb] = ra
        weight[rb] = wb.inv() * w * wa
        if rb in dead:
            dead.discard(rb)
            dead.add(ra)

    for A, B in zip(gens_a, gens_b):
        pi, alpha = _monomial_data(A)
        tau, beta = _monomial_data(B)
        for r in range(nb):
            br = beta[r]
            tr = tau[r]
            for c in range(na):
                union((r, c), (tr, pi[c]), br * alpha[c].inv())

    classes = {}
    for r in range(nb):
        for c in range(na):
            root, w = findw((r, c))
            if root in dead:
                continue
            classes.setdefault(root, []).append(((r, c), w))
    basis = []
    for root in sorted(classes):
        T = Matrix.zeros(field, nb, na)
        for (r, c), w in classes[root]:
            T.rows[r][c] = w
        basis.append(T)
    return basis


def _dense_intertwiners(gens_a, gens_b, na, nb, field):
    nunk = nb * na
    rows = []
    z = field.zero()
    for A, B in zip(gens_a, gens_b):
        for i in range(nb):
            for j in range(na):
                row = [z] * nunk
                for k in range(na):
                    if not A.rows[k][j].is_zero():
                        row[i * na + k] = row[i * na + k] + A.rows[k][j]
                for l in range(nb):
                    if not B.rows[i][l].is_zero():
                        row[l * na + j] = row[l * na + j] - B.rows[i][l]
                rows.append(row)
    system = Matrix(field, rows) if rows else Matrix.zeros(field, 1, nunk)
    out = []
    for v in system.nullspace():
        T = Matrix(field, [[v[i * na + j] for j in range(na)] for i in range(nb)])
        out.append(T)
    return out


def invertible_element(basis):
    """Deterministic search for an invertible element in the span of the
    given square matrices; None if the bounded search finds none."""
    if not basis:
        return None
    field = basis[0].field
    for T in basis:
        if T.is_invertible():
            return T
    n = basis[0].nrows
    span_dim = len(basis)
    bound = max(n + 1, 3)
    for coeffs in product(range(bound), repeat=span_dim):
        if sum(coeffs) == 0:
            continue
        T = Matrix.zeros(field, n, n)
        for c, B in zip(coeffs, basis):
            if c:
                T = T + B.scale(field.from_int(c))
        if T.is_invertible():
            return T
    return None


# ---------------------------------------------------------------------------
# Rational PSD certificate (for the norm-equation fast path)


def ldl_psd(sym):
    """Exact positive-semidefiniteness of a symmetric matrix of Fractions
    via LDL^T: True iff the form is PSD."""
    n = len(sym)
    m = [[Fraction(sym[i][j]) for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = m[k][k]
        if piv < 0:
            return False
        if piv == 0:
            # PSD forces the whole pivot row/column to vanish
            if any(m[k][j] != 0 for j in range(k, n)):
                return False
            continue
        for i in range(k + 1, n):
            c = m[i][k] / piv
            if c == 0:
                continue
            for j in range(k, n):
                m[i][j] -= c * m[k][j]
    return True
