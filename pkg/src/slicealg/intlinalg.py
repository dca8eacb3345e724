"""Exact linear algebra over the integers.

Matrices are plain lists of rows of Python ints (arbitrary precision).
Everything here is deterministic and exact: Smith normal form with
recorded unimodular transforms, integer kernels, exact solving, and
finitely generated abelian groups presented in invariant-factor
coordinates together with maps between them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

Matrix = List[List[int]]


# ---------------------------------------------------------------------------
# basic matrix helpers


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy(mat: Matrix) -> Matrix:
    return [row[:] for row in mat]


def shape(mat: Matrix) -> Tuple[int, int]:
    return (len(mat), len(mat[0]) if mat else 0)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"shape mismatch {shape(a)} * {shape(b)}")
    out = zeros(ra, cb)
    for i in range(ra):
        arow = a[i]
        orow = out[i]
        for k in range(ca):
            x = arow[k]
            if x:
                brow = b[k]
                for j in range(cb):
                    orow[j] += x * brow[j]
    return out


def matvec(a: Matrix, v: Sequence[int]) -> List[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix) -> Matrix:
    m, n = shape(a)
    return [[a[i][j] for i in range(m)] for j in range(n)]


def hstack(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return copy(b)
    if not b:
        return copy(a)
    return [ra + rb for ra, rb in zip(a, b)]


def is_zero(a: Matrix) -> bool:
    return all(all(x == 0 for x in row) for row in a)


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return shape(a) == shape(b) and all(ra == rb for ra, rb in zip(a, b))


def scale(a: Matrix, c: int) -> Matrix:
    return [[c * x for x in row] for row in a]


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def columns(a: Matrix) -> List[List[int]]:
    m, n = shape(a)
    return [[a[i][j] for i in range(m)] for j in range(n)]


def from_columns(cols: Sequence[Sequence[int]], nrows: Optional[int] = None) -> Matrix:
    if not cols:
        return [[] for _ in range(nrows or 0)]
    m = len(cols[0])
    return [[col[i] for col in cols] for i in range(m)]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SNF:
    """U * M * V = D with U, V unimodular; Uinv, Vinv exact inverses."""

    d: Matrix
    u: Matrix
    uinv: Matrix
    v: Matrix
    vinv: Matrix

    @property
    def diagonal(self) -> List[int]:
        m, n = shape(self.d)
        return [self.d[i][i] for i in range(min(m, n))]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def smith_normal_form(mat: Matrix) -> SNF:
    """Diagonalize over Z with divisibility d1 | d2 | ... and track transforms."""
    d = copy(mat)
    m, n = shape(d)
    u, uinv = identity(m), identity(m)
    v, vinv = identity(n), identity(n)

    def row_swap(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for r in uinv:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def row_add(i, j, c):
        # row_i += c * row_j
        d[i] = [x + c * y for x, y in zip(d[i], d[j])]
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]
        for r in uinv:
            r[j] -= c * r[i]

    def col_add(i, j, c):
        # col_i += c * col_j
        for r in d:
            r[i] += c * r[j]
        for r in v:
            r[i] += c * r[j]
        vinv[j] = [x - c * y for x, y in zip(vinv[j], vinv[i])]

    def row_neg(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]
        for r in uinv:
            r[i] = -r[i]

    t = 0
    while True:
        # find pivot: smallest nonzero |entry| in the remaining block
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = d[i][j]
                if x != 0 and (best is None or abs(x) < best):
                    best = abs(x)
                    piv = (i, j)
        if piv is None:
            break
        pi, pj = piv
        row_swap(t, pi)
        col_swap(t, pj)
        # clear row and column t
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    row_add(i, t, -q)
                    if d[i][t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    col_add(j, t, -q)
                    if d[t][j]:
                        col_swap(t, j)
                        dirty = True
        if d[t][t] < 0:
            row_neg(t)
        t += 1

    # enforce divisibility chain
    k = min(m, n)
    changed = True
    while changed:
        changed = False
        for i in range(k - 1):
            a, b = d[i][i], d[i + 1][i + 1]
            if a and b % a != 0:
                # bring b into row i via column op, rediagonalize 2x2 block
                col_add(i, i + 1, 1)
                while d[i + 1][i]:
                    q = d[i][i] // d[i + 1][i] if d[i + 1][i] else 0
                    if d[i + 1][i] and abs(d[i + 1][i]) <= abs(d[i][i]):
                        q = d[i][i] // d[i + 1][i]
                        row_add(i, i + 1, -q)
                    if d[i][i] == 0 or (d[i + 1][i] and abs(d[i][i]) > abs(d[i + 1][i])):
                        row_swap(i, i + 1)
                # now clear the extra column entry
                for j in range(i + 1, n):
                    if d[i][j] and j != i:
                        q = d[i][j] // d[i][i]
                        col_add(j, i, -q)
                        if d[i][j]:
                            col_swap(i, j)
                # re-clear below
                for r2 in range(i + 1, m):
                    if d[r2][i]:
                        q = d[r2][i] // d[i][i]
                        row_add(r2, i, -q)
                if d[i][i] < 0:
                    row_neg(i)
                if d[i + 1][i + 1] < 0:
                    row_neg(i + 1)
                changed = True
    return SNF(d=d, u=u, uinv=uinv, v=v, vinv=vinv)


def kernel(mat: Matrix) -> Matrix:
    """Columns form a basis of the integer kernel (a saturated sublattice)."""
    m, n = shape(mat)
    if n == 0:
        return [[] for _ in range(0)]
    s = smith_normal_form(mat)
    r = s.rank
    cols = columns(s.v)[r:]
    return from_columns(cols, n) if cols else [[] for _ in range(n)]


def solve(mat: Matrix, rhs: Sequence[int]) -> Optional[List[int]]:
    """One integer solution of mat*x = rhs, or None."""
    m, n = shape(mat)
    s = smith_normal_form(mat)
    c = matvec(s.u, list(rhs))
    y = [0] * n
    for i in range(m):
        di = s.d[i][i] if i < min(m, n) else 0
        if i < n and di:
            if c[i] % di:
                return None
            y[i] = c[i] // di
        else:
            if c[i] != 0:
                return None
    return matvec(s.v, y)


def solve_matrix(mat: Matrix, rhs: Matrix) -> Optional[Matrix]:
    """X with mat*X = rhs, or None."""
    m, n = shape(mat)
    _, q = shape(rhs)
    s = smith_normal_form(mat)
    out_cols = []
    for col in columns(rhs):
        c = matvec(s.u, col)
        y = [0] * n
        ok = True
        for i in range(m):
            di = s.d[i][i] if i < min(m, n) else 0
            if i < n and di:
                if c[i] % di:
                    ok = False
                    break
                y[i] = c[i] // di
            elif c[i] != 0:
                ok = False
                break
        if not ok:
            return None
        out_cols.append(matvec(s.v, y))
    return from_columns(out_cols, n)


# ---------------------------------------------------------------------------
# finitely generated abelian groups in invariant-factor coordinates


def _normalize_orders(orders: Iterable[int]) -> Tuple[int, ...]:
    fin = sorted([o for o in orders if o > 1])
    free = sum(1 for o in orders if o == 0)
    return tuple(fin + [0] * free)


@dataclass(frozen=True)
class FgAbGroup:
    """Z^k modulo diag(orders); orders = (d1,...,dr, 0,...,0), d1|...|dr, di>1.

    Elements are integer coordinate tuples, reduced mod the orders.
    """

    orders: Tuple[int, ...]

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @property
    def rank(self) -> int:
        return sum(1 for o in self.orders if o == 0)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(o for o in self.orders if o)

    def is_zero(self) -> bool:
        return self.ngens == 0

    def size(self) -> Optional[int]:
        if self.rank:
            return None
        n = 1
        for o in self.orders:
            n *= o
        return n

    def reduce(self, vec: Sequence[int]) -> Tuple[int, ...]:
        return tuple(x % o if o else x for x, o in zip(vec, self.orders))

    def element_order(self, vec: Sequence[int]) -> int:
        """0 means infinite order."""
        v = self.reduce(vec)
        if all(x == 0 for x in v):
            return 1
        n = 1
        for x, o in zip(v, self.orders):
            if o == 0:
                if x:
                    return 0
            elif x:
                k = o // _gcd(x, o)
                n = n * k // _gcd(n, k)
        return n

    def elements(self):
        """Iterate all elements (finite groups only)."""
        if self.rank:
            raise ValueError("infinite group")
        idx = [0] * self.ngens
        while True:
            yield tuple(idx)
            j = 0
            while j < self.ngens:
                idx[j] += 1
                if idx[j] < self.orders[j]:
                    break
                idx[j] = 0
                j += 1
            else:
                return

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = [f"Z/{o}" if o else "Z" for o in self.orders]
        return " + ".join(parts)


ZERO_GROUP = FgAbGroup(())


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def group_from_presentation(ngens: int, relations: Matrix) -> "Subquotient":
    """Z^ngens modulo the column span of `relations`."""
    amb = identity(ngens)
    rel = relations if relations and relations[0:] else zeros(ngens, 0)
    return subquotient(amb, rel)


@dataclass
class Subquotient:
    """A subquotient  L / R  of an ambient Z^a.

    group   -- the abstract group in invariant-factor coordinates
    lift    -- a x ngens matrix; column j is an ambient representative of gen j
    _basis  -- a x k basis of the sublattice L
    _uproj  -- k x k transform: coords in L-basis -> group coordinates
    """

    group: FgAbGroup
    lift: Matrix
    _basis: Matrix
    _uproj: Matrix
    _keep: List[int]

    def project(self, vec: Sequence[int]) -> Tuple[int, ...]:
        """Group coordinates of an ambient vector lying in L."""
        w = solve(self._basis, list(vec))
        if w is None:
            raise ValueError("vector not in the carrying sublattice")
        full = matvec(self._uproj, w)
        sel = [full[i] for i in self._keep]
        return self.group.reduce(sel)

    def contains(self, vec: Sequence[int]) -> bool:
        return solve(self._basis, list(vec)) is not None


def subquotient(basis: Matrix, denominator: Matrix) -> Subquotient:
    """Quotient of the lattice spanned by `basis` columns by the lattice
    spanned by `denominator` columns (which must lie inside it)."""
    a, k = shape(basis)
    if k == 0:
        return Subquotient(ZERO_GROUP, zeros(a, 0), basis, identity(0), [])
    x = solve_matrix(basis, denominator)
    if x is None:
        raise ValueError("denominator not inside numerator lattice")
    s = smith_normal_form(x)
    # basis * x = denom; new basis B' = basis * Uinv has relations diag(d)
    newb = matmul(basis, s.uinv)
    diag = s.diagonal
    orders_full = [diag[i] if i < len(diag) else 0 for i in range(k)]
    keep = [i for i, o in enumerate(orders_full) if o != 1]
    orders = tuple(orders_full[i] for i in keep)
    # canonical order: torsion ascending then frees (already ascending by SNF)
    lift_cols = [
        [newb[r][i] for r in range(a)] for i in keep
    ]
    group = FgAbGroup(orders)
    return Subquotient(
        group=group,
        lift=from_columns(lift_cols, a),
        _basis=basis,
        _uproj=s.u,
        _keep=keep,
    )


def homology(d_out: Matrix, d_in: Matrix, dim: Optional[int] = None) -> Subquotient:
    """ker(d_out)/im(d_in) on Z^dim, for integer matrices with d_out*d_in = 0.

    dim is the chain dimension; inferred when either matrix is nonempty.
    """
    if dim is None:
        if d_out and d_out[0:]:
            dim = len(d_out[0]) if d_out else None
        if dim is None and d_in:
            dim = len(d_in)
        if dim is None:
            dim = 0
    if len(d_out) and d_in and len(d_in[0]) and not is_zero(matmul(d_out, d_in)):
        raise ValueError("not a complex: d_out * d_in != 0")
    ker = kernel(d_out) if len(d_out) else identity(dim)
    d_in_n = d_in if (d_in and len(d_in) == dim) else zeros(dim, 0)
    return subquotient(ker, d_in_n)


@dataclass
class GroupMap:
    """Map between FgAbGroups given on invariant-factor coordinates."""

    src: FgAbGroup
    dst: FgAbGroup
    mat: Matrix  # dst.ngens x src.ngens

    def __post_init__(self):
        m, n = self.dst.ngens, self.src.ngens
        if len(self.mat) != m or any(len(row) != n for row in self.mat):
            raise ValueError("matrix shape does not match groups")
        # well-definedness: order(src gen) * image == 0 in dst
        for j, o in enumerate(self.src.orders):
            if o:
                img = [o * self.mat[i][j] for i in range(m)]
                if any(self.dst.reduce(img)):
                    raise ValueError("map not well defined on torsion")

    def __call__(self, vec: Sequence[int]) -> Tuple[int, ...]:
        return self.dst.reduce(matvec(self.mat, list(vec)))

    def compose(self, other: "GroupMap") -> "GroupMap":
        """self after other."""
        if other.dst.orders != self.src.orders:
            raise ValueError("composition mismatch")
        m, k, n = self.dst.ngens, self.src.ngens, other.src.ngens
        out = zeros(m, n)
        for i in range(m):
            for t in range(k):
                x = self.mat[i][t]
                if x:
                    for j in range(n):
                        out[i][j] += x * other.mat[t][j]
        return GroupMap(other.src, self.dst, out)

    def is_zero(self) -> bool:
        return all(not any(self.dst.reduce([self.mat[i][j] for i in range(self.dst.ngens)]))
                   for j in range(self.src.ngens)) if self.src.ngens else True

    def eq(self, other: "GroupMap") -> bool:
        if self.src.orders != other.src.orders or self.dst.orders != other.dst.orders:
            return False
        for j in range(self.src.ngens):
            a = self.dst.reduce([self.mat[i][j] for i in range(self.dst.ngens)])
            b = other.dst.reduce([other.mat[i][j] for i in range(other.dst.ngens)])
            if a != b:
                return False
        return True


def _presentation_lattices(grp: FgAbGroup) -> Matrix:
    """Relations of grp as columns in Z^{ngens}."""
    n = grp.ngens
    cols = []
    for i, o in enumerate(grp.orders):
        if o:
            col = [0] * n
            col[i] = o
            cols.append(col)
    return from_columns(cols, n)


def map_kernel(f: GroupMap) -> FgAbGroup:
    """Isomorphism type of ker f."""
    n = f.src.ngens
    rel_src = _presentation_lattices(f.src)
    if n == 0:
        return ZERO_GROUP
    if f.dst.ngens == 0:
        return f.src
    rel_dst = _presentation_lattices(f.dst)
    big = hstack(f.mat, rel_dst)
    ker_big = kernel(big)
    cols = columns(ker_big)
    pre = from_columns([c[:n] for c in cols], n) if cols else zeros(n, 0)
    lattice = hstack(pre, rel_src)
    basis = lattice_basis(lattice)
    sq = subquotient(basis, rel_src)
    return sq.group


def map_cokernel(f: GroupMap) -> FgAbGroup:
    m = f.dst.ngens
    if m == 0:
        return ZERO_GROUP
    rel_dst = _presentation_lattices(f.dst)
    big = hstack(f.mat, rel_dst)
    amb = identity(m)
    return subquotient(amb, big).group


def map_image(f: GroupMap) -> FgAbGroup:
    """Isomorphism type of im f  (subgroup of dst)."""
    m = f.dst.ngens
    if m == 0 or f.src.ngens == 0:
        return ZERO_GROUP
    rel_dst = _presentation_lattices(f.dst)
    lattice = lattice_basis(hstack(f.mat, rel_dst))
    sq = subquotient(lattice, rel_dst)
    return sq.group


def lattice_basis(gens: Matrix) -> Matrix:
    """Basis of the lattice spanned by the given generator columns."""
    m, n = shape(gens)
    if n == 0:
        return zeros(m, 0)
    s = smith_normal_form(gens)
    r = s.rank
    # gens * V = Uinv * D; basis = first r columns of Uinv * D
    ud = matmul(s.uinv, s.d)
    cols = columns(ud)[:r]
    return from_columns(cols, m)


def map_homology(f_out: GroupMap, f_in: GroupMap) -> Subquotient:
    """ker(f_out)/im(f_in) where f_in: C -> A, f_out: A -> B.

    The result's `lift` columns are coordinates in A; `project` takes
    A-coordinates of elements of ker(f_out).
    """
    if f_in.dst.orders != f_out.src.orders:
        raise ValueError("middle group mismatch")
    a = f_out.src.ngens
    rel_a = _presentation_lattices(f_out.src)
    if f_out.dst.ngens == 0:
        pre = identity(a)
    else:
        rel_b = _presentation_lattices(f_out.dst)
        big = hstack(f_out.mat, rel_b)
        ker_big = kernel(big)
        cols = columns(ker_big)
        pre = from_columns([c[:a] for c in cols], a) if cols else zeros(a, 0)
    numerator = lattice_basis(hstack(pre, rel_a))
    denominator = hstack(f_in.mat, rel_a)
    return subquotient(numerator, denominator)


def identity_map(g: FgAbGroup) -> GroupMap:
    return GroupMap(g, g, identity(g.ngens))


def zero_map(src: FgAbGroup, dst: FgAbGroup) -> GroupMap:
    return GroupMap(src, dst, zeros(dst.ngens, src.ngens))
