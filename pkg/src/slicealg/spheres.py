"""Equivariant cellular chain complexes of representation spheres.

A complex stores one permutation module per degree (encoded by the
permutation action of a chosen generator gamma on the cell basis) and
integer boundary matrices.  Duals, tensor products and mapping cones
stay in this class, so homology of any word in spheres is computed by
exact integer linear algebra on fixed-point subcomplexes, one subgroup
level at a time.  Products of homology classes are formed at chain
level inside tensor models and never transported between models.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .groups import CyclicGroup, GroupRingElt, RepSum, zero_rep
from .intlinalg import (
    FgAbGroup,
    GroupMap,
    Matrix,
    Subquotient,
    from_columns,
    identity,
    is_zero,
    matmul,
    matvec,
    shape,
    solve,
    solve_matrix,
    zeros,
)
from .mackey import MackeyFunctor, classify


# ---------------------------------------------------------------------------
# permutation modules


@dataclass(frozen=True)
class PermModule:
    """Free abelian group with a permutation action of gamma (order | g)."""

    g: int
    perm: Tuple[int, ...]  # gamma moves basis vector i to perm[i]

    @property
    def rank(self) -> int:
        return len(self.perm)

    def gamma_matrix(self) -> Matrix:
        n = self.rank
        m = zeros(n, n)
        for i, j in enumerate(self.perm):
            m[j][i] = 1
        return m

    def power_perm(self, e: int) -> Tuple[int, ...]:
        p = list(range(self.rank))
        for _ in range(e % self._order()):
            p = [self.perm[i] for i in p]
        return tuple(p)

    def _order(self) -> int:
        e, p = 1, list(self.perm)
        while p != list(range(self.rank)):
            p = [self.perm[i] for i in p]
            e += 1
        return max(e, 1)

    def fixed_basis(self, h: int) -> Matrix:
        """Columns: sums over orbits of gamma^{g/h} (the subgroup of order h)."""
        step = self.g // h
        p = list(range(self.rank))
        for _ in range(step):
            p = [self.perm[i] for i in p]
        seen = [False] * self.rank
        cols = []
        for start in range(self.rank):
            if seen[start]:
                continue
            orbit = []
            i = start
            while not seen[i]:
                seen[i] = True
                orbit.append(i)
                i = p[i]
            col = [0] * self.rank
            for i in orbit:
                col[i] = 1
            cols.append(col)
        return from_columns(cols, self.rank)

    def orbit_signature(self) -> Tuple[int, ...]:
        """Multiset of cyclic orbit lengths (sorted)."""
        seen = [False] * self.rank
        sig = []
        for start in range(self.rank):
            if seen[start]:
                continue
            n, i = 0, start
            while not seen[i]:
                seen[i] = True
                i = self.perm[i]
                n += 1
            sig.append(n)
        return tuple(sorted(sig))


def orbit_module(g: int, stabilizer_order: int, copies: int = 1) -> PermModule:
    """copies of Z[G/H] with |H| = stabilizer_order."""
    size = g // stabilizer_order
    perm: List[int] = []
    for c in range(copies):
        base = c * size
        for i in range(size):
            perm.append(base + (i + 1) % size)
    return PermModule(g, tuple(perm))


# ---------------------------------------------------------------------------
# sphere complexes


@dataclass
class SphereComplex:
    g: int
    modules: Dict[int, PermModule]
    diff: Dict[int, Matrix]  # diff[n]: C_n -> C_{n-1}
    label: str = ""

    def degrees(self) -> List[int]:
        return sorted(self.modules)

    def module(self, n: int) -> PermModule:
        return self.modules.get(n, PermModule(self.g, ()))

    def boundary(self, n: int) -> Matrix:
        if n in self.diff:
            return self.diff[n]
        return zeros(self.module(n - 1).rank, self.module(n).rank)

    def validate(self):
        for n in self.degrees():
            d_n = self.boundary(n)
            d_n1 = self.boundary(n + 1)
            if self.module(n).rank and self.module(n + 1).rank and self.module(n - 1).rank:
                if not is_zero(matmul(d_n, d_n1)):
                    raise ValueError(f"boundary squared nonzero at degree {n + 1}")
            # gamma equivariance
            gn = self.module(n).gamma_matrix()
            gn1 = self.module(n - 1).gamma_matrix()
            if self.module(n).rank and self.module(n - 1).rank:
                if matmul(gn1, d_n) != matmul(d_n, gn):
                    raise ValueError(f"boundary not equivariant at degree {n}")

    # -- levelwise data -----------------------------------------------------
    def subgroup_orders(self) -> List[int]:
        out, h = [], 1
        while h <= self.g:
            out.append(h)
            h *= 2
        return out

    def fixed_boundary(self, n: int, h: int) -> Matrix:
        bn = self.module(n).fixed_basis(h)
        bn1 = self.module(n - 1).fixed_basis(h)
        if shape(bn)[1] == 0:
            return zeros(shape(bn1)[1], 0)
        img = matmul(self.boundary(n), bn) if self.module(n - 1).rank else zeros(0, shape(bn)[1])
        if shape(bn1)[1] == 0:
            return zeros(0, shape(bn)[1])
        out = solve_matrix(bn1, img)
        if out is None:
            raise AssertionError("boundary does not preserve fixed points")
        return out

    def homology_level(self, n: int, h: int) -> Subquotient:
        from .intlinalg import homology as _homology

        dim = shape(self.module(n).fixed_basis(h))[1]
        d_out = self.fixed_boundary(n, h)
        d_in = self.fixed_boundary(n + 1, h)
        return _homology(d_out, d_in, dim=dim)

    def homology_mackey(self, n: int) -> MackeyFunctor:
        levels: Dict[int, FgAbGroup] = {}
        sq: Dict[int, Subquotient] = {}
        for h in self.subgroup_orders():
            s = self.homology_level(n, h)
            sq[h] = s
            levels[h] = s.group
        res: Dict[int, GroupMap] = {}
        tr: Dict[int, GroupMap] = {}
        weyl: Dict[int, GroupMap] = {}
        mod = self.module(n)
        for h in self.subgroup_orders():
            bh = mod.fixed_basis(h)
            gm = mod.gamma_matrix() if mod.rank else zeros(0, 0)
            cols = []
            for j in range(levels[h].ngens):
                lift = [sq[h].lift[i][j] for i in range(shape(bh)[1])]
                amb = matvec(bh, lift) if mod.rank else []
                cols.append(list(sq[h].project(
                    _in_basis(bh, matvec(gm, amb) if mod.rank else []))))
            weyl[h] = GroupMap(levels[h], levels[h],
                               from_columns(cols, levels[h].ngens))
            if h > 1:
                bl = mod.fixed_basis(h // 2)
                rcols = []
                for j in range(levels[h].ngens):
                    lift = [sq[h].lift[i][j] for i in range(shape(bh)[1])]
                    amb = matvec(bh, lift) if mod.rank else []
                    rcols.append(list(sq[h // 2].project(_in_basis(bl, amb))))
                res[h] = GroupMap(levels[h], levels[h // 2],
                                  from_columns(rcols, levels[h // 2].ngens))
                # transfer: sum over coset reps 1, gamma^{g/h}
                step = self.g // h
                gpow = identity(mod.rank)
                for _ in range(step):
                    gpow = matmul(mod.gamma_matrix(), gpow) if mod.rank else gpow
                tcols = []
                for j in range(levels[h // 2].ngens):
                    lift = [sq[h // 2].lift[i][j] for i in range(shape(bl)[1])]
                    amb = matvec(bl, lift) if mod.rank else []
                    tot = [a + b for a, b in zip(amb, matvec(gpow, amb))] if mod.rank else []
                    tcols.append(list(sq[h].project(_in_basis(bh, tot))))
                tr[h] = GroupMap(levels[h // 2], levels[h],
                                 from_columns(tcols, levels[h].ngens))
        return MackeyFunctor(g=self.g, levels=levels, res=res, tr=tr, weyl=weyl)

    def homology_table(self) -> Dict[int, Tuple[MackeyFunctor, str]]:
        out = {}
        degs = self.degrees()
        if not degs:
            return out
        for n in range(min(degs), max(degs) + 1):
            m = self.homology_mackey(n)
            if not m.is_zero():
                out[n] = (m, classify(m))
        return out

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.module(n).rank for n in self.degrees())


def _in_basis(basis: Matrix, vec: Sequence[int]) -> List[int]:
    if shape(basis)[1] == 0:
        return []
    w = solve(basis, list(vec))
    if w is None:
        raise AssertionError("vector not in fixed-point lattice")
    return w


# ---------------------------------------------------------------------------
# building blocks


def build_complex(v: RepSum, validate: bool = True) -> SphereComplex:
    """Reduced cellular chain complex of S^V for an actual representation V."""
    if not v.is_actual():
        raise ValueError("use dual/tensor models for virtual representations")
    group = v.group
    g = group.order
    shift = v.a
    b = v.b
    k = group.k
    # blocks: sign part then rotation parts with larger isotropy first
    # (the standard cell structure: Z, then Z[G/G'], then growing orbits)
    block_orbits: List[Tuple[int, int]] = []  # (stabilizer order, length in degrees)
    if b:
        block_orbits.append((g // 2, b))
    for idx in range(len(v.c) - 1, -1, -1):
        cj = v.c[idx]
        if cj:
            block_orbits.append((1 << idx, 2 * cj))
    modules: Dict[int, PermModule] = {0: orbit_module(g, g)}
    stab_at: Dict[int, int] = {0: g}
    n = 0
    for stab, length in block_orbits:
        for _ in range(length):
            n += 1
            modules[n] = orbit_module(g, stab)
            stab_at[n] = stab
    total = n
    # boundary ring elements via the x recursion
    diffs: Dict[int, Matrix] = {}
    if total >= 1:
        diffs[1] = _ring_map_matrix(GroupRingElt.one(g) * 0 + _fold_elt(g), g,
                                    stab_at[1], stab_at[0])
    xs: Dict[int, GroupRingElt] = {}
    if total >= 2:
        xs[2] = GroupRingElt.one(g)
    for m in range(3, total + 1):
        band = _band_index(m, b, v.c, k)
        zeta = GroupRingElt.zeta(g, band)
        xs[m] = zeta.exact_divide(xs[m - 1])
    for m in range(2, total + 1):
        if m % 2 == 0:
            elt = (GroupRingElt.one(g) - GroupRingElt.gamma(g)) * xs[m]
        else:
            elt = xs[m]
        diffs[m] = _ring_map_matrix(elt, g, stab_at[m], stab_at[m - 1])
    cx = SphereComplex(g=g, modules=modules, diff=diffs, label=str(v))
    if shift:
        cx = cx.shifted(shift) if hasattr(cx, "shifted") else shift_complex(cx, shift)
    if validate:
        cx.validate()
        _check_underlying(cx, v)
    return cx


def _fold_elt(g: int) -> GroupRingElt:
    return GroupRingElt.one(g)


def _band_index(m: int, b: int, c: Sequence[int], k: int) -> int:
    """Band j with 2 + d_{j-1} < m <= 2 + d_j for the x recursion."""
    # partial degrees: d_0 = 0, d_1 = b, then 2*c blocks with larger isotropy first
    d = [0, b]
    for idx in range(len(c) - 1, -1, -1):
        if c[idx]:
            d.append(d[-1] + 2 * c[idx])
    bands = []
    j = 1
    d_list = [0, b] if b else [0, 0]
    # build explicit (upper degree, zeta index) bands
    bands_explicit: List[Tuple[int, int]] = []
    upper = b
    if b:
        bands_explicit.append((upper, 1))
    for idx in range(len(c) - 1, -1, -1):
        if c[idx]:
            upper += 2 * c[idx]
            bands_explicit.append((upper, k - idx))
    for up, zi in bands_explicit:
        if m <= 2 + up:
            return zi
    raise ValueError("degree outside the complex")


def _ring_map_matrix(elt: GroupRingElt, g: int, src_stab: int, dst_stab: int) -> Matrix:
    """Matrix of multiplication by elt: Z[G/H_src] -> Z[G/H_dst] (projection)."""
    s_src = g // src_stab
    s_dst = g // dst_stab
    out = zeros(s_dst, s_src)
    for t in range(s_src):
        for u, coeff in enumerate(elt.coeffs):
            if coeff:
                out[(t + u) % s_dst][t] += coeff
    return out


def _check_underlying(cx: SphereComplex, v: RepSum):
    d = v.degree
    table = {}
    degs = cx.degrees()
    for n in range(min(degs), max(degs) + 1):
        h = cx.homology_level(n, 1).group
        if not h.is_zero():
            table[n] = h
    if list(table) != [d] or table[d].orders != (0,):
        raise AssertionError(f"underlying homology of S^{v} wrong: {table}")


def shift_complex(cx: SphereComplex, k: int) -> SphereComplex:
    return SphereComplex(
        g=cx.g,
        modules={n + k: m for n, m in cx.modules.items()},
        diff={n + k: d for n, d in cx.diff.items()},
        label=f"{cx.label} shifted {k}",
    )


def dual_complex(cx: SphereComplex) -> SphereComplex:
    """Linear dual; chains of S^{-V} live in degrees -|V|..0."""
    modules = {-n: m for n, m in cx.modules.items()}
    diff: Dict[int, Matrix] = {}
    for n in cx.modules:
        d = cx.boundary(n + 1)  # C_{n+1} -> C_n
        if cx.module(n + 1).rank and cx.module(n).rank:
            # dual map C^*_{-n} -> C^*_{-n-1} is the transpose
            diff[-n] = [[d[i][j] for i in range(len(d))] for j in range(len(d[0]) if d else 0)]
    out = SphereComplex(g=cx.g, modules=modules, diff=diff, label=f"dual({cx.label})")
    out.validate()
    return out


@dataclass
class TensorIndex:
    blocks: List[Tuple[int, int, int, int]]  # (p, q, offset, rank_p*rank_q)
    ranks: Tuple[int, int]


def tensor(a: SphereComplex, b: SphereComplex) -> Tuple[SphereComplex, Dict[int, TensorIndex]]:
    if a.g != b.g:
        raise ValueError("different groups")
    g = a.g
    modules: Dict[int, PermModule] = {}
    index: Dict[int, TensorIndex] = {}
    degs_a, degs_b = a.degrees(), b.degrees()
    for n in range(min(degs_a) + min(degs_b), max(degs_a) + max(degs_b) + 1):
        perm: List[int] = []
        blocks = []
        offset = 0
        for p in degs_a:
            q = n - p
            ra, rb = a.module(p).rank, b.module(q).rank
            if ra == 0 or rb == 0:
                continue
            pa, pb = a.module(p).perm, b.module(q).perm
            for i in range(ra):
                for j in range(rb):
                    perm.append(offset + pa[i] * rb + pb[j])
            blocks.append((p, q, offset, ra * rb))
            offset += ra * rb
        if perm:
            modules[n] = PermModule(g, tuple(perm))
            index[n] = TensorIndex(blocks=blocks, ranks=(0, 0))
    diff: Dict[int, Matrix] = {}
    for n in modules:
        if (n - 1) not in modules:
            tgt_rank = 0
        else:
            tgt_rank = modules[n - 1].rank
        src_rank = modules[n].rank
        d = zeros(tgt_rank, src_rank)
        if tgt_rank:
            tgt_off = {(p, q): off for p, q, off, _ in index[n - 1].blocks}
            for p, q, off, _ in index[n].blocks:
                ra, rb = a.module(p).rank, b.module(q).rank
                da = a.boundary(p)
                db = b.boundary(q)
                # d(x (x) y) = dx (x) y + (-1)^p x (x) dy
                if (p - 1, q) in tgt_off and a.module(p - 1).rank:
                    o2 = tgt_off[(p - 1, q)]
                    for i in range(ra):
                        for j in range(rb):
                            col = off + i * rb + j
                            for i2 in range(a.module(p - 1).rank):
                                if da[i2][i]:
                                    d[o2 + i2 * rb + j][col] += da[i2][i]
                if (p, q - 1) in tgt_off and b.module(q - 1).rank:
                    o2 = tgt_off[(p, q - 1)]
                    sign = -1 if p % 2 else 1
                    for i in range(ra):
                        for j in range(rb):
                            col = off + i * rb + j
                            for j2 in range(b.module(q - 1).rank):
                                if db[j2][j]:
                                    d[o2 + i * b.module(q - 1).rank + j2][col] += sign * db[j2][j]
            diff[n] = d
    out = SphereComplex(g=g, modules=modules, diff=diff,
                        label=f"({a.label})(x)({b.label})")
    out.validate()
    return out, index


def cone(f: Dict[int, Matrix], src: SphereComplex, dst: SphereComplex) -> SphereComplex:
    """Mapping cone of a chain map f: src -> dst (f[n]: src_n -> dst_n)."""
    g = dst.g
    # verify chain map
    for n in src.degrees():
        fn = f.get(n, zeros(dst.module(n).rank, src.module(n).rank))
        fn1 = f.get(n - 1, zeros(dst.module(n - 1).rank, src.module(n - 1).rank))
        lhs = matmul(dst.boundary(n), fn) if dst.module(n - 1).rank and src.module(n).rank else None
        rhs = matmul(fn1, src.boundary(n)) if dst.module(n - 1).rank and src.module(n).rank else None
        if lhs is not None and rhs is not None and lhs != rhs:
            raise ValueError(f"not a chain map at degree {n}")
    modules: Dict[int, PermModule] = {}
    degs = sorted(set(dst.degrees()) | {n + 1 for n in src.degrees()})
    for n in degs:
        perm = list(dst.module(n).perm)
        off = len(perm)
        perm += [off + p for p in src.module(n - 1).perm]
        if perm:
            modules[n] = PermModule(g, tuple(perm))
    diff: Dict[int, Matrix] = {}
    for n in degs:
        rd, rs = dst.module(n).rank, src.module(n - 1).rank
        rd1, rs1 = dst.module(n - 1).rank, src.module(n - 2).rank
        if rd + rs == 0 or rd1 + rs1 == 0:
            continue
        d = zeros(rd1 + rs1, rd + rs)
        bd = dst.boundary(n)
        for i in range(rd1):
            for j in range(rd):
                d[i][j] = bd[i][j]
        fn = f.get(n - 1, zeros(rd1, rs))
        for i in range(rd1):
            for j in range(rs):
                d[i][rd + j] = fn[i][j]
        bs = src.boundary(n - 1)
        for i in range(rs1):
            for j in range(rs):
                d[rd1 + i][rd + j] = -bs[i][j]
        diff[n] = d
    out = SphereComplex(g=g, modules=modules, diff=diff,
                        label=f"cone({src.label}->{dst.label})")
    out.validate()
    return out


def sphere_model(v: RepSum) -> SphereComplex:
    """A chain model of S^V for a virtual V: C^{V+} tensor dual(C^{V-})."""
    pos, neg = v.positive_part(), v.negative_part()
    if neg.degree == 0:
        return build_complex(pos)
    if pos.degree == 0:
        return dual_complex(build_complex(neg))
    cx, _ = tensor(build_complex(pos), dual_complex(build_complex(neg)))
    return cx


# ---------------------------------------------------------------------------
# chain classes


@dataclass
class ChainClass:
    cx: SphereComplex
    degree: int
    level: int  # subgroup order
    coords: Tuple[int, ...]  # coordinates in homology at that level
    name: str = ""

    def homology(self) -> Subquotient:
        return self.cx.homology_level(self.degree, self.level)

    def chain_vector(self) -> List[int]:
        """Ambient chain representative."""
        sq = self.homology()
        basis = self.cx.module(self.degree).fixed_basis(self.level)
        lift = matvec(sq.lift, list(self.coords)) if sq.group.ngens else [0] * shape(basis)[1]
        return matvec(basis, lift) if self.cx.module(self.degree).rank else []

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.homology().group.reduce(self.coords))

    def order(self) -> int:
        return self.homology().group.element_order(self.coords)

    def scaled(self, c: int) -> "ChainClass":
        return ChainClass(self.cx, self.degree, self.level,
                          self.homology().group.reduce([c * x for x in self.coords]),
                          name=f"{c}*{self.name}")

    def add(self, other: "ChainClass") -> "ChainClass":
        assert self.cx is other.cx and self.degree == other.degree and self.level == other.level
        grp = self.homology().group
        return ChainClass(self.cx, self.degree, self.level,
                          grp.reduce([a + b for a, b in zip(self.coords, other.coords)]))

    def restrict(self, h: int) -> "ChainClass":
        if h > self.level:
            raise ValueError("restriction goes down")
        vec = self.chain_vector()
        sq = self.cx.homology_level(self.degree, h)
        basis = self.cx.module(self.degree).fixed_basis(h)
        coords = sq.project(_in_basis(basis, vec))
        return ChainClass(self.cx, self.degree, h, coords, name=f"res({self.name})")

    def transfer(self, h: int) -> "ChainClass":
        if h < self.level:
            raise ValueError("transfer goes up")
        vec = self.chain_vector()
        mod = self.cx.module(self.degree)
        cur = self.level
        while cur < h:
            step = self.cx.g // (cur * 2)
            gp = identity(mod.rank)
            gm = mod.gamma_matrix()
            for _ in range(step):
                gp = matmul(gm, gp)
            vec = [a + b for a, b in zip(vec, matvec(gp, vec))]
            cur *= 2
        sq = self.cx.homology_level(self.degree, h)
        basis = mod.fixed_basis(h)
        coords = sq.project(_in_basis(basis, vec))
        return ChainClass(self.cx, self.degree, h, coords, name=f"tr({self.name})")

    def gamma(self) -> "ChainClass":
        vec = matvec(self.cx.module(self.degree).gamma_matrix(), self.chain_vector())
        sq = self.homology()
        basis = self.cx.module(self.degree).fixed_basis(self.level)
        return ChainClass(self.cx, self.degree, self.level,
                          sq.project(_in_basis(basis, vec)), name=f"g({self.name})")


def euler_class(v: RepSum, cx: Optional[SphereComplex] = None) -> ChainClass:
    """a_V: the image of the zero cell, at the top level."""
    if v.nontrivial_part() != v:
        raise ValueError("a_V needs V^G = 0")
    cx = cx or build_complex(v)
    g = cx.g
    sq = cx.homology_level(0, g)
    basis = cx.module(0).fixed_basis(g)
    coords = sq.project(_in_basis(basis, [1] + [0] * (cx.module(0).rank - 1)))
    return ChainClass(cx, 0, g, coords, name=f"a({v})")


def orientation_class(v: RepSum, cx: Optional[SphereComplex] = None) -> ChainClass:
    """u_V: top class at level G (oriented) or G/2 (non-oriented)."""
    if not v.is_actual():
        raise ValueError("u_V needs an actual V")
    cx = cx or build_complex(v)
    g = cx.g
    d = v.degree
    level = g if v.oriented() else g // 2
    sq = cx.homology_level(d, level)
    if sq.group.orders != (0,):
        raise AssertionError("top homology not infinite cyclic at this level")
    # canonical generator, sign-normalized on the identity-coset cell
    basis = cx.module(d).fixed_basis(level)
    amb = matvec(basis, [sq.lift[i][0] for i in range(shape(basis)[1])])
    first = next((x for x in amb if x != 0), 1)
    sign = 1 if first > 0 else -1
    return ChainClass(cx, d, level, sq.group.reduce([sign]), name=f"u({v})")


def top_cell_class(v: RepSum, cx: Optional[SphereComplex] = None) -> ChainClass:
    """e_V: the underlying fundamental class at the isotropy level.

    At level G_V the restricted sphere is non-equivariant; its top homology
    is infinite cyclic and e_V is the sign-normalized generator.
    """
    if v.nontrivial_part() != v:
        raise ValueError("e_V needs V^G = 0")
    cx = cx or build_complex(v)
    d = v.degree
    level = v.isotropy_order()
    sq = cx.homology_level(d, level)
    if sq.group.orders != (0,):
        raise AssertionError("underlying top homology not infinite cyclic")
    basis = cx.module(d).fixed_basis(level)
    amb = matvec(basis, [sq.lift[i][0] for i in range(shape(basis)[1])])
    first = next((x for x in amb if x != 0), 1)
    sign = 1 if first > 0 else -1
    return ChainClass(cx, d, level, sq.group.reduce([sign]), name=f"e({v})")


def product(classes: Sequence[ChainClass]) -> ChainClass:
    """Product in the left-iterated tensor model of the carriers."""
    if not classes:
        raise ValueError("empty product")
    cur = classes[0]
    cx = cur.cx
    vec = cur.chain_vector()
    deg = cur.degree
    level = cur.level
    for nxt in classes[1:]:
        level = min(level, nxt.level)
        big, index = tensor(cx, nxt.cx)
        v2 = nxt.chain_vector()
        n = deg + nxt.degree
        out = [0] * big.module(n).rank
        off = next(off for p, q, off, _ in index[n].blocks if p == deg)
        rb = nxt.cx.module(nxt.degree).rank
        for i, xi in enumerate(vec):
            if xi:
                for j, yj in enumerate(v2):
                    if yj:
                        out[off + i * rb + j] += xi * yj
        cx, vec, deg = big, out, n
    sq = cx.homology_level(deg, level)
    basis = cx.module(deg).fixed_basis(level)
    coords = sq.project(_in_basis(basis, vec))
    return ChainClass(cx, deg, level, coords,
                      name="*".join(c.name for c in classes))


def same_model(a: SphereComplex, b: SphereComplex) -> bool:
    if a is b:
        return True
    if a.g != b.g or a.degrees() != b.degrees():
        return False
    for n in a.degrees():
        if a.module(n).perm != b.module(n).perm:
            return False
        if a.boundary(n) != b.boundary(n):
            return False
    return True


def classes_equal(a: ChainClass, b: ChainClass) -> bool:
    """Equality inside one tensor model (the spec's notion of equality)."""
    if not same_model(a.cx, b.cx):
        raise ValueError("classes live in different models; form them in one model")
    if a.degree != b.degree or a.level != b.level:
        return False
    grp = a.homology().group
    return grp.reduce(a.coords) == grp.reduce(b.coords)
