"""Mackey functors for cyclic 2-groups as explicit Lewis diagrams.

A Mackey functor is stored levelwise: one finitely generated abelian
group per subgroup (indexed by subgroup order), with restriction maps
going down one step, transfers going up one step, and the Weyl action
of a fixed generator gamma on every level.  All axioms are checked at
construction time, including the double coset identity
res o tr = 1 + gamma^{g/h}.

A symbol dictionary of the specific functors that show up in the
homology of representation spheres and in the slice spectral sequences
is built programmatically; classification matches a basis-independent
fingerprint against it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .intlinalg import (
    FgAbGroup,
    GroupMap,
    Matrix,
    ZERO_GROUP,
    hstack,
    identity,
    identity_map,
    map_cokernel,
    map_image,
    map_kernel,
    matmul,
    shape,
    zero_map,
    zeros,
)


@dataclass
class MackeyFunctor:
    """Levels indexed by subgroup order h | g; maps between adjacent levels."""

    g: int
    levels: Dict[int, FgAbGroup]
    res: Dict[int, GroupMap]   # res[h]: level h -> level h/2   (h > 1)
    tr: Dict[int, GroupMap]    # tr[h]:  level h/2 -> level h   (h > 1)
    weyl: Dict[int, GroupMap]  # gamma acting on level h
    name: Optional[str] = None

    def __post_init__(self):
        self.validate()

    # -- structure ----------------------------------------------------------
    def subgroup_orders(self) -> List[int]:
        out = []
        h = 1
        while h <= self.g:
            out.append(h)
            h *= 2
        return out

    def level(self, h: int) -> FgAbGroup:
        return self.levels[h]

    def validate(self):
        g = self.g
        orders = self.subgroup_orders()
        for h in orders:
            if h not in self.levels:
                raise ValueError(f"missing level {h}")
        for h in orders:
            w = self.weyl[h]
            if w.src.orders != self.levels[h].orders or w.dst.orders != self.levels[h].orders:
                raise ValueError("weyl map level mismatch")
        # weyl has order dividing g/h (the Weyl group of the level)
        for h in orders:
            w = self.weyl[h]
            acc = identity_map(self.levels[h])
            for _ in range(g // h):
                acc = w.compose(acc)
            if not acc.eq(identity_map(self.levels[h])):
                raise ValueError(f"weyl action at level {h} has wrong order")
        # top weyl trivial
        if not self.weyl[g].eq(identity_map(self.levels[g])):
            raise ValueError("gamma must act trivially on the top level")
        for h in orders[1:]:
            r, t = self.res[h], self.tr[h]
            if r.src.orders != self.levels[h].orders or r.dst.orders != self.levels[h // 2].orders:
                raise ValueError(f"res[{h}] level mismatch")
            if t.src.orders != self.levels[h // 2].orders or t.dst.orders != self.levels[h].orders:
                raise ValueError(f"tr[{h}] level mismatch")
            # equivariance: gamma commutes with res and tr
            if not r.compose(self.weyl[h]).eq(self.weyl[h // 2].compose(r)):
                raise ValueError(f"res[{h}] not equivariant")
            if not t.compose(self.weyl[h // 2]).eq(self.weyl[h].compose(t)):
                raise ValueError(f"tr[{h}] not equivariant")
            # double coset: res o tr = 1 + gamma^{g/h} on level h/2
            w = self.weyl[h // 2]
            wp = identity_map(self.levels[h // 2])
            for _ in range(g // h):
                wp = w.compose(wp)
            lhs = r.compose(t)
            rhs = GroupMap(
                self.levels[h // 2], self.levels[h // 2],
                [[wp.mat[i][j] + (1 if i == j else 0) for j in range(wp.src.ngens)]
                 for i in range(wp.dst.ngens)],
            )
            if not lhs.eq(rhs):
                raise ValueError(f"double coset law fails at level {h}")

    # -- derived maps ---------------------------------------------------------
    def res_to(self, h_from: int, h_to: int) -> GroupMap:
        if h_to > h_from:
            raise ValueError("restriction goes down")
        f = identity_map(self.levels[h_from])
        h = h_from
        while h > h_to:
            f = self.res[h].compose(f)
            h //= 2
        return f

    def tr_to(self, h_from: int, h_to: int) -> GroupMap:
        if h_to < h_from:
            raise ValueError("transfer goes up")
        f = identity_map(self.levels[h_from])
        h = h_from
        while h < h_to:
            f = self.tr[h * 2].compose(f)
            h *= 2
        return f

    # -- invariants ------------------------------------------------------------
    def fingerprint(self) -> tuple:
        """Complete isomorphism invariant for the dictionary in use.

        Levelwise invariant factors plus, for every edge map and Weyl
        action, the isomorphism types of kernel, image and cokernel.
        """
        out = [("g", self.g)]
        for h in self.subgroup_orders():
            out.append((h, self.levels[h].orders))
        for h in self.subgroup_orders()[1:]:
            for tag, f in (("res", self.res[h]), ("tr", self.tr[h])):
                out.append((tag, h, map_kernel(f).orders,
                            map_image(f).orders, map_cokernel(f).orders))
        for h in self.subgroup_orders():
            w = self.weyl[h]
            n = w.src.ngens
            wm1 = GroupMap(w.src, w.dst, [[w.mat[i][j] - (1 if i == j else 0)
                                           for j in range(n)] for i in range(n)])
            wp1 = GroupMap(w.src, w.dst, [[w.mat[i][j] + (1 if i == j else 0)
                                           for j in range(n)] for i in range(n)])
            out.append(("weyl", h, map_cokernel(wm1).orders, map_cokernel(wp1).orders))
        return tuple(out)

    def is_zero(self) -> bool:
        return all(self.levels[h].is_zero() for h in self.subgroup_orders())

    def __str__(self) -> str:
        lv = ", ".join(f"{h}:{self.levels[h]}" for h in reversed(self.subgroup_orders()))
        return f"<{self.name or 'Mackey'} {lv}>"

    def to_json(self) -> dict:
        data = {
            "group": f"C{self.g}",
            "levels": {str(h): list(self.levels[h].orders) for h in self.subgroup_orders()},
            "res": {str(h): self.res[h].mat for h in self.subgroup_orders()[1:]},
            "tr": {str(h): self.tr[h].mat for h in self.subgroup_orders()[1:]},
            "weyl": {str(h): self.weyl[h].mat for h in self.subgroup_orders()},
        }
        if self.name:
            data["symbol"] = self.name
        return data


# ---------------------------------------------------------------------------
# constructors


def _grp(*orders: int) -> FgAbGroup:
    return FgAbGroup(tuple(orders))


def make_mackey(g: int, levels: Dict[int, Sequence[int]],
                res: Dict[int, Matrix], tr: Dict[int, Matrix],
                weyl: Optional[Dict[int, Matrix]] = None,
                name: Optional[str] = None) -> MackeyFunctor:
    lv = {h: FgAbGroup(tuple(o)) for h, o in levels.items()}
    orders = sorted(lv)
    wd = {}
    for h in orders:
        if weyl and h in weyl:
            wd[h] = GroupMap(lv[h], lv[h], weyl[h])
        else:
            wd[h] = identity_map(lv[h])
    rd = {h: GroupMap(lv[h], lv[h // 2], res[h]) for h in orders if h > 1}
    td = {h: GroupMap(lv[h // 2], lv[h], tr[h]) for h in orders if h > 1}
    return MackeyFunctor(g=g, levels=lv, res=rd, tr=td, weyl=wd, name=name)


def zero_mackey(g: int) -> MackeyFunctor:
    h, levels = 1, {}
    while h <= g:
        levels[h] = []
        h *= 2
    return make_mackey(g, levels, {h: [] for h in levels if h > 1},
                       {h: [] for h in levels if h > 1}, name="0")


def fixed_point_mackey(g: int, action: Matrix, name: Optional[str] = None) -> MackeyFunctor:
    """Fixed point Mackey functor of a Z[G]-module given by the gamma matrix."""
    from .intlinalg import kernel, solve_matrix

    n, n2 = shape(action)
    if n != n2:
        raise ValueError("action matrix must be square")
    power = identity(n)
    for _ in range(g):
        power = matmul(action, power)
    if not power == identity(n):
        raise ValueError("action matrix does not have order dividing |G|")

    def mat_pow(a: Matrix, e: int) -> Matrix:
        out = identity(n)
        for _ in range(e):
            out = matmul(a, out)
        return out

    orders = []
    h = 1
    while h <= g:
        orders.append(h)
        h *= 2
    basis: Dict[int, Matrix] = {}
    levels: Dict[int, FgAbGroup] = {}
    for h in orders:
        gen_pow = mat_pow(action, g // h)  # generator of the subgroup of order h
        diff = [[gen_pow[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        b = kernel(diff)
        basis[h] = b
        levels[h] = FgAbGroup(tuple([0] * shape(b)[1]))
    res: Dict[int, GroupMap] = {}
    tr: Dict[int, GroupMap] = {}
    weyl: Dict[int, GroupMap] = {}
    for h in orders:
        wmat = solve_matrix(basis[h], matmul(action, basis[h]))
        if wmat is None:
            raise AssertionError("gamma does not preserve fixed points")
        weyl[h] = GroupMap(levels[h], levels[h], wmat)
        if h > 1:
            rmat = solve_matrix(basis[h // 2], basis[h])
            if rmat is None:
                raise AssertionError("fixed points not nested")
            res[h] = GroupMap(levels[h], levels[h // 2], rmat)
            # relative trace: sum over coset reps of the index-2 inclusion
            tr_amb = matmul(
                [[identity(n)[i][j] + mat_pow(action, g // h)[i][j] for j in range(n)]
                 for i in range(n)],
                basis[h // 2],
            )
            tmat = solve_matrix(basis[h], tr_amb)
            if tmat is None:
                raise AssertionError("trace does not land in fixed points")
            tr[h] = GroupMap(levels[h // 2], levels[h], tmat)
    return MackeyFunctor(g=g, levels=levels, res=res, tr=tr, weyl=weyl, name=name)


def induce(m: MackeyFunctor) -> MackeyFunctor:
    """Induction from C_{g} to C_{2g}: new top level equals the old top."""
    g2 = m.g * 2
    orders = m.subgroup_orders()
    levels: Dict[int, FgAbGroup] = {}
    res: Dict[int, GroupMap] = {}
    tr: Dict[int, GroupMap] = {}
    weyl: Dict[int, GroupMap] = {}
    top = m.levels[m.g]
    levels[g2] = top
    weyl[g2] = identity_map(top)
    for h in orders:
        lv = m.levels[h]
        dbl = FgAbGroup(lv.orders + lv.orders)
        levels[h] = dbl
        n = lv.ngens
        w = m.weyl[h].mat
        # gamma swaps the two copies; its square acts by the old gamma on each
        wmat = zeros(2 * n, 2 * n)
        for i in range(n):
            for j in range(n):
                wmat[i][n + j] = w[i][j]
        for i in range(n):
            wmat[n + i][i] = 1
        weyl[h] = GroupMap(dbl, dbl, wmat)
    # top edge: diagonal restriction, fold transfer
    n = top.ngens
    rmat = zeros(2 * n, n)
    tmat = zeros(n, 2 * n)
    for i in range(n):
        rmat[i][i] = 1
        rmat[n + i][i] = 1
        tmat[i][i] = 1
        tmat[i][n + i] = 1
    res[g2] = GroupMap(levels[g2], levels[m.g], rmat)
    tr[g2] = GroupMap(levels[m.g], levels[g2], tmat)
    for h in orders[1:]:
        r, t = m.res[h].mat, m.tr[h].mat
        a, b = shape(r)
        rmat = zeros(2 * a, 2 * b)
        for i in range(a):
            for j in range(b):
                rmat[i][j] = r[i][j]
                rmat[a + i][b + j] = r[i][j]
        res[h] = GroupMap(levels[h], levels[h // 2], rmat)
        a, b = shape(t)
        tmat = zeros(2 * a, 2 * b)
        for i in range(a):
            for j in range(b):
                tmat[i][j] = t[i][j]
                tmat[a + i][b + j] = t[i][j]
        tr[h] = GroupMap(levels[h // 2], levels[h], tmat)
    name = f"hat({m.name})" if m.name else None
    return MackeyFunctor(g=g2, levels=levels, res=res, tr=tr, weyl=weyl, name=name)


def restrict_mackey(m: MackeyFunctor) -> MackeyFunctor:
    """Restriction to the index 2 subgroup (gamma^2 becomes the generator)."""
    g2 = m.g // 2
    orders = [h for h in m.subgroup_orders() if h <= g2]
    levels = {h: m.levels[h] for h in orders}
    res = {h: m.res[h] for h in orders if h > 1}
    tr = {h: m.tr[h] for h in orders if h > 1}
    weyl = {h: m.weyl[h].compose(m.weyl[h]) for h in orders}
    name = f"down({m.name})" if m.name else None
    return MackeyFunctor(g=g2, levels=levels, res=res, tr=tr, weyl=weyl, name=name)


# ---------------------------------------------------------------------------
# C2 dictionary


def c2_box() -> MackeyFunctor:
    return make_mackey(2, {2: [0], 1: [0]}, {2: [[1]]}, {2: [[2]]}, name="box")


def c2_obox() -> MackeyFunctor:
    return make_mackey(2, {2: [], 1: [0]}, {2: [[]]}, {2: []},
                       weyl={1: [[-1]]}, name="obox")


def c2_bullet() -> MackeyFunctor:
    return make_mackey(2, {2: [2], 1: []}, {2: []}, {2: [[]]}, name="bullet")


def c2_diagbox() -> MackeyFunctor:
    return make_mackey(2, {2: [0], 1: [0]}, {2: [[2]]}, {2: [[1]]}, name="diagbox")


def c2_dotbox() -> MackeyFunctor:
    return make_mackey(2, {2: [2], 1: [0]}, {2: [[0]]}, {2: [[1]]},
                       weyl={1: [[-1]]}, name="dotbox")


def c2_hatbox() -> MackeyFunctor:
    return make_mackey(2, {2: [0], 1: [0, 0]}, {2: [[1], [1]]}, {2: [[1, 1]]},
                       weyl={1: [[0, 1], [1, 0]]}, name="hatbox")


# ---------------------------------------------------------------------------
# C4 dictionary helpers: bar and dot constructions on a C2 diagram


def emat(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def bar_c4(m: MackeyFunctor, name: str) -> MackeyFunctor:
    """(0; A_-; B_-) with gamma = -1 on both lower levels."""
    a, b = m.levels[2], m.levels[1]
    return make_mackey(
        4,
        {4: [], 2: list(a.orders), 1: list(b.orders)},
        {4: emat(a.ngens, 0), 2: m.res[2].mat},
        {4: emat(0, a.ngens), 2: m.tr[2].mat},
        weyl={2: _neg_ident(a), 1: _neg_ident(b)},
        name=name,
    )


def dot_c4(m: MackeyFunctor, name: str) -> MackeyFunctor:
    """(Z/2; A_-; B_-) with zero restriction and surjective transfer on top."""
    a, b = m.levels[2], m.levels[1]
    if a.ngens != 1:
        raise ValueError("dot construction needs a cyclic middle level")
    return make_mackey(
        4,
        {4: [2], 2: list(a.orders), 1: list(b.orders)},
        {4: [[0]], 2: m.res[2].mat},
        {4: [[1]], 2: m.tr[2].mat},
        weyl={2: _neg_ident(a), 1: _neg_ident(b)},
        name=name,
    )


def _neg_ident(g: FgAbGroup) -> Matrix:
    return [[-1 if i == j else 0 for j in range(g.ngens)] for i in range(g.ngens)]


def c4_box() -> MackeyFunctor:
    return make_mackey(4, {4: [0], 2: [0], 1: [0]},
                       {4: [[1]], 2: [[1]]}, {4: [[2]], 2: [[2]]}, name="box")


def c4_fourbox() -> MackeyFunctor:
    """The constant functor with doubled restrictions (dual pattern, isotropy e)."""
    return make_mackey(4, {4: [0], 2: [0], 1: [0]},
                       {4: [[2]], 2: [[2]]}, {4: [[1]], 2: [[1]]}, name="fourbox")


def c4_diagbox() -> MackeyFunctor:
    """Dual pattern with isotropy C2."""
    return make_mackey(4, {4: [0], 2: [0], 1: [0]},
                       {4: [[2]], 2: [[1]]}, {4: [[1]], 2: [[2]]}, name="diagbox")


def c4_bullet() -> MackeyFunctor:
    return make_mackey(4, {4: [2], 2: [], 1: []},
                       {4: emat(0, 1), 2: emat(0, 0)},
                       {4: emat(1, 0), 2: emat(0, 0)}, name="bullet")


def c4_circ() -> MackeyFunctor:
    return make_mackey(4, {4: [4], 2: [2], 1: []},
                       {4: [[1]], 2: emat(0, 1)},
                       {4: [[2]], 2: emat(1, 0)}, name="circ")


def c4_jj() -> MackeyFunctor:
    return make_mackey(4, {4: [2], 2: [2], 1: []},
                       {4: [[0]], 2: emat(0, 1)},
                       {4: [[1]], 2: emat(1, 0)}, name="JJ")


def c4_jjj() -> MackeyFunctor:
    return make_mackey(4, {4: [2], 2: [2], 1: []},
                       {4: [[1]], 2: emat(0, 1)},
                       {4: [[0]], 2: emat(1, 0)}, name="JJJ")


def c4_jjoldiagbox() -> MackeyFunctor:
    """Middle extension in dimension 4: levels (Z/2, Z/2 + Z_-, Z_-)."""
    return make_mackey(
        4,
        {4: [2], 2: [2, 0], 1: [0]},
        {4: [[0], [0]], 2: [[0, 2]]},
        {4: [[1, 1]], 2: [[0], [1]]},
        weyl={2: [[1, 0], [0, -1]], 1: [[-1]]},
        name="JJoldiagbox",
    )


def c4_circoldiagbox() -> MackeyFunctor:
    """Middle extension in dimension 20: levels (Z/4, Z/2 + Z_-, Z_-)."""
    return make_mackey(
        4,
        {4: [4], 2: [2, 0], 1: [0]},
        {4: [[1], [0]], 2: [[0, 2]]},
        {4: [[2, 2]], 2: [[0], [1]]},
        weyl={2: [[1, 0], [0, -1]], 1: [[-1]]},
        name="circoldiagbox",
    )


def c4_jjbox() -> MackeyFunctor:
    """Extension of hat(obox) by JJ: levels (Z/2, Z/2, Z[C4/C2]_-)."""
    return make_mackey(
        4,
        {4: [2], 2: [2], 1: [0, 0]},
        {4: [[0]], 2: [[0], [0]]},
        {4: [[1]], 2: [[1, 1]]},
        weyl={1: [[0, -1], [1, 0]]},
        name="JJbox",
    )


def c4_jjjbox() -> MackeyFunctor:
    """Extension of JJJ by hat(obox): levels (Z/2, Z/2, Z[C4/C2]_-)."""
    return make_mackey(
        4,
        {4: [2], 2: [2], 1: [0, 0]},
        {4: [[1]], 2: [[0], [0]]},
        {4: [[0]], 2: [[1, 1]]},
        weyl={1: [[0, -1], [1, 0]]},
        name="JJJbox",
    )


def c4_circbox() -> MackeyFunctor:
    """Extension of hat(obox) by circ: levels (Z/4, Z/2, Z[C4/C2]_-)."""
    return make_mackey(
        4,
        {4: [4], 2: [2], 1: [0, 0]},
        {4: [[1]], 2: [[0], [0]]},
        {4: [[2]], 2: [[1, 1]]},
        weyl={1: [[0, -1], [1, 0]]},
        name="circbox",
    )


def prop_top_functor(g: int, isotropy: int, oriented: bool, top_of_sphere: bool,
                     degree_one_sign: bool = False) -> MackeyFunctor:
    """The four named top/bottom homology functors of S^{+-V}.

    top_of_sphere=True:  H_d S^V  (constant Z for oriented V, Z_- otherwise)
    top_of_sphere=False: H_{-d} S^{-V} (the dual pattern Z(G, G_V), resp. its
    twisted version; degree_one_sign marks the V = sigma special case where
    the top level vanishes).
    """
    orders = []
    h = 1
    while h <= g:
        orders.append(h)
        h *= 2
    if top_of_sphere:
        if oriented:
            levels = {h: [0] for h in orders}
            res = {h: [[1]] for h in orders if h > 1}
            tr = {h: [[2]] for h in orders if h > 1}
            weyl = None
        else:
            levels = {h: ([] if h == g else [0]) for h in orders}
            res, tr = {}, {}
            for h in orders:
                if h == 1:
                    continue
                if h == g:
                    res[h] = emat(1, 0)
                    tr[h] = emat(0, 1)
                else:
                    res[h] = [[1]]
                    tr[h] = [[2]]
            weyl = {h: [[-1]] for h in orders if h != g}
        return make_mackey(g, levels, res, tr, weyl)
    # bottom homology of the dual
    if oriented:
        levels = {h: [0] for h in orders}
        res, tr = {}, {}
        for h in orders:
            if h == 1:
                continue
            if h <= isotropy:
                res[h] = [[1]]
                tr[h] = [[2]]
            else:
                res[h] = [[2]]
                tr[h] = [[1]]
        return make_mackey(g, levels, res, tr)
    # non-oriented dual: Z/2 (or 0 for V = sigma) on top, Z_- below
    levels = {}
    res, tr, weyl = {}, {}, {}
    for h in orders:
        if h == g:
            levels[h] = [] if degree_one_sign else [2]
        else:
            levels[h] = [0]
            weyl[h] = [[-1]]
    for h in orders:
        if h == 1:
            continue
        if h == g:
            if degree_one_sign:
                res[h] = emat(1, 0)
                tr[h] = emat(0, 1)
            else:
                res[h] = [[0]]
                tr[h] = [[1]]
        elif h <= isotropy:
            res[h] = [[1]]
            tr[h] = [[2]]
        else:
            res[h] = [[2]]
            tr[h] = [[1]]
    return make_mackey(g, levels, res, tr, weyl)


# ---------------------------------------------------------------------------
# dictionary and classification


class SymbolDictionary:
    def __init__(self):
        self._by_fp: Dict[tuple, str] = {}
        self._by_name: Dict[Tuple[int, str], MackeyFunctor] = {}
        self.aliases: Dict[Tuple[int, str], str] = {}
        self._build()

    def register(self, m: MackeyFunctor, name: str):
        fp = m.fingerprint()
        if fp in self._by_fp:
            canon = self._by_fp[fp]
            if canon != name:
                self.aliases[(m.g, name)] = canon
            return
        m.name = name
        self._by_fp[fp] = name
        self._by_name[(m.g, name)] = m

    def canonical(self, g: int, name: str) -> str:
        return self.aliases.get((g, name), name)

    def get(self, name: str, g: int = 4) -> MackeyFunctor:
        return self._by_name[(g, self.canonical(g, name))]

    def names(self, g: int) -> List[str]:
        return sorted(n for (gg, n) in self._by_name if gg == g)

    def _build(self):
        # --- C2 ---
        for ctor in (c2_box, c2_obox, c2_bullet, c2_diagbox, c2_dotbox, c2_hatbox):
            m = ctor()
            self.register(m, f"{m.name}")
        self.register(zero_mackey(2), "0")
        # prop-top aliases over C2
        self.register(prop_top_functor(2, 1, True, True), "box")
        self.register(prop_top_functor(2, 1, False, True), "obox")
        self.register(prop_top_functor(2, 1, True, False), "diagbox")
        self.register(prop_top_functor(2, 1, False, False), "dotbox")
        self.register(prop_top_functor(2, 1, False, False, degree_one_sign=True), "obox")

        # --- C4 ---
        self.register(zero_mackey(4), "0")
        self.register(c4_box(), "box")
        self.register(c4_fourbox(), "fourbox")
        self.register(c4_diagbox(), "diagbox")
        self.register(c4_bullet(), "bullet")
        self.register(c4_circ(), "circ")
        self.register(c4_jj(), "JJ")
        self.register(c4_jjj(), "JJJ")
        self.register(bar_c4(c2_box(), "obox"), "obox")          # = Z_-
        self.register(bar_c4(c2_bullet(), "obull"), "obull")
        self.register(bar_c4(c2_diagbox(), "bardiagbox"), "bardiagbox")
        self.register(bar_c4(c2_diagbox(), "odbox"), "odbox")    # alias
        self.register(dot_c4(c2_box(), "dotbox"), "dotbox")
        self.register(dot_c4(c2_diagbox(), "dotdiagbox"), "dotdiagbox")
        for base in (c2_box, c2_obox, c2_bullet, c2_diagbox, c2_dotbox, c2_hatbox):
            m = base()
            self.register(induce(m), f"hat{m.name}")
        self.register(c4_jjoldiagbox(), "JJoldiagbox")
        self.register(c4_circoldiagbox(), "circoldiagbox")
        self.register(c4_jjbox(), "JJbox")
        self.register(c4_jjjbox(), "JJJbox")
        self.register(c4_circbox(), "circbox")
        # prop-top functors over C4
        self.register(prop_top_functor(4, 1, True, True), "box")
        self.register(prop_top_functor(4, 1, False, True), "obox")
        self.register(prop_top_functor(4, 1, True, False), "fourbox")
        self.register(prop_top_functor(4, 2, True, False), "diagbox")
        self.register(prop_top_functor(4, 1, False, False), "dotdiagbox")
        self.register(prop_top_functor(4, 2, False, False), "dotbox")
        self.register(prop_top_functor(4, 2, False, False, degree_one_sign=True), "obox")


_DICT: Optional[SymbolDictionary] = None


def symbol_dictionary() -> SymbolDictionary:
    global _DICT
    if _DICT is None:
        _DICT = SymbolDictionary()
    return _DICT


def classify(m: MackeyFunctor) -> str:
    if m.is_zero():
        return "0"
    d = symbol_dictionary()
    fp = m.fingerprint()
    name = d._by_fp.get(fp)
    if name is not None:
        return name
    return f"unknown{fp}"


# ---------------------------------------------------------------------------
# homomorphisms and short exact sequence probes


def hom_basis(a: MackeyFunctor, b: MackeyFunctor) -> List[Dict[int, Matrix]]:
    """Z-basis of the group of Mackey natural transformations a -> b.

    Solves the integer linear system expressing levelwise maps commuting
    with res, tr and weyl, modulo the target relations.
    """
    if a.g != b.g:
        raise ValueError("different groups")
    orders = a.subgroup_orders()
    # unknowns: entries of f_h (b_h x a_h) plus slack multiples of target orders
    slots = []
    for h in orders:
        na, nb = a.levels[h].ngens, b.levels[h].ngens
        slots.append((h, nb, na))
    offs = {}
    total = 0
    for h, nb, na in slots:
        offs[h] = total
        total += nb * na

    def var(h, i, j, nb, na):
        return offs[h] + i * na + j

    # constraint: for each edge map m in {res, tr, weyl}: f_dst o m_a = m_b o f_src,
    # as maps into the target level (equation mod target orders)
    constraints = []
    for h in orders:
        # weyl at level h: f_h o w_a = w_b o f_h  (into level h)
        constraints.append(("w", h))
    for h in orders[1:]:
        constraints.append(("r", h))  # f_{h/2} o res_a = res_b o f_h : level h -> b_{h/2}
        constraints.append(("t", h))  # f_h o tr_a = tr_b o f_{h/2} : level h/2 -> b_h

    rows = []
    row_mods = []
    for kind, h in constraints:
        if kind == "w":
            la, lb = a.levels[h], b.levels[h]
            wa, wb = a.weyl[h].mat, b.weyl[h].mat
            na, nb = la.ngens, lb.ngens
            for i in range(nb):
                for j in range(na):
                    row = [0] * total
                    # (f w_a)_{ij} - (w_b f)_{ij}
                    for k in range(na):
                        row[var(h, i, k, nb, na)] += wa[k][j]
                    for k in range(nb):
                        row[var(h, k, j, nb, na)] -= wb[i][k]
                    rows.append(row)
                    row_mods.append(lb.orders[i])
        elif kind == "r":
            la, lb = a.levels[h], b.levels[h // 2]
            ra, rb = a.res[h].mat, b.res[h].mat
            na = la.ngens
            nmid_a = a.levels[h // 2].ngens
            nb_top = b.levels[h].ngens
            nb = lb.ngens
            for i in range(nb):
                for j in range(na):
                    row = [0] * total
                    for k in range(nmid_a):
                        row[var(h // 2, i, k, nb, nmid_a)] += ra[k][j]
                    for k in range(nb_top):
                        row[var(h, k, j, nb_top, na)] -= rb[i][k]
                    rows.append(row)
                    row_mods.append(lb.orders[i])
        else:
            la, lb = a.levels[h // 2], b.levels[h]
            ta, tb = a.tr[h].mat, b.tr[h].mat
            na = la.ngens
            ntop_a = a.levels[h].ngens
            nb = lb.ngens
            nmid_b = b.levels[h // 2].ngens
            for i in range(nb):
                for j in range(na):
                    row = [0] * total
                    for k in range(ntop_a):
                        row[var(h, i, k, nb, ntop_a)] += ta[k][j]
                    for k in range(nmid_b):
                        row[var(h // 2, k, j, nmid_b, na)] -= tb[i][k]
                    rows.append(row)
                    row_mods.append(lb.orders[i])
    # torsion well-definedness: order(a gen) * column = 0 in b
    for h in orders:
        la, lb = a.levels[h], b.levels[h]
        na, nb = la.ngens, lb.ngens
        for j, o in enumerate(la.orders):
            if o:
                for i in range(nb):
                    row = [0] * total
                    row[var(h, i, j, nb, na)] = o
                    rows.append(row)
                    row_mods.append(lb.orders[i])
    # add slack variables for the moduli
    slack = sum(1 for mod in row_mods if mod)
    mat = []
    si = 0
    for row, mod in zip(rows, row_mods):
        r = row + [0] * slack
        if mod:
            r[total + si] = mod
            si += 1
        mat.append(r)
    if not mat:
        sol_cols = identity(total)
    else:
        from .intlinalg import kernel as _kernel
        ker = _kernel(mat)
        sol_cols = [[ker[i][j] for i in range(total)] for j in range(shape(ker)[1])]
        # keep only distinct projections
    out = []
    seen = set()
    for col in sol_cols:
        fmaps: Dict[int, Matrix] = {}
        for h, nb, na in slots:
            mat_h = zeros(nb, na)
            for i in range(nb):
                for j in range(na):
                    mat_h[i][j] = col[offs[h] + i * na + j]
            fmaps[h] = mat_h
        # reduce modulo target orders for dedup
        key = tuple(
            tuple(tuple(b.levels[h].reduce([fmaps[h][i][j] for i in range(b.levels[h].ngens)]))
                  for j in range(a.levels[h].ngens))
            for h, _, _ in slots
        )
        if key in seen:
            continue
        seen.add(key)
        out.append(fmaps)
    return out


def _is_monic(a: MackeyFunctor, b: MackeyFunctor, f: Dict[int, Matrix]) -> bool:
    for h in a.subgroup_orders():
        gm = GroupMap(a.levels[h], b.levels[h], f[h])
        if map_kernel(gm).ngens:
            return False
    return True


def _is_epi(a: MackeyFunctor, b: MackeyFunctor, f: Dict[int, Matrix]) -> bool:
    for h in a.subgroup_orders():
        gm = GroupMap(a.levels[h], b.levels[h], f[h])
        if map_cokernel(gm).ngens:
            return False
    return True


def quotient_functor(b: MackeyFunctor, fi: Dict[int, Matrix],
                     a: MackeyFunctor) -> MackeyFunctor:
    """The quotient of b by the image of a Mackey map from a."""
    from .intlinalg import (_presentation_lattices, from_columns, hstack,
                            matvec, subquotient)

    sq = {}
    levels = {}
    for h in b.subgroup_orders():
        n = b.levels[h].ngens
        rel = _presentation_lattices(b.levels[h])
        den = hstack(fi[h] if a.levels[h].ngens else zeros(n, 0), rel)
        sq[h] = subquotient(identity(n), den)
        levels[h] = sq[h].group

    def induced(src_h, dst_h, gm: GroupMap) -> GroupMap:
        cols = []
        for j in range(levels[src_h].ngens):
            lift = [sq[src_h].lift[i][j] for i in range(b.levels[src_h].ngens)]
            img = matvec(gm.mat, lift) if b.levels[src_h].ngens else \
                [0] * b.levels[dst_h].ngens
            cols.append(list(sq[dst_h].project(img)))
        return GroupMap(levels[src_h], levels[dst_h],
                        from_columns(cols, levels[dst_h].ngens))

    res, tr, weyl = {}, {}, {}
    for h in b.subgroup_orders():
        weyl[h] = induced(h, h, b.weyl[h])
        if h > 1:
            res[h] = induced(h, h // 2, b.res[h])
            tr[h] = induced(h // 2, h, b.tr[h])
    return MackeyFunctor(g=b.g, levels=levels, res=res, tr=tr, weyl=weyl)


def ses_probe(name_a: str, name_b: str, name_c: str, g: int = 4,
              coeff_bound: int = 2) -> Optional[Dict[int, Matrix]]:
    """An injection a -> b with quotient isomorphic to c, or None."""
    d = symbol_dictionary()
    a = _pick(d, name_a, g)
    b = _pick(d, name_b, g)
    c = _pick(d, name_c, g)
    want = d.canonical(g, name_c)
    homs_ab = hom_basis(a, b)
    tried = 0
    for bound in range(1, coeff_bound + 1):
        for f in _small_combos(homs_ab, a, b, bound):
            if not _is_monic(a, b, f):
                continue
            tried += 1
            q = quotient_functor(b, f, a)
            if q.is_zero():
                name = "0"
            else:
                name = classify(q)
            if name == want:
                return f
            if tried > 200:
                return None
    return None


def _pick(d: SymbolDictionary, name: str, g: int) -> MackeyFunctor:
    return d.get(name, g)


def _small_combos(basis: List[Dict[int, Matrix]], a: MackeyFunctor, b: MackeyFunctor,
                  bound: int):
    if not basis:
        return
    n = len(basis)
    if n > 6:
        basis = basis[:6]
        n = 6
    combos = sorted(itertools.product(range(-bound, bound + 1), repeat=n),
                    key=lambda cs: (max(abs(c) for c in cs),
                                    sum(abs(c) for c in cs)))
    for coeffs in combos:
        if all(c == 0 for c in coeffs):
            continue
        f: Dict[int, Matrix] = {}
        for h in a.subgroup_orders():
            na, nb = a.levels[h].ngens, b.levels[h].ngens
            mat_h = zeros(nb, na)
            for c, bas in zip(coeffs, basis):
                if c:
                    for i in range(nb):
                        for j in range(na):
                            mat_h[i][j] += c * bas[h][i][j]
            f[h] = mat_h
        yield f


def direct_sum(ms: Sequence[MackeyFunctor]) -> MackeyFunctor:
    if not ms:
        raise ValueError("empty direct sum")
    g = ms[0].g
    orders = ms[0].subgroup_orders()
    levels = {h: FgAbGroup(tuple(sum((list(m.levels[h].orders) for m in ms), [])))
              for h in orders}

    def block(mats: List[Matrix], rows: List[int], cols: List[int]) -> Matrix:
        total_r, total_c = sum(rows), sum(cols)
        out = zeros(total_r, total_c)
        ro = co = 0
        for mat, r, c in zip(mats, rows, cols):
            for i in range(r):
                for j in range(c):
                    out[ro + i][co + j] = mat[i][j]
            ro += r
            co += c
        return out

    res, tr, weyl = {}, {}, {}
    for h in orders:
        weyl[h] = GroupMap(levels[h], levels[h], block(
            [m.weyl[h].mat for m in ms],
            [m.levels[h].ngens for m in ms],
            [m.levels[h].ngens for m in ms]))
        if h > 1:
            res[h] = GroupMap(levels[h], levels[h // 2], block(
                [m.res[h].mat for m in ms],
                [m.levels[h // 2].ngens for m in ms],
                [m.levels[h].ngens for m in ms]))
            tr[h] = GroupMap(levels[h // 2], levels[h], block(
                [m.tr[h].mat for m in ms],
                [m.levels[h].ngens for m in ms],
                [m.levels[h // 2].ngens for m in ms]))
    return MackeyFunctor(g=g, levels=levels, res=res, tr=tr, weyl=weyl)
