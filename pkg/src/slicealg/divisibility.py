"""Divisibility of classes in the homology of negative representation
spheres by the standard Euler and orientation divisors.

Multiplication by a divisor carried on C^W maps H_i of the dual model
of S^{-V-W} into H_{i+deg} of the tensor model computing S^{-V}.  The
probe reports surjectivity of that map level by level, and solves for
explicit quotients of distinguished target classes (the transferred
bottom classes of the negative regular spheres).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .groups import C4, RepSum, lam, sigma, zero_rep
from .intlinalg import FgAbGroup, GroupMap, from_columns, map_cokernel, matvec, shape, solve
from .spheres import (
    ChainClass,
    SphereComplex,
    build_complex,
    dual_complex,
    euler_class,
    orientation_class,
    tensor,
)


def _divisor_factors(name: str) -> List[Tuple[ChainClass, RepSum]]:
    lm, sg, sg2 = lam(C4), sigma(C4), sigma(C4, 2)
    table = {
        "a_l": [("a", lm)],
        "a_s": [("a", sg)],
        "u_l": [("u", lm)],
        "u_2s": [("u", sg2)],
        "x13": [("a", sg), ("a", lm)],
        "x44": [("a", lm), ("a", lm), ("u", sg2)],
        "y22": [("a", lm), ("u", sg)],
        "x62": [("a", lm), ("u", sg2), ("u", lm)],
        "x80": [("u", sg2), ("u", lm), ("u", lm)],
        "y40": [("u", sg), ("u", lm)],
    }
    if name not in table:
        raise ValueError(f"unsupported divisor {name}")
    out = []
    for kind, rep in table[name]:
        cls = euler_class(rep) if kind == "a" else orientation_class(rep)
        out.append((cls, rep))
    return out


DIVISOR_LEVEL = {"a_l": 4, "a_s": 4, "u_l": 4, "u_2s": 4,
                 "x13": 4, "x44": 4, "x62": 4, "x80": 4,
                 "y22": 2, "y40": 2}


@dataclass
class DegreeReport:
    degree: int
    source: str
    target: str
    onto: bool
    hit_named_target: Optional[bool] = None


def _build_model(v: RepSum, factors) -> Tuple[SphereComplex, SphereComplex, List]:
    """Dual model of S^{-V-W} and its tensor with the divisor carriers."""
    carried = zero_rep(C4)
    for _, rep in factors:
        carried = carried + rep
    src = dual_complex(build_complex(v + carried))
    cur = src
    embeds = []
    for cls, _ in factors:
        cur, idx = tensor(cur, cls.cx)
        embeds.append((idx, cls))
    return src, cur, embeds


def _push_chain(vec: List[int], deg: int, src: SphereComplex, embeds) -> Tuple[List[int], int]:
    for idx, cls in embeds:
        cvec = cls.chain_vector()
        n = deg + cls.degree
        rb = cls.cx.module(cls.degree).rank
        size = sum(sz for _, _, _, sz in idx[n].blocks)
        out = [0] * size
        off = next(off for p, q, off, _ in idx[n].blocks if p == deg)
        for a, xa in enumerate(vec):
            if xa:
                for b, yb in enumerate(cvec):
                    if yb:
                        out[off + a * rb + b] += xa * yb
        vec, deg = out, n
    return vec, deg


def multiplication_map(v: RepSum, divisor: str, power: int, i_target: int,
                       level: Optional[int] = None):
    """Matrix of multiplication by divisor^power into H_{i_target} of the
    tensor model of S^{-V}, in invariant-factor coordinates."""
    factors = _divisor_factors(divisor) * power
    level = level or DIVISOR_LEVEL[divisor]
    src, model, embeds = _build_model(v, factors)
    shift = sum(cls.degree for cls, _ in factors)
    i_src = i_target - shift
    h_src = src.homology_level(i_src, level)
    h_tgt = model.homology_level(i_target, level)
    if h_tgt.group.is_zero():
        return None
    basis = src.module(i_src).fixed_basis(level)
    cols = []
    for j in range(h_src.group.ngens):
        lift = [h_src.lift[r][j] for r in range(shape(basis)[1])]
        vec = matvec(basis, lift) if src.module(i_src).rank else []
        vec, deg = _push_chain(vec, i_src, src, embeds)
        big_basis = model.module(deg).fixed_basis(level)
        w = solve(big_basis, vec)
        if w is None:
            raise AssertionError("product chain not fixed under the level")
        cols.append(list(h_tgt.project(w)))
    mat = from_columns(cols, h_tgt.group.ngens)
    return mat, h_src, h_tgt, model


def probe(v: RepSum, divisor: str, power: int = 1,
          level: Optional[int] = None) -> Dict[int, DegreeReport]:
    """Surjectivity of divisor multiplication in every target degree."""
    level = level or DIVISOR_LEVEL[divisor]
    out: Dict[int, DegreeReport] = {}
    d = v.degree
    for i in range(-d, 1):
        data = multiplication_map(v, divisor, power, i, level)
        if data is None:
            continue
        mat, h_src, h_tgt, _ = data
        gm = GroupMap(h_src.group, h_tgt.group, mat)
        onto = map_cokernel(gm).is_zero()
        out[i] = DegreeReport(i, str(h_src.group), str(h_tgt.group), onto)
    return out


def transferred_bottom_class(model: SphereComplex, i: int, level: int = 4):
    """The transfer of the bottom-level generator of H_i, in coordinates."""
    h_e = model.homology_level(i, 1)
    if h_e.group.is_zero():
        return None
    basis_e = model.module(i).fixed_basis(1)
    lift = [h_e.lift[r][0] for r in range(shape(basis_e)[1])]
    vec = matvec(basis_e, lift)
    # transfer to the requested level: sum of gamma translates
    from .intlinalg import identity, matmul

    mod = model.module(i)
    gm = mod.gamma_matrix()
    total = list(vec)
    acc = list(vec)
    g = model.g
    reps = g // level
    for _ in range((g // 1) // reps - 1):
        acc = matvec(gm, acc)
        # accumulate translates by all coset representatives of the level
    # coset representatives of subgroup of order `level` in C_g: gamma^j for
    # j = 0..g/level - 1 acting through the quotient
    total = [0] * mod.rank
    acc = list(vec)
    for j in range(g // level):
        if j:
            acc = matvec(gm, acc)
        total = [x + y for x, y in zip(total, acc)]
    h = model.homology_level(i, level)
    basis = mod.fixed_basis(level)
    w = solve(basis, total)
    if w is None:
        return None
    return h.group.reduce(h.project(w)), h


def divisible(v: RepSum, divisor: str, power: int, i_target: int,
              target: str = "trx", level: Optional[int] = None) -> Optional[bool]:
    """Is the named class in H_{i_target} of S^{-V} divisible by divisor^power?

    target "trx": the transfer of the bottom-level generator;
    target "bottom": the bottom class itself.
    """
    level = level or DIVISOR_LEVEL[divisor]
    data = multiplication_map(v, divisor, power, i_target, level)
    if data is None:
        return None
    mat, h_src, h_tgt, model = data
    if target == "trx":
        named = transferred_bottom_class(model, i_target, level)
        if named is None:
            return None
        coords, _ = named
    else:
        coords = tuple([1] + [0] * (h_tgt.group.ngens - 1))
    aug = [row[:] for row in mat]
    # solvability of mat * q = coords modulo the target orders
    n = h_tgt.group.ngens
    for k, o in enumerate(h_tgt.group.orders):
        if o:
            col = [o if r == k else 0 for r in range(n)]
            for r in range(n):
                aug[r].append(col[r])
    return solve(aug, list(coords)) is not None
