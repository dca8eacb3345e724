"""The slice spectral sequence of kH restricted to its C2 subgroup.

At this level the E2 term is a polynomial algebra on two degree-2
classes rbar_0, rbar_1 (e level) together with the sign-representation
Euler and orientation classes (C2 level).  Every cell is recorded on
the monomial basis rbar_0^i rbar_1^{k-i}; d3 is multiplication by
(rbar_0 + rbar_1) governed by the parity of the orientation-class
exponent, and d7 is multiplication by the degree-3 coefficient
polynomial of the norm ladder.  All page turning is honest kernel /
image linear algebra over Z and F2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

Vec = Tuple[int, ...]


# ---------------------------------------------------------------------------
# F2 linear algebra on monomial coordinates


def _to_mask(row: List[int]) -> int:
    m = 0
    for i, x in enumerate(row):
        if x % 2:
            m |= 1 << i
    return m


def f2_basis_masks(rows: List[List[int]]) -> List[int]:
    """Row-echelon basis as bitmasks (lowest set bit as pivot)."""
    basis: List[int] = []
    for row in rows:
        m = _to_mask(row)
        for b in basis:
            low = b & -b
            if m & low:
                m ^= b
        if m:
            basis.append(m)
            basis.sort(key=lambda x: x & -x)
    return basis


def _reduce_mask(basis: List[int], m: int) -> int:
    for b in basis:
        low = b & -b
        if m & low:
            m ^= b
    return m


def f2_rank(rows: List[List[int]]) -> int:
    return len(f2_basis_masks(rows))


def f2_in_span(rows: List[List[int]], v: List[int]) -> bool:
    return _reduce_mask(f2_basis_masks(rows), _to_mask(v)) == 0


# ---------------------------------------------------------------------------
# cells


@dataclass
class C2Cell:
    """One bidegree of the C2-level page.

    s = 0 cells carry a free lattice on the k+1 monomials (tracked as an
    integer basis matrix); s >= 1 cells carry an F2 space presented as a
    subquotient (numerator rows / denominator rows) of the monomial basis.
    """

    s: int
    t: int
    k: int                      # rbar-degree; monomial basis rb0^i rb1^{k-i}
    m: int                      # orientation-class exponent
    num: List[List[int]]        # basis rows (Z for s=0, F2 otherwise)
    den: List[List[int]]        # denominator rows (F2 cells only)
    _dim: Optional[int] = None
    _den_basis: Optional[List[int]] = None

    @property
    def stem(self) -> int:
        return self.t - self.s

    def den_basis(self) -> List[int]:
        if self._den_basis is None:
            self._den_basis = f2_basis_masks(self.den)
        return self._den_basis

    def dim(self) -> int:
        if self._dim is None:
            if self.s == 0:
                self._dim = len(self.num)
            else:
                db = self.den_basis()
                basis = list(db)
                extra = 0
                for row in self.num:
                    m = _reduce_mask(basis, _to_mask(row))
                    if m:
                        basis.append(m)
                        basis.sort(key=lambda x: x & -x)
                        extra += 1
                self._dim = extra
        return self._dim


def _mult_by_sum(v: List[int]) -> List[int]:
    """Multiply a degree-k vector by (rb0 + rb1): degree k+1 vector."""
    k1 = len(v) + 1
    out = [0] * k1
    for i, c in enumerate(v):
        # rb0^{i} rb1^{k-i} * rb0 -> index i+1; * rb1 -> index i
        out[i + 1] += c
        out[i] += c
    return out


def _mult_by_r3(v: List[int]) -> List[int]:
    """Multiply by the degree-3 norm coefficient 5 rb0^2 rb1 + 5 rb0 rb1^2 + rb1^3."""
    k3 = len(v) + 3
    out = [0] * k3
    for i, c in enumerate(v):
        out[i + 2] += 5 * c
        out[i + 1] += 5 * c
        out[i] += c
    return out


@dataclass
class C2Page:
    r: int
    cells: Dict[Tuple[int, int], C2Cell]

    def dim(self, s: int, t: int) -> int:
        c = self.cells.get((s, t))
        return c.dim() if c else 0


@dataclass
class C2Run:
    e2: C2Page
    e4: C2Page
    einf: C2Page
    d3_ranks: Dict[Tuple[int, int], int]
    d7_ranks: Dict[Tuple[int, int], int]
    exotic_transfers: List[Tuple[int, int, int]]  # (stem, jump, rank)


def build_e2(t_max: int) -> C2Page:
    cells: Dict[Tuple[int, int], C2Cell] = {}
    for k in range(0, t_max // 2 + 1):
        t = 2 * k
        basis = [[1 if i == j else 0 for j in range(k + 1)] for i in range(k + 1)]
        for s in range(0, k + 1):
            if (k - s) % 2:
                continue
            m = (k - s) // 2
            if s == 0:
                if k % 2 == 0:
                    cells[(s, t)] = C2Cell(s, t, k, m, basis, [])
                # odd k: no C2-level classes on the 0-line
            else:
                cells[(s, t)] = C2Cell(s, t, k, m, [row[:] for row in basis], [])
    return cells_page(2, cells)


def cells_page(r: int, cells: Dict[Tuple[int, int], C2Cell]) -> C2Page:
    return C2Page(r=r, cells={k: v for k, v in cells.items() if v.dim() > 0})


def turn_d3(page: C2Page) -> Tuple[C2Page, Dict[Tuple[int, int], int]]:
    """Apply d3(x) = m * (rb0+rb1) x and take kernels/cokernels."""
    cells = page.cells
    new: Dict[Tuple[int, int], C2Cell] = {}
    ranks: Dict[Tuple[int, int], int] = {}
    for (s, t), c in cells.items():
        tgt = cells.get((s + 3, t + 2))
        has_d3 = (c.m % 2 == 1) and tgt is not None
        if s == 0:
            if has_d3:
                # kernel of Z^{k+1} -> F2-target: image is injective mod 2,
                # so the kernel is twice the lattice
                num = [[2 * x for x in row] for row in c.num]
                ranks[(s, t)] = len(c.num)
            else:
                num = [row[:] for row in c.num]
            new[(s, t)] = C2Cell(s, t, c.k, c.m, num, [])
        else:
            if has_d3:
                # multiplication by (rb0+rb1) is injective on F2[rb0, rb1]:
                # the whole cell dies as a source
                ranks[(s, t)] = c.dim()
                continue
            # cokernel of the incoming d3
            den = [row[:] for row in c.den]
            src = cells.get((s - 3, t - 2))
            if src is not None and src.m % 2 == 1:
                for row in src.num:
                    den.append([x % 2 for x in _mult_by_sum(row)])
            new[(s, t)] = C2Cell(s, t, c.k, c.m, c.num, den)
    return cells_page(4, new), ranks


def turn_d7(page: C2Page) -> Tuple[C2Page, Dict[Tuple[int, int], int]]:
    """d7 on classes whose orientation exponent is 2 mod 4."""
    cells = page.cells
    new: Dict[Tuple[int, int], C2Cell] = {}
    ranks: Dict[Tuple[int, int], int] = {}
    for (s, t), c in cells.items():
        tgt = cells.get((s + 7, t + 6))
        supports = (c.m % 4 == 2) and tgt is not None
        if s == 0:
            if supports:
                # kernel of v -> [r3 * v] in the one-dimensional target
                kept = []
                for row in c.num:
                    img = _mult_by_r3(row)
                    if _dies_in(tgt, img):
                        kept.append(row)
                if len(kept) < len(c.num):
                    # add suitable combinations: kernel of a rank<=1 functional
                    kept = _lattice_kernel_of_functional(c.num, tgt)
                    ranks[(s, t)] = 1
                new[(s, t)] = C2Cell(s, t, c.k, c.m, kept or c.num, [])
            else:
                new[(s, t)] = c
        else:
            if supports:
                # quotient dimension of the image inside the target
                img_rows = [_mult_by_r3(row) for row in c.num]
                rk = _image_rank(tgt, img_rows)
                ranks[(s, t)] = rk
                # kernel of the induced map survives
                kern = _f2_kernel_rows(c, tgt)
                if kern:
                    new[(s, t)] = C2Cell(s, t, c.k, c.m, kern, c.den)
                continue
            # possibly a target: quotient by the incoming image
            src = cells.get((s - 7, t - 6))
            den = [row[:] for row in c.den]
            if src is not None and src.m % 4 == 2:
                for row in src.num:
                    den.append([x % 2 for x in _mult_by_r3(row)])
            new[(s, t)] = C2Cell(s, t, c.k, c.m, c.num, den)
    return cells_page(8, new), ranks


def _dies_in(tgt: C2Cell, img: List[int]) -> bool:
    return _reduce_mask(tgt.den_basis(), _to_mask(img)) == 0


def _image_rank(tgt: C2Cell, img_rows: List[List[int]]) -> int:
    basis = list(tgt.den_basis())
    rk = 0
    for r in img_rows:
        m = _reduce_mask(basis, _to_mask(r))
        if m:
            basis.append(m)
            basis.sort(key=lambda x: x & -x)
            rk += 1
    return rk


def _f2_kernel_rows(src: C2Cell, tgt: C2Cell) -> List[List[int]]:
    """Rows spanning the kernel of multiplication from src (mod den) into tgt."""
    kern: List[List[int]] = []
    kern_basis: List[int] = []
    alive: List[List[int]] = []
    for row in src.num:
        if _dies_in(tgt, _mult_by_r3(row)):
            m = _reduce_mask(kern_basis, _to_mask(row))
            if m:
                kern.append(row)
                kern_basis.append(m)
                kern_basis.sort(key=lambda x: x & -x)
        else:
            alive.append(row)
    # pairwise sums of surviving rows can still die in the target
    for i in range(len(alive)):
        for j in range(i + 1, len(alive)):
            v = [(a + b) % 2 for a, b in zip(alive[i], alive[j])]
            if any(v) and _dies_in(tgt, _mult_by_r3(v)):
                m = _reduce_mask(kern_basis, _to_mask(v))
                if m:
                    kern.append(v)
                    kern_basis.append(m)
                    kern_basis.sort(key=lambda x: x & -x)
    return kern


def _lattice_kernel_of_functional(num: List[List[int]], tgt: C2Cell) -> List[List[int]]:
    """Kernel sublattice of v -> class of r3*v (a rank-one mod-2 functional)."""
    vals = []
    for row in num:
        img = [x % 2 for x in _mult_by_r3(row)]
        vals.append(0 if f2_in_span(tgt.den, img) else 1)
    kept = [row for row, v in zip(num, vals) if v == 0]
    first = next((i for i, v in enumerate(vals) if v), None)
    if first is not None:
        for i, v in enumerate(vals):
            if v and i != first:
                kept.append([a + b for a, b in zip(num[i], num[first])])
        kept.append([2 * x for x in num[first]])
    return kept


def run_c2(t_max: int = 80) -> C2Run:
    e2 = build_e2(t_max)
    e4, d3_ranks = turn_d3(e2)
    einf, d7_ranks = turn_d7(e4)
    exotic = []
    # jump-2 transfers (maximal rank) into filtration 2, jump-6 (rank 1) into 6
    for (s, t), c in einf.cells.items():
        if s == 2 and c.m % 2 == 0:
            exotic.append((c.stem, 2, c.dim()))
        if s == 6 and c.m % 4 == 0:
            exotic.append((c.stem, 6, c.dim()))
    return C2Run(e2=e2, e4=e4, einf=einf, d3_ranks=d3_ranks,
                 d7_ranks=d7_ranks, exotic_transfers=sorted(exotic))


# ---------------------------------------------------------------------------
# the published case table and permanent-cycle counts


def expected_e2_dim(s: int, t: int) -> int:
    """C2-level rank of the E2 cell per the case table."""
    if t % 2 or s < 0 or t < 0:
        return 0
    k = t // 2
    if s == 0:
        if t % 4 == 0:
            return k + 1  # Box + (t/4) tilde-Box
        return 0
    if s > k or (k - s) % 2:
        return 0
    return k + 1


def verify_c2(stem_max: int = 32) -> List[str]:
    failures: List[str] = []
    t_max = 2 * stem_max + 40
    run = run_c2(t_max)

    # E2 case table of the theorem
    for t in range(0, 2 * stem_max + 2, 2):
        for s in range(0, t // 2 + 1):
            want = expected_e2_dim(s, t)
            got = run.e2.dim(s, t)
            if want != got:
                failures.append(f"E2^({s},{t}) rank {got}, expected {want}")
    # case table shape: (0,4l): 1+2l, (2u,4l+4u): 1+2(u+l), (2u-1,4l+4u-2): 2(u+l)
    for l in range(0, (stem_max // 4) + 1):
        if run.e2.dim(0, 4 * l) != 1 + 2 * l:
            failures.append(f"(0,{4*l}) rank != {1+2*l}")
        for u in range(1, 6):
            if run.e2.dim(2 * u, 4 * l + 4 * u) != 1 + 2 * (u + l):
                failures.append(f"(2u,4l+4u) rank mismatch at u={u}, l={l}")
            if run.e2.dim(2 * u - 1, 4 * l + 4 * u - 2) != 2 * (u + l):
                failures.append(f"(2u-1,...) rank mismatch at u={u}, l={l}")

    # every d3 has maximal rank with cokernel of rank exactly 1
    for (s, t), rk in run.d3_ranks.items():
        src_dim = run.e2.dim(s, t)
        if s > 0 and rk != src_dim:
            failures.append(f"d3 at ({s},{t}) not injective on the cell")
        tgt = run.e2.dim(s + 3, t + 2)
        if s > 0 and tgt and tgt - rk != 1:
            failures.append(f"d3 cokernel at ({s+3},{t+2}) has rank {tgt - rk}")
    # every d7 has rank exactly 1
    for pos, rk in run.d7_ranks.items():
        if rk != 1:
            failures.append(f"d7 at {pos} has rank {rk}")

    # permanent cycle counts (stems 0..stem_max)
    for i in range(0, stem_max // 8 + 1):
        stem0 = 8 * i
        # s=0 at t=8i: 4i+1 elements of infinite order
        if stem0 <= stem_max and run.einf.dim(0, 8 * i) != 4 * i + 1:
            failures.append(f"0-line count at stem {stem0}: "
                            f"{run.einf.dim(0, 8*i)} != {4*i+1}")
        # s=1 at t=8i+2: 4i+2 (i even) or 4i+1 (i odd)
        want1 = 4 * i + 2 if i % 2 == 0 else 4 * i + 1
        if 8 * i + 1 <= stem_max and run.einf.dim(1, 8 * i + 2) != want1:
            failures.append(f"s=1 count at stem {8*i+1}: "
                            f"{run.einf.dim(1, 8*i+2)} != {want1}")
        # s=2 at t=8i+4: 4i+3 (i even) or 4i+2 (i odd)
        want2 = 4 * i + 3 if i % 2 == 0 else 4 * i + 2
        if 8 * i + 2 <= stem_max and run.einf.dim(2, 8 * i + 4) != want2:
            failures.append(f"s=2 count at stem {8*i+2}: "
                            f"{run.einf.dim(2, 8*i+4)} != {want2}")
        # s=3..6 at t=8i+2s for i even: single elements eta_0^s delta^{2i}
        for s in range(3, 7):
            want = 1 if i % 2 == 0 else 0
            if 8 * i + s <= stem_max and run.einf.dim(s, 8 * i + 2 * s) != want:
                failures.append(f"s={s} count at stem {8*i+s}: "
                                f"{run.einf.dim(s, 8*i+2*s)} != {want}")
        # 0-line at t=8i+4: 4i+3 doubled classes, all transfers
        if 8 * i + 4 <= 2 * stem_max and run.einf.dim(0, 8 * i + 4) != 4 * i + 3:
            failures.append(f"0-line count at t={8*i+4} wrong")
    # nothing above filtration 6
    for (s, t), c in run.einf.cells.items():
        if s > 6 and c.stem <= stem_max:
            failures.append(f"class above filtration 6 at ({s},{t})")
    return failures
