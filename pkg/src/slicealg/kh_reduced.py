"""The reduced slice spectral sequence of kH / KH above the fourth page.

The induced slice summands whose indices differ by at least two carry
only permanent cycles and split off; what remains is small enough to
track cell by cell.  First-quadrant classes at the top level are
monomials

    a_sigma^i  a_lambda^j  u_{2 sigma}^k  u_lambda^l  (norm generator)^p

subject to the gold relation and the Euler-class torsion; classes at
the middle level are restricted monomials in the C2 chart.  The rule
ledger applies, in order:

  page 5:  the Leibniz differential generated by
           d5(u_{2s}) = as^3 al Nr  and  d5([ul^2]) = as al^2 ul Nr
  page 7:  the C2-chart d7 on middle-level classes (orientation
           exponent 2 mod 4), and the top-level d7 hitting the
           eta^7-transfer classes (from the order-two group extension
           on the Hopf class)
  page 11: the transfer classes of the eta^{4k+3} towers in the stems
           where their middle level supports an exotic transfer
  page 13: d13(f1^e x4^m D^{2n}) = f1^{e-1} x4^{m+4} D^{2n-2}

Every death is emitted as a paired record and audited: a cell part may
disappear only as the source or the target of an emitted differential.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

Mon = Tuple[int, int, int, int, int]  # (i, j, k, l, p)


def mon_pos(m: Mon) -> Tuple[int, int]:
    i, j, k, l, p = m
    return (i + 2 * j, 4 * p)


def mon_stem(m: Mon) -> int:
    s, t = mon_pos(m)
    return t - s


def normalize(coeff: int, m: Mon) -> Tuple[int, Mon]:
    """Gold relation toward small a_sigma exponent, then torsion reduction."""
    i, j, k, l, p = m
    while i >= 2 and l >= 1:
        i -= 2
        j += 1
        k += 1
        l -= 1
        coeff *= 2
    if i > 0:
        coeff %= 2
    elif j > 0:
        coeff %= 4
    if min(i, j, k, l, p) < 0:
        coeff = 0
    return coeff, (i, j, k, l, p)


def c2_restriction(m: Mon) -> Optional[Tuple[int, int, int, int]]:
    """Middle-level image (a2 power, u power, r0 exp, r1 exp); None if killed."""
    i, j, k, l, p = m
    if i > 0:
        return None
    return (2 * j, l, p, p)


# ---------------------------------------------------------------------------
# reduced cells


@dataclass
class Part:
    """One generator of a cell at one level."""

    level: int          # 4 (top), 2 (middle), 1 (bottom)
    label: str
    order: int          # 0 = free
    mult: int = 1       # surviving index (e.g. 2 or 4 on a halved lattice)
    fate: str = "alive"  # alive | source@r | target@r
    partner: str = ""
    mon: Optional[Mon] = None
    c2_upower: Optional[int] = None  # middle-level orientation exponent


@dataclass
class RCell:
    s: int
    t: int
    kind: str
    parts: List[Part]

    @property
    def stem(self) -> int:
        return self.t - self.s

    def alive(self, level: Optional[int] = None) -> List[Part]:
        return [p for p in self.parts
                if p.fate == "alive" and (level is None or p.level == level)]


def mon_str(m: Mon, mult: int = 1) -> str:
    i, j, k, l, p = m
    parts = []
    if i:
        parts.append(f"as^{i}" if i > 1 else "as")
    if j:
        parts.append(f"al^{j}" if j > 1 else "al")
    if k:
        parts.append(f"u2s^{k}" if k > 1 else "u2s")
    if l:
        parts.append(f"ul^{l}" if l > 1 else "ul")
    if p:
        parts.append(f"Nr^{p}" if p > 1 else "Nr")
    body = "*".join(parts) if parts else "1"
    return f"[{mult}*{body}]" if mult > 1 else body


def build_reduced_cells(stem_max: int, s_cap: int) -> Dict[Tuple[int, int], RCell]:
    """First-quadrant reduced E4 cells with stem <= stem_max, s <= s_cap."""
    cells: Dict[Tuple[int, int], RCell] = {}

    def add(s, t, kind, parts):
        if t - s < 0 or t - s > stem_max or s > s_cap:
            return
        cells[(s, t)] = RCell(s, t, kind, parts)

    t_cap = stem_max + s_cap + 16
    # diagonal summands with even index
    for ell in range(0, t_cap // 8 + 1):
        t = 8 * ell
        mon: Mon = (0, 0, ell, 2 * ell, 2 * ell)
        add(0, t, "box0", [
            Part(4, mon_str(mon), 0, mon=mon),
            Part(2, f"delta^{2 * ell}", 0, c2_upower=2 * ell),
            Part(1, f"z^{ell}", 0),
        ])
        for j in range(1, 2 * ell + 1):
            m2: Mon = (0, j, ell, 2 * ell - j, 2 * ell)
            if j % 2 == 0:
                add(2 * j, t, "circ", [
                    Part(4, mon_str(m2), 4, mon=m2),
                    Part(2, f"res({mon_str(m2)})", 2,
                         c2_upower=2 * ell - j),
                ])
            else:
                add(2 * j, t, "bullet2", [
                    Part(4, mon_str(m2, 2), 2, mult=2, mon=m2)])
        for k in range(1, ell + 1):
            m3: Mon = (2 * k, 2 * ell, ell - k, 0, 2 * ell)
            add(2 * k + 4 * ell, t, "bulletC", [Part(4, mon_str(m3), 2, mon=m3)])
    # diagonal summands with odd index
    for ell in range(0, t_cap // 8 + 1):
        t = 8 * ell + 4
        add(0, t, "odbox0", [
            Part(2, f"[2*delta^{2 * ell + 1}]", 0, mult=2,
                 c2_upower=2 * ell + 1),
            Part(1, f"z-odd^{ell}", 0),
        ])
        for j in range(1, 2 * ell + 2):
            if j % 2 == 1:
                add(2 * j, t, "obullE", [
                    Part(2, f"us^{2*ell+1}res(al^{j}ul^{2*ell+1-j}Nr^{2*ell+1})",
                         2, c2_upower=2 * ell + 1 - j)])
        for j in range(0, 2 * ell + 2):
            m4: Mon = (1, j, ell, 2 * ell + 1 - j, 2 * ell + 1)
            add(2 * j + 1, t, "bulletF", [Part(4, mon_str(m4), 2, mon=m4)])
        for k in range(1, ell + 1):
            m5: Mon = (2 * k + 1, 2 * ell + 1, ell - k, 0, 2 * ell + 1)
            add(2 * k + 4 * ell + 3, t, "bulletF", [Part(4, mon_str(m5), 2, mon=m5)])
    # adjacent induced summands (m, m+1)
    for mm in range(0, t_cap // 4 + 1):
        t = 4 * mm + 2
        if mm % 2 == 0:
            ell = mm // 2
            add(0, t, "hatobox0", [Part(1, f"r1*z^{mm}", 0),
                                   Part(1, f"g(r1*z^{mm})", 0)])
            add(1, t, "hatbullet1", [
                Part(4, f"tr(eta*delta^{2*ell})", 2),
                Part(2, f"eta0*delta^{2*ell}", 2, c2_upower=2 * ell),
                Part(2, f"eta1*delta^{2*ell}", 2, c2_upower=2 * ell),
            ])
            for k in range(1, ell + 1):
                add(4 * k + 1, t, "obull2", [
                    Part(2, f"eta0^{4*k+1}delta^{2*ell-2*k}", 2,
                         c2_upower=2 * (ell - k))])
        else:
            ell = (mm - 1) // 2
            add(0, t, "hatobox0", [Part(1, f"r1*z-odd^{mm}", 0),
                                   Part(1, f"g(r1*z-odd^{mm})", 0)])
            for k in range(0, ell + 1):
                add(4 * k + 3, t, "JJ4", [
                    Part(4, f"tr(eta0^{4*k+3}delta^{2*ell-2*k})", 2),
                    Part(2, f"eta0^{4*k+3}delta^{2*ell-2*k}", 2,
                         c2_upower=2 * (ell - k)),
                ])
    # the retained eta^2 towers of the distant summands (full hat-bullets)
    for ell in range(0, t_cap // 8 + 1):
        t = 8 * ell + 4
        eta_parts = [
            Part(4, f"tr(eta0^2*delta^{2*ell})", 2),
            Part(2, f"eta0^2*delta^{2*ell}", 2, c2_upower=2 * ell),
            Part(2, f"eta0*eta1*delta^{2*ell}", 2, c2_upower=2 * ell),
        ]
        if (2, t) in cells:
            cells[(2, t)].parts.extend(eta_parts)
        else:
            add(2, t, "eta2", eta_parts)
    return cells


# ---------------------------------------------------------------------------
# the rule ledger


@dataclass
class DiffRecord:
    r: int
    source: Tuple[int, int]
    target: Tuple[int, int]
    source_label: str
    target_label: str
    rule: str


@dataclass
class ExoticRecord:
    kind: str   # transfer | restriction | additive
    stem: int
    jump: int
    source_label: str
    target_label: str


def _x4_delta_form(m: Mon) -> Optional[Tuple[int, int]]:
    """(a, L) with monomial = x4^a delta^L, if of that shape."""
    i, j, k, l, p = m
    if i != 0 or l % 2:
        return None
    L = l // 2
    a = j - 2 * 0
    # x4^a delta^L = (0, 2a, a+L, 2L, 2a+2L): solve
    if l != 2 * L:
        return None
    a2 = j
    if a2 % 2:
        return None
    a = a2 // 2
    if k != a + L or p != 2 * a + 2 * L:
        return None
    return (a, L)


def _f1_form(m: Mon) -> Optional[Tuple[int, int, int]]:
    """(epsilon, mm, n) with monomial = f1^epsilon x4^mm delta^{2n} (eps=1)."""
    i, j, k, l, p = m
    if i != 1:
        return None
    if l % 4 != 0:
        return None
    n = l // 4
    mm2 = j - 1
    if mm2 % 2:
        return None
    mm = mm2 // 2
    if k != mm + 2 * n or p != 1 + 2 * mm + 4 * n:
        return None
    return (1, mm, n)


def _f1sq_form(m: Mon, mult: int) -> Optional[Tuple[int, int, int]]:
    """(2, mm, n) when [2 * m] is the gold image of f1^2 x4^mm delta^{2n}."""
    if mult != 2:
        return None
    i, j, k, l, p = m
    if i != 0 or (l + 1) % 4:
        return None
    n = (l + 1) // 4
    if n < 1:
        return None
    mm2 = j - 3
    if mm2 % 2 or mm2 < 0:
        return None
    mm = mm2 // 2
    if k != mm + 2 * n + 1 or p != 2 + 2 * mm + 4 * n:
        return None
    return (2, mm, n)


class ReducedRun:
    """Runs the rule ledger; survivors are trustworthy for s <= s_trust."""

    def __init__(self, stem_max: int = 48, s_cap: int = 72, s_trust: int = 24):
        self.stem_max = stem_max
        self.s_cap = s_cap
        self.s_trust = s_trust
        self.cells = build_reduced_cells(stem_max, s_cap)
        self.diffs: List[DiffRecord] = []
        self.exotics: List[ExoticRecord] = []
        self.audit: List[str] = []
        self._run()

    def _edge(self, tpos: Tuple[int, int]) -> bool:
        """Target position outside the built region (high-filtration edge)."""
        return tpos[0] > self.s_cap or tpos[1] - tpos[0] > self.stem_max

    def survivors(self, stem: int) -> List[Tuple[int, Part]]:
        return [(cell.s, p) for pos, cell in sorted(self.cells.items())
                if cell.stem == stem and cell.s <= self.s_trust
                for p in cell.alive()]

    def band_audit(self, stem_lo: int, stem_hi: int) -> List[str]:
        """Nothing may survive between the trust line and the edge zone."""
        bad = []
        for pos, cell in sorted(self.cells.items()):
            if not (stem_lo <= cell.stem <= stem_hi):
                continue
            if self.s_trust < cell.s <= self.s_cap - 14:
                for p in cell.alive():
                    bad.append(f"{pos}: {p.label}")
        return bad

    # -- helpers -------------------------------------------------------------
    def _find_top(self, pos: Tuple[int, int], mon: Mon, mult: int = 1) -> Optional[Part]:
        cell = self.cells.get(pos)
        if not cell:
            return None
        for p in cell.alive(4):
            if p.mon == mon and p.mult == mult:
                return p
        return None

    def _find_top_by_mon(self, pos: Tuple[int, int], mon: Mon) -> Optional[Part]:
        cell = self.cells.get(pos)
        if not cell:
            return None
        for p in cell.alive(4):
            if p.mon == mon:
                return p
        return None

    def _kill(self, r, spos, sp: Part, tpos, tp: Part, rule: str):
        sp.fate = f"source@{r}"
        tp.fate = f"target@{r}"
        sp.partner = tp.label
        tp.partner = sp.label
        self.diffs.append(DiffRecord(r, spos, tpos, sp.label, tp.label, rule))

    # -- page 5 ---------------------------------------------------------------
    def _d5_value(self, m: Mon) -> Tuple[int, Mon]:
        i, j, k, l, p = m
        total: Dict[Mon, int] = {}
        if k:
            c, mm = normalize(k, (i + 3, j + 1, k - 1, l, p + 1))
            if c:
                total[mm] = total.get(mm, 0) + c
        if l // 2:
            c, mm = normalize(l // 2, (i + 1, j + 2, k, l - 1, p + 1))
            if c:
                total[mm] = total.get(mm, 0) + c
        total = {mm: c for mm, c in total.items() if c}
        if not total:
            return 0, m
        if len(total) > 1:
            raise AssertionError(f"d5 of {m} not monomial: {total}")
        mm, c = next(iter(total.items()))
        return c, mm

    def _page5(self):
        for pos in sorted(self.cells):
            cell = self.cells[pos]
            for part in cell.alive(4):
                if part.mon is None or part.mult != 1:
                    continue
                c, target = self._d5_value(part.mon)
                if not c:
                    continue
                tpos = (pos[0] + 5, pos[1] + 4)
                if c % 2 == 0 and c % 4:
                    # the value is twice a generator: either the generator of a
                    # doubled bullet cell, or twice the generator of a circ cell
                    tp = self._find_top(tpos, target, mult=2)
                    if tp is not None:
                        self._kill(5, pos, part, tpos, tp, "d5-leibniz-2x")
                        continue
                    tp = self._find_top(tpos, target, mult=1)
                    if tp is None or tp.order != 4:
                        if self._edge(tpos):
                            part.fate = "source@5-edge"
                            continue
                        raise AssertionError(
                            f"d5 2x-target missing for {part.label} -> "
                            f"{mon_str(target)} at {tpos}")
                    part.fate = "source@5"
                    part.partner = f"2*{tp.label}"
                    self.diffs.append(DiffRecord(5, pos, tpos, part.label,
                                                 f"2*{tp.label}", "d5-leibniz-2x"))
                    tp.order = 2
                    tp.label = f"{tp.label} mod 2"
                    continue
                tp = self._find_top_by_mon(tpos, target)
                if tp is None:
                    if self._edge(tpos):
                        part.fate = "source@5-edge"
                        continue
                    raise AssertionError(
                        f"d5 target missing: {part.label} at {pos} -> "
                        f"{mon_str(target)} at {tpos}")
                if part.order == 4:
                    # Z/4 source onto a Z/2 target: [2x] survives, renamed
                    part.fate = "source@5"
                    part.partner = tp.label
                    tp.fate = "target@5"
                    tp.partner = part.label
                    self.diffs.append(DiffRecord(5, pos, tpos, part.label,
                                                 tp.label, "d5-leibniz"))
                    cell.parts.append(Part(4, mon_str(part.mon, 2), 2, mult=2,
                                           mon=part.mon))
                elif part.order == 0:
                    part.fate = "source@5"
                    part.partner = tp.label
                    tp.fate = "target@5"
                    tp.partner = part.label
                    self.diffs.append(DiffRecord(5, pos, tpos, part.label,
                                                 tp.label, "d5-leibniz"))
                    cell.parts.append(Part(4, mon_str(part.mon, 2), 0, mult=2,
                                           mon=part.mon))
                else:
                    self._kill(5, pos, part, tpos, tp, "d5-leibniz")

    # -- page 7 ---------------------------------------------------------------
    def _page7(self):
        # middle level: the C2-chart d7 has rank one on each cell; it kills
        # one generator with orientation exponent 2 mod 4, the remaining
        # combinations survive (the listed permanent sums)
        for pos in sorted(self.cells):
            cell = self.cells[pos]
            firing = [p for p in cell.alive(2)
                      if p.c2_upower is not None and p.c2_upower % 4 == 2
                      and p.mult == 1]
            if firing:
                tpos = (pos[0] + 7, pos[1] + 6)
                tcell = self.cells.get(tpos)
                tp = None
                if tcell:
                    cands = [q for q in tcell.alive(2)
                             if q.c2_upower is not None and q.c2_upower % 4 == 0]
                    tp = cands[0] if cands else None
                if tp is None:
                    if not self._edge(tpos):
                        raise AssertionError(
                            f"middle d7 target missing for {firing[0].label} at {pos}")
                    for p in firing:
                        p.fate = "source@7-edge"
                else:
                    lead = firing[0]
                    if lead.order == 0:
                        # free lattice: the kernel is twice the lattice
                        lead.fate = "source@7"
                        lead.partner = tp.label
                        tp.fate = "target@7"
                        tp.partner = lead.label
                        self.diffs.append(DiffRecord(7, pos, tpos, lead.label,
                                                     tp.label, "d7-c2-chart"))
                        cell.parts.append(Part(2, f"[2*{lead.label}]", 0,
                                               mult=2 * lead.mult,
                                               c2_upower=lead.c2_upower))
                    else:
                        self._kill(7, pos, lead, tpos, tp, "d7-c2-chart")
                    for extra in firing[1:]:
                        extra.label = f"{extra.label}+{firing[0].label}"
                        extra.c2_upower = 0  # a permanent kernel combination
            # top level: x4^a delta^L monomials via the eta^7 трансфер targets
            for part in cell.alive(4):
                fires, reason = self._top_d7_fires(part)
                if not fires:
                    continue
                a, L = _x4_delta_form(part.mon)
                tpos = (pos[0] + 7, pos[1] + 6)
                tcell = self.cells.get(tpos)
                tp = None
                if tcell:
                    for q in tcell.alive(4):
                        if q.mon is None and q.label.startswith("tr(eta0^"):
                            tp = q
                            break
                if tp is None:
                    if not self._edge(tpos):
                        raise AssertionError(
                            f"top d7 target missing for {part.label} at {pos}")
                    part.fate = "source@7-edge"
                    continue
                if part.order in (0, 4):
                    # the kernel of index two survives as the doubled class
                    part.fate = "source@7"
                    part.partner = tp.label
                    tp.fate = "target@7"
                    tp.partner = part.label
                    self.diffs.append(DiffRecord(7, pos, tpos, part.label,
                                                 tp.label, reason))
                    left_order = 0 if part.order == 0 else 2
                    cell.parts.append(Part(4, mon_str(part.mon, 2 * part.mult),
                                           left_order, mult=2 * part.mult,
                                           mon=part.mon))
                else:
                    self._kill(7, pos, part, tpos, tp, reason)

    def _top_d7_fires(self, part: Part) -> Tuple[bool, str]:
        if part.mon is None:
            return False, ""
        form = _x4_delta_form(part.mon)
        if form is None:
            return False, ""
        a, L = form
        if part.mult == 2:
            if L % 2 == 1:
                return True, "d7-transfer-head"
            return False, ""
        if part.mult == 1:
            lp = L - 2 * (a % 2)
            if L >= 1 and lp % 4 == 2:
                return True, "d7-two-torsion-extension"
        return False, ""

    # -- page 11 ----------------------------------------------------------------
    def _page11(self):
        for pos in sorted(self.cells):
            cell = self.cells[pos]
            if cell.kind != "JJ4":
                continue
            s, t = pos
            stem = t - s
            if (stem - s - 8) % 16 or s % 4 != 3:
                continue
            k16 = (stem - s - 8) // 16
            if (4 * k16 + s) % 8 != 3:
                continue
            for part in cell.alive(4):
                tpos = (s + 11, t + 10)
                ell2 = (s + 5) // 4
                want = _mon_mul(_mon_pow(F1, 2), _x4_delta_mon(ell2, 2 * k16))
                c, wantn = normalize(1, want)
                mult = 2 if c == 2 else 1
                tp = self._find_top(tpos, wantn, mult=mult)
                if tp is None:
                    if not self._edge(tpos):
                        raise AssertionError(
                            f"d11 target missing at {tpos} for {part.label}")
                    part.fate = "source@11-edge"
                    continue
                self._kill(11, pos, part, tpos, tp, "d11-exotic-transfer")

    # -- page 13 ----------------------------------------------------------------
    def _page13(self):
        for pos in sorted(self.cells):
            cell = self.cells[pos]
            for part in cell.alive(4):
                if part.mon is None:
                    continue
                form = _f1_form(part.mon) if part.mult == 1 else \
                    _f1sq_form(part.mon, part.mult)
                if form is None:
                    continue
                eps, mm, n = form
                if n < 1 or (mm + n) % 2 == 0 or mm < 1 - eps:
                    continue
                tpos = (pos[0] + 13, pos[1] + 12)
                tcell = self.cells.get(tpos)
                tp = None
                if tcell:
                    if eps == 1:
                        want = _x4_delta_mon(mm + 4, 2 * (n - 1))
                        tp = self._find_top_by_mon(tpos, want)
                    else:
                        want = _mon_mul(F1, _x4_delta_mon(mm + 4, 2 * (n - 1)))
                        tp = self._find_top_by_mon(tpos, want)
                if tp is None:
                    if not self._edge(tpos):
                        raise AssertionError(
                            f"d13 target missing for {part.label} at {pos}")
                    part.fate = "source@13-edge"
                    continue
                self._kill(13, pos, part, tpos, tp, "d13-norm")

    def _run(self):
        self._page5()
        self._page7()
        self._page11()
        self._page13()


F1: Mon = (1, 1, 0, 0, 1)


def _x4_delta_mon(a: int, L: int) -> Mon:
    return (0, 2 * a, a + L, 2 * L, 2 * a + 2 * L)


def _mon_mul(m1: Mon, m2: Mon) -> Mon:
    return tuple(x + y for x, y in zip(m1, m2))  # type: ignore


def _mon_pow(m: Mon, e: int) -> Mon:
    return tuple(e * x for x in m)  # type: ignore
