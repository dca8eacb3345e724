"""Cyclic 2-groups, integral group-ring elements, and real representations.

A representation of C_{2^k} is stored as multiplicities of the trivial
representation, the sign representation sigma, and the rotation planes
lambda_j = lambda(2^j) for 0 <= j <= k-2 (the rotation of order 2^{k-j}).
lambda(m) is normalized to lambda_{v_2(m)}; the rotation by pi equals
2*sigma and is folded into the sign multiplicity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, List, Tuple


@dataclass(frozen=True)
class CyclicGroup:
    order: int

    def __post_init__(self):
        if self.order < 1 or self.order & (self.order - 1):
            raise ValueError("order must be a power of two")

    @property
    def k(self) -> int:
        return self.order.bit_length() - 1

    def subgroup_orders(self) -> List[int]:
        return [1 << i for i in range(self.k + 1)]

    def index2_subgroup(self) -> int:
        if self.order == 1:
            raise ValueError("trivial group has no index 2 subgroup")
        return self.order // 2

    def __str__(self) -> str:
        return f"C{self.order}"


C2 = CyclicGroup(2)
C4 = CyclicGroup(4)
C8 = CyclicGroup(8)


class GroupRingElt:
    """Element of Z[C_g] as a coefficient vector indexed by powers of gamma."""

    __slots__ = ("g", "coeffs")

    def __init__(self, g: int, coeffs):
        self.g = g
        c = list(coeffs)
        if len(c) != g:
            raise ValueError("coefficient vector length must equal |G|")
        self.coeffs = c

    @classmethod
    def zero(cls, g: int) -> "GroupRingElt":
        return cls(g, [0] * g)

    @classmethod
    def one(cls, g: int) -> "GroupRingElt":
        return cls(g, [1] + [0] * (g - 1))

    @classmethod
    def gamma(cls, g: int, power: int = 1) -> "GroupRingElt":
        c = [0] * g
        c[power % g] = 1
        return cls(g, c)

    @classmethod
    def zeta(cls, g: int, j: int) -> "GroupRingElt":
        """zeta_j = sum of gamma^t for 0 <= t < 2^j."""
        if not (0 <= (1 << j) <= g):
            raise ValueError("zeta index out of range")
        c = [1 if t < (1 << j) else 0 for t in range(g)]
        return cls(g, c)

    @classmethod
    def gamma_i(cls, g: int, i: int) -> "GroupRingElt":
        """1 - (-1)^i gamma."""
        c = [0] * g
        c[0] = 1
        c[1 % g] += 1 if i % 2 else -1
        return cls(g, c)

    @classmethod
    def mu_i(cls, g: int, i: int) -> "GroupRingElt":
        """(1 - (-1)^i gamma)(1 + gamma^2)."""
        return cls.gamma_i(g, i) * (cls.one(g) + cls.gamma(g, 2))

    def __add__(self, other: "GroupRingElt") -> "GroupRingElt":
        return GroupRingElt(self.g, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "GroupRingElt") -> "GroupRingElt":
        return GroupRingElt(self.g, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "GroupRingElt":
        return GroupRingElt(self.g, [-a for a in self.coeffs])

    def __mul__(self, other) -> "GroupRingElt":
        if isinstance(other, int):
            return GroupRingElt(self.g, [other * a for a in self.coeffs])
        out = [0] * self.g
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % self.g] += a * b
        return GroupRingElt(self.g, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElt) and self.g == other.g and self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    def exact_divide(self, other: "GroupRingElt") -> "GroupRingElt":
        """q with q*other == self, when one exists (used for the x_n recursion)."""
        g = self.g
        # try monomial and zeta-quotient shapes first, then a small search
        for cand in _division_candidates(g):
            if (cand * other) == self:
                return cand
        raise ArithmeticError("no exact quotient found in Z[G]")

    def __repr__(self) -> str:
        terms = []
        for i, a in enumerate(self.coeffs):
            if a:
                t = "1" if i == 0 else ("g" if i == 1 else f"g^{i}")
                terms.append(f"{a}*{t}")
        return " + ".join(terms) if terms else "0"


def _division_candidates(g: int):
    cands = [GroupRingElt.one(g)]
    k = g.bit_length() - 1
    for j in range(k + 1):
        cands.append(GroupRingElt.zeta(g, j))
    # quotients zeta_j / zeta_i = sum_{t < 2^{j-i}} gamma^{t 2^i}
    for j in range(k + 1):
        for i in range(j):
            c = [0] * g
            for t in range(1 << (j - i)):
                c[(t << i) % g] += 1
            cands.append(GroupRingElt(g, c))
    return cands


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class RepSum:
    """a*1 + b*sigma + sum_j c[j]*lambda_j on C_{2^k}; virtual values allowed."""

    group: CyclicGroup
    a: int
    b: int
    c: Tuple[int, ...]

    def __post_init__(self):
        want = max(self.group.k - 1, 0)
        if len(self.c) != want:
            raise ValueError(f"need {want} lambda multiplicities for {self.group}")

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other: "RepSum") -> "RepSum":
        self._same(other)
        return RepSum(self.group, self.a + other.a, self.b + other.b,
                      tuple(x + y for x, y in zip(self.c, other.c)))

    def __sub__(self, other: "RepSum") -> "RepSum":
        self._same(other)
        return RepSum(self.group, self.a - other.a, self.b - other.b,
                      tuple(x - y for x, y in zip(self.c, other.c)))

    def __neg__(self) -> "RepSum":
        return RepSum(self.group, -self.a, -self.b, tuple(-x for x in self.c))

    def __mul__(self, n: int) -> "RepSum":
        return RepSum(self.group, n * self.a, n * self.b, tuple(n * x for x in self.c))

    __rmul__ = __mul__

    def _same(self, other: "RepSum"):
        if self.group != other.group:
            raise ValueError("representations of different groups")

    # -- queries -------------------------------------------------------------
    @property
    def degree(self) -> int:
        return self.a + self.b + 2 * sum(self.c)

    def is_actual(self) -> bool:
        return self.a >= 0 and self.b >= 0 and all(x >= 0 for x in self.c)

    def is_trivial_free(self) -> bool:
        return self.a == 0

    def nontrivial_part(self) -> "RepSum":
        return RepSum(self.group, 0, self.b, self.c)

    def positive_part(self) -> "RepSum":
        return RepSum(self.group, max(self.a, 0), max(self.b, 0),
                      tuple(max(x, 0) for x in self.c))

    def negative_part(self) -> "RepSum":
        return RepSum(self.group, max(-self.a, 0), max(-self.b, 0),
                      tuple(max(-x, 0) for x in self.c))

    def isotropy_order(self) -> int:
        """Order of the largest subgroup fixing all of V (actual V only)."""
        if not self.is_actual():
            raise ValueError("isotropy is defined for actual representations")
        g = self.group.order
        h = g
        if self.b > 0:
            h = min(h, g // 2)
        for j, cj in enumerate(self.c):
            if cj > 0:
                h = min(h, 1 << j)
        return h

    def oriented(self) -> bool:
        if not self.is_actual():
            raise ValueError("orientation is defined for actual representations")
        return self.b % 2 == 0

    def restrict(self, sub_order: int) -> "RepSum":
        """Restriction to the subgroup of the given order."""
        g = self.group.order
        if sub_order > g or g % sub_order:
            raise ValueError("not a subgroup order")
        sub = CyclicGroup(sub_order)
        m = sub.k
        a, b = self.a, 0
        c = [0] * max(m - 1, 0)
        if sub_order == g:
            return self
        # sigma restricts trivially to proper subgroups
        a += self.b
        for j, cj in enumerate(self.c):
            if cj == 0:
                continue
            if j <= m - 2:
                c[j] += cj
            elif j == m - 1:
                b += 2 * cj
            else:
                a += 2 * cj
        return RepSum(sub, a, b, tuple(c))

    def __str__(self) -> str:
        terms = []
        if self.a:
            terms.append(f"{self.a}")
        if self.b:
            terms.append(f"{self.b}s" if self.b != 1 else "s")
        for j, cj in enumerate(self.c):
            if cj:
                sym = "l" if j == 0 else f"l{j}"
                terms.append(f"{cj}{sym}" if cj != 1 else sym)
        return " + ".join(terms) if terms else "0"


def zero_rep(group: CyclicGroup) -> RepSum:
    return RepSum(group, 0, 0, tuple([0] * max(group.k - 1, 0)))


def trivial(group: CyclicGroup, n: int = 1) -> RepSum:
    return RepSum(group, n, 0, tuple([0] * max(group.k - 1, 0)))


def sigma(group: CyclicGroup, n: int = 1) -> RepSum:
    return RepSum(group, 0, n, tuple([0] * max(group.k - 1, 0)))


def lam(group: CyclicGroup, j: int = 0, n: int = 1) -> RepSum:
    k = group.k
    if (1 << j) >= group.order // 2:
        if (1 << j) == group.order // 2:
            return sigma(group, 2 * n)
        raise ValueError(f"lambda_{j} is not a representation of {group}")
    c = [0] * max(k - 1, 0)
    c[j] = n
    return RepSum(group, 0, 0, tuple(c))


def regular(group: CyclicGroup, n: int = 1) -> RepSum:
    """n copies of the regular representation."""
    g = group.order
    v = trivial(group, n)
    if g >= 2:
        v = v + sigma(group, n)
    for j in range(max(group.k - 1, 0)):
        # lambda_j appears 2^{k-1-j-1}... regular rep contains each lambda(m) once,
        # and lambda(m) ~ lambda_{v2(m)}: count m in (0, g/2) with v2(m) = j.
        count = sum(1 for m in range(1, g // 2) if _v2(m) == j)
        if count:
            v = v + lam(group, j, n * count)
    return v


def _v2(m: int) -> int:
    v = 0
    while m % 2 == 0:
        m //= 2
        v += 1
    return v


_TERM_RE = re.compile(r"^([+-]?\d*)\s*(r|s|l\d*|1)?$")


def parse_rep(text: str, group: CyclicGroup) -> RepSum:
    """Parse expressions like "2r", "s + l", "3s - 2l", "l1 - 4", "0"."""
    s = text.strip()
    if not s:
        raise ValueError("empty representation expression")
    s = s.replace("-", "+-")
    out = zero_rep(group)
    for chunk in s.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        m = _TERM_RE.match(chunk.replace(" ", ""))
        if not m:
            raise ValueError(f"bad token {chunk!r}")
        coeff_s, sym = m.groups()
        if coeff_s in ("", "+", "-"):
            coeff = -1 if coeff_s == "-" else 1
            if sym is None:
                raise ValueError(f"bad token {chunk!r}")
        else:
            coeff = int(coeff_s)
        if sym is None or sym == "1":
            out = out + trivial(group, coeff)
        elif sym == "s":
            out = out + sigma(group, coeff)
        elif sym == "r":
            out = out + regular(group, coeff)
        elif sym.startswith("l"):
            j = int(sym[1:]) if len(sym) > 1 else 0
            if (1 << j) > group.order // 2:
                raise ValueError(f"lambda_{j} rejected on {group}")
            out = out + lam(group, j, coeff)
        else:  # pragma: no cover
            raise ValueError(f"bad token {chunk!r}")
    return out


def rep_meta(v: RepSum, group: CyclicGroup) -> Dict[str, object]:
    """Degree, isotropy, orientation and restrictions of an actual rep."""
    if v.group != group:
        raise ValueError("representation belongs to a different group")
    if not v.is_actual():
        raise ValueError("virtual representation: no isotropy/orientation")
    res = {}
    for h in group.subgroup_orders():
        if h != group.order:
            res[h] = v.restrict(h)
    return {
        "degree": v.degree,
        "isotropy": v.isotropy_order(),
        "oriented": v.oriented(),
        "restrictions": res,
    }
