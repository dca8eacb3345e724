"""Truncated multivariate Poincare series for spectral sequence pages.

Series live in Z[x, y^{+-1}, z, t] truncated by the total degree in
(x, z, t); the y exponent is a Laurent window.  The rank of a page in
trigraded position (s, i + j sigma) at a given 2-divisibility is the
coefficient of x^{i-s} y^j z^s t^d.  A copy of Z contributes the
geometric t-series, a copy of Z/2^e contributes 1 + t + ... + t^{e-1}.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, List, Tuple

Mono = Tuple[int, int, int, int]  # exponents of (x, y, z, t)


def default_truncation() -> int:
    return int(os.environ.get("SLICE_TRUNC_DEGREE", "40"))


def _weight(m: Mono) -> int:
    return m[0] + m[2] + m[3]


@dataclass
class TruncSeries:
    n: int
    coeffs: Dict[Mono, int]

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "TruncSeries":
        return cls(n, {})

    @classmethod
    def one(cls, n: int) -> "TruncSeries":
        return cls(n, {(0, 0, 0, 0): 1})

    @classmethod
    def monomial(cls, n: int, x=0, y=0, z=0, t=0, c=1) -> "TruncSeries":
        m = (x, y, z, t)
        if _weight(m) > n or abs(y) > 8 * n:
            return cls.zero(n)
        return cls(n, {m: c})

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0) + c
            if not out[m]:
                del out[m]
        return TruncSeries(self.n, out)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + other.scale(-1)

    def scale(self, c: int) -> "TruncSeries":
        return TruncSeries(self.n, {m: c * v for m, v in self.coeffs.items()})

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        out: Dict[Mono, int] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])
                if _weight(m) > self.n or abs(m[1]) > 8 * self.n:
                    continue
                out[m] = out.get(m, 0) + c1 * c2
                if not out[m]:
                    del out[m]
        return TruncSeries(self.n, out)

    def geometric(self) -> "TruncSeries":
        """1/(1 - self); every monomial of self must have positive weight."""
        for m in self.coeffs:
            if _weight(m) <= 0:
                raise ValueError("geometric series needs positive-weight monomials")
        out = TruncSeries.one(self.n)
        power = TruncSeries.one(self.n)
        while True:
            power = power * self
            if not power.coeffs:
                break
            out = out + power
        return out

    def __pow__(self, e: int) -> "TruncSeries":
        out = TruncSeries.one(self.n)
        for _ in range(e):
            out = out * self
        return out

    def coefficient(self, x: int, y: int, z: int) -> List[int]:
        """The t-polynomial at the (x, y, z) monomial, as coefficient list."""
        out: Dict[int, int] = {}
        for (ex, ey, ez, et), c in self.coeffs.items():
            if (ex, ey, ez) == (x, y, z):
                out[et] = out.get(et, 0) + c
        if not out:
            return []
        top = max(out)
        return [out.get(i, 0) for i in range(top + 1)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.coeffs == other.coeffs


# ---------------------------------------------------------------------------
# generators


def gens(n: int):
    """a = y^{-1} z, u = x^2 y^{-1}, r = x y, t."""
    a = TruncSeries.monomial(n, y=-1, z=1)
    u = TruncSeries.monomial(n, x=2, y=-1)
    r = TruncSeries.monomial(n, x=1, y=1)
    t = TruncSeries.monomial(n, t=1)
    one = TruncSeries.one(n)
    return a, u, r, t, one


def inv1m(m: TruncSeries) -> TruncSeries:
    return m.geometric()


# ---------------------------------------------------------------------------
# the displayed identities for the C2 real K-theory page counts


def kr_e2_gg(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    return (inv1m(t) + a * inv1m(a)) * inv1m(u) * inv1m(r)


def kr_e4_gg_subtracted(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    return kr_e2_gg(n) - (u + r * a * a * a) * inv1m(a) * inv1m(u * u) * inv1m(r)


def kr_e4_gg_closed(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    return ((one + t * u) * inv1m(t) * inv1m(u * u) * inv1m(r)
            + (a + a * a) * inv1m(u * u) * inv1m(r)
            + a * a * a * inv1m(a) * inv1m(u * u))


def kr_e4_gg_intermediate(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    return ((one + u - u * (one - t)) * inv1m(t) * inv1m(u * u) * inv1m(r)
            + (a * (one + u) - a * (u + a * a * r)) * inv1m(a) * inv1m(u * u) * inv1m(r))


def kr_e2_gg_primed(n: int) -> TruncSeries:
    """After adjoining rbar^{-1} u: the u variable becomes w = x y^{-3}."""
    a, _, r, t, one = gens(n)
    w = TruncSeries.monomial(n, x=1, y=-3)
    return (inv1m(t) + a * inv1m(a)) * inv1m(w) * inv1m(r)


def kr_e4_gg_primed_subtracted(n: int) -> TruncSeries:
    a, _, r, t, one = gens(n)
    w = TruncSeries.monomial(n, x=1, y=-3)
    return kr_e2_gg_primed(n) - (w + a * a * a) * inv1m(a) * inv1m(w * w) * inv1m(r)


def kr_e4_gg_primed_closed(n: int) -> TruncSeries:
    a, _, r, t, one = gens(n)
    w = TruncSeries.monomial(n, x=1, y=-3)
    return ((one + t * w) * inv1m(t) * inv1m(w * w) * inv1m(r)
            + (a + a * a) * inv1m(w * w) * inv1m(r))


# ---------------------------------------------------------------------------
# the C2-restriction of kH: two rbar generators, so (1-r)^2 in denominators


def c2kh_e2(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    return (inv1m(t) + a * inv1m(a)) * inv1m(u) * inv1m(r) * inv1m(r)


def c2kh_e4_subtracted(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    return c2kh_e2(n) - (u + r * a * a * a) * inv1m(a) * inv1m(u * u) * inv1m(r) * inv1m(r)


def c2kh_e4_closed(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    return ((one + t * u) * inv1m(t) * inv1m(u * u) * inv1m(r) * inv1m(r)
            + (a + a * a) * inv1m(u * u) * inv1m(r) * inv1m(r)
            + a * a * a * inv1m(a) * inv1m(u * u) * inv1m(r))


def c2kh_e8_subtracted(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    return (c2kh_e4_closed(n)
            - (u * u + r * r * r * a ** 7) * inv1m(a) * inv1m(u ** 4) * inv1m(r))


def c2kh_e8_closed(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    u2, u4 = u * u, u ** 4
    return ((one + t * u + (t + r - t * r) * u2 + t * u2 * u) * inv1m(t)
            * inv1m(u4) * inv1m(r) * inv1m(r)
            + (a + a * a) * (one + u2 * r) * inv1m(u4) * inv1m(r) * inv1m(r)
            + (a ** 3 + a ** 4 + a ** 5 + a ** 6) * inv1m(u4) * inv1m(r)
            + a ** 7 * (one + r + r * r) * inv1m(a) * inv1m(u4))


def c2kh_e2_primed(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    w = TruncSeries.monomial(n, x=1, y=-7)
    return c2kh_e4_factor_primed(n, c2kh_e2(n))


def c2kh_e4_factor_primed(n: int, base: TruncSeries) -> TruncSeries:
    a, u, r, t, one = gens(n)
    w = TruncSeries.monomial(n, x=1, y=-7)
    return (one - u * u) * inv1m(w) * base


def c2kh_e8_primed_subtracted(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    w = TruncSeries.monomial(n, x=1, y=-7)
    e4p = c2kh_e4_factor_primed(n, c2kh_e4_closed(n))
    return e4p - (w + a ** 7) * inv1m(a) * inv1m(w * w) * inv1m(r)


def c2kh_e8_primed_closed(n: int) -> TruncSeries:
    a, u, r, t, one = gens(n)
    w = TruncSeries.monomial(n, x=1, y=-7)
    return ((one + t * u + (t + r - t * r) * w + t * w * u) * inv1m(t)
            * inv1m(w * w) * inv1m(r) * inv1m(r)
            + (a + a * a) * (one + r * w) * inv1m(w * w) * inv1m(r) * inv1m(r)
            + (a ** 3 + a ** 4 + a ** 5 + a ** 6) * inv1m(w * w) * inv1m(r))


# ---------------------------------------------------------------------------
# verification


def verify_poincare(n: int = 0) -> List[str]:
    n = n or default_truncation()
    failures = []
    checks = [
        ("kR E4 rearrangement", kr_e4_gg_subtracted(n), kr_e4_gg_closed(n)),
        ("kR E4 intermediate form", kr_e4_gg_intermediate(n), kr_e4_gg_closed(n)),
        ("kR' E4 rearrangement", kr_e4_gg_primed_subtracted(n),
         kr_e4_gg_primed_closed(n)),
        ("C2-kH E8 rearrangement", c2kh_e8_subtracted(n), c2kh_e8_closed(n)),
        ("C2-kH' E8 rearrangement", c2kh_e8_primed_subtracted(n),
         c2kh_e8_primed_closed(n)),
    ]
    for name, lhs, rhs in checks:
        if lhs != rhs:
            diff = lhs - rhs
            sample = sorted(diff.coeffs.items())[:4]
            failures.append(f"{name}: differs, e.g. {sample}")
    # the unit coefficient of every E2 series is 1
    for name, sfun in (("kR", kr_e2_gg), ("C2-kH", c2kh_e2)):
        if sfun(n).coefficient(0, 0, 0)[:1] != [1]:
            failures.append(f"{name} E2 unit coefficient wrong")
    # the third KR term has nonzero filtration >= 3 content (connective variant)
    a, u, r, t, one = gens(n)
    third = a ** 3 * inv1m(a) * inv1m(u * u)
    if not any(m[2] >= 3 and c for m, c in third.coeffs.items()):
        failures.append("kR high-filtration term vanished")
    # ... while the primed (periodic) closed form has nothing above z^2
    for m, c in kr_e4_gg_primed_closed(n).coeffs.items():
        if c and m[2] > 2:
            failures.append("periodic form has filtration > 2 content")
            break
    for m, c in c2kh_e8_primed_closed(n).coeffs.items():
        if c and m[2] > 6:
            failures.append("periodic C2-kH form has filtration > 6 content")
            break
    return failures


# ---------------------------------------------------------------------------
# cross-checks against the engines


def group_t_poly(orders: Tuple[int, ...], n: int, shifts: Dict[int, int] = None) -> List[int]:
    """t-polynomial of an abelian group: Z -> 1/(1-t), Z/2^e -> 1+...+t^{e-1}."""
    out = [0] * (n + 1)
    for idx, o in enumerate(orders):
        if o == 0:
            start = (shifts or {}).get(idx, 0)
            for i in range(start, n + 1):
                out[i] += 1
        else:
            e = o.bit_length() - 1
            if (1 << e) != o:
                raise ValueError("non-2-power torsion in a slice cell")
            for i in range(min(e, n + 1)):
                out[i] += 1
    while out and out[-1] == 0:
        out.pop()
    return out


def crosscheck_kr_e2(samples: List[Tuple[int, int, int]], n: int = 0) -> List[str]:
    """Compare g(E2(G/G)) coefficients with chain-computed cell groups.

    A sample (X, Y, s) means the coefficient of x^X y^Y z^s.  Monomials
    a^s u^kappa rbar^mu land there when 2*kappa + mu = X and
    mu - kappa - s = Y; the corresponding E2 cell is the part of the
    homotopy of HZ in degree kappa(2 - 2 sigma) - s sigma, i.e.
    H_{2 kappa} of a model of S^{(2 kappa + s) sigma} at the top level.
    """
    from .groups import C2, sigma as sigma_rep
    from .spheres import sphere_model

    n = n or default_truncation()
    series = kr_e2_gg(n)
    failures = []
    for (x_exp, y_exp, s) in samples:
        if (x_exp - y_exp - s) % 3:
            failures.append(f"sample {(x_exp, y_exp, s)} hits no monomial lattice point")
            continue
        kappa = (x_exp - y_exp - s) // 3
        mu = x_exp - 2 * kappa
        if mu < 0:
            failures.append(f"sample {(x_exp, y_exp, s)} has negative slice degree")
            continue
        v = sigma_rep(C2, 2 * kappa + s)
        cx = sphere_model(v)
        sq = cx.homology_level(2 * kappa, 2)
        want = series.coefficient(x_exp, y_exp, s)
        got = group_t_poly(sq.group.orders, n)
        d_max = max(n - x_exp - s, 0)
        want = (want + [0] * (n + 1))[: d_max + 1]
        got = (got + [0] * (n + 1))[: d_max + 1]
        if want != got:
            failures.append(
                f"E2 sample {(x_exp, y_exp, s)}: engine {sq.group} vs series {want[:6]}")
    return failures


def kr_e2_samples() -> List[Tuple[int, int, int]]:
    """Twenty sample positions inside the polynomial range of the page."""
    out = []
    # torsion-free monomials u^k r^m (s = 0)
    for kappa, mu in [(0, 0), (0, 1), (1, 0), (1, 2), (2, 1), (0, 4), (3, 0)]:
        out.append((2 * kappa + mu, mu - kappa, 0))
    # a-towers a^s u^k r^m
    for s, kappa, mu in [(1, 0, 0), (2, 0, 1), (3, 1, 0), (1, 1, 1), (4, 0, 2),
                         (2, 2, 0), (5, 0, 0), (1, 2, 2), (6, 1, 1), (2, 1, 3),
                         (3, 0, 3), (7, 0, 1), (1, 3, 0)]:
        out.append((2 * kappa + mu, mu - kappa - s, s))
    return out
