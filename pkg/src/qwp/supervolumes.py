"""Super volume parts via the boundary recursion with a deformation series.

The super volumes form a power series  sum_m  Vhat^{(m)}_{g,n} s^m / m!
whose parts are polynomials in the squared boundary lengths, computed
by the same one-boundary recursion as the classical engine except that

* every product of sub-volumes convolves parts binomially,
      (A * B)^{(m)} = sum_{m1+m2=m} C(m, m1) A^{(m1)} B^{(m2)},
* the kernel moments are the odd, directly-defined super ones, and
* splitting factors at (0,1) and (0,2) are NOT skipped: they carry
  nonzero parts of their own.

Initial data: Vhat^{(2)}_{0,1} = 1 and Vhat^{(0)}_{1,1} = 1/8; every
key whose level 2g - 2 + n + m is non-positive vanishes (plus the two
low disk parts m = 0, 1), and everything else follows from the
recursion.  Each recursion term references only keys of strictly
smaller level, which a runtime monitor enforces.

Parts with odd m come out zero; they are computed, never assumed.
Part m is homogeneous of weight 2g - 2 + m and symmetric in the
boundary lengths.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from typing import Mapping

from .kernels import Flavor, d_integral, r_integral
from .rings import GenFamily, RingElem
from .volumes import (
    InexactDivisionError,
    LevelCycleError,
    UnstableInputError,
    VolumePoly,
    _divide_by_l1,
    classical_limit,
)


def super_weight(g: int, m: int) -> int:
    return 2 * g - 2 + m


class SuperSeries:
    """Parts m = 0..m_max of one super volume series."""

    __slots__ = ("flavor", "g", "n", "m_max", "parts")

    def __init__(self, flavor: Flavor, g: int, n: int, m_max: int, parts: Mapping[int, VolumePoly]):
        if set(parts) != set(range(m_max + 1)):
            raise ValueError("parts must cover exactly m = 0..m_max")
        for p in parts.values():
            if p.n != n or p.family is not flavor.family:
                raise ValueError("part shape mismatch")
        object.__setattr__(self, "flavor", flavor)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m_max", m_max)
        object.__setattr__(self, "parts", dict(parts))

    def __setattr__(self, name, value):
        raise AttributeError("SuperSeries is immutable")

    def part(self, m: int) -> VolumePoly:
        return self.parts[m]

    def __eq__(self, other):
        if not isinstance(other, SuperSeries):
            return NotImplemented
        return (
            self.flavor is other.flavor
            and (self.g, self.n, self.m_max) == (other.g, other.n, other.m_max)
            and self.parts == other.parts
        )

    def __repr__(self):
        shown = {m: p for m, p in sorted(self.parts.items()) if not p.is_zero()}
        return f"SuperSeries({self.flavor.value}, g={self.g}, n={self.n}, {shown!r})"


_MEMO: dict[tuple[Flavor, int, int, int], VolumePoly] = {}
_LOCK = threading.RLock()
_HALF = Fraction(1, 2)

_INITIAL = {
    (0, 1, 2): lambda fam: VolumePoly.const(fam, 1, 1),
    (1, 1, 0): lambda fam: VolumePoly.const(fam, 1, Fraction(1, 8)),
}


def _trivially_zero(g: int, n: int, m: int) -> bool:
    """Keys that vanish without recursion; consulted before any request."""
    return 2 * g - 2 + n + m <= 0 or (g, n, m) in ((0, 1, 0), (0, 1, 1))


def super_volume(flavor: Flavor, g: int, n: int, m_max: int) -> SuperSeries:
    """Parts m = 0..m_max of Vhat_{g,n}; any g >= 0, n >= 1 is allowed."""
    if not flavor.is_super:
        raise ValueError("classical flavors are handled by volume")
    if g < 0 or n < 1:
        raise UnstableInputError(f"no super volume for (g, n) = ({g}, {n})")
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    with _LOCK:
        parts = {m: _part(flavor, g, n, m, None) for m in range(m_max + 1)}
    return SuperSeries(flavor, g, n, m_max, parts)


def _part(flavor: Flavor, g: int, n: int, m: int, caller_level: int | None) -> VolumePoly:
    family = flavor.family
    if _trivially_zero(g, n, m):
        return VolumePoly.zero(family, n)
    level = 2 * g - 2 + n + m
    if caller_level is not None and level >= caller_level:
        raise LevelCycleError(
            f"super level {level} requested while assembling level {caller_level}"
        )
    key = (flavor, g, n, m)
    hit = _MEMO.get(key)
    if hit is not None:
        return hit
    initial = _INITIAL.get((g, n, m))
    if initial is not None:
        result = initial(family)
    else:
        result = _assemble(flavor, g, n, m, level)
    _MEMO[key] = result
    return result


def _assemble(flavor: Flavor, g: int, n: int, m: int, level: int) -> VolumePoly:
    raw: dict[tuple[int, ...], RingElem] = {}

    def accumulate(key: tuple, value: RingElem):
        raw[key] = raw[key] + value if key in raw else value

    # pair terms, one per boundary label j = 2..n (position pj = j-1)
    if n >= 2 and not _trivially_zero(g, n - 1, m):
        sub = _part(flavor, g, n - 1, m, level)
        for pj in range(1, n):
            rest = [p for p in range(1, n) if p != pj]
            for exps, coeff in sub.terms.items():
                for (e1, f), rc in r_integral(flavor, exps[0]).items():
                    key = [0] * n
                    key[0] = e1
                    key[pj] = f // 2
                    for pos, a in zip(rest, exps[1:]):
                        key[pos] = a
                    accumulate(tuple(key), coeff * rc)

    # splitting term, handle-removal stream
    if g >= 1 and not _trivially_zero(g - 1, n + 1, m):
        sub = _part(flavor, g - 1, n + 1, m, level)
        for exps, coeff in sub.terms.items():
            half_coeff = coeff.scale(_HALF)
            for e1, dc in d_integral(flavor, exps[0], exps[1]).coeffs.items():
                accumulate((e1,) + exps[2:], half_coeff * dc)

    # splitting term, ordered splittings with binomial part convolution
    legs = list(range(1, n))
    for mask in range(1 << len(legs)):
        I = [legs[i] for i in range(len(legs)) if mask >> i & 1]
        J = [p for p in legs if p not in I]
        n1, n2 = len(I) + 1, len(J) + 1
        for g1 in range(g + 1):
            g2 = g - g1
            for m1 in range(m + 1):
                m2 = m - m1
                if _trivially_zero(g1, n1, m1) or _trivially_zero(g2, n2, m2):
                    continue
                left = _part(flavor, g1, n1, m1, level)
                if left.is_zero():
                    continue
                right = _part(flavor, g2, n2, m2, level)
                if right.is_zero():
                    continue
                binom = Fraction(comb(m, m1), 2)
                for aexps, ac in left.terms.items():
                    for bexps, bc in right.terms.items():
                        factor = (ac * bc).scale(binom)
                        tail = [0] * (n - 1)
                        for pos, a in zip(I, aexps[1:]):
                            tail[pos - 1] = a
                        for pos, b in zip(J, bexps[1:]):
                            tail[pos - 1] = b
                        dint = d_integral(flavor, aexps[0], bexps[0])
                        for e1, dc in dint.coeffs.items():
                            accumulate((e1, *tail), factor * dc)

    return _divide_by_l1(flavor.family, n, raw)


def super_limit(series: SuperSeries) -> SuperSeries:
    """Send each odd q-zeta generator to its classical odd value, partwise."""
    if series.flavor is not Flavor.Q_SUPER:
        raise ValueError("super limit starts from the q super flavor")
    parts = {m: classical_limit(p) if not p.is_zero() else VolumePoly.zero(GenFamily.PI_SQ, series.n)
             for m, p in series.parts.items()}
    return SuperSeries(Flavor.WP_SUPER, series.g, series.n, series.m_max, parts)
