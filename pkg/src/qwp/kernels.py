"""Kernel moment polynomials feeding the volume recursions.

Each flavor owns a stream of ring coefficients b_n obtained from a
Schur-like expansion of its kernel generating series,

    exp( sum_{m >= 1} p_m t^m / m ) = sum_{k >= 0} s_k(p_1, ..., p_k) t^k,

with p_m the flavor's 2m-th zeta-like generator and t = C z^2 (C = 4
for the classical flavors, C = 16 for the super ones), so

    b_n = C^n * s_n(p_1, ..., p_n).

From the stream come the odd kernel moments

    F_{2k+1}(y)    = (2k+1)! sum_{n=0}^{k+1} b_n y^{2k+2-2n} / (2k+2-2n)!
    Fhat_{2k+1}(y) = (2k+1)! sum_{n=0}^{k}  b_n y^{2k+1-2n} / (2k+1-2n)!

(classical: even, leading coefficient 1/(2k+2); super: odd, monic).
The recursion consumes them through two integral transforms: the pair
kernel, reduced to (F(x+y) + F(x-y))/2, and the splitting kernel,
reduced to a single F with a factorial ratio.  Classical flavors define
both through the x-derivative of the kernel, so they carry one more
antiderivative in the first length; super flavors use them directly.
"""

from __future__ import annotations

import enum
import threading
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Mapping, Sequence

from .rings import GenFamily, RingElem, zeta_even, zeta_odd_even


class Flavor(enum.Enum):
    Q_CLASSICAL = "q"
    WP_CLASSICAL = "wp"
    Q_SUPER = "qsuper"
    WP_SUPER = "wpsuper"

    @property
    def is_super(self) -> bool:
        return self in (Flavor.Q_SUPER, Flavor.WP_SUPER)

    @property
    def family(self) -> GenFamily:
        return _FAMILY[self]

    @property
    def stream_scale(self) -> int:
        return 16 if self.is_super else 4

    def generator(self, k: int) -> RingElem:
        """The flavor's 2k-th power-sum value as a ring element."""
        if k < 1:
            raise ValueError("generator index must be >= 1")
        if self is Flavor.Q_CLASSICAL:
            return RingElem.gen(GenFamily.Q_ZETA, k)
        if self is Flavor.Q_SUPER:
            return RingElem.gen(GenFamily.Q_ZETA_ODD, k)
        if self is Flavor.WP_CLASSICAL:
            return zeta_even(k)
        return zeta_odd_even(k)

    @property
    def classical_target(self) -> "Flavor":
        """WP flavor reached by sending each generator to its limit value."""
        if self is Flavor.Q_CLASSICAL:
            return Flavor.WP_CLASSICAL
        if self is Flavor.Q_SUPER:
            return Flavor.WP_SUPER
        raise ValueError(f"{self.value} is already a limit flavor")


_FAMILY = {
    Flavor.Q_CLASSICAL: GenFamily.Q_ZETA,
    Flavor.Q_SUPER: GenFamily.Q_ZETA_ODD,
    Flavor.WP_CLASSICAL: GenFamily.PI_SQ,
    Flavor.WP_SUPER: GenFamily.PI_SQ,
}


def schur_s(k: int, p: Callable[[int], object] | Sequence):
    """Coefficient of t^k in exp(sum_m p(m) t^m / m).

    ``p`` maps m = 1, 2, ... to values in any commutative ring over Q
    (rationals or RingElems).  Uses k s_k = sum_{m<=k} p_m s_{k-m};
    returns the integer 1 for k = 0.  Every s_k has all-positive
    rational coefficients as a polynomial in the p_m, which is what
    makes truncation budgets in the verifier monotone.
    """
    if k < 0:
        raise ValueError("schur_s index must be >= 0")
    if k == 0:
        return 1
    if not callable(p):
        seq = p
        p = lambda m: seq[m - 1]
    s = [1, p(1)]
    for j in range(2, k + 1):
        acc = p(j)
        for m in range(1, j):
            acc = acc + p(m) * s[j - m]
        s.append(acc / j)
    return s[k]


class BStream:
    """Lazily extended, lock-protected b_n sequence for one flavor."""

    def __init__(self, flavor: Flavor):
        self.flavor = flavor
        self._s: list[RingElem] = [RingElem.one(flavor.family)]
        self._lock = threading.Lock()

    def get(self, n: int) -> RingElem:
        if n < 0:
            raise ValueError("stream index must be >= 0")
        with self._lock:
            while len(self._s) <= n:
                j = len(self._s)
                acc = self.flavor.generator(j)
                for m in range(1, j):
                    acc = acc + self.flavor.generator(m) * self._s[j - m]
                self._s.append(acc / j)
        return self._s[n].scale(Fraction(self.flavor.stream_scale) ** n)


_STREAMS = {flavor: BStream(flavor) for flavor in Flavor}


def b_stream(flavor: Flavor, n: int) -> RingElem:
    return _STREAMS[flavor].get(n)


def b_stream_from_series(flavor: Flavor, n: int) -> RingElem:
    """WP streams the other way: reciprocal power series in z^2.

    The classical stream is the coefficient sequence of
    2 pi z / sin(2 pi z) and the super one of 1 / cos(2 pi z); both
    reciprocals are computed directly from the sine and cosine series,
    independently of the Schur-recurrence path.
    """
    if flavor is Flavor.WP_CLASSICAL:
        # sin(2 pi z)/(2 pi z): z^{2j} coefficient (-4 pi^2)^j / (2j+1)!
        series = lambda j: Fraction(-4, 1) ** j / factorial(2 * j + 1)
    elif flavor is Flavor.WP_SUPER:
        # cos(2 pi z): z^{2j} coefficient (-4 pi^2)^j / (2j)!
        series = lambda j: Fraction(-4, 1) ** j / factorial(2 * j)
    else:
        raise ValueError("series form exists only for the WP flavors")
    if n < 0:
        raise ValueError("stream index must be >= 0")
    a = [
        RingElem(GenFamily.PI_SQ, {(((1, j),) if j else ()): series(j)})
        for j in range(n + 1)
    ]
    b = [RingElem.one(GenFamily.PI_SQ)]
    for m in range(1, n + 1):
        acc = RingElem.zero(GenFamily.PI_SQ)
        for i in range(1, m + 1):
            acc = acc + a[i] * b[m - i]
        b.append(-acc)
    return b[n]


class UniPoly:
    """Univariate polynomial with RingElem coefficients, sparse form."""

    __slots__ = ("family", "coeffs")

    def __init__(self, family: GenFamily, coeffs: Mapping[int, RingElem]):
        clean: dict[int, RingElem] = {}
        for e, c in coeffs.items():
            if e < 0:
                raise ValueError("negative exponent")
            if isinstance(c, (int, Fraction)):
                c = RingElem.const(family, c)
            if c.family is not family:
                raise ValueError("coefficient family mismatch")
            if not c.is_zero():
                clean[e] = c
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def zero(cls, family: GenFamily) -> "UniPoly":
        return cls(family, {})

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def parity(self) -> str:
        """'even', 'odd', 'mixed', or 'zero'."""
        if not self.coeffs:
            return "zero"
        rem = {e % 2 for e in self.coeffs}
        if rem == {0}:
            return "even"
        if rem == {1}:
            return "odd"
        return "mixed"

    def __add__(self, other: "UniPoly") -> "UniPoly":
        if not isinstance(other, UniPoly):
            return NotImplemented
        coeffs = dict(self.coeffs)
        for e, c in other.coeffs.items():
            coeffs[e] = coeffs[e] + c if e in coeffs else c
        return UniPoly(self.family, coeffs)

    def scale(self, value) -> "UniPoly":
        return UniPoly(self.family, {e: c.scale(value) for e, c in self.coeffs.items()})

    def map_coeffs(self, fn, family: GenFamily | None = None) -> "UniPoly":
        return UniPoly(family or self.family, {e: fn(c) for e, c in self.coeffs.items()})

    def antiderivative(self) -> "UniPoly":
        """Antiderivative vanishing at 0."""
        return UniPoly(
            self.family, {e + 1: c / (e + 1) for e, c in self.coeffs.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.family is other.family and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.family, tuple(sorted(self.coeffs.items()))))

    def __repr__(self):
        if not self.coeffs:
            return "UniPoly(0)"
        parts = [f"({c.text()})*y^{e}" for e, c in sorted(self.coeffs.items(), reverse=True)]
        return "UniPoly(" + " + ".join(parts) + ")"


@lru_cache(maxsize=None)
def f_poly(flavor: Flavor, k: int) -> UniPoly:
    """The odd kernel moment F_{2k+1} (even poly) or Fhat_{2k+1} (odd)."""
    if k < 0:
        raise ValueError("moment index must be >= 0")
    fact = factorial(2 * k + 1)
    coeffs: dict[int, RingElem] = {}
    top = k if flavor.is_super else k + 1
    base_deg = 2 * k + 1 if flavor.is_super else 2 * k + 2
    for n in range(top + 1):
        e = base_deg - 2 * n
        coeffs[e] = b_stream(flavor, n).scale(Fraction(fact, factorial(e)))
    return UniPoly(flavor.family, coeffs)


@lru_cache(maxsize=None)
def _r_integral_items(flavor: Flavor, k: int):
    expanded: dict[tuple[int, int], RingElem] = {}
    for d, c in f_poly(flavor, k).coeffs.items():
        # (1/2)[F(t+y) + F(t-y)]: odd powers of y cancel
        for i in range(0, d + 1, 2):
            key = (d - i, i)
            term = c.scale(comb(d, i))
            expanded[key] = expanded[key] + term if key in expanded else term
    if not flavor.is_super:
        expanded = {
            (e1 + 1, e2): c / (e1 + 1) for (e1, e2), c in expanded.items()
        }
    return tuple(sorted(expanded.items()))


def r_integral(flavor: Flavor, k: int) -> dict[tuple[int, int], RingElem]:
    """Pair-kernel moment as a polynomial in (L1, Lj).

    Super flavors: (Fhat_{2k+1}(L1+Lj) + Fhat_{2k+1}(L1-Lj)) / 2.
    Classical flavors: the same combination of F_{2k+1} integrated from
    0 to L1 in the first argument.  In both cases the result is odd in
    L1 and even in Lj.
    """
    return dict(_r_integral_items(flavor, k))


@lru_cache(maxsize=None)
def d_integral(flavor: Flavor, i: int, j: int) -> UniPoly:
    """Splitting-kernel moment in L1 for leg exponents (2i+1, 2j+1).

    The double moment collapses to F_{2i+2j+3} times
    (2i+1)!(2j+1)!/(2i+2j+3)!, integrated once more from 0 to L1 for
    the classical flavors.  Symmetric in i and j.
    """
    if i < 0 or j < 0:
        raise ValueError("leg indices must be >= 0")
    ratio = Fraction(factorial(2 * i + 1) * factorial(2 * j + 1), factorial(2 * i + 2 * j + 3))
    poly = f_poly(flavor, i + j + 1)
    if not flavor.is_super:
        poly = poly.antiderivative()
    return poly.scale(ratio)


def v11_poly(flavor: Flavor) -> UniPoly:
    """One-boundary, genus-one volume: (1/(2L)) (1/4) int_0^L F_1.

    Classical flavors only; the division by L is exact because the
    antiderivative of the even F_1 is odd.
    """
    if flavor.is_super:
        raise ValueError("the one-boundary base case is classical only")
    anti = f_poly(flavor, 0).antiderivative()
    assert anti.parity() == "odd"
    return UniPoly(
        flavor.family, {e - 1: c.scale(Fraction(1, 8)) for e, c in anti.coeffs.items()}
    )
