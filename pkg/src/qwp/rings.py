"""Exact coefficient rings for the volume polynomials.

Volume coefficients live in one of three polynomial rings over the
rationals, kept in expanded normal form:

* family ``q_zeta``     -- generators zeta_q(2), zeta_q(4), ... indexed
  by k = 1, 2, ... (generator k stands for zeta_q(2k));
* family ``q_zeta_odd`` -- the odd-m analogues zetahat_q(2k);
* family ``pi_sq``      -- the single generator pi^2 (index 1), the
  target ring of the classical limits.

An element is a finite sum  sum_M  c_M * M  with c_M rational and M a
monomial in the generators.  Generator k carries grading weight 2k, so
pi^2 has weight 2 and zeta_q(2k) has weight 2k; this is the grading in
which the volume polynomials are homogeneous.

Numeric evaluation replaces each q-family generator by the partial sum
of its defining series

    zeta_q(2k)    = sum_{m >= 1} q^{mk} / (1 - q^m)^{2k}
    zetahat_q(2k) = the same sum restricted to odd m

truncated after ``n_terms`` summands, giving an exact rational.  Both
series have positive terms, so evaluation is monotone in ``n_terms``.
"""

from __future__ import annotations

import enum
import sys
import threading
from fractions import Fraction
from math import comb, factorial
from typing import Mapping

Rat = Fraction

#: Sentinel returned by RingElem.weight() for mixed-weight elements.
INHOMOGENEOUS = object()


class FamilyError(ValueError):
    """Mixing ring families, or an operation unsupported for a family."""


class GenFamily(enum.Enum):
    Q_ZETA = "q_zeta"
    Q_ZETA_ODD = "q_zeta_odd"
    PI_SQ = "pi_sq"


# Monomials are tuples of (generator_index, exponent) pairs sorted by
# index, exponents >= 1; the empty tuple is the constant monomial.
Monomial = tuple


def _as_rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected a rational, got {type(value).__name__}")


def rat_str(value: Fraction) -> str:
    """Canonical string for a rational: 'p' or 'p/q' in lowest terms.

    Exact report values can exceed CPython's default guard on int->str
    conversion, so the guard is raised once here.
    """
    if sys.get_int_max_str_digits() < 2_000_000:
        sys.set_int_max_str_digits(2_000_000)
    return str(_as_rat(value))


def rat_parse(text: str) -> Fraction:
    """Parse 'p/q', integer, decimal, or scientific notation exactly."""
    return Fraction(text.strip())


class RingElem:
    """Immutable element of one of the coefficient rings.

    ``terms`` maps monomials to nonzero rational coefficients.  All
    arithmetic stays inside a single family; use :meth:`substitute` to
    move between families.
    """

    __slots__ = ("family", "terms", "_hash")

    def __init__(self, family: GenFamily, terms: Mapping[Monomial, Fraction]):
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in terms.items():
            coeff = _as_rat(coeff)
            if not coeff:
                continue
            mono = tuple(sorted(mono))
            if any(e < 1 for _, e in mono):
                raise ValueError(f"bad monomial {mono!r}")
            if family is GenFamily.PI_SQ and any(k != 1 for k, _ in mono):
                raise FamilyError("pi_sq has a single generator, index 1")
            clean[mono] = clean.get(mono, Fraction(0)) + coeff
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "terms", {m: c for m, c in clean.items() if c})
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("RingElem is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, family: GenFamily) -> "RingElem":
        return cls(family, {})

    @classmethod
    def const(cls, family: GenFamily, value) -> "RingElem":
        return cls(family, {(): _as_rat(value)})

    @classmethod
    def one(cls, family: GenFamily) -> "RingElem":
        return cls.const(family, 1)

    @classmethod
    def gen(cls, family: GenFamily, k: int, exponent: int = 1) -> "RingElem":
        if k < 1:
            raise ValueError("generator index must be >= 1")
        if exponent == 0:
            return cls.one(family)
        return cls(family, {((k, exponent),): Fraction(1)})

    # -- basic queries -----------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def constant_part(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def weight(self):
        """Common grading weight of all monomials, or INHOMOGENEOUS.

        The zero element has every weight; asking for one is an error.
        """
        if not self.terms:
            raise ValueError("the zero element has no well-defined weight")
        weights = {2 * sum(k * e for k, e in mono) for mono in self.terms}
        if len(weights) == 1:
            return weights.pop()
        return INHOMOGENEOUS

    def is_homogeneous(self, expected: int | None = None) -> bool:
        if not self.terms:
            return True
        w = self.weight()
        if w is INHOMOGENEOUS:
            return False
        return expected is None or w == expected

    # -- arithmetic ---------------------------------------------------

    def _check_family(self, other: "RingElem"):
        if self.family is not other.family:
            raise FamilyError(
                f"cannot combine {self.family.value} with {other.family.value}"
            )

    def _coerce(self, other) -> "RingElem | None":
        if isinstance(other, RingElem):
            self._check_family(other)
            return other
        if isinstance(other, (int, Fraction)):
            return RingElem.const(self.family, other)
        return None

    def __add__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        terms = dict(self.terms)
        for mono, coeff in rhs.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
        return RingElem(self.family, terms)

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.family, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        self._check_family(other)
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                terms[mono] = terms.get(mono, Fraction(0)) + c1 * c2
        return RingElem(self.family, terms)

    __rmul__ = __mul__

    def scale(self, value) -> "RingElem":
        value = _as_rat(value)
        return RingElem(self.family, {m: c * value for m, c in self.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1, 1) / other)
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = RingElem.one(self.family)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RingElem.const(self.family, other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.family is other.family and self.terms == other.terms

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.family, tuple(sorted(self.terms.items()))))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"RingElem({self.family.value}, {self.text()})"

    # -- family changes and evaluation --------------------------------

    def substitute(self, target: GenFamily, images: Mapping[int, "RingElem"]) -> "RingElem":
        """Ring homomorphism sending generator k to images[k].

        Every generator occurring in ``self`` must have an image, and
        all images must live in ``target``.
        """
        for img in images.values():
            if img.family is not target:
                raise FamilyError("substitution images must live in the target family")
        result = RingElem.zero(target)
        for mono, coeff in self.terms.items():
            prod = RingElem.const(target, coeff)
            for k, e in mono:
                if k not in images:
                    raise KeyError(f"no image for generator index {k}")
                prod = prod * images[k] ** e
            result = result + prod
        return result

    def eval_numeric(self, q: Fraction, n_terms: int) -> Fraction:
        """Exact rational value with generators replaced by partial sums.

        Only the q families evaluate; pi_sq is transcendental.
        """
        if self.family is GenFamily.PI_SQ:
            raise FamilyError("pi_sq elements have no rational evaluation")
        q = _as_rat(q)
        if not (0 < q < 1):
            raise ValueError("q must lie in (0, 1)")
        trunc = qzeta_trunc if self.family is GenFamily.Q_ZETA else qzeta_odd_trunc
        needed = sorted({k for mono in self.terms for k, _ in mono})
        values = {k: trunc(k, q, n_terms) for k in needed}
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            term = coeff
            for k, e in mono:
                term *= values[k] ** e
            total += term
        return total

    # -- rendering and serialization ----------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items())

    def text(self) -> str:
        if not self.terms:
            return "0"
        names = _GEN_TEXT[self.family]
        parts = []
        for mono, coeff in self.sorted_terms():
            factors = [names(k, e) for k, e in mono]
            if not factors:
                parts.append(rat_str(coeff))
            elif coeff == 1:
                parts.append("*".join(factors))
            elif coeff == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append("*".join([rat_str(coeff)] + factors))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def to_json_obj(self) -> dict:
        return {
            "family": self.family.value,
            "terms": [
                {
                    "exponents": {str(k): e for k, e in mono},
                    "coeff": rat_str(coeff),
                }
                for mono, coeff in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "RingElem":
        family = GenFamily(obj["family"])
        terms: dict[Monomial, Fraction] = {}
        for entry in obj["terms"]:
            mono = tuple(sorted((int(k), int(e)) for k, e in entry["exponents"].items()))
            coeff = rat_parse(entry["coeff"])
            if mono in terms:
                raise ValueError("duplicate monomial in serialized element")
            terms[mono] = coeff
        return cls(family, terms)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    exps: dict[int, int] = {}
    for k, e in m1:
        exps[k] = exps.get(k, 0) + e
    for k, e in m2:
        exps[k] = exps.get(k, 0) + e
    return tuple(sorted(exps.items()))


def _powered(base: str, e: int) -> str:
    return base + (f"^{e}" if e > 1 else "")


_GEN_TEXT = {
    GenFamily.Q_ZETA: lambda k, e: _powered(f"zeta_q({2 * k})", e),
    GenFamily.Q_ZETA_ODD: lambda k, e: _powered(f"zeta_q_odd({2 * k})", e),
    GenFamily.PI_SQ: lambda k, e: f"pi^{2 * e}",
}


# -- Bernoulli numbers and even zeta values ---------------------------

_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(n: int) -> Fraction:
    """B_n in the convention with B_1 = -1/2.

    Computed from  sum_{k=0}^{n} C(n+1, k) B_k = 0.
    """
    if n < 0:
        raise ValueError("Bernoulli index must be >= 0")
    with _bernoulli_lock:
        while len(_bernoulli_cache) <= n:
            m = len(_bernoulli_cache)
            acc = Fraction(0)
            for k in range(m):
                acc += comb(m + 1, k) * _bernoulli_cache[k]
            _bernoulli_cache.append(-acc / (m + 1))
        return _bernoulli_cache[n]


def zeta_even(k: int) -> RingElem:
    """zeta(2k) as a rational multiple of (pi^2)^k in the pi_sq ring."""
    if k < 1:
        raise ValueError("zeta_even needs k >= 1")
    coeff = (
        Fraction((-1) ** (k + 1))
        * bernoulli(2 * k)
        * Fraction(2) ** (2 * k)
        / (2 * factorial(2 * k))
    )
    return RingElem(GenFamily.PI_SQ, {((1, k),): coeff})


def zeta_odd_even(k: int) -> RingElem:
    """sum over odd m of 1/m^{2k}, i.e. (1 - 4^{-k}) zeta(2k), in pi_sq."""
    if k < 1:
        raise ValueError("zeta_odd_even needs k >= 1")
    return zeta_even(k).scale(1 - Fraction(1, 4**k))


# -- truncated generator series ---------------------------------------

def qzeta_trunc(k: int, q: Fraction, n_terms: int) -> Fraction:
    """Partial sum of zeta_q(2k): m = 1..n_terms of q^{mk}/(1-q^m)^{2k}."""
    return _qzeta_partial(k, q, n_terms, step=1)


def qzeta_odd_trunc(k: int, q: Fraction, n_terms: int) -> Fraction:
    """Partial sum of zetahat_q(2k) over odd m = 1, 3, ... <= n_terms."""
    return _qzeta_partial(k, q, n_terms, step=2)


def _qzeta_partial(k: int, q: Fraction, n_terms: int, step: int) -> Fraction:
    if k < 1:
        raise ValueError("series index must be >= 1")
    q = _as_rat(q)
    if not (0 < q < 1):
        raise ValueError("q must lie in (0, 1)")
    if n_terms < 0:
        raise ValueError("n_terms must be >= 0")
    total = Fraction(0)
    for m in range(1, n_terms + 1, step):
        qm = q**m
        total += qm**k / (1 - qm) ** (2 * k)
    return total
