"""Classical volume polynomials via the length-one boundary recursion.

V_{g,n}(L_1, ..., L_n) is a polynomial in the squared boundary lengths
with coefficients in the flavor's ring.  The engine assembles

    L_1 V_{g,n} =   sum_{j>=2}  [pair term with leg j]
                  + 1/2 [ splitting term over V_{g-1,n+1}
                          and ordered stable splittings g_1+g_2 = g,
                          I disjoint-union J = {2..n} ]

using the kernel moments from :mod:`qwp.kernels`, then divides by L_1;
the assembled right side is odd in L_1, so division is exact and any
even monomial aborts the run.  Base cases are V_{0,3} = 1 and the
one-boundary polynomial from ``v11_poly``; splitting factors at (0,1)
and (0,2) vanish and are skipped a priori.

Grading: with boundary lengths given degree 1 and zeta-like generators
their ring weight, V_{g,n} is homogeneous of weight 6g - 6 + 2n, and it
is symmetric under permuting the boundary lengths.  Both are checked by
the test-suite, not recomputed by the engine.

The memo table is guarded by a re-entrant lock: concurrent callers of
``volume`` serialize, so each key is computed exactly once and results
are deterministic.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Callable, Mapping

from .kernels import Flavor, d_integral, r_integral, v11_poly
from .rings import INHOMOGENEOUS, GenFamily, RingElem, zeta_even, zeta_odd_even


class UnstableInputError(ValueError):
    """Requested a volume for a surface with no stable hyperbolic structure."""


class InexactDivisionError(ArithmeticError):
    """Assembled recursion right side was not divisible by L_1."""


class LevelCycleError(RuntimeError):
    """Recursion requested a level not strictly below its caller's."""


def classical_weight(g: int, n: int) -> int:
    return 6 * g - 6 + 2 * n


class VolumePoly:
    """Polynomial in L_1^2, ..., L_n^2 with RingElem coefficients.

    ``terms`` maps exponent vectors (a_1, ..., a_n) of the squared
    lengths to nonzero coefficients.  Instances are immutable.
    """

    __slots__ = ("family", "n", "terms")

    def __init__(self, family: GenFamily, n: int, terms: Mapping[tuple, RingElem]):
        if n < 1:
            raise ValueError("need at least one boundary variable")
        clean: dict[tuple[int, ...], RingElem] = {}
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps!r} for n={n}")
            if isinstance(coeff, (int, Fraction)):
                coeff = RingElem.const(family, coeff)
            if coeff.family is not family:
                raise ValueError("coefficient family mismatch")
            if not coeff.is_zero():
                clean[exps] = coeff
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("VolumePoly is immutable")

    @classmethod
    def zero(cls, family: GenFamily, n: int) -> "VolumePoly":
        return cls(family, n, {})

    @classmethod
    def const(cls, family: GenFamily, n: int, value) -> "VolumePoly":
        return cls(family, n, {(0,) * n: value})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, VolumePoly):
            return NotImplemented
        return (
            self.family is other.family
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.family, self.n, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return f"VolumePoly(n={self.n}, 0)"
        bits = []
        for exps, coeff in self.sorted_terms():
            mono = "*".join(f"L{i+1}^{2*e}" for i, e in enumerate(exps) if e)
            bits.append(f"({coeff.text()})" + (f"*{mono}" if mono else ""))
        return f"VolumePoly(n={self.n}, " + " + ".join(bits) + ")"

    def sorted_terms(self) -> list:
        return sorted(self.terms.items())

    def __add__(self, other: "VolumePoly") -> "VolumePoly":
        if not isinstance(other, VolumePoly):
            return NotImplemented
        if other.n != self.n or other.family is not self.family:
            raise ValueError("shape mismatch")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return VolumePoly(self.family, self.n, terms)

    def scale(self, value) -> "VolumePoly":
        return VolumePoly(
            self.family, self.n, {e: c.scale(value) for e, c in self.terms.items()}
        )

    def map_coeffs(self, fn: Callable[[RingElem], RingElem], family: GenFamily | None = None) -> "VolumePoly":
        return VolumePoly(family or self.family, self.n, {e: fn(c) for e, c in self.terms.items()})

    # -- structural checks --------------------------------------------

    def is_symmetric(self) -> bool:
        """Invariance under permuting the boundary variables.

        Checked on adjacent transpositions, which generate the full
        symmetric group.
        """
        for exps, coeff in self.terms.items():
            for i in range(self.n - 1):
                swapped = list(exps)
                swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
                if self.terms.get(tuple(swapped)) != coeff:
                    return False
        return True

    def weight(self):
        """Common total weight 2*sum(a_i) + coeff weight, or INHOMOGENEOUS."""
        if not self.terms:
            raise ValueError("the zero polynomial has no well-defined weight")
        seen = set()
        for exps, coeff in self.terms.items():
            w = coeff.weight()
            if w is INHOMOGENEOUS:
                return INHOMOGENEOUS
            seen.add(2 * sum(exps) + w)
            if len(seen) > 1:
                return INHOMOGENEOUS
        return seen.pop()

    def is_homogeneous(self, expected: int | None = None) -> bool:
        if not self.terms:
            return True
        w = self.weight()
        if w is INHOMOGENEOUS:
            return False
        return expected is None or w == expected

    # -- serialization (terms level; document wrappers live in render) --

    def terms_json(self) -> list:
        return [
            {"L_exponents": list(exps), "coeff": coeff.to_json_obj()}
            for exps, coeff in self.sorted_terms()
        ]

    @classmethod
    def from_terms_json(cls, family: GenFamily, n: int, entries: list) -> "VolumePoly":
        terms: dict[tuple, RingElem] = {}
        for entry in entries:
            exps = tuple(int(e) for e in entry["L_exponents"])
            if exps in terms:
                raise ValueError("duplicate exponent vector in serialized polynomial")
            terms[exps] = RingElem.from_json_obj(entry["coeff"])
        return cls(family, n, terms)


def check_symmetry(v: VolumePoly) -> bool:
    return v.is_symmetric()


def check_homogeneity(v: VolumePoly, expected: int | None = None) -> bool:
    return v.is_homogeneous(expected)


# -- the recursion engine ----------------------------------------------

_MEMO: dict[tuple[Flavor, int, int], VolumePoly] = {}
_LOCK = threading.RLock()
_HALF = Fraction(1, 2)


def volume(flavor: Flavor, g: int, n: int) -> VolumePoly:
    """V_{g,n} for a classical flavor; requires 2g - 2 + n >= 1."""
    if flavor.is_super:
        raise ValueError("super flavors are handled by super_volume")
    if g < 0 or n < 1:
        raise UnstableInputError(f"no volume for (g, n) = ({g}, {n})")
    if 2 * g - 2 + n < 1:
        raise UnstableInputError(
            f"(g, n) = ({g}, {n}) is unstable; classical volumes need 2g-2+n >= 1"
        )
    with _LOCK:
        return _vol(flavor, g, n, None)


def _vol(flavor: Flavor, g: int, n: int, caller_level: int | None) -> VolumePoly:
    if (g, n) in ((0, 1), (0, 2)):
        # vanishing splitting factors; reachable only from the guards below
        return VolumePoly.zero(flavor.family, n)
    level = 2 * g - 2 + n
    if caller_level is not None and level >= caller_level:
        raise LevelCycleError(
            f"level {level} requested while assembling level {caller_level}"
        )
    key = (flavor, g, n)
    hit = _MEMO.get(key)
    if hit is not None:
        return hit
    if (g, n) == (0, 3):
        result = VolumePoly.const(flavor.family, 3, 1)
    elif (g, n) == (1, 1):
        result = VolumePoly(
            flavor.family, 1, {(e // 2,): c for e, c in v11_poly(flavor).coeffs.items()}
        )
    else:
        result = _assemble(flavor, g, n, level)
    _MEMO[key] = result
    return result


def _assemble(flavor: Flavor, g: int, n: int, level: int) -> VolumePoly:
    family = flavor.family
    raw: dict[tuple[int, ...], RingElem] = {}

    def accumulate(key: tuple, value: RingElem):
        raw[key] = raw[key] + value if key in raw else value

    # pair terms, one per boundary label j = 2..n (position pj = j-1)
    if n >= 2:
        sub = _vol(flavor, g, n - 1, level)
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
    if g >= 1:
        sub = _vol(flavor, g - 1, n + 1, level)
        for exps, coeff in sub.terms.items():
            half_coeff = coeff.scale(_HALF)
            for e1, dc in d_integral(flavor, exps[0], exps[1]).coeffs.items():
                accumulate((e1,) + exps[2:], half_coeff * dc)

    # splitting term, ordered stable splittings
    legs = list(range(1, n))
    for mask in range(1 << len(legs)):
        I = [legs[i] for i in range(len(legs)) if mask >> i & 1]
        J = [p for p in legs if p not in I]
        n1, n2 = len(I) + 1, len(J) + 1
        for g1 in range(g + 1):
            g2 = g - g1
            if (g1, n1) in ((0, 1), (0, 2)) or (g2, n2) in ((0, 1), (0, 2)):
                continue
            left = _vol(flavor, g1, n1, level)
            right = _vol(flavor, g2, n2, level)
            for aexps, ac in left.terms.items():
                for bexps, bc in right.terms.items():
                    half_coeff = (ac * bc).scale(_HALF)
                    tail = [0] * (n - 1)
                    for pos, a in zip(I, aexps[1:]):
                        tail[pos - 1] = a
                    for pos, b in zip(J, bexps[1:]):
                        tail[pos - 1] = b
                    dint = d_integral(flavor, aexps[0], bexps[0])
                    for e1, dc in dint.coeffs.items():
                        accumulate((e1, *tail), half_coeff * dc)

    return _divide_by_l1(family, n, raw)


def _divide_by_l1(family: GenFamily, n: int, raw: Mapping[tuple, RingElem]) -> VolumePoly:
    terms: dict[tuple, RingElem] = {}
    for key, coeff in raw.items():
        if coeff.is_zero():
            continue
        if key[0] % 2 == 0:
            raise InexactDivisionError(
                f"assembled term with even L_1 exponent {key[0]} survives division"
            )
        terms[((key[0] - 1) // 2, *key[1:])] = coeff
    return VolumePoly(family, n, terms)


# -- generator-wise classical limit --------------------------------------

def classical_limit(v: VolumePoly) -> VolumePoly:
    """Send each q-zeta generator to its classical value.

    Realizes the q -> 1 limit after rescaling by (1-q)^weight, which is
    exact on a homogeneous polynomial; inhomogeneous input is rejected.
    Works for both q families (odd generators go to the odd zeta
    values), landing in the pi^2 ring.
    """
    if v.family is GenFamily.PI_SQ:
        raise ValueError("already a classical-limit polynomial")
    if not v.is_homogeneous():
        raise ValueError("classical limit needs a homogeneous polynomial")
    imager = zeta_even if v.family is GenFamily.Q_ZETA else zeta_odd_even
    indices = sorted({k for c in v.terms.values() for mono in c.terms for k, _ in mono})
    images = {k: imager(k) for k in indices}
    return v.map_coeffs(
        lambda c: c.substitute(GenFamily.PI_SQ, images), GenFamily.PI_SQ
    )
